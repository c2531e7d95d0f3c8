"""orbiqsim: compile quartic-boson Hamiltonians to Trotter circuits and verify
every stage against exact dense oracles.

Pipeline: build (scalar lattice field / SU(N) matrix model / orbifold-lattice
Yang-Mills) -> digitize to Pauli form -> synthesize one first-order Trotter
step over {CNOT, RZ, Clifford} -> count resources -> cross-check against the
dense statevector simulator.
"""

from .encoding import (
    DigitizationConfig,
    PauliSum,
    kinetic_coordinate_matrix,
    modified_dft,
    momentum_eigenvalues,
    momentum_pauli_linear,
    number_operator_pauli,
    position_pauli,
    shift_operator_pauli,
)
from .hamiltonian import (
    BosonRegistry,
    EncodedHamiltonian,
    PolyHamiltonian,
    QuadraticXPOperator,
    build_anharmonic,
    build_matrix_model,
    build_orbifold_ym,
    build_scalar_qft,
    gauss_generators_mm,
    gauss_generators_orbifold,
    pauli_encode,
)
from .circuit import Circuit, Gate, count, from_text, lower_cphase, to_text, unitary
from .compiler import (
    compile_kinetic_step,
    compile_potential_step,
    pauli_gadget,
    pauli_z_gadget,
    qft_circuit,
    trotter_step,
)
from .resources import (
    ResourceReport,
    TCountModel,
    analytic_counts,
    estimate_circuit,
    quartic_vertex_count,
    scaling_fit,
)
from .simulator import (
    apply_circuit,
    dense_from_encoded,
    dense_hamiltonian,
    exact_evolution,
    gauss_drift,
    trotter_error,
    uniform_state,
)
from .sun import (
    GeneratorBasis,
    StructureConstants,
    build_generators,
    coupling_tensor,
    structure_constants,
)

__version__ = "0.1.0"
