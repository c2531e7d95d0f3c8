"""First-order Suzuki-Trotter synthesis over {CNOT, RZ, Clifford}.

The potential step compiles one Z gadget per Pauli string with CNOT-ladder
sharing between gadgets whose sorted qubit tuples share a prefix; diagonal
factors commute, so the optimized and unoptimized circuits are exactly equal.
The kinetic step either conjugates ZZ gadgets with the half-shifted QFT
(momentum path) or Trotterizes the X/Y strings of the periodic shift operator
(coordinate path, guarded to Q <= 4).
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate, cnot, gphase, h as h_gate, lower_cphase, rz, s, sdg
from .encoding import DigitizationConfig, PauliSum, UnsupportedConventionError
from .hamiltonian import EncodedHamiltonian


def pauli_z_gadget(qubits, theta: float, width: int) -> Circuit:
    """exp(-i theta Z...Z) on the given qubits: CNOT ladder, RZ(2 theta), mirror.

    2(w-1) CNOTs and one RZ; theta = 0 emits nothing.
    """
    circ = Circuit(width)
    qs = sorted(qubits)
    if not qs:
        raise ValueError("gadget needs at least one qubit")
    if theta == 0.0:
        return circ
    for a, b in zip(qs, qs[1:]):
        circ.append(cnot(a, b))
    circ.append(rz(qs[-1], 2.0 * theta))
    for a, b in zip(reversed(qs[:-1]), reversed(qs[1:])):
        circ.append(cnot(a, b))
    return circ


def pauli_gadget(string, theta: float, width: int) -> Circuit:
    """exp(-i theta P) for a general Pauli string via basis changes.

    X conjugates with H, Y with the h s layers (the extra sign of
    s-dag h Z h s = -Y flips theta once per Y).  ``string`` is an iterable of
    (qubit, letter) pairs.
    """
    pairs = sorted(string)
    if not pairs:
        raise ValueError("empty Pauli string")
    circ = Circuit(width)
    if theta == 0.0:
        return circ
    sign = 1.0
    pre: list = []
    post: list = []
    for q, letter in pairs:
        if letter == "Z":
            continue
        if letter == "X":
            pre.append(h_gate(q))
            post.append(h_gate(q))
        elif letter == "Y":
            pre.extend([s(q), h_gate(q)])
            post.extend([h_gate(q), sdg(q)])
            sign = -sign
        else:
            raise ValueError(f"unknown Pauli letter {letter!r}")
    circ.extend(pre)
    body = pauli_z_gadget([q for q, _ in pairs], sign * theta, width)
    circ.extend(body.gates)
    circ.extend(post)
    return circ


def _ladder_pairs(qs) -> list:
    return list(zip(qs, qs[1:]))


def compile_potential_step(potential: PauliSum, dt: float,
                           optimize: bool = True) -> Circuit:
    """exp(-i dt V) for a Z-only PauliSum, gadgets in canonical sorted order.

    With optimize=True, mirrored ladder CNOTs shared by consecutive gadgets
    with a common sorted-qubit prefix are elided (e.g. a run of g gadgets on a
    shared 3-qubit prefix costs 2g+4 CNOTs instead of 6g).  The constant
    offset is emitted as an explicit GlobalPhase.
    """
    width = potential.n_qubits
    circ = Circuit(width)
    if dt == 0.0:
        return circ
    items = [(tuple(q for q, _ in key), c) for key, c in potential.sorted_items()]
    for (q, letter) in (pair for key, _ in potential.sorted_items() for pair in key):
        if letter != "Z":
            raise ValueError("potential compilation requires a Z-only PauliSum")
    pending_unwind: list = []  # ladder pairs not yet mirrored back
    for qs, coeff in items:
        theta = dt * coeff
        pairs = _ladder_pairs(qs)
        if optimize:
            shared = 0
            while (shared < len(pending_unwind) and shared < len(pairs)
                   and pending_unwind[shared] == pairs[shared]):
                shared += 1
        else:
            shared = 0
        for a, b in reversed(pending_unwind[shared:]):
            circ.append(cnot(a, b))
        for a, b in pairs[shared:]:
            circ.append(cnot(a, b))
        circ.append(rz(qs[-1], 2.0 * theta))
        pending_unwind = pairs
    for a, b in reversed(pending_unwind):
        circ.append(cnot(a, b))
    if potential.constant_offset:
        circ.append(gphase(-dt * potential.constant_offset))
    circ.mark_segment("potential", 0)
    return circ


def qft_circuit(qubits_per_boson: int, approx_threshold: int | None = None,
                bit_reversed_output: bool = False, qubit_offset: int = 0,
                width: int | None = None, inverse: bool = False) -> Circuit:
    """Half-shifted QFT: RZ phase layers around the radix-2 H/CPhase network.

    The exact circuit matrix equals the modified DFT
    M[k, n] = exp(2 pi i (k+1/2)(n+1/2)/Lambda)/sqrt(Lambda).  With
    bit_reversed_output=True the trailing swap network (3 CNOTs per swap) is
    omitted and the matrix is the bit-reversal permutation times M; the
    kinetic compiler uses that variant and relabels its gadget qubits instead.
    approx_threshold k_max drops controlled phases with k > k_max.
    """
    Q = qubits_per_boson
    if Q < 1:
        raise ValueError("qubits_per_boson must be >= 1")
    width = width if width is not None else qubit_offset + Q
    L = 2**Q
    gates: list = []
    # input phase layer D = prod_j diag(1, e^{i pi 2^j / L})
    for j in range(Q):
        gates.append(rz(qubit_offset + j, np.pi * 2**j / L))
    # H / controlled-phase network, no swaps (output bit j on wire Q-1-j)
    for w in range(Q - 1, -1, -1):
        gates.append(h_gate(qubit_offset + w))
        for l in range(w - 1, -1, -1):
            k = w - l + 1
            if approx_threshold is not None and k > approx_threshold:
                continue
            gates.extend(lower_cphase(k, qubit_offset + l, qubit_offset + w))
    # output phase layer on reversed wires
    for w in range(Q):
        j = Q - 1 - w
        gates.append(rz(qubit_offset + w, np.pi * 2**j / L))
    # phase-layer RZ normalizations plus the (1/4) cross term of the half shift
    total_phase = np.pi / (2 * L) + 2 * sum(np.pi * 2**j / (2 * L) for j in range(Q))
    gates.append(gphase(total_phase))
    if not bit_reversed_output:
        for w in range(Q // 2):
            a, b = qubit_offset + w, qubit_offset + Q - 1 - w
            gates.extend([cnot(a, b), cnot(b, a), cnot(a, b)])
    if inverse:
        gates = [_dagger(g) for g in reversed(gates)]
    circ = Circuit(width)
    circ.extend(gates)
    circ.mark_segment("qft", 0)
    return circ


def _dagger(g: Gate) -> Gate:
    if g.kind in ("cnot", "h"):
        return g
    if g.kind in ("rz", "gphase"):
        return Gate(g.kind, g.qubits, -g.angle)
    inverse_kind = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}
    return Gate(inverse_kind[g.kind], g.qubits)


def compile_kinetic_step(enc_or_cfg, dt: float, n_bosons: int | None = None,
                         approx_threshold: int | None = None) -> Circuit:
    """exp(-i dt/2 sum_b p_b^2), per boson.

    Momentum path (linear_symmetric only): forward half-shifted QFT without
    swaps, ZZ gadgets with bit-reversed qubit labels, inverse QFT.  The swap
    omission and the relabeling compose to the exact kinetic factor because
    the p^2 register diagonal is symmetric under full index reversal.
    Coordinate path: first-order gadget product over the periodic-shift X/Y
    strings (guard Q <= 4).
    """
    from .hamiltonian import KineticSpec, pauli_encode

    if isinstance(enc_or_cfg, EncodedHamiltonian):
        spec = enc_or_cfg.kinetic
        if n_bosons is None:
            n_bosons = spec.n_bosons
    elif isinstance(enc_or_cfg, KineticSpec):
        spec = enc_or_cfg
        if n_bosons is None:
            n_bosons = spec.n_bosons
    else:
        if n_bosons is None:
            raise ValueError("n_bosons required when passing a bare config")
        cfg: DigitizationConfig = enc_or_cfg
        from .hamiltonian import BosonRegistry, PolyHamiltonian

        dummy = PolyHamiltonian(BosonRegistry(tuple(f"b{i}" for i in range(n_bosons))))
        spec = pauli_encode(dummy, cfg).kinetic
    cfg = spec.cfg
    Q = cfg.qubits_per_boson
    width = n_bosons * Q
    circ = Circuit(width)
    if dt == 0.0:
        return circ

    if spec.realization == "momentum_basis_qft":
        if cfg.momentum_convention != "linear_symmetric":
            raise UnsupportedConventionError(
                "momentum-basis compilation needs the linear_symmetric convention"
            )
        for b in range(n_bosons):
            off = b * Q
            start = len(circ.gates)
            fwd = qft_circuit(Q, approx_threshold, bit_reversed_output=True,
                              qubit_offset=off, width=width)
            circ.extend(fwd.gates)
            circ.mark_segment("qft", start)
            start = len(circ.gates)
            # gadget qubits bit-reversed inside the boson register
            local = spec.boson_local.map_qubits(lambda q: Q - 1 - q)
            for key, coeff in sorted(local.terms.items()):
                qs = [off + q for q, _ in key]
                circ.extend(pauli_z_gadget(qs, dt * coeff, width).gates)
            if local.constant_offset:
                circ.append(gphase(-dt * local.constant_offset))
            circ.mark_segment("kinetic", start)
            start = len(circ.gates)
            inv = qft_circuit(Q, approx_threshold, bit_reversed_output=True,
                              qubit_offset=off, width=width, inverse=True)
            circ.extend(inv.gates)
            circ.mark_segment("qft", start)
        return circ

    # coordinate-basis shift realization
    if Q > 4:
        raise ValueError("coordinate-basis shift path guarded to Q <= 4")
    start = len(circ.gates)
    for b in range(n_bosons):
        off = b * Q
        for key, coeff in sorted(spec.boson_local.terms.items()):
            shifted = [(off + q, letter) for q, letter in key]
            circ.extend(pauli_gadget(shifted, dt * coeff, width).gates)
        if spec.boson_local.constant_offset:
            circ.append(gphase(-dt * spec.boson_local.constant_offset))
    circ.mark_segment("kinetic", start)
    return circ


def trotter_step(enc: EncodedHamiltonian, cfg: DigitizationConfig, dt: float,
                 approx_threshold: int | None = None) -> Circuit:
    """One first-order step: kinetic factor followed by the potential factor."""
    kin = compile_kinetic_step(enc, dt, approx_threshold=approx_threshold)
    pot = compile_potential_step(enc.potential, dt)
    return kin.concatenated(pot)
