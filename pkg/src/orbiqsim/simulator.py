"""Dense statevector engine and exact-operator oracles.

Amplitude convention: qubit q is bit q of the array index (qubit 0 least
significant), matching the boson registers of the encoding layer.  Dense
Hamiltonians are guarded to 14 qubits and statevectors to 24.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .encoding import DigitizationConfig, kinetic_matrix
from .hamiltonian import PolyHamiltonian, QuadraticXPOperator

STATEVECTOR_QUBIT_GUARD = 24
DENSE_QUBIT_GUARD = 14

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def zero_state(n_qubits: int) -> np.ndarray:
    if n_qubits > STATEVECTOR_QUBIT_GUARD:
        raise ValueError(f"statevector guarded to {STATEVECTOR_QUBIT_GUARD} qubits")
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def uniform_state(n_qubits: int) -> np.ndarray:
    if n_qubits > STATEVECTOR_QUBIT_GUARD:
        raise ValueError(f"statevector guarded to {STATEVECTOR_QUBIT_GUARD} qubits")
    dim = 2**n_qubits
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


def _masks(n: int, q: int):
    idx = np.arange(2**n)
    m0 = idx[(idx >> q) & 1 == 0]
    return m0, m0 | (1 << q)


def apply_gate(psi: np.ndarray, gate, n_qubits: int) -> np.ndarray:
    """Apply one gate in place (psi may be 1-D or 2-D with columns as states)."""
    kind = gate.kind
    if kind == "gphase":
        psi *= np.exp(1j * gate.angle)
        return psi
    if kind == "cnot":
        c, t = gate.qubits
        idx = np.arange(2**n_qubits)
        on = idx[((idx >> c) & 1 == 1) & ((idx >> t) & 1 == 0)]
        flip = on | (1 << t)
        psi[on], psi[flip] = psi[flip].copy(), psi[on].copy()
        return psi
    (q,) = gate.qubits
    m0, m1 = _masks(n_qubits, q)
    if kind == "h":
        a = psi[m0].copy()
        b = psi[m1]
        psi[m0] = (a + b) * _SQRT1_2
        psi[m1] = (a - b) * _SQRT1_2
    elif kind == "rz":
        psi[m0] *= np.exp(-0.5j * gate.angle)
        psi[m1] *= np.exp(0.5j * gate.angle)
    elif kind == "s":
        psi[m1] *= 1j
    elif kind == "sdg":
        psi[m1] *= -1j
    elif kind == "t":
        psi[m1] *= np.exp(0.25j * np.pi)
    elif kind == "tdg":
        psi[m1] *= np.exp(-0.25j * np.pi)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return psi


def apply_circuit(psi: np.ndarray, circ: Circuit) -> np.ndarray:
    """Return circ applied to psi (copy); widths must match."""
    if psi.shape[0] != 2**circ.n_qubits:
        raise ValueError("state width does not match circuit width")
    out = np.array(psi, dtype=complex, copy=True)
    for g in circ.gates:
        apply_gate(out, g, circ.n_qubits)
    return out


def apply_circuit_to_array(arr: np.ndarray, circ: Circuit) -> np.ndarray:
    """Apply the circuit to every column of arr (used for unitary assembly)."""
    out = np.array(arr, dtype=complex, copy=True)
    for g in circ.gates:
        apply_gate(out, g, circ.n_qubits)
    return out


# --- dense operator assembly --------------------------------------------------


def embed_boson_operator(op: np.ndarray, boson: int, n_bosons: int, levels: int) -> np.ndarray:
    """kron(I_high, op, I_low) with boson 0 on the least significant digits."""
    dim_low = levels**boson
    dim_high = levels ** (n_bosons - boson - 1)
    return np.kron(np.kron(np.eye(dim_high), op), np.eye(dim_low))


def apply_boson_operator(psi: np.ndarray, op: np.ndarray, boson: int,
                         n_bosons: int, levels: int) -> np.ndarray:
    """Apply a per-boson matrix to a statevector without forming the embedding."""
    dim_low = levels**boson
    dim_high = levels ** (n_bosons - boson - 1)
    work = psi.reshape(dim_high, levels, dim_low)
    return np.einsum("ab,xby->xay", op, work).reshape(psi.shape)


def dense_hamiltonian(h: PolyHamiltonian, cfg: DigitizationConfig) -> np.ndarray:
    """Tensor-product assembly of the digitized Hamiltonian (guard 14 qubits).

    The potential is exactly diagonal on the coordinate grid; the kinetic term
    embeds the per-boson dense p^2 of the configured convention.
    """
    Q = cfg.qubits_per_boson
    n_qubits = h.n_bosons * Q
    if n_qubits > DENSE_QUBIT_GUARD:
        raise ValueError(f"dense Hamiltonian guarded to {DENSE_QUBIT_GUARD} qubits")
    dim = 2**n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(out, h.potential_on_grid(cfg).astype(complex))
    p2 = kinetic_matrix(cfg).astype(complex)
    for b in range(h.n_bosons):
        out += h.kinetic_prefactor * embed_boson_operator(p2, b, h.n_bosons, cfg.levels)
    return out


def dense_from_encoded(enc, cfg: DigitizationConfig) -> np.ndarray:
    """Reconstruct the dense Hamiltonian from an EncodedHamiltonian.

    The Z-only potential is evaluated directly on the diagonal; the kinetic
    spec is reconstructed per boson and conjugated back to the coordinate
    basis when it is momentum-register data.
    """
    from .encoding import modified_dft

    n_qubits = enc.n_qubits
    if n_qubits > DENSE_QUBIT_GUARD:
        raise ValueError(f"dense reconstruction guarded to {DENSE_QUBIT_GUARD} qubits")
    dim = 2**n_qubits
    diag = encoded_potential_diagonal(enc)
    out = np.diag(diag.astype(complex))
    Q = enc.kinetic.cfg.qubits_per_boson
    local = enc.kinetic.boson_local.to_matrix()
    if enc.kinetic.realization == "momentum_basis_qft":
        M = modified_dft(Q)
        local = M @ local @ M.conj().T
    for b in range(enc.kinetic.n_bosons):
        out += embed_boson_operator(local, b, enc.kinetic.n_bosons, 2**Q)
    return out


def encoded_potential_diagonal(enc) -> np.ndarray:
    """Diagonal of the encoded Z-only potential over the full register."""
    dim = 2**enc.n_qubits
    idx = np.arange(dim)
    diag = np.full(dim, enc.potential.constant_offset, dtype=float)
    zcache: dict = {}
    for key, c in enc.potential.terms.items():
        term = np.full(dim, c)
        for q, letter in key:
            if letter != "Z":
                raise ValueError("potential must be Z-only")
            if q not in zcache:
                zcache[q] = 1.0 - 2.0 * ((idx >> q) & 1)
            term = term * zcache[q]
        diag += term
    return diag


# --- exact evolution and Trotter-error measurements ----------------------------


@dataclass
class EigenEvolver:
    """Cached eigendecomposition for repeated exp(-iHt) applications."""

    eigvals: np.ndarray
    eigvecs: np.ndarray

    @classmethod
    def from_hamiltonian(cls, hmat: np.ndarray) -> "EigenEvolver":
        herm = np.abs(hmat - hmat.conj().T).max()
        if herm > 1e-10:
            raise ValueError(f"Hamiltonian not Hermitian (residue {herm:.2e})")
        vals, vecs = np.linalg.eigh(hmat)
        return cls(vals, vecs)

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        coeff = self.eigvecs.conj().T @ psi
        return self.eigvecs @ (np.exp(-1j * self.eigvals * t) * coeff)


def exact_evolution(hmat: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    """exp(-iHt) psi through the eigendecomposition (guard 2^14)."""
    if hmat.shape[0] > 2**DENSE_QUBIT_GUARD:
        raise ValueError("exact evolution guarded to 2^14 dimensions")
    return EigenEvolver.from_hamiltonian(hmat).evolve(psi, t)


def trotter_error(h: PolyHamiltonian, cfg: DigitizationConfig, t: float,
                  n_steps, reference: np.ndarray | None = None,
                  operator_norm: bool = False) -> dict:
    """State error ||U_step^n psi0 - e^{-iHt} psi0|| for each n in n_steps.

    psi0 defaults to the uniform superposition.  With operator_norm=True the
    spectral-norm error of the full unitary is measured as well (<= 10 qubits).
    """
    from .compiler import trotter_step
    from .hamiltonian import pauli_encode

    if np.isscalar(n_steps):
        n_steps = [n_steps]
    n_qubits = h.n_bosons * cfg.qubits_per_boson
    hmat = dense_hamiltonian(h, cfg)
    evolver = EigenEvolver.from_hamiltonian(hmat)
    psi0 = uniform_state(n_qubits) if reference is None else reference
    target = evolver.evolve(psi0, t)
    enc = pauli_encode(h, cfg)
    out = {"n_steps": list(n_steps), "state_error": [], "operator_error": []}
    for n in n_steps:
        step = trotter_step(enc, cfg, t / n)
        psi = psi0
        for _ in range(n):
            psi = apply_circuit(psi, step)
        out["state_error"].append(float(np.linalg.norm(psi - target)))
        if operator_norm:
            if n_qubits > 10:
                raise ValueError("operator-norm error guarded to 10 qubits")
            from .circuit import unitary

            u_step = unitary(step)
            u_tot = np.linalg.matrix_power(u_step, n)
            u_exact = (evolver.eigvecs
                       * np.exp(-1j * evolver.eigvals * t)) @ evolver.eigvecs.conj().T
            out["operator_error"].append(float(np.linalg.norm(u_tot - u_exact, ord=2)))
    if not operator_norm:
        out.pop("operator_error")
    return out


# --- Gauss-law observables ------------------------------------------------------


def xp_expectation(psi: np.ndarray, gen: QuadraticXPOperator, cfg: DigitizationConfig,
                   n_bosons: int) -> float:
    """<psi| G |psi> for a Hermitian x-p bilinear, via per-boson matrix action."""
    from .encoding import momentum_matrix

    levels = cfg.levels
    xdiag = cfg.position_grid()
    pmat = momentum_matrix(cfg)
    total = complex(gen.constant) * np.vdot(psi, psi)
    for coeff, xb, pb in gen.terms:
        phi = apply_boson_operator(psi, pmat, pb, n_bosons, levels)
        dim_low = levels**xb
        dim_high = levels ** (n_bosons - xb - 1)
        phi = (phi.reshape(dim_high, levels, dim_low)
               * xdiag[None, :, None]).reshape(phi.shape)
        total += coeff * np.vdot(psi, phi)
    if abs(total.imag) > 1e-8 * max(1.0, abs(total.real)):
        raise ValueError(f"expectation of Hermitian generator came out complex: {total}")
    return float(total.real)


def displaced_reference(cfg: DigitizationConfig, n_bosons: int,
                        center_fraction: float = 0.3,
                        width_fraction: float = 0.35) -> np.ndarray:
    """Product of identical displaced Gaussians, exp(-(x - x0)^2 / 2 sigma^2).

    Deterministic and real; the displacement breaks the per-boson x -> -x
    symmetry (the uniform state is protected by adjoint sign flips for small
    gauge groups, which makes every Gauss expectation vanish identically).
    """
    grid = cfg.position_grid()
    x0 = center_fraction * cfg.half_width
    sigma = width_fraction * cfg.half_width
    one = np.exp(-((grid - x0) ** 2) / (2.0 * sigma**2))
    one /= np.linalg.norm(one)
    psi = one.astype(complex)
    for _ in range(n_bosons - 1):
        psi = np.kron(one, psi)
    return psi


def gauss_drift(h: PolyHamiltonian, generators, cfg: DigitizationConfig, t: float,
                n_steps: int, reference: np.ndarray | None = None,
                compare_exact: bool | None = None) -> dict:
    """Per-generator |<G>(k dt) - <G>(0)| under the Trotterized evolution.

    When the register fits the dense guard (or compare_exact=True), the same
    drift under the exact truncated evolution is measured too, along with the
    Trotter-induced deviation |<G>_trot(t_k) - <G>_exact(t_k)|; truncation
    moves <G> even under exact evolution, so the Trotterization quality is the
    deviation, not the raw drift.
    """
    from .compiler import trotter_step
    from .hamiltonian import pauli_encode

    n_qubits = h.n_bosons * cfg.qubits_per_boson
    psi = uniform_state(n_qubits) if reference is None else np.array(reference, copy=True)
    if compare_exact is None:
        compare_exact = n_qubits <= 12
    enc = pauli_encode(h, cfg)
    step = trotter_step(enc, cfg, t / n_steps)
    base = [xp_expectation(psi, g, cfg, h.n_bosons) for g in generators]
    drift = np.zeros((len(generators), n_steps + 1))
    deviation = np.zeros_like(drift)
    exact_drift = np.zeros_like(drift)
    evolver = None
    if compare_exact:
        evolver = EigenEvolver.from_hamiltonian(dense_hamiltonian(h, cfg))
    times = [k * t / n_steps for k in range(n_steps + 1)]
    state = psi
    for k in range(1, n_steps + 1):
        state = apply_circuit(state, step)
        vals = [xp_expectation(state, g, cfg, h.n_bosons) for g in generators]
        for i in range(len(generators)):
            drift[i, k] = abs(vals[i] - base[i])
        if compare_exact:
            ref = evolver.evolve(psi, times[k])
            for i, g in enumerate(generators):
                ev = xp_expectation(ref, g, cfg, h.n_bosons)
                exact_drift[i, k] = abs(ev - base[i])
                deviation[i, k] = abs(vals[i] - ev)
    out = {"times": times, "drift": drift}
    if compare_exact:
        out["exact_drift"] = exact_drift
        out["trotter_deviation"] = deviation
    return out


# --- product-operator Frobenius machinery ---------------------------------------
#
# Operators are represented as sums of per-boson tensor factors,
#   A = sum_k c_k  (x)_b  M_{k,b},
# with M given only for the bosons a term touches.  Frobenius inner products
# then factorize into per-boson traces, which keeps ||[H, G]||_F exact and
# cheap far beyond the dense-matrix guard (18+ qubits).


def _term_product(t1, t2, levels: int):
    c1, m1 = t1
    c2, m2 = t2
    out = dict(m1)
    for b, mat in m2.items():
        out[b] = out[b] @ mat if b in out else mat
    return (c1 * c2, out)


def _frobenius_gram(terms_a, terms_b, levels: int, dim_count: int) -> complex:
    """sum_{s,t} conj(c_s) c_t prod_b Tr(A_sb^dag B_tb), identity bosons -> Lambda."""
    total = 0.0 + 0.0j
    for (ca, ma) in terms_a:
        for (cb, mb) in terms_b:
            prod = np.conj(ca) * cb
            untouched = dim_count
            for b in set(ma) | set(mb):
                untouched -= 1
                A = ma.get(b)
                B = mb.get(b)
                if A is None:
                    prod *= np.trace(B)
                elif B is None:
                    prod *= np.trace(A.conj().T)
                else:
                    prod *= np.trace(A.conj().T @ B)
            total += prod * levels**untouched
    return total


def product_terms_hamiltonian(h: PolyHamiltonian, cfg: DigitizationConfig) -> list:
    """H as [(coeff, {boson: small matrix})] for the Frobenius machinery."""
    xdiag = np.diag(cfg.position_grid().astype(complex))
    p2 = kinetic_matrix(cfg).astype(complex)
    terms = [(h.kinetic_prefactor, {b: p2}) for b in range(h.n_bosons)]
    for key, coeff in h.potential.items():
        mats = {b: np.linalg.matrix_power(xdiag, p) for b, p in key}
        terms.append((coeff, mats))
    if h.constant:
        terms.append((h.constant, {}))
    return terms


def product_terms_generator(gen: QuadraticXPOperator, cfg: DigitizationConfig) -> list:
    from .encoding import momentum_matrix

    xdiag = np.diag(cfg.position_grid().astype(complex))
    pmat = momentum_matrix(cfg).astype(complex)
    terms = [(coeff, {xb: xdiag, pb: pmat}) for coeff, xb, pb in gen.terms]
    if gen.constant:
        terms.append((gen.constant, {}))
    return terms


def commutator_frobenius_ratio(terms_h, terms_g, levels: int, n_bosons: int) -> float:
    """||[H, G]||_F / (||H||_F ||G||_F), exact via per-boson trace factorization."""
    comm = []
    for th in terms_h:
        for tg in terms_g:
            c1, m1 = _term_product(th, tg, levels)
            c2, m2 = _term_product(tg, th, levels)
            comm.append((c1, m1))
            comm.append((-c2, m2))
    norm_comm = np.sqrt(abs(_frobenius_gram(comm, comm, levels, n_bosons)))
    norm_h = np.sqrt(abs(_frobenius_gram(terms_h, terms_h, levels, n_bosons)))
    norm_g = np.sqrt(abs(_frobenius_gram(terms_g, terms_g, levels, n_bosons)))
    return float(norm_comm / (norm_h * norm_g))
