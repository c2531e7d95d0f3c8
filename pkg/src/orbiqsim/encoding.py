"""Digitization of bosonic coordinates onto qubit registers.

Each boson lives on Q qubits; qubit 0 of the register is the least significant
binary digit of the grid index n, and the statevector amplitude index carries
qubit q in bit q.  Pauli-sum conventions:

  sigma_z = diag(1, -1),  so Z|b> = (-1)^b |b>.

Periodic grid (default): x(n) = (n - (Lambda-1)/2) * dx with dx = 2R/Lambda,
which is exactly the Pauli form  x_hat = -dx * sum_j 2^j Z_j / 2.  The open
grid uses dx = 2R/(Lambda-1) and the same centered form.

Momentum (linear_symmetric option): eigenvalues p = dp*(ntil + 1/2) with
dp = 2*pi/(dx*Lambda) = pi/R and ntil in [-Lambda/2, Lambda/2 - 1].  The
half-shifted transform |ntil> = sum_n exp(2 pi i (ntil+1/2)(n+1/2)/Lambda)
|n> / sqrt(Lambda) identifies register value m >= Lambda/2 with physical
ntil = m - Lambda (the two states agree up to a sign), so in register labels

  p_hat = -dp * (sum_{j<Q-1} 2^j Z_j - 2^{Q-1} Z_{Q-1}) / 2,

i.e. the binary-weight Z sum of the coordinate operator with the top-qubit
weight sign flipped.  This is fixed by the dense oracle tests, not by fiat.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

COEFF_DROP_TOL = 1e-12

PAULI_MATS = {
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


class UnsupportedConventionError(ValueError):
    """Raised when an operation does not exist for the requested convention."""


@dataclass(frozen=True)
class DigitizationConfig:
    """Per-boson truncation parameters.

    qubits_per_boson: Q, so Lambda = 2^Q grid points on [-R, R].
    boundary: 'periodic' (default, dx = 2R/Lambda) or 'open' (dx = 2R/(Lambda-1)).
    momentum_convention: 'sine' (exact diagonal data only) or 'linear_symmetric'
        (Pauli-expandable; required by the momentum-basis circuit path).
    kinetic_realization: 'momentum_basis_qft' or 'coordinate_basis_shift'.
    """

    qubits_per_boson: int
    half_width: float
    boundary: str = "periodic"
    momentum_convention: str = "linear_symmetric"
    kinetic_realization: str = "momentum_basis_qft"

    def __post_init__(self):
        if self.qubits_per_boson < 1:
            raise ValueError("qubits_per_boson must be >= 1")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.momentum_convention not in ("sine", "linear_symmetric"):
            raise ValueError(f"unknown momentum convention {self.momentum_convention!r}")
        if self.kinetic_realization not in ("momentum_basis_qft", "coordinate_basis_shift"):
            raise ValueError(f"unknown kinetic realization {self.kinetic_realization!r}")

    @property
    def levels(self) -> int:
        return 2**self.qubits_per_boson

    @property
    def dx(self) -> float:
        if self.boundary == "periodic":
            return 2.0 * self.half_width / self.levels
        return 2.0 * self.half_width / (self.levels - 1)

    @property
    def dp(self) -> float:
        # 2 pi / (dx * Lambda); equals pi/R for the periodic convention
        return 2.0 * np.pi / (self.dx * self.levels)

    def position_grid(self) -> np.ndarray:
        """x(n) for n = 0..Lambda-1 (centered, ascending)."""
        n = np.arange(self.levels, dtype=float)
        return (n - (self.levels - 1) / 2.0) * self.dx


@dataclass
class PauliSum:
    """Real-weighted sum of Pauli strings plus a separately tracked identity part.

    ``terms`` maps a string key to a real coefficient.  A key is a tuple of
    (qubit, letter) pairs sorted by qubit, letter in 'XYZ'.  Zero coefficients
    (|c| <= 1e-12) are dropped on cleanup.
    """

    n_qubits: int
    terms: dict = field(default_factory=dict)
    constant_offset: float = 0.0

    def add(self, key: tuple, coeff: float) -> None:
        if key == ():
            self.constant_offset += coeff
            return
        self.terms[key] = self.terms.get(key, 0.0) + coeff

    def cleanup(self, tol: float = COEFF_DROP_TOL) -> "PauliSum":
        self.terms = {k: v for k, v in self.terms.items() if abs(v) > tol}
        for (q, _p) in (pair for key in self.terms for pair in key):
            if q >= self.n_qubits:
                raise ValueError(f"qubit index {q} out of range for {self.n_qubits} qubits")
        return self

    def sorted_items(self) -> list:
        return sorted(self.terms.items())

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def weights(self) -> list:
        return sorted(len(k) for k in self.terms)

    def map_qubits(self, mapping) -> "PauliSum":
        """Relabel qubit indices through ``mapping`` (a callable)."""
        out = PauliSum(self.n_qubits, {}, self.constant_offset)
        for key, c in self.terms.items():
            new_key = tuple(sorted((mapping(q), p) for q, p in key))
            out.add(new_key, c)
        return out.cleanup()

    def to_matrix(self) -> np.ndarray:
        """Dense matrix (size guard 2^12) with qubit q on bit q of the index."""
        if self.n_qubits > 12:
            raise ValueError("dense reconstruction guarded to 12 qubits")
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for key, c in self.terms.items():
            mats = {q: PAULI_MATS[p] for q, p in key}
            term = np.array([[1.0 + 0j]])
            for q in range(self.n_qubits):
                term = np.kron(mats.get(q, np.eye(2, dtype=complex)), term)
            out += c * term
        out += self.constant_offset * np.eye(dim)
        return out


def _z_key(qubits) -> tuple:
    return tuple(sorted((q, "Z") for q in qubits))


def position_pauli(cfg: DigitizationConfig) -> PauliSum:
    """x_hat = -dx sum_j 2^j Z_j / 2 on qubits 0..Q-1 of one boson.

    The constant offset -R + dx(Lambda-1)/2 of the open grid vanishes for the
    dx conventions used here, so the offset is 0 for both boundaries; it is
    kept in the construction to keep the open-boundary bookkeeping visible.
    """
    Q = cfg.qubits_per_boson
    ps = PauliSum(Q)
    for j in range(Q):
        ps.add(_z_key([j]), -cfg.dx * 2**j / 2.0)
    if cfg.boundary == "open":
        ps.constant_offset = -cfg.half_width + cfg.dx * (cfg.levels - 1) / 2.0
    return ps.cleanup()


def number_operator_pauli(qubits_per_boson: int) -> PauliSum:
    """n_hat = (Lambda-1)/2 - sum_j 2^j Z_j / 2; reconstructs diag(0..Lambda-1)."""
    if qubits_per_boson < 1:
        raise ValueError("qubits_per_boson must be >= 1")
    Q = qubits_per_boson
    ps = PauliSum(Q)
    for j in range(Q):
        ps.add(_z_key([j]), -(2**j) / 2.0)
    ps.constant_offset = (2**Q - 1) / 2.0
    return ps.cleanup()


def momentum_eigenvalues(cfg: DigitizationConfig) -> np.ndarray:
    """Momentum eigenvalues for the chosen convention (periodic boundary only).

    sine: p(ntil) = (2/dx) sin(pi ntil / Lambda), listed for ntil = 0..Lambda-1.
    linear_symmetric: p = (pi/R)(ntil + 1/2), listed ascending for
    ntil = -Lambda/2 .. Lambda/2 - 1.
    """
    if cfg.boundary != "periodic":
        raise UnsupportedConventionError("momentum eigenvalues need the periodic boundary")
    L = cfg.levels
    if cfg.momentum_convention == "sine":
        ntil = np.arange(L)
        return (2.0 / cfg.dx) * np.sin(np.pi * ntil / L)
    ntil = np.arange(-L // 2, L // 2)
    return cfg.dp * (ntil + 0.5)


def momentum_grid_register_order(cfg: DigitizationConfig) -> np.ndarray:
    """linear_symmetric eigenvalues indexed by the momentum register value m.

    Register m holds physical ntil = m for m < Lambda/2 and ntil = m - Lambda
    otherwise (the half-shifted transform identifies the two up to a sign).
    """
    if cfg.momentum_convention != "linear_symmetric":
        raise UnsupportedConventionError("register-ordered grid is defined for linear_symmetric")
    L = cfg.levels
    m = np.arange(L)
    ntil = np.where(m < L // 2, m, m - L)
    return cfg.dp * (ntil + 0.5)


def momentum_pauli_linear(cfg: DigitizationConfig) -> PauliSum:
    """p_hat as a weight-1 Z sum in momentum-register labels (linear_symmetric).

    Mirrors position_pauli with step dp = pi/R except that the top-qubit weight
    carries the opposite sign; see the module docstring for why the register
    wrap forces this.
    """
    if cfg.momentum_convention != "linear_symmetric":
        raise UnsupportedConventionError(
            "sine momentum is not a linear Z sum; use linear_symmetric"
        )
    if cfg.boundary != "periodic":
        raise UnsupportedConventionError("momentum operators need the periodic boundary")
    Q = cfg.qubits_per_boson
    ps = PauliSum(Q)
    for j in range(Q):
        sign = 1.0 if j == Q - 1 else -1.0
        ps.add(_z_key([j]), sign * cfg.dp * 2**j / 2.0)
    return ps.cleanup()


def momentum_squared_zz(cfg: DigitizationConfig) -> PauliSum:
    """p_hat^2 expanded from the linear Z sum: ZZ cross terms plus a constant."""
    lin = momentum_pauli_linear(cfg)
    coeffs = {key[0][0]: c for key, c in lin.terms.items()}
    Q = cfg.qubits_per_boson
    ps = PauliSum(Q)
    ps.constant_offset = sum(c * c for c in coeffs.values())
    for j in range(Q):
        for k in range(j + 1, Q):
            ps.add(_z_key([j, k]), 2.0 * coeffs[j] * coeffs[k])
    return ps.cleanup()


def _carry_strings(q: int, wrap: bool) -> dict:
    """X/Y strings of (sigma-_0 ... sigma-_{q-2} sigma+/-_{q-1}) + h.c.

    wrap=False gives the open-chain carry term |n+1><n| (+h.c.) for the block
    where the lowest q bits flip; wrap=True gives the cyclic wrap term
    |0><Lambda-1| (+h.c.), i.e. sigma- on every qubit.  Returns a dict mapping
    string keys to real coefficients.
    """
    out: dict = {}
    # low factors are sigma- = (X + iY)/2; the last is sigma+ = (X - iY)/2
    # for the carry term and sigma- again for the wrap term.
    top = 1j if wrap else -1j
    for bits in range(2**q):
        coeff = 1.0 + 0.0j
        letters = []
        for pos in range(q):
            if (bits >> pos) & 1:
                letters.append("Y")
                coeff *= top if pos == q - 1 else 1j
            else:
                letters.append("X")
        if abs(coeff.imag) > 1e-14:
            continue  # cancels against the Hermitian conjugate
        key = tuple((pos, letters[pos]) for pos in range(q))
        out[key] = 2.0 * coeff.real / 2**q
    return out


def shift_operator_pauli(qubits_per_boson: int) -> PauliSum:
    """Open-chain symmetric shift sum_{n=0}^{Lambda-2} (|n+1><n| + |n><n+1|).

    For each q in 1..Q the block where the lowest q bits carry contributes
    exactly 2^{q-1} X/Y strings of length q with coefficients +-2^{1-q},
    matching the explicit Q = 1..4 decompositions (Q=1: X; Q=2: X(x)1 +
    (XX + YY)/2; ...).
    """
    Q = qubits_per_boson
    if not 1 <= Q <= 8:
        raise ValueError(f"qubits_per_boson {Q} outside guard range [1, 8]")
    ps = PauliSum(Q)
    for q in range(1, Q + 1):
        for key, c in _carry_strings(q, wrap=False).items():
            ps.add(key, c)
    return ps.cleanup()


def cyclic_shift_pauli(qubits_per_boson: int) -> PauliSum:
    """Exact decomposition of the periodic S + S^-1 (wrap term included).

    This is what the coordinate-basis kinetic compilation uses so that the
    compiled step targets the same periodic Laplacian as the dense oracle;
    the wrap merges into the length-Q block (e.g. Q=2: X(x)1 + XX).
    """
    Q = qubits_per_boson
    if not 1 <= Q <= 8:
        raise ValueError(f"qubits_per_boson {Q} outside guard range [1, 8]")
    ps = PauliSum(Q)
    for q in range(1, Q + 1):
        for key, c in _carry_strings(q, wrap=False).items():
            ps.add(key, c)
    for key, c in _carry_strings(Q, wrap=True).items():
        ps.add(key, c)
    return ps.cleanup()


def kinetic_coordinate_matrix(cfg: DigitizationConfig) -> np.ndarray:
    """p^2 as the periodic ring Laplacian (2*1 - S - S^-1)/dx^2, dense."""
    if cfg.boundary != "periodic":
        raise UnsupportedConventionError("the ring Laplacian needs the periodic boundary")
    L = cfg.levels
    m = 2.0 * np.eye(L)
    for n in range(L):
        m[(n + 1) % L, n] -= 1.0
        m[n, (n + 1) % L] -= 1.0
    return m / cfg.dx**2


def modified_dft(qubits_per_boson: int) -> np.ndarray:
    """Half-shifted DFT M[k, n] = exp(2 pi i (k+1/2)(n+1/2)/Lambda)/sqrt(Lambda)."""
    L = 2**qubits_per_boson
    k = np.arange(L)[:, None]
    n = np.arange(L)[None, :]
    return np.exp(2j * np.pi * (k + 0.5) * (n + 0.5) / L) / np.sqrt(L)


def momentum_matrix(cfg: DigitizationConfig) -> np.ndarray:
    """Dense p_hat in the coordinate basis (linear_symmetric convention)."""
    grid = momentum_grid_register_order(cfg)
    M = modified_dft(cfg.qubits_per_boson)
    return M @ np.diag(grid) @ M.conj().T


def kinetic_matrix(cfg: DigitizationConfig) -> np.ndarray:
    """Dense p_hat^2 in the coordinate basis for the configured conventions.

    linear_symmetric (momentum path) conjugates the register-diagonal p^2 with
    the half-shifted DFT; the sine convention and the coordinate-basis shift
    realization both give the ring Laplacian exactly.
    """
    if (cfg.kinetic_realization == "momentum_basis_qft"
            and cfg.momentum_convention == "linear_symmetric"):
        grid = momentum_grid_register_order(cfg)
        M = modified_dft(cfg.qubits_per_boson)
        return M @ np.diag(grid**2) @ M.conj().T
    return kinetic_coordinate_matrix(cfg)
