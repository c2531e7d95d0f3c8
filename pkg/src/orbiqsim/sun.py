"""SU(N) generator bases, structure constants, and the quartic coupling tensor.

Generators are normalized so that Tr(tau_a tau_b) = delta_ab (not the more
common delta_ab/2).  All adjoint indices elsewhere in the package refer to the
fixed ordering produced by :func:`build_generators`: the symmetric block S_ab
(a < b, lexicographic), the antisymmetric block A_ab (a < b), then the diagonal
block D_n (n = 1..N-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITICITY_TOL = 1e-12
JACOBI_TOL = 1e-10


class InvalidBasisError(ValueError):
    """Raised when a generator basis fails Hermiticity or normalization checks."""


@dataclass(frozen=True)
class GeneratorBasis:
    """Ordered orthonormal basis of the su(N) algebra (Tr(t_a t_b) = delta_ab)."""

    n_colors: int
    generators: tuple  # of (N, N) complex ndarrays
    labels: tuple  # of str, e.g. "S_01", "A_02", "D_3"

    def __post_init__(self):
        if len(self.generators) != self.n_colors**2 - 1:
            raise InvalidBasisError(
                f"expected {self.n_colors ** 2 - 1} generators, got {len(self.generators)}"
            )

    @property
    def dim(self) -> int:
        return self.n_colors**2 - 1

    def as_array(self) -> np.ndarray:
        return np.stack(self.generators)


@dataclass(frozen=True)
class StructureConstants:
    """Sparse totally antisymmetric f_abc with canonical keys a < b.

    ``entries`` maps (a, b, c) with a < b to the real value f_abc.  Use
    :meth:`get` for arbitrary index order (antisymmetry applied) and
    :meth:`by_gamma` for the compiler-facing grouping.
    """

    n_colors: int
    entries: dict

    def get(self, a: int, b: int, c: int) -> float:
        if a == b:
            return 0.0
        if a < b:
            return self.entries.get((a, b, c), 0.0)
        return -self.entries.get((b, a, c), 0.0)

    def by_gamma(self) -> dict:
        """Return {c: [(a, b, f_abc), ...]} with both (a,b) orders included."""
        out: dict = {}
        for (a, b, c), v in self.entries.items():
            out.setdefault(c, []).append((a, b, v))
            out.setdefault(c, []).append((b, a, -v))
        return out


def build_generators(n_colors: int) -> GeneratorBasis:
    """Canonical su(N) basis: S_ab/sqrt(2), A_ab/sqrt(2), D_n/sqrt(n(n+1)).

    (S_ab)_ij = d_ai d_bj + d_aj d_bi, (A_ab)_ij = i(d_aj d_bi - d_ai d_bj),
    D_n = diag(1, ..., 1, -n, 0, ..., 0) with n ones.  The antisymmetric sign
    is fixed so that N=2 yields exactly (sigma_1, sigma_2, sigma_3)/sqrt(2)
    and f_123 = +sqrt(2).
    """
    if n_colors < 2:
        raise ValueError(f"n_colors must be >= 2, got {n_colors}")
    N = n_colors
    sqrt2 = np.sqrt(2.0)
    gens = []
    labels = []
    for a in range(N):
        for b in range(a + 1, N):
            m = np.zeros((N, N), dtype=complex)
            m[a, b] = 1.0
            m[b, a] = 1.0
            gens.append(m / sqrt2)
            labels.append(f"S_{a}{b}")
    for a in range(N):
        for b in range(a + 1, N):
            m = np.zeros((N, N), dtype=complex)
            m[a, b] = -1.0j
            m[b, a] = 1.0j
            gens.append(m / sqrt2)
            labels.append(f"A_{a}{b}")
    for n in range(1, N):
        m = np.zeros((N, N), dtype=complex)
        for j in range(n):
            m[j, j] = 1.0
        m[n, n] = -n
        gens.append(m / np.sqrt(n * (n + 1)))
        labels.append(f"D_{n}")
    return GeneratorBasis(N, tuple(g for g in gens), tuple(labels))


def _check_basis(basis: GeneratorBasis) -> None:
    arr = basis.as_array()
    K = basis.dim
    for a in range(K):
        if np.abs(arr[a] - arr[a].conj().T).max() > HERMITICITY_TOL:
            raise InvalidBasisError(f"generator {a} is not Hermitian")
    gram = np.einsum("aij,bji->ab", arr, arr)
    if np.abs(gram - np.eye(K)).max() > 1e-10:
        raise InvalidBasisError("basis is not orthonormal under Tr(t_a t_b)")


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """f_abc = -i Tr([t_a, t_b] t_c), stored sparsely with a < b.

    The imaginary residue of the trace formula is asserted below 1e-12 and
    discarded; f is exactly real analytically.
    """
    _check_basis(basis)
    arr = basis.as_array()
    K = basis.dim
    entries = {}
    for a in range(K):
        for b in range(a + 1, K):
            comm = arr[a] @ arr[b] - arr[b] @ arr[a]
            vals = -1j * np.einsum("ij,cji->c", comm, arr)
            if np.abs(vals.imag).max() > HERMITICITY_TOL:
                raise InvalidBasisError(
                    f"trace formula gave imaginary residue {np.abs(vals.imag).max():.2e}"
                )
            for c in np.nonzero(np.abs(vals.real) > 1e-12)[0]:
                entries[(a, b, int(c))] = float(vals.real[c])
    return StructureConstants(basis.n_colors, entries)


@lru_cache(maxsize=None)
def cached_algebra(n_colors: int) -> tuple:
    """(GeneratorBasis, StructureConstants) for the canonical basis, cached per N."""
    basis = build_generators(n_colors)
    return basis, structure_constants(basis)


def coupling_tensor(f: StructureConstants, alpha: int, beta: int,
                    alphap: int, betap: int) -> float:
    """Quartic coupling C^{ab a'b'} = -sum_c f_ab^c f_a'b'c, evaluated on demand.

    Indices are 0-based in [0, N^2-2].  No rank-4 tensor is materialized.
    """
    dim = f.n_colors**2 - 1
    for idx in (alpha, beta, alphap, betap):
        if not 0 <= idx < dim:
            raise ValueError(f"adjoint index {idx} out of range [0, {dim - 1}]")
    total = 0.0
    # iterate over the sparse gammas of the (alpha, beta) slot
    for gamma in range(dim):
        v1 = f.get(alpha, beta, gamma)
        if v1 != 0.0:
            total -= v1 * f.get(alphap, betap, gamma)
    return total
