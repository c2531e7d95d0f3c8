"""Universal polynomial Hamiltonian IR and the three theory builders.

Every theory reduces to H = (1/2) sum_a p_a^2 + V(x) with V a real polynomial
of degree <= 4 over the registered bosons.  Monomials are stored canonically
as sorted ((boson, power), ...) tuples; like terms merge immediately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import sun
from .encoding import (
    COEFF_DROP_TOL,
    DigitizationConfig,
    PauliSum,
    cyclic_shift_pauli,
    momentum_squared_zz,
    position_pauli,
)

MAX_DEGREE = 4


@dataclass(frozen=True)
class BosonRegistry:
    labels: tuple  # unique structured tags rendered as strings

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("boson labels must be unique")

    @property
    def count(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass
class PolyHamiltonian:
    """Kinetic (1/2) sum p^2 plus a real polynomial potential of degree <= 4."""

    bosons: BosonRegistry
    potential: dict = field(default_factory=dict)  # ((boson, power), ...) -> coeff
    constant: float = 0.0
    kinetic_prefactor: float = 0.5
    theory: str = "custom"

    @property
    def n_bosons(self) -> int:
        return self.bosons.count

    def add_term(self, factors, coeff: float) -> None:
        """Merge coeff * prod(x_b for b in factors) into the potential.

        ``factors`` is an iterable of boson indices, repetition = power.
        """
        factors = tuple(factors)
        if len(factors) > MAX_DEGREE:
            raise ValueError(f"monomial degree {len(factors)} exceeds {MAX_DEGREE}")
        if not factors:
            self.constant += coeff
            return
        powers: dict = {}
        for b in factors:
            if not 0 <= b < self.n_bosons:
                raise ValueError(f"boson index {b} out of range")
            powers[b] = powers.get(b, 0) + 1
        key = tuple(sorted(powers.items()))
        new = self.potential.get(key, 0.0) + coeff
        if abs(new) <= COEFF_DROP_TOL:
            self.potential.pop(key, None)
        else:
            self.potential[key] = new

    def monomials(self) -> list:
        """Canonically sorted (key, coeff) pairs."""
        return sorted(self.potential.items())

    def degree_histogram(self) -> dict:
        hist: dict = {}
        for key in self.potential:
            d = sum(p for _, p in key)
            hist[d] = hist.get(d, 0) + 1
        return hist

    def potential_on_grid(self, cfg: DigitizationConfig) -> np.ndarray:
        """Diagonal of V over the full digitized basis (vectorized, any size)."""
        Q = cfg.qubits_per_boson
        grid = cfg.position_grid()
        dim = 2 ** (self.n_bosons * Q)
        idx = np.arange(dim)
        xvals = {}

        def xval(b):
            if b not in xvals:
                xvals[b] = grid[(idx >> (b * Q)) & (2**Q - 1)]
            return xvals[b]

        diag = np.full(dim, self.constant, dtype=float)
        for key, coeff in self.potential.items():
            term = np.full(dim, coeff)
            for b, p in key:
                term = term * xval(b) ** p
            diag += term
        return diag


@dataclass(frozen=True)
class QuadraticXPOperator:
    """Hermitian sum of c * x_a p_b bilinears (a != b termwise) plus a constant.

    Distinct x/p bosons in every term means there is no operator-ordering
    ambiguity; normal-ordering constants picked up during construction are
    folded into ``constant``.
    """

    label: str
    terms: tuple  # of (coeff, x_boson, p_boson)
    constant: float = 0.0

    def __post_init__(self):
        for c, a, b in self.terms:
            if a == b:
                raise ValueError("x and p of one term must act on distinct bosons")


# --- symbolic expansion helpers ---------------------------------------------


class Poly:
    """Polynomial in commuting real variables with complex coefficients.

    Monomial keys are sorted tuples of variable ids (ints); used for the
    trace expansions of the matrix-model and orbifold potentials.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def variable(cls, v: int, coeff: complex = 1.0) -> "Poly":
        return cls({(v,): complex(coeff)})

    @classmethod
    def const(cls, c: complex) -> "Poly":
        return cls({(): complex(c)}) if c != 0 else cls()

    def conj(self) -> "Poly":
        return Poly({k: v.conjugate() for k, v in self.terms.items()})

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0.0) + v
        return Poly(t)

    def __sub__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0.0) - v
        return Poly(t)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Poly({k: v * other for k, v in self.terms.items()})
        t: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                t[k] = t.get(k, 0.0) + v1 * v2
        return Poly(t)

    __rmul__ = __mul__

    def cleaned(self, tol: float = COEFF_DROP_TOL) -> "Poly":
        return Poly({k: v for k, v in self.terms.items() if abs(v) > tol})

    def max_imag(self) -> float:
        return max((abs(v.imag) for v in self.terms.values()), default=0.0)


def _mat_mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), Poly()) for j in range(n)]
            for i in range(n)]


def _mat_trace(A) -> Poly:
    return sum((A[i][i] for i in range(len(A))), Poly())


def _mat_bar(A):
    """Entrywise operator conjugate + matrix transpose (the paper's bar)."""
    n = len(A)
    return [[A[j][i].conj() for j in range(n)] for i in range(n)]


def _mat_add(A, B, sign=1.0):
    n = len(A)
    return [[A[i][j] + sign * B[i][j] for j in range(n)] for i in range(n)]


def _absorb_poly(h: PolyHamiltonian, poly: Poly, tol: float = 1e-10) -> None:
    if poly.max_imag() > tol:
        raise ValueError(f"potential has imaginary residue {poly.max_imag():.2e}")
    for key, v in poly.cleaned().terms.items():
        h.add_term(key, v.real)


# --- builders ----------------------------------------------------------------


def lattice_sites(L: int, d: int) -> list:
    return list(itertools.product(range(L), repeat=d))


def _shift_site(site: tuple, j: int, step: int, L: int) -> tuple:
    out = list(site)
    out[j] = (out[j] + step) % L
    return tuple(out)


def build_anharmonic(mass2: float = 0.0, quartic: float = 1.0) -> PolyHamiltonian:
    """Single boson, V = (m^2/2) x^2 + (lambda/4) x^4."""
    h = PolyHamiltonian(BosonRegistry(("x",)), theory="anharmonic")
    if mass2 != 0.0:
        h.add_term((0, 0), mass2 / 2.0)
    if quartic != 0.0:
        h.add_term((0, 0, 0, 0), quartic / 4.0)
    return h


def build_scalar_qft(L: int, d: int, mass2: float, coupling: float) -> PolyHamiltonian:
    """Lattice scalar field: hopping + mass + quartic self-interaction.

    V = sum_sites [ (1/2) sum_j (phi_{n+j} - phi_n)^2 + (m^2/2) phi^2
                    + (lambda/4) phi^4 ] on a periodic L^d lattice.
    For L = 2 each pair of sites is connected by two distinct links and both
    are kept, matching the literal double sum.
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    if d not in (1, 2, 3):
        raise ValueError("d must be 1, 2, or 3")
    if coupling < 0:
        raise ValueError("quartic coupling must be >= 0")
    sites = lattice_sites(L, d)
    index = {s: i for i, s in enumerate(sites)}
    labels = tuple(f"phi{s}" for s in sites)
    h = PolyHamiltonian(BosonRegistry(labels), theory="scalar")
    for s in sites:
        a = index[s]
        for j in range(d):
            b = index[_shift_site(s, j, +1, L)]
            # (phi_b - phi_a)^2 / 2
            h.add_term((b, b), 0.5)
            h.add_term((a, a), 0.5)
            h.add_term((a, b), -1.0)
        if mass2 != 0.0:
            h.add_term((a, a), mass2 / 2.0)
        if coupling != 0.0:
            h.add_term((a, a, a, a), coupling / 4.0)
    return h


def _mm_labels_traceless(N: int, d: int) -> tuple:
    basis, _ = sun.cached_algebra(N)
    return tuple(f"X{I}_{lab}" for I in range(d) for lab in basis.labels)


def _mm_labels_full(N: int, d: int) -> tuple:
    labels = []
    for I in range(d):
        for a in range(N):
            for b in range(a + 1, N):
                labels.append(f"X{I}_R{a}{b}")
        for a in range(N):
            for b in range(a + 1, N):
                labels.append(f"X{I}_I{a}{b}")
        for a in range(N):
            labels.append(f"X{I}_D{a}")
    return tuple(labels)


def build_matrix_model(N: int, d: int, g2: float = 1.0, traceless: bool = True,
                       trace_mass: float | None = None) -> PolyHamiltonian:
    """SU(N) bosonic d-matrix model, V = -(g^2/4) sum_{I != J} Tr[X_I, X_J]^2.

    traceless=True expands through the structure-constant coupling
    C^{ab a'b'} = -sum_c f_ab^c f_a'b'c over d(N^2-1) adjoint bosons;
    traceless=False uses the dN^2 entrywise real/imaginary bosons.  The
    optional (Tr X_I)^2 stabilizer (coefficient trace_mass/2 per matrix) only
    exists in the non-traceless basis.
    """
    if traceless and N < 2:
        raise ValueError("traceless basis needs N >= 2")
    if not traceless and N < 1:
        raise ValueError("N must be >= 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    if g2 < 0:
        raise ValueError("g2 must be >= 0")
    if trace_mass is not None and traceless:
        raise ValueError("trace_mass requires the non-traceless basis (Tr X = 0 otherwise)")

    if traceless:
        labels = _mm_labels_traceless(N, d)
        h = PolyHamiltonian(BosonRegistry(labels), theory="matrix_model")
        K = N * N - 1
        _, f = sun.cached_algebra(N)
        by_gamma = f.by_gamma()

        def bos(I, alpha):
            return I * K + alpha

        # V = -(g^2/4) sum_{I != J} sum C^{ab a'b'} x_Ia x_Jb x_Ia' x_Jb'
        for I in range(d):
            for J in range(d):
                if I == J:
                    continue
                for pairs in by_gamma.values():
                    for (al, be, v1) in pairs:
                        for (alp, bep, v2) in pairs:
                            coeff = -(g2 / 4.0) * (-(v1 * v2))
                            h.add_term((bos(I, al), bos(J, be), bos(I, alp), bos(J, bep)),
                                       coeff)
        return h

    labels = _mm_labels_full(N, d)
    h = PolyHamiltonian(BosonRegistry(labels), theory="matrix_model")
    index = {lab: i for i, lab in enumerate(labels)}
    sqrt2 = np.sqrt(2.0)

    def entry(I, i, j) -> Poly:
        if i == j:
            return Poly.variable(index[f"X{I}_D{i}"])
        if i < j:
            return (Poly.variable(index[f"X{I}_R{i}{j}"], 1 / sqrt2)
                    + Poly.variable(index[f"X{I}_I{i}{j}"], 1j / sqrt2))
        return (Poly.variable(index[f"X{I}_R{j}{i}"], 1 / sqrt2)
                + Poly.variable(index[f"X{I}_I{j}{i}"], -1j / sqrt2))

    def matrix(I):
        return [[entry(I, i, j) for j in range(N)] for i in range(N)]

    mats = [matrix(I) for I in range(d)]
    total = Poly()
    for I in range(d):
        for J in range(I + 1, d):
            X, Y = mats[I], mats[J]
            XY = _mat_mul(X, Y)
            # Tr[X,Y]^2 = 2 Tr(XYXY) - 2 Tr(XXYY); ordered (I,J) sum doubles it
            t1 = _mat_trace(_mat_mul(XY, XY))
            t2 = _mat_trace(_mat_mul(_mat_mul(X, X), _mat_mul(Y, Y)))
            total = total + (t1 - t2) * (2.0 * 2.0)
    _absorb_poly(h, total * (-(g2 / 4.0)))
    if trace_mass:
        for I in range(d):
            tr = sum((Poly.variable(index[f"X{I}_D{i}"]) for i in range(N)), Poly())
            _absorb_poly(h, tr * tr * (trace_mass / 2.0))
    return h


def _orbifold_labels(N: int, d: int, L: int) -> tuple:
    labels = []
    for site in lattice_sites(L, d):
        for j in range(d):
            for a in range(N):
                for b in range(N):
                    labels.append(f"Z{j}_{site}_{a}{b}R")
                    labels.append(f"Z{j}_{site}_{a}{b}I")
    return tuple(labels)


def build_orbifold_ym(N: int, d: int, L: int, g2: float, lattice_a: float = 1.0,
                      m2: float = 0.0, mu2: float = 0.0) -> PolyHamiltonian:
    """Orbifold-lattice Yang-Mills with complex link matrices Z_{j,n}.

    V collects, per site, the electric term (g2/(2 a^3)) Tr |sum_j (Z Zbar -
    Zbar' Z')|^2, the plaquette term (2 g2/a^3) sum_{j<k} Tr |Z_j Z_k' -
    Z_k Z_j''|^2, and the stabilizer Delta-H with masses m2 (single trace) and
    mu2 (double trace).  Constants from |... - a/(2 g2)|^2 land in
    PolyHamiltonian.constant.  For d = 2 pass the already-reduced coupling
    (g2 -> a * g2_3d).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if d < 2:
        raise ValueError("d must be >= 2")
    if L < 2:
        raise ValueError("L must be >= 2")
    if g2 <= 0 or lattice_a <= 0:
        raise ValueError("coupling and lattice spacing must be positive")
    if m2 < 0 or mu2 < 0:
        raise ValueError("stabilizer masses must be >= 0")

    labels = _orbifold_labels(N, d, L)
    index = {lab: i for i, lab in enumerate(labels)}
    h = PolyHamiltonian(BosonRegistry(labels), theory="orbifold")
    sites = lattice_sites(L, d)
    sqrt2 = np.sqrt(2.0)

    def z_entry(j, site, a, b) -> Poly:
        return (Poly.variable(index[f"Z{j}_{site}_{a}{b}R"], 1 / sqrt2)
                + Poly.variable(index[f"Z{j}_{site}_{a}{b}I"], 1j / sqrt2))

    def z_matrix(j, site):
        return [[z_entry(j, site, a, b) for b in range(N)] for a in range(N)]

    zcache = {(j, site): z_matrix(j, site) for site in sites for j in range(d)}
    ident = [[Poly.const(1.0) if i == j else Poly() for j in range(N)] for i in range(N)]
    c_box = lattice_a / (2.0 * g2)

    total = Poly()
    for site in sites:
        # electric term: (g2 / 2a^3) Tr (sum_j [Z Zbar - Zbar(n-j) Z(n-j)])^2
        esum = [[Poly() for _ in range(N)] for _ in range(N)]
        for j in range(d):
            Z = zcache[(j, site)]
            Zm = zcache[(j, _shift_site(site, j, -1, L))]
            out_part = _mat_mul(Z, _mat_bar(Z))
            in_part = _mat_mul(_mat_bar(Zm), Zm)
            esum = _mat_add(esum, _mat_add(out_part, in_part, sign=-1.0))
        total = total + _mat_trace(_mat_mul(esum, esum)) * (g2 / (2.0 * lattice_a**3))

        # plaquette term: (2 g2 / a^3) sum_{j<k} Tr B Bbar,
        # B = Z_j(n) Z_k(n+j) - Z_k(n) Z_j(n+k)
        for j in range(d):
            for k in range(j + 1, d):
                B = _mat_add(
                    _mat_mul(zcache[(j, site)], zcache[(k, _shift_site(site, j, +1, L))]),
                    _mat_mul(zcache[(k, site)], zcache[(j, _shift_site(site, k, +1, L))]),
                    sign=-1.0,
                )
                total = total + _mat_trace(_mat_mul(B, _mat_bar(B))) * (2.0 * g2 / lattice_a**3)

        # Delta-H: single-trace mass (m2) and double-trace (mu2) stabilizers
        for j in range(d):
            Z = zcache[(j, site)]
            zzbar = _mat_mul(Z, _mat_bar(Z))
            if m2 != 0.0:
                dev = _mat_add(zzbar, [[ident[i][jj] * c_box for jj in range(N)]
                                       for i in range(N)], sign=-1.0)
                total = total + _mat_trace(_mat_mul(dev, dev)) * (m2 * g2 / (2.0 * lattice_a))
            if mu2 != 0.0:
                scalar_dev = _mat_trace(zzbar) * (1.0 / N) - Poly.const(c_box)
                total = total + scalar_dev * scalar_dev * (N * mu2 * g2 / (2.0 * lattice_a))

    _absorb_poly(h, total)
    return h


# --- Gauss-law generators -----------------------------------------------------


def gauss_generators_mm(N: int, d: int, traceless: bool = True) -> list:
    """G_alpha = sum_{I, beta != gamma} f_{alpha beta gamma} X_{I,beta} P_{I,gamma}.

    Hermitian as written since f vanishes on repeated indices (the x and p of
    each term live on different bosons).  Defined on the traceless adjoint
    basis only.
    """
    if not traceless:
        raise ValueError("gauge generators are defined on the traceless adjoint basis")
    K = N * N - 1
    _, f = sun.cached_algebra(N)
    gens = []
    for alpha in range(K):
        terms = []
        for (a, b, c), v in f.entries.items():
            pairs = [(a, b, c, v), (b, a, c, -v)]
            for (x, y, z, val) in pairs:
                if x == alpha:
                    for I in range(d):
                        terms.append((val, I * K + y, I * K + z))
        gens.append(QuadraticXPOperator(f"G_{alpha}", tuple(terms)))
    return gens


class _Bilinear:
    """Accumulates sum c * x_a p_b (normal ordered) plus a complex constant."""

    def __init__(self):
        self.terms: dict = {}
        self.const: complex = 0.0

    def add_xp(self, c: complex, x: int, p: int) -> None:
        if c == 0.0:
            return
        self.terms[(x, p)] = self.terms.get((x, p), 0.0) + c

    def add_px(self, c: complex, p: int, x: int) -> None:
        # p_b x_a = x_a p_b - i delta_ab  (boson ids shared between x and p)
        self.add_xp(c, x, p)
        if x == p:
            self.const += -1j * c

    def scaled(self, c: complex) -> "_Bilinear":
        out = _Bilinear()
        out.terms = {k: v * c for k, v in self.terms.items()}
        out.const = self.const * c
        return out

    def __add__(self, other: "_Bilinear") -> "_Bilinear":
        out = _Bilinear()
        out.terms = dict(self.terms)
        for k, v in other.terms.items():
            out.terms[k] = out.terms.get(k, 0.0) + v
        out.const = self.const + other.const
        return out

    def hermitian_component(self, label: str, tol: float = 1e-10) -> QuadraticXPOperator:
        terms = []
        for (x, p), c in self.terms.items():
            if abs(c) <= COEFF_DROP_TOL:
                continue
            if abs(c.imag) > tol:
                raise ValueError(f"non-real coefficient {c} in Hermitian component")
            if x == p:
                raise ValueError("unresolved same-boson x p product")
            terms.append((c.real, x, p))
        if abs(self.const.imag) > tol:
            raise ValueError(f"non-real constant {self.const}")
        return QuadraticXPOperator(label, tuple(sorted(terms, key=lambda t: (t[1], t[2]))),
                                   float(self.const.real))


def gauss_generators_orbifold(N: int, d: int, L: int) -> list:
    """Hermitian Gauss components per site: N diagonal + 2*C(N,2) off-diagonal.

    G_{n,pq} = i sum_j (-Z P-bar + P Z-bar - Z-bar' P' + P-bar' Z')_{pq} with
    primes on link (j, n-j).  Products with x and p of the same boson are
    normal ordered; the commutator constants land in the component constant.
    Off-diagonal (p < q) components are exposed as (G_pq + G_qp)/sqrt(2) and
    i(G_pq - G_qp)/sqrt(2) so every observable is real.
    """
    labels = _orbifold_labels(N, d, L)
    index = {lab: i for i, lab in enumerate(labels)}
    sites = lattice_sites(L, d)
    sqrt2 = np.sqrt(2.0)

    def entry_vars(j, site, barred, a, b):
        """Entry (a, b) of Z/P (barred: of Z-bar/P-bar) as [(coeff, boson id)].

        The boson id doubles for the x and the p operator of the same mode.
        """
        r, c = (b, a) if barred else (a, b)
        sgn = -1j if barred else 1j
        return [
            (1 / sqrt2, index[f"Z{j}_{site}_{r}{c}R"]),
            (sgn / sqrt2, index[f"Z{j}_{site}_{r}{c}I"]),
        ]

    def matprod_entry(specA, specB, p, q, a_is_x: bool) -> _Bilinear:
        """(A B)_{pq} where one factor holds x variables and the other p.

        specA/specB = (link j, site, barred); a_is_x says factor A carries the
        coordinate variables (operator order x.p), otherwise A is the momentum
        factor and the p.x products are normal ordered.
        """
        out = _Bilinear()
        for k in range(N):
            for (ca, va), (cb, vb) in itertools.product(
                entry_vars(*specA, p, k), entry_vars(*specB, k, q)
            ):
                if a_is_x:
                    out.add_xp(ca * cb, va, vb)
                else:
                    out.add_px(ca * cb, va, vb)
        return out

    gens = []
    for site in sites:
        comp: dict = {}
        for p in range(N):
            for q in range(N):
                acc = _Bilinear()
                for j in range(d):
                    here = (j, site, False)
                    here_bar = (j, site, True)
                    sm = _shift_site(site, j, -1, L)
                    prev = (j, sm, False)
                    prev_bar = (j, sm, True)
                    # -Z P-bar    (x first)
                    acc = acc + matprod_entry(here, here_bar, p, q, True).scaled(-1.0)
                    # +P Z-bar    (p first)
                    acc = acc + matprod_entry(here, here_bar, p, q, False)
                    # -Z-bar' P'  (x first)
                    acc = acc + matprod_entry(prev_bar, prev, p, q, True).scaled(-1.0)
                    # +P-bar' Z'  (p first)
                    acc = acc + matprod_entry(prev_bar, prev, p, q, False)
                comp[(p, q)] = acc.scaled(1j)
        for p in range(N):
            gens.append(comp[(p, p)].hermitian_component(f"G{site}_{p}{p}"))
        for p in range(N):
            for q in range(p + 1, N):
                plus = (comp[(p, q)] + comp[(q, p)]).scaled(1 / sqrt2)
                minus = (comp[(p, q)] + comp[(q, p)].scaled(-1.0)).scaled(1j / sqrt2)
                gens.append(plus.hermitian_component(f"G{site}_{p}{q}_re"))
                gens.append(minus.hermitian_component(f"G{site}_{p}{q}_im"))
    return gens


# --- qubit encoding -----------------------------------------------------------


@dataclass(frozen=True)
class KineticSpec:
    """Per-boson kinetic data in boson-local qubit labels.

    realization 'momentum_basis_qft': boson_local is the ZZ expansion of
    (1/2) p^2 in momentum-register labels (constant_offset included).
    realization 'coordinate_basis_shift': boson_local is the X/Y string form
    of (1/2) p^2 = (2 - S - S^-1)/(2 dx^2) built from the cyclic shift.
    """

    realization: str
    boson_local: PauliSum
    n_bosons: int
    cfg: DigitizationConfig


@dataclass(frozen=True)
class EncodedHamiltonian:
    n_qubits: int
    potential: PauliSum  # Z-only, over the full register
    kinetic: KineticSpec


def _local_power_expansions(cfg: DigitizationConfig, max_power: int) -> list:
    """[(x_hat)^p as {frozenset(local qubits) -> coeff} for p = 0..max_power]."""
    pos = position_pauli(cfg)
    base = {frozenset(q for q, _ in key): c for key, c in pos.terms.items()}
    if pos.constant_offset:
        base[frozenset()] = base.get(frozenset(), 0.0) + pos.constant_offset
    powers = [{frozenset(): 1.0}]
    for _ in range(max_power):
        nxt: dict = {}
        for k1, c1 in powers[-1].items():
            for k2, c2 in base.items():
                k = k1 ^ k2  # Z^2 = 1
                nxt[k] = nxt.get(k, 0.0) + c1 * c2
        powers.append(nxt)
    return powers


def pauli_encode(h: PolyHamiltonian, cfg: DigitizationConfig) -> EncodedHamiltonian:
    """Digitize every boson on Q qubits; expand V into Z-strings of weight <= 4.

    Boson b occupies qubits [b*Q, (b+1)*Q); identity components (from Z^2 = 1)
    accumulate into the PauliSum constant_offset together with h.constant.
    """
    Q = cfg.qubits_per_boson
    n_qubits = h.n_bosons * Q
    powers = _local_power_expansions(cfg, MAX_DEGREE)
    pot = PauliSum(n_qubits)
    pot.constant_offset = h.constant
    for key, coeff in h.potential.items():
        partial = [(frozenset(), coeff)]
        for b, p in key:
            nxt = []
            for supp, c in partial:
                for local, cl in powers[p].items():
                    if abs(c * cl) == 0.0:
                        continue
                    shifted = frozenset(b * Q + q for q in local)
                    nxt.append((supp | shifted, c * cl))
            # merge within the monomial to keep the intermediate list small
            merged: dict = {}
            for supp, c in nxt:
                merged[supp] = merged.get(supp, 0.0) + c
            partial = list(merged.items())
        for supp, c in partial:
            pot.add(tuple(sorted((q, "Z") for q in supp)), c)
    pot.cleanup()

    if cfg.kinetic_realization == "momentum_basis_qft":
        local = momentum_squared_zz(cfg)
        half = PauliSum(Q, {k: h.kinetic_prefactor * v for k, v in local.terms.items()},
                        h.kinetic_prefactor * local.constant_offset)
    else:
        shift = cyclic_shift_pauli(Q)
        scale = -h.kinetic_prefactor / cfg.dx**2
        half = PauliSum(Q, {k: scale * v for k, v in shift.terms.items()},
                        h.kinetic_prefactor * 2.0 / cfg.dx**2)
    spec = KineticSpec(cfg.kinetic_realization, half.cleanup(), h.n_bosons, cfg)
    return EncodedHamiltonian(n_qubits, pot, spec)
