"""Command-line frontend: build -> compile -> count -> table -> verify.

All outputs are canonical (key-sorted JSON, deterministically ordered text),
so identical invocations are byte-identical.  Exit codes: 0 success, 1
verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import reports
from .circuit import count as circuit_count
from .circuit import equal_up_to_global_phase, to_text, unitary
from .compiler import compile_potential_step, pauli_gadget, pauli_z_gadget, qft_circuit, trotter_step
from .encoding import (
    DigitizationConfig,
    PauliSum,
    modified_dft,
    position_pauli,
    shift_operator_pauli,
)
from .hamiltonian import gauss_generators_mm, pauli_encode
from .resources import (
    TCountModel,
    analytic_counts,
    build_theory,
    estimate_circuit,
    quartic_vertex_count,
    scaling_fit,
)
from .simulator import (
    dense_from_encoded,
    dense_hamiltonian,
    gauss_drift,
    product_terms_generator,
    product_terms_hamiltonian,
    commutator_frobenius_ratio,
    trotter_error,
)
from .sun import build_generators, structure_constants

THEORY_CHOICES = ("scalar", "matrix-model", "orbifold", "anharmonic")


def _theory_key(name: str) -> str:
    return name.replace("-", "_")


def _theory_params(args) -> dict:
    params = {}
    for key in ("L", "d", "N", "m2", "mu2", "g2", "a", "lam", "trace_mass"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "non_traceless", False):
        params["traceless"] = False
    return params


def _add_theory_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=int, help="sites per dimension")
    p.add_argument("--d", type=int, help="spatial dimension / number of matrices")
    p.add_argument("--N", type=int, help="gauge group rank of SU(N)")
    p.add_argument("--m2", type=float, help="mass-squared parameter")
    p.add_argument("--mu2", type=float, help="double-trace stabilizer mass (orbifold)")
    p.add_argument("--g2", type=float, help="gauge coupling squared")
    p.add_argument("--a", type=float, help="lattice spacing (orbifold)")
    p.add_argument("--lambda", dest="lam", type=float, help="quartic coupling")
    p.add_argument("--non-traceless", action="store_true",
                   help="matrix model: use the dN^2 entrywise basis")
    p.add_argument("--trace-mass", dest="trace_mass", type=float,
                   help="matrix model: (Tr X)^2 stabilizer coefficient")


def _add_cfg_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--Q", type=int, required=True, help="qubits per boson")
    p.add_argument("--R", type=float, required=True, help="coordinate half-width")
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--kinetic", choices=("qft", "shift"), default="qft")
    p.add_argument("--approx-qft", dest="approx_qft", type=int, default=None,
                   help="drop controlled phases with k above this threshold")


def _cfg_from_args(args) -> DigitizationConfig:
    return DigitizationConfig(
        qubits_per_boson=args.Q,
        half_width=args.R,
        boundary=args.boundary,
        kinetic_realization=("momentum_basis_qft" if args.kinetic == "qft"
                             else "coordinate_basis_shift"),
    )


def _emit(text: str, path: str | None) -> None:
    if path:
        reports.write_text(path, text)
    else:
        sys.stdout.write(text)


# --- build -----------------------------------------------------------------


def cmd_build(args) -> int:
    params = _theory_params(args)
    h = build_theory(_theory_key(args.theory), params)
    _emit(reports.dumps(reports.hamiltonian_to_dict(h)), args.out)
    return 0


def cmd_algebra(args) -> int:
    basis = build_generators(args.N)
    f = structure_constants(basis)
    payload = {
        "schema": "orbiqsim.su_algebra.v1",
        "n_colors": args.N,
        "labels": list(basis.labels),
        "generators": [
            {"label": lab, "real": g.real.tolist(), "imag": g.imag.tolist()}
            for lab, g in zip(basis.labels, basis.generators)
        ],
        "structure_constants": [
            {"abc": list(key), "value": val}
            for key, val in sorted(f.entries.items())
        ],
    }
    _emit(reports.dumps(payload), args.out)
    return 0


# --- compile ---------------------------------------------------------------


def cmd_compile(args) -> int:
    with open(args.hamiltonian, encoding="utf-8") as fh:
        import json

        h = reports.hamiltonian_from_dict(json.load(fh))
    cfg = _cfg_from_args(args)
    enc = pauli_encode(h, cfg)
    circ = trotter_step(enc, cfg, args.dt, approx_threshold=args.approx_qft)
    _emit(to_text(circ), args.out)
    model = TCountModel.parse(args.model)
    report = estimate_circuit(circ, model)
    payload = {
        "schema": "orbiqsim.compile_report.v1",
        "theory": h.theory,
        "config": reports.config_to_dict(cfg),
        "dt": args.dt,
        "n_gates": len(circ.gates),
        "segments": [
            {"label": lab, "start": a, "stop": b} for lab, a, b in circ.segments
        ],
        "resources": report.to_dict(),
    }
    _emit(reports.dumps(payload), args.report)
    return 0


# --- count / table -----------------------------------------------------------


def cmd_count(args) -> int:
    cfg = _cfg_from_args(args)
    model = TCountModel.parse(args.model)
    theory = _theory_key(args.theory)
    params = _theory_params(args)
    report = analytic_counts(theory, params, cfg, model, args.approx_qft)
    payload = {
        "schema": "orbiqsim.resource_report.v1",
        "theory": theory,
        "params": {k: params[k] for k in sorted(params)},
        "config": reports.config_to_dict(cfg),
        "resources": report.to_dict(),
        "quartic_vertices": quartic_vertex_count(theory, params),
    }
    if args.check_compiled:
        h = build_theory(theory, params)
        enc = pauli_encode(h, cfg)
        compiled = estimate_circuit(trotter_step(enc, cfg, args.dt, args.approx_qft), model)
        agree = (compiled.counts.cnot == report.counts.cnot
                 and compiled.counts.rz == report.counts.rz
                 and compiled.t_count == report.t_count)
        payload["compiled_check"] = {"agrees": bool(agree),
                                     "compiled": compiled.to_dict()}
        if not agree:
            _emit(reports.dumps(payload), args.out)
            return 1
    _emit(reports.dumps(payload), args.out)
    return 0


def _parse_sweep(spec: str) -> tuple:
    name, _, values = spec.partition("=")
    if not values:
        raise ValueError("sweep needs name=lo:hi or name=v1,v2,...")
    if ":" in values:
        lo, hi = values.split(":")
        pts = list(range(int(lo), int(hi) + 1))
    else:
        pts = [int(v) for v in values.split(",")]
    if len(pts) < 2:
        raise ValueError("sweep needs at least two points")
    return name, pts


def cmd_table(args) -> int:
    cfg = _cfg_from_args(args)
    model = TCountModel.parse(args.model)
    theory = _theory_key(args.theory)
    base = _theory_params(args)
    name, pts = _parse_sweep(args.sweep)
    rows = []
    for v in pts:
        params = dict(base)
        params[name] = v
        rep = analytic_counts(theory, params, cfg, model, args.approx_qft)
        rows.append({
            name: v,
            "qubits": rep.qubits,
            "cnot": rep.counts.cnot,
            "rz": rep.counts.rz,
            "clifford_1q": rep.clifford_1q,
            "t_count": rep.t_count,
            "quartic_vertices": quartic_vertex_count(theory, params),
        })
    cols = [name, "qubits", "cnot", "rz", "clifford_1q", "t_count", "quartic_vertices"]
    lines = ["\t".join(cols)]
    for row in rows:
        lines.append("\t".join(str(row[c]) for c in cols))
    fits = {}
    if len(pts) >= 4:
        for c in cols[1:]:
            ys = [row[c] for row in rows]
            if all(y > 0 for y in ys):
                fits[c] = scaling_fit(pts, ys)
        for c in sorted(fits):
            lines.append(f"# fit log({c}) ~ {fits[c]:.4f} * log({name})")
    scal = analytic_counts(theory, dict(base, **{name: pts[0]}), cfg, model).scalings
    for k in sorted(scal):
        lines.append(f"# scaling {k}: {scal[k]}")
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.plot_dir:
        from . import plotting

        plotting.ensure_dir(args.plot_dir)
        for c in cols[1:]:
            ys = [row[c] for row in rows]
            if all(y > 0 for y in ys):
                plotting.save_scaling_figure(
                    os.path.join(args.plot_dir, f"{theory}_{c}_vs_{name}.png"),
                    pts, ys, name, c, fits.get(c),
                    title=f"{theory}: {c} vs {name}")
    return 0


# --- verify -------------------------------------------------------------------


def _pauli_string_matrix(key, n_qubits: int) -> np.ndarray:
    from .encoding import PAULI_MATS

    mats = {q: PAULI_MATS[p] for q, p in key}
    out = np.array([[1.0 + 0j]])
    for q in range(n_qubits):
        out = np.kron(mats.get(q, np.eye(2, dtype=complex)), out)
    return out


def _string_exponential(key, theta: float, n_qubits: int) -> np.ndarray:
    # P^2 = 1 for every Pauli string, so exp(-i theta P) = cos t - i sin t P
    P = _pauli_string_matrix(key, n_qubits)
    dim = 2**n_qubits
    return np.cos(theta) * np.eye(dim) - 1j * np.sin(theta) * P


def _verify_gadgets() -> list:
    checks = []
    rng = np.random.default_rng(11)
    ok = True
    worst = 0.0
    for w in range(1, 6):
        key = tuple((q, "Z") for q in range(w))
        theta = float(rng.uniform(-1.5, 1.5))
        U = unitary(pauli_z_gadget(list(range(w)), theta, w))
        err = np.abs(U - _string_exponential(key, theta, w)).max()
        worst = max(worst, err)
        ok = ok and err < 1e-10
    checks.append(("z-gadget unitary (w<=5)", ok, f"max err {worst:.2e}"))
    letters_cases = [(("X",),), (("Y",),), (("X", "X"),), (("Y", "Y"),),
                     (("X", "Y", "Z"),)]
    ok = True
    worst = 0.0
    for (letters,) in letters_cases:
        key = tuple((q, p) for q, p in enumerate(letters))
        theta = 0.37
        U = unitary(pauli_gadget(key, theta, len(letters)))
        err = np.abs(U - _string_exponential(key, theta, len(letters))).max()
        worst = max(worst, err)
        ok = ok and err < 1e-10
    checks.append(("general Pauli gadget", ok, f"max err {worst:.2e}"))
    from .circuit import Circuit, lower_cphase

    ok = True
    worst = 0.0
    for k in range(1, 7):
        c = Circuit(2)
        c.extend(lower_cphase(k, 0, 1))
        target = np.diag([1.0, 1.0, 1.0, np.exp(2j * np.pi / 2**k)])
        err = np.abs(unitary(c) - target).max()
        worst = max(worst, err)
        ok = ok and err < 1e-10
    checks.append(("controlled-phase lowering (k<=6)", ok, f"max err {worst:.2e}"))
    # ladder sharing: group of g weight-4 gadgets on a shared 3-qubit prefix
    g = 5
    ps = PauliSum(4 + g)
    for i in range(g):
        ps.add(tuple((q, "Z") for q in (0, 1, 2, 3 + i)), 0.1 + 0.05 * i)
    opt = compile_potential_step(ps, 0.3)
    plain = compile_potential_step(ps, 0.3, optimize=False)
    nc = circuit_count(opt).cnot
    ok = nc == 2 * g + 4
    checks.append((f"shared-prefix CNOT count 2g+4 (g={g})", ok, f"cnot {nc}"))
    same = equal_up_to_global_phase(unitary(opt), unitary(plain), tol=1e-12)
    checks.append(("optimizer soundness", same, "optimized == unoptimized"))
    return checks


def _verify_qft() -> list:
    checks = []
    worst = 0.0
    ok = True
    for Q in range(1, 6):
        U = unitary(qft_circuit(Q))
        err = np.abs(U - modified_dft(Q)).max()
        worst = max(worst, err)
        ok = ok and err < 1e-10
    checks.append(("exact QFT matches half-shifted DFT (Q<=5)", ok, f"max err {worst:.2e}"))
    Q = 5
    exact = unitary(qft_circuit(Q))
    errs = []
    for kmax in range(1, Q + 1):
        approx = unitary(qft_circuit(Q, approx_threshold=kmax))
        tr = np.trace(exact.conj().T @ approx)
        phase = tr / abs(tr)
        errs.append(np.linalg.norm(exact - phase * approx))
    mono = all(errs[i + 1] <= errs[i] + 1e-12 for i in range(len(errs) - 1))
    checks.append(("approximate QFT error monotone in threshold", mono,
                   " -> ".join(f"{e:.2e}" for e in errs)))
    return checks


def _verify_encoding() -> list:
    checks = []
    cases = [
        ("anharmonic", {"lam": 1.0}, 3),
        ("anharmonic", {"lam": 1.0}, 4),
        ("scalar", {"L": 2, "d": 1, "m2": 1.0, "lam": 0.5}, 2),
        ("matrix_model", {"N": 2, "d": 2, "g2": 1.0}, 1),
    ]
    worst = 0.0
    ok = True
    for theory, params, Q in cases:
        h = build_theory(theory, params)
        cfg = DigitizationConfig(Q, 2.5)
        direct = dense_hamiltonian(h, cfg)
        rebuilt = dense_from_encoded(pauli_encode(h, cfg), cfg)
        err = np.linalg.norm(rebuilt - direct) / max(np.linalg.norm(direct), 1e-300)
        worst = max(worst, err)
        ok = ok and err < 1e-10
    checks.append(("encoding oracle identity", ok, f"max rel err {worst:.2e}"))
    from .encoding import PauliSum as PS

    sh = shift_operator_pauli(3)
    target = np.zeros((8, 8))
    for n in range(7):
        target[n + 1, n] = 1.0
        target[n, n + 1] = 1.0
    err = np.abs(sh.to_matrix() - target).max()
    checks.append(("shift operator reconstruction (Q=3)", err < 1e-12, f"err {err:.2e}"))
    return checks


def _verify_algebra() -> list:
    checks = []
    ok = True
    detail = []
    for N in (2, 3, 4, 5):
        basis = build_generators(N)
        arr = basis.as_array()
        gram = np.einsum("aij,bji->ab", arr, arr)
        err = np.abs(gram - np.eye(basis.dim)).max()
        ok = ok and err < 1e-10
        detail.append(f"N={N}:{err:.1e}")
    checks.append(("generator orthonormality", ok, " ".join(detail)))
    # f_123 in the conventional labeling: sigma/sqrt(2) for N=2, Gell-Mann for N=3
    f2 = structure_constants(build_generators(2))
    ok = abs(f2.get(0, 1, 2) - np.sqrt(2.0)) < 1e-10
    checks.append(("f_123 = sqrt(2) for N=2", ok, f"{f2.get(0, 1, 2):.12f}"))
    from .sun import GeneratorBasis

    lam = _gellmann()
    gm = GeneratorBasis(3, tuple(m / np.sqrt(2.0) for m in lam), tuple(f"gm{k}" for k in range(8)))
    f3 = structure_constants(gm)
    ok = abs(f3.get(0, 1, 2) - np.sqrt(2.0)) < 1e-10
    checks.append(("f_123 = sqrt(2) for N=3 (Gell-Mann)", ok, f"{f3.get(0, 1, 2):.12f}"))
    ok = True
    detail = []
    for N in (2, 3, 4):
        res = jacobi_residual(N)
        ok = ok and res < 1e-10
        detail.append(f"N={N}:{res:.1e}")
    checks.append(("Jacobi identity", ok, " ".join(detail)))
    return checks


def _gellmann() -> list:
    l1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], complex)
    l2 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], complex)
    l3 = np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], complex)
    l4 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], complex)
    l5 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], complex)
    l6 = np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], complex)
    l7 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], complex)
    l8 = np.diag([1, 1, -2]).astype(complex) / np.sqrt(3.0)
    return [l1, l2, l3, l4, l5, l6, l7, l8]


def jacobi_residual(N: int) -> float:
    f = structure_constants(build_generators(N))
    K = N * N - 1
    dense = np.zeros((K, K, K))
    for (a, b, c), v in f.entries.items():
        for (i, j, k, s) in (
            (a, b, c, 1), (b, a, c, -1),
        ):
            dense[i, j, k] = s * v
    jac = np.einsum("abm,mcd->abcd", dense, dense)
    total = (jac + np.einsum("bcm,mad->abcd", dense, dense)
             + np.einsum("cam,mbd->abcd", dense, dense))
    return float(np.abs(total).max())


def _verify_trotter(theory: str) -> list:
    if theory in ("anharmonic", ""):
        h = build_theory("anharmonic", {"lam": 1.0})
        cfg = DigitizationConfig(3, 3.0)
    else:
        h = build_theory("matrix_model", {"N": 2, "d": 2, "g2": 0.2})
        cfg = DigitizationConfig(1, 2.0, kinetic_realization="coordinate_basis_shift")
    res = trotter_error(h, cfg, t=1.0, n_steps=[4, 8, 16, 32])
    slope = scaling_fit(res["n_steps"], res["state_error"])
    ok = abs(slope + 1.0) < 0.15
    return [(f"Trotter order ({theory or 'anharmonic'})", ok,
             f"slope {slope:.3f}, errors "
             + " ".join(f"{e:.2e}" for e in res["state_error"]))]


def _verify_gauss() -> list:
    checks = []
    gens = gauss_generators_mm(2, 2)
    ratios = []
    for Q in (1, 2, 3):
        cfg = DigitizationConfig(Q, 2.0)
        h = build_theory("matrix_model", {"N": 2, "d": 2, "g2": 1.0})
        terms_h = product_terms_hamiltonian(h, cfg)
        rs = [commutator_frobenius_ratio(terms_h, product_terms_generator(g, cfg),
                                         cfg.levels, h.n_bosons) for g in gens]
        ratios.append(float(np.mean(rs)))
    mono = all(ratios[i + 1] < ratios[i] for i in range(len(ratios) - 1))
    checks.append(("commutator ratio decreases with Q", mono,
                   " -> ".join(f"{r:.4f}" for r in ratios)))
    h = build_theory("matrix_model", {"N": 2, "d": 2, "g2": 1.0})
    cfg = DigitizationConfig(1, 2.0, kinetic_realization="coordinate_basis_shift")
    finals = []
    for n in (4, 8, 16, 32):
        res = gauss_drift(h, gens, cfg, t=1.0, n_steps=n)
        finals.append(float(res["drift"][:, -1].max()))
    mono = all(finals[i + 1] < finals[i] + 1e-12 for i in range(len(finals) - 1))
    checks.append(("Trotterized <G> drift decreases with n", mono,
                   " -> ".join(f"{x:.2e}" for x in finals)))
    return checks


SUITES = {
    "gadgets": lambda args: _verify_gadgets(),
    "qft": lambda args: _verify_qft(),
    "encoding": lambda args: _verify_encoding(),
    "algebra": lambda args: _verify_algebra(),
    "trotter": lambda args: _verify_trotter(_theory_key(args.theory or "anharmonic")),
    "gauss": lambda args: _verify_gauss(),
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failures = 0
    for name in names:
        for label, ok, detail in SUITES[name](args):
            status = "PASS" if ok else "FAIL"
            print(f"{status} {name}: {label} [{detail}]")
            failures += 0 if ok else 1
    return 0 if failures == 0 else 1


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbiqsim",
                                 description="quartic-boson Hamiltonian compiler and verifier")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a Hamiltonian and serialize it")
    p.add_argument("theory", choices=THEORY_CHOICES)
    _add_theory_args(p)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("algebra", help="dump SU(N) generators and structure constants")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("compile", help="compile one Trotter step to circuit text")
    p.add_argument("hamiltonian", help="serialized Hamiltonian JSON")
    _add_cfg_args(p)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--model", default="t_typ=10")
    p.add_argument("--out", help="circuit text output (default stdout)")
    p.add_argument("--report", help="provenance/resource report JSON")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("count", help="closed-form resource report")
    p.add_argument("--theory", choices=THEORY_CHOICES, required=True)
    _add_theory_args(p)
    _add_cfg_args(p)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--model", default="t_typ=10")
    p.add_argument("--check-compiled", action="store_true",
                   help="also compile and require exact agreement")
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("table", help="cost-table sweep with measured exponents")
    p.add_argument("--theory", choices=THEORY_CHOICES, required=True)
    p.add_argument("--sweep", required=True, help="name=lo:hi or name=v1,v2,...")
    _add_theory_args(p)
    _add_cfg_args(p)
    p.add_argument("--model", default="t_typ=10")
    p.add_argument("--out")
    p.add_argument("--plot-dir", dest="plot_dir",
                   help="render scaling figures into this directory")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=tuple(SUITES) + ("all",))
    p.add_argument("--theory", choices=THEORY_CHOICES, default=None)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
