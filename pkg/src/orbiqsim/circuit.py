"""Gate and circuit data model: exact counting, text serialization, small unitaries.

Gate set: CNOT, RZ(theta) = exp(-i theta Z/2), H, S, Sdg, T, Tdg, and an
explicit GlobalPhase marker (angle phi multiplies the state by e^{i phi}).
Global phases are tracked, never silently dropped; equality checks that need
to ignore them quotient explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GATE_KINDS = ("cnot", "rz", "h", "s", "sdg", "t", "tdg", "gphase")

_FIXED_1Q = {
    "h": np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0),
    "s": np.array([[1.0, 0.0], [0.0, 1.0j]], dtype=complex),
    "sdg": np.array([[1.0, 0.0], [0.0, -1.0j]], dtype=complex),
    "t": np.array([[1.0, 0.0], [0.0, np.exp(0.25j * np.pi)]], dtype=complex),
    "tdg": np.array([[1.0, 0.0], [0.0, np.exp(-0.25j * np.pi)]], dtype=complex),
}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "cnot":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("cnot needs two distinct qubits")
        elif self.kind == "gphase":
            if self.qubits:
                raise ValueError("gphase acts on no qubits")
        elif len(self.qubits) != 1:
            raise ValueError(f"{self.kind} needs exactly one qubit")
        if not np.isfinite(self.angle):
            raise ValueError("gate angle must be finite")

    def matrix(self) -> np.ndarray:
        if self.kind == "rz":
            return np.array(
                [[np.exp(-0.5j * self.angle), 0.0], [0.0, np.exp(0.5j * self.angle)]],
                dtype=complex,
            )
        return _FIXED_1Q[self.kind]


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def rz(qubit: int, angle: float) -> Gate:
    return Gate("rz", (qubit,), angle)


def h(qubit: int) -> Gate:
    return Gate("h", (qubit,))


def s(qubit: int) -> Gate:
    return Gate("s", (qubit,))


def sdg(qubit: int) -> Gate:
    return Gate("sdg", (qubit,))


def gphase(angle: float) -> Gate:
    return Gate("gphase", (), angle)


@dataclass
class Circuit:
    """Ordered gate list with provenance segments.

    ``segments`` tags half-open gate-index ranges with the pipeline stage that
    produced them (kinetic / potential / qft / ...); ranges never overlap.
    """

    n_qubits: int
    gates: list = field(default_factory=list)
    segments: list = field(default_factory=list)  # (label, start, stop)

    def append(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} out of range for width {self.n_qubits}")
        self.gates.append(gate)

    def extend(self, gates) -> None:
        for g in gates:
            self.append(g)

    def mark_segment(self, label: str, start: int) -> None:
        if start < len(self.gates):
            self.segments.append((label, start, len(self.gates)))

    def concatenated(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("width mismatch")
        out = Circuit(self.n_qubits, list(self.gates), list(self.segments))
        off = len(out.gates)
        out.gates.extend(other.gates)
        out.segments.extend((lab, a + off, b + off) for lab, a, b in other.segments)
        return out

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class GateCounts:
    cnot: int = 0
    rz: int = 0
    h: int = 0
    s: int = 0
    sdg: int = 0
    t: int = 0
    tdg: int = 0
    gphase: int = 0
    depth: int = 0

    @property
    def clifford_1q(self) -> int:
        return self.h + self.s + self.sdg

    @property
    def total_gates(self) -> int:
        return self.cnot + self.rz + self.h + self.s + self.sdg + self.t + self.tdg + self.gphase

    def __add__(self, other: "GateCounts") -> "GateCounts":
        # depth is not additive; the sum carries max as a conservative bound-free 0
        return GateCounts(
            cnot=self.cnot + other.cnot,
            rz=self.rz + other.rz,
            h=self.h + other.h,
            s=self.s + other.s,
            sdg=self.sdg + other.sdg,
            t=self.t + other.t,
            tdg=self.tdg + other.tdg,
            gphase=self.gphase + other.gphase,
            depth=0,
        )


def count(circ: Circuit, gate_range: tuple | None = None) -> GateCounts:
    """Per-kind totals plus greedy earliest-slot depth.

    Gates on disjoint qubits share a layer; gphase occupies no layer.  When
    ``gate_range`` is given, only that half-open index range is counted (depth
    is still computed within the range).
    """
    start, stop = gate_range if gate_range is not None else (0, len(circ.gates))
    kinds = dict.fromkeys(GATE_KINDS, 0)
    frontier = [0] * circ.n_qubits
    for g in circ.gates[start:stop]:
        kinds[g.kind] += 1
        if g.qubits:
            layer = 1 + max(frontier[q] for q in g.qubits)
            for q in g.qubits:
                frontier[q] = layer
    depth = max(frontier) if frontier else 0
    return GateCounts(depth=depth, **{k: kinds[k] for k in GATE_KINDS})


def unitary(circ: Circuit) -> np.ndarray:
    """Dense unitary of the circuit, GlobalPhase included (guard: 12 qubits)."""
    if circ.n_qubits > 12:
        raise ValueError("unitary reconstruction guarded to 12 qubits")
    dim = 2**circ.n_qubits
    U = np.eye(dim, dtype=complex)
    # apply gates to all columns at once: U <- G @ U via the simulator kernels
    from . import simulator

    return simulator.apply_circuit_to_array(U, circ)


def equal_up_to_global_phase(A: np.ndarray, B: np.ndarray, tol: float = 1e-10) -> bool:
    """||A - e^{i phi} B|| <= tol for the optimal phi (Frobenius, normalized)."""
    tr = np.trace(A.conj().T @ B)
    if abs(tr) < 1e-14:
        return np.linalg.norm(A - B) <= tol
    phase = tr / abs(tr)
    return np.linalg.norm(A - phase * B) <= tol


# --- text format -----------------------------------------------------------
#
# Header line "qubits <n>", then one gate per line:
#   cnot q<c> q<t> | rz q<i> <angle> | h q<i> | s q<i> | sdg q<i>
#   | t q<i> | tdg q<i> | gphase <angle>
# Angles use 17 significant digits, which round-trips doubles bit-exactly.


def format_angle(x: float) -> str:
    return format(float(x), ".17g")


def to_text(circ: Circuit) -> str:
    lines = [f"qubits {circ.n_qubits}"]
    for g in circ.gates:
        if g.kind == "cnot":
            lines.append(f"cnot q{g.qubits[0]} q{g.qubits[1]}")
        elif g.kind == "rz":
            lines.append(f"rz q{g.qubits[0]} {format_angle(g.angle)}")
        elif g.kind == "gphase":
            lines.append(f"gphase {format_angle(g.angle)}")
        else:
            lines.append(f"{g.kind} q{g.qubits[0]}")
    return "\n".join(lines) + "\n"


def _parse_qubit(tok: str) -> int:
    if not tok.startswith("q"):
        raise ValueError(f"expected qubit token, got {tok!r}")
    return int(tok[1:])


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("missing 'qubits <n>' header")
    circ = Circuit(int(lines[0].split()[1]))
    for ln in lines[1:]:
        toks = ln.split()
        kind = toks[0]
        if kind == "cnot":
            circ.append(cnot(_parse_qubit(toks[1]), _parse_qubit(toks[2])))
        elif kind == "rz":
            circ.append(rz(_parse_qubit(toks[1]), float(toks[2])))
        elif kind == "gphase":
            circ.append(gphase(float(toks[1])))
        elif kind in ("h", "s", "sdg", "t", "tdg"):
            circ.append(Gate(kind, (_parse_qubit(toks[1]),)))
        else:
            raise ValueError(f"unknown gate line {ln!r}")
    return circ


def lower_cphase(k: int, control: int, target: int) -> list:
    """Controlled phase diag(1,1,1,e^{2 pi i / 2^k}) as 2 CNOT + 3 RZ + phase.

    The emitted sequence reproduces the controlled-phase matrix exactly once
    the recorded GlobalPhase is included (asserted by test, k <= 6).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    alpha = np.pi / 2**k
    return [
        rz(control, alpha),
        cnot(control, target),
        rz(target, -alpha),
        cnot(control, target),
        rz(target, alpha),
        gphase(alpha / 2.0),
    ]
