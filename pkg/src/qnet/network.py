"""Quantum networks: instruction lists over labeled qubits with classical feed-forward.

A network is executed left to right.  Measurements write classical bits;
any instruction may carry a ``condition`` naming a classical bit that must be
1 for it to fire.  Checkpoints snapshot the state without affecting it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import measure as M
from .gates import GateMatrix, apply, hadamard, not_gate
from .statevec import MAX_QUBITS, PureState, empty_register

ADD = "add"
GATE = "gate"
ORACLE = "oracle"
MEASURE = "measure"
RESET = "reset"
DISCARD = "discard"
CHECKPOINT = "checkpoint"
KINDS = (ADD, GATE, ORACLE, MEASURE, RESET, DISCARD, CHECKPOINT)


@dataclass(frozen=True)
class Instruction:
    kind: str
    targets: tuple[str, ...] = ()
    gate: GateMatrix | None = None
    oracle: str | None = None
    cbit: str | None = None
    tag: str | None = None
    condition: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown instruction kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(self.targets))


def add(label: str) -> Instruction:
    return Instruction(ADD, (label,))


def gate(g: GateMatrix, *targets: str, condition: str | None = None) -> Instruction:
    return Instruction(GATE, targets, gate=g, condition=condition)


def oracle(name: str, *targets: str, condition: str | None = None) -> Instruction:
    return Instruction(ORACLE, targets, oracle=name, condition=condition)


def meas(label: str, cbit: str, condition: str | None = None) -> Instruction:
    return Instruction(MEASURE, (label,), cbit=cbit, condition=condition)


def reset(label: str, condition: str | None = None) -> Instruction:
    return Instruction(RESET, (label,), condition=condition)


def discard(label: str, condition: str | None = None) -> Instruction:
    return Instruction(DISCARD, (label,), condition=condition)


def checkpoint(tag: str) -> Instruction:
    return Instruction(CHECKPOINT, tag=str(tag))


@dataclass
class Network:
    instructions: list[Instruction] = field(default_factory=list)
    oracles: dict[str, GateMatrix] = field(default_factory=dict)

    def __iadd__(self, other):
        if isinstance(other, Network):
            self.instructions.extend(other.instructions)
            self.oracles.update(other.oracles)
        else:
            self.instructions.extend(other)
        return self

    def __len__(self):
        return len(self.instructions)


class Diagnostic(NamedTuple):
    index: int
    message: str

    def __str__(self):
        return f"instruction {self.index}: {self.message}"


class NetworkError(ValueError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def validate(
    net: Network,
    initial_labels: Sequence[str] = (),
    oracles: Mapping[str, GateMatrix] | None = None,
) -> list[Diagnostic]:
    """Static checks: label liveness, arities, oracle bindings, conditions, capacity."""
    bound = {**net.oracles, **(oracles or {})}
    live = list(initial_labels)
    gone: set[str] = set()
    cbits: set[str] = set()
    out: list[Diagnostic] = []

    for i, ins in enumerate(net.instructions):
        if ins.condition is not None and ins.condition not in cbits:
            out.append(Diagnostic(i, f"condition on classical bit {ins.condition!r} before it is measured"))
        if ins.kind == CHECKPOINT:
            continue
        if ins.kind == ADD:
            (label,) = ins.targets
            if label in live:
                out.append(Diagnostic(i, f"duplicate add of qubit {label!r}"))
                continue
            live.append(label)
            gone.discard(label)
            if len(live) > MAX_QUBITS:
                out.append(Diagnostic(i, f"{len(live)} live qubits exceed capacity {MAX_QUBITS}"))
            continue

        if len(set(ins.targets)) != len(ins.targets):
            out.append(Diagnostic(i, f"duplicate targets {ins.targets}"))
        for t in ins.targets:
            if t not in live:
                what = "discarded" if t in gone else "never-added"
                out.append(Diagnostic(i, f"{ins.kind} on {what} qubit {t!r}"))

        if ins.kind == GATE:
            if ins.gate is None:
                out.append(Diagnostic(i, "gate instruction without a matrix"))
            elif ins.gate.arity != len(ins.targets):
                out.append(Diagnostic(i, f"{ins.gate.name} acts on {ins.gate.arity} qubits, given {len(ins.targets)}"))
        elif ins.kind == ORACLE:
            g = bound.get(ins.oracle)
            if g is None:
                out.append(Diagnostic(i, f"oracle {ins.oracle!r} is not declared"))
            elif g.arity != len(ins.targets):
                out.append(Diagnostic(i, f"oracle {ins.oracle!r} acts on {g.arity} qubits, given {len(ins.targets)}"))
        elif ins.kind == MEASURE:
            if not ins.cbit:
                out.append(Diagnostic(i, "measurement without a classical bit"))
            else:
                cbits.add(ins.cbit)
        elif ins.kind == DISCARD:
            for t in ins.targets:
                if t in live:
                    live.remove(t)
                    gone.add(t)
    return out


@dataclass
class ExecutionTrace:
    final: PureState | M.Mixture
    classical_bits: dict[str, int]
    checkpoints: dict[str, PureState | M.Mixture]

    def to_json(self, dump_state: bool = False, include_checkpoints: bool = True) -> dict:
        out: dict = {"classical_bits": dict(self.classical_bits)}
        if include_checkpoints:
            out["checkpoints"] = {tag: s.to_json() for tag, s in self.checkpoints.items()}
        if dump_state:
            out["state"] = self.final.to_json()
        return out


def _collapse(branches, label: str, rng: M.Rng):
    """Measure ``label`` on a list of weighted pure branches."""
    probs = [(w, M.measure_probs(s, label)) for w, s in branches]
    p1 = sum(w * p[1] for w, p in probs)
    p0 = sum(w * p[0] for w, p in probs)
    outcome = 1 if rng.random() * (p0 + p1) >= p0 else 0
    p_out = p1 if outcome else p0
    new = []
    for (w, s), (_, p) in zip(branches, probs):
        if w * p[outcome] / p_out < M.PRUNE_BELOW:
            continue
        new.append((w * p[outcome] / p_out, M.project(s, label, outcome)[1]))
    return outcome, new


def _snapshot(branches):
    if len(branches) == 1:
        return branches[0][1]
    return M.Mixture(tuple(branches))


def execute(
    net: Network,
    rng: M.Rng,
    initial: PureState | None = None,
    oracles: Mapping[str, GateMatrix] | None = None,
) -> ExecutionTrace:
    """Run ``net`` once.  ``initial`` supplies pre-existing qubits; ``oracles`` binds black boxes.

    The state is tracked as a list of weighted pure branches so that reset and
    discard are exact (no sampling); measurements sample from the total
    distribution and collapse every branch.
    """
    initial = initial if initial is not None else empty_register()
    problems = validate(net, initial.labels, oracles)
    if problems:
        raise NetworkError(problems)
    bound = {**net.oracles, **(oracles or {})}

    branches: list[tuple[float, PureState]] = [(1.0, initial)]
    bits: dict[str, int] = {}
    snaps: dict[str, PureState | M.Mixture] = {}

    for ins in net.instructions:
        if ins.kind == CHECKPOINT:
            snaps[ins.tag] = _snapshot(branches)
            continue
        if ins.condition is not None and bits[ins.condition] != 1:
            continue
        if ins.kind == ADD:
            branches = [(w, M.add_qubit(s, ins.targets[0])) for w, s in branches]
        elif ins.kind in (GATE, ORACLE):
            g = ins.gate if ins.kind == GATE else bound[ins.oracle]
            branches = [(w, apply(s, g, ins.targets)) for w, s in branches]
        elif ins.kind == MEASURE:
            bits[ins.cbit], branches = _collapse(branches, ins.targets[0], rng)
        elif ins.kind in (RESET, DISCARD):
            op = M.reset if ins.kind == RESET else M.discard
            branches = list(op(M.Mixture(tuple(branches)), ins.targets[0]).branches)

    return ExecutionTrace(_snapshot(branches), bits, snaps)


@dataclass(frozen=True)
class ResourceReport:
    qubit_count: int
    gate_count: int
    oracle_calls: int
    irreversible_ops: int
    parallel_depth: int


def resource_count(net: Network, initial_labels: Sequence[str] = ()) -> ResourceReport:
    """Space, work and parallel time of a network.

    ``gate_count`` counts every non-oracle operation, adds and measurements
    included; oracle calls are reported separately.  Depth comes from greedy
    leveling: an instruction is placed one level after the latest instruction
    sharing a qubit or classical bit with it.  Oracle calls occupy a level.
    """
    live = set(initial_labels)
    peak = len(live)
    gates = oracles = irreversible = 0
    for ins in net.instructions:
        if ins.kind == CHECKPOINT:
            continue
        if ins.kind == ORACLE:
            oracles += 1
        else:
            gates += 1
        if ins.kind in (MEASURE, RESET, DISCARD):
            irreversible += 1
        if ins.kind == ADD:
            live.add(ins.targets[0])
            peak = max(peak, len(live))
        elif ins.kind == DISCARD:
            live.discard(ins.targets[0])
    depth = max((lv for lv in instruction_levels(net) if lv is not None), default=0)
    return ResourceReport(peak, gates, oracles, irreversible, depth)


def instruction_levels(net: Network) -> list[int | None]:
    """Level assigned to each instruction by ``resource_count`` (None for checkpoints)."""
    q_level: dict[str, int] = {}
    c_level: dict[str, int] = {}
    out: list[int | None] = []
    for ins in net.instructions:
        if ins.kind == CHECKPOINT:
            out.append(None)
            continue
        touched_bits = [b for b in (ins.condition, ins.cbit) if b is not None]
        level = 1 + max(
            [q_level.get(t, 0) for t in ins.targets] + [c_level.get(b, 0) for b in touched_bits],
            default=0,
        )
        for t in ins.targets:
            q_level[t] = level
        for b in touched_bits:
            c_level[b] = level
        out.append(level)
    return out


# --- the parity problem -------------------------------------------------------

def parity_black_box(b_a: int, b_b: int) -> GateMatrix:
    """|aA aB>|aC> -> |aA aB>|aC xor (bA aA xor bB aB)>, as an 8x8 permutation on (A, B, C)."""
    if b_a not in (0, 1) or b_b not in (0, 1):
        raise ValueError("parity bits must be 0 or 1")
    m = np.zeros((8, 8))
    for x in range(8):
        a_a, a_b, a_c = (x >> 2) & 1, (x >> 1) & 1, x & 1
        y = (a_a << 2) | (a_b << 1) | (a_c ^ (b_a & a_a) ^ (b_b & a_b))
        m[y, x] = 1
    return GateMatrix("BB", m, (b_a, b_b))


def build_qparity(black_box: GateMatrix | None = None) -> Network:
    """The one-query parity network on qubits A, B, C with checkpoints 1-5.

    The black box is referenced by the oracle name ``"BB"``; pass it here or
    bind it at execution time.  Checkpoint 4 sits right after the oracle,
    checkpoint 5 after the final Hadamards, just before measurement.
    """
    H, X = hadamard(), not_gate()
    ins = [
        add("A"), add("B"), add("C"),
        checkpoint("1"),
        gate(H, "A"), gate(H, "B"), gate(X, "C"),
        checkpoint("2"),
        gate(H, "C"),
        checkpoint("3"),
        oracle("BB", "A", "B", "C"),
        checkpoint("4"),
        gate(H, "A"), gate(H, "B"),
        checkpoint("5"),
        meas("A", "c_A"), meas("B", "c_B"),
    ]
    return Network(ins, {"BB": black_box} if black_box is not None else {})


def solve_parity(black_box: GateMatrix, rng: M.Rng) -> tuple[int, int]:
    trace = execute(build_qparity(), rng, oracles={"BB": black_box})
    return trace.classical_bits["c_A"], trace.classical_bits["c_B"]


class ClassicalParity(NamedTuple):
    b_a: int
    b_b: int
    oracle_calls: int


def classical_parity_queries(b_a: int, b_b: int) -> ClassicalParity:
    """Classical baseline: query the box on inputs 10 and 01, one answer bit each."""
    calls = 0

    def box(a_a: int, a_b: int) -> int:
        nonlocal calls
        calls += 1
        return (b_a & a_a) ^ (b_b & a_b)

    first = box(1, 0)
    second = box(0, 1)
    return ClassicalParity(first, second, calls)
