"""Projective measurement, reset/discard, mixtures and density operators."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gates import GateMatrix, apply_matrix, is_unitary, target_positions
from .statevec import (
    EPS_NORM,
    BlochVector,
    LabelError,
    PureState,
    check_capacity,
    empty_register,
    logical_state,
    permute_labels,
    tensor,
)

Rng = np.random.Generator

PRUNE_BELOW = 1e-15
_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def make_rng(seed: int | None = None) -> Rng:
    """Seeded generator; the only source of randomness in the package."""
    return np.random.default_rng(seed)


def _split(state: PureState, label: str) -> np.ndarray:
    """Amplitudes viewed as (2, rest) with the measured qubit on axis 0."""
    pos = state.index_of(label)
    t = state.amps.reshape((2,) * state.n)
    return np.moveaxis(t, pos, 0).reshape(2, -1)


def measure_probs(state: PureState, label: str) -> tuple[float, float]:
    """(p0, p1) with p_a = <psi|P_a|psi>."""
    halves = _split(state, label)
    p0 = float(np.vdot(halves[0], halves[0]).real)
    p1 = float(np.vdot(halves[1], halves[1]).real)
    return p0, p1


def project(state: PureState, label: str, outcome: int) -> tuple[float, PureState]:
    """Probability of ``outcome`` and the collapsed state P_a|psi>/sqrt(p_a)."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    pos = state.index_of(label)
    t = np.moveaxis(state.amps.reshape((2,) * state.n), pos, 0).copy()
    p = float(np.vdot(t[outcome], t[outcome]).real)
    if p <= 0.0:
        raise ValueError(f"outcome {outcome} on {label!r} has probability zero")
    t[1 - outcome] = 0.0
    t[outcome] /= np.sqrt(p)
    return p, PureState._owned(state.labels, np.ascontiguousarray(np.moveaxis(t, 0, pos)).reshape(-1))


def measure(state: PureState, label: str, rng: Rng) -> tuple[int, PureState]:
    p0, p1 = measure_probs(state, label)
    if p0 + p1 < PRUNE_BELOW:
        raise ValueError("both outcome probabilities vanish; state is not normalized")
    outcome = 1 if rng.random() * (p0 + p1) >= p0 else 0
    _, collapsed = project(state, label, outcome)
    return outcome, collapsed


def add_qubit(state: PureState, label: str) -> PureState:
    """Append a fresh qubit in |0>."""
    if label in state.labels:
        raise LabelError(f"there is already a qubit labeled {label!r}")
    return tensor(state, logical_state([(label, 0)]))


def drop_qubit(state: PureState, label: str) -> PureState:
    """Remove a qubit that is exactly in |0> (the last step of discard)."""
    halves = _split(state, label)
    if np.linalg.norm(halves[1]) > 1e-12:
        raise ValueError(f"qubit {label!r} is not in |0>; reset it first")
    rest = tuple(l for l in state.labels if l != label)
    return PureState(rest, halves[0].copy()) if rest else empty_register()


@dataclass(frozen=True)
class Mixture:
    """Probability distribution over pure states on one label set."""

    branches: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        branches = tuple((float(p), s) for p, s in self.branches)
        if not branches:
            raise ValueError("a mixture needs at least one branch")
        if any(p < 0 for p, _ in branches):
            raise ValueError("negative branch probability")
        total = sum(p for p, _ in branches)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"branch probabilities sum to {total}")
        labels = set(branches[0][1].labels)
        if any(set(s.labels) != labels for _, s in branches):
            raise LabelError("mixture branches live on different label sets")
        object.__setattr__(self, "branches", branches)

    @classmethod
    def pure(cls, state: PureState) -> "Mixture":
        return cls(((1.0, state),))

    @property
    def labels(self) -> tuple[str, ...]:
        return self.branches[0][1].labels

    def __len__(self):
        return len(self.branches)

    def to_json(self) -> dict:
        return {"branches": [{"p": p, "state": s.to_json()} for p, s in self.branches]}


def _as_mixture(x: PureState | Mixture) -> Mixture:
    return x if isinstance(x, Mixture) else Mixture.pure(x)


def _reset_branches(state: PureState, label: str) -> list[tuple[float, PureState]]:
    pos = state.index_of(label)
    halves = _split(state, label)
    out = []
    for a in (0, 1):
        p = float(np.vdot(halves[a], halves[a]).real)
        if p < PRUNE_BELOW:
            continue
        t = np.zeros((2, halves.shape[1]), dtype=complex)
        t[0] = halves[a] / np.sqrt(p)
        t = np.moveaxis(t.reshape((2,) * state.n), 0, pos).reshape(-1)
        out.append((p, PureState(state.labels, t)))
    return out


def reset(state: PureState | Mixture, label: str) -> Mixture:
    """Measure ``label``, flip it to |0> on outcome 1, forget the outcome."""
    mix = _as_mixture(state)
    branches = []
    for w, s in mix.branches:
        branches.extend((w * p, b) for p, b in _reset_branches(s, label))
    return _normalized(branches)


def discard(mix: PureState | Mixture, label: str) -> Mixture:
    """Reset ``label`` in every branch, then remove the qubit."""
    mix = reset(mix, label)
    return Mixture(tuple((p, drop_qubit(s, label)) for p, s in mix.branches))


def _normalized(branches) -> Mixture:
    branches = [(p, s) for p, s in branches if p >= PRUNE_BELOW]
    total = sum(p for p, _ in branches)
    return Mixture(tuple((p / total, s) for p, s in branches))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = 2 ** len(self.labels)
        if m.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return len(self.labels)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_valid(self, tol: float = 1e-9) -> bool:
        """Unit trace, Hermitian, positive semidefinite.  O(8^n); use in tests."""
        m = self.matrix
        if abs(self.trace() - 1) > EPS_NORM * max(1, m.shape[0]):
            return False
        if np.max(np.abs(m - m.conj().T)) > tol:
            return False
        return float(np.linalg.eigvalsh(m).min()) >= -tol

    def permuted(self, new_order: Sequence[str]) -> "DensityOperator":
        new_order = tuple(new_order)
        if sorted(new_order) != sorted(self.labels):
            raise LabelError(f"{new_order} is not a permutation of {self.labels}")
        axes = [self.labels.index(l) for l in new_order]
        n = self.n
        t = self.matrix.reshape((2,) * (2 * n)).transpose(axes + [a + n for a in axes])
        return DensityOperator(new_order, t.reshape(2**n, 2**n))

    def allclose(self, other: "DensityOperator", atol: float = 1e-12) -> bool:
        other = other.permuted(self.labels)
        return bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))


def density_of(mix: PureState | Mixture) -> DensityOperator:
    """sum_i p_i |psi_i><psi_i|, in the first branch's label order."""
    mix = _as_mixture(mix)
    labels = mix.labels
    check_capacity(2 * len(labels))
    rho = np.zeros((2 ** len(labels),) * 2, dtype=complex)
    for p, s in mix.branches:
        v = permute_labels(s, labels).amps
        rho += p * np.outer(v, v.conj())
    return DensityOperator(labels, rho)


def evolve_density(rho: DensityOperator, gate: GateMatrix, targets: Sequence[str]) -> DensityOperator:
    """U rho U^dagger, applied on the targeted qubits only."""
    if not is_unitary(gate):
        raise ValueError(f"{gate.name} is not unitary")
    if len(targets) != gate.arity:
        raise ValueError(f"{gate.name} acts on {gate.arity} qubits, got {tuple(targets)}")
    pos = target_positions(rho.labels, tuple(targets))
    u_rho = apply_matrix(rho.matrix, gate.matrix, pos, rho.n)
    # (U (U rho)^dag)^dag = U rho U^dag
    out = apply_matrix(u_rho.conj().T, gate.matrix, pos, rho.n).conj().T
    return DensityOperator(rho.labels, out)


def bloch_of(rho: DensityOperator) -> BlochVector:
    """Coordinates (x, y, z) with rho = (I + x sx + y sy + z sz)/2."""
    if rho.n != 1:
        raise ValueError(f"Bloch coordinates need a one-qubit operator, got {rho.n} qubits")
    x, y, z = (float(np.trace(rho.matrix @ s).real) for s in _PAULIS)
    return BlochVector(x, y, z)


def density_from_bloch(label: str, v: BlochVector | Sequence[float]) -> DensityOperator:
    x, y, z = v.as_array() if isinstance(v, BlochVector) else v
    m = (np.eye(2) + x * _PAULIS[0] + y * _PAULIS[1] + z * _PAULIS[2]) / 2
    return DensityOperator((label,), m)


def reduced_density(mix: PureState | Mixture, label: str) -> DensityOperator:
    """One-qubit density operator of ``label``, tracing out everything else."""
    rho = np.zeros((2, 2), dtype=complex)
    for p, s in _as_mixture(mix).branches:
        halves = _split(s, label)
        rho += p * halves @ halves.conj().T
    return DensityOperator((label,), rho)
