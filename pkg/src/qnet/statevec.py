"""Pure states of labeled qubit registers.

Amplitudes are stored densely in index order, where the first label of the
register is the most significant bit of the index.  ``|01>_AB`` therefore has
its amplitude at index 1 and ``|10>_AB`` at index 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

EPS_NORM = 1e-10
MAX_QUBITS = 24


class CapacityError(ValueError):
    """Raised when a register would exceed ``MAX_QUBITS`` dense qubits."""


class LabelError(ValueError):
    """Unknown, duplicate or mismatched qubit labels."""


def check_capacity(n: int) -> None:
    if n > MAX_QUBITS:
        raise CapacityError(
            f"{n} qubits requested; dense simulation is capped at {MAX_QUBITS}"
        )


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over an ordered tuple of qubit labels."""

    labels: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in register {labels}")
        check_capacity(len(labels))
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.shape[0] != 2 ** len(labels):
            raise ValueError(
                f"{len(labels)} labels need {2 ** len(labels)} amplitudes, got {amps.shape[0]}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def _owned(cls, labels: tuple[str, ...], amps: np.ndarray) -> "PureState":
        # for freshly computed complex arrays on an already-validated label tuple
        amps.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "labels", labels)
        object.__setattr__(obj, "amps", amps)
        return obj

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def is_normalized(self, tol: float = EPS_NORM) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"no qubit labeled {label!r} in {self.labels}") from None

    def amplitude(self, bits: str | Sequence[int]) -> complex:
        """Amplitude of the logical state given as a bit string in label order."""
        bits = [int(b) for b in bits]
        if len(bits) != self.n:
            raise ValueError(f"expected {self.n} bits, got {len(bits)}")
        return complex(self.amps[_bits_to_index(bits)])

    def scaled(self, factor: complex) -> "PureState":
        return PureState(self.labels, self.amps * factor)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PureState":
        amps = [complex(re, im) for re, im in data["amps"]]
        return cls(tuple(data["labels"]), np.array(amps))

    def __repr__(self):
        return f"PureState(labels={self.labels}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def length(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def _bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b}")
        index = (index << 1) | b
    return index


def empty_register() -> PureState:
    """The state of zero qubits: a single amplitude equal to 1."""
    return PureState((), np.ones(1))


def logical_state(bits: Iterable[tuple[str, int]]) -> PureState:
    """Logical basis state from ``(label, bit)`` pairs, first pair most significant."""
    bits = list(bits)
    labels = tuple(label for label, _ in bits)
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate labels in {labels}")
    check_capacity(len(labels))
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[_bits_to_index([b for _, b in bits])] = 1.0
    return PureState(labels, amps)


def from_amplitudes(labels: Sequence[str], amps, normalize: bool = False) -> PureState:
    """Build a state from raw amplitudes, optionally rescaling to unit norm.

    Without ``normalize`` the vector must already have unit length within
    ``EPS_NORM``.
    """
    amps = np.asarray(amps, dtype=complex)
    norm = np.linalg.norm(amps)
    if normalize:
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        amps = amps / norm
    elif abs(norm - 1.0) > EPS_NORM:
        raise ValueError(f"amplitudes have norm {norm}, expected 1")
    return PureState(tuple(labels), amps)


def random_state(labels: Sequence[str], rng: np.random.Generator) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dim = 2 ** len(labels)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return from_amplitudes(labels, v, normalize=True)


def _same_label_set(a: PureState, b: PureState) -> None:
    if set(a.labels) != set(b.labels) or a.n != b.n:
        raise LabelError(f"label sets differ: {a.labels} vs {b.labels}")


def permute_labels(s: PureState, new_order: Sequence[str]) -> PureState:
    """Reorder the register without changing the physical state.

    >>> permute_labels(logical_state([("A", 0), ("B", 1)]), ["B", "A"]).amplitude("10")
    (1+0j)
    """
    new_order = tuple(new_order)
    if sorted(new_order) != sorted(s.labels) or len(set(new_order)) != len(new_order):
        raise LabelError(f"{new_order} is not a permutation of {s.labels}")
    if new_order == s.labels or s.n == 0:
        return s
    axes = [s.labels.index(label) for label in new_order]
    tensor = s.amps.reshape((2,) * s.n).transpose(axes)
    return PureState(new_order, tensor.reshape(-1))


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, with ``b`` first brought into ``a``'s label order."""
    _same_label_set(a, b)
    b = permute_labels(b, a.labels)
    return complex(np.vdot(a.amps, b.amps))


def tensor(a: PureState, b: PureState) -> PureState:
    """Product state of registers with disjoint labels; ``a``'s labels come first."""
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise LabelError(f"registers share labels {sorted(overlap)}")
    check_capacity(a.n + b.n)
    return PureState(a.labels + b.labels, np.kron(a.amps, b.amps))


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = 1e-9) -> bool:
    return abs(inner_product(a, b)) >= 1.0 - tol


def allclose(a: PureState, b: PureState, atol: float = 1e-12) -> bool:
    """Amplitude-wise comparison after aligning label order."""
    _same_label_set(a, b)
    return bool(np.allclose(a.amps, permute_labels(b, a.labels).amps, rtol=0, atol=atol))


def product_state(*factors: tuple[str, Sequence[complex]]) -> PureState:
    """Kronecker product of single-qubit vectors, e.g. ``product_state(("A", [1, 0]), ...)``."""
    state = empty_register()
    for label, vec in factors:
        state = tensor(state, from_amplitudes([label], vec))
    return state
