"""Gate matrices and their application to labeled registers.

Every constructor returns the matrix exactly as it is usually printed in a
gate table: rotations carry the ``e^{-i angle/2}`` phases, the phase gate does
not.  In multi-qubit matrices the first target is the most significant index
bit, so for controlled gates it is the control.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .statevec import EPS_NORM, LabelError, PureState

_SQRT1_2 = 1 / np.sqrt(2)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class GateMatrix:
    name: str
    matrix: np.ndarray
    params: tuple = field(default=())

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = m.shape[0]
        if m.ndim != 2 or m.shape[1] != dim or dim < 2 or dim & (dim - 1):
            raise ValueError(f"gate matrix must be 2^k x 2^k, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(f"{self.name}*{other.name}", self.matrix @ other.matrix)

    def dagger(self) -> "GateMatrix":
        return GateMatrix(f"{self.name}^dag", self.matrix.conj().T)

    def __eq__(self, other):
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return (
            self.name == other.name
            and self.params == other.params
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.name, self.params, self.matrix.tobytes()))

    def __repr__(self):
        params = f"{self.params}" if self.params else ""
        return f"GateMatrix({self.name}{params}, arity={self.arity})"


def is_unitary(m, tol: float = EPS_NORM) -> bool:
    m = m.matrix if isinstance(m, GateMatrix) else np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"not a square matrix: shape {m.shape}")
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) <= tol


def identity(k: int = 1) -> GateMatrix:
    return GateMatrix("I", np.eye(2**k))


def pauli(axis: str) -> GateMatrix:
    axis = axis.lower()
    if axis not in _PAULI:
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    return GateMatrix(axis.upper(), _PAULI[axis])


def not_gate() -> GateMatrix:
    return pauli("x")


def rotation(axis: str, angle: float) -> GateMatrix:
    """exp(-i sigma_axis angle/2) = cos(angle/2) I - i sin(angle/2) sigma_axis."""
    axis = axis.lower()
    if axis not in _PAULI:
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    if not np.isfinite(angle):
        raise ValueError(f"rotation angle must be finite, got {angle}")
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if axis == "x":
        m = [[c, -1j * s], [-1j * s, c]]
    elif axis == "y":
        m = [[c, -s], [s, c]]
    else:
        m = [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]]
    return GateMatrix(f"R{axis.upper()}", m, (float(angle),))


def hadamard() -> GateMatrix:
    return GateMatrix("H", _SQRT1_2 * np.array([[1, 1], [1, -1]]))


def phase_gate(phi: float) -> GateMatrix:
    """S(e^{i phi}) = diag(1, e^{i phi})."""
    return GateMatrix("S", np.diag([1, np.exp(1j * phi)]), (float(phi),))


def cnot() -> GateMatrix:
    return GateMatrix(
        "CNOT",
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    )


def toffoli() -> GateMatrix:
    # I - |11><11| + |11><11| sigma_x on the third qubit
    m = np.eye(8, dtype=complex)
    m[6:, 6:] = _PAULI["x"]
    return GateMatrix("CCX", m)


def zz_rotation(theta: float) -> GateMatrix:
    a, b = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return GateMatrix("ZZ", np.diag([a, b, b, a]), (float(theta),))


def controlled(u: GateMatrix, name: str | None = None) -> GateMatrix:
    """|0><0| (x) I + |1><1| (x) U, control on the first (most significant) qubit."""
    if not is_unitary(u):
        raise ValueError(f"controlled() needs a unitary argument, {u.name} is not")
    d = u.matrix.shape[0]
    m = np.eye(2 * d, dtype=complex)
    m[d:, d:] = u.matrix
    return GateMatrix(name or f"C{u.name}", m, u.params)


def controlled_rotation(axis: str, theta: float) -> GateMatrix:
    g = controlled(rotation(axis, theta), name="CU")
    return GateMatrix("CU", g.matrix, (axis.lower(), float(theta)))


def apply_matrix(array: np.ndarray, matrix: np.ndarray, positions: Sequence[int], n: int) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the qubit axes ``positions`` of ``array``.

    ``array`` has a leading axis of length 2^n (the register index) and any
    number of trailing batch axes.  The register axis is viewed as an n-fold
    tensor of 2-dim axes; the targeted axes are moved to the front, contracted
    with the matrix, and moved back.  The full 2^n x 2^n operator is never
    formed.
    """
    k = len(positions)
    if k == 1:
        # one target: a 2x2 combination of the two half-slices
        t = array.reshape(2 ** positions[0], 2, -1)
        if matrix[0, 1] == 0 and matrix[1, 0] == 0:
            return (t * np.diag(matrix)[:, None]).reshape(array.shape)
        out = np.empty(t.shape, dtype=np.result_type(array, matrix))
        out[:, 0] = matrix[0, 0] * t[:, 0] + matrix[0, 1] * t[:, 1]
        out[:, 1] = matrix[1, 0] * t[:, 0] + matrix[1, 1] * t[:, 1]
        return out.reshape(array.shape)
    batch = array.shape[1:]
    t = array.reshape((2,) * n + batch)
    t = np.moveaxis(t, list(positions), list(range(k)))
    moved_shape = t.shape
    t = matrix @ t.reshape(2**k, -1)
    t = np.moveaxis(t.reshape(moved_shape), list(range(k)), list(positions))
    return np.ascontiguousarray(t).reshape(array.shape)


def target_positions(labels: Sequence[str], targets: Sequence[str]) -> list[int]:
    if len(set(targets)) != len(targets):
        raise LabelError(f"duplicate targets {tuple(targets)}")
    try:
        return [labels.index(t) for t in targets]
    except ValueError:
        missing = [t for t in targets if t not in labels]
        raise LabelError(f"unknown labels {missing} (register {tuple(labels)})") from None


def apply(state: PureState, gate: GateMatrix, targets: Sequence[str]) -> PureState:
    """Apply ``gate`` to the qubits named in ``targets`` (first target = MSB of the gate)."""
    targets = tuple(targets)
    if len(targets) != gate.arity:
        raise ValueError(f"{gate.name} acts on {gate.arity} qubits, got targets {targets}")
    positions = target_positions(state.labels, targets)
    return PureState._owned(state.labels, apply_matrix(state.amps, gate.matrix, positions, state.n))


# name -> (arity, number of params), used by the circuit format
GATE_TABLE = {
    "X": (1, 0),
    "Y": (1, 0),
    "Z": (1, 0),
    "H": (1, 0),
    "S": (1, 1),
    "RX": (1, 1),
    "RY": (1, 1),
    "RZ": (1, 1),
    "CNOT": (2, 0),
    "CU": (2, 2),
    "ZZ": (2, 1),
    "CCX": (3, 0),
}


def gate_by_name(name: str, params: Sequence = ()) -> GateMatrix:
    """Construct a gate from its circuit-format name and parameters."""
    name = name.upper()
    if name not in GATE_TABLE:
        raise ValueError(f"unknown gate {name!r}")
    _, n_params = GATE_TABLE[name]
    if len(params) != n_params:
        raise ValueError(f"{name} takes {n_params} parameter(s), got {len(params)}")
    if name in ("X", "Y", "Z"):
        return pauli(name.lower())
    if name == "H":
        return hadamard()
    if name == "S":
        return phase_gate(float(params[0]))
    if name in ("RX", "RY", "RZ"):
        return rotation(name[1].lower(), float(params[0]))
    if name == "CNOT":
        return cnot()
    if name == "CU":
        return controlled_rotation(str(params[0]), float(params[1]))
    if name == "ZZ":
        return zz_rotation(float(params[0]))
    return toffoli()
