"""Labeled-qubit state-vector simulation with parity and order-finding algorithms."""
from .gates import GateMatrix, apply, cnot, controlled, hadamard, not_gate, phase_gate, rotation, toffoli
from .measure import Mixture, density_of, make_rng, measure_probs, reset
from .network import Network, build_qparity, execute, resource_count, validate
from .numtheory import mod_exp, multiplicative_order, recover_fraction
from .shor import factor_find, fourier_cycle_state, mod_mul_operator, quantum_order_find
from .statevec import PureState, from_amplitudes, logical_state, tensor

__all__ = [
    "GateMatrix", "apply", "cnot", "controlled", "hadamard", "not_gate", "phase_gate", "rotation", "toffoli",
    "Mixture", "density_of", "make_rng", "measure_probs", "reset",
    "Network", "build_qparity", "execute", "resource_count", "validate",
    "mod_exp", "multiplicative_order", "recover_fraction",
    "factor_find", "fourier_cycle_state", "mod_mul_operator", "quantum_order_find",
    "PureState", "from_amplitudes", "logical_state", "tensor",
]
__version__ = "0.1.0"
