"""Order finding by phase estimation, and the factor-finding driver built on it.

Registers
---------
The system register holding ``x`` uses labels ``s{n-1} ... s0`` (most
significant first) and the phase-estimation ancillas ``anc{m-1} ... anc0``.
Ancilla ``anc{l}`` controls ``f^(2^l)``, so the ancilla register read in label
order is the binary number ``b`` for which ``f^b`` was applied.  The measured
Fourier transform writes the digits of the outcome to classical bits
``a0 ... a{m-1}`` (``a0`` least significant).
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import network as net
from .gates import GateMatrix, controlled, hadamard, not_gate, phase_gate
from .measure import Rng, make_rng
from .numtheory import (
    gcd,
    is_prime,
    mod_exp,
    mod_mul,
    multiplicative_order,
    prime_power_root,
    recover_fraction,
    cycle_of,
)
from .statevec import MAX_QUBITS, CapacityError, PureState, from_amplitudes, permute_labels

log = logging.getLogger(__name__)


class OrderFindingError(RuntimeError):
    pass


class FactoringError(RuntimeError):
    pass


def ceil_log2(N: int) -> int:
    return (N - 1).bit_length()


def system_labels(n_sys: int) -> tuple[str, ...]:
    return tuple(f"s{j}" for j in reversed(range(n_sys)))


def ancilla_labels(m: int) -> tuple[str, ...]:
    return tuple(f"anc{j}" for j in reversed(range(m)))


@dataclass(frozen=True)
class ModMulOperator:
    """|x> -> |q x mod N> for x < N; basis states x >= N are left alone."""

    q: int
    N: int
    n_sys: int

    def __call__(self, x: int) -> int:
        return mod_mul(self.q, x, self.N) if x < self.N else x

    def permutation(self) -> np.ndarray:
        return np.array([self(x) for x in range(2**self.n_sys)])

    def gate(self) -> GateMatrix:
        return _perm_gate(self.q, self.N, self.n_sys)

    def controlled_gate(self) -> GateMatrix:
        return _controlled_perm_gate(self.q, self.N, self.n_sys)


@lru_cache(maxsize=256)
def _perm_gate(q: int, N: int, n_sys: int) -> GateMatrix:
    dim = 2**n_sys
    m = np.zeros((dim, dim))
    for x in range(dim):
        m[mod_mul(q, x, N) if x < N else x, x] = 1
    return GateMatrix(f"f[{q} mod {N}]", m, (q, N))


@lru_cache(maxsize=256)
def _controlled_perm_gate(q: int, N: int, n_sys: int) -> GateMatrix:
    return controlled(_perm_gate(q, N, n_sys))


def mod_mul_operator(q: int, N: int) -> ModMulOperator:
    if not 1 < q < N:
        raise ValueError(f"need 1 < q < N, got q={q}, N={N}")
    if gcd(q, N) != 1:
        raise ValueError(f"gcd({q}, {N}) != 1")
    return ModMulOperator(q, N, ceil_log2(N))


def powered(op: ModMulOperator, e: int) -> ModMulOperator:
    """The operator for q^e mod N, e a power of two, by repeated squaring of q."""
    if e < 1 or e & (e - 1):
        raise ValueError(f"exponent must be a power of two, got {e}")
    q = op.q
    while e > 1:
        q = mod_mul(q, q, op.N)
        e >>= 1
    return ModMulOperator(q, op.N, op.n_sys)


def fourier_cycle_state(q: int, N: int, m: int, labels: tuple[str, ...] | None = None) -> PureState:
    """sum_l w^(-l m) |q^l mod N> / sqrt(k) with w = exp(2 pi i / k), k the order of q.

    The conjugate phase makes f|psi_m> = w^m |psi_m>, so phase kickback from
    psi_m puts w^m on the control.
    """
    cycle = cycle_of(q, N)
    k = len(cycle)
    if not 0 <= m < k:
        raise ValueError(f"Fourier index must be in [0, {k}), got {m}")
    n_sys = ceil_log2(N)
    labels = labels or system_labels(n_sys)
    amps = np.zeros(2**n_sys, dtype=complex)
    for l, x in enumerate(cycle):
        amps[x] = np.exp(-2j * np.pi * ((l * m) % k) / k)
    return from_amplitudes(labels, amps / np.sqrt(k))


def fourier_ancilla_state(a: int, m: int, labels: tuple[str, ...] | None = None) -> PureState:
    """|u_a> = sum_b exp(2 pi i a b / 2^m) |b> / sqrt(2^m) on m ancillas."""
    M = 2**m
    b = np.arange(M)
    amps = np.exp(2j * np.pi * ((a * b) % M) / M) / np.sqrt(M)
    return from_amplitudes(labels or ancilla_labels(m), amps)


def kickback_network(op: ModMulOperator, m_ancilla: int, system: tuple[str, ...] | None = None) -> net.Network:
    """Add m ancillas in (|0>+|1>)/sqrt2 and apply controlled f^(2^l) from ancilla l.

    The system register must already exist when the network runs.
    """
    if m_ancilla < 1:
        raise ValueError("need at least one ancilla")
    system = system or system_labels(op.n_sys)
    if len(system) + m_ancilla > MAX_QUBITS:
        raise CapacityError(f"{len(system)} + {m_ancilla} qubits exceed capacity {MAX_QUBITS}")
    anc = ancilla_labels(m_ancilla)
    H = hadamard()
    ins = [net.add(a) for a in anc] + [net.gate(H, a) for a in anc]
    for l in range(m_ancilla):
        ins.append(net.gate(powered(op, 2**l).controlled_gate(), f"anc{l}", *system))
    return net.Network(ins)


def measured_qft_network(m: int, ancillas: tuple[str, ...] | None = None, checkpoints: bool = False) -> net.Network:
    """Fourier-basis measurement using Hadamards, measurements and feed-forward phases.

    The most significant ancilla is measured first and yields a0.  Before the
    qubit that yields a_j is rotated, a phase S(e^{-i pi / 2^(j-t)}) conditioned
    on each earlier outcome a_t removes the known low-order part of its phase.
    """
    if m < 1:
        raise ValueError("need at least one qubit")
    ancillas = ancillas or ancilla_labels(m)
    if len(ancillas) != m:
        raise ValueError(f"expected {m} ancilla labels, got {len(ancillas)}")
    H = hadamard()
    ins = [net.checkpoint("in")] if checkpoints else []
    for j, qubit in enumerate(ancillas):
        for t in range(j):
            ins.append(net.gate(phase_gate(-np.pi / 2 ** (j - t)), qubit, condition=f"a{t}"))
        ins.append(net.gate(H, qubit))
        if checkpoints:
            ins.append(net.checkpoint(f"h{j}"))
        ins.append(net.meas(qubit, f"a{j}"))
    return net.Network(ins)


def state_prep_network(n_sys: int) -> net.Network:
    """Add the system register and set it to |1>."""
    labels = system_labels(n_sys)
    return net.Network([net.add(s) for s in labels] + [net.gate(not_gate(), labels[-1])])


def default_m(N: int) -> int:
    return 2 * ceil_log2(N)


def order_finding_network(q: int, N: int, m: int | None = None) -> net.Network:
    """State preparation, phase kickback and the measured Fourier transform."""
    op = mod_mul_operator(q, N)
    m = m or default_m(N)
    full = state_prep_network(op.n_sys)
    full += kickback_network(op, m)
    full += measured_qft_network(m)
    return full


@lru_cache(maxsize=32)
def _kicked_state(q: int, N: int, m: int) -> PureState:
    # prep + kickback contain no measurements, so one run is the exact pre-measurement state
    op = mod_mul_operator(q, N)
    prefix = state_prep_network(op.n_sys)
    prefix += kickback_network(op, m)
    return net.execute(prefix, make_rng(0)).final


@dataclass
class OrderAttempt:
    measured_bits: list[int]
    a: int
    fraction: Fraction | None
    candidate: int | None
    order: int | None


def _prime_divisors(s: int) -> list[int]:
    out, p = [], 2
    while p * p <= s:
        if s % p == 0:
            out.append(p)
            while s % p == 0:
                s //= p
        p += 1
    return out + [s] if s > 1 else out


def _is_order(q: int, s: int, N: int) -> bool:
    """q^s = 1 mod N and q^(s/p) != 1 for every prime p dividing s."""
    if s < 1 or mod_exp(q, s, N) != 1:
        return False
    return all(mod_exp(q, s // p, N) != 1 for p in _prime_divisors(s))


@lru_cache(maxsize=32)
def _ancilla_ensemble(q: int, N: int, m: int) -> tuple[np.ndarray, tuple[PureState, ...]]:
    """Split the kicked state by system basis value x: weights p_x and ancilla states."""
    n_sys = ceil_log2(N)
    state = permute_labels(_kicked_state(q, N, m), system_labels(n_sys) + ancilla_labels(m))
    blocks = state.amps.reshape(2**n_sys, 2**m)
    weights = np.einsum("xa,xa->x", blocks, blocks.conj()).real
    keep = np.flatnonzero(weights > 1e-15)
    states = tuple(from_amplitudes(ancilla_labels(m), blocks[x], normalize=True) for x in keep)
    p = weights[keep]
    return p / p.sum(), states


def order_finding_attempt(q: int, N: int, rng: Rng, m: int | None = None, full_register: bool = False) -> OrderAttempt:
    """One run of the order-finding network plus classical post-processing.

    The measured Fourier transform acts on the ancillas only, so by default the
    system register is measured first (it commutes with everything after the
    kickback) and the network runs on the m-qubit ancilla state.  Outcome
    statistics are unchanged; ``full_register=True`` keeps every qubit.
    """
    op = mod_mul_operator(q, N)
    m = m or default_m(N)
    if op.n_sys + m > MAX_QUBITS:
        raise CapacityError(f"{op.n_sys} + {m} qubits exceed capacity {MAX_QUBITS}")
    if full_register:
        initial = _kicked_state(q, N, m)
    else:
        p, states = _ancilla_ensemble(q, N, m)
        initial = states[rng.choice(len(states), p=p)]
    trace = net.execute(measured_qft_network(m), rng, initial=initial)
    bits = [trace.classical_bits[f"a{j}"] for j in range(m)]
    a = sum(bit << j for j, bit in enumerate(bits))
    frac = recover_fraction(a, m, N - 1)
    cand = frac.denominator if frac is not None else None
    order = cand if cand is not None and _is_order(q, cand, N) else None
    return OrderAttempt(bits, a, frac, cand, order)


@dataclass
class OrderResult:
    q: int
    N: int
    order: int
    backend: str
    m: int | None = None
    attempts: int = 1
    last: OrderAttempt | None = None


def find_order(
    q: int,
    N: int,
    rng: Rng,
    backend: str = "quantum",
    m: int | None = None,
    max_attempts: int = 32,
) -> OrderResult:
    if backend == "classical":
        return OrderResult(q, N, multiplicative_order(q, N), "classical")
    if backend != "quantum":
        raise ValueError(f"unknown backend {backend!r}")
    m = m or default_m(N)
    for i in range(1, max_attempts + 1):
        att = order_finding_attempt(q, N, rng, m)
        log.debug("order attempt %d for %d mod %d: a=%d fraction=%s", i, q, N, att.a, att.fraction)
        if att.order is not None:
            return OrderResult(q, N, att.order, "quantum", m, i, att)
    raise OrderFindingError(f"no verified order of {q} mod {N} after {max_attempts} attempts")


def quantum_order_find(q: int, N: int, rng: Rng, max_attempts: int = 32, m: int | None = None) -> int:
    return find_order(q, N, rng, "quantum", m, max_attempts).order


@dataclass
class FactorConfig:
    quantum_threshold: int = 64
    m: int | None = None
    max_attempts: int = 32


@dataclass
class FactorRunRecord:
    N: int
    q: int | None = None
    backend: str = ""
    m: int | None = None
    measured_bits: list[int] | None = None
    a: int | None = None
    fraction: str | None = None
    order: int | None = None
    r: int | None = None
    factor: int | None = None
    attempts: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def factor_attempt(N: int, q: int, rng: Rng, config: FactorConfig | None = None) -> FactorRunRecord | None:
    """Steps 3.a-5.c for a fixed q; None means pick another q."""
    config = config or FactorConfig()
    rec = FactorRunRecord(N, q)
    f = gcd(q, N)
    if f > 1:
        rec.backend, rec.factor = "gcd", f
        return rec
    backend = "quantum" if N <= config.quantum_threshold else "classical"
    try:
        res = find_order(q, N, rng, backend, config.m, config.max_attempts)
    except OrderFindingError:
        return None
    rec.backend, rec.order, rec.m = res.backend, res.order, res.m
    if res.last is not None:
        rec.measured_bits, rec.a = res.last.measured_bits, res.last.a
        rec.fraction = str(res.last.fraction)
    if res.order % 2:
        return None
    rec.r = mod_exp(q, res.order // 2, N)
    for f in (gcd(rec.r - 1, N), gcd(rec.r + 1, N)):
        if 1 < f < N:
            rec.factor = f
            return rec
    return None


def run_factor_find(N: int, rng: Rng, config: FactorConfig | None = None) -> FactorRunRecord:
    config = config or FactorConfig()
    if N < 4 or is_prime(N):
        raise ValueError(f"{N} is prime or too small; a proper factor needs a composite N")
    if N % 2 == 0:
        return FactorRunRecord(N, backend="even", factor=2)
    p = prime_power_root(N)
    if p is not None:
        return FactorRunRecord(N, backend="prime-power", factor=p)
    for attempt in range(1, config.max_attempts + 1):
        q = int(rng.integers(2, N - 1))
        rec = factor_attempt(N, q, rng, config)
        if rec is not None:
            rec.attempts = attempt
            return rec
    raise FactoringError(f"no proper factor of {N} found in {config.max_attempts} rounds")


def factor_find(N: int, rng: Rng, config: FactorConfig | None = None) -> int:
    """A proper factor f of composite N (1 < f < N, f | N)."""
    return run_factor_find(N, rng, config).factor
