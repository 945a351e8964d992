"""Independent brute-force reference implementations used only by the tests."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def kron_operator(gate: np.ndarray, positions: list[int], n: int) -> np.ndarray:
    """Full 2^n x 2^n operator of ``gate`` on qubit ``positions`` (MSB-first indices).

    Built as P^T (G kron I) P where P reorders the bits so the targets come first.
    """
    k = len(positions)
    rest = [p for p in range(n) if p not in positions]
    order = list(positions) + rest
    dim = 2**n
    P = np.zeros((dim, dim))
    for x in range(dim):
        bits = [(x >> (n - 1 - p)) & 1 for p in range(n)]
        y = 0
        for p in order:
            y = (y << 1) | bits[p]
        P[y, x] = 1
    full = np.kron(gate, np.eye(2 ** (n - k)))
    return P.T @ full @ P


def best_fraction_scan(a: int, m: int, k_upper: int) -> Fraction | None:
    """Every l/k with k <= k_upper; keep those within 1/2^(m+1); closest wins, ties by (k, value)."""
    x = Fraction(a, 2**m)
    tol = Fraction(1, 2 ** (m + 1))
    hits = set()
    for k in range(1, k_upper + 1):
        for l in range(0, k + 1):
            f = Fraction(l, k)
            if abs(x - f) <= tol:
                hits.add(f)
    if not hits:
        return None
    return min(hits, key=lambda f: (abs(x - f), f.denominator, f))


def brute_order(q: int, N: int) -> int:
    for k in range(1, N + 1):
        if pow(q, k, N) == 1:
            return k
    raise AssertionError("no order")


def naive_mod_exp(q: int, e: int, N: int) -> int:
    r = 1 % N
    for _ in range(e):
        r = (r * q) % N
    return r


def euler_phi(N: int) -> int:
    return sum(1 for x in range(1, N) if math.gcd(x, N) == 1)


def rodrigues(v: np.ndarray, axis: str, theta: float) -> np.ndarray:
    """Right-handed rotation of a 3-vector by theta about a coordinate axis."""
    u = {"x": np.array([1.0, 0, 0]), "y": np.array([0, 1.0, 0]), "z": np.array([0, 0, 1.0])}[axis]
    return v * math.cos(theta) + np.cross(u, v) * math.sin(theta) + u * (u @ v) * (1 - math.cos(theta))


def bits_of(a: int, m: int) -> list[int]:
    """Binary digits of a, least significant first."""
    return [(a >> j) & 1 for j in range(m)]


def all_bitstrings(n: int):
    return itertools.product((0, 1), repeat=n)
