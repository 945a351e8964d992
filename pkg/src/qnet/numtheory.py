"""Classical number theory used around order finding.

Python integers are unbounded, so modular products never overflow; the
functions still keep every intermediate reduced modulo N.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator


def gcd(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise ValueError(f"gcd is defined here for positive integers, got ({a}, {b})")
    return math.gcd(a, b)


def _check_modulus(N: int) -> None:
    if N < 2:
        raise ValueError(f"modulus must be at least 2, got {N}")


def mod_mul(a: int, b: int, N: int) -> int:
    _check_modulus(N)
    return (a % N) * (b % N) % N


def mod_exp(q: int, e: int, N: int) -> int:
    """q^e mod N by repeated squaring: O(log e) multiplications."""
    _check_modulus(N)
    if e < 0:
        raise ValueError("negative exponent")
    result, base = 1 % N, q % N
    while e:
        if e & 1:
            result = mod_mul(result, base, N)
        base = mod_mul(base, base, N)
        e >>= 1
    return result


def _check_coprime(q: int, N: int) -> None:
    _check_modulus(N)
    if math.gcd(q, N) != 1:
        raise ValueError(f"gcd({q}, {N}) = {math.gcd(q, N)} != 1; order undefined")


def cycle_of(q: int, N: int) -> list[int]:
    """[1, q, q^2 mod N, ..., q^(k-1) mod N] where k is the order of q."""
    _check_coprime(q, N)
    cycle = [1]
    x = q % N
    while x != 1:
        cycle.append(x)
        x = mod_mul(x, q, N)
    return cycle


def multiplicative_order(q: int, N: int) -> int:
    """Smallest k >= 1 with q^k = 1 mod N, by walking the cycle."""
    return len(cycle_of(q, N))


def is_prime(N: int) -> bool:
    """Deterministic trial division; intended for N < 2^31."""
    if N < 2:
        return False
    if N < 4:
        return True
    if N % 2 == 0:
        return False
    d = 3
    while d * d <= N:
        if N % d == 0:
            return False
        d += 2
    return True


def prime_power_root(N: int) -> int | None:
    """p if N = p^k for a prime p and k >= 1, else None."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    for k in range(N.bit_length(), 0, -1):
        p = round(N ** (1.0 / k))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**k == N and is_prime(cand):
                return cand
    return None


def continued_fraction(x: Fraction) -> list[int]:
    """Terms [a0; a1, a2, ...] of a non-negative rational."""
    num, den = x.numerator, x.denominator
    terms = []
    while den:
        a, r = divmod(num, den)
        terms.append(a)
        num, den = den, r
    return terms


def convergents(x: Fraction) -> Iterator[Fraction]:
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    for a in continued_fraction(x):
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)


def recover_fraction(a: int, m: int, k_upper: int) -> Fraction | None:
    """Closest fraction l/k to a/2^m with k <= k_upper, if within 1/2^(m+1).

    When 2^m > k_upper^2 at most one fraction lies that close, so "closest" only
    matters for small m.  Exact ties go to the smaller denominator, then the smaller value.  ``None``
    means nothing qualifies and the measurement should be repeated.
    """
    if m < 0 or not 0 <= a < 2**m:
        raise ValueError(f"need 0 <= a < 2^m, got a={a}, m={m}")
    if k_upper < 1:
        raise ValueError("k_upper must be positive")
    x = Fraction(a, 2**m)
    best = x.limit_denominator(k_upper)  # best approximation via convergents
    mirror = 2 * x - best  # the only other fraction at the same distance
    if (mirror.denominator, mirror) < (best.denominator, best):
        best = mirror
    return best if abs(x - best) <= Fraction(1, 2 ** (m + 1)) else None
