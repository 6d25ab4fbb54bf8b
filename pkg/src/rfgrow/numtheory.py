"""Primes, lcm{1..k}, Chebyshev psi, and the witness exponents.

A witness exponent for the i-th prime p (1-indexed, p_1 = 2) is
``lcm(1..p-1)`` when the nilpotent depth is 1 and ``lcm(1..p-1)**(m+2)``
for depth ``m > 1``.  Raising an element to that power kills it in every
finite quotient that is too small.
"""
from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass

_sieve_lock = threading.Lock()
_sieve_cache: list[int] = []
_sieve_limit = 1


def primes_up_to(k: int) -> list[int]:
    """Return the primes ``<= k`` in ascending order."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k < 2:
        return []
    with _sieve_lock:
        global _sieve_cache, _sieve_limit
        if k > _sieve_limit:
            limit = max(k, 2 * _sieve_limit)
            flags = bytearray([1]) * (limit + 1)
            flags[0:2] = b"\x00\x00"
            for q in range(2, math.isqrt(limit) + 1):
                if flags[q]:
                    flags[q * q :: q] = bytes(len(range(q * q, limit + 1, q)))
            _sieve_cache = [q for q in range(limit + 1) if flags[q]]
            _sieve_limit = limit
        cache = _sieve_cache
    return cache[: bisect.bisect_right(cache, k)]


def nth_prime(i: int) -> int:
    """The i-th prime, 1-indexed."""
    if i < 1:
        raise ValueError("prime index is 1-based")
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= i:
            return ps[i - 1]
        bound *= 2


def prime_power_exponent(q: int, k: int) -> int:
    """Largest e with q**e <= k (q >= 2, k >= 1)."""
    e, acc = 0, q
    while acc <= k:
        e += 1
        acc *= q
    return e


def lcm_range(k: int) -> int:
    """lcm(1, ..., k) as an exact integer; ``lcm_range(0) == 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1
    for q in primes_up_to(k):
        out *= q ** prime_power_exponent(q, k)
    return out


def chebyshev_psi(k: int) -> float:
    """Natural log of lcm(1..k), summed from the factorization."""
    if k < 1:
        raise ValueError("k must be positive")
    return math.fsum(prime_power_exponent(q, k) * math.log(q) for q in primes_up_to(k))


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` in (Z/n)^*; requires gcd(a, n) == 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    a %= n
    x, k = a, 1
    while x != 1:
        x = x * a % n
        k += 1
    return k


@dataclass(frozen=True)
class WitnessExponent:
    index: int
    prime: int
    depth: int
    value: int

    @property
    def lcm_exponent(self) -> int:
        """Power applied to lcm(1..p-1)."""
        return 1 if self.depth == 1 else self.depth + 2

    @property
    def claimed_depth_bound(self) -> int:
        """Lower bound on the depth of x**value: p for m = 1, p**(m+1) otherwise."""
        return self.prime if self.depth == 1 else self.prime ** (self.depth + 1)


def witness_exponent(i: int, m: int) -> WitnessExponent:
    if i < 1 or m < 1:
        raise ValueError("witness_exponent needs i >= 1 and m >= 1")
    p = nth_prime(i)
    base = lcm_range(p - 1)
    value = base if m == 1 else base ** (m + 2)
    return WitnessExponent(index=i, prime=p, depth=m, value=value)
