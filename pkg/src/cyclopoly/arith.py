"""Elementary arithmetic functions on the positive integers."""

from __future__ import annotations

import math
from functools import lru_cache

# Trial division is only trusted up to this divisor bound.
TRIAL_DIVISION_LIMIT = 10**6


def _check_positive(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ``((p, e), ...)`` with ascending ``p``."""
    _check_positive(n)
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return tuple(factors)


def phi(n: int) -> int:
    """Euler's totient, computed from the factorization of ``n``."""
    result = 1
    for p, e in factorize(n):
        result *= p ** (e - 1) * (p - 1)
    return result


def mobius(n: int) -> int:
    factors = factorize(n)
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def divisors(n: int) -> list[int]:
    _check_positive(n)
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def is_prime(p: int) -> bool:
    """Deterministic trial division; refuses inputs beyond ``TRIAL_DIVISION_LIMIT**2``."""
    if p < 2:
        return False
    if p > TRIAL_DIVISION_LIMIT**2:
        raise ValueError(f"{p} exceeds the trial-division range")
    if p % 2 == 0:
        return p == 2
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def units_mod(n: int) -> list[int]:
    """Residues ``a`` in ``[1, n]`` with ``gcd(a, n) = 1``."""
    _check_positive(n)
    return [a for a in range(1, n + 1) if math.gcd(a, n) == 1]
