"""Inclusion and equality of cyclotomic fields and their maximal real subfields.

Every predicate here is decided by integer arithmetic on the conductors.
The field-theoretic meaning (``K_m`` is the cyclotomic field of conductor
``m``, ``k_m`` its maximal real subfield) is cross-checked in the test
suite against exact linear algebra in :mod:`cyclopoly.cyclotomic`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .arith import is_prime, phi

# Conductors whose maximal real subfield is Q.
RATIONAL_REAL_SUBFIELD = frozenset({3, 4, 6})


def _check_conductors(m: int, n: int, low: int = 1) -> None:
    for v in (m, n):
        if not isinstance(v, int) or isinstance(v, bool):
            raise TypeError(f"conductor must be an int, got {v!r}")
        if v < low:
            raise ValueError(f"conductor must be >= {low}, got {v}")


def k_field_subset(m: int, n: int) -> bool:
    """True iff ``K_m`` is contained in ``K_n``."""
    _check_conductors(m, n)
    return n % m == 0 or (m % 4 == 2 and (2 * n) % m == 0)


def k_field_equal(m: int, n: int) -> bool:
    _check_conductors(m, n)
    return m == n or (m % 2 == 1 and n == 2 * m) or (n % 2 == 1 and m == 2 * n)


def real_subfield_subset(m: int, n: int) -> bool:
    """True iff ``k_m`` is contained in ``k_n``; requires ``m, n >= 3``."""
    _check_conductors(m, n, low=3)
    return k_field_subset(m, n) or m in RATIONAL_REAL_SUBFIELD


def real_subfield_equal(m: int, n: int) -> bool:
    _check_conductors(m, n, low=3)
    return k_field_equal(m, n) or (
        m in RATIONAL_REAL_SUBFIELD and n in RATIONAL_REAL_SUBFIELD
    )


def intersection_conductor(m: int, n: int) -> int:
    """Conductor of ``K_m ∩ K_n``."""
    _check_conductors(m, n)
    return math.gcd(m, n)


def compositum_conductor(m: int, n: int) -> int:
    _check_conductors(m, n)
    return m * n // math.gcd(m, n)


def is_sophie_germain(p: int) -> bool:
    return is_prime(p) and is_prime(2 * p + 1)


def sophie_germain_primes(limit: int) -> list[int]:
    """All Sophie Germain primes ``p <= limit`` in ascending order."""
    return [p for p in range(2, limit + 1) if is_sophie_germain(p)]


def in_prime_half_set(n: int) -> bool:
    """Membership in ``{8, 9, 12} ∪ {2p + 1 : p Sophie Germain}``."""
    if n in (8, 9, 12):
        return True
    return n % 2 == 1 and n >= 5 and is_sophie_germain((n - 1) // 2)


class PhiHalfKind(enum.Enum):
    ONE = "one"
    PRIME = "prime"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class PhiHalfClass:
    n: int
    kind: PhiHalfKind
    half_phi: int
    # Largest trial divisor examined when certifying ``half_phi`` prime.
    trial_bound: int | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "class": self.kind.value,
            "half_phi": self.half_phi,
            "trial_bound": self.trial_bound,
        }


def classify_phi_half(n: int) -> PhiHalfClass:
    """Classify ``phi(n)/2`` as 1, prime or composite for ``n >= 3``, ``n ≢ 2 (mod 4)``.

    The primality verdict is cross-checked against the explicit description of
    the conductors with prime ``phi(n)/2``; a disagreement raises ``RuntimeError``.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"classify_phi_half needs n >= 3, got {n!r}")
    if n % 4 == 2:
        raise ValueError(f"n = {n} is 2 mod 4; use the odd conductor {n // 2}")
    half = phi(n) // 2
    if half == 1:
        if n not in (3, 4):
            raise RuntimeError(f"phi({n})/2 = 1 outside {{3, 4}}")
        return PhiHalfClass(n, PhiHalfKind.ONE, half)
    prime = is_prime(half)
    if prime != in_prime_half_set(n):
        raise RuntimeError(f"primality of phi({n})/2 disagrees with the explicit set")
    if prime:
        return PhiHalfClass(n, PhiHalfKind.PRIME, half, math.isqrt(half))
    return PhiHalfClass(n, PhiHalfKind.COMPOSITE, half)
