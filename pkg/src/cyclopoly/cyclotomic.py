"""Exact arithmetic in cyclotomic fields ``Q(ζ_N)``.

Elements are stored as rational coefficient vectors over the power basis
``1, ζ, ..., ζ^(φ(N)-1)`` reduced modulo the ``N``-th cyclotomic polynomial,
so equal values have equal representations (for a fixed conductor).
Coefficients that happen to be integral are kept as ``int`` for speed;
``Fraction(2) == 2`` and both hash alike, so this does not affect equality.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

import mpmath

from .arith import divisors, mobius, phi, units_mod
from .fields import k_field_subset

__all__ = [
    "ConductorError",
    "CyclotomicNumber",
    "RealCyclotomicNumber",
    "cyclotomic_polynomial",
    "embed",
    "galois_apply",
    "is_real",
    "lift",
    "mobius",
    "norm_square",
    "normalize_conductor",
    "phi",
    "root_of_unity",
    "sign_imag",
    "sign_real",
    "try_lower",
    "zeta",
]

_UNIT_ROUNDOFF = 2.0**-53
_MAX_SIGN_PRECISION = 1 << 14


class ConductorError(ValueError):
    """Raised when operands live in incompatible cyclotomic fields."""


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact_monic(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``Φ_n``, constant term first."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    numer, denom = [1], [1]
    for d in divisors(n):
        mu = mobius(n // d)
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            numer = _poly_mul(numer, factor)
        elif mu == -1:
            denom = _poly_mul(denom, factor)
    return tuple(_poly_divexact_monic(numer, denom))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row ``k`` holds ζ_n^k (0 <= k < n) in the reduced power basis."""
    deg = phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _roots(n: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * k / n) for k in range(phi(n)))


def _normalize(c):
    if isinstance(c, int) and not isinstance(c, bool):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        c = Fraction(c.numerator, c.denominator)
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return _normalize(Fraction(c))
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool)


class CyclotomicNumber:
    """An element of ``Q(ζ_n)`` in the reduced power basis. Immutable."""

    __slots__ = ("n", "coeffs", "_hash", "_approx")

    def __init__(self, n: int, coeffs: Iterable):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"conductor must be a positive int, got {n!r}")
        coeffs = tuple(_normalize(c) for c in coeffs)
        if len(coeffs) != phi(n):
            raise ValueError(
                f"conductor {n} needs {phi(n)} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_approx", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # constructors

    @classmethod
    def _raw(cls, n: int, coeffs: tuple) -> "CyclotomicNumber":
        obj = CyclotomicNumber.__new__(CyclotomicNumber)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        object.__setattr__(obj, "_approx", None)
        return obj

    @classmethod
    def zero(cls, n: int) -> "CyclotomicNumber":
        return cls(n, [0] * phi(n))

    @classmethod
    def rational(cls, q, n: int = 1) -> "CyclotomicNumber":
        coeffs = [0] * phi(n)
        coeffs[0] = q
        return cls(n, coeffs)

    @classmethod
    def one(cls, n: int) -> "CyclotomicNumber":
        return cls.rational(1, n)

    @classmethod
    def from_powers(cls, n: int, terms: Mapping[int, object]) -> "CyclotomicNumber":
        """Build ``sum(c * ζ_n^k)`` from a ``{k: c}`` mapping; ``k`` may be any int."""
        table = _power_table(n)
        acc = [0] * phi(n)
        for k, c in terms.items():
            c = _normalize(c)
            if not c:
                continue
            for i, e in enumerate(table[k % n]):
                if e:
                    acc[i] += c * e
        return cls(n, acc)

    # basic queries

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        """True iff the value lies in ``Z[ζ_n]``."""
        return all(isinstance(c, int) for c in self.coeffs)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.coeffs[0])

    # arithmetic

    def _coerce(self, other) -> "CyclotomicNumber | None":
        if isinstance(other, CyclotomicNumber):
            if other.n != self.n:
                raise ConductorError(
                    f"conductor mismatch: {self.n} vs {other.n}; lift first"
                )
            return other
        if _is_scalar(other):
            return CyclotomicNumber.rational(other, self.n)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber._raw(
            self.n, tuple(_normalize(a + b) for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.n, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber._raw(
            self.n, tuple(_normalize(a - b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if _is_scalar(other):
            q = _normalize(other)
            return CyclotomicNumber._raw(
                self.n, tuple(_normalize(a * q) for a in self.coeffs)
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = self.n
        deg = len(self.coeffs)
        raw = [0] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        raw[i + j] += a * b
        out = raw[:deg]
        table = _power_table(n)
        for k in range(deg, len(raw)):
            r = raw[k]
            if r:
                for i, e in enumerate(table[k % n]):
                    if e:
                        out[i] += r * e
        return CyclotomicNumber._raw(n, tuple(_normalize(c) for c in out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the product of the other Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = CyclotomicNumber.one(self.n)
        for a in units_mod(self.n):
            if a % self.n != 1 % self.n:
                others = others * galois_apply(a, self)
        norm = (self * others).as_rational()
        return others * (1 / norm)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def conj(self) -> "CyclotomicNumber":
        return galois_apply(-1, self)

    # equality / hashing

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.n == self.n:
                return self.coeffs == other.coeffs
            common = self.n * other.n // math.gcd(self.n, other.n)
            return lift(self, common).coeffs == lift(other, common).coeffs
        if _is_scalar(other):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        # Hash the minimal-conductor form so equal values in different
        # fields (and rational values vs. plain scalars) hash alike.
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(self.coeffs[0])
            else:
                low = normalize_conductor(self)
                h = hash((low.n, low.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero()

    # numerics

    @property
    def approx(self) -> complex:
        """Double-precision embedding under ``ζ_n -> exp(2πi/n)`` (cached)."""
        a = self._approx
        if a is None:
            a = embed(self)
            object.__setattr__(self, "_approx", a)
        return a[0]

    @property
    def approx_error(self) -> float:
        self.approx
        return self._approx[1]

    # serialization

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "CyclotomicNumber":
        return cls(int(data["n"]), [Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"CyclotomicNumber({self.n}, {list(map(str, self.coeffs))})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                base = ""
            elif k == 1:
                base = f"ζ{self.n}"
            else:
                base = f"ζ{self.n}^{k}"
            if not base:
                terms.append(str(c))
            elif c == 1:
                terms.append(base)
            elif c == -1:
                terms.append("-" + base)
            else:
                terms.append(f"{c}*{base}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


class RealCyclotomicNumber(CyclotomicNumber):
    """A cyclotomic number fixed by complex conjugation (an element of ``k_n``)."""

    __slots__ = ()

    def __init__(self, n: int, coeffs: Iterable):
        super().__init__(n, coeffs)
        if not is_real(self):
            raise ValueError(f"{self} is not real")

    @classmethod
    def of(cls, z: CyclotomicNumber) -> "RealCyclotomicNumber":
        if isinstance(z, RealCyclotomicNumber):
            return z
        return cls(z.n, z.coeffs)

    def real_coords(self) -> tuple:
        """Coordinates with respect to ``1, θ, ..., θ^(d-1)``, ``θ = ζ_n + ζ_n^-1``."""
        if self.n <= 2:
            return (self.coeffs[0],)
        theta = zeta(self.n) + zeta(self.n, -1)
        half = phi(self.n) // 2
        basis = [CyclotomicNumber.one(self.n)]
        for _ in range(half - 1):
            basis.append(basis[-1] * theta)
        coords = _solve_in_span(basis, self)
        if coords is None:
            raise ArithmeticError("real element outside the span of powers of θ")
        return coords

    def is_real_integral(self) -> bool:
        """True iff the value lies in ``Z[ζ_n + ζ_n^-1]``."""
        return all(Fraction(c).denominator == 1 for c in self.real_coords())

    def approx_real(self) -> float:
        return self.approx.real


def zeta(n: int, k: int = 1) -> CyclotomicNumber:
    """``ζ_n^k`` with conductor ``n``."""
    return CyclotomicNumber._raw(n, _power_table(n)[k % n])


def galois_apply(a: int, z: CyclotomicNumber) -> CyclotomicNumber:
    """Apply the automorphism ``ζ_n -> ζ_n^a``."""
    n = z.n
    if math.gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1: not a Galois automorphism")
    table = _power_table(n)
    acc = [0] * len(z.coeffs)
    for k, c in enumerate(z.coeffs):
        if c:
            for i, e in enumerate(table[(a * k) % n]):
                if e:
                    acc[i] += c * e
    return CyclotomicNumber._raw(n, tuple(_normalize(c) for c in acc))


def is_real(z: CyclotomicNumber) -> bool:
    return galois_apply(-1, z).coeffs == z.coeffs


def norm_square(z: CyclotomicNumber) -> RealCyclotomicNumber:
    """``z * conj(z)``, i.e. ``|z|^2``."""
    w = z * z.conj()
    return RealCyclotomicNumber(w.n, w.coeffs)


def embed(z: CyclotomicNumber, precision: int = 53):
    """Complex approximation of ``z`` and an upper bound on its absolute error.

    With ``precision == 53`` the value is a Python ``complex``; larger
    precisions return ``mpmath`` numbers computed at that many bits.
    """
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    coeffs = z.coeffs
    size = sum(abs(c) for c in coeffs)
    slack = 2 * len(coeffs) + 32
    if precision == 53:
        roots = _roots(z.n)
        terms = [(float(c), r) for c, r in zip(coeffs, roots) if c]
        value = complex(
            math.fsum(c * r.real for c, r in terms), math.fsum(c * r.imag for c, r in terms)
        )
        err = slack * _UNIT_ROUNDOFF * float(size) * (1 + 1e-12) + 1e-300
        if isinstance(z, RealCyclotomicNumber):
            # conjugation-invariant, so the imaginary part is exactly zero
            value = complex(value.real, 0.0)
        return value, err
    with mpmath.workprec(precision + 16):
        value = mpmath.mpc(0)
        for k, c in enumerate(coeffs):
            if c:
                q = Fraction(c)
                value += mpmath.mpf(q.numerator) / q.denominator * mpmath.expjpi(
                    mpmath.mpf(2 * k) / z.n
                )
        err = mpmath.mpf(slack) * mpmath.mpf(2) ** (-precision) * (
            mpmath.mpf(Fraction(size).numerator) / Fraction(size).denominator
        ) + mpmath.mpf(2) ** (-precision - 64)
        if isinstance(z, RealCyclotomicNumber):
            value = mpmath.mpc(value.real, 0)
    return value, err


def _resolve_sign(z: CyclotomicNumber, part: str) -> int:
    precision = 53
    while precision <= _MAX_SIGN_PRECISION:
        value, err = embed(z, precision)
        x = value.real if part == "real" else value.imag
        if abs(x) > err:
            return 1 if x > 0 else -1
        precision *= 4 if precision == 53 else 2
    raise ArithmeticError(f"could not resolve the sign of {z}")


def sign_real(z: CyclotomicNumber) -> int:
    """Sign of ``Re(z)``: exact zero test, then error-bounded numerics."""
    if (z + z.conj()).is_zero():
        return 0
    return _resolve_sign(z, "real")


def sign_imag(z: CyclotomicNumber) -> int:
    """Sign of ``Im(z)``."""
    if (z - z.conj()).is_zero():
        return 0
    return _resolve_sign(z, "imag")


def lift(z: CyclotomicNumber, target: int) -> CyclotomicNumber:
    """Represent ``z`` in ``Q(ζ_target)`` via ``ζ_n -> ζ_target^(target/n)``."""
    n = z.n
    if target % n:
        raise ConductorError(f"{target} is not a multiple of the conductor {n}")
    if target == n:
        return z
    step = target // n
    table = _power_table(target)
    acc = [0] * phi(target)
    for k, c in enumerate(z.coeffs):
        if c:
            for i, e in enumerate(table[(k * step) % target]):
                if e:
                    acc[i] += c * e
    return CyclotomicNumber._raw(target, tuple(_normalize(c) for c in acc))


def root_of_unity(order: int, big: int) -> CyclotomicNumber:
    """``ζ_order`` represented with conductor ``big``; needs ``K_order ⊂ K_big``."""
    if not k_field_subset(order, big):
        raise ConductorError(f"K_{order} is not a subfield of K_{big}")
    n = order
    if big % n == 0:
        return zeta(big, big // n)
    # n = 2o with o odd: ζ_n = -ζ_o^((o+1)/2)
    o = n // 2
    return -zeta(big, (big // o) * ((o + 1) // 2))


def _solve_in_span(basis, z: CyclotomicNumber):
    """Rational coordinates of ``z`` in the given linearly independent basis, or None."""
    inv, pivots = _left_inverse(tuple(tuple(b.coeffs) for b in basis))
    rhs = [z.coeffs[p] for p in pivots]
    coords = tuple(
        _normalize(sum(row[j] * rhs[j] for j in range(len(rhs)))) for row in inv
    )
    recon = [0] * len(z.coeffs)
    for c, b in zip(coords, basis):
        if c:
            for i, e in enumerate(b.coeffs):
                if e:
                    recon[i] += c * e
    if tuple(_normalize(c) for c in recon) != z.coeffs:
        return None
    return coords


@lru_cache(maxsize=None)
def _left_inverse(columns: tuple[tuple, ...]):
    """Pick pivot rows of the column matrix and invert the square subsystem."""
    k = len(columns)
    rows = len(columns[0])
    matrix = [[Fraction(columns[j][i]) for j in range(k)] for i in range(rows)]
    # Gaussian elimination to find independent rows.
    work = [row[:] for row in matrix]
    pivots = []
    used = set()
    for col in range(k):
        pick = None
        for r in range(rows):
            if r not in used and work[r][col] != 0:
                pick = r
                break
        if pick is None:
            raise ArithmeticError("basis is linearly dependent")
        used.add(pick)
        pivots.append(pick)
        for r in range(rows):
            if r != pick and work[r][col] != 0:
                f = work[r][col] / work[pick][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[pick])]
    square = [matrix[p][:] for p in pivots]
    aug = [row + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(square)]
    for col in range(k):
        pr = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[pr] = aug[pr], aug[col]
        piv = aug[col][col]
        aug[col] = [a / piv for a in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv = tuple(tuple(_normalize(x) for x in row[k:]) for row in aug)
    return inv, tuple(pivots)


@lru_cache(maxsize=None)
def _lower_basis(n: int, big: int) -> tuple[CyclotomicNumber, ...]:
    root = root_of_unity(n, big)
    basis = [CyclotomicNumber.one(big)]
    for _ in range(phi(n) - 1):
        basis.append(basis[-1] * root)
    return tuple(basis)


def try_lower(z: CyclotomicNumber, n: int) -> CyclotomicNumber | None:
    """Rewrite ``z`` with conductor ``n`` if it lies in ``K_n``; otherwise ``None``.

    Raises ``ConductorError`` unless ``K_n ⊂ K_N`` for the conductor ``N`` of ``z``.
    """
    big = z.n
    if not k_field_subset(n, big):
        raise ConductorError(f"K_{n} is not a subfield of K_{big}")
    if n == big:
        return z
    coords = _solve_in_span(_lower_basis(n, big), z)
    if coords is None:
        return None
    return CyclotomicNumber._raw(n, coords)


def normalize_conductor(z: CyclotomicNumber) -> CyclotomicNumber:
    """Rewrite ``z`` with the smallest conductor whose field contains it."""
    for d in divisors(z.n):
        if d % 4 == 2 and d != z.n:
            continue
        lowered = try_lower(z, d)
        if lowered is not None:
            return lowered
    return z
