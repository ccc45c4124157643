"""Affinely regular polygons in cyclotomic model sets.

Existence is decided by a divisibility condition on ``(m, n)``. Construction
maps the regular m-gon ``1, ζ_m, ..., ζ_m^(m-1)`` by the real-linear map
fixing 1 and sending ``ζ_m`` to ``ζ_n``: writing ``ζ_m^j = a_j + b_j ζ_m``
with real ``a_j, b_j``, the image vertices are ``a_j + b_j ζ_n``. A homothety
then moves the polygon into the model set.

Affine regularity is certified exactly by the three-term relation
``v[j+1] + v[j-1] - c·v[j] = const`` with ``c = ζ_m + ζ_m^-1``, which every
affine image of the regular m-gon satisfies and which, for strictly convex
vertex cycles, characterizes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import lcm
from .cyclotomic import (
    ConductorError,
    CyclotomicNumber,
    RealCyclotomicNumber,
    galois_apply,
    lift,
    normalize_conductor,
    sign_real,
    try_lower,
    zeta,
)
from .errors import Inconclusive
from .geometry import compare_xy, convex_hull, orientation
from .model_sets import Kind, ModelSetDescriptor, Patch, generate_patch

DEFAULT_MAX_STEPS = 8


class DegeneratePolygon(ValueError):
    pass


class InflationInconclusive(Inconclusive):
    """The homothety search ran out of budget; this says nothing about existence."""


@dataclass(frozen=True)
class Polygon:
    """A strictly convex polygon with counterclockwise vertices in ``Q(ζ_n)``."""

    conductor: int
    vertices: tuple[CyclotomicNumber, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        m = len(verts)
        if m < 3:
            raise DegeneratePolygon(f"a polygon needs at least 3 vertices, got {m}")
        if any(v.n != self.conductor for v in verts):
            raise ConductorError("all vertices must have the polygon's conductor")
        for i in range(m):
            if orientation(verts[i - 1], verts[i], verts[(i + 1) % m]) <= 0:
                raise DegeneratePolygon("vertices are not strictly convex and counterclockwise")
        for j in range(1, m - 1):
            if orientation(verts[0], verts[j], verts[j + 1]) <= 0:
                raise DegeneratePolygon("vertex cycle winds more than once")

    @classmethod
    def from_points(cls, points: Iterable[CyclotomicNumber]) -> "Polygon":
        """Polygon on points in strictly convex position, ordered counterclockwise."""
        pts = list(points)
        hull = convex_hull(pts)
        if len(hull) != len(set(pts)):
            raise DegeneratePolygon("points are not in strictly convex position")
        if not hull:
            raise DegeneratePolygon("no points")
        return cls(hull[0].n, tuple(hull))

    @property
    def m(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def homothety(self, scale: CyclotomicNumber, translate: CyclotomicNumber) -> "Polygon":
        if sign_real(scale) <= 0 or scale != scale.conj():
            raise ValueError("homothety factor must be a positive real")
        return Polygon(self.conductor, tuple(scale * v + translate for v in self.vertices))

    def rotated_to_least(self) -> "Polygon":
        """Same polygon, cyclically rotated to start at the (x, y)-least vertex."""
        verts = self.vertices
        k = min(range(len(verts)), key=lambda i: _XYKey(verts[i]))
        return Polygon(self.conductor, verts[k:] + verts[:k])

    def to_json(self) -> dict:
        return {
            "n": self.conductor,
            "vertices": [[str(c) for c in v.coeffs] for v in self.vertices],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polygon":
        n = int(data["n"])
        return cls(n, tuple(CyclotomicNumber(n, [Fraction(c) for c in v]) for v in data["vertices"]))


class _XYKey:
    __slots__ = ("z",)

    def __init__(self, z):
        self.z = z

    def __lt__(self, other):
        return compare_xy(self.z, other.z) < 0


@dataclass(frozen=True)
class AffineWitness:
    m: int
    conductor: int  # working conductor lcm(m, n)
    c_m: RealCyclotomicNumber
    residual: CyclotomicNumber

    @property
    def center(self) -> CyclotomicNumber:
        """Image of the centre of the regular m-gon: ``residual / (2 - c_m)``."""
        return self.residual / (2 - self.c_m)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "conductor": self.conductor,
            "c_m": self.c_m.to_json(),
            "residual": self.residual.to_json(),
        }


def _check_domain(m: int, n: int) -> None:
    if m < 3 or n < 3:
        raise ValueError(f"need m, n >= 3, got m = {m}, n = {n}")
    if n % 4 == 2:
        raise ValueError(f"n = {n} is 2 mod 4; use the odd conductor {n // 2}")


def exists_affinely_regular(m: int, n: int) -> bool:
    """Whether a cyclotomic model set over ``Z[ζ_n]`` contains an affinely regular m-gon."""
    _check_domain(m, n)
    if m in (3, 4, 6) or n % m == 0:
        return True
    d, r = divmod(m, 2)
    return r == 0 and d % 2 == 1 and n % d == 0


def admissible_m(n: int, m_max: int) -> list[int]:
    """All ``3 <= m <= m_max`` admitting an affinely regular m-gon.

    No admissible m exceeds ``max(6, 2n)``, so any ``m_max >= 2n`` gives the full list.
    """
    if m_max < 3:
        raise ValueError("m_max must be at least 3")
    return [m for m in range(3, m_max + 1) if exists_affinely_regular(m, n)]


def basis_coords(j: int, m: int) -> tuple[RealCyclotomicNumber, RealCyclotomicNumber]:
    """Real coordinates ``(a_j, b_j)`` with ``ζ_m^j = a_j + b_j ζ_m``, both in ``Z[ζ_m + ζ_m^-1]``."""
    if m < 3:
        raise ValueError("m must be at least 3")
    c = zeta(m) + zeta(m, -1)
    a, b = CyclotomicNumber.one(m), CyclotomicNumber.zero(m)
    for _ in range(j % m):
        a, b = -b, a + c * b
    return RealCyclotomicNumber.of(a), RealCyclotomicNumber.of(b)


def _basis_sequence(m: int):
    c = zeta(m) + zeta(m, -1)
    a, b = CyclotomicNumber.one(m), CyclotomicNumber.zero(m)
    for _ in range(m):
        yield a, b
        a, b = -b, a + c * b


def real_inclusion(x: CyclotomicNumber, n: int) -> CyclotomicNumber:
    """Rewrite the real number ``x`` (any conductor) with conductor ``n``.

    Goes through the compositum ``lcm(conductor, n)`` and lowers back to ``n``.
    Raises ``ValueError`` when ``x`` is not in ``K_n``.
    """
    big = lcm(x.n, n)
    lowered = try_lower(lift(x, big), n)
    if lowered is None:
        raise ValueError(f"{x} does not lie in K_{n}")
    return lowered


def construct_polygon_in_field(m: int, n: int) -> Polygon:
    """An affinely regular m-gon with vertices in ``Z[ζ_n]``."""
    if not exists_affinely_regular(m, n):
        raise ValueError(f"no affinely regular {m}-gon over conductor {n}")
    w = zeta(n)
    verts = []
    for a, b in _basis_sequence(m):
        try:
            verts.append(real_inclusion(a, n) + real_inclusion(b, n) * w)
        except ValueError as exc:  # pragma: no cover - excluded by the existence test
            raise AssertionError(f"real subfield inclusion failed for m={m}, n={n}") from exc
    return Polygon(n, tuple(verts))


def verify_affinely_regular(P: Polygon) -> AffineWitness | None:
    """Exact certificate that ``P`` is an affine image of the regular m-gon, or ``None``."""
    if not isinstance(P, Polygon):
        P = Polygon.from_points(P)
    m = P.m
    big = lcm(m, P.conductor)
    c = lift(zeta(m) + zeta(m, -1), big)
    vs = [lift(v, big) for v in P.vertices]
    residual = vs[1] + vs[-1] - c * vs[0]
    for j in range(1, m):
        if vs[(j + 1) % m] + vs[j - 1] - c * vs[j] != residual:
            return None
    return AffineWitness(m, big, RealCyclotomicNumber.of(c), residual)


def chord_ratio(P: Polygon) -> tuple[float, float]:
    """``|v2 - v_-1| / |v1 - v0|`` next to its value ``|1 + 2cos(2π/m)|`` on the regular m-gon.

    The chords ``{1, ζ}`` and ``{ζ^-1, ζ^2}`` of the regular m-gon are parallel,
    so any affine image preserves this ratio.
    """
    v = P.vertices
    m = P.m
    observed = abs(v[2 % m].approx - v[-1].approx) / abs(v[1].approx - v[0].approx)
    expected = abs(1 + 2 * math.cos(2 * math.pi / m))
    return observed, expected


@dataclass(frozen=True)
class Inflation:
    step: int
    scale: RealCyclotomicNumber
    translate: CyclotomicNumber
    polygon: Polygon
    patch: Patch

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "scale": self.scale.to_json(),
            "scale_approx": self.scale.approx.real,
            "translate": self.translate.to_json(),
            "polygon": self.polygon.to_json(),
        }


def contraction_unit(d: ModelSetDescriptor) -> RealCyclotomicNumber:
    """Least unit ``ε > 1`` of ``Z[ζ_n + ζ_n^-1]`` whose star image has ``|σ(ε)| < 1``.

    Scaling by ``ε`` stretches physical space and shrinks internal space, so
    powers of it move any finite configuration into the window.
    """
    if d.kind is not Kind.CUT_AND_PROJECT:
        raise ValueError("lattices need no contraction unit")
    n = d.n
    theta = zeta(n) + zeta(n, -1)
    best = None
    for a in range(-6, 7):
        for b in range(-6, 7):
            if b == 0:
                continue
            e = theta * b + a
            se = galois_apply(d.star_exponent, e)
            norm = e * se
            if not norm.is_rational() or abs(norm.as_rational()) != 1:
                continue
            val = e.approx.real
            if val > 1 and abs(se.approx.real) < 1:
                if best is None or val < best.approx.real:
                    best = e
    if best is None:  # pragma: no cover
        raise ArithmeticError(f"no contraction unit found for n = {n}")
    return RealCyclotomicNumber.of(best)


def scale_candidates(d: ModelSetDescriptor, P: Polygon, max_steps: int):
    """Deterministic homothety factors tried by ``inflate_into_model_set``.

    After clearing coefficient denominators (factor ``den``), lattices use
    ``den * s`` for ``s = 1, 2, ...``; cut-and-project sets use ``den * ε^(s-1)``.
    """
    den = 1
    for v in P.vertices:
        for c in v.coeffs:
            den = lcm(den, Fraction(c).denominator)
    one = CyclotomicNumber.one(d.n)
    if d.kind is Kind.LATTICE:
        for s in range(1, max_steps + 1):
            yield s, RealCyclotomicNumber.of(one * (den * s))
        return
    eps = contraction_unit(d)
    lam = one * den
    for s in range(1, max_steps + 1):
        yield s, RealCyclotomicNumber.of(lam)
        lam = lam * eps


def inflate_into_model_set(
    P: Polygon,
    d: ModelSetDescriptor,
    patch_radius=15,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_candidates: int | None = None,
    patch: Patch | None = None,
) -> Inflation:
    """Find a homothety ``z -> s*z + t`` putting every vertex of ``P`` into the patch.

    Scales follow ``scale_candidates``; for each scale, translations are the
    patch points in order of increasing modulus. Raises
    ``InflationInconclusive`` when the budget runs out.
    """
    if P.conductor != d.n:
        raise ConductorError("polygon and model set must share the conductor")
    if patch is None:
        patch = generate_patch(d, patch_radius)
    R = float(patch.region_radius)
    ts = sorted(patch.points, key=lambda z: (abs(z.approx), z.coeffs))
    tried = 0
    for step, lam in scale_candidates(d, P, max_steps):
        images = [lam * v for v in P.vertices]
        approx = [z.approx for z in images]
        if max(abs(a - b) for a in approx for b in approx) > 2 * R + 1e-9:
            continue
        for t in ts:
            if max_candidates is not None and tried >= max_candidates:
                raise InflationInconclusive(f"candidate budget {max_candidates} exhausted")
            tried += 1
            tv = t.approx
            if any(abs(a + tv) > R + 1e-9 for a in approx):
                continue
            moved = [z + t for z in images]
            if all(patch.contains(z) for z in moved):
                return Inflation(step, lam, t, Polygon(d.n, tuple(moved)), patch)
    raise InflationInconclusive(
        f"no homothety found within {max_steps} scale steps and radius {patch.region_radius}"
    )
