"""Discrete parallel X-rays, U-polygons and the switching construction.

Lines in direction ``u`` are keyed by the exact value ``cross(x, u)``, which is
constant along each line and differs between parallel lines, so X-rays are
plain counters over hashable cyclotomic keys.

Every statement here is about a finite patch: a collision certifies that the
given directions do not determine convex subsets of the model set, while the
absence of a collision inside one patch certifies nothing about the whole set.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import lcm
from .cyclotomic import CyclotomicNumber, lift
from .errors import Inconclusive
from .geometry import convex_hull, cross, in_closed_hull, orientation, xy_key
from .model_sets import ModelSetDescriptor, Patch, generate_patch
from .polygons import (
    Inflation,
    Polygon,
    construct_polygon_in_field,
    exists_affinely_regular,
    inflate_into_model_set,
)

__all__ = [
    "Collision",
    "Counterexample",
    "Direction",
    "SearchBudgetExceeded",
    "XRayTable",
    "build_counterexample",
    "cross",
    "determination_bruteforce",
    "edge_directions",
    "find_U_polygon",
    "is_U_polygon",
    "is_convex_subset",
    "min_k_bound",
    "witness_bound",
    "xray",
    "xrays_equal",
]

DEFAULT_NODE_BUDGET = 2_000_000


class SearchBudgetExceeded(Inconclusive):
    pass


def _common(a: CyclotomicNumber, b: CyclotomicNumber):
    if a.n == b.n:
        return a, b
    big = lcm(a.n, b.n)
    return lift(a, big), lift(b, big)


class Direction:
    """A direction in the plane, represented by a nonzero element of ``Z[ζ_n]``.

    The representative is the primitive integer coefficient vector with its
    first nonzero coefficient positive. Equality means parallelism, tested via
    the scale-invariant key ``rep / conj(rep)``.
    """

    __slots__ = ("rep", "_key")

    def __init__(self, rep: CyclotomicNumber):
        if rep.is_zero():
            raise ValueError("a direction needs a nonzero representative")
        coeffs = [Fraction(c) for c in rep.coeffs]
        den = 1
        for c in coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        ints = [c // g for c in ints]
        if next(c for c in ints if c) < 0:
            ints = [-c for c in ints]
        self.rep = CyclotomicNumber(rep.n, ints)
        self._key = self.rep / self.rep.conj()

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Sequence[int]) -> "Direction":
        return cls(CyclotomicNumber(n, list(coeffs)))

    @classmethod
    def through(cls, a: CyclotomicNumber, b: CyclotomicNumber) -> "Direction":
        a, b = _common(a, b)
        return cls(b - a)

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def coeffs(self) -> tuple:
        return self.rep.coeffs

    def angle(self) -> float:
        """Angle in ``[0, pi)``."""
        z = self.rep.approx
        return math.atan2(z.imag, z.real) % math.pi

    def is_parallel(self, w: CyclotomicNumber) -> bool:
        a, b = _common(self.rep, w)
        return cross(a, b).is_zero()

    def __eq__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Direction(n={self.n}, coeffs={list(self.coeffs)})"

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [int(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Direction":
        return cls.from_coeffs(int(data["n"]), [int(c) for c in data["coeffs"]])


def _line_key(x: CyclotomicNumber, u: Direction) -> CyclotomicNumber:
    a, b = _common(x, u.rep)
    return cross(a, b)


@dataclass(frozen=True)
class XRayTable:
    direction: Direction
    buckets: Mapping[CyclotomicNumber, int]

    @property
    def total(self) -> int:
        return sum(self.buckets.values())

    def __eq__(self, other):
        if not isinstance(other, XRayTable):
            return NotImplemented
        return self.direction == other.direction and dict(self.buckets) == dict(other.buckets)

    def to_json(self) -> dict:
        rows = sorted(([str(c) for c in k.coeffs], k.n, v) for k, v in self.buckets.items())
        return {
            "direction": self.direction.to_json(),
            "lines": [{"key": {"n": n, "coeffs": c}, "count": v} for c, n, v in rows],
        }


def xray(F: Iterable[CyclotomicNumber], u: Direction) -> XRayTable:
    """Number of points of ``F`` on each line parallel to ``u`` (supported lines only)."""
    return XRayTable(u, dict(Counter(_line_key(x, u) for x in set(F))))


def xrays_equal(F: Iterable[CyclotomicNumber], Fp: Iterable[CyclotomicNumber], U: Iterable[Direction]) -> bool:
    F, Fp = list(F), list(Fp)
    return all(xray(F, u) == xray(Fp, u) for u in U)


def is_U_polygon(P: Polygon, U: Iterable[Direction]) -> bool:
    """Every line through a vertex in a direction of ``U`` meets another vertex."""
    for u in U:
        if any(c < 2 for c in xray(P.vertices, u).buckets.values()):
            return False
    return True


def edge_directions(P: Polygon) -> list[Direction]:
    """Pairwise non-parallel edge directions in order of first appearance."""
    out: list[Direction] = []
    seen = set()
    v = P.vertices
    for i in range(len(v)):
        d = Direction(v[(i + 1) % len(v)] - v[i])
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def _pairwise_nonparallel(U: Sequence[Direction]) -> bool:
    return len(set(U)) == len(U)


def is_convex_subset(F: Iterable[CyclotomicNumber], patch: Patch) -> bool:
    """``F`` equals the set of patch points in its convex hull."""
    F = set(F)
    for z in F:
        if not patch.contains(z):
            raise ValueError("F is not a subset of the patch")
    if len(F) <= 1:
        return True
    hull = convex_hull(F)
    return not any(p not in F and in_closed_hull(hull, p) for p in patch.points)


def _sorted_points(points: Iterable[CyclotomicNumber]) -> tuple[CyclotomicNumber, ...]:
    return tuple(sorted(points, key=lambda z: z.coeffs))


def _points_json(points: Iterable[CyclotomicNumber]) -> list:
    return [[str(c) for c in z.coeffs] for z in points]


@dataclass(frozen=True)
class Counterexample:
    U: tuple[Direction, ...]
    polygon: Polygon
    V: tuple[CyclotomicNumber, ...]
    Vprime: tuple[CyclotomicNumber, ...]
    C: tuple[CyclotomicNumber, ...]
    F: tuple[CyclotomicNumber, ...]
    Fprime: tuple[CyclotomicNumber, ...]

    def to_json(self) -> dict:
        return {
            "n": self.polygon.conductor,
            "U": [u.to_json() for u in self.U],
            "polygon": self.polygon.to_json(),
            "F": _points_json(self.F),
            "Fprime": _points_json(self.Fprime),
            "xrays": [
                {"F": xray(self.F, u).to_json()["lines"], "Fprime": xray(self.Fprime, u).to_json()["lines"],
                 "direction": u.to_json()}
                for u in self.U
            ],
        }


def _check_switching(F, Fp, U, patch) -> None:
    if set(F) == set(Fp):
        raise RuntimeError("switching produced identical sets")
    if len(F) != len(Fp):
        raise RuntimeError("switching produced sets of different size")
    if not xrays_equal(F, Fp, U):
        raise RuntimeError("switching produced different X-rays")
    if not is_convex_subset(F, patch) or not is_convex_subset(Fp, patch):
        raise RuntimeError("switching produced a non-convex subset")


def build_counterexample(P: Polygon, patch: Patch, U: Iterable[Direction]) -> Counterexample:
    """Two distinct convex subsets of ``patch`` with equal X-rays in every direction of ``U``.

    The vertices of the U-polygon ``P`` are split into alternating classes,
    starting with the (x, y)-least vertex; each class is joined with the patch
    points inside ``P`` that are not vertices.
    """
    U = tuple(U)
    if P.m % 2:
        raise ValueError(f"{P.m} vertices: a U-polygon has an even vertex count")
    if not is_U_polygon(P, U):
        raise ValueError("P is not a U-polygon for the given directions")
    if not all(patch.contains(v) for v in P.vertices):
        raise ValueError("some vertex of P is outside the patch")
    P = P.rotated_to_least()
    verts = P.vertices
    V, Vp = verts[0::2], verts[1::2]
    vset = set(verts)
    C = tuple(p for p in patch.points if p not in vset and in_closed_hull(verts, p))
    F = _sorted_points(C + V)
    Fp = _sorted_points(C + Vp)
    _check_switching(F, Fp, U, patch)
    return Counterexample(U, P, V, Vp, C, F, Fp)


@dataclass(frozen=True)
class Collision:
    F: tuple[CyclotomicNumber, ...]
    Fprime: tuple[CyclotomicNumber, ...]

    def to_json(self) -> dict:
        return {"F": _points_json(self.F), "Fprime": _points_json(self.Fprime)}


class _IndexGeometry:
    """Hull computations on indices into a fixed point list with memoized orientations."""

    def __init__(self, points: Sequence[CyclotomicNumber]):
        self.points = points
        order = sorted(range(len(points)), key=lambda i: xy_key(points[i]))
        self.rank = {i: r for r, i in enumerate(order)}
        self._orient: dict = {}

    def orient(self, i: int, j: int, k: int) -> int:
        key = (i, j, k)
        s = self._orient.get(key)
        if s is None:
            s = orientation(self.points[i], self.points[j], self.points[k])
            # the sign is alternating in its arguments
            for perm, sign in (((j, k, i), 1), ((k, i, j), 1), ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
                self._orient[perm] = sign * s
            self._orient[key] = s
        return s

    def hull(self, idx: Iterable[int]) -> list[int]:
        pts = sorted(set(idx), key=self.rank.__getitem__)
        if len(pts) <= 2:
            return pts

        def half(seq):
            chain: list[int] = []
            for p in seq:
                while len(chain) >= 2 and self.orient(chain[-2], chain[-1], p) <= 0:
                    chain.pop()
                chain.append(p)
            return chain

        return half(pts)[:-1] + half(reversed(pts))[:-1]

    def inside(self, hull: Sequence[int], p: int) -> bool:
        k = len(hull)
        if k == 1:
            return p == hull[0]
        if k == 2:
            a, b = hull
            return self.orient(a, b, p) == 0 and self.rank[a] <= self.rank[p] <= self.rank[b]
        return all(self.orient(hull[i], hull[(i + 1) % k], p) >= 0 for i in range(k))


def _convex_position_sets(points: Sequence[CyclotomicNumber], cap: int, budget: int):
    """Depth-first walk over index-increasing vertex sets in strictly convex position.

    Yields ``(vertex indices, hull, covered indices)`` where ``hull`` lists the
    vertices counterclockwise and ``covered`` holds the indices of all points
    in the closed hull. A branch is cut when the hull covers more than ``cap``
    points; both this and convex position are inherited by subsets, so the
    walk stays exhaustive.
    """
    geo = _IndexGeometry(points)
    N = len(points)
    nodes = 0
    stack = [((i,), [i], (i,)) for i in reversed(range(N))]
    while stack:
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"node budget {budget} exhausted")
        idx, hull, cov = stack.pop()
        yield idx, [points[i] for i in hull], tuple(sorted(cov))
        children = []
        covered = set(cov)
        for j in range(idx[-1] + 1, N):
            if j in covered:
                continue
            h = geo.hull(idx + (j,))
            if len(h) != len(idx) + 1:
                continue
            c = list(cov) + [j]
            for q in range(N):
                if q not in covered and q != j and geo.inside(h, q):
                    c.append(q)
            if len(c) > cap:
                continue
            children.append((idx + (j,), h, c))
        stack.extend(reversed(children))


def determination_bruteforce(
    patch: Patch, U: Sequence[Direction], size_cap: int, budget: int = DEFAULT_NODE_BUDGET
) -> Collision | None:
    """First pair of distinct convex subsets of size at most ``size_cap`` with equal X-rays.

    Convex subsets correspond one-to-one to their hull vertex sets, which are
    enumerated in a fixed depth-first order. Returns ``None`` when no two
    subsets collide; raises ``SearchBudgetExceeded`` after ``budget`` nodes.
    """
    U = tuple(U)
    if len(U) < 2 or not _pairwise_nonparallel(U):
        raise ValueError("need at least two pairwise non-parallel directions")
    if size_cap < 1:
        raise ValueError("size_cap must be positive")
    pts = patch.points
    line_ids = []
    for u in U:
        ids: dict = {}
        line_ids.append([ids.setdefault(_line_key(p, u), len(ids)) for p in pts])
    seen: dict = {}
    for _, _, cov in _convex_position_sets(pts, size_cap, budget):
        sig = tuple(frozenset(Counter(lid[i] for i in cov).items()) for lid in line_ids)
        prev = seen.get(sig)
        if prev is None:
            seen[sig] = cov
            continue
        F = tuple(pts[i] for i in prev)
        Fp = tuple(pts[i] for i in cov)
        _check_switching(F, Fp, U, patch)
        return Collision(F, Fp)
    return None


def find_U_polygon(
    patch: Patch, U: Sequence[Direction], max_vertices: int | None = None, budget: int = DEFAULT_NODE_BUDGET
) -> Polygon | None:
    """First U-polygon with vertices in ``patch`` in depth-first order, if any."""
    U = tuple(U)
    cap = len(patch.points)
    limit = max_vertices or cap
    for idx, hull, _ in _convex_position_sets(patch.points, cap, budget):
        if len(idx) < 4 or len(idx) > limit or len(idx) % 2:
            continue
        P = Polygon(patch.n, tuple(hull))
        if is_U_polygon(P, U):
            return P
    return None


def _check_bound_domain(n: int) -> None:
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if n % 4 == 2:
        raise ValueError(f"n = {n} is 2 mod 4; use the odd conductor {n // 2}")


def min_k_bound(n: int) -> int:
    """Number of directions that never suffices; determining sets must be larger."""
    _check_bound_domain(n)
    return max(3, lcm(n, 2) // 2)


@dataclass(frozen=True)
class BoundWitness:
    n: int
    U: tuple[Direction, ...]
    polygon: Polygon
    inflation: Inflation

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k_must_exceed": min_k_bound(self.n),
            "m": self.polygon.m,
            "U": [u.to_json() for u in self.U],
            "polygon": self.polygon.to_json(),
            "scale_step": self.inflation.step,
        }


def witness_bound(n: int, patch: Patch | None = None, patch_radius=15) -> BoundWitness:
    """An affinely regular U-polygon in the model set with ``min_k_bound(n)`` edge directions.

    Uses ``m = lcm(n, 2)`` when that gives at least three directions and a
    hexagon otherwise.
    """
    _check_bound_domain(n)
    m = lcm(n, 2)
    if m < 6 or not exists_affinely_regular(m, n):
        m = 6
    if patch is None:
        patch = generate_patch(ModelSetDescriptor.default(n), patch_radius)
    inf = inflate_into_model_set(construct_polygon_in_field(m, n), patch.descriptor, patch=patch)
    P = inf.polygon
    U = tuple(edge_directions(P))
    if len(U) != min_k_bound(n) or not is_U_polygon(P, U):
        raise RuntimeError(f"witness for n = {n} failed its own check")
    return BoundWitness(n, U, P, inf)
