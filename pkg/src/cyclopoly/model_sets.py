"""Finite patches of cyclotomic model sets.

Two kinds are supported:

* lattices (``n`` in {3, 4}): every point of ``translate + Z[ζ_n]``;
* cut-and-project sets (``φ(n) = 4``, i.e. ``n`` in {5, 8, 12}): points
  ``z`` of ``translate + Z[ζ_n]`` whose star image ``σ(z - translate)`` lies
  in a regular polygonal window of the internal plane.

The star map is the Galois automorphism ``ζ_n -> ζ_n^a``. Windows are
regular polygons with a small generic shift, and membership on the window
boundary is treated as an error rather than resolved by a tolerance.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np
from scipy.spatial import cKDTree

from .arith import phi
from .cyclotomic import (
    ConductorError,
    CyclotomicNumber,
    galois_apply,
    lift,
    norm_square,
    root_of_unity,
    sign_real,
    zeta,
)
from .geometry import det_sign

STAR_EXPONENTS = {5: 2, 8: 3, 12: 5}


def _default_seed(n: int) -> CyclotomicNumber:
    """First window vertex; the others are its rotations by ``2π/sides``.

    n = 8: edge-normal octagon of edge length 1, inradius (1 + √2)/2, the
    window of the Ammann-Beenker vertex set; seed (1 + √2)/2 + i/2.
    n = 12: edge-normal dodecagon of inradius 1; seed 1 + i(2 - √3). Its
    nearest-neighbour distances are 1 and 2 sin(π/12) (unit 30° rhombi).
    n = 5: vertex-oriented decagon of circumradius 1 (an edge-normal decagon
    has irrational vertices outside K_5).
    """
    if n == 8:
        sqrt2 = zeta(8) + zeta(8, -1)
        return (sqrt2 + 1 + zeta(8, 2)) * Fraction(1, 2)
    if n == 12:
        sqrt3 = zeta(12) + zeta(12, -1)
        return (2 - sqrt3) * zeta(12, 3) + 1
    if n == 5:
        return CyclotomicNumber.one(5)
    raise ValueError(f"no default window for n = {n}")


DEFAULT_SHIFT_SCALE = Fraction(309, 500000)

# Float prefilter band; anything this close to a boundary is decided exactly.
_BAND = 1e-9

MAX_BOX_POINTS = 50_000_000


def default_shift(n: int) -> CyclotomicNumber:
    """Tiny generic offset of the window, ``(309/500000) * (2 + ζ_n)``.

    The direction 2 + ζ_n is parallel to no window edge for n in {5, 8, 12};
    a shift along an edge would leave that edge line unmoved.
    """
    return (zeta(n) + 2) * DEFAULT_SHIFT_SCALE


class Kind(enum.Enum):
    LATTICE = "lattice"
    CUT_AND_PROJECT = "cut_and_project"


class WindowBoundaryError(ValueError):
    """A star image landed exactly on the window boundary."""


class PatchTooLarge(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # decimal reading, so 2.5 stays 5/2 and 0.1 stays 1/10
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Window:
    """Regular polygon ``seed * ω^k + shift`` (``ω = ζ_sides``) in the internal plane."""

    n: int
    sides: int
    seed: CyclotomicNumber
    shift: CyclotomicNumber
    vertices: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.sides < 3:
            raise ValueError("window needs at least 3 sides")
        if self.seed.n != self.n or self.shift.n != self.n:
            raise ConductorError("window data must share the descriptor conductor")
        if self.seed.is_zero():
            raise ValueError("degenerate window: zero circumradius")
        omega = root_of_unity(self.sides, self.n)
        verts = []
        w = self.seed
        for _ in range(self.sides):
            verts.append(w + self.shift)
            w = w * omega
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def circumradius(self) -> float:
        return abs(self.seed.approx)

    def contains(self, y: CyclotomicNumber) -> bool:
        """Strict interior test; raises ``WindowBoundaryError`` on the boundary."""
        verts = self.vertices
        k = len(verts)
        for i in range(k):
            s = det_sign(verts[(i + 1) % k] - verts[i], y - verts[i])
            if s == 0:
                raise WindowBoundaryError(f"star image {y} lies on the window boundary")
            if s < 0:
                return False
        return True

    def outer_radius(self) -> float:
        return self.circumradius + abs(self.shift.approx) + 1e-9

    def halfplanes(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit inward normals and offsets: inside iff ``normals @ y - offsets > 0``."""
        pts = np.array([v.approx for v in self.vertices])
        edges = np.roll(pts, -1) - pts
        normals = 1j * edges / np.abs(edges)
        offsets = (normals.conj() * pts).real
        return normals, offsets

    def to_json(self) -> dict:
        return {
            "sides": self.sides,
            "seed": self.seed.to_json(),
            "shift": self.shift.to_json(),
        }


@dataclass(frozen=True)
class ModelSetDescriptor:
    n: int
    kind: Kind
    star_exponent: int | None = None
    window: Window | None = None
    translate: CyclotomicNumber | None = None

    def __post_init__(self):
        n = self.n
        if n < 3 or n % 4 == 2:
            raise ValueError(f"conductor must be >= 3 and not 2 mod 4, got {n}")
        if self.translate is None:
            object.__setattr__(self, "translate", CyclotomicNumber.zero(n))
        elif self.translate.n != n:
            raise ConductorError("translate must have the descriptor conductor")
        if self.kind is Kind.LATTICE:
            if n not in (3, 4):
                raise ValueError(f"only n in {{3, 4}} give lattices, got {n}")
            return
        if phi(n) != 4:
            raise ValueError(f"cut-and-project sets need phi(n) = 4, got n = {n}")
        a = self.star_exponent
        if a is None or math.gcd(a, n) != 1 or a % n in (1, n - 1):
            raise ValueError(f"star exponent {a} must be a non-trivial, non-conjugate unit")
        if self.window is None or self.window.n != n:
            raise ValueError("cut-and-project descriptor needs a window of matching conductor")

    @classmethod
    def lattice(cls, n: int, translate: CyclotomicNumber | None = None):
        return cls(n, Kind.LATTICE, translate=translate)

    @classmethod
    def cut_and_project(
        cls,
        n: int,
        circumradius=None,
        shift: CyclotomicNumber | None = None,
        translate: CyclotomicNumber | None = None,
        star_exponent: int | None = None,
    ):
        """Regular ``n``-gon window (``2n``-gon for odd ``n``).

        ``circumradius`` (a rational) selects a vertex-oriented window
        ``circumradius * ω^k``; by default the edge-normal windows documented in
        ``_default_seed`` are used.
        """
        if n not in STAR_EXPONENTS:
            raise ValueError(f"no cut-and-project default for n = {n}")
        if circumradius is None:
            seed = _default_seed(n)
        else:
            r = _as_fraction(circumradius)
            if r <= 0:
                raise ValueError("window circumradius must be positive")
            seed = CyclotomicNumber.rational(r, n)
        if shift is None:
            shift = default_shift(n)
        sides = n if n % 2 == 0 else 2 * n
        window = Window(n, sides, seed, shift)
        return cls(
            n,
            Kind.CUT_AND_PROJECT,
            star_exponent if star_exponent is not None else STAR_EXPONENTS[n],
            window,
            translate,
        )

    @classmethod
    def default(cls, n: int, **kwargs):
        """Lattice for ``n`` in {3, 4}, cut-and-project set otherwise."""
        if n in (3, 4):
            return cls.lattice(n, kwargs.get("translate"))
        return cls.cut_and_project(n, **kwargs)

    def with_translate(self, t: CyclotomicNumber) -> "ModelSetDescriptor":
        return ModelSetDescriptor(self.n, self.kind, self.star_exponent, self.window, t)

    def star(self, z: CyclotomicNumber) -> CyclotomicNumber:
        return star_map(z, self)

    def is_member(self, z: CyclotomicNumber) -> bool:
        """Exact model-set membership (no physical cutoff)."""
        z = _to_conductor(z, self.n)
        d = z - self.translate
        if not d.is_integral():
            return False
        if self.kind is Kind.LATTICE:
            return True
        return self.window.contains(galois_apply(self.star_exponent, d))

    def to_json(self) -> dict:
        out = {"n": self.n, "kind": self.kind.value}
        if self.kind is Kind.CUT_AND_PROJECT:
            out["star_exponent"] = self.star_exponent
            out["window"] = self.window.to_json()
        out["translate"] = self.translate.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "ModelSetDescriptor":
        n = int(data["n"])
        kind = Kind(data["kind"])
        translate = CyclotomicNumber.from_json(data["translate"]) if "translate" in data else None
        if kind is Kind.LATTICE:
            return cls.lattice(n, translate)
        w = data["window"]
        window = Window(
            n,
            int(w["sides"]),
            CyclotomicNumber.from_json(w["seed"]),
            CyclotomicNumber.from_json(w["shift"]),
        )
        return cls(n, kind, int(data["star_exponent"]), window, translate)


def _to_conductor(z: CyclotomicNumber, n: int) -> CyclotomicNumber:
    if z.n == n:
        return z
    if n % z.n == 0:
        return lift(z, n)
    raise ConductorError(f"cannot place a conductor-{z.n} element in K_{n}")


def star_map(z: CyclotomicNumber, d: ModelSetDescriptor) -> CyclotomicNumber:
    if d.kind is not Kind.CUT_AND_PROJECT:
        raise ValueError("lattice descriptors have no star map")
    return galois_apply(d.star_exponent, _to_conductor(z, d.n))


@dataclass(frozen=True)
class Patch:
    """All model-set points within ``region_radius`` of the origin, in canonical order."""

    descriptor: ModelSetDescriptor
    region_radius: Fraction
    points: tuple[CyclotomicNumber, ...]
    index: Mapping[tuple, int] = field(repr=False, compare=False)

    @classmethod
    def from_points(cls, descriptor, region_radius, points: Iterable[CyclotomicNumber]):
        pts = tuple(sorted(points, key=lambda z: z.coeffs))
        index = {z.coeffs: i for i, z in enumerate(pts)}
        return cls(descriptor, _as_fraction(region_radius), pts, index)

    @property
    def n(self) -> int:
        return self.descriptor.n

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def contains(self, z: CyclotomicNumber) -> bool:
        return contains(self, z)

    def within_region(self, z: CyclotomicNumber) -> bool:
        return within_radius(z, self.region_radius)

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "region_radius": str(self.region_radius),
            "points": [[str(c) for c in z.coeffs] for z in self.points],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Patch":
        d = ModelSetDescriptor.from_json(data["descriptor"])
        pts = [CyclotomicNumber(d.n, [Fraction(c) for c in v]) for v in data["points"]]
        return cls.from_points(d, Fraction(data["region_radius"]), pts)


def within_radius(z: CyclotomicNumber, radius) -> bool:
    """Exact test ``|z| <= radius``."""
    r = _as_fraction(radius)
    v = abs(z.approx)
    err = z.approx_error + 1e-15 * (v + 1)
    if v + err < r:
        return True
    if v - err > r:
        return False
    return sign_real(CyclotomicNumber.rational(r * r, z.n) - norm_square(z)) >= 0


def contains(patch: Patch, z: CyclotomicNumber) -> bool:
    z = _to_conductor(z, patch.n)
    return z.coeffs in patch.index


def _coefficient_box(d: ModelSetDescriptor, radius: float) -> list[int]:
    """Per-coordinate bounds that provably enclose every point of the patch."""
    n = d.n
    deg = phi(n)
    ks = np.arange(deg)
    phys = np.exp(2j * np.pi * ks / n)
    rows = [phys.real, phys.imag]
    outer = radius + abs(d.translate.approx) + 1e-9
    if d.kind is Kind.CUT_AND_PROJECT:
        internal = np.exp(2j * np.pi * ((d.star_exponent * ks) % n) / n)
        rows += [internal.real, internal.imag]
    inv = np.linalg.inv(np.array(rows))
    bounds = []
    for k in range(deg):
        b = np.linalg.norm(inv[k, :2]) * outer
        if d.kind is Kind.CUT_AND_PROJECT:
            b += np.linalg.norm(inv[k, 2:]) * d.window.outer_radius()
        bounds.append(int(math.floor(b * (1 + 1e-9) + 1e-9)))
    return bounds


def generate_patch(d: ModelSetDescriptor, region_radius, max_box: int = MAX_BOX_POINTS) -> Patch:
    """Exhaustively enumerate the model-set points with ``|z| <= region_radius``.

    Integer coefficient vectors are scanned over a box derived from the inverse
    of the combined physical/internal embedding, so nothing can be missed; a
    float prefilter with a safety band defers borderline points to exact tests.
    """
    R = _as_fraction(region_radius)
    if R <= 0:
        raise ValueError("region radius must be positive")
    n = d.n
    deg = phi(n)
    bounds = _coefficient_box(d, float(R))
    if max(bounds) >= 2**31:
        raise PatchTooLarge("coefficient bound would overflow 32-bit integers")
    total = math.prod(2 * b + 1 for b in bounds)
    if total > max_box:
        raise PatchTooLarge(f"coefficient box has {total} points (limit {max_box})")

    ks = np.arange(deg)
    phys_roots = np.exp(2j * np.pi * ks / n)
    tau = d.translate.approx
    cap = d.kind is Kind.CUT_AND_PROJECT
    if cap:
        int_roots = np.exp(2j * np.pi * ((d.star_exponent * ks) % n) / n)
        normals, offsets = d.window.halfplanes()
    Rf = float(R)

    accepted: list[tuple[int, ...]] = []
    borderline: list[tuple[int, ...]] = []
    tail_ranges = [np.arange(-b, b + 1) for b in bounds[1:]]
    tail = (
        np.stack(np.meshgrid(*tail_ranges, indexing="ij"), axis=-1).reshape(-1, deg - 1)
        if deg > 1
        else np.zeros((1, 0), dtype=np.int64)
    )
    for a0 in range(-bounds[0], bounds[0] + 1):
        coords = np.concatenate([np.full((len(tail), 1), a0), tail], axis=1)
        base = coords @ phys_roots
        dist = np.abs(base + tau) - Rf
        sure = dist < -_BAND
        maybe = dist <= _BAND
        if cap:
            y = coords @ int_roots
            margin = ((normals.conj()[None, :] * y[:, None]).real - offsets[None, :]).min(axis=1)
            sure &= margin > _BAND
            maybe &= margin >= -_BAND
        accepted.extend(map(tuple, coords[sure].tolist()))
        borderline.extend(map(tuple, coords[maybe & ~sure].tolist()))

    points = [CyclotomicNumber._raw(n, c) + d.translate for c in accepted]
    for c in borderline:
        z = CyclotomicNumber._raw(n, c) + d.translate
        if within_radius(z, R) and d.is_member(z):
            points.append(z)
    return Patch.from_points(d, R, points)


def delone_diagnostics(patch: Patch, grid: int = 60) -> dict:
    """Minimum pairwise distance and a covering-radius estimate on the inner half-disc."""
    if len(patch) < 2:
        raise ValueError("need at least two points")
    xy = np.array([[z.approx.real, z.approx.imag] for z in patch.points])
    err = max(z.approx_error for z in patch.points)
    tree = cKDTree(xy)
    dists, _ = tree.query(xy, k=2)
    min_distance = float(dists[:, 1].min())
    r = float(patch.region_radius) / 2
    g = np.linspace(-r, r, grid)
    gx, gy = np.meshgrid(g, g)
    samples = np.stack([gx.ravel(), gy.ravel()], axis=1)
    samples = samples[np.hypot(samples[:, 0], samples[:, 1]) <= r]
    cover, _ = tree.query(samples, k=1)
    return {
        "min_distance": min_distance,
        "min_distance_error": 2 * err + 1e-15,
        "covering_radius_estimate": float(cover.max()),
    }


def periodicity_defect(patch: Patch, t: CyclotomicNumber) -> CyclotomicNumber | None:
    """A point ``z`` of the inner half-disc with ``z + t`` inside the region but
    not in the patch, or ``None`` when translation by ``t`` looks like a symmetry."""
    half = patch.region_radius / 2
    for z in patch.points:
        if not within_radius(z, half):
            continue
        w = z + t
        if within_radius(w, patch.region_radius) and not contains(patch, w):
            return z
    return None


def small_module_elements(n: int, max_norm: float) -> list[CyclotomicNumber]:
    """Nonzero elements of ``Z[ζ_n]`` with ``|z| <= max_norm``, in canonical order."""
    deg = phi(n)
    ks = np.arange(deg)
    roots = np.exp(2j * np.pi * ks / n)
    # physical norm alone does not bound coefficients when deg > 2; use a
    # small fixed box, which is all the probes need
    b = 3 if deg > 2 else int(math.ceil(max_norm)) + 1
    out = []
    for c in itertools.product(range(-b, b + 1), repeat=deg):
        if not any(c):
            continue
        if abs(np.dot(c, roots)) <= max_norm + 1e-9:
            z = CyclotomicNumber._raw(n, tuple(c))
            if within_radius(z, max_norm):
                out.append(z)
    return out
