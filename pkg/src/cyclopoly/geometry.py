"""Exact planar predicates on cyclotomic coordinates.

Each predicate first tries the cached double-precision embedding together
with a rigorous error bound; only when the float result is too close to zero
does it fall back to an exact zero test plus adaptive-precision evaluation.
"""

from __future__ import annotations

from functools import cmp_to_key
from typing import Iterable, Sequence

from .cyclotomic import CyclotomicNumber, sign_imag, sign_real

_U = 2.0**-52


def cross(w: CyclotomicNumber, o: CyclotomicNumber) -> CyclotomicNumber:
    """``w * conj(o) - conj(w) * o``; purely imaginary, zero iff ``w ∥ o``."""
    return w * o.conj() - w.conj() * o


def det_sign(w: CyclotomicNumber, o: CyclotomicNumber) -> int:
    """Sign of the 2x2 determinant ``[w o]`` (positive when ``o`` is left of ``w``)."""
    wv, ov = w.approx, o.approx
    det = wv.real * ov.imag - wv.imag * ov.real
    ew, eo = w.approx_error, o.approx_error
    bound = 2 * (abs(wv) * eo + abs(ov) * ew + ew * eo) + 4 * _U * (
        abs(wv.real * ov.imag) + abs(wv.imag * ov.real)
    )
    if abs(det) > bound:
        return 1 if det > 0 else -1
    return sign_imag(w.conj() * o)


def orientation(a: CyclotomicNumber, b: CyclotomicNumber, c: CyclotomicNumber) -> int:
    """+1 for a counterclockwise turn ``a -> b -> c``, -1 clockwise, 0 collinear."""
    av, bv, cv = a.approx, b.approx, c.approx
    d1 = bv - av
    d2 = cv - av
    det = d1.real * d2.imag - d1.imag * d2.real
    e1 = a.approx_error + b.approx_error + _U * (abs(av) + abs(bv))
    e2 = a.approx_error + c.approx_error + _U * (abs(av) + abs(cv))
    bound = 2 * (abs(d1) * e2 + abs(d2) * e1 + e1 * e2) + 4 * _U * (
        abs(d1.real * d2.imag) + abs(d1.imag * d2.real)
    )
    if abs(det) > bound:
        return 1 if det > 0 else -1
    return det_sign(b - a, c - a)


def dot_sign(w: CyclotomicNumber, o: CyclotomicNumber) -> int:
    """Sign of the Euclidean inner product of ``w`` and ``o``."""
    return sign_real(w * o.conj())


def compare_xy(a: CyclotomicNumber, b: CyclotomicNumber) -> int:
    """Lexicographic comparison by (x, y) coordinates."""
    av, bv = a.approx, b.approx
    err = a.approx_error + b.approx_error + _U * (abs(av) + abs(bv))
    dx = av.real - bv.real
    if abs(dx) > err:
        return 1 if dx > 0 else -1
    d = a - b
    s = sign_real(d)
    if s:
        return s
    dy = av.imag - bv.imag
    if abs(dy) > err:
        return 1 if dy > 0 else -1
    return sign_imag(d)


xy_key = cmp_to_key(compare_xy)


def convex_hull(points: Iterable[CyclotomicNumber]) -> list[CyclotomicNumber]:
    """Strict hull vertices in counterclockwise order, starting at the (x, y)-least point."""
    pts = sorted(set(points), key=xy_key)
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def in_closed_hull(hull: Sequence[CyclotomicNumber], p: CyclotomicNumber) -> bool:
    """Whether ``p`` lies in the closed convex hull described by ``convex_hull`` output."""
    k = len(hull)
    if k == 0:
        return False
    if k == 1:
        return p == hull[0]
    if k == 2:
        a, b = hull
        if orientation(a, b, p) != 0:
            return False
        # hull endpoints come out sorted by (x, y)
        return compare_xy(a, p) <= 0 <= compare_xy(b, p)
    for i in range(k):
        if orientation(hull[i], hull[(i + 1) % k], p) < 0:
            return False
    return True


def in_convex_position(points: Sequence[CyclotomicNumber]) -> bool:
    """True iff every point is a strict vertex of the convex hull."""
    return len(convex_hull(points)) == len(set(points))
