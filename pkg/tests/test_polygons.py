import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from cyclopoly.arith import lcm
from cyclopoly.cyclotomic import CyclotomicNumber, lift, try_lower, zeta
from cyclopoly.fields import real_subfield_subset
from cyclopoly.geometry import orientation
from cyclopoly.model_sets import ModelSetDescriptor, generate_patch
from cyclopoly.polygons import (
    DegeneratePolygon,
    InflationInconclusive,
    Polygon,
    admissible_m,
    basis_coords,
    chord_ratio,
    construct_polygon_in_field,
    contraction_unit,
    exists_affinely_regular,
    inflate_into_model_set,
    verify_affinely_regular,
)

FIELDS = [3, 4, 5, 7, 8, 9, 11, 12, 13, 16]


def G(x, y):
    return CyclotomicNumber(4, [x, y])


def test_headline_sets():
    assert admissible_m(4, 100) == [3, 4, 6]
    assert admissible_m(3, 100) == [3, 4, 6]
    assert admissible_m(8, 100) == [3, 4, 6, 8]
    assert admissible_m(12, 100) == [3, 4, 6, 12]
    assert admissible_m(5, 100) == [3, 4, 5, 6, 10]


def test_existence_equals_real_subfield_inclusion():
    for n in FIELDS:
        for m in range(3, 61):
            assert exists_affinely_regular(m, n) == real_subfield_subset(m, n), (m, n)


def test_existence_equals_membership_of_the_cosine():
    # an affinely regular m-gon exists iff ζ_m + ζ_m^-1 lies in K_n
    for n in (3, 4, 5, 8, 9, 12):
        for m in range(3, 31):
            theta = zeta(m) + zeta(m, -1)
            inside = try_lower(lift(theta, lcm(m, n)), n) is not None
            assert inside == exists_affinely_regular(m, n), (m, n)


def test_domain_errors():
    with pytest.raises(ValueError):
        exists_affinely_regular(5, 6)
    with pytest.raises(ValueError):
        exists_affinely_regular(2, 8)
    with pytest.raises(ValueError):
        construct_polygon_in_field(5, 8)


@pytest.mark.parametrize("m", [3, 4, 5, 7, 8, 10, 12])
def test_basis_coords_identity(m):
    w = zeta(m)
    for j in range(-2 * m, 2 * m + 1):
        a, b = basis_coords(j, m)
        assert a + b * w == zeta(m, j)
        assert a.is_real_integral() and b.is_real_integral()


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12])
def test_constructions(n):
    for m in admissible_m(n, 2 * n + 6):
        P = construct_polygon_in_field(m, n)
        assert P.m == m and P.conductor == n
        assert all(v.is_integral() for v in P.vertices)
        w = verify_affinely_regular(P)
        assert w is not None and w.m == m
        observed, expected = chord_ratio(P)
        assert abs(observed - expected) < 1e-9


def test_triangle_in_octagonal_field():
    P = construct_polygon_in_field(3, 8)
    assert list(P.vertices) == [CyclotomicNumber.one(8), zeta(8), -1 - zeta(8)]


def test_regular_polygon_witness_has_zero_residual():
    for m in (3, 5, 7, 8, 9):
        R = Polygon(m, tuple(zeta(m, j) for j in range(m)))
        w = verify_affinely_regular(R)
        assert w.residual.is_zero()
        assert w.c_m == zeta(m) + zeta(m, -1)
        assert w.center.is_zero()


def test_sheared_square():
    # the square (1,0),(0,1),(-1,0),(0,-1) under an integer shear
    sq = [G(1, 0), G(0, 1), G(-1, 0), G(0, -1)]
    sheared = [G(v.coeffs[0] + 2 * v.coeffs[1], v.coeffs[1]) for v in sq]
    w = verify_affinely_regular(Polygon(4, tuple(sheared)))
    assert w is not None and w.c_m == 0


def test_rejects_non_affinely_regular():
    trapezoid = Polygon(4, (G(0, 0), G(3, 0), G(2, 1), G(1, 1)))
    assert verify_affinely_regular(trapezoid) is None
    pent = Polygon.from_points([G(0, 0), G(2, 0), G(3, 2), G(1, 3), G(-1, 2)])
    assert verify_affinely_regular(pent) is None


def test_degenerate_polygons():
    with pytest.raises(DegeneratePolygon):
        Polygon(4, (G(0, 0), G(1, 0), G(2, 0)))
    with pytest.raises(DegeneratePolygon):
        Polygon(4, (G(0, 0), G(0, 1), G(1, 0)))  # clockwise
    with pytest.raises(DegeneratePolygon):
        Polygon.from_points([G(0, 0), G(2, 0), G(1, 0), G(0, 2)])


def _real_linear(z, alpha, beta, t):
    return alpha * z + beta * z.conj() + t


@given(
    st.sampled_from([(6, 4), (4, 4), (8, 8), (6, 8), (5, 5), (10, 5), (12, 12)]),
    st.lists(st.integers(-3, 3), min_size=12, max_size=12),
    st.booleans(),
)
def test_affine_invariance_of_verdict(mn, raw, perturb):
    m, n = mn
    d = len(CyclotomicNumber.zero(n).coeffs)
    alpha = CyclotomicNumber(n, (raw + [0] * d)[:d])
    beta = CyclotomicNumber(n, (raw[4:] + [0] * d)[:d])
    t = CyclotomicNumber(n, (raw[8:] + [0] * d)[:d])
    assume(abs(abs(alpha.approx) - abs(beta.approx)) > 1e-6)
    P = construct_polygon_in_field(m, n)
    verts = list(P.vertices)
    if perturb:
        verts[0] = verts[0] * Fraction(11, 10)
    try:
        Q0 = Polygon(n, tuple(verts))
    except DegeneratePolygon:
        assume(False)
    image = [_real_linear(v, alpha, beta, t) for v in Q0.vertices]
    if orientation(image[0], image[1], image[2]) < 0:
        image.reverse()
    Q = Polygon(n, tuple(image))
    assert (verify_affinely_regular(Q) is None) == (verify_affinely_regular(Q0) is None)
    assert (verify_affinely_regular(Q0) is None) == perturb


def test_contraction_units():
    golden = (1 + math.sqrt(5)) / 2
    for n, value in ((8, 1 + math.sqrt(2)), (12, 2 + math.sqrt(3)), (5, golden)):
        eps = contraction_unit(ModelSetDescriptor.default(n))
        assert abs(eps.approx.real - value) < 1e-12


@pytest.mark.parametrize("n", [4, 8, 12, 5, 3])
def test_inflation_lands_in_patch(n):
    d = ModelSetDescriptor.default(n)
    patch = generate_patch(d, 15)
    for m in admissible_m(n, 2 * n):
        inf = inflate_into_model_set(construct_polygon_in_field(m, n), d, patch=patch)
        assert inf.step <= 8
        assert all(patch.contains(v) and d.is_member(v) for v in inf.polygon.vertices)
        assert verify_affinely_regular(inf.polygon) is not None


def test_inflation_budget_is_inconclusive():
    d = ModelSetDescriptor.default(12)
    with pytest.raises(InflationInconclusive):
        inflate_into_model_set(construct_polygon_in_field(12, 12), d, patch_radius=15, max_steps=1)
    with pytest.raises(InflationInconclusive):
        inflate_into_model_set(construct_polygon_in_field(12, 12), d, patch_radius=15, max_candidates=1)


def test_polygon_json_round_trip():
    P = construct_polygon_in_field(10, 5)
    assert Polygon.from_json(P.to_json()) == P


def test_basis_coords_examples():
    c = zeta(7) + zeta(7, -1)
    assert basis_coords(0, 7) == (1, 0)
    assert basis_coords(1, 7) == (0, 1)
    assert basis_coords(2, 7) == (-1, c)
    assert basis_coords(3, 7) == (-c, c * c - 1)


def test_hexagon_in_gaussian_integers():
    P = construct_polygon_in_field(6, 4)
    assert [v.coeffs for v in P.vertices] == [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def test_regular_octagon_needs_no_homothety():
    d = ModelSetDescriptor.default(8)
    inf = inflate_into_model_set(construct_polygon_in_field(8, 8), d, patch_radius=5)
    assert inf.step == 1 and inf.scale == 1 and inf.translate.is_zero()


def test_lattice_inflation_is_trivial():
    d = ModelSetDescriptor.lattice(4)
    for m in (3, 4, 6):
        inf = inflate_into_model_set(construct_polygon_in_field(m, 4), d, patch_radius=4)
        assert inf.scale == 1 and inf.translate.is_zero()
