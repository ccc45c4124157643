import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from cyclopoly.arith import phi
from cyclopoly.cyclotomic import CyclotomicNumber, zeta
from cyclopoly.model_sets import (
    Kind,
    ModelSetDescriptor,
    Patch,
    PatchTooLarge,
    delone_diagnostics,
    generate_patch,
    periodicity_defect,
    small_module_elements,
    star_map,
)


def float_oracle(d: ModelSetDescriptor, radius: float, box: int):
    """Brute-force float enumeration over a coefficient box, with its own window test."""
    n = d.n
    k = np.arange(phi(n))
    phys = np.exp(2j * np.pi * k / n)
    internal = np.exp(2j * np.pi * d.star_exponent * k / n)
    win = np.array([v.approx for v in d.window.vertices])
    edges = np.roll(win, -1) - win
    found, margin = set(), math.inf
    for c in itertools.product(range(-box, box + 1), repeat=len(k)):
        c = np.array(c)
        x, y = c @ phys, c @ internal
        if abs(x) > radius:
            continue
        rel = y - win
        s = (edges.real * rel.imag - edges.imag * rel.real) / np.abs(edges)
        margin = min(margin, float(np.min(np.abs(s))))
        if np.all(s > 0):
            found.add(tuple(int(v) for v in c))
            assert max(abs(c)) < box, "oracle box too small"
    return found, margin


@pytest.mark.parametrize("n,radius,box", [(8, 5, 7), (12, 4, 6), (5, 4, 6)])
def test_cut_and_project_patch_matches_brute_force(n, radius, box):
    d = ModelSetDescriptor.default(n)
    patch = generate_patch(d, radius)
    expected, margin = float_oracle(d, radius, box)
    assert {z.coeffs for z in patch.points} == expected
    assert margin > 1e-7  # the generic shift keeps star images off the window boundary


def test_gaussian_lattice_count():
    patch = generate_patch(ModelSetDescriptor.lattice(4), 10)
    assert len(patch) == sum(1 for a in range(-10, 11) for b in range(-10, 11) if a * a + b * b <= 100)


def test_eisenstein_lattice_count():
    # |a + b ω|^2 = a^2 - a b + b^2
    patch = generate_patch(ModelSetDescriptor.lattice(3), 6)
    expected = {(a, b) for a in range(-20, 21) for b in range(-20, 21) if a * a - a * b + b * b <= 36}
    assert {z.coeffs for z in patch.points} == expected


def test_exact_boundary_radius_included():
    patch = generate_patch(ModelSetDescriptor.lattice(4), 5)
    assert patch.contains(CyclotomicNumber(4, [3, 4]))
    assert patch.contains(CyclotomicNumber(4, [0, -5]))


def test_ammann_beenker_distances():
    patch = generate_patch(ModelSetDescriptor.default(8), 10)
    diag = delone_diagnostics(patch)
    assert abs(diag["min_distance"] - 2 * math.sin(math.pi / 8)) < 1e-9
    assert diag["covering_radius_estimate"] < 1.0


@pytest.mark.parametrize("n,expected", [(12, 2 * math.sin(math.pi / 12)), (5, (math.sqrt(5) - 1) / 2), (4, 1.0), (3, 1.0)])
def test_minimum_distance(n, expected):
    diag = delone_diagnostics(generate_patch(ModelSetDescriptor.default(n), 8))
    assert abs(diag["min_distance"] - expected) < 1e-9


def test_members_are_exact_members():
    d = ModelSetDescriptor.default(12)
    patch = generate_patch(d, 6)
    assert all(d.is_member(z) for z in patch.points)
    assert all(z.is_integral() for z in patch.points)


def test_generation_is_deterministic_and_monotone():
    d = ModelSetDescriptor.default(8)
    a, b = generate_patch(d, 7), generate_patch(d, 7)
    assert a.points == b.points
    big = generate_patch(d, 9)
    assert {z.coeffs for z in big.points if big.within_region(z) and abs(z.approx) <= 7} == {z.coeffs for z in a.points}


def test_lattice_is_periodic():
    patch = generate_patch(ModelSetDescriptor.lattice(4), 6)
    for t in small_module_elements(4, 3):
        assert periodicity_defect(patch, t) is None


@pytest.mark.parametrize("n", [5, 8, 12])
def test_cut_and_project_is_not_periodic(n):
    patch = generate_patch(ModelSetDescriptor.default(n), 12)
    periods = small_module_elements(n, 3)
    assert periods
    for t in periods:
        assert periodicity_defect(patch, t) is not None, t


def test_translate_shifts_points():
    t = CyclotomicNumber(8, [Fraction(1, 2), 0, 0, 0])
    d = ModelSetDescriptor.default(8).with_translate(t)
    patch = generate_patch(d, 4)
    assert all((z - t).is_integral() for z in patch.points)
    assert all(d.is_member(z) for z in patch.points)


def test_json_round_trip():
    patch = generate_patch(ModelSetDescriptor.default(5), 5)
    again = Patch.from_json(json.loads(json.dumps(patch.to_json())))
    assert again.points == patch.points
    assert again.descriptor.to_json() == patch.descriptor.to_json()


def test_vertex_oriented_window():
    d = ModelSetDescriptor.cut_and_project(8, circumradius=1)
    assert d.window.sides == 8
    assert abs(d.window.circumradius - 1) < 1e-12
    assert len(generate_patch(d, 5)) > 0


def test_star_map():
    d = ModelSetDescriptor.default(8)
    assert star_map(zeta(8), d) == zeta(8, 3)
    with pytest.raises(ValueError):
        star_map(zeta(4), ModelSetDescriptor.lattice(4))


def test_descriptor_validation():
    with pytest.raises(ValueError):
        ModelSetDescriptor.lattice(8)
    with pytest.raises(ValueError):
        ModelSetDescriptor.default(6)
    with pytest.raises(ValueError):
        ModelSetDescriptor.default(7)
    with pytest.raises(ValueError):
        ModelSetDescriptor.cut_and_project(8, circumradius=-1)
    assert ModelSetDescriptor.default(4).kind is Kind.LATTICE


def test_patch_guard():
    with pytest.raises(PatchTooLarge):
        generate_patch(ModelSetDescriptor.default(8), 10**6)
