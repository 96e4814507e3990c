import math

import pytest

from stable_norm_lab.counting import CountSeries
from stable_norm_lab.enumeration import ConjugacyClass
from stable_norm_lab.errors import GiraffeCheckFailed, HorizonError, InvalidInputError, PreconditionError
from stable_norm_lab.giraffe import (
    decompose,
    giraffe_theorem_check,
    neck_criterion,
    neck_value,
    plane_ball_area,
    plane_ball_area_estimate,
    primitive_directions,
)
from stable_norm_lab.numerics import collar_halfwidth
from stable_norm_lab.stable_norm import flat_stable_norm_table
from stable_norm_lab.surfaces import FlatTorus, build_giraffe_genus2
from stable_norm_lab.symplectic import SymplecticSpace, determinant, intersection
from stable_norm_lab.words import parse_word

from conftest import giraffe, giraffe_catalog, giraffe_table, octagon

EUCLID = lambda p, q: math.hypot(p, q)  # noqa: E731
SUP = lambda p, q: max(abs(p), abs(q))  # noqa: E731


def sep_class(s):
    from stable_norm_lab.giraffe import _separating_class

    return _separating_class(s, None, s.separating_words[0])


def test_neck_thin():
    cert = neck_criterion(giraffe(), sep_class(giraffe()))
    assert cert.feasible
    w = collar_halfwidth(0.1)
    assert w == pytest.approx(math.asinh(1 / math.sinh(0.05)), rel=1e-12)
    assert round(w, 2) == 3.69
    # independent re-check of both inequalities
    r = cert.feasible_r
    assert 0 < r <= cert.collar_bound + 1e-12
    assert 2 * r - cert.curve.length * math.cosh(r) >= -1e-12
    assert cert.criterion_value == pytest.approx(neck_value(cert.curve.length, r), abs=1e-12)


def test_neck_at_threshold_infeasible():
    s = build_giraffe_genus2(2 * math.asinh(1))
    cert = neck_criterion(s, sep_class(s))
    assert not cert.feasible
    assert cert.collar_bound == pytest.approx(math.asinh(1), rel=1e-9)
    assert cert.criterion_value < 0
    with pytest.raises(GiraffeCheckFailed) as err:
        decompose(s)
    assert err.value.certificate is cert or err.value.certificate.criterion_value == cert.criterion_value


def test_neck_long_curve_infeasible():
    s = build_giraffe_genus2(5.0, ((6.0, 6.0), (6.0, 6.0)))
    assert not neck_criterion(s, sep_class(s)).feasible


def test_neck_preconditions():
    s = giraffe()
    a1 = giraffe_catalog(4.0).lookup(parse_word("a1"))
    with pytest.raises(PreconditionError):
        neck_criterion(s, a1)
    fake = ConjugacyClass(parse_word("a2 b2 A2 B2"), 0.1, 2.0025, (0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        neck_criterion(s, fake)


def test_decompose_giraffe():
    dec = decompose(giraffe(), giraffe_catalog(4.0))
    assert dec.planes == (((1, 0, 0, 0), (0, 1, 0, 0)), ((0, 0, 1, 0), (0, 0, 0, 1)))
    S = SymplecticSpace(2)
    (a, b), (c, d) = dec.planes
    assert intersection(S, a, b) == 1 and intersection(S, c, d) == 1
    assert all(intersection(S, u, v) == 0 for u in (a, b) for v in (c, d))
    assert determinant([a, b, c, d]) == 1
    assert all(n.feasible for n in dec.necks)


def test_decompose_octagon_refused():
    with pytest.raises(PreconditionError):
        decompose(octagon())


def test_area_oracles():
    assert abs(plane_ball_area(EUCLID, n_rays=360) - math.pi) <= 0.01
    assert abs(plane_ball_area(SUP, n_rays=360) - 4) <= 0.05


@pytest.mark.parametrize("f", [EUCLID, SUP])
def test_area_refinement_within_bound(f):
    e1 = plane_ball_area_estimate(f, n_rays=360)
    e2 = plane_ball_area_estimate(f, n_rays=720)
    assert abs(e2.area - e1.area) <= e1.bound
    assert e1.inner <= e1.outer + 1e-12


def test_area_homogeneity():
    a = plane_ball_area(EUCLID, n_rays=200)
    b = plane_ball_area(lambda p, q: 2 * EUCLID(p, q), n_rays=200)
    assert b == pytest.approx(a / 4, rel=1e-12)


def test_area_from_flat_table():
    t = flat_stable_norm_table(FlatTorus((1.0, 0.0), (0.0, 1.0)), 20.0)
    assert abs(plane_ball_area(t, ((1, 0), (0, 1)), 360) - math.pi) <= 0.01


def test_area_missing_direction():
    t = flat_stable_norm_table(FlatTorus((1.0, 0.0), (0.0, 1.0)), 0.5)
    with pytest.raises(HorizonError):
        plane_ball_area(t, ((1, 0), (0, 1)), 360)
    with pytest.raises(InvalidInputError):
        plane_ball_area(EUCLID, n_rays=3)


def test_primitive_directions():
    d = primitive_directions(1)
    assert len(d) == 8 and d[0] == (1, 0)
    assert all(math.gcd(*v) == 1 for v in primitive_directions(5))


def test_giraffe_plane_areas_symmetric():
    table = giraffe_table(7.0)
    dec = decompose(giraffe())
    a, b = (plane_ball_area(table, p, 360) for p in dec.planes)
    assert a == pytest.approx(b, rel=1e-9)
    assert 0.8 < a < 1.0


def test_theorem_check_synthetic_and_refusal():
    areas = [0.7, 0.6]
    s = CountSeries(tuple((T, int(1.3 * T * T)) for T in range(10, 30)), "N", {"kind": "synthetic"})
    rep = giraffe_theorem_check(s, areas, tol=1e-3, window=(10, 29))
    assert rep.passed and rep.gap < 1e-3
    oct_series = CountSeries(tuple((T, T * T) for T in range(1, 9)), "N", {"kind": "octagon"})
    with pytest.raises(PreconditionError):
        giraffe_theorem_check(oct_series, areas, 0.15)
