from fractions import Fraction

import pytest

import calorics as c


def test_parse_print_and_degree():
    p = c.parse_poly("t^2 + t*x^2 + 1/12*x^4", 1)
    assert str(p) == "t^2 + t*x^2 + 1/12*x^4"
    assert len(p) == 3
    assert c.parabolic_degree(p) == 4
    assert p == c.basic_hcp(4)
    assert c.heat_apply(p).is_zero
    assert (3, (1,), Fraction(1, 6)) not in p.terms()
    assert p.terms()[-1] == (0, (4,), Fraction(1, 12))


def test_errors_are_python_exceptions():
    with pytest.raises(c._core.ParseError):
        c.parse_poly("t + q", 1)
    with pytest.raises(c._core.NotHomogeneous):
        c.parabolic_degree(c.parse_poly("t + x", 1))
    with pytest.raises(c._core.BoundViolation):
        c.bounds_report(2, 4, counted=99)
    assert issubclass(c._core.ParseError, c._core.CaloricsError)


def test_exact_evaluation_and_arithmetic():
    p = c.Polynomial("2t + x^2", 1)
    assert p.evaluate([1, Fraction(-1, 2)]) == 0
    assert p.evaluate(["1/3", 0]) == Fraction(1, 9)
    q = c.Polynomial("2t + y^2", 2)
    prod = c.Polynomial("2t + x^2", 2) * q
    assert prod == c.fixture("prod_n2d4")
    assert (prod * Fraction(1, 4)) == c.product_hcp([2, 2])
    assert c.Polynomial.from_json(prod.to_json()) == prod


def test_checks():
    assert c.is_caloric(c.fixture("n2d3"))["ok"]
    assert c.is_caloric(c.Polynomial("t + x^2", 1))["status"] == "not_caloric"
    assert c.chain_check(c.fixture("n3d4"))["ok"]
    assert c.eigen_check(c.fixture("n2d4"))["ok"]
    assert len(c.basis(2, 3)) == 4
    rational, half_pi, value = c.weighted_inner_product(c.basic_hcp(1), c.basic_hcp(1))
    assert rational == 4 and half_pi == 1 and value == pytest.approx(4 * 3.141592653589793 ** 0.5)
    f = c.parabola_factors(4)
    assert f["coefficients"] == pytest.approx([(3 - 6 ** 0.5) / 6, (3 + 6 ** 0.5) / 6])


def test_constructions():
    assert str(c.harmonic_2d(2, "re")) == "x^2 - y^2"
    u = c.odd_construction(3, 1, ("-3/5", "-4/5"))
    assert c.scalar_multiple(c.fixture("n2d3"), u) == 750
    assert c.scalar_multiple(c.fixture("n2d3"), c.odd_construction(3, 1)) is None
    fig = c.zero_mod4(4, Fraction(1, 5), "angle:pi/10")
    assert c.is_caloric(fig)["ok"]
    assert c.high_dim(2).spatial_dim == 3
    assert "n2d4" in c.fixture_ids()


def test_counting():
    r = c.nodal_count(c.fixture("n2d4"), [128, 256, 512])
    assert r["total"] == 3 and r["stable"] and r["method"] == "cube-exact"
    assert c.nodal_count(c.basic_hcp(5))["total"] == 6
    s = c.slice_count(c.basic_hcp(4), half_width=4.0, nodal_total=4)
    assert s["count"] == 5 and s["bound_holds"]
    polar = c.polar_chambers(c.harmonic_2d(6, "im"), "north", 0.1, 96)
    assert polar["sign_changes"] == 12
    b = c.bounds_report(2, 8)
    assert (b["minimum"], b["product_lower"], b["courant_upper"]) == (3, "16", "45")


def test_scan_and_export():
    scan = c.scan_epsilon("odd", 3, [1])
    assert scan["largest_admissible"] == "1"
    assert c.scan_epsilon("odd", 3, [10 ** 6])["flagged"]
    cloud = c.export_nodal_pointcloud(c.zero_mod4(4, "1/5", "angle:pi/10"), 128, 0.2)
    assert len(cloud) > 0
    assert c.single_linkage_clusters(cloud, 0.05) == 2
    assert c.export_nodal_pointcloud(c.Polynomial("3", 2), 32, 0.2) == []
