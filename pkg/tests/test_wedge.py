import math

import numpy as np
import pytest

from wedgelab import linop, models, quadric, sampling, wedge

PI = math.pi
H, E, F = np.eye(3)
K = E - F


@pytest.fixture(scope="module")
def sl2():
    return models.get_spec("sl2-cayley")


@pytest.fixture(scope="module")
def ds2():
    return models.get_spec("dS2")


def test_modular_field_vanishes_at_base_point(sl2):
    e = wedge.base_point(sl2)
    assert np.array_equal(wedge.modular_vector_field(sl2, e), np.zeros(3))
    assert not wedge.in_positivity_domain(sl2, e)


def test_modular_field_along_the_flow(sl2):
    p = wedge.point_from_word(sl2, [(H, 1.7)])
    assert np.max(np.abs(wedge.modular_vector_field(sl2, p))) < 1e-14


@pytest.mark.parametrize("t", [0.1, PI / 4, 1.2])
def test_modular_field_on_exp_q(sl2, t):
    x = t * K
    p = wedge.point_from_word(sl2, [(x, 1.0)])
    expected = -linop.apply_entire("sinh", sl2.alg.ad(x)) @ H
    assert np.allclose(wedge.modular_vector_field(sl2, p), expected)


def test_positivity_at_quarter_turn(sl2):
    x = PI / 4 * K
    y = -linop.apply_entire("sinh", sl2.alg.ad(x)) @ H
    assert y[1] > 0 and y[2] > 0
    assert wedge.in_positivity_domain(sl2, wedge.point_from_word(sl2, [(x, 1.0)]))


def test_positivity_on_desitter_is_the_wedge(ds2, rng):
    for x in quadric.sample_desitter(2, 40, rng):
        if abs(quadric.wedge_slack(x)) < 1e-6:
            continue
        p = wedge.lift(ds2, x)
        assert np.allclose(wedge.desitter_points(ds2, p)[0], x)
        assert wedge.in_positivity_domain(ds2, p) == bool(quadric.in_right_wedge(x))


def test_sl2_lift_roundtrip(sl2, rng):
    for x in quadric.sample_desitter(2, 40, rng, spread=1.0):
        p = wedge.lift(sl2, x)
        assert np.allclose(wedge.desitter_points(sl2, p)[0], x, atol=1e-8)


def test_polar_point_slice(sl2):
    for t in (0.05, 0.5, 1.5):
        p = wedge.polar_point(sl2, t * K)
        assert wedge.in_positivity_domain(sl2, p)
        assert wedge.in_polar_wedge(sl2, p)
    for t in (PI / 2, 2.0, -0.5, 0.0):
        with pytest.raises(ValueError):
            wedge.polar_point(sl2, t * K)


def test_cpm_split_requires_graded_parts(sl2):
    with pytest.raises(ValueError):
        wedge.split_pm(sl2, H)


def test_polar_point_rejects_non_centralising_word(sl2):
    with pytest.raises(ValueError):
        wedge.polar_point(sl2, 0.5 * K, [(E, 1.0)])


def test_flow_invariance_on_grid(sl2):
    p = wedge.polar_point(sl2, 0.8 * K)
    for s in np.linspace(-2.0, 2.0, 9):
        q = wedge.point_from_word(sl2, [(H, s)] + list(p.word))
        assert wedge.in_positivity_domain(sl2, q)
        assert wedge.in_polar_wedge(sl2, q)
        assert wedge.in_kms_domain(sl2, q)


@pytest.mark.parametrize("name", ["sl2-cayley", "dS2"])
def test_polar_implies_positive(name):
    spec = models.get_spec(name)
    assert wedge.polar_implies_positive(spec, 1000, seed=1) == 0
    assert wedge.polar_implies_positive(spec, 0, seed=1) == 0


def test_empty_report(sl2):
    rep = wedge.verify_wedge_equalities(sl2, 0, seed=0)
    assert rep.N == 0 and rep.disagreements == 0 and rep.witnesses == []


@pytest.mark.parametrize("name", ["sl2-cayley", "sl2x2", "dS2", "dS3"])
def test_three_way_equality(name):
    rep = wedge.verify_wedge_equalities(models.get_spec(name), 300, seed=5)
    assert rep.disagreements == 0, rep.witnesses
    assert 0 < rep.tallies["polar"] < rep.N


def test_band_points_are_indeterminate(ds2):
    rep = wedge.verify_wedge_equalities(ds2, 200, seed=2, mix=(("band", 1.0),))
    assert rep.indeterminate_count > 0
    assert rep.disagreements == 0


def test_regenerate_reproduces_samples(ds2):
    seed = 11
    sts = sampling.streams(seed, 30)
    for i in (0, 7, 29):
        src, p = wedge.regenerate(ds2, seed, i)
        st = sts[i]
        assert src == wedge.sample_source(st)
        q = wedge.sample_point(ds2, src, st)
        assert np.allclose(p.matrix, q.matrix)


def test_minkowski_equalities():
    for d in (2, 4):
        rep = wedge.minkowski_equalities(d, 500, seed=3)
        assert rep.disagreements == 0
        assert rep.indeterminate_count > 0


def test_desitter_equalities_exclude_base_point():
    rep = wedge.desitter_equalities(2, 300, seed=4)
    assert rep.disagreements == 0
    assert rep.tests == ["wedge", "positivity", "kms", "fixed_tube", "polar"]


def test_cayley_fixed_point_check():
    for d in (2, 3):
        out = wedge.cayley_fixedpoint_check(d, 500, seed=6)
        assert out == {"forward_failures": 0, "backward_failures": 0, "chart_failures": 0}


@pytest.mark.parametrize("name", ["sl2-cayley", "dS2", "gl2", "sp4"])
def test_cones_c_pm(name):
    rep = wedge.cones_c_pm(models.get_spec(name), 100, seed=0)
    assert rep.projection_failures == 0
    assert rep.intersection_disagreements == 0
    assert rep.limit_residual < 1e-8


def test_theta_exchanges_the_cones(sl2):
    assert wedge.cones_c_pm(sl2, 50, seed=1).theta_failures == 0


@pytest.mark.parametrize("name", ["sl2-cayley", "sl2x2", "dS3", "gl2", "sp4", "sp6"])
def test_cayley_relation(name):
    assert wedge.cayley_relation_residual(models.get_spec(name)) < 1e-9


@pytest.mark.parametrize("name", ["sp4", "gl2"])
def test_chart_points_are_positive(name):
    spec = models.get_spec(name)
    for st in sampling.streams(0, 50, dim=64):
        assert wedge.in_positivity_domain(spec, wedge.sample_chart_point(spec, st))


def test_unsupported_specs():
    su = models.get_spec("su22")
    with pytest.raises(wedge.UnsupportedSpec):
        wedge.in_kms_domain(su, wedge.base_point(su))
    with pytest.raises(wedge.UnsupportedSpec):
        wedge.in_polar_wedge(su, wedge.base_point(su))
    with pytest.raises(wedge.UnsupportedSpec):
        wedge.sample_chart_point(su, np.random.default_rng(0))


def test_adjoint_h_matches_conjugation(sl2, rng):
    word = [(rng.normal(size=3), rng.normal()) for _ in range(3)]
    p = wedge.point_from_word(sl2, word)
    g = p.matrix
    expected = sl2.alg.coords(g @ sl2.alg.element(H) @ np.linalg.inv(g))
    assert np.allclose(wedge.adjoint_h(sl2, p), expected)
    expected_inv = sl2.alg.coords(np.linalg.inv(g) @ sl2.alg.element(H) @ g)
    assert np.allclose(wedge.adjoint_h(sl2, p, inverse=True), expected_inv)
