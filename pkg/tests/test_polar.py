import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from wedgelab import linop, models, polar
from wedgelab.liealg import gl, intersect

PI = math.pi
K = np.array([0.0, 1.0, -1.0])  # e - f
H = np.array([1.0, 0.0, 0.0])


@pytest.fixture(scope="module")
def ctx():
    return polar.polar_context(models.get_spec("sl2-cayley"))


def test_context_spaces(ctx):
    assert ctx.q.shape[1] == 2 and ctx.h.shape[1] == 1
    assert linop.same_subspace(ctx.q_minus_sigma, (K / math.sqrt(2))[:, None])
    assert linop.same_subspace(ctx.q_sigma, (np.array([0.0, 1.0, 1.0]) / math.sqrt(2))[:, None])


def test_sigma_must_commute_with_tau():
    spec = models.get_spec("sl2-cayley")
    from wedgelab.liealg import Involution
    bad = Involution("bad", np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))
    with pytest.raises(ValueError):
        polar.polar_context(spec, bad)


def test_sigma_x_at_zero_is_identity(ctx):
    assert np.array_equal(polar.sigma_x(ctx, np.zeros(3)), np.eye(3))
    assert polar.zeta_maps_h_onto_q(ctx, np.zeros(3)) is None


@given(arrays(float, 3, elements=st.floats(-2.0, 2.0, allow_nan=False)),
       arrays(float, 3, elements=st.floats(-2.0, 2.0, allow_nan=False)),
       arrays(float, 3, elements=st.floats(-2.0, 2.0, allow_nan=False)))
def test_sigma_x_is_an_automorphism(ctx, x, y, z):
    S = polar.sigma_x(ctx, x)
    g = ctx.alg
    lhs = S @ g.bracket(y, z)
    rhs = g.bracket(S @ y, S @ z)
    assert np.max(np.abs(lhs - rhs)) < 1e-9 * max(1.0, np.max(np.abs(S))) ** 2


@pytest.mark.parametrize("t", [0.3, PI / 4, PI / 2])
def test_sigma_x_minus_one_space_is_cosh_kernel(ctx, t):
    ok, _ = polar.cosh_kernel_agreement(ctx, t * K)
    assert ok


def test_cosh_kernel_nontrivial_at_quarter_turn(ctx):
    ok, dim = polar.cosh_kernel_agreement(ctx, PI / 4 * K)
    assert ok and dim == 2


def test_exp_regularity_examples(ctx):
    assert polar.exp_regular(ctx, 0.3 * K)
    assert not polar.exp_regular(ctx, PI / 2 * K)
    for t in (0.3, PI / 2, 1.0):
        assert polar.exp_regular(ctx, t * K) == polar.exp_regular_direct(ctx, t * K)


def test_polar_regularity_examples(ctx):
    assert polar.polar_regular(ctx, 0.3 * K)
    assert not polar.polar_regular(ctx, PI / 4 * K)
    assert polar.polar_regular(ctx, np.zeros(3))
    for t in (0.0, 0.3, PI / 4, 1.0, 3 * PI / 4):
        assert polar.polar_regular(ctx, t * K) == polar.polar_regular_direct(ctx, t * K)


def test_hyperbolic_elements_are_regular(ctx):
    # the direct route loses invertibility to rounding once sinhc spans ~12 decades
    for s in (0.5, 3.0, 8.0):
        y = s * np.array([0.0, 1.0, 1.0])
        assert polar.exp_regular(ctx, y) and polar.exp_regular_direct(ctx, y)
    assert polar.exp_regular(ctx, 200.0 * np.array([0.0, 1.0, 1.0]))


def test_tangent_map_at_zero(ctx):
    M = polar.tangent_polar(ctx, np.zeros(3))
    # a in g^sigma goes to its q-part, b in q^{-sigma} to itself
    expected = ctx.q.T @ np.hstack([0.5 * (np.eye(3) - ctx.tau.matrix) @ ctx.g_sigma, ctx.q_minus_sigma])
    assert np.allclose(M, expected)


@pytest.mark.parametrize("name", ["sp4", "dS3"])
def test_tangent_map_on_h_sigma(name, rng):
    spec = models.get_spec(name)
    c = polar.polar_context(spec)
    h_sigma = intersect(c.h, c.sigma.fixed())
    assert h_sigma.shape[1] > 0
    x = 0.3 * (c.q_minus_sigma @ rng.normal(size=c.q_minus_sigma.shape[1]))
    a = h_sigma @ rng.normal(size=h_sigma.shape[1])
    coeff, *_ = np.linalg.lstsq(c.g_sigma, a, rcond=None)
    M = polar.tangent_polar(c, x)
    out = c.q @ (M[:, :c.g_sigma.shape[1]] @ coeff)
    assert np.allclose(out, -linop.apply_entire("sinh", c.alg.ad(x)) @ a)


def test_tangent_rank_drops_exactly_where_polar_regularity_fails(ctx):
    for t in np.linspace(0.05, 1.5, 30).tolist() + [PI / 4]:
        full = polar.tangent_rank(ctx, t * K) == ctx.q.shape[1]
        assert full == polar.polar_regular(ctx, t * K), t


def test_stabilizer_at_zero_is_h(ctx):
    rep = polar.stabilizer_algebra(ctx, np.zeros(3))
    assert linop.same_subspace(rep.g_m, ctx.h)


def test_stabilizer_dimension_jumps(ctx):
    generic = [polar.stabilizer_algebra(ctx, t * K).dims for t in (0.2, 0.5, 1.0, 1.3)]
    assert all(d == generic[0] for d in generic)
    assert generic[0]["g_m^sigma_x^2"] == 0
    for t in (PI / 4, PI / 2):
        rep = polar.stabilizer_algebra(ctx, t * K)
        assert rep.dims["g_m"] == generic[0]["g_m"]
        assert rep.dims["g_m^sigma_x^2"] == 1
        assert rep.decomposition_angle < 1e-7


def test_zeta_maps_h_onto_q_at_singular_point(ctx):
    assert polar.zeta_maps_h_onto_q(ctx, PI / 4 * K) is True


def test_exp_fibre_examples():
    g = models.get_spec("sl2-cayley").alg
    x = np.array([0.3, 0.2, -0.5])
    assert polar.exp_fiber_central(g, x, x) == (True, True)
    with pytest.raises(ValueError):
        polar.exp_fiber_central(g, PI / 2 * K, x)
    g2 = gl(2)
    y = np.array([0.0, 0.3, 0.1, -0.2])
    premise, central = polar.exp_fiber_central(g2, y, y + np.array([0.5, 0, 0, 0]))
    assert not premise


def test_exp_fibre_search_finds_no_violation():
    out = polar.fiber_search_sl2(20000, seed=3)
    assert out["violations"] == 0
    assert out["premise"] > 0


def test_expm_sl2_batch_matches_expm(rng):
    X = rng.normal(size=(20, 2, 2))
    X[:, 1, 1] = -X[:, 0, 0]
    E = polar.expm_sl2_batch(X)
    for k in range(20):
        assert np.allclose(E[k], linop.expm(X[k]))


def test_ray_singular_parameters(ctx):
    polar_hits = polar.singular_parameters(ctx, K, "polar")
    exp_hits = polar.singular_parameters(ctx, K, "exp")
    assert min(abs(t - PI / 4) for t in polar_hits) < 1e-3
    assert min(abs(t - PI / 2) for t in exp_hits) < 1e-3
    with pytest.raises(ValueError):
        polar.singular_parameters(ctx, K, "other")
