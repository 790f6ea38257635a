import math

import numpy as np
import pytest

from wedgelab import cones, models, roots
from wedgelab.suites import root_data, worked_example


def _root_index(rs, values):
    i = rs.index_of(np.asarray(values, dtype=float))
    assert i is not None
    return i


# a-coordinates in the su(2,2) model use the basis E11-E22, E22-E33, E33-E44;
# the root e_j - e_k takes the values below on that basis.
EPS = {(1, 2): (2, -1, 0), (1, 3): (1, 1, -1), (1, 4): (1, 0, 1),
       (2, 3): (-1, 2, -1), (2, 4): (-1, 1, 1), (3, 4): (0, -1, 2)}


def test_sl2_roots():
    spec, rs, pos, mm = root_data("sl2-cayley")
    assert sorted(r.values[0] for r in rs.roots) == pytest.approx([-1.0, 1.0])
    assert all(r.multiplicity == 1 for r in rs.roots)
    assert all(r.compact is False for r in rs.roots)
    alpha = rs.roots[pos.plus[0]]
    assert alpha(rs.to_a(spec.h_c)) == pytest.approx(1.0)
    assert len(pos.plus) == 1 and pos.compact == []


def test_sl2_coroot_by_direct_bracket():
    spec, rs, pos, _ = root_data("sl2-cayley")
    alpha = rs.roots[pos.plus[0]]
    x = alpha.space[:, 0]
    br = spec.alg.bracket(x, spec.theta(x))
    # the coroot is the multiple of [x, theta x] on which alpha takes the value 2
    cor = rs.to_a(br)
    cor = 2 * cor / alpha(cor)
    assert np.allclose(alpha.coroot, cor)
    assert alpha.coroot[0] == pytest.approx(2.0)
    assert np.allclose(roots.reflection(alpha) @ alpha.coroot, -alpha.coroot)


def test_sl2_product_roots():
    _, rs, pos, _ = root_data("sl2x2")
    assert len(rs.roots) == 4
    assert len(pos.plus) == 2


def test_su22_root_system():
    spec, rs, pos, mm = root_data("su22")
    assert len(rs.roots) == 12
    assert {r.multiplicity for r in rs.roots} == {2}
    for pair, values in EPS.items():
        i = _root_index(rs, values)
        assert rs.roots[i].compact == (pair in ((1, 2), (3, 4)))
        assert rs.is_root(-np.asarray(values, dtype=float))
    plus_expected = {_root_index(rs, EPS[p]) for p in ((1, 3), (1, 4), (2, 3), (2, 4))}
    assert set(pos.plus) == plus_expected


def test_su22_coroot_of_e1_minus_e3():
    spec, rs, _, _ = root_data("su22")
    r = rs.roots[_root_index(rs, EPS[(1, 3)])]
    assert np.allclose(r.coroot, models.diag_to_a(spec, [1, 0, -1, 0]))
    assert r(r.coroot) == pytest.approx(2.0)


def test_weyl_groups():
    _, rs, _, _ = root_data("sl2-cayley")
    W = roots.weyl_group_k(rs)
    assert len(W) == 1
    _, rs, pos, _ = root_data("su22")
    W = roots.weyl_group_k(rs)
    assert len(W) == 4
    for i in rs.compact_indices():
        s = roots.reflection(rs.roots[i])
        assert np.allclose(s @ s, np.eye(rs.rank))
    plus = {tuple(np.round(rs.roots[i].values, 6)) for i in pos.plus}
    for w in W:
        winv = np.linalg.inv(w)
        moved = {tuple(np.round(rs.roots[i].values @ winv, 6) + 0.0) for i in pos.plus}
        assert moved == plus


def test_worked_example_membership():
    ex = worked_example()
    assert ex["z_in_c_max"] and not ex["z_in_c_min"]
    assert ex["weyl_k_order"] == 4
    assert ex["compact_count"] == 4 and ex["compact_match_h_c_zeros"]


@pytest.mark.parametrize("name", ["su22", "sl2-cayley", "sl2x2", "sp4", "sp6", "dS3", "gl2"])
def test_min_inside_max_certified(name):
    _, rs, pos, mm = root_data(name)
    assert mm.certificates["min_in_max"]
    G = mm.c_min.generators
    for k in range(G.shape[1]):
        assert roots.in_cone(mm.c_max, G[:, k])


def test_sl2_cones_coincide():
    _, rs, pos, mm = root_data("sl2-cayley")
    for t in (0.0, 0.5, 3.0, -0.5):
        x = np.array([t])
        assert roots.in_cone(mm.c_min, x) == roots.in_cone(mm.c_max, x) == (t >= 0)
    assert roots.in_cone(mm.c_min, [0.0]) and roots.in_cone(mm.c_max, [0.0])
    assert not roots.in_cone(mm.c_max, [0.0], margin=1e-9)


def test_gl2_center_breaks_pointedness():
    _, _, _, mm = root_data("gl2")
    assert not mm.certificates["min_generating"]
    assert not mm.certificates["max_pointed"]


def test_s_function():
    _, rs, pos, _ = root_data("sl2-cayley")
    for t in (-2.0, 0.0, 0.7, 3.0):
        assert roots.s_of([t], rs, pos) == pytest.approx(abs(t))
    spec, rs, pos, _ = root_data("su22")
    assert roots.s_of(models.diag_to_a(spec, [1, 1, -1, -1]), rs, pos) == pytest.approx(2.0)
    assert roots.s_of(np.zeros(3), rs, pos) == 0.0


def test_c_pi_membership():
    _, rs, pos, mm = root_data("sl2-cayley")
    assert roots.in_c_pi([1.0], mm.c_max, rs, pos)
    assert not roots.in_c_pi([math.pi], mm.c_max, rs, pos)
    assert not roots.in_c_pi([-1.0], mm.c_max, rs, pos)
    assert not roots.in_c_pi([0.0], mm.c_max, rs, pos)


def test_strongly_orthogonal_sets():
    spec, rs, pos, _ = root_data("sl2-cayley")
    so = roots.strongly_orthogonal_set(rs, pos, spec.tau, spec.theta)
    assert so.gamma == pos.plus and so.fixed == pos.plus and so.swapped == []
    spec, rs, pos, _ = root_data("sl2x2")
    assert len(roots.strongly_orthogonal_set(rs, pos, spec.tau, spec.theta).gamma) == 2
    spec, rs, pos, _ = root_data("su22")
    so = roots.strongly_orthogonal_set(rs, pos, spec.tau, spec.theta)
    assert len(so.gamma) == 2
    a, b = (rs.roots[i].values for i in so.gamma)
    for v in (a + b, a - b):
        assert not rs.is_root(v)
    assert so.closure_residual < 1e-9


def test_non_euler_h_c_rejected():
    spec, rs, _, _ = root_data("sl2-cayley")
    with pytest.raises(ValueError):
        roots.positive_system_from(rs, [2.0])


def test_non_abelian_a_rejected():
    spec = models.get_spec("sl2-cayley")
    with pytest.raises(ValueError):
        roots.restricted_roots(spec.alg, np.eye(3)[:, :2])


def test_root_system_dump():
    _, rs, pos, mm = root_data("su22")
    data = roots.root_system_to_dict(rs, pos, mm)
    assert data["rank"] == 3 and len(data["roots"]) == 12
    assert data["certificates"]["min_in_max"] is True
    assert sum(r["compact"] for r in data["roots"]) == 4


def test_cone_generators_have_exact_membership():
    _, _, _, mm = root_data("sp4")
    G = mm.c_min.generators
    assert cones.contains_generated(G, G.sum(axis=1), margin=0.5)
