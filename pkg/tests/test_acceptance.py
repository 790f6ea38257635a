"""Acceptance criteria at their stated sample sizes and tolerances.

Each test prints one ``criterion N PASS|FAIL`` line and repeats it in the
terminal summary.  Every test must finish within 60 seconds.
"""
import math
import time

import numpy as np
import pytest

from wedgelab import catalog, linop, models, quadric, roots, suites, wedge
from wedgelab.liealg import check_sl2_identities

SEED = 0
TIME_LIMIT = 60.0


@pytest.fixture
def clock():
    start = time.perf_counter()
    yield
    assert time.perf_counter() - start < TIME_LIMIT


def test_criterion_01_sl2_identities(criterion, clock):
    res = check_sl2_identities(n_t=64, n_grid=32)
    worst = max(res.values())
    ok = set(res) == {"cayley_conjugation", "rotation_of_h1", "sine_of_ad"} and worst < 1e-9
    criterion(1, "sl(2) identity suite", ok, ", ".join(f"{k} {v:.1e}" for k, v in res.items()))
    assert ok


def test_criterion_02_kernel_formulas(criterion, clock):
    cases = suites.kernel_formula_cases(200, SEED)
    planted = [f for freqs in suites.PLANTED for f in freqs]
    assert {math.pi, math.pi / 2} <= set(planted)
    scan = suites.kernel_formula_scan(cases)
    ok = scan["max_angle"] < 1e-7 and scan["dimension_mismatches"] == 0
    criterion(2, "kernels of sinhc and cosh", ok,
              f"{len(cases)} operators, worst angle {scan['max_angle']:.1e}, "
              f"{scan['dimension_mismatches']} dimension mismatches, {scan['nontrivial']} nontrivial kernels")
    assert ok


def test_criterion_03_quadric_geometry(criterion, clock):
    worst = {}
    for kind in suites.BRANCHES:
        worst[kind] = max(suites.geodesic_law(d, kind, SEED, n_grid=32) for d in (2, 3, 4))
    closure = suites.closure(3, 10_000, SEED)
    ok = max(worst.values()) < 1e-9 and closure < 1e-9
    criterion(3, "geodesic law and quadric closure", ok,
              ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" (1024 grid points each), "
              f"closure {closure:.1e} on 10000 exponentials")
    assert ok


def test_criterion_04_minkowski_wedge(criterion, clock):
    reps = [wedge.minkowski_equalities(d, 5000, SEED) for d in (2, 4)]
    ok = all(r.disagreements == 0 for r in reps)
    criterion(4, "four-way wedge equality on R^{1,2} and R^{1,4}", ok,
              "; ".join(f"{r.spec}: {r.disagreements} disagreements, {r.indeterminate_count} in band" for r in reps))
    assert ok


def test_criterion_05_desitter_wedge(criterion, clock):
    reps = [wedge.desitter_equalities(d, 2000, SEED) for d in (2, 3, 4)]
    base_excluded = True
    for d in (2, 3, 4):
        e2 = np.zeros(d + 1)
        e2[2] = 1.0
        verdicts = [
            quadric.in_right_wedge(e2), quadric.positivity_member(e2, on_quadric=True),
            quadric.kms_member(e2, on_quadric=True), quadric.fixed_tube_member(e2, on_quadric=True),
            quadric.polar_chart_inverse(e2).inside,
        ]
        base_excluded &= not any(bool(v) for v in verdicts)
    ok = all(r.disagreements == 0 for r in reps) and base_excluded
    criterion(5, "five-way wedge equality on dS^2, dS^3, dS^4", ok,
              "; ".join(f"{r.spec}: {r.disagreements} disagreements" for r in reps)
              + f"; base point excluded by all five: {base_excluded}")
    assert ok


def test_criterion_06_transported_sl2(criterion, clock):
    parts, ok = [], True
    for name in ("sl2-cayley", "sl2x2"):
        spec = models.get_spec(name)
        rep = wedge.verify_wedge_equalities(spec, 2000, SEED)
        fails = wedge.polar_implies_positive(spec, 1000, SEED)
        ok &= rep.disagreements == 0 and fails == 0
        parts.append(f"{name}: {rep.disagreements} disagreements on 2000, {fails} polar-not-positive on 1000")
    criterion(6, "polar, positivity and KMS on sl(2) and sl(2)^2", ok, "; ".join(parts))
    assert ok


def test_criterion_07_root_cones(criterion, clock):
    ex = suites.worked_example()
    spec, rs, pos, _ = suites.root_data("su22")
    # compact roots are e_j - e_k with j, k on the same side of r = 2
    split_ok = True
    for i, r in enumerate(rs.roots):
        d = models.diag_to_a(spec, [1, 1, -1, -1])
        same_side = abs(r(d)) < 1e-9
        split_ok &= r.compact == same_side and ((i in pos.compact) == same_side)
    certified = {name: suites.root_data(name)[3].certificates["min_in_max"] for name in suites.ROOT_SPECS}
    ok = (ex["z_in_c_max"] and not ex["z_in_c_min"] and ex["weyl_k_order"] == 4 and split_ok
          and all(certified.values()))
    criterion(7, "su(2,2) worked example and cone inclusion", ok,
              f"z in C_max {ex['z_in_c_max']}, z in C_min {ex['z_in_c_min']}, |W_k| = {ex['weyl_k_order']}, "
              f"compact split {split_ok}, C_min in C_max certified for {sum(certified.values())}/{len(certified)}")
    assert ok


def test_criterion_08_graded_cones(criterion, clock):
    limit, failures, cayley = 0.0, 0, 0.0
    names = [n for n in models.SPECS if models.get_spec(n).cone_sampler is not None]
    for name in names:
        spec = models.get_spec(name)
        rep = wedge.cones_c_pm(spec, 200, SEED)
        limit = max(limit, rep.limit_residual)
        failures += rep.projection_failures
        cayley = max(cayley, wedge.cayley_relation_residual(spec, 32, SEED))
    ok = limit < 1e-8 and failures == 0 and cayley < 1e-9
    criterion(8, "projections onto q_{+-1} and the Cayley relation", ok,
              f"{len(names)} realizations x 200 samples: limit residual {limit:.1e}, "
              f"{failures} projection failures, Cayley residual {cayley:.1e}")
    assert ok


def test_criterion_09_regularity(criterion, clock):
    mism = {}
    for name in suites.POLAR_SPECS:
        scan = suites.regularity_scan(name, 500, SEED)
        mism[name] = sum(scan["mismatches"].values())
    found = suites.ray_singularities()
    err_polar = min(abs(t - math.pi / 4) for t in found["polar"])
    err_exp = min(abs(t - math.pi / 2) for t in found["exp"])
    ok = not any(mism.values()) and err_polar < 1e-3 and err_exp < 1e-3
    criterion(9, "regularity criteria and singular parameters", ok,
              ", ".join(f"{k}: {v} mismatches" for k, v in mism.items())
              + f"; polar singularity off by {err_polar:.1e}, exp singularity off by {err_exp:.1e}")
    assert ok


def test_criterion_10_catalog(criterion, clock):
    wanted = {"sl(2r)": (1, 2, 3), "sp(2r)": (1, 2, 3), "so(2,d)": (3, 4)}
    parts, ok = [], True
    for label, params in wanted.items():
        row = next(r for r in catalog.ROWS if r.label == label)
        for p in params:
            dim = catalog.g1_dimension(row.build(p))
            ok &= dim == row.g1_dim(p)
            parts.append(f"{label}@{p}: {dim}/{row.g1_dim(p)}")
    criterion(10, "dim g_1(h) against the classification table", ok, ", ".join(parts))
    assert ok
