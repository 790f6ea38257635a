"""Invariant suites run by ``wedgelab verify``.

Every suite returns a :class:`SuiteReport` holding one :class:`Check` per
invariant with its measured value and tolerance.  ``cfg.n`` sizes every sampled
section (``n = 0`` leaves them empty); grid and structural checks always run.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linop, models, polar, quadric, roots, sampling, wedge
from .liealg import (
    is_euler, kappa_matrix, make_realization, realization_from_json, realization_to_json,
    check_sl2_identities, tau_from_euler,
)

SUITES = ("linop", "liealg", "roots", "polar", "quadric", "wedge")


@dataclass
class Tolerances:
    residual: float = 1e-9
    angle: float = linop.ANGLE_TOL
    limit: float = 1e-8
    location: float = 1e-3


@dataclass
class RunConfig:
    n: int = 200
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: str | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class Check:
    name: str
    passed: bool
    value: float | int | bool | None = None
    tol: float | None = None
    detail: dict | None = None


@dataclass
class SuiteReport:
    suite: str
    n: int
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "passed": self.passed,
            "failures": len(self.failures),
            "checks": [asdict(c) for c in self.checks],
        }

    def below(self, name: str, value: float, tol: float, detail: dict | None = None) -> None:
        value = float(value)
        self.checks.append(Check(name, bool(value < tol), value, tol, detail))

    def equal(self, name: str, value: int, expected: int, detail: dict | None = None) -> None:
        self.checks.append(Check(name, int(value) == int(expected), int(value), None,
                                 {"expected": int(expected), **(detail or {})}))

    def holds(self, name: str, ok: bool, detail: dict | None = None) -> None:
        self.checks.append(Check(name, bool(ok), bool(ok), None, detail))


# ---------------------------------------------------------------------------
# linop

def random_operator(rng, n: int = 6, scale: float = 1.0) -> np.ndarray:
    return scale * rng.normal(size=(n, n))


def planted_operator(rng, frequencies, n: int = 6) -> np.ndarray:
    """Real ``n x n`` operator with eigenvalues ``+-i f`` for each planted ``f``, in a random basis."""
    D = np.zeros((n, n))
    k = 0
    for f in frequencies:
        D[k:k + 2, k:k + 2] = [[0.0, -f], [f, 0.0]]
        k += 2
    D[k:, k:] = rng.normal(size=(n - k, n - k))
    V = rng.normal(size=(n, n))
    return V @ D @ np.linalg.inv(V)


PLANTED = (
    (math.pi,), (math.pi / 2,), (math.pi, math.pi / 2), (2 * math.pi,),
    (3 * math.pi / 2, math.pi / 2), (math.pi, math.pi),
)


def kernel_formula_cases(n_random: int, seed: int, per_plant: int = 5) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    cases = [random_operator(rng, scale=s) for s in np.linspace(0.3, 4.0, n_random)]
    for f in PLANTED:
        cases.extend(planted_operator(rng, f) for _ in range(per_plant))
    return cases


def kernel_formula_scan(cases) -> dict:
    """Compare eigenspace kernels with numerical kernels of ``sinhc(A)`` and ``cosh(A)``."""
    worst, mismatched, nontrivial = 0.0, 0, 0
    for A in cases:
        for name, formula in (("sinhc", linop.kernel_sinhc), ("cosh", linop.kernel_cosh)):
            numeric = linop.kernel(linop.apply_entire(name, A), rcond=1e-8, atol=0.0)
            expected = formula(A)
            if numeric.shape[1] != expected.shape[1]:
                mismatched += 1
                continue
            if expected.shape[1]:
                nontrivial += 1
                worst = max(worst, float(np.max(linop.principal_angles(numeric, expected))))
    return {"max_angle": worst, "dimension_mismatches": mismatched, "nontrivial": nontrivial}


def series_spectral_gap(n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        A = random_operator(rng, scale=rng.uniform(0.2, 1.5))
        for name in linop.ENTIRE_FUNCTIONS:
            S = linop.apply_entire(name, A, method="series")
            P = linop.apply_entire(name, A, method="spectral")
            worst = max(worst, float(np.max(np.abs(S - P)) / max(1.0, np.max(np.abs(S)))))
    return worst


def scalar_gap() -> float:
    """Closed forms against partial sums; ``C`` and ``S`` see ``sqrt z`` so they get a wider box."""
    small = [complex(a, b) for a in np.linspace(-6, 6, 13) for b in np.linspace(-6, 6, 13)]
    wide = [complex(a, b) for a in np.linspace(-40, 40, 17) for b in np.linspace(-10, 10, 9)]
    tiny = [1e-9, -1e-9, 1e-3j, 0.0]
    worst = 0.0
    for name in linop.ENTIRE_FUNCTIONS:
        for z in (wide if name in ("C", "S") else small) + tiny:
            a = complex(linop.entire_scalar(name, z))
            b = linop.series_scalar(name, z, terms=120)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return worst


def run_linop(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("linop", cfg.n, cfg.seed)
    tol = cfg.tolerances
    rep.below("linop.scalar_closed_form_vs_series", scalar_gap(), tol.residual)
    J = np.array([[1.0, 1.0], [0.0, 1.0]])
    rep.holds("linop.jordan_block_not_diagonalizable", not linop.spectrum(J).diagonalizable)
    rep.holds("linop.jordan_block_spectral_refused", _raises(linop.SpectrumError, linop.apply_entire, "exp", J, "spectral"))
    if cfg.n:
        rep.below("linop.series_vs_spectral", series_spectral_gap(cfg.n, cfg.seed), tol.residual)
        scan = kernel_formula_scan(kernel_formula_cases(cfg.n, cfg.seed))
        rep.below("linop.kernel_formula_angle", scan["max_angle"], tol.angle, scan)
        rep.equal("linop.kernel_formula_dimension_mismatches", scan["dimension_mismatches"], 0)
    return rep


def _raises(exc, fn, *args) -> bool:
    try:
        fn(*args)
    except exc:
        return True
    return False


# ---------------------------------------------------------------------------
# liealg

REALIZATIONS = ("sl(2)", "sl(3)", "gl(2)", "sp(4)", "so(1,3)", "so(2,3)", "su(2,2)", "sl(2,C)", "sl(2)+sl(2)")


def run_liealg(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("liealg", cfg.n, cfg.seed)
    tol = cfg.tolerances
    for name in REALIZATIONS:
        alg = make_realization(name)
        rep.below(f"liealg.jacobi.{name}", alg.jacobi_residual(), tol.residual)
    for key, value in check_sl2_identities().items():
        rep.below(f"liealg.sl2.{key}", value, tol.residual)
    for name in models.SPECS:
        spec = models.get_spec(name)
        for key, value in models.check_spec(spec).items():
            if isinstance(value, bool):
                rep.holds(f"liealg.spec.{name}.{key}", value)
            else:
                rep.below(f"liealg.spec.{name}.{key}", value, tol.residual)
        K = kappa_matrix(spec.alg, spec.h)
        rep.below(f"liealg.spec.{name}.kappa_squared_is_tau_h",
                  np.max(np.abs(K @ K - tau_from_euler(spec.alg, spec.h).matrix)), tol.residual)
    spec = models.get_spec("sp4")
    text = realization_to_json(spec.alg, {"tau": spec.tau})
    alg, invs = realization_from_json(text)
    rep.below("liealg.json_roundtrip", max(np.max(np.abs(alg.basis - spec.alg.basis)),
                                           np.max(np.abs(invs["tau"].matrix - spec.tau.matrix))), tol.residual)
    rep.holds("liealg.non_euler_rejected", not is_euler(spec.alg, 2 * spec.h)[0])
    return rep


# ---------------------------------------------------------------------------
# roots

ROOT_SPECS = ("su22", "sl2-cayley", "sl2x2", "sp4", "sp6", "dS3", "gl2")


def root_data(name: str):
    spec = models.get_spec(name)
    rs = roots.build_root_system(spec.alg, spec.a_basis, spec.tau, spec.theta)
    pos = roots.positive_system_from(rs, rs.to_a(spec.h_c))
    return spec, rs, pos, roots.cone_min_max(rs, pos)


def worked_example() -> dict:
    """The su(2,2) example: membership of diag(2, 2, 1, -5) and the compact Weyl group."""
    spec, rs, pos, mm = root_data("su22")
    z = models.diag_to_a(spec, [2, 2, 1, -5])
    return {
        "z_in_c_max": roots.in_cone(mm.c_max, z),
        "z_in_c_min": roots.in_cone(mm.c_min, z),
        "weyl_k_order": len(roots.weyl_group_k(rs)),
        "root_count": len(rs.roots),
        "multiplicities": sorted({r.multiplicity for r in rs.roots}),
        "compact_count": len(rs.compact_indices()),
        "compact_match_h_c_zeros": sorted(pos.compact) == sorted(rs.compact_indices()),
        "gamma_size": len(roots.strongly_orthogonal_set(rs, pos, spec.tau, spec.theta).gamma),
    }


def run_roots(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("roots", cfg.n, cfg.seed)
    for name in ROOT_SPECS:
        spec, rs, pos, mm = root_data(name)
        rep.holds(f"roots.{name}.c_min_in_c_max", mm.certificates["min_in_max"], dict(mm.certificates))
        rep.below(f"roots.{name}.coroot_normalisation",
                  max(abs(r(r.coroot) - 2) for r in rs.roots), cfg.tolerances.residual)
        W = roots.weyl_group_k(rs)
        G = np.column_stack([rs.roots[i].coroot for i in pos.plus])
        stable = all(roots.in_cone(mm.c_max, w @ g) for w in W for g in G.T)
        rep.holds(f"roots.{name}.weyl_k_preserves_cones", stable)
        so = roots.strongly_orthogonal_set(rs, pos, spec.tau, spec.theta)
        rep.below(f"roots.{name}.gamma_subalgebra_closure", so.closure_residual, cfg.tolerances.residual)
    ex = worked_example()
    rep.holds("roots.su22.z_in_c_max", ex["z_in_c_max"])
    rep.holds("roots.su22.z_not_in_c_min", not ex["z_in_c_min"])
    rep.equal("roots.su22.weyl_k_order", ex["weyl_k_order"], 4)
    rep.equal("roots.su22.root_count", ex["root_count"], 12)
    rep.holds("roots.su22.compact_split", ex["compact_match_h_c_zeros"] and ex["compact_count"] == 4)
    rep.equal("roots.su22.gamma_size", ex["gamma_size"], 2)
    return rep


# ---------------------------------------------------------------------------
# polar

POLAR_SPECS = ("sl2-cayley", "sp4", "dS3")


def _plant(spec, ctx, y, target: float):
    w = linop.eigenvalues(linop.restrict(spec.alg.ad(y), ctx.q_L))
    top = float(np.max(np.abs(w.imag)))
    return y * (target / top) if top > 1e-6 else y


def regularity_scan(name: str, n: int, seed: int) -> dict:
    """Spectral versus direct regularity on ``n`` samples, a quarter of them planted on the singular lattice.

    The exponential criterion is tested on ``q`` and the polar criterion on
    ``q^{-sigma}``, the domain where it is stated.
    """
    spec = models.get_spec(name)
    ctx = polar.polar_context(spec)
    mism = {"exp": 0, "polar": 0}
    singular = {"exp": 0, "polar": 0}
    for i, st in enumerate(sampling.streams(seed, n, dim=2 * spec.alg.dim)):
        y = ctx.q @ st.normal(size=ctx.q.shape[1])
        x = ctx.q_minus_sigma @ st.normal(size=ctx.q_minus_sigma.shape[1])
        if i % 4 == 1:
            y, x = _plant(spec, ctx, y, math.pi), _plant(spec, ctx, x, math.pi / 2)
        elif i % 4 == 2:
            y, x = _plant(spec, ctx, y, 2 * math.pi), _plant(spec, ctx, x, 3 * math.pi / 2)
        for kind, v, spectral, direct in (("exp", y, polar.exp_regular, polar.exp_regular_direct),
                                          ("polar", x, polar.polar_regular, polar.polar_regular_direct)):
            a, b = spectral(ctx, v), direct(ctx, v)
            mism[kind] += a != b
            singular[kind] += not a
    return {"mismatches": mism, "singular": singular}


def ray_singularities() -> dict:
    ctx = polar.polar_context(models.get_spec("sl2-cayley"))
    direction = np.array([0.0, 1.0, -1.0])
    return {kind: polar.singular_parameters(ctx, direction, kind) for kind in ("polar", "exp")}


def run_polar(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("polar", cfg.n, cfg.seed)
    tol = cfg.tolerances
    found = ray_singularities()
    for kind, target in (("polar", math.pi / 4), ("exp", math.pi / 2)):
        hits = found[kind]
        err = min((abs(t - target) for t in hits), default=math.inf)
        rep.below(f"polar.ray_e_minus_f.{kind}_singular_parameter", err, tol.location, {"found": hits})
    ctx = polar.polar_context(models.get_spec("sl2-cayley"))
    for t in (0.3, math.pi / 4, math.pi / 2):
        ok, _ = polar.cosh_kernel_agreement(ctx, t * np.array([0.0, 1.0, -1.0]))
        rep.holds(f"polar.stabilizer_cosh_kernel.t={t:.6f}", ok)
    if cfg.n:
        for name in POLAR_SPECS:
            scan = regularity_scan(name, cfg.n, cfg.seed)
            rep.equal(f"polar.{name}.criteria_mismatches", sum(scan["mismatches"].values()), 0, scan)
        fib = polar.fiber_search_sl2(cfg.n * 10, cfg.seed)
        rep.equal("polar.sl2_exp_fibre_violations", fib.get("violations", 0), 0, fib)
    return rep


# ---------------------------------------------------------------------------
# quadric

BRANCHES = ("positive", "negative", "null")


def geodesic_law(d: int, kind: str, seed: int, n_grid: int = 32, n_geodesics: int = 1) -> float:
    """Largest relative ``|gamma(2t - s) - s_{gamma(t)} gamma(s)|`` on a ``n_grid^2`` grid of ``(t, s)``."""
    g = np.linspace(-2.0, 2.0, n_grid)
    T, S = (a.ravel() for a in np.meshgrid(g, g))
    worst = 0.0
    for k in range(n_geodesics):
        st = sampling.stream(seed, k, dim=32)
        p = quadric.sample_desitter(d, 1, st, spread=1.0)[0]
        v = quadric.sample_tangent(p, kind, st)
        worst = max(worst, float(np.max(quadric.geodesic_residual(p, v, T, S))))
    return worst


def closure(d: int, n: int, seed: int) -> float:
    """Largest relative ``|beta(Exp_p v) - beta(p)|`` over ``n`` exponentials with ``|z| <= 9``."""
    worst = 0.0
    for st in sampling.streams(seed, n, dim=32):
        p = quadric.sample_desitter(d, 1, st, spread=1.0)[0]
        kind = str(st.choice(BRANCHES))
        v = quadric.sample_tangent(p, kind, st) * st.uniform(0.0, 3.0)
        g = quadric.quadric_exp(p, v)
        worst = max(worst, abs(float(quadric.lorentz(g, g) - quadric.lorentz(p, p))) / max(1.0, float(g @ g)))
    return worst


def run_quadric(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("quadric", cfg.n, cfg.seed)
    tol = cfg.tolerances
    for d in (2, 3, 4):
        for kind in BRANCHES:
            rep.below(f"quadric.geodesic_law.dS{d}.{kind}", geodesic_law(d, kind, cfg.seed), tol.residual)
    e2 = np.array([0.0, 0.0, 1.0])
    rep.holds("quadric.base_point_on_wedge_boundary", not bool(quadric.in_right_wedge(e2)))
    if cfg.n:
        rep.below("quadric.closure", closure(3, cfg.n, cfg.seed), tol.residual)
        for d in (2, 4):
            r = wedge.minkowski_equalities(d, cfg.n, cfg.seed)
            rep.equal(f"quadric.minkowski_R1{d}.disagreements", r.disagreements, 0, r.tallies)
        for d in (2, 3, 4):
            r = wedge.desitter_equalities(d, cfg.n, cfg.seed)
            rep.equal(f"quadric.desitter_dS{d}.disagreements", r.disagreements, 0, r.tallies)
            fx = wedge.cayley_fixedpoint_check(d, cfg.n, cfg.seed)
            rep.equal(f"quadric.desitter_dS{d}.cayley_fixed_tube_failures", sum(fx.values()), 0, fx)
    return rep


# ---------------------------------------------------------------------------
# wedge

WEDGE_SPECS = ("sl2-cayley", "sl2x2", "dS2")


def zero_set_holds(name: str) -> bool:
    spec = models.get_spec(name)
    e = wedge.base_point(spec)
    return not wedge.in_positivity_domain(spec, e) and float(np.max(np.abs(wedge.modular_vector_field(spec, e)))) < 1e-12


def invariance_failures(name: str, n: int, seed: int) -> int:
    """Left translation by ``exp(s h)``, ``s`` in [-2, 2], must keep every membership verdict."""
    spec = models.get_spec(name)
    bad = 0
    for st in sampling.streams(seed, n):
        p = wedge.sample_polar_point(spec, st)
        q = wedge.point_from_word(spec, [(spec.h, st.uniform(-2.0, 2.0))] + list(p.word))
        for test in (wedge.in_polar_wedge, wedge.in_positivity_domain, wedge.in_kms_domain):
            bad += test(spec, p) != test(spec, q)
    return bad


def run_wedge(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("wedge", cfg.n, cfg.seed)
    tol = cfg.tolerances
    for name in models.SPECS:
        spec = models.get_spec(name)
        if spec.cone_margin is not None:
            rep.holds(f"wedge.{name}.base_point_excluded", zero_set_holds(name))
        if spec.cone_sampler is not None:
            rep.below(f"wedge.{name}.cayley_relation", wedge.cayley_relation_residual(spec, 32, cfg.seed), tol.residual)
    if cfg.n:
        for name in WEDGE_SPECS:
            spec = models.get_spec(name)
            r = wedge.verify_wedge_equalities(spec, cfg.n, cfg.seed)
            rep.equal(f"wedge.{name}.three_way_disagreements", r.disagreements, 0,
                      {"tallies": r.tallies, "indeterminate": r.indeterminate_count})
            rep.equal(f"wedge.{name}.polar_not_positive", wedge.polar_implies_positive(spec, cfg.n, cfg.seed), 0)
            rep.equal(f"wedge.{name}.translation_invariance_failures",
                      invariance_failures(name, max(1, cfg.n // 10), cfg.seed), 0)
        for name in models.SPECS:
            spec = models.get_spec(name)
            if spec.cone_sampler is None:
                continue
            chart_bad = sum(not wedge.in_positivity_domain(spec, wedge.sample_chart_point(spec, st))
                            for st in sampling.streams(cfg.seed, cfg.n, dim=64))
            rep.equal(f"wedge.{name}.chart_points_not_positive", chart_bad, 0)
            c = wedge.cones_c_pm(spec, cfg.n, cfg.seed)
            rep.below(f"wedge.{name}.limit_projection", c.limit_residual, tol.limit)
            rep.equal(f"wedge.{name}.projection_failures", c.projection_failures + c.intersection_disagreements, 0,
                      asdict(c))
    return rep


RUNNERS = {
    "linop": run_linop,
    "liealg": run_liealg,
    "roots": run_roots,
    "polar": run_polar,
    "quadric": run_quadric,
    "wedge": run_wedge,
}


def run(suite: str, cfg: RunConfig) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    return [RUNNERS[s](cfg) for s in names]
