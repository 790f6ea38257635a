"""Wedge domains: positivity of the modular vector field, polar charts and KMS tubes.

Points of ``M = G/H`` are stored as group words (products of exponentials)
together with the evaluated group matrix.  Three independent membership tests
are provided:

* positivity: ``p_q(Ad(g)^{-1} h)`` lies in the open cone ``C``;
* polar: ``gH = g_h exp(x) H`` with ``g_h`` commuting with ``h`` and ``x`` in
  ``(C_+ + C_-)^pi``, decided by inverting a chart;
* KMS: ``alpha_{it}(x)`` stays in the complex tube for ``t`` in ``(0, pi)``,
  evaluated on de Sitter space (sl(2) points are transported there first).

The flat and de Sitter harnesses compare four or five such tests directly on
``R^{1,d}`` and ``dS^d``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linop, quadric, sampling
from .liealg import grading, kappa_matrix
from .models import CausalSpec, minkowski_to_sl2, sl2_cayley, sl2_to_minkowski, wedge_generator

DELTA = 1e-9
BAND = quadric.BAND


class UnsupportedSpec(ValueError):
    """The requested operation is not available for this spec."""


@dataclass
class PointRep:
    word: list[tuple[np.ndarray, float]]
    matrix: np.ndarray


def point_from_word(spec: CausalSpec, word) -> PointRep:
    g = np.eye(spec.alg.size, dtype=spec.alg.basis.dtype)
    clean = []
    for x, t in word:
        x = np.asarray(x, dtype=float)
        g = g @ linop.expm(t * spec.alg.element(x))
        clean.append((x, float(t)))
    return PointRep(clean, g)


def base_point(spec: CausalSpec) -> PointRep:
    return PointRep([], np.eye(spec.alg.size))


def adjoint_h(spec: CausalSpec, p: PointRep, inverse: bool = False) -> np.ndarray:
    """``Ad(g) h`` (or ``Ad(g)^{-1} h``) in coordinates, factor by factor along the word.

    Working with ``e^{t ad x}`` keeps the result inside the algebra even when
    ``g`` is badly conditioned as a matrix.
    """
    y = np.asarray(spec.h, dtype=float)
    factors = p.word if inverse else reversed(p.word)
    for x, t in factors:
        y = linop.expm((-t if inverse else t) * spec.alg.ad(x)) @ y
    return y


def modular_vector_field(spec: CausalSpec, p: PointRep) -> np.ndarray:
    """``p_q(Ad(g)^{-1} h)`` in coordinates."""
    return spec.proj_q(adjoint_h(spec, p, inverse=True))


def positivity_margin(spec: CausalSpec, p: PointRep) -> float:
    return spec.cone_margin(modular_vector_field(spec, p))


def in_positivity_domain(spec: CausalSpec, p: PointRep, delta: float = DELTA) -> bool:
    return positivity_margin(spec, p) > delta


# ---------------------------------------------------------------------------
# (C_+ + C_-)^pi

def split_pm(spec: CausalSpec, x) -> tuple[np.ndarray, np.ndarray]:
    """``x = x_+ + x_-`` with ``x_+-`` in ``q_{+-1}(h)``; raises when ``x`` has other parts."""
    x = np.asarray(x, dtype=float)
    gr = grading(spec.alg, spec.h)
    xp, xm = gr.part(x, 1), gr.part(x, -1)
    scale = max(1.0, float(np.max(np.abs(x))))
    if not spec.in_q(x) or np.max(np.abs(x - xp - xm)) > 1e-9 * scale:
        raise ValueError("element is not in q_1(h) + q_-1(h)")
    return xp, xm


def cpm_margin(spec: CausalSpec, x) -> float:
    """Signed margin of ``x`` in ``(C_+ + C_-)^pi``: ``x_+`` in ``C_+``, ``x_-`` in ``C_-``, ``s(x_+ - x_-) < pi``."""
    xp, xm = split_pm(spec, x)
    m = min(spec.plus_margin(xp), spec.minus_margin(xm))
    if m <= 0:
        return m
    return min(m, math.pi - spec.s_of_q(xp - xm))


def in_cpm_pi(spec: CausalSpec, x, delta: float = DELTA) -> bool:
    return cpm_margin(spec, x) > delta


def polar_point(spec: CausalSpec, x, centralizer_word=()) -> PointRep:
    """``g_h exp(x)`` for ``x`` in ``(C_+ + C_-)^pi`` and a word ``g_h`` in the centraliser of ``h``."""
    if not in_cpm_pi(spec, x):
        raise ValueError("x is not in (C_+ + C_-)^pi")
    for y, _ in centralizer_word:
        if np.max(np.abs(spec.alg.bracket(spec.h, y))) > 1e-9:
            raise ValueError("centraliser word does not commute with h")
    return point_from_word(spec, list(centralizer_word) + [(np.asarray(x, dtype=float), 1.0)])


# ---------------------------------------------------------------------------
# transport to de Sitter space

def _blocks(spec: CausalSpec) -> list[slice]:
    r = spec.params.get("factors", 1)
    return [slice(2 * k, 2 * k + 2) for k in range(r)]


def desitter_points(spec: CausalSpec, p: PointRep) -> np.ndarray:
    """Points of de Sitter space representing ``gH``: one row per simple factor."""
    if spec.family == "ds":
        e2 = np.zeros(spec.alg.size)
        e2[2] = 1.0
        return (p.matrix @ e2)[None, :].real
    if spec.family == "sl2":
        Y = spec.alg.element(adjoint_h(spec, p))
        rows = []
        for b in _blocks(spec):
            Yk = Y[b, b].real
            rows.append(sl2_to_minkowski(np.array([Yk[0, 0] - Yk[1, 1], Yk[0, 1], Yk[1, 0]])))
        return np.array(rows)
    raise UnsupportedSpec(f"{spec.name} has no de Sitter model")


def boundary_slack(spec: CausalSpec, p: PointRep) -> float:
    return float(np.min(quadric.wedge_slack(desitter_points(spec, p))))


def in_kms_domain(spec: CausalSpec, p: PointRep, delta: float = quadric.DELTA) -> bool:
    return bool(np.all(quadric.kms_member(desitter_points(spec, p), on_quadric=True, delta=delta)))


def _sl2_polar_inverse(spec: CausalSpec, Yk: np.ndarray) -> tuple[bool, float]:
    """Solve ``Ad(exp(a e - b f)) h = Y`` in sl(2) and test ``a e - b f`` in ``(C_+ + C_-)^pi``."""
    ch, ce, cf = Yk[0, 0] - Yk[1, 1], Yk[0, 1], Yk[1, 0]
    if not (ce < 0 and cf < 0):
        return False, float(max(ce, cf))
    sin_l = 2 * math.sqrt(ce * cf)
    length = math.atan2(sin_l, ch)
    a = -ce * length / sin_l
    b = -cf * length / sin_l
    x = np.array([0.0, a, -b])
    base = sl2_cayley()
    y = linop.expm(base.alg.ad(x)) @ base.h
    resid = float(np.max(np.abs(y - np.array([ch, ce, cf]))))
    if resid > 1e-8:
        return False, -resid
    m = cpm_margin(base, x)
    return m > DELTA, m


def in_polar_wedge(spec: CausalSpec, p: PointRep) -> bool:
    """Chart inversion: ``sl2`` factors are inverted in the Lie algebra, ``dS`` in ambient coordinates."""
    if spec.family == "ds":
        return quadric.polar_chart_inverse(desitter_points(spec, p)[0]).inside
    if spec.family == "sl2":
        Y = spec.alg.element(adjoint_h(spec, p)).real
        return all(_sl2_polar_inverse(spec, Y[b, b])[0] for b in _blocks(spec))
    raise UnsupportedSpec(f"no polar chart for {spec.name}")


# ---------------------------------------------------------------------------
# lifting ambient points to group words

def _lift_ds(spec: CausalSpec, x: np.ndarray) -> list[tuple[np.ndarray, float]]:
    """Word ``R B`` with ``B`` a boost of the (e0, e2)-plane and ``R`` a spatial rotation, ``R B e2 = x``."""
    n = len(x)
    E = np.eye(n)
    b = math.asinh(x[0])
    u = x[1:] / math.cosh(b)
    e = np.zeros(n - 1)
    e[1] = 1.0
    c = float(np.clip(u @ e, -1.0, 1.0))
    w = u - c * e
    if np.linalg.norm(w) < 1e-12:
        w = np.zeros(n - 1)
        w[0] = 1.0
    w /= np.linalg.norm(w)
    phi = math.acos(c)
    W = np.concatenate([[0.0], w])
    L = np.outer(W, E[2]) - np.outer(E[2], W)
    K = np.outer(E[0], E[2]) + np.outer(E[2], E[0])
    return [(spec.alg.coords(L), phi), (spec.alg.coords(K), b)]


def _lift_sl2(x: np.ndarray) -> list[tuple[np.ndarray, float]]:
    """Word ``exp(phi(e - f)) exp(s h) exp(c e)`` mapping the base point to ``x`` on dS^2."""
    ch, ce, cf = minkowski_to_sl2(x)
    Y = np.array([[ch / 2, ce], [cf, -ch / 2]])
    w, V = np.linalg.eig(Y)
    order = np.argsort(-w.real)
    g = V[:, order].real
    d = np.linalg.det(g)
    if d < 0:
        g[:, 1] *= -1
        d = -d
    g /= math.sqrt(d)
    Q, R = np.linalg.qr(g)
    S = np.diag(np.sign(np.diag(R)))
    Q, R = Q @ S, S @ R
    phi = math.atan2(Q[0, 1], Q[0, 0])
    r1 = R[0, 0]
    return [
        (np.array([0.0, 1.0, -1.0]), phi),
        (np.array([1.0, 0.0, 0.0]), 2 * math.log(r1)),
        (np.array([0.0, 1.0, 0.0]), R[0, 1] / r1),
    ]


def lift(spec: CausalSpec, rows: np.ndarray) -> PointRep:
    """Group word for given de Sitter points (one row per simple factor)."""
    rows = np.atleast_2d(rows)
    if spec.family == "ds":
        return point_from_word(spec, _lift_ds(spec, rows[0]))
    if spec.family == "sl2":
        word = []
        r = spec.params["factors"]
        for k, x in enumerate(rows):
            for y, t in _lift_sl2(x):
                Y = np.zeros(3 * r)
                Y[3 * k:3 * k + 3] = y
                word.append((Y, t))
        return point_from_word(spec, word)
    raise UnsupportedSpec(f"cannot lift points for {spec.name}")


def sample_polar_point(spec: CausalSpec, rng: np.random.Generator) -> PointRep:
    """``g_h exp(x)`` with random centraliser factor and random ``x`` in ``(C_+ + C_-)^pi``."""
    if spec.family == "ds":
        d = spec.params["d"]
        n = d + 1
        E = np.eye(n)
        length = rng.uniform(0.02, math.pi - 0.02)
        ratio = math.exp(rng.normal())
        pp, qq = length / 2 * ratio, length / 2 / ratio
        v = pp * (E[1] + E[0]) + qq * (E[1] - E[0])
        x = spec.alg.coords(wedge_generator(E[2], v))
        word = [(spec.h, rng.normal())]
        if d > 2:
            A = rng.normal(size=(d - 1, d - 1))
            A = A - A.T
            M = np.zeros((n, n))
            M[2:, 2:] = A
            word.append((spec.alg.coords(M), 1.0))
        return polar_point(spec, x, word)
    if spec.family == "sl2":
        r = spec.params["factors"]
        x = np.zeros(3 * r)
        word = []
        for k in range(r):
            length = rng.uniform(0.02, math.pi - 0.02)
            ratio = math.exp(rng.normal())
            a, b = length / 2 * ratio, length / 2 / ratio
            x[3 * k + 1], x[3 * k + 2] = a, -b
            hk = np.zeros(3 * r)
            hk[3 * k] = 1.0
            word.append((hk, rng.normal()))
        return polar_point(spec, x, word)
    raise UnsupportedSpec(f"no polar sampler for {spec.name}")


def sample_chart_point(spec: CausalSpec, rng: np.random.Generator) -> PointRep:
    """``exp(t h) exp(x)`` with ``x = x_+ + x_-`` built from a cone sample and scaled into ``s < pi``.

    Every term of ``s`` is at most ``2 rho(ad x)``, so ``2 rho(ad x) < pi`` is a
    safe stand-in where ``s`` itself needs a conjugation into ``a``.
    """
    if spec.cone_sampler is None:
        raise UnsupportedSpec(f"no cone sampler for {spec.name}")
    gr = grading(spec.alg, spec.h)
    y = spec.cone_sampler(rng)
    x = gr.part(y, 1) - gr.part(y, -1)
    x = x * (rng.uniform(0.05, 0.98) * math.pi / (2.0 * linop.spectral_radius(spec.alg.ad(x))))
    return point_from_word(spec, [(spec.h, rng.normal()), (x, 1.0)])


def sample_word_point(spec: CausalSpec, rng: np.random.Generator, length: int = 3, scale: float = 0.7) -> PointRep:
    """Product of ``length`` exponentials of random unit directions, for specs without a chart."""
    word = []
    for _ in range(length):
        x = rng.normal(size=spec.alg.dim)
        word.append((x / np.linalg.norm(x), scale * rng.normal()))
    return point_from_word(spec, word)


def _ambient(d: int, source: str, rng: np.random.Generator) -> np.ndarray:
    if source == "box":
        return quadric.sample_desitter_box(d, 1, rng)[0]
    if source == "band":
        return quadric.sample_desitter_band(d, 1, rng)[0]
    if source == "spread":
        return quadric.sample_desitter(d, 1, rng)[0]
    raise ValueError(f"unknown sample source {source!r}")


def sample_point(spec: CausalSpec, source: str, rng: np.random.Generator) -> PointRep:
    if source == "polar":
        return sample_polar_point(spec, rng)
    if spec.family == "ds":
        return lift(spec, _ambient(spec.params["d"], source, rng))
    if spec.family == "sl2":
        return lift(spec, np.array([_ambient(2, source, rng) for _ in range(spec.params["factors"])]))
    raise UnsupportedSpec(f"no sampler for {spec.name}")


# ---------------------------------------------------------------------------
# reports

@dataclass
class WedgeReport:
    spec: str
    seed: int
    N: int
    tests: list[str]
    tallies: dict[str, int]
    agreement: list[list[int]]
    disagreements: int
    indeterminate_count: int
    witnesses: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _report(name, seed, verdicts: dict[str, np.ndarray], slack: np.ndarray, sources, max_witnesses=20) -> WedgeReport:
    tests = list(verdicts)
    V = np.array([verdicts[t] for t in tests], dtype=bool)
    band = np.abs(slack) < BAND
    decided = ~band
    agreement = [[int(np.sum((V[i] == V[j]) & decided)) for j in range(len(tests))] for i in range(len(tests))]
    bad = decided & ~np.all(V == V[0], axis=0)
    witnesses = []
    for k in np.flatnonzero(bad)[:max_witnesses]:
        witnesses.append({
            "index": int(k),
            "source": sources[k],
            "slack": float(slack[k]),
            "verdicts": {t: bool(V[i, k]) for i, t in enumerate(tests)},
        })
    return WedgeReport(
        name, seed, int(len(slack)), tests,
        {t: int(np.sum(V[i])) for i, t in enumerate(tests)}, agreement,
        int(np.sum(bad)), int(np.sum(band)), witnesses,
    )


DEFAULT_MIX = (("polar", 0.25), ("box", 0.35), ("spread", 0.25), ("band", 0.15))


def sample_source(st, mix=DEFAULT_MIX) -> str:
    return str(st.choice([m[0] for m in mix], p=[m[1] for m in mix]))


def regenerate(spec: CausalSpec, seed: int, index: int, mix=DEFAULT_MIX) -> tuple[str, PointRep]:
    """Sample ``index`` of ``verify_wedge_equalities(spec, n, seed)`` for any ``n > index``."""
    st = sampling.stream(seed, index)
    src = sample_source(st, mix)
    return src, sample_point(spec, src, st)


def verify_wedge_equalities(spec: CausalSpec, n: int, seed: int, mix=DEFAULT_MIX) -> WedgeReport:
    """Compare the polar, positivity and KMS tests on ``n`` mixed-source samples."""
    pol, pos, kms, slack, sources = [], [], [], [], []
    for st in sampling.streams(seed, n):
        src = sample_source(st, mix)
        sources.append(src)
        p = sample_point(spec, src, st)
        pol.append(in_polar_wedge(spec, p))
        pos.append(in_positivity_domain(spec, p))
        kms.append(in_kms_domain(spec, p))
        slack.append(boundary_slack(spec, p))
    verdicts = {"polar": np.array(pol), "positivity": np.array(pos), "kms": np.array(kms)}
    return _report(spec.name, seed, verdicts, np.array(slack), sources)


def polar_implies_positive(spec: CausalSpec, n: int, seed: int) -> int:
    """Number of polar-chart samples whose modular field fails to be positive."""
    return sum(not in_positivity_domain(spec, sample_polar_point(spec, st)) for st in sampling.streams(seed, n))


def minkowski_equalities(d: int, n: int, seed: int) -> WedgeReport:
    """Four descriptions of the right wedge in ``R^{1,d}`` on Gaussian and near-boundary samples."""
    X = np.empty((n, d + 1))
    sources = []
    for i, st in enumerate(sampling.streams(seed, n)):
        src = str(st.choice(["gauss", "band"], p=[0.8, 0.2]))
        if src == "gauss":
            X[i] = st.normal(scale=1.5, size=d + 1)
        else:
            X[i] = st.normal(size=d + 1)
            X[i, 1] = abs(X[i, 0]) + st.uniform(-5e-6, 5e-6)
        sources.append(src)
    verdicts = {
        "wedge": quadric.in_right_wedge(X),
        "positivity": quadric.positivity_member(X),
        "kms": quadric.kms_member(X),
        "fixed_tube": quadric.fixed_tube_member(X),
    }
    return _report(f"R^1,{d}", seed, verdicts, quadric.wedge_slack(X), sources)


def desitter_equalities(d: int, n: int, seed: int) -> WedgeReport:
    """Five descriptions of the de Sitter wedge on mixed samples (the base point ``e2`` included)."""
    sources, rows = [], []
    for st in sampling.streams(seed, max(n - 1, 0)):
        src = sample_source(st)
        sources.append(src)
        rows.append(quadric.sample_polar(d, 1, st)[0] if src == "polar" else _ambient(d, src, st))
    e2 = np.zeros(d + 1)
    e2[2] = 1.0
    X = np.vstack(rows + [e2])
    sources = sources + ["base"]
    verdicts = {
        "wedge": quadric.in_right_wedge(X),
        "positivity": quadric.positivity_member(X, on_quadric=True),
        "kms": quadric.kms_member(X, on_quadric=True),
        "fixed_tube": quadric.fixed_tube_member(X, on_quadric=True),
        "polar": np.array([quadric.polar_chart_inverse(x).inside for x in X]),
    }
    return _report(f"dS{d}", seed, verdicts, quadric.wedge_slack(X), sources)


def cayley_fixedpoint_check(d: int, n: int, seed: int) -> dict[str, int]:
    """Wedge points map into the fixed tube under ``kappa^{-1}`` and fixed tube points back into the wedge."""
    sts = sampling.streams(seed, n)
    W = np.array([quadric.sample_polar(d, 1, st)[0] for st in sts]).reshape(n, d + 1)
    Z = quadric.kappa_inv(W)
    forward = int(np.sum(~(quadric.in_tube(Z, on_quadric=True) & (np.max(np.abs(quadric.tau_bar(Z) - Z), axis=1) < 1e-9))))
    T = np.array([quadric.sample_tube_fixed(d, 1, st)[0] for st in sts]).reshape(n, d + 1)
    back = quadric.kappa(T)
    real = np.max(np.abs(back.imag), axis=1) < 1e-12
    backward = int(np.sum(~(real & quadric.in_right_wedge(back.real) & (np.abs(quadric.lorentz(back.real, back.real) + 1) < 1e-9))))
    chart = int(sum(not quadric.tube_chart_inverse(z).inside for z in T))
    return {"forward_failures": forward, "backward_failures": backward, "chart_failures": chart}


# ---------------------------------------------------------------------------
# the cones C_+ and C_-

@dataclass
class ConePMReport:
    samples: int
    projection_failures: int
    intersection_disagreements: int
    theta_failures: int
    limit_residual: float


def cones_c_pm(spec: CausalSpec, n: int, seed: int, t: float = 40.0) -> ConePMReport:
    """Check ``C_+- = +-C cap q_{+-1}(h)`` against ``p_{q_{+-1}}(C) = +-C_+-`` and the limit formula.

    Projections of samples of ``C`` must land in ``C_+`` and ``-C_-``; random
    directions of ``q_{+-1}`` must get the same verdict from the ``C`` oracle and
    the ``C_+-`` oracles; ``e^{-t} e^{+-t ad h} y`` must match the eigenprojections.
    """
    alg = spec.alg
    gr = grading(alg, spec.h)
    A = alg.ad(spec.h)
    Ep = math.exp(-t) * linop.expm(t * A)
    Em = math.exp(-t) * linop.expm(-t * A)
    qplus = linop.orth(gr.P[1] @ spec.q_basis)
    qminus = linop.orth(gr.P[-1] @ spec.q_basis)
    theta_ok = spec.cone_margin(-spec.theta(spec.h_c)) > 0 if spec.h_c is not None else False
    proj_fail = inter_bad = theta_fail = 0
    resid = 0.0
    for rng in sampling.streams(seed, n, dim=64):
        y = spec.cone_sampler(rng)
        yp, ym = gr.part(y, 1), gr.part(y, -1)
        resid = max(resid, float(np.max(np.abs(Ep @ y - yp))), float(np.max(np.abs(Em @ y - ym))))
        if spec.plus_margin(yp) < -1e-12 or spec.minus_margin(-ym) < -1e-12:
            proj_fail += 1
        if theta_ok and spec.minus_margin(spec.theta(yp)) < -1e-12:
            theta_fail += 1
        for basis, own, sign in ((qplus, spec.plus_margin, 1.0), (qminus, spec.minus_margin, -1.0)):
            u = basis @ rng.normal(size=basis.shape[1])
            a = spec.cone_margin(sign * u) > 1e-12 or _closed_member(spec, sign * u)
            b = own(u) > 1e-12
            if abs(own(u)) > 1e-6 and a != b:
                inter_bad += 1
    return ConePMReport(n, proj_fail, inter_bad, theta_fail, resid)


def _closed_member(spec: CausalSpec, y) -> bool:
    """Membership of ``y`` in the closed cone, by pushing slightly towards ``h_c``."""
    eps = 1e-7 * max(1.0, float(np.linalg.norm(y)))
    return spec.cone_margin(np.asarray(y) + eps * spec.h_c) > 0


def cayley_relation_residual(spec: CausalSpec, n: int = 32, seed: int = 0) -> float:
    """Largest ``|kappa_h^{-1}(x_+ - x_-) - i(x_+ + x_-)|`` along a ray of ``C_+ + C_-``."""
    gr = grading(spec.alg, spec.h)
    y = spec.cone_sampler(sampling.stream(seed, 0, dim=64))
    xp, xm = gr.part(y, 1), -gr.part(y, -1)
    K = kappa_matrix(spec.alg, spec.h, inverse=True)
    res = 0.0
    for s in np.linspace(0.05, 3.0, n):
        lhs = K @ (s * (xp - xm))
        rhs = 1j * s * (xp + xm)
        res = max(res, float(np.max(np.abs(lhs - rhs))))
    return res
