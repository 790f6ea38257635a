"""Regularity of the exponential and polar maps of a symmetric pair.

The context is a symmetric Lie algebra ``(g, tau)`` with a second involution
``sigma`` commuting with ``tau``.  For ``x`` in ``q``:

* ``x`` is exp-regular when no eigenvalue of ``ad x`` on ``q_L = q + [q, q]``
  lies in ``n pi i`` with ``n != 0``; directly, ``sinh(ad x)/ad x`` is invertible on ``q``;
* ``x`` in ``q^{-sigma}`` is polar-regular when no eigenvalue lies in
  ``(pi/2 + Z pi) i``; directly, ``cosh(ad x)`` is invertible on ``q^sigma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import linop
from .liealg import Involution, LieAlgebra, bracket_span, intersect
from .linop import EIG_TOL
from .models import CausalSpec

SINGULAR_TOL = 1e-7
# entries of cosh/sinhc(ad x) carry rounding of order eps * |M|; a kernel cannot hide above this
NOISE_FLOOR = 1e-12


def _rank_threshold(s: np.ndarray) -> float:
    return max(SINGULAR_TOL, NOISE_FLOOR * float(s[0]))


@dataclass
class PolarContext:
    alg: LieAlgebra
    tau: Involution
    sigma: Involution
    q: np.ndarray
    h: np.ndarray
    q_L: np.ndarray
    q_sigma: np.ndarray
    q_minus_sigma: np.ndarray
    g_sigma: np.ndarray


def polar_context(spec: CausalSpec, sigma: Involution | None = None) -> PolarContext:
    """Context with ``sigma = tau theta`` unless another commuting involution is given."""
    alg, tau = spec.alg, spec.tau
    if sigma is None:
        sigma = Involution("tau theta", tau.matrix @ spec.theta.matrix)
    if np.max(np.abs(sigma.matrix @ tau.matrix - tau.matrix @ sigma.matrix)) > 1e-9:
        raise ValueError("sigma does not commute with tau")
    q = tau.antifixed()
    h = tau.fixed()
    q_L = linop.orth(np.hstack([q, bracket_span(alg, q, q)]))
    return PolarContext(
        alg, tau, sigma, q, h, q_L,
        intersect(q, sigma.fixed()), intersect(q, sigma.antifixed()), sigma.fixed(),
    )


def _near(values: np.ndarray, targets: np.ndarray, scale: float) -> bool:
    if len(targets) == 0:
        return False
    return bool(np.any(np.abs(values[:, None] - targets[None, :]) < EIG_TOL * scale))


def _q_L_spectrum(ctx: PolarContext, x) -> np.ndarray:
    return linop.eigenvalues(linop.restrict(ctx.alg.ad(x), ctx.q_L))


def exp_regular(ctx: PolarContext, x) -> bool:
    """No eigenvalue of ``ad x`` on ``q_L`` in ``n pi i``, ``n != 0``."""
    w = _q_L_spectrum(ctx, x)
    scale = max(1.0, float(np.max(np.abs(w))))
    nmax = int(np.max(np.abs(w.imag)) / math.pi) + 2
    targets = np.array([1j * n * math.pi for n in range(-nmax, nmax + 1) if n != 0])
    return not _near(w, targets, scale)


def polar_regular(ctx: PolarContext, x) -> bool:
    """No eigenvalue of ``ad x`` on ``q_L`` in ``(pi/2 + Z pi) i``."""
    w = _q_L_spectrum(ctx, x)
    scale = max(1.0, float(np.max(np.abs(w))))
    nmax = int(np.max(np.abs(w.imag)) / math.pi) + 2
    targets = np.array([1j * (n + 0.5) * math.pi for n in range(-nmax - 1, nmax + 1)])
    return not _near(w, targets, scale)


def sinhc_on_q(ctx: PolarContext, x) -> np.ndarray:
    return linop.restrict(linop.apply_entire("sinhc", ctx.alg.ad(x)), ctx.q)


def cosh_on_q_sigma(ctx: PolarContext, x) -> np.ndarray:
    return linop.restrict(linop.apply_entire("cosh", ctx.alg.ad(x)), ctx.q_sigma)


def _invertible(M: np.ndarray) -> bool:
    if M.size == 0:
        return True
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[-1] > _rank_threshold(s))


def exp_regular_direct(ctx: PolarContext, x) -> bool:
    return _invertible(sinhc_on_q(ctx, x))


def polar_regular_direct(ctx: PolarContext, x) -> bool:
    return _invertible(cosh_on_q_sigma(ctx, x))


def tangent_polar(ctx: PolarContext, x) -> np.ndarray:
    """Matrix of ``(a, b) -> cosh(ad x) a_q + sinhc(ad x) b - sinh(ad x) a_h``.

    The domain is ``g^sigma x q^{-sigma}`` and the image lies in ``q``; both are
    expressed in the orthonormal coordinate bases of the context.
    """
    A = ctx.alg.ad(x)
    ch = linop.apply_entire("cosh", A)
    sc = linop.apply_entire("sinhc", A)
    sh = linop.apply_entire("sinh", A)
    T = ctx.tau.matrix
    Pq = 0.5 * (np.eye(len(T)) - T)
    Ph = 0.5 * (np.eye(len(T)) + T)
    cols_a = (ch @ Pq - sh @ Ph) @ ctx.g_sigma
    cols_b = sc @ ctx.q_minus_sigma
    M = np.hstack([cols_a, cols_b])
    return ctx.q.T @ M


def tangent_rank(ctx: PolarContext, x) -> int:
    M = tangent_polar(ctx, x)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > _rank_threshold(s)))


@dataclass
class StabilizerReport:
    g_m: np.ndarray
    g_m_sigma2: np.ndarray
    h_sigma: np.ndarray
    q_minus_sigma_x: np.ndarray
    decomposition_angle: float

    @property
    def dims(self) -> dict[str, int]:
        return {
            "g_m": self.g_m.shape[1],
            "g_m^sigma_x^2": self.g_m_sigma2.shape[1],
            "h^sigma_x": self.h_sigma.shape[1],
            "q^-sigma_x": self.q_minus_sigma_x.shape[1],
        }


def sigma_x(ctx: PolarContext, x) -> np.ndarray:
    """``exp(-2 ad x)``."""
    return linop.expm(-2 * ctx.alg.ad(x))


def stabilizer_algebra(ctx: PolarContext, x) -> StabilizerReport:
    """Fixed algebra of ``tau sigma_x`` and the decomposition of its ``sigma_x^2``-fixed part."""
    n = ctx.alg.dim
    I = np.eye(n)
    S = sigma_x(ctx, x)
    g_m = linop.kernel(ctx.tau.matrix @ S - I, rcond=1e-9)
    fixed2 = linop.kernel(S @ S - I, rcond=1e-9)
    g_m2 = intersect(g_m, fixed2)
    h_s = intersect(ctx.h, linop.kernel(S - I, rcond=1e-9))
    q_ms = intersect(ctx.q, linop.kernel(S + I, rcond=1e-9))
    rhs = linop.orth(np.hstack([h_s, q_ms]))
    if g_m2.shape[1] != rhs.shape[1]:
        angle = math.inf
    elif g_m2.shape[1] == 0:
        angle = 0.0
    else:
        angle = float(np.max(linop.principal_angles(g_m2, rhs)))
    return StabilizerReport(g_m, g_m2, h_s, q_ms, angle)


def cosh_kernel_agreement(ctx: PolarContext, x) -> tuple[bool, int]:
    """Compare ``ker cosh(ad x)`` from the lattice formula with the ``-1`` eigenspace of ``sigma_x``."""
    A = ctx.alg.ad(x)
    K1 = linop.kernel_cosh(A)
    K2 = linop.kernel(sigma_x(ctx, x) + np.eye(len(A)), rcond=1e-9)
    return linop.same_subspace(K1, K2), K1.shape[1]


def zeta_maps_h_onto_q(ctx: PolarContext, x) -> bool | None:
    """``exp(-ad x)`` takes ``h^{-sigma_x}`` onto ``q^{-sigma_x}``; ``None`` when both vanish."""
    S = sigma_x(ctx, x)
    neg = linop.kernel(S + np.eye(len(S)), rcond=1e-9)
    if neg.shape[1] == 0:
        return None
    h_neg = intersect(ctx.h, neg)
    q_neg = intersect(ctx.q, neg)
    img = linop.expm(-ctx.alg.ad(x)) @ h_neg
    return linop.same_subspace(linop.orth(img), q_neg) if h_neg.shape[1] else q_neg.shape[1] == 0


# ---------------------------------------------------------------------------
# exponential fibres

def exp_fiber_central(alg: LieAlgebra, x, y, tol: float = 1e-9) -> tuple[bool, bool]:
    """For ``rho_i(ad x), rho_i(ad y) < pi``: if ``exp x = exp y`` then ``x - y`` is central.

    Returns ``(premise, conclusion)``; the implication fails only when the premise
    holds and the conclusion does not.
    """
    for z in (x, y):
        if linop.imag_spectral_radius(alg.ad(z)) >= math.pi:
            raise ValueError("imaginary spectral radius must be below pi")
    X, Y = alg.element(x), alg.element(y)
    premise = bool(np.max(np.abs(linop.expm(X) - linop.expm(Y))) < tol)
    central = bool(np.max(np.abs(alg.ad(np.asarray(x) - np.asarray(y)))) < tol)
    return premise, central


def expm_sl2_batch(X: np.ndarray) -> np.ndarray:
    """Exponentials of traceless 2x2 matrices: ``exp X = C(det X) 1 + S(det X) X``."""
    det = X[:, 0, 0] * X[:, 1, 1] - X[:, 0, 1] * X[:, 1, 0]
    c = linop.C_fn(det).real
    s = linop.S_fn(det).real
    return c[:, None, None] * np.eye(2) + s[:, None, None] * X


def fiber_search_sl2(trials: int, seed: int, radius: float = 3.0) -> dict[str, int]:
    """Random pairs in sl(2) below the spectral bound; near-collisions are compared with exact centrality."""
    rng = np.random.default_rng(seed)
    out = {"trials": trials, "premise": 0, "violations": 0}
    batch = 10000
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        done += m
        a = rng.uniform(-radius, radius, size=(m, 3))
        b = a + rng.normal(scale=1e-3, size=(m, 3)) * (rng.random(size=(m, 1)) < 0.5)
        mats = []
        for c in (a, b):
            M = np.zeros((m, 2, 2))
            M[:, 0, 0], M[:, 1, 1] = c[:, 0] / 2, -c[:, 0] / 2
            M[:, 0, 1], M[:, 1, 0] = c[:, 1], c[:, 2]
            mats.append(M)
        disc = [(c[:, 0] / 2) ** 2 + c[:, 1] * c[:, 2] for c in (a, b)]
        ok = (np.sqrt(np.maximum(0, -disc[0])) * 2 < math.pi) & (np.sqrt(np.maximum(0, -disc[1])) * 2 < math.pi)
        Ea, Eb = expm_sl2_batch(mats[0]), expm_sl2_batch(mats[1])
        same = np.max(np.abs(Ea - Eb), axis=(1, 2)) < 1e-9
        central = np.max(np.abs(a - b), axis=1) < 1e-9
        out["premise"] += int(np.sum(ok & same))
        out["violations"] += int(np.sum(ok & same & ~central))
    return out


# ---------------------------------------------------------------------------
# scanning rays for singular parameters

def _ray_objective(ctx: PolarContext, direction, kind: str):
    direction = np.asarray(direction, dtype=float)
    if kind == "exp":
        return lambda t: linop.smallest_singular_value(sinhc_on_q(ctx, t * direction))
    if kind == "polar":
        return lambda t: linop.smallest_singular_value(cosh_on_q_sigma(ctx, t * direction))
    raise ValueError("kind must be 'exp' or 'polar'")


def singular_parameters(ctx: PolarContext, direction, kind: str, t_range=(0.05, 2.0), n: int = 64,
                        tol: float = 1e-6) -> list[float]:
    """Parameters ``t`` where the direct criterion degenerates along ``t * direction``.

    Local minima of the smallest singular value on an ``n``-point grid are
    refined by bounded Brent minimisation; a refined minimum below ``tol``
    counts as a singular parameter.
    """
    f = _ray_objective(ctx, direction, kind)
    ts = np.linspace(*t_range, n)
    vals = np.array([f(t) for t in ts])
    found = []
    for k in range(1, n - 1):
        if vals[k] <= vals[k - 1] and vals[k] <= vals[k + 1]:
            res = optimize.minimize_scalar(f, bounds=(ts[k - 1], ts[k + 1]), method="bounded",
                                           options={"xatol": 1e-10})
            if res.fun < tol:
                found.append(float(res.x))
    return found
