"""Quadrics, Minkowski wedges, de Sitter space and its complex tube.

Points are arrays whose last axis holds coordinates ``(x0, x1, ..., xd)``; most
functions broadcast over leading axes.  The Lorentz form is
``[x, y] = x0 y0 - x1 y1 - ... - xd yd`` (bilinear, also for complex input) and
de Sitter space is ``{[x, x] = -1}``.  The boost generator is
``h x = (x1, x0, 0, ...)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linop import C_fn, S_fn

DELTA = 1e-12
BAND = 1e-6
QUADRIC_TOL = 1e-9


def minkowski_gram(n: int) -> np.ndarray:
    return np.diag([1.0] + [-1.0] * (n - 1))


def lorentz(x, y) -> np.ndarray:
    x = np.asarray(x)
    y = np.asarray(y)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def form(beta: np.ndarray | None, x, y):
    """Bilinear form ``x^T beta y``; ``None`` means the Lorentz form."""
    if beta is None:
        return lorentz(x, y)
    return np.einsum("...i,ij,...j->...", np.asarray(x), beta, np.asarray(y))


def point_reflection(x, y, beta: np.ndarray | None = None):
    """``s_x(y) = -y + 2 beta(x, y) / beta(x, x) x``: the symmetry of the quadric at x."""
    x = np.asarray(x)
    y = np.asarray(y)
    ratio = form(beta, x, y) / form(beta, x, x)
    return -y + 2 * ratio[..., None] * x


def quadric_exp(p, v, beta: np.ndarray | None = None):
    """Exponential map of the quadric through ``p``: ``C(z) p + S(z) v`` with ``z = beta(v,v)/beta(p,p)``."""
    p = np.asarray(p)
    v = np.asarray(v)
    z = form(beta, v, v) / form(beta, p, p)
    c = C_fn(z)
    s = S_fn(z)
    if not (np.iscomplexobj(p) or np.iscomplexobj(v)):
        c, s = c.real, s.real
    return c[..., None] * p + s[..., None] * v


def geodesic_residual(p, v, t, s, beta: np.ndarray | None = None):
    """``|gamma(2t - s) - s_{gamma(t)}(gamma(s))|`` relative to ``max(1, |gamma(2t - s)|)``."""
    t = np.asarray(t)[..., None]
    s = np.asarray(s)[..., None]
    lhs = quadric_exp(p, (2 * t - s) * v, beta)
    rhs = point_reflection(quadric_exp(p, t * v, beta), quadric_exp(p, s * v, beta), beta)
    scale = np.maximum(1.0, np.linalg.norm(lhs, axis=-1))
    return np.linalg.norm(lhs - rhs, axis=-1) / scale


def tangent_projection(p, w, beta: np.ndarray | None = None):
    """Component of ``w`` that is ``beta``-orthogonal to ``p``."""
    ratio = form(beta, p, w) / form(beta, p, p)
    return np.asarray(w) - ratio[..., None] * np.asarray(p)


# ---------------------------------------------------------------------------
# cones, wedge and boosts

def cone_slack(y):
    """``y0 - |(y1, ..., yd)|``: positive exactly on the open future cone."""
    y = np.asarray(y)
    return y[..., 0] - np.linalg.norm(y[..., 1:], axis=-1)


def in_future_cone(y, delta: float = DELTA):
    return cone_slack(y) > delta


def wedge_slack(x):
    """``x1 - |x0|``: positive exactly on the right wedge."""
    x = np.asarray(x)
    return x[..., 1] - np.abs(x[..., 0])


def in_right_wedge(x, delta: float = DELTA):
    return wedge_slack(x) > delta


def modular_field(x):
    """The boost generator applied to ``x``."""
    x = np.asarray(x)
    out = np.zeros_like(x)
    out[..., 0] = x[..., 1]
    out[..., 1] = x[..., 0]
    return out


def boost(x, z):
    """``alpha_z(x)``: the boost flow at (possibly complex) time ``z``."""
    x = np.asarray(x)
    z = np.asarray(z)
    ch, sh = np.cosh(z), np.sinh(z)
    out = np.array(x, dtype=np.result_type(x, z, float), copy=True)
    out[..., 0] = ch * x[..., 0] + sh * x[..., 1]
    out[..., 1] = ch * x[..., 1] + sh * x[..., 0]
    return out


def kappa(z):
    """``(z0, z1, z2, ...) -> (-i z1, -i z0, z2, ...)``."""
    z = np.asarray(z, dtype=complex)
    out = z.copy()
    out[..., 0] = -1j * z[..., 1]
    out[..., 1] = -1j * z[..., 0]
    return out


def kappa_inv(z):
    """Inverse of :func:`kappa`: ``(z0, z1, ...) -> (i z1, i z0, z2, ...)``."""
    z = np.asarray(z, dtype=complex)
    out = z.copy()
    out[..., 0] = 1j * z[..., 1]
    out[..., 1] = 1j * z[..., 0]
    return out


def tau_h(z):
    z = np.asarray(z)
    out = np.array(z, copy=True)
    out[..., 0] = -z[..., 0]
    out[..., 1] = -z[..., 1]
    return out


def tau_bar(z):
    """Antilinear involution ``z -> conj(tau_h z)``."""
    return np.conj(tau_h(np.asarray(z, dtype=complex)))


def tube_slack(z):
    """Slack of ``Im z`` in the open future cone."""
    return cone_slack(np.asarray(z).imag)


def in_tube(z, on_quadric: bool = False, delta: float = DELTA, tol: float = QUADRIC_TOL):
    """``Im z`` in the open future cone; with ``on_quadric`` also ``[z, z] = -1``."""
    ok = tube_slack(z) > delta
    if on_quadric:
        ok = ok & (np.abs(lorentz(z, z) + 1) < tol)
    return ok


def kms_grid(n: int = 33) -> np.ndarray:
    """Chebyshev points of the first kind mapped into ``(0, pi)``."""
    k = np.arange(1, n + 1)
    return 0.5 * math.pi * (1 - np.cos((2 * k - 1) * math.pi / (2 * n)))


def kms_member(x, on_quadric: bool = False, grid: np.ndarray | None = None, delta: float = DELTA):
    """Does ``alpha_{it}(x)`` lie in the tube for every ``t`` on the grid?"""
    grid = kms_grid() if grid is None else grid
    x = np.asarray(x, dtype=float)
    ok = np.ones(x.shape[:-1], dtype=bool)
    for t in grid:
        ok &= in_tube(boost(x, 1j * t), on_quadric=on_quadric, delta=delta)
    return ok


def fixed_tube_member(x, on_quadric: bool = False, delta: float = DELTA, tol: float = QUADRIC_TOL):
    """Is ``kappa^{-1}(x)`` a ``tau_bar``-fixed point of the tube?"""
    z = kappa_inv(np.asarray(x, dtype=float))
    fixed = np.max(np.abs(tau_bar(z) - z), axis=-1) < tol
    return fixed & in_tube(z, on_quadric=on_quadric, delta=delta, tol=tol)


def positivity_member(x, on_quadric: bool = False, delta: float = DELTA, tol: float = QUADRIC_TOL):
    """Is the modular field future-directed timelike at ``x`` (and tangent on the quadric)?"""
    x = np.asarray(x, dtype=float)
    hx = modular_field(x)
    ok = in_future_cone(hx, delta)
    if on_quadric:
        ok = ok & (np.abs(lorentz(x, hx)) < tol)
    return ok


# ---------------------------------------------------------------------------
# de Sitter charts

def rotation_to(u: np.ndarray, n: np.ndarray) -> np.ndarray:
    """A rotation (determinant one) taking the unit vector ``u`` to the unit vector ``n``."""
    d = len(u)
    c = float(u @ n)
    if c < -1 + 1e-12:
        k = int(np.argmin(np.abs(u)))
        w = np.zeros(d)
        w[k] = 1.0
        w -= (w @ u) * u
        w /= np.linalg.norm(w)
        return np.eye(d) - 2 * np.outer(u, u) - 2 * np.outer(w, w)
    w = (u + n) / np.linalg.norm(u + n)
    return (np.eye(d) - 2 * np.outer(w, w)) @ (np.eye(d) - 2 * np.outer(u, u))


@dataclass
class ChartInverse:
    inside: bool
    reason: str
    rapidity: float = math.nan
    length: float = math.nan
    direction: np.ndarray | None = None
    residual: float = math.nan


def _spatial_block(x: np.ndarray) -> tuple[float, np.ndarray]:
    block = x[2:]
    r = float(np.linalg.norm(block))
    if len(block) == 1:
        return float(block[0]), np.array([1.0])
    if r == 0.0:
        u = np.zeros(len(block))
        u[0] = 1.0
        return 0.0, u
    return r, block / r


def polar_chart_inverse(x) -> ChartInverse:
    """Invert ``x = B_eta R Exp_{e2}(v)`` with ``v = p(e1 + e0) + q(e1 - e0)``, ``p, q > 0``.

    The boost part is normalised so that ``v = l e1``, i.e. ``p = q = l/2``; then
    ``x`` lies in the chart exactly when ``p, q > 0`` and ``2 sqrt(pq) = l < pi``.
    Each step that leaves its domain reports why.
    """
    x = np.asarray(x, dtype=float)
    if abs(lorentz(x, x) + 1) > 1e-8:
        return ChartInverse(False, "not on de Sitter space")
    x0, x1 = x[0], x[1]
    if not (x1 > abs(x0)):
        return ChartInverse(False, "boost step: (x0, x1) is not right-timelike")
    eta = math.atanh(x0 / x1)
    r = math.sqrt(x1 * x1 - x0 * x0)
    c, u = _spatial_block(x)
    length = math.atan2(r, c)
    if not 0 < length < math.pi:
        return ChartInverse(False, "geodesic step: length outside (0, pi)", eta, length, u)
    p = q = length / 2
    v = np.zeros_like(x)
    v[0] = p - q
    v[1] = p + q
    base = np.zeros_like(x)
    base[2] = 1.0
    y = quadric_exp(base, v)
    R = rotation_to(base[2:], u) if len(u) > 1 else np.eye(1)
    y = np.concatenate([y[:2], R @ y[2:]])
    y = boost(y, eta)
    resid = float(np.max(np.abs(y - x)))
    inside = p > 0 and q > 0 and 2 * math.sqrt(p * q) < math.pi and resid < 1e-8
    return ChartInverse(inside, "ok" if inside else "reconstruction failed", eta, length, u, resid)


def tube_chart_inverse(z) -> ChartInverse:
    """Invert a ``tau_bar``-fixed tube point as ``B_eta R Exp_{e2}(i t e0)`` with ``t`` in ``(0, pi)``."""
    z = np.asarray(z, dtype=complex)
    y0, y1 = z[0].imag, z[1].imag
    if abs(z[0].real) > 1e-9 or abs(z[1].real) > 1e-9 or np.max(np.abs(z[2:].imag), initial=0) > 1e-9:
        return ChartInverse(False, "not tau_bar-fixed")
    if not (y0 > abs(y1)):
        return ChartInverse(False, "boost step: imaginary part not future timelike")
    eta = math.atanh(y1 / y0)
    st = math.sqrt(y0 * y0 - y1 * y1)
    c, u = _spatial_block(z.real)
    t = math.atan2(st, c)
    base = np.zeros(len(z), dtype=complex)
    base[2] = 1.0
    w = np.zeros(len(z), dtype=complex)
    w[0] = 1j * t
    y = quadric_exp(base, w)
    R = rotation_to(np.eye(len(u))[0], u) if len(u) > 1 else np.eye(1)
    y = np.concatenate([y[:2], R @ y[2:]])
    y = boost(y, eta)
    resid = float(np.max(np.abs(y - z)))
    inside = 0 < t < math.pi and resid < 1e-8
    return ChartInverse(inside, "ok" if inside else "reconstruction failed", eta, t, u, resid)


# ---------------------------------------------------------------------------
# sampling on de Sitter space

def sample_desitter(d: int, n: int, rng: np.random.Generator, spread: float = 1.5) -> np.ndarray:
    """``(sinh b, cosh b * u)`` with ``u`` uniform on the sphere and ``b`` a truncated normal."""
    u = rng.normal(size=(n, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    b = rng.normal(scale=spread, size=n)
    b = np.clip(b, -3 * spread, 3 * spread)
    return np.column_stack([np.sinh(b), np.cosh(b)[:, None] * u])


def sample_desitter_box(d: int, n: int, rng: np.random.Generator, half: float = 2.0) -> np.ndarray:
    """Uniform ``x0`` and ``(x2, ..., xd)`` in a box, with ``x1 = +-sqrt(...)`` solved for."""
    out = []
    while len(out) < n:
        x0 = rng.uniform(-half, half)
        rest = rng.uniform(-half, half, size=d - 1)
        s = 1 + x0 * x0 - rest @ rest
        if s < 0:
            continue
        x1 = math.sqrt(s) * rng.choice([-1.0, 1.0])
        out.append(np.concatenate([[x0, x1], rest]))
    return np.array(out)


def sample_desitter_band(d: int, n: int, rng: np.random.Generator, width: float = 5e-6) -> np.ndarray:
    """Points with ``x1 - |x0|`` uniform in ``(-width, width)``: straddling the wedge boundary."""
    out = []
    while len(out) < n:
        x0 = rng.uniform(-1.0, 1.0)
        x1 = abs(x0) + rng.uniform(-width, width)
        s = 1 + x0 * x0 - x1 * x1
        if s < 0:
            continue
        w = rng.normal(size=d - 1)
        w *= math.sqrt(s) / np.linalg.norm(w)
        out.append(np.concatenate([[x0, x1], w]))
    return np.array(out)


def sample_polar(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Points ``B_eta R Exp_{e2}(p(e1 + e0) + q(e1 - e0))`` with ``p, q > 0``, ``2 sqrt(pq) < pi``."""
    out = np.empty((n, d + 1))
    for k in range(n):
        length = rng.uniform(0.02, math.pi - 0.02)
        ratio = math.exp(rng.normal())
        p = length / 2 * ratio
        q = length / 2 / ratio
        v = np.zeros(d + 1)
        v[0] = p - q
        v[1] = p + q
        base = np.zeros(d + 1)
        base[2] = 1.0
        y = quadric_exp(base, v)
        u = rng.normal(size=d - 1)
        u /= np.linalg.norm(u)
        R = rotation_to(np.eye(d - 1)[0], u) if d > 2 else np.eye(1)
        y = np.concatenate([y[:2], R @ y[2:]])
        out[k] = boost(y, rng.normal())
    return out


def sample_tube_fixed(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``tau_bar``-fixed tube points ``B_eta R (cos t e2 + i sin t e0)``."""
    out = np.empty((n, d + 1), dtype=complex)
    for k in range(n):
        t = rng.uniform(0.01, math.pi - 0.01)
        y = np.zeros(d + 1, dtype=complex)
        y[0] = 1j * math.sin(t)
        u = rng.normal(size=d - 1)
        u /= np.linalg.norm(u)
        y[2:] = math.cos(t) * u
        out[k] = boost(y, rng.normal())
    return out


# ---------------------------------------------------------------------------
# tangent sampling for the geodesic law

def sample_tangent(p: np.ndarray, kind: str, rng: np.random.Generator, beta: np.ndarray | None = None) -> np.ndarray:
    """Tangent vector at ``p`` whose ``beta(v,v)/beta(p,p)`` is positive, negative or zero."""
    n = len(p)
    pp = float(form(beta, p, p))
    for _ in range(1000):
        w = tangent_projection(p, rng.normal(size=n), beta)
        z = float(form(beta, w, w)) / pp
        if kind == "positive" and z > 0.05:
            return w / math.sqrt(z)
        if kind == "negative" and z < -0.05:
            return w / math.sqrt(-z)
        if kind == "null":
            w2 = tangent_projection(p, rng.normal(size=n), beta)
            a, b, c = float(form(beta, w, w)), float(form(beta, w, w2)), float(form(beta, w2, w2))
            disc = b * b - a * c
            if disc <= 0 or abs(c) < 1e-6:
                continue
            lam = (-b + math.sqrt(disc)) / c
            v = w + lam * w2
            return v / np.linalg.norm(v)
    raise RuntimeError(f"could not sample a {kind} tangent vector")
