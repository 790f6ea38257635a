"""Concrete causal symmetric Lie algebras used throughout the package.

A :class:`CausalSpec` bundles a realisation with its involutions, the modular
Euler element ``h`` in ``h = g^tau``, an optional causal Euler element ``h_c``
and membership oracles for the cone ``C`` in ``q`` and for ``C_+`` and ``C_-``.
Each oracle returns a signed margin: positive inside the open cone, negative
outside.  The ``C_+`` and ``C_-`` oracles expect an argument that already lies in
the matching eigenspace ``q_{+1}(h)`` or ``q_{-1}(h)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linop
from .liealg import (
    H0, H1, Involution, LieAlgebra, cartan_theta, conjugation_involution, direct_sum,
    involution_from_matrix_map, is_euler, sl, sl_complex, so, sp, gl, tau_from_euler,
)

Margin = Callable[[np.ndarray], float]


@dataclass
class CausalSpec:
    name: str
    alg: LieAlgebra
    tau: Involution
    theta: Involution
    h: np.ndarray
    h_c: np.ndarray | None = None
    a_basis: np.ndarray | None = None
    cone_margin: Margin | None = None
    plus_margin: Margin | None = None
    minus_margin: Margin | None = None
    cone_sampler: Callable[[np.random.Generator], np.ndarray] | None = None
    compact_roots: bool = False
    family: str = ""
    params: dict = field(default_factory=dict)

    @property
    def q_basis(self) -> np.ndarray:
        return self.tau.antifixed()

    @property
    def h_basis(self) -> np.ndarray:
        return self.tau.fixed()

    def proj_q(self, x) -> np.ndarray:
        x = np.asarray(x)
        return 0.5 * (x - self.tau.matrix @ x)

    def proj_h(self, x) -> np.ndarray:
        x = np.asarray(x)
        return 0.5 * (x + self.tau.matrix @ x)

    def in_q(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x)
        return bool(np.max(np.abs(x - self.proj_q(x)), initial=0.0) <= tol * max(1.0, np.max(np.abs(x))))

    def s_of_q(self, y) -> float:
        """``s`` on the open cone, via the spectral radius of ``ad y``.

        Valid only without compact roots: every element of the open cone is then
        conjugate into ``a``, where ``s`` is the largest absolute root value.
        """
        if self.compact_roots:
            raise NotImplementedError("s on q needs explicit conjugation when compact roots exist")
        return linop.spectral_radius(self.alg.ad(y))


# ---------------------------------------------------------------------------
# sl(2) and its products

def _sl2_margin(y) -> float:
    """Open cone ``{a e + b f : a, b > 0}`` (coordinates (h, e, f))."""
    return float(min(y[1], y[2]) - abs(y[0]))


def sl2_cayley() -> CausalSpec:
    """sl(2) with ``h = diag(1/2, -1/2)``, ``tau = exp(pi i ad h)`` and ``C = [0, oo) e + [0, oo) f``."""
    g = sl(2)
    h = np.array([1.0, 0.0, 0.0])
    tau = tau_from_euler(g, h)
    theta = cartan_theta(g)
    h_c = g.coords(H1)

    def sampler(rng):
        return np.array([0.0, *rng.exponential(size=2)])

    return CausalSpec(
        "sl2-cayley", g, tau, theta, h, h_c, h_c[:, None], _sl2_margin,
        lambda y: float(y[1]), lambda y: float(-y[2]), sampler, False, "sl2", {"factors": 1},
    )


def sl2_product(r: int = 2) -> CausalSpec:
    """Direct sum of ``r`` copies of the sl(2) Cayley example."""
    base = sl2_cayley()
    g = direct_sum(*([sl(2)] * r))
    blocks = [slice(3 * k, 3 * k + 3) for k in range(r)]
    T = np.zeros((3 * r, 3 * r))
    for b in blocks:
        T[b, b] = base.tau.matrix
    tau = Involution("tau_h", T)
    theta = cartan_theta(g)
    h = np.concatenate([base.h] * r)
    a_basis = np.zeros((3 * r, r))
    for k, b in enumerate(blocks):
        a_basis[b, k] = base.h_c

    def per_block(m):
        return lambda y: float(min(m(y[b]) for b in blocks))

    def sampler(rng):
        return np.concatenate([base.cone_sampler(rng) for _ in blocks])

    name = "sl2x2" if r == 2 else f"sl2^{r}"
    return CausalSpec(
        name, g, tau, theta, h, a_basis.sum(axis=1), a_basis, per_block(base.cone_margin),
        per_block(base.plus_margin), per_block(base.minus_margin), sampler, False, "sl2", {"factors": r},
    )


# sl(2) acting on itself is so(1,2): under this map the Killing form becomes
# -2 times the Lorentz form, h goes to e2 and ad h becomes the boost of the (e0, e1)-plane.
_SL2_TO_R12 = np.array([[0.0, -1.0, 1.0], [0.0, -1.0, -1.0], [1.0, 0.0, 0.0]])


def sl2_to_minkowski(c) -> np.ndarray:
    """Coordinates (h, e, f) of an element of sl(2) to ``R^{1,2}``; ``h`` goes to ``e2``."""
    return np.asarray(c) @ _SL2_TO_R12.T


def minkowski_to_sl2(x) -> np.ndarray:
    return np.asarray(x) @ np.linalg.inv(_SL2_TO_R12).T


# ---------------------------------------------------------------------------
# de Sitter space

def wedge_generator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``z -> x [y, z] - y [x, z]`` for the Lorentz form: an element of so(1, d)."""
    eta = np.diag([1.0] + [-1.0] * (len(x) - 1))
    return np.outer(x, eta @ y) - np.outer(y, eta @ x)


def desitter(d: int) -> CausalSpec:
    """so(1, d) with base point ``e2`` of de Sitter space and the boost of the (e0, e1)-plane."""
    if d < 2:
        raise ValueError("de Sitter space needs d >= 2")
    n = d + 1
    g = so(1, d)
    R = -np.eye(n)
    R[2, 2] = 1.0
    tau = conjugation_involution(g, R)
    theta = cartan_theta(g)
    E = np.eye(n)
    h = g.coords(np.outer(E[0], E[1]) + np.outer(E[1], E[0]))
    h_c = g.coords(np.outer(E[0], E[2]) + np.outer(E[2], E[0]))

    def tangent(y):
        return g.element(y) @ E[2]

    def cone_margin(y):
        v = tangent(y)
        return float(v[0] - np.linalg.norm(np.delete(v, [0, 2])))

    def plus_margin(y):
        return float(tangent(y)[0])

    def minus_margin(y):
        return float(-tangent(y)[0])

    def sampler(rng):
        v = np.zeros(n)
        w = rng.normal(size=d - 1)
        v[0] = np.linalg.norm(w) + rng.exponential()
        v[[1] + list(range(3, n))] = w
        return g.coords(wedge_generator(E[2], v))

    return CausalSpec(
        f"dS{d}", g, tau, theta, h, h_c, h_c[:, None], cone_margin, plus_margin, minus_margin,
        sampler, False, "ds", {"d": d},
    )


# ---------------------------------------------------------------------------
# gl(2) with the cones C^m, and sp(2n) of Cayley type

def gl2_cones(m: float = 1.0) -> CausalSpec:
    """gl(2), ``tau(a b; c d) = (-d -b; -c -a)``, cone ``x1 x-1 >= m x0^2``, ``x+-1 >= 0``."""
    g = gl(2)
    tau = involution_from_matrix_map(g, lambda X: np.array([[-X[1, 1], -X[0, 1]], [-X[1, 0], -X[0, 0]]]), "tau")
    theta = cartan_theta(g)
    h = g.coords(H0)
    h_c = g.coords(H1)

    def parts(y):
        X = g.element(y)
        return X[0, 0], X[0, 1], X[1, 0]

    def cone_margin(y):
        x0, x1, xm = parts(y)
        return float(min(x1, xm, x1 * xm - m * x0 * x0))

    def plus_margin(y):
        return float(parts(y)[1])

    def minus_margin(y):
        return float(-parts(y)[2])

    def sampler(rng):
        x0 = rng.normal()
        x1 = rng.exponential() + 0.05
        xm = m * x0 * x0 / x1 + rng.exponential()
        return g.coords(np.array([[x0, x1], [xm, x0]]))

    a_basis = np.column_stack([g.coords(np.eye(2)), h_c])
    return CausalSpec(
        f"gl2-C{m:g}", g, tau, theta, h, h_c, a_basis, cone_margin, plus_margin, minus_margin,
        sampler, False, "gl2", {"m": m},
    )


def sp_cayley(n: int) -> CausalSpec:
    """sp(2n) with ``h = diag(1_n, -1_n)/2``; ``C`` has positive semidefinite off-diagonal blocks."""
    g = sp(2 * n)
    I, Z = np.eye(n), np.zeros((n, n))
    h = g.coords(0.5 * np.block([[I, Z], [Z, -I]]))
    tau = tau_from_euler(g, h)
    theta = cartan_theta(g)
    h_c = g.coords(0.5 * np.block([[Z, I], [I, Z]]))

    def blocks(y):
        X = g.element(y)
        return X[:n, n:], X[n:, :n], X[:n, :n]

    def cone_margin(y):
        B, Cb, A = blocks(y)
        return float(min(np.linalg.eigvalsh(B)[0], np.linalg.eigvalsh(Cb)[0]) - np.max(np.abs(A)))

    def plus_margin(y):
        return float(np.linalg.eigvalsh(blocks(y)[0])[0])

    def minus_margin(y):
        return float(np.linalg.eigvalsh(-blocks(y)[1])[0])

    def sampler(rng):
        P = rng.normal(size=(n, n))
        Q = rng.normal(size=(n, n))
        return g.coords(np.block([[Z, P @ P.T + 0.05 * I], [Q @ Q.T + 0.05 * I, Z]]))

    a_basis = np.column_stack([g.coords(0.5 * np.block([[Z, np.diag(e)], [np.diag(e), Z]])) for e in I])
    return CausalSpec(
        f"sp{2 * n}", g, tau, theta, h, h_c, a_basis, cone_margin, plus_margin, minus_margin,
        sampler, False, "sp", {"n": n},
    )


# ---------------------------------------------------------------------------
# su(r, r) inside sl(2r, C), for the root computations

def su_rr_model(r: int = 2) -> CausalSpec:
    """sl(2r, C) as a real algebra with ``tau(X) = -J X* J`` (so ``h = su(r, r)``) and ``theta(X) = -X*``.

    ``a`` consists of real traceless diagonal matrices; ``h_c = diag(1_r, -1_r)/2``.
    """
    n = 2 * r
    g = sl_complex(n)
    J = np.diag([1.0] * r + [-1.0] * r)
    tau = involution_from_matrix_map(g, lambda X: -J @ X.conj().T @ J, "tau")
    theta = cartan_theta(g)
    I, Z = np.eye(r), np.zeros((r, r))
    h = g.coords(0.5 * np.block([[Z, I], [I, Z]]).astype(complex))
    diag = [np.diag(np.eye(n)[i] - np.eye(n)[i + 1]).astype(complex) for i in range(n - 1)]
    a_basis = np.column_stack([g.coords(D) for D in diag])
    h_c = g.coords(np.diag([0.5] * r + [-0.5] * r).astype(complex))
    return CausalSpec(f"su{r}{r}", g, tau, theta, h, h_c, a_basis, compact_roots=True, family="su", params={"r": r})


def diag_to_a(spec: CausalSpec, entries) -> np.ndarray:
    """``a``-coordinates of a real traceless diagonal matrix in the su(r, r) model."""
    D = np.diag(np.asarray(entries, dtype=float)).astype(complex)
    x = spec.alg.coords(D)
    y, *_ = np.linalg.lstsq(spec.a_basis, x, rcond=None)
    return y


# ---------------------------------------------------------------------------

SPECS: dict[str, Callable[[], CausalSpec]] = {
    "sl2-cayley": sl2_cayley,
    "sl2x2": lambda: sl2_product(2),
    "dS2": lambda: desitter(2),
    "dS3": lambda: desitter(3),
    "dS4": lambda: desitter(4),
    "gl2": lambda: gl2_cones(1.0),
    "sp4": lambda: sp_cayley(2),
    "sp6": lambda: sp_cayley(3),
    "su22": lambda: su_rr_model(2),
}


def get_spec(name: str) -> CausalSpec:
    try:
        return SPECS[name]()
    except KeyError:
        raise ValueError(f"unknown spec {name!r}; choose from {sorted(SPECS)}") from None


def check_spec(spec: CausalSpec, rng: np.random.Generator | None = None, samples: int = 50) -> dict[str, float | bool]:
    """Structural invariants of a causal spec."""
    rng = rng or np.random.default_rng(0)
    g = spec.alg
    out: dict[str, float | bool] = {}
    out["tau_theta_commute"] = float(np.max(np.abs(spec.tau.matrix @ spec.theta.matrix - spec.theta.matrix @ spec.tau.matrix)))
    out["h_fixed_by_tau"] = float(np.max(np.abs(spec.tau(spec.h) - spec.h)))
    out["h_is_euler"] = is_euler(g, spec.h)[0]
    if spec.h_c is not None:
        out["h_c_in_q"] = spec.in_q(spec.h_c)
        out["h_c_is_euler"] = is_euler(g, spec.h_c)[0]
        if spec.cone_margin is not None:
            out["h_c_interior"] = spec.cone_margin(spec.h_c) > 0
    if spec.cone_sampler is not None:
        tau_h = tau_from_euler(g, spec.h).matrix
        hyperbolic = True
        invariant = True
        for _ in range(samples):
            y = spec.cone_sampler(rng)
            w = linop.eigenvalues(g.ad(y))
            hyperbolic &= bool(np.max(np.abs(w.imag)) < 1e-7 * max(1.0, np.max(np.abs(w))))
            invariant &= spec.cone_margin(-tau_h @ y) > -1e-9
        out["cone_hyperbolic"] = hyperbolic
        out["cone_minus_tau_h_invariant"] = invariant
    return out
