"""Restricted roots, coroots, the compact Weyl group and the cones they bound.

``a`` is an abelian subspace of ``q_p`` given by a coordinate basis (columns).
Elements of ``a`` are handled in ``a``-coordinates; a root is stored through its
values on the ``a``-basis, so ``alpha(x) = values @ x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cones, linop
from .liealg import Involution, LieAlgebra, centralizer, intersect
from .linop import GAP_TOL

VALUE_TOL = 1e-7


class RootClusteringError(ArithmeticError):
    """Eigenvalues of the generic element are too close to separate roots."""


@dataclass
class Root:
    values: np.ndarray
    space: np.ndarray
    compact: bool | None = None
    coroot: np.ndarray | None = None

    @property
    def multiplicity(self) -> int:
        return self.space.shape[1]

    def __call__(self, x) -> float:
        return float(self.values @ np.asarray(x))


@dataclass
class RootSystem:
    alg: LieAlgebra
    a_basis: np.ndarray
    roots: list[Root]
    zero_space: np.ndarray
    min_gap: float

    @property
    def rank(self) -> int:
        return self.a_basis.shape[1]

    def to_a(self, x) -> np.ndarray:
        """``a``-coordinates of an algebra element lying in ``a``."""
        y, *_ = np.linalg.lstsq(self.a_basis, np.asarray(x, dtype=float), rcond=None)
        if np.linalg.norm(self.a_basis @ y - x) > 1e-8 * max(1.0, np.linalg.norm(x)):
            raise ValueError("element does not lie in a")
        return y

    def from_a(self, y) -> np.ndarray:
        return self.a_basis @ np.asarray(y)

    def index_of(self, values) -> int | None:
        for i, r in enumerate(self.roots):
            if np.max(np.abs(r.values - values)) < VALUE_TOL:
                return i
        return None

    def is_root(self, values) -> bool:
        return self.index_of(values) is not None

    def compact_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roots) if r.compact]

    def noncompact_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roots) if r.compact is False]


def restricted_roots(alg: LieAlgebra, a_basis: np.ndarray, seed: int = 0, attempts: int = 4) -> RootSystem:
    """Simultaneously diagonalise ``ad a`` and read off the restricted roots."""
    a_basis = np.asarray(a_basis, dtype=float)
    r = a_basis.shape[1]
    for i in range(r):
        for j in range(r):
            if np.max(np.abs(alg.bracket(a_basis[:, i], a_basis[:, j]))) > 1e-9:
                raise ValueError("a is not abelian")
    ads = [alg.ad(a_basis[:, i]) for i in range(r)]
    rng = np.random.default_rng(seed)
    last_error: Exception | None = None
    for _ in range(attempts):
        coeffs = rng.uniform(0.5, 1.5, size=r) * rng.choice([-1.0, 1.0], size=r)
        M = sum(c * A for c, A in zip(coeffs, ads))
        try:
            return _decompose(alg, a_basis, ads, M)
        except RootClusteringError as exc:
            last_error = exc
    raise RootClusteringError(f"could not separate roots: {last_error}")


def _decompose(alg, a_basis, ads, M) -> RootSystem:
    w = linop.eigenvalues(M)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w.imag)) > 1e-7 * scale:
        raise ValueError("ad a is not diagonalisable over the reals")
    groups = linop.cluster_values(w.real.astype(complex), 1e-7 * scale)
    centers = sorted(float(np.mean(w.real[g])) for g in groups)
    gaps = np.diff(centers)
    min_gap = float(np.min(gaps)) if len(gaps) else math.inf
    if min_gap < GAP_TOL * scale:
        raise RootClusteringError(f"eigenvalue gap {min_gap:.2e} below threshold")
    roots = []
    zero_space = None
    total = 0
    for c in centers:
        V = linop.kernel(M - c * np.eye(len(M)), rcond=1e-9)
        total += V.shape[1]
        vals = []
        for A in ads:
            AV = A @ V
            lam = float(np.trace(V.T @ AV) / V.shape[1])
            if np.max(np.abs(AV - lam * V)) > 1e-7 * scale:
                raise RootClusteringError("generic element merged two distinct roots")
            vals.append(lam)
        vals = np.array(vals)
        if np.max(np.abs(vals)) < VALUE_TOL:
            zero_space = V
        else:
            roots.append(Root(vals, V))
    if total != alg.dim:
        raise ValueError("ad a is not diagonalisable")
    if zero_space is None:
        zero_space = np.zeros((alg.dim, 0))
    return RootSystem(alg, a_basis, roots, zero_space, min_gap)


def q_p_basis(alg: LieAlgebra, tau: Involution, theta: Involution) -> np.ndarray:
    return intersect(tau.antifixed(), theta.antifixed())


def classify_roots(rs: RootSystem, tau: Involution, theta: Involution) -> None:
    """Mark each root compact or not, by two independent criteria.

    A root is compact when its root space is fixed by ``tau theta``.  The
    cross-check asks whether the root vanishes on the centre of ``q_p``.
    """
    alg = rs.alg
    TT = tau.matrix @ theta.matrix
    qp = q_p_basis(alg, tau, theta)
    zq = centralizer(alg, qp, within=qp)
    z_a = np.column_stack([rs.to_a(zq[:, k]) for k in range(zq.shape[1])]) if zq.shape[1] else np.zeros((rs.rank, 0))
    for root in rs.roots:
        V = root.space
        fixed = np.max(np.abs(TT @ V - V)) < 1e-8
        anti = np.max(np.abs(TT @ V + V)) < 1e-8
        if not (fixed or anti):
            raise ValueError("root space is not homogeneous under tau theta")
        vanishes = bool(np.all(np.abs(root.values @ z_a) < VALUE_TOL)) if z_a.shape[1] else True
        if fixed != vanishes:
            raise ValueError("compactness criteria disagree")
        root.compact = bool(fixed)


def compute_coroots(rs: RootSystem, theta: Involution) -> None:
    """Coroot proportional to ``[x, theta x]`` for ``x`` in the root space, scaled to ``alpha = 2``."""
    alg = rs.alg
    for root in rs.roots:
        found = None
        for k in range(root.multiplicity):
            x = root.space[:, k]
            y = rs.to_a(alg.bracket(x, theta(x)))
            val = root(y)
            if abs(val) < 1e-10:
                raise ValueError("degenerate coroot")
            cand = 2 * y / val
            if found is None:
                found = cand
            elif np.max(np.abs(found - cand)) > 1e-8:
                raise ValueError("coroot depends on the root vector")
        root.coroot = found


def build_root_system(alg: LieAlgebra, a_basis, tau: Involution, theta: Involution) -> RootSystem:
    rs = restricted_roots(alg, a_basis)
    classify_roots(rs, tau, theta)
    compute_coroots(rs, theta)
    return rs


def reflection(root: Root) -> np.ndarray:
    """``s(x) = x - alpha(x) alpha^vee`` in ``a``-coordinates."""
    return np.eye(len(root.values)) - np.outer(root.coroot, root.values)


def weyl_group(rs: RootSystem, indices, cap: int = 10000) -> list[np.ndarray]:
    """Group generated by the reflections of the given roots, by breadth-first closure."""
    gens = [reflection(rs.roots[i]) for i in indices]
    ident = np.eye(rs.rank)
    key = lambda M: tuple(np.round(M, 8).ravel())
    seen = {key(ident): ident}
    frontier = [ident]
    while frontier:
        new = []
        for M in frontier:
            for s in gens:
                P = s @ M
                k = key(P)
                if k not in seen:
                    seen[k] = P
                    new.append(P)
                    if len(seen) > cap:
                        raise RuntimeError("Weyl group closure exceeded the cap")
        frontier = new
    return list(seen.values())


def weyl_group_k(rs: RootSystem) -> list[np.ndarray]:
    return weyl_group(rs, rs.compact_indices())


@dataclass
class PositiveSystem:
    plus: list[int]
    minus: list[int]
    compact: list[int]


def positive_system_from(rs: RootSystem, h_c) -> PositiveSystem:
    """Split roots by their value on ``h_c`` (in ``a``-coordinates): +1, -1 or 0."""
    plus, minus, compact = [], [], []
    for i, root in enumerate(rs.roots):
        v = root(h_c)
        if abs(v - 1) < VALUE_TOL:
            plus.append(i)
        elif abs(v + 1) < VALUE_TOL:
            minus.append(i)
        elif abs(v) < VALUE_TOL:
            compact.append(i)
        else:
            raise ValueError(f"h_c takes the value {v:.6g} on a root; it is not an Euler element")
    if sorted(compact) != sorted(rs.compact_indices()):
        raise ValueError("roots vanishing on h_c differ from the compact roots")
    return PositiveSystem(plus, minus, compact)


@dataclass
class MinMaxCones:
    c_min: cones.PolyhedralCone
    c_max: cones.PolyhedralCone
    certificates: dict[str, bool] = field(default_factory=dict)


def cone_min_max(rs: RootSystem, pos: PositiveSystem) -> MinMaxCones:
    """``C_min`` spanned by positive non-compact coroots, ``C_max`` cut out by those roots."""
    G = np.column_stack([rs.roots[i].coroot for i in pos.plus])
    A = np.vstack([rs.roots[i].values for i in pos.plus])
    out = MinMaxCones(cones.PolyhedralCone(generators=G), cones.PolyhedralCone(inequalities=A))
    out.certificates = {
        "min_in_max": cones.generators_satisfy(G, A),
        "min_pointed": cones.generated_is_pointed(G),
        "min_generating": cones.generated_spans(G),
        "max_pointed": cones.inequalities_pointed(A),
        "max_generating": cones.inequalities_have_interior(A),
    }
    return out


def s_of(x, rs: RootSystem, pos: PositiveSystem) -> float:
    """``max(|alpha(x)|, 2|beta(x)|)`` over positive non-compact ``alpha`` and compact ``beta``."""
    vals = [abs(rs.roots[i](x)) for i in pos.plus]
    vals += [2 * abs(rs.roots[i](x)) for i in pos.compact]
    return max(vals) if vals else 0.0


def in_cone(cone: cones.PolyhedralCone, x, margin: float = 0.0) -> bool:
    if cone.inequalities is not None:
        return cones.in_inequalities(cone.inequalities, x, margin)
    return cones.contains_generated(cone.generators, x, margin)


def in_c_pi(x, cone: cones.PolyhedralCone, rs: RootSystem, pos: PositiveSystem, margin: float = 1e-9) -> bool:
    """Interior of the cone with ``s(x) < pi``, both with margin."""
    return in_cone(cone, x, margin) and s_of(x, rs, pos) < math.pi - margin


# ---------------------------------------------------------------------------
# strongly orthogonal roots

@dataclass
class StronglyOrthogonalSet:
    gamma: list[int]
    fixed: list[int]
    swapped: list[tuple[int, int]]
    subalgebra_dim: int
    closure_residual: float


def induced_tau_on_a(rs: RootSystem, tau: Involution) -> np.ndarray:
    images = tau.matrix @ rs.a_basis
    Y, *_ = np.linalg.lstsq(rs.a_basis, images, rcond=None)
    if np.max(np.abs(rs.a_basis @ Y - images)) > 1e-8:
        raise ValueError("tau does not preserve a")
    return Y


def _strongly_orthogonal(rs: RootSystem, i: int, j: int) -> bool:
    a, b = rs.roots[i].values, rs.roots[j].values
    for v in (a + b, a - b):
        if np.max(np.abs(v)) < VALUE_TOL or rs.is_root(v):
            return False
    return True


def strongly_orthogonal_set(rs: RootSystem, pos: PositiveSystem, tau: Involution, theta: Involution) -> StronglyOrthogonalSet:
    """A maximal ``-tau``-stable set of pairwise strongly orthogonal positive non-compact roots.

    Candidates are ordered by decreasing support on the ``a``-basis and then by
    index; every cyclic rotation of that order is tried and the largest set kept.
    """
    T = induced_tau_on_a(rs, tau)
    minus_tau = {}
    for i in pos.plus:
        j = rs.index_of(-(rs.roots[i].values @ T))
        if j is None or j not in pos.plus:
            raise ValueError("-tau does not permute the positive non-compact roots")
        minus_tau[i] = j
    order = sorted(pos.plus, key=lambda i: (-int(np.sum(np.abs(rs.roots[i].values) > VALUE_TOL)), i))
    best: list[int] = []
    for shift in range(max(1, len(order))):
        rot = order[shift:] + order[:shift]
        chosen: list[int] = []
        for i in rot:
            if i in chosen:
                continue
            group = [i] if minus_tau[i] == i else [i, minus_tau[i]]
            if len(group) == 2 and not _strongly_orthogonal(rs, group[0], group[1]):
                continue
            if all(_strongly_orthogonal(rs, g, c) for g in group for c in chosen):
                chosen.extend(group)
        if len(chosen) > len(best):
            best = chosen
    fixed = [i for i in best if minus_tau[i] == i]
    swapped = sorted({tuple(sorted((i, minus_tau[i]))) for i in best if minus_tau[i] != i})
    dim, resid = _gamma_subalgebra(rs, best, theta)
    return StronglyOrthogonalSet(sorted(best), fixed, swapped, dim, resid)


def _gamma_subalgebra(rs: RootSystem, gamma: list[int], theta: Involution) -> tuple[int, float]:
    """Dimension and bracket-closure residual of the span of the ``+-gamma`` root spaces and their brackets."""
    alg = rs.alg
    cols = []
    for i in gamma:
        V = rs.roots[i].space
        W = theta.matrix @ V
        cols += [V, W]
        for a in range(V.shape[1]):
            for b in range(W.shape[1]):
                cols.append(alg.bracket(V[:, a], W[:, b])[:, None])
    if not cols:
        return 0, 0.0
    S = linop.orth(np.hstack(cols))
    P = S @ S.T
    resid = 0.0
    for a in range(S.shape[1]):
        for b in range(S.shape[1]):
            v = alg.bracket(S[:, a], S[:, b])
            resid = max(resid, float(np.linalg.norm(v - P @ v)))
    return S.shape[1], resid


# ---------------------------------------------------------------------------
# serialisation

def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def root_system_to_dict(rs: RootSystem, pos: PositiveSystem | None = None,
                        mm: MinMaxCones | None = None) -> dict:
    """Plain-data dump: root values on the ``a``-basis, multiplicities, flags, coroots and cones."""
    out = {
        "algebra": rs.alg.name,
        "rank": rs.rank,
        "a_basis": _floats(rs.a_basis.T),
        "roots": [
            {
                "values": _floats(r.values),
                "multiplicity": r.multiplicity,
                "compact": r.compact,
                "coroot": None if r.coroot is None else _floats(r.coroot),
            }
            for r in rs.roots
        ],
    }
    if pos is not None:
        out["positive"] = {"plus": pos.plus, "minus": pos.minus, "compact": pos.compact}
    if mm is not None:
        out["c_min"] = {"generators": _floats(mm.c_min.generators.T)}
        out["c_max"] = {"inequalities": _floats(mm.c_max.inequalities)}
        out["certificates"] = dict(mm.certificates)
    return out
