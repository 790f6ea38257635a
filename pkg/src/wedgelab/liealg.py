"""Finite-dimensional real Lie algebras realised as spans of matrices.

A :class:`LieAlgebra` stores a real basis of matrices (real or complex).  Elements
are handled through real coordinate vectors; complex coordinate vectors stand
for elements of the complexification.  Involutions, Euler elements and the
3-grading they define are all expressed as coordinate matrices.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg as sla

from . import linop
from .linop import EIG_TOL, EPS_REL

MEMBERSHIP_TOL = 1e-9


class NotInAlgebraError(ValueError):
    """A matrix does not lie in the span of the realisation basis."""


class InvolutionError(ValueError):
    """A proposed involution is not an involutive automorphism."""


@dataclass
class LieAlgebra:
    name: str
    basis: np.ndarray
    field_tag: str = "real"

    def __post_init__(self):
        self.basis = np.asarray(self.basis)
        if self.basis.ndim != 3 or self.basis.shape[1] != self.basis.shape[2]:
            raise ValueError("basis must have shape (dim, N, N)")
        M = self._vec(self.basis)
        if np.linalg.matrix_rank(M, tol=1e-10) != self.dim:
            raise ValueError(f"{self.name}: basis matrices are linearly dependent")
        self._pinv = np.linalg.pinv(M)
        self._vecbasis = M

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.basis.shape[1]

    @property
    def complex_matrices(self) -> bool:
        return np.iscomplexobj(self.basis)

    def _vec(self, X: np.ndarray) -> np.ndarray:
        """Real column vectors of a stack ``(k, N, N)`` or a single matrix."""
        X = np.asarray(X)
        single = X.ndim == 2
        X = X.reshape((-1, self.size * self.size)) if not single else X.reshape((1, -1))
        if self.complex_matrices:
            X = np.hstack([X.real, X.imag])
        elif np.iscomplexobj(X):
            if np.max(np.abs(X.imag), initial=0.0) > MEMBERSHIP_TOL:
                raise NotInAlgebraError(f"complex matrix given to real realisation {self.name}")
            X = X.real
        return X.T

    def element(self, c) -> np.ndarray:
        """Matrix of the element with coordinates ``c``."""
        return np.tensordot(np.asarray(c), self.basis, axes=1)

    def coords(self, X, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Real coordinates of the matrix ``X``; raises if ``X`` is outside the span."""
        v = self._vec(X)[:, 0]
        c = self._pinv @ v
        resid = np.linalg.norm(self._vecbasis @ c - v)
        if resid > tol * max(1.0, np.linalg.norm(v)):
            raise NotInAlgebraError(f"matrix is not in {self.name} (residual {resid:.2e})")
        return c

    def coords_many(self, Xs, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Coordinates of a stack of matrices, returned as columns."""
        V = self._vec(Xs)
        C = self._pinv @ V
        resid = np.linalg.norm(self._vecbasis @ C - V, axis=0)
        if np.any(resid > tol * np.maximum(1.0, np.linalg.norm(V, axis=0))):
            raise NotInAlgebraError(f"matrices are not in {self.name} (residual {resid.max():.2e})")
        return C

    @cached_property
    def ad_basis(self) -> np.ndarray:
        """``ad_basis[i]`` is the matrix of ``ad b_i`` in coordinates."""
        B = self.basis
        out = np.empty((self.dim, self.dim, self.dim))
        for i in range(self.dim):
            comm = np.einsum("ab,kbc->kac", B[i], B) - np.einsum("kab,bc->kac", B, B[i])
            out[i] = self.coords_many(comm)
        return out

    def structure_constants(self) -> np.ndarray:
        """``c[i, j, k]`` with ``[b_i, b_j] = sum_k c[i, j, k] b_k``."""
        return np.transpose(self.ad_basis, (0, 2, 1))

    def ad(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x), self.ad_basis, axes=1)

    def bracket(self, x, y) -> np.ndarray:
        return self.ad(x) @ np.asarray(y)

    def killing(self, x, y) -> float:
        return np.trace(self.ad(x) @ self.ad(y))

    def jacobi_residual(self) -> float:
        """Largest entry of the Jacobi identity evaluated on structure constants."""
        c = self.structure_constants()
        t = np.einsum("ijm,mkn->ijkn", c, c)
        jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.max(np.abs(jac)))

    def matrix_map(self, f, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Coordinate matrix of a linear map given on matrices."""
        images = np.stack([f(b) for b in self.basis])
        return self.coords_many(images, tol=tol)

    def subspace(self, matrices) -> np.ndarray:
        """Orthonormal coordinate basis (columns) of the span of some matrices."""
        return linop.orth(self.coords_many(np.stack(matrices)))


# ---------------------------------------------------------------------------
# standard realisations

def _E(n: int, i: int, j: int, dtype=float) -> np.ndarray:
    M = np.zeros((n, n), dtype=dtype)
    M[i, j] = 1
    return M


H0 = np.diag([0.5, -0.5])
E0 = np.array([[0.0, 1.0], [0.0, 0.0]])
F0 = np.array([[0.0, 0.0], [1.0, 0.0]])
H1 = 0.5 * np.array([[0.0, 1.0], [1.0, 0.0]])
E1 = 0.5 * np.array([[-1.0, 1.0], [-1.0, 1.0]])
F1 = 0.5 * np.array([[-1.0, -1.0], [1.0, 1.0]])


def _sl_basis(n: int) -> list[np.ndarray]:
    if n < 2:
        raise ValueError("sl(n) needs n >= 2")
    if n == 2:
        return [H0.copy(), E0.copy(), F0.copy()]
    out = [_E(n, i, i) - _E(n, i + 1, i + 1) for i in range(n - 1)]
    out += [_E(n, i, j) for i in range(n) for j in range(n) if i != j]
    return out


def sl(n: int) -> LieAlgebra:
    """sl(n, R); for n = 2 the basis is (h, e, f) with h = diag(1/2, -1/2)."""
    return LieAlgebra(f"sl({n})", np.stack(_sl_basis(n)))


def gl(n: int) -> LieAlgebra:
    basis = [np.eye(n)] + _sl_basis(n)
    return LieAlgebra(f"gl({n})", np.stack(basis))


def sp(m: int) -> LieAlgebra:
    """sp(m, R) for even m = 2n, preserving the form with matrix [[0, 1], [-1, 0]]."""
    if m % 2 or m < 2:
        raise ValueError("sp(m) needs an even m >= 2")
    n = m // 2
    basis = []
    for i in range(n):
        for j in range(n):
            A = _E(n, i, j)
            basis.append(sla.block_diag(A, -A.T))
    for i in range(n):
        for j in range(i, n):
            S = _E(n, i, j) + _E(n, j, i)
            if i == j:
                S = S / 2
            Z = np.zeros((n, n))
            basis.append(np.block([[Z, S], [Z, Z]]))
            basis.append(np.block([[Z, Z], [S, Z]]))
    return LieAlgebra(f"sp({m})", np.stack(basis))


def so(p: int, q: int) -> LieAlgebra:
    """so(p, q) preserving diag(1_p, -1_q)."""
    n = p + q
    if n < 2:
        raise ValueError("so(p, q) needs p + q >= 2")
    sign = np.array([1.0] * p + [-1.0] * q)
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            if sign[i] == sign[j]:
                basis.append(_E(n, i, j) - _E(n, j, i))
            else:
                basis.append(_E(n, i, j) + _E(n, j, i))
    return LieAlgebra(f"so({p},{q})", np.stack(basis))


def sl_complex(n: int) -> LieAlgebra:
    """sl(n, C) viewed as a real Lie algebra of dimension 2(n^2 - 1)."""
    base = [b.astype(complex) for b in _sl_basis(n)]
    return LieAlgebra(f"sl({n},C)", np.stack(base + [1j * b for b in base]), "complex-as-real")


def su(p: int, q: int) -> LieAlgebra:
    """su(p, q): traceless X with X* J + J X = 0 for J = diag(1_p, -1_q)."""
    n = p + q
    J = np.diag([1.0] * p + [-1.0] * q)
    big = sl_complex(n)
    images = np.stack([0.5 * (b - J @ b.conj().T @ J) for b in big.basis])
    C = linop.orth(big.coords_many(images))
    basis = np.stack([big.element(C[:, k]) for k in range(C.shape[1])])
    basis = _clean(basis)
    return LieAlgebra(f"su({p},{q})", basis, "complex-as-real")


def _clean(basis: np.ndarray) -> np.ndarray:
    """Round away floating noise in a basis obtained by orthonormalisation."""
    return np.where(np.abs(basis) < 1e-14, 0, basis)


def direct_sum(*algs: LieAlgebra) -> LieAlgebra:
    """Block-diagonal direct sum of realisations."""
    if not algs:
        raise ValueError("direct_sum needs at least one summand")
    cplx = any(a.complex_matrices for a in algs)
    N = sum(a.size for a in algs)
    basis = []
    offset = 0
    for a in algs:
        for b in a.basis:
            M = np.zeros((N, N), dtype=complex if cplx else float)
            M[offset:offset + a.size, offset:offset + a.size] = b
            basis.append(M)
        offset += a.size
    tag = "complex-as-real" if cplx else "real"
    return LieAlgebra("+".join(a.name for a in algs), np.stack(basis), tag)


_NAME = re.compile(r"^(sl|gl|sp|so|su)\((\d+)(?:,(\d+|C))?\)$")


def make_realization(name: str) -> LieAlgebra:
    """Build a realisation from a name such as ``sl(2)``, ``so(1,3)`` or ``sl(2)+sl(2)``."""
    parts = [s.strip() for s in name.replace(" ", "").split("+")]
    if len(parts) > 1:
        return direct_sum(*(make_realization(p) for p in parts))
    m = _NAME.match(parts[0])
    if not m:
        raise ValueError(f"unsupported realisation name {name!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "sl":
        return sl_complex(a) if b == "C" else sl(a)
    if b == "C":
        raise ValueError(f"unsupported realisation name {name!r}")
    if kind == "gl":
        return gl(a)
    if kind == "sp":
        return sp(a)
    if kind == "so":
        return so(a, int(b) if b is not None else 0)
    if kind == "su":
        if b is None:
            raise ValueError("su needs a signature, e.g. su(2,2)")
        return su(a, int(b))
    raise ValueError(f"unsupported realisation name {name!r}")


# ---------------------------------------------------------------------------
# involutions

@dataclass
class Involution:
    name: str
    matrix: np.ndarray

    def __call__(self, x):
        return self.matrix @ np.asarray(x)

    def fixed(self) -> np.ndarray:
        return linop.kernel(self.matrix - np.eye(len(self.matrix)))

    def antifixed(self) -> np.ndarray:
        return linop.kernel(self.matrix + np.eye(len(self.matrix)))


def automorphism_residual(alg: LieAlgebra, T: np.ndarray) -> float:
    """Size of ``T[x, y] - [Tx, Ty]`` over all basis pairs."""
    c = alg.structure_constants()
    lhs = np.einsum("kl,ijl->ijk", T, c)
    rhs = np.einsum("ai,bj,abk->ijk", T, T, c)
    return float(np.max(np.abs(lhs - rhs)))


def check_involution(alg: LieAlgebra, T: np.ndarray, tol: float = 1e-9) -> None:
    n = alg.dim
    if np.max(np.abs(T @ T - np.eye(n))) > tol:
        raise InvolutionError("map does not square to the identity")
    if automorphism_residual(alg, T) > tol * max(1.0, np.max(np.abs(alg.ad_basis))):
        raise InvolutionError("map does not preserve brackets")


def involution_from_matrix_map(alg: LieAlgebra, f, name: str = "involution") -> Involution:
    T = alg.matrix_map(f)
    T = np.where(np.abs(T) < 1e-13, 0.0, T)
    check_involution(alg, T)
    return Involution(name, T)


def cartan_theta(alg: LieAlgebra) -> Involution:
    """The Cartan involution X -> -X^* (the realisation must be closed under it)."""
    if alg.complex_matrices:
        return involution_from_matrix_map(alg, lambda X: -X.conj().T, "theta")
    return involution_from_matrix_map(alg, lambda X: -X.T, "theta")


def conjugation_involution(alg: LieAlgebra, S: np.ndarray, name: str = "tau") -> Involution:
    """X -> S X S^{-1} for an involutive matrix S."""
    Sinv = np.linalg.inv(S)
    return involution_from_matrix_map(alg, lambda X: S @ X @ Sinv, name)


# ---------------------------------------------------------------------------
# Euler elements and the 3-grading

@dataclass
class Grading:
    """Eigenprojections of ``ad h`` for an Euler element ``h``."""

    h: np.ndarray
    P: dict[int, np.ndarray] = field(default_factory=dict)

    def part(self, x, j: int) -> np.ndarray:
        return self.P[j] @ np.asarray(x)

    def basis(self, j: int) -> np.ndarray:
        return linop.orth(self.P[j])


def is_euler(alg: LieAlgebra, h) -> tuple[bool, Grading | None]:
    """Decide whether ``ad h`` is diagonalisable with spectrum in {-1, 0, 1} (and h != 0)."""
    h = np.asarray(h, dtype=float)
    A = alg.ad(h)
    spec = linop.spectrum(A)
    w = spec.eigenvalues
    if not spec.diagonalizable:
        return False, None
    if np.any(np.abs(w.imag) > EIG_TOL):
        return False, None
    if np.any(np.min(np.abs(w.real[:, None] - np.array([-1.0, 0.0, 1.0])[None, :]), axis=1) > EIG_TOL):
        return False, None
    if not np.any(np.abs(w.real - 1.0) < EIG_TOL):
        return False, None
    n = alg.dim
    I = np.eye(n)
    P = {1: 0.5 * A @ (A + I), -1: 0.5 * A @ (A - I), 0: I - A @ A}
    for j, Pj in P.items():
        if np.max(np.abs(Pj @ Pj - Pj)) > 1e-8:
            return False, None
        if np.max(np.abs(A @ Pj - j * Pj)) > 1e-8:
            return False, None
    return True, Grading(h, P)


def grading(alg: LieAlgebra, h) -> Grading:
    ok, g = is_euler(alg, h)
    if not ok:
        raise ValueError("element is not an Euler element")
    return g


def tau_from_euler(alg: LieAlgebra, h) -> Involution:
    """``exp(pi i ad h)``: +1 on the 0-eigenspace, -1 on the (+-1)-eigenspaces."""
    g = grading(alg, h)
    T = g.P[0] - g.P[1] - g.P[-1]
    T = np.where(np.abs(T) < 1e-13, 0.0, T)
    check_involution(alg, T)
    return Involution("tau_h", T)


def kappa_matrix(alg: LieAlgebra, h, inverse: bool = False) -> np.ndarray:
    """``exp(-(pi i / 2) ad h)`` on the complexification, or its inverse.

    It multiplies the (+-1)-eigenspace of ``ad h`` by ``-+i`` and squares to ``tau_h``.
    """
    g = grading(alg, h)
    s = -1.0 if inverse else 1.0
    return g.P[0] + (-1j * s) * g.P[1] + (1j * s) * g.P[-1]


def kappa_apply(alg: LieAlgebra, h, z, inverse: bool = False) -> np.ndarray:
    return kappa_matrix(alg, h, inverse) @ np.asarray(z, dtype=complex)


def grading_projection(alg: LieAlgebra, x, j: int, h) -> np.ndarray:
    return grading(alg, h).part(x, j)


def limit_projection(alg: LieAlgebra, x, sign: int, h, t: float = 40.0) -> np.ndarray:
    """``exp(-sign t) exp(sign t ad h) x``, which tends to the (sign)-component as t grows."""
    A = alg.ad(h)
    return math.exp(-t) * (linop.expm(sign * t * A) @ np.asarray(x, dtype=float))


def killing_form(alg: LieAlgebra, x, y) -> float:
    return alg.killing(x, y)


def eigenspace(M: np.ndarray, value: float, rcond: float = EPS_REL) -> np.ndarray:
    return linop.kernel(M - value * np.eye(len(M)), rcond=rcond)


def intersect(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the intersection of two column spans."""
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros((U.shape[0], 0))
    K = linop.kernel(np.hstack([U, -V]))
    if K.shape[1] == 0:
        return np.zeros((U.shape[0], 0))
    return linop.orth(U @ K[: U.shape[1]])


def centralizer(alg: LieAlgebra, S: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
    """Elements of ``within`` (default: all) commuting with every column of ``S``."""
    W = np.eye(alg.dim) if within is None else within
    if S.shape[1] == 0:
        return linop.orth(W)
    stacked = np.vstack([alg.ad(S[:, k]) @ W for k in range(S.shape[1])])
    K = linop.kernel(stacked)
    return linop.orth(W @ K) if K.shape[1] else np.zeros((alg.dim, 0))


def bracket_span(alg: LieAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    cols = [alg.bracket(U[:, i], V[:, j]) for i in range(U.shape[1]) for j in range(V.shape[1])]
    if not cols:
        return np.zeros((alg.dim, 0))
    return linop.orth(np.stack(cols, axis=1))


# ---------------------------------------------------------------------------
# sl(2) identities

def sl2_coords(matrix: np.ndarray) -> np.ndarray:
    """Coordinates in the basis (h, e, f) of sl(2)."""
    return np.array([matrix[0, 0] - matrix[1, 1], matrix[0, 1], matrix[1, 0]])


def check_sl2_identities(n_t: int = 64, n_grid: int = 32) -> dict[str, float]:
    """Residuals of three sl(2) identities, each evaluated by matrix exponentials.

    * ``Ad(exp x0) h1 = h0`` and ``Ad(exp x0) h0 = -h1`` for ``x0 = (pi/4)(e - f)``;
    * ``exp(t ad(e - f)) h1 = cos(2t) h1 + sin(2t) h0`` on ``n_t`` values of t;
    * ``sin(ad y) h = S(4 lam mu)(-lam e + mu f)`` for ``y = lam e + mu f`` on an
      ``n_grid`` x ``n_grid`` grid with ``0 < 4 lam mu < pi^2``.
    """
    g = sl(2)
    h0, e, f = np.eye(3)
    h1 = g.coords(H1)
    k = e - f
    out = {}
    g0 = linop.expm(math.pi / 4 * g.ad(k))
    out["cayley_conjugation"] = float(max(np.max(np.abs(g0 @ h1 - h0)), np.max(np.abs(g0 @ h0 + h1))))

    res = 0.0
    for t in np.linspace(-math.pi, math.pi, n_t):
        lhs = linop.expm(t * g.ad(k)) @ h1
        rhs = math.cos(2 * t) * h1 + math.sin(2 * t) * h0
        res = max(res, float(np.max(np.abs(lhs - rhs))))
    out["rotation_of_h1"] = res

    res = 0.0
    grid = np.linspace(0.02, 1.5, n_grid)
    for lam in grid:
        for mu in grid:
            z = 4 * lam * mu
            if not 0 < z < math.pi**2:
                raise ValueError("grid leaves the admissible region")
            A = g.ad(lam * e + mu * f)
            E = linop.expm(1j * A)
            sinA = (E - np.linalg.inv(E)) / 2j
            lhs = sinA @ h0
            rhs = complex(linop.S_fn(z)) * (-lam * e + mu * f)
            res = max(res, float(np.max(np.abs(lhs - rhs))))
    out["sine_of_ad"] = res
    return out


# ---------------------------------------------------------------------------
# serialisation

def realization_to_json(alg: LieAlgebra, involutions: dict[str, Involution] | None = None) -> str:
    data = {
        "name": alg.name,
        "dim": alg.dim,
        "size": alg.size,
        "field": alg.field_tag,
        "basis": [b.real.ravel().tolist() for b in alg.basis],
        "involutions": {k: v.matrix.tolist() for k, v in (involutions or {}).items()},
    }
    if alg.complex_matrices:
        data["basis_imag"] = [b.imag.ravel().tolist() for b in alg.basis]
    return json.dumps(data, indent=2, sort_keys=True)


def realization_from_json(text: str) -> tuple[LieAlgebra, dict[str, Involution]]:
    data = json.loads(text)
    n = data["size"]
    basis = np.array(data["basis"], dtype=float).reshape((-1, n, n))
    if "basis_imag" in data:
        basis = basis + 1j * np.array(data["basis_imag"], dtype=float).reshape((-1, n, n))
    alg = LieAlgebra(data["name"], basis, data.get("field", "real"))
    if alg.dim != data["dim"]:
        raise ValueError("dimension field does not match the basis")
    invs = {}
    for k, m in data["involutions"].items():
        T = np.array(m, dtype=float)
        check_involution(alg, T)
        invs[k] = Involution(k, T)
    return alg, invs
