"""Irreducible modular non-compactly causal symmetric Lie algebras.

Each row lists ``g``, its dual ``g^c``, ``h = g^tau``, the restricted root
system, the Euler element and ``g_1(h)``.  Rows marked realisable come with a
builder for small parameters; for those the real dimension of ``g_1(h)`` and the
rank of a maximal abelian subspace of ``q_p`` are recomputed and compared with
the table.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .liealg import (
    Involution, LieAlgebra, cartan_theta, centralizer, conjugation_involution, grading,
    intersect, involution_from_matrix_map, sl, sl_complex, so, sp, su, tau_from_euler,
)


@dataclass
class Realized:
    alg: LieAlgebra
    tau: Involution
    theta: Involution
    h: np.ndarray


@dataclass(frozen=True)
class CatalogRow:
    family: str
    g: str
    g_dual: str
    h: str
    roots: str
    euler: str
    g1: str
    params: tuple[int, ...] = ()
    build: Callable[[int], Realized] | None = None
    g1_dim: Callable[[int], int] | None = None
    rank: Callable[[int], int] | None = None
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "g": self.g,
            "g_dual": self.g_dual,
            "h": self.h,
            "roots": self.roots,
            "euler": self.euler,
            "g1": self.g1,
            "realized_params": list(self.params),
        }


def _off_diag_half(r: int, dtype=float) -> np.ndarray:
    I, Z = np.eye(r), np.zeros((r, r))
    return (0.5 * np.block([[Z, I], [I, Z]])).astype(dtype)


def _diag_half(r: int, dtype=float) -> np.ndarray:
    return np.diag([0.5] * r + [-0.5] * r).astype(dtype)


def _boost(n: int, i: int, j: int) -> np.ndarray:
    M = np.zeros((n, n))
    M[i, j] = M[j, i] = 1.0
    return M


def complexify(alg: LieAlgebra) -> LieAlgebra:
    base = alg.basis.astype(complex)
    return LieAlgebra(f"{alg.name}_C", np.concatenate([base, 1j * base]), "complex-as-real")


def _conj(alg: LieAlgebra) -> Involution:
    return involution_from_matrix_map(alg, np.conj, "tau")


def build_sl_complex(r: int) -> Realized:
    g = sl_complex(2 * r)
    J = np.diag([1.0] * r + [-1.0] * r)
    tau = involution_from_matrix_map(g, lambda X: -J @ X.conj().T @ J, "tau")
    return Realized(g, tau, cartan_theta(g), g.coords(_off_diag_half(r, complex)))


def build_sp_complex(r: int) -> Realized:
    g = complexify(sp(2 * r))
    return Realized(g, _conj(g), cartan_theta(g), g.coords(_diag_half(r, complex)))


def build_so_complex(n: int) -> Realized:
    g = complexify(so(2, n - 2))
    return Realized(g, _conj(g), cartan_theta(g), g.coords(_boost(n, 0, 2).astype(complex)))


def build_su(r: int) -> Realized:
    g = su(r, r)
    h = g.coords(_off_diag_half(r, complex))
    return Realized(g, tau_from_euler(g, h), cartan_theta(g), h)


def build_sp(r: int) -> Realized:
    g = sp(2 * r)
    h = g.coords(_diag_half(r))
    return Realized(g, tau_from_euler(g, h), cartan_theta(g), h)


def build_so2d(d: int) -> Realized:
    g = so(2, d)
    h = g.coords(_boost(d + 2, 0, 2))
    return Realized(g, tau_from_euler(g, h), cartan_theta(g), h)


def build_sl_split(r: int) -> Realized:
    g = sl(2 * r)
    theta = cartan_theta(g)
    tau_p = tau_from_euler(g, g.coords(_diag_half(r)))
    tau = Involution("tau", tau_p.matrix @ theta.matrix)
    return Realized(g, tau, theta, g.coords(_off_diag_half(r)))


def build_so_split(pq: int) -> Realized:
    """so(p+1, q+1) with ``h = so(1, p) + so(1, q)``; the parameter encodes ``10 p + q``."""
    p, q = divmod(pq, 10)
    n = p + q + 2
    S = np.ones(n)
    S[p] = -1.0
    S[p + 2:] = -1.0
    g = so(p + 1, q + 1)
    tau = conjugation_involution(g, np.diag(S))
    return Realized(g, tau, cartan_theta(g), g.coords(_boost(n, 0, p + 1)))


def build_so_1d(d: int) -> Realized:
    """so(1, d+1) with ``h = so(1, d)`` fixing the coordinate vector ``e2``."""
    n = d + 2
    g = so(1, d + 1)
    R = -np.eye(n)
    R[2, 2] = 1.0
    return Realized(g, conjugation_involution(g, R), cartan_theta(g), g.coords(_boost(n, 0, 1)))


ROWS: list[CatalogRow] = [
    CatalogRow("complex", "sl_2r(C)", "su_r,r(C)^2", "su_r,r(C)", "A_2r-1", "h_r", "M_r(C)",
               (1, 2), build_sl_complex, lambda r: 2 * r * r, lambda r: 2 * r - 1, "sl(2r,C)"),
    CatalogRow("complex", "sp_2r(C)", "sp_2r(R)^2", "sp_2r(R)", "C_r", "h_r", "Sym_r(C)",
               (1, 2), build_sp_complex, lambda r: r * (r + 1), lambda r: r, "sp(2r,C)"),
    CatalogRow("complex", "so_2k(C), k > 2", "so_2,2k-2(R)^2", "so_2,2k-2(R)", "D_k", "h_1", "C^(2k-2)",
               (3,), lambda k: build_so_complex(2 * k), lambda k: 2 * (2 * k - 2), lambda k: k, "so(2k,C)"),
    CatalogRow("complex", "so_2k+1(C), k > 1", "so_2,2k-1(R)^2", "so_2,2k-1(R)", "B_k", "h_1", "C^(2k-1)",
               (2,), lambda k: build_so_complex(2 * k + 1), lambda k: 2 * (2 * k - 1), lambda k: k, "so(2k+1,C)"),
    CatalogRow("complex", "so_4r(C)", "so*(4r)^2", "so*(4r)", "D_2r", "h_2r-1, h_2r", "Skew_2r(C)"),
    CatalogRow("complex", "e_7(C)", "e_7(-25)^2", "e_7(-25)", "E_7", "h_7", "Herm_3(O)_C"),
    CatalogRow("cayley", "su_r,r(C)", "su_r,r(C)", "R + sl_r(C)", "C_r", "h_r", "Herm_r(C)",
               (1, 2), build_su, lambda r: r * r, lambda r: r, "su(r,r)"),
    CatalogRow("cayley", "sp_2r(R)", "sp_2r(R)", "R + sl_r(R)", "C_r", "h_r", "Sym_r(R)",
               (1, 2, 3), build_sp, lambda r: r * (r + 1) // 2, lambda r: r, "sp(2r)"),
    CatalogRow("cayley", "so_2,d(R), d > 2", "so_2,d(R)", "R + so_1,d-1(R)", "C_2", "h_2", "R^(1,d-1)",
               (3, 4), build_so2d, lambda d: d, lambda d: 2, "so(2,d)"),
    CatalogRow("cayley", "so*(4r)", "so*(4r)", "R + sl_r(H)", "C_r", "h_r", "Herm_r(H)"),
    CatalogRow("cayley", "e_7(-25)", "e_7(-25)", "R + e_6(-26)", "C_3", "h_3", "Herm_3(O)"),
    CatalogRow("split", "sl_2r(R)", "su_r,r(C)", "so_r,r(R)", "A_2r-1", "h_r", "M_r(R)",
               (1, 2, 3), build_sl_split, lambda r: r * r, lambda r: 2 * r - 1, "sl(2r)"),
    CatalogRow("split", "so_2r,2r(R)", "so*(4r)", "so_2r(C)", "D_2r", "h_2r-1, h_2r", "Skew_2r(R)"),
    CatalogRow("split", "e_7(R)", "e_7(-25)", "sl_4(H)", "E_7", "h_7", "Herm_3(O_split)"),
    CatalogRow("split", "so_p+1,q+1(R), p, q > 1", "so_2,p+q(R)", "so_1,p(R) + so_1,q(R)",
               "B_p+1 (p < q), D_p+1 (p = q)", "h_1", "R^(p,q)",
               (22, 23), build_so_split, lambda pq: sum(divmod(pq, 10)), lambda pq: pq // 10 + 1, "so(p+1,q+1)"),
    CatalogRow("nonsplit", "sl_2s(H)", "su_2s,2s(C)", "u_s,s(H)", "A_2s-1", "h_s", "M_s(H)"),
    CatalogRow("nonsplit", "u_s,s(H)", "sp_4s(R)", "sp_2s(C)", "C_s", "h_s", "Aherm_s(H)"),
    CatalogRow("nonsplit", "so_1,d+1(R)", "so_2,d(R)", "so_1,d(R)", "A_1", "h_1", "R^d",
               (1, 2, 3), build_so_1d, lambda d: d, lambda d: 1, "so(1,d+1)"),
]

FAMILIES = ("complex", "cayley", "split", "nonsplit")


def rows(family: str | None = None) -> list[CatalogRow]:
    if family is not None and family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    return [r for r in ROWS if family is None or r.family == family]


def g1_dimension(real: Realized) -> int:
    return grading(real.alg, real.h).basis(1).shape[1]


def q_p_rank(real: Realized, seed: int = 0) -> int:
    """Dimension of the centraliser in ``q_p`` of a generic element of ``q_p``."""
    qp = intersect(real.tau.antifixed(), real.theta.antifixed())
    x = qp @ np.random.default_rng(seed).normal(size=qp.shape[1])
    a = centralizer(real.alg, x[:, None], within=qp)
    for i in range(a.shape[1]):
        for j in range(a.shape[1]):
            if np.max(np.abs(real.alg.bracket(a[:, i], a[:, j]))) > 1e-8:
                raise ArithmeticError("centraliser of a generic element is not abelian")
    return a.shape[1]


@dataclass
class RowCheck:
    label: str
    param: int
    dim_g: int
    g1_dim: int
    g1_expected: int
    rank: int
    rank_expected: int
    h_fixed: bool

    @property
    def ok(self) -> bool:
        return self.h_fixed and self.g1_dim == self.g1_expected and self.rank == self.rank_expected


def check_row(row: CatalogRow, param: int) -> RowCheck:
    if row.build is None:
        raise ValueError(f"row {row.g} is not realised")
    real = row.build(param)
    h_fixed = bool(np.max(np.abs(real.tau(real.h) - real.h)) < 1e-9)
    return RowCheck(row.label, param, real.alg.dim, g1_dimension(real), row.g1_dim(param),
                    q_p_rank(real), row.rank(param), h_fixed)
