"""Polyhedral cones with exact rational certificates.

Floating data is rounded to fractions with bounded denominators, and questions
are answered by a Phase-I simplex over :class:`fractions.Fraction` with Bland's
rule.  The sizes involved are tiny, so exactness is cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_DENOMINATOR = 10**6
CLOSED_SLACK = 1e-12


def rational(x: float) -> Fraction:
    return Fraction(float(x)).limit_denominator(MAX_DENOMINATOR)


def rational_matrix(M) -> list[list[Fraction]]:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return [[rational(v) for v in row] for row in M]


def exact_rank(M: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in M]
    if not rows:
        return 0
    ncol = len(rows[0])
    rank = 0
    for col in range(ncol):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / p
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def feasible(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[bool, list[Fraction] | None]:
    """Is there ``x >= 0`` with ``A x = b``?  Returns a witness when feasible."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return True, [Fraction(0)] * n
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        if row[-1] < 0:
            row = [-v for v in row]
        row[n + i] = Fraction(1)
        rows.append(row)
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[-1] -= row[-1]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            break
        i = best[1]
        p = rows[i][enter]
        rows[i] = [v / p for v in rows[i]]
        for r in range(m):
            if r != i and rows[r][enter] != 0:
                f = rows[r][enter]
                rows[r] = [a - f * c for a, c in zip(rows[r], rows[i])]
        f = cost[enter]
        cost = [a - f * c for a, c in zip(cost, rows[i])]
        basis[i] = enter

    if cost[-1] != 0:
        return False, None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return True, x


@dataclass
class PolyhedralCone:
    """A cone in R^d given by generators (columns) or by inequalities ``A x >= 0``."""

    generators: np.ndarray | None = None
    inequalities: np.ndarray | None = None

    def dim(self) -> int:
        if self.generators is not None:
            return self.generators.shape[0]
        return self.inequalities.shape[1]


def contains_generated(G, x, margin: float = 0.0) -> bool:
    """Exact test of ``x = G c`` with ``c >= margin``; ``margin > 0`` certifies interior.

    Generators are rounded to nearby fractions, ``x`` is taken exactly.  With
    ``margin = 0`` the closed cone is tested with the slack ``CLOSED_SLACK``
    per generator, matching :func:`in_inequalities`.
    """
    G = np.asarray(G, dtype=float)
    x = np.asarray(x, dtype=float)
    shift = x - (margin if margin > 0 else -CLOSED_SLACK) * G.sum(axis=1)
    ok, _ = feasible(rational_matrix(G), [Fraction(float(v)) for v in shift])
    return ok


def generated_is_pointed(G) -> bool:
    """No nontrivial nonnegative combination of generators vanishes."""
    G = rational_matrix(G)
    A = [row[:] for row in G] + [[Fraction(1)] * len(G[0])]
    b = [Fraction(0)] * len(G) + [Fraction(1)]
    ok, _ = feasible(A, b)
    return not ok


def generated_spans(G) -> bool:
    G = rational_matrix(G)
    return exact_rank(G) == len(G)


def inequalities_pointed(A) -> bool:
    """``{A x >= 0}`` contains no line iff ``A`` has full column rank."""
    A = rational_matrix(A)
    return exact_rank(A) == len(A[0])


def inequalities_have_interior(A) -> bool:
    """Some ``x`` satisfies ``A x >= 1`` (equivalently ``A x > 0``)."""
    A = rational_matrix(A)
    m, _n = len(A), len(A[0])
    rows = []
    for i in range(m):
        slack = [Fraction(0)] * m
        slack[i] = Fraction(-1)
        rows.append(A[i] + [-v for v in A[i]] + slack)
    ok, _ = feasible(rows, [Fraction(1)] * m)
    return ok


def generators_satisfy(G, A) -> bool:
    """Exact check that every generator satisfies every inequality."""
    G = rational_matrix(G)
    A = rational_matrix(A)
    for a in A:
        for j in range(len(G[0])):
            if sum(a[i] * G[i][j] for i in range(len(a))) < 0:
                return False
    return True


def in_inequalities(A, x, margin: float = 0.0) -> bool:
    vals = np.asarray(A) @ np.asarray(x)
    return bool(np.all(vals > margin)) if margin > 0 else bool(np.all(vals >= -CLOSED_SLACK))
