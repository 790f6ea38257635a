"""Spectra, entire functional calculus and kernel formulas for small dense operators.

Every operator here is a square numpy array (real or complex).  Functions of an
operator are evaluated either by a truncated power series with an explicit tail
bound or by spectral calculus on a diagonalisable operator.  The two routes are
independent and are cross-checked in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

EPS_REL = 1e-9
EPS_ABS = 1e-12
EIG_TOL = 1e-7
GAP_TOL = 1e-6
ANGLE_TOL = 1e-7

ENTIRE_FUNCTIONS = ("exp", "cosh", "sinh", "sinhc", "C", "S")

_MAX_TERMS = 400
_CANCELLATION_LIMIT = 1e7


class SpectrumError(ArithmeticError):
    """Eigen-decomposition failed or is too ill-conditioned to trust."""


class SeriesBudgetError(ArithmeticError):
    """A power series could not reach its tolerance within the term budget."""


@dataclass(frozen=True)
class Cluster:
    center: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    clusters: tuple[Cluster, ...]
    diagonalizable: bool
    borderline: bool


def _opnorm(A: np.ndarray) -> float:
    """Frobenius norm: a cheap upper bound for the operator norm."""
    if A.size == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


def _as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("operator has non-finite entries")
    return A


def eigenvalues(A) -> np.ndarray:
    A = _as_square(A)
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(str(exc)) from exc


def cluster_values(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clustering of complex numbers at absolute distance ``tol``."""
    n = len(values)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) < tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def spectrum(A) -> Spectrum:
    """Eigenvalues with a diagonalisability verdict.

    Eigenvalues closer than ``GAP_TOL * max(1, |A|)`` are grouped; a group is
    semisimple when the nullity of ``A - c`` equals its size.  ``borderline`` is
    set when some singular value used in that decision sits within two decades
    of the rank threshold.
    """
    A = _as_square(A)
    n = A.shape[0]
    w = eigenvalues(A)
    scale = max(1.0, _opnorm(A))
    groups = cluster_values(w, GAP_TOL * scale)
    rank_tol = EIG_TOL * scale
    clusters = []
    diagonalizable = True
    borderline = False
    for g in groups:
        c = complex(np.mean(w[g]))
        s = np.linalg.svd(A - c * np.eye(n), compute_uv=False)
        nullity = int(np.sum(s < rank_tol))
        if np.any((s >= rank_tol / 100) & (s < rank_tol * 100)):
            borderline = True
        clusters.append(Cluster(c, len(g), nullity))
        if nullity != len(g):
            diagonalizable = False
    return Spectrum(w, tuple(clusters), diagonalizable, borderline)


def spectral_radius(A) -> float:
    w = eigenvalues(A)
    return float(np.max(np.abs(w))) if len(w) else 0.0


def imag_spectral_radius(A) -> float:
    """Largest absolute imaginary part of an eigenvalue."""
    w = eigenvalues(A)
    return float(np.max(np.abs(w.imag))) if len(w) else 0.0


# ---------------------------------------------------------------------------
# scalar entire functions

def _small_series(z, coeffs):
    out = np.zeros_like(z)
    for c in reversed(coeffs):
        out = out * z + c
    return out


_C_COEFFS = [(-1) ** k / math.factorial(2 * k) for k in range(8)]
_S_COEFFS = [(-1) ** k / math.factorial(2 * k + 1) for k in range(8)]


def C_fn(z):
    """C(z) = sum (-1)^k z^k / (2k)!, so cos w = C(w^2) and cosh w = C(-w^2)."""
    z = np.asarray(z, dtype=complex)
    r = np.sqrt(z)
    out = np.cos(r)
    small = np.abs(z) < 1e-3
    if np.any(small):
        out = np.where(small, _small_series(z, _C_COEFFS), out)
    return out


def S_fn(z):
    """S(z) = sum (-1)^k z^k / (2k+1)!, so sin w = w S(w^2) and sinh w = w S(-w^2)."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    r = np.sqrt(np.where(small, 1.0, z))
    out = np.sin(r) / r
    if np.any(small):
        out = np.where(small, _small_series(z, _S_COEFFS), out)
    return out


def sinhc_fn(z):
    """sinh(z)/z, extended by 1 at the origin."""
    z = np.asarray(z, dtype=complex)
    return S_fn(-z * z)


def entire_scalar(name: str, z):
    z = np.asarray(z, dtype=complex)
    if name == "exp":
        return np.exp(z)
    if name == "cosh":
        return np.cosh(z)
    if name == "sinh":
        return np.sinh(z)
    if name == "sinhc":
        return sinhc_fn(z)
    if name == "C":
        return C_fn(z)
    if name == "S":
        return S_fn(z)
    raise ValueError(f"unknown entire function {name!r}; choose from {ENTIRE_FUNCTIONS}")


# (first term as a function of z, ratio t_{k+1} / t_k as a function of (z, k))
_SERIES_TERMS = {
    "exp": (lambda z: 1.0, lambda z, k: z / (k + 1)),
    "cosh": (lambda z: 1.0, lambda z, k: z * z / ((2 * k + 1) * (2 * k + 2))),
    "sinh": (lambda z: z, lambda z, k: z * z / ((2 * k + 2) * (2 * k + 3))),
    "sinhc": (lambda z: 1.0, lambda z, k: z * z / ((2 * k + 2) * (2 * k + 3))),
    "C": (lambda z: 1.0, lambda z, k: -z / ((2 * k + 1) * (2 * k + 2))),
    "S": (lambda z: 1.0, lambda z, k: -z / ((2 * k + 2) * (2 * k + 3))),
}


def series_scalar(name: str, z: complex, terms: int = 60) -> complex:
    """Plain partial sum of the defining power series, used as a scalar oracle."""
    if name not in _SERIES_TERMS:
        raise ValueError(f"unknown entire function {name!r}")
    first, ratio = _SERIES_TERMS[name]
    z = complex(z)
    term = complex(first(z))
    total = 0j
    for k in range(terms):
        total += term
        term *= ratio(z, k)
    return total


# ---------------------------------------------------------------------------
# operator functions

def _power_series(X: np.ndarray, coeff, tol: float) -> np.ndarray:
    """Sum ``coeff(k) X^k`` until the tail bound drops below ``tol``.

    Requires ``|coeff(k+1)| <= |coeff(k)| / (k+1)``.  Once ``r/(N+2) <= 1/2``
    the tail after term ``N`` is at most ``2 |coeff(N+1)| r^(N+1)``.
    """
    n = X.shape[0]
    r = _opnorm(X)
    if 2.0 * r + 2.0 >= _MAX_TERMS:
        raise SeriesBudgetError(f"norm {r:.3g} is beyond the series term budget")
    try:
        return _sum_series(X, coeff, tol, n, r)
    except OverflowError as exc:
        raise SeriesBudgetError(f"series overflowed (norm {r:.3g})") from exc


def _sum_series(X: np.ndarray, coeff, tol: float, n: int, r: float) -> np.ndarray:
    result = coeff(0) * np.eye(n, dtype=X.dtype)
    power = np.eye(n, dtype=X.dtype)
    mass = abs(coeff(0))
    for k in range(1, _MAX_TERMS):
        power = power @ X
        c = coeff(k)
        result = result + c * power
        mass += abs(c) * r**k
        if r / (k + 2) <= 0.5:
            tail = 2.0 * abs(coeff(k + 1)) * r ** (k + 1)
            # |result| <= mass, so the norm is only needed once the tail is this small
            if tail > tol * max(1.0, mass):
                continue
            size = _opnorm(result)
            if tail <= tol * max(1.0, size):
                size = max(size, EPS_ABS)
                if mass / size > _CANCELLATION_LIMIT:
                    raise SeriesBudgetError(
                        f"series cancellation too severe (term mass {mass:.3g}, result {size:.3g})"
                    )
                return result
    raise SeriesBudgetError(f"series did not converge within {_MAX_TERMS} terms (norm {r:.3g})")


def _inv_factorial(step: int, shift: int, alternating: bool = False):
    """``k -> (+-1)^k / (step k + shift)!``, underflowing to zero rather than overflowing."""
    def coeff(k: int) -> float:
        m = step * k + shift
        c = 1.0 / math.factorial(m) if m <= 170 else math.exp(-math.lgamma(m + 1))
        return -c if alternating and k % 2 else c
    return coeff


def _expm_series(A: np.ndarray, tol: float) -> np.ndarray:
    r = _opnorm(A)
    s = max(0, int(math.ceil(math.log2(r / 0.5)))) if r > 0.5 else 0
    E = _power_series(A / 2.0**s, _inv_factorial(1, 0), tol * 1e-3)
    for _ in range(s):
        E = E @ E
    return E


def _series(name: str, A: np.ndarray, tol: float) -> np.ndarray:
    if name == "exp":
        return _expm_series(A, tol)
    if name == "cosh":
        return _power_series(A @ A, _inv_factorial(2, 0), tol)
    if name == "sinh":
        return A @ _power_series(A @ A, _inv_factorial(2, 1), tol)
    if name == "sinhc":
        return _power_series(A @ A, _inv_factorial(2, 1), tol)
    if name == "C":
        return _power_series(A, _inv_factorial(2, 0, alternating=True), tol)
    if name == "S":
        return _power_series(A, _inv_factorial(2, 1, alternating=True), tol)
    raise ValueError(f"unknown entire function {name!r}; choose from {ENTIRE_FUNCTIONS}")


def _spectral(name: str, A: np.ndarray) -> np.ndarray:
    spec = spectrum(A)
    if not spec.diagonalizable:
        raise SpectrumError("spectral calculus needs a diagonalisable operator")
    w, V = np.linalg.eig(A)
    if np.linalg.cond(V) > 1e10:
        raise SpectrumError("eigenvector basis is too ill-conditioned")
    F = (V * entire_scalar(name, w)) @ np.linalg.inv(V)
    if not np.iscomplexobj(A):
        if np.max(np.abs(F.imag), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(F.real), initial=0.0)):
            raise SpectrumError("spectral result of a real operator is not real")
        F = F.real
    return F


def apply_entire(name: str, A, method: str = "auto", tol: float = 1e-15) -> np.ndarray:
    """Evaluate the entire function ``name`` at the operator ``A``.

    ``method`` is ``"series"``, ``"spectral"`` or ``"auto"`` (series, falling
    back to spectral calculus when the series budget is exceeded).
    """
    if name not in ENTIRE_FUNCTIONS:
        raise ValueError(f"unknown entire function {name!r}; choose from {ENTIRE_FUNCTIONS}")
    A = _as_square(A)
    if method == "series":
        return _series(name, A, tol)
    if method == "spectral":
        return _spectral(name, A)
    if method == "auto":
        try:
            return _series(name, A, tol)
        except SeriesBudgetError:
            return _spectral(name, A)
    raise ValueError(f"unknown method {method!r}")


def expm(A) -> np.ndarray:
    return apply_entire("exp", A)


# ---------------------------------------------------------------------------
# subspaces and kernels

def orth(M: np.ndarray, rcond: float = EPS_REL) -> np.ndarray:
    """Orthonormal basis (columns) of the column span of ``M``."""
    M = np.asarray(M)
    if M.size == 0 or M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    return sla.orth(M, rcond=rcond)


def kernel(M, rcond: float = EPS_REL, atol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the numerical kernel of ``M``.

    A singular value counts as zero below ``max(rcond * s_max, atol)``.
    """
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0 or not np.any(M):
        return np.eye(n, dtype=M.dtype)
    _, s, vh = np.linalg.svd(M)
    tol = max(rcond * s[0], atol)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def principal_angles(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros(0)
    return sla.subspace_angles(U, V)


def same_subspace(U: np.ndarray, V: np.ndarray, tol: float = ANGLE_TOL) -> bool:
    if U.shape[1] != V.shape[1]:
        return False
    if U.shape[1] == 0:
        return True
    return bool(np.max(principal_angles(U, V)) < tol)


def _lattice_kernel(A: np.ndarray, points) -> np.ndarray:
    """Direct sum of ``ker(A^2 + p^2)`` over the given positive reals ``p``."""
    n = A.shape[0]
    A2 = A @ A
    pieces = [kernel(A2 + (p * p) * np.eye(n)) for p in points]
    if not pieces:
        return np.zeros((n, 0), dtype=A.dtype)
    return orth(np.hstack(pieces))


def _imaginary_hits(A: np.ndarray, offset: float) -> list[float]:
    """Positive values ``p = (n + offset) pi`` with ``±ip`` near the spectrum."""
    w = eigenvalues(A)
    scale = max(1.0, _opnorm(A))
    hits = set()
    for lam in w:
        if abs(lam.real) > EIG_TOL * scale:
            continue
        n = round(abs(lam.imag) / math.pi - offset)
        p = (n + offset) * math.pi
        if p > 0 and abs(abs(lam.imag) - p) < EIG_TOL * scale:
            hits.add(p)
    return sorted(hits)


def kernel_sinhc(A) -> np.ndarray:
    """``ker(sinh A / A)`` as the sum of ``ker(A^2 + n^2 pi^2)`` over ``n >= 1``."""
    A = _as_square(A)
    return _lattice_kernel(A, _imaginary_hits(A, 0.0))


def kernel_cosh(A) -> np.ndarray:
    """``ker cosh A`` as the sum of ``ker(A^2 + (n + 1/2)^2 pi^2)`` over ``n >= 0``."""
    A = _as_square(A)
    return _lattice_kernel(A, _imaginary_hits(A, 0.5))


def restrict(M: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix of ``M`` on the invariant subspace spanned by the columns of ``basis``."""
    coeffs, *_ = np.linalg.lstsq(basis, M @ basis, rcond=None)
    return coeffs


def smallest_singular_value(M: np.ndarray) -> float:
    if M.size == 0:
        return math.inf
    return float(np.linalg.svd(M, compute_uv=False)[-1])
