"""Point clouds with membership verdicts, for plotting outside the library.

Row ``i`` depends only on ``(seed, i)``, so clouds of different sizes share
their common prefix and any row can be regenerated on its own.
"""
from __future__ import annotations

import csv
import io

import numpy as np

from . import models, quadric, sampling, wedge

DOMAINS = ("positivity", "polar", "kms", "tube")


class UnsupportedPair(ValueError):
    """The model has no membership test for the requested domain."""


def supported(spec: models.CausalSpec, domain: str) -> bool:
    if domain not in DOMAINS:
        return False
    if spec.family == "ds":
        return True
    if spec.family == "sl2":
        return domain != "tube"
    return domain == "positivity" and spec.cone_margin is not None


def _random_rotation(st, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(st.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _tube_point(d: int, st) -> np.ndarray:
    """``B_eta R (cos t e_2 + i sin t e_0)`` with ``t`` spilling past ``(0, pi)`` on both sides.

    Half the samples rotate only ``e_2, ..., e_d`` and so stay ``tau_bar``-fixed;
    the rest rotate ``e_1`` in as well.
    """
    t = st.uniform(-0.6, np.pi + 0.6)
    z = np.zeros(d + 1, dtype=complex)
    z[0] = 1j * np.sin(t)
    z[2] = np.cos(t)
    first = 2 if st.uniform() < 0.5 else 1
    z[first:] = _random_rotation(st, d + 1 - first) @ z[first:]
    return quadric.boost(z, st.normal())


def _wedge_columns(spec, p) -> list[bool]:
    return [wedge.in_polar_wedge(spec, p), wedge.in_positivity_domain(spec, p), wedge.in_kms_domain(spec, p)]


def point_cloud(spec_name: str, domain: str, n: int, seed: int) -> tuple[list[str], list[list]]:
    """Header and rows of the cloud; raises :class:`UnsupportedPair` for combinations without a test."""
    spec = models.get_spec(spec_name)
    if not supported(spec, domain):
        raise UnsupportedPair(f"spec {spec_name!r} has no {domain!r} membership test")
    streams = sampling.streams(seed, n)
    if domain == "tube":
        d = spec.params["d"]
        header = ["index"] + [f"re_x{j}" for j in range(d + 1)] + [f"im_x{j}" for j in range(d + 1)]
        header += ["tube", "fixed_tube", "wedge_image"]
        rows = []
        for i, st in enumerate(streams):
            z = _tube_point(d, st)
            inside = bool(quadric.in_tube(z, on_quadric=True))
            fixed = inside and bool(np.max(np.abs(quadric.tau_bar(z) - z)) < quadric.QUADRIC_TOL)
            image = quadric.kappa(z)
            real_image = bool(np.max(np.abs(image.imag)) < quadric.QUADRIC_TOL)
            wedge_image = real_image and bool(quadric.in_right_wedge(image.real))
            rows.append([i, *z.real.tolist(), *z.imag.tolist(), inside, fixed, wedge_image])
        return header, rows
    if spec.family in ("ds", "sl2"):
        factors = spec.params.get("factors", 1)
        size = 3 if spec.family == "sl2" else spec.params["d"] + 1
        coords = [f"x{j}" for j in range(size)] if factors == 1 else \
            [f"x{k}_{j}" for k in range(factors) for j in range(size)]
        header = ["index", "source"] + coords + ["polar", "positivity", "kms"]
        rows = []
        for i, st in enumerate(streams):
            src = "polar" if domain == "polar" else wedge.sample_source(st)
            p = wedge.sample_point(spec, src, st)
            X = wedge.desitter_points(spec, p)
            rows.append([i, src, *X.ravel().tolist(), *_wedge_columns(spec, p)])
        return header, rows
    header = ["index", "source"] + [f"y{j}" for j in range(spec.alg.dim)] + ["positivity"]
    rows = []
    for i, st in enumerate(streams):
        src = "chart" if spec.cone_sampler is not None and st.uniform() < 0.5 else "word"
        p = wedge.sample_chart_point(spec, st) if src == "chart" else wedge.sample_word_point(spec, st)
        y = wedge.adjoint_h(spec, p)
        rows.append([i, src, *y.tolist(), wedge.in_positivity_domain(spec, p)])
    return header, rows


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()
