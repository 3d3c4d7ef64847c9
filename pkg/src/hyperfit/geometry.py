"""Geometric model kinds, minimal solvers and point-to-model residuals.

Supported kinds: 2D lines, 2D circles, planar homographies and fundamental
matrices.  Lines and circles operate on (n, 2) point arrays; the two-view
kinds operate on (n, 4) correspondence arrays laid out as x1, y1, x2, y2.

All solvers return normalized parameter vectors:

* line:        (a, b, c) with a^2 + b^2 = 1, first nonzero of (a, b) > 0
* circle:      (cx, cy, r) with r > 0
* homography:  3x3 matrix flattened row-major, Frobenius norm 1,
               last nonzero entry > 0
* fundamental: as homography, additionally rank <= 2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateSubset

# A minimal subset is degenerate when the design matrix loses the rank needed
# for a unique solution: second-smallest singular value ratio below this.
SV_RATIO_TOL = 1e-8

# Homogeneous scale below this (relative) maps to the plane at infinity; the
# residual for such points is reported as +inf and they count as non-inliers.
_W_TOL = 1e-12


class ModelKind(Enum):
    LINE2D = "line"
    CIRCLE2D = "circle"
    HOMOGRAPHY = "homography"
    FUNDAMENTAL = "fundamental"

    @property
    def minimal_subset_size(self) -> int:
        return _MINIMAL_SIZE[self]

    @property
    def param_dim(self) -> int:
        return _PARAM_DIM[self]

    @property
    def point_dim(self) -> int:
        return 4 if self in (ModelKind.HOMOGRAPHY, ModelKind.FUNDAMENTAL) else 2


_MINIMAL_SIZE = {
    ModelKind.LINE2D: 2,
    ModelKind.CIRCLE2D: 3,
    ModelKind.HOMOGRAPHY: 4,
    ModelKind.FUNDAMENTAL: 8,
}

_PARAM_DIM = {
    ModelKind.LINE2D: 3,
    ModelKind.CIRCLE2D: 3,
    ModelKind.HOMOGRAPHY: 9,
    ModelKind.FUNDAMENTAL: 9,
}


@dataclass(frozen=True)
class ModelHypothesis:
    """A model kind plus its normalized parameter vector."""

    kind: ModelKind
    params: np.ndarray = field(repr=False)

    def matrix(self) -> np.ndarray:
        """3x3 matrix view for the two-view kinds."""
        return self.params.reshape(3, 3)


def normalize_params(kind: ModelKind, params: np.ndarray) -> np.ndarray:
    """Bring a raw parameter vector to the canonical form documented above."""
    p = np.asarray(params, dtype=np.float64).copy()
    if p.shape != (kind.param_dim,):
        raise ValueError(f"expected {kind.param_dim} parameters, got {p.shape}")
    if kind is ModelKind.LINE2D:
        norm = float(np.hypot(p[0], p[1]))
        if norm == 0.0:
            raise ValueError("line normal is zero")
        p /= norm
        lead = p[0] if p[0] != 0.0 else p[1]
        if lead < 0.0:
            p = -p
    elif kind is ModelKind.CIRCLE2D:
        p[2] = abs(p[2])
        if p[2] == 0.0:
            raise ValueError("circle radius is zero")
    else:
        norm = float(np.linalg.norm(p))
        if norm == 0.0:
            raise ValueError("matrix parameters are zero")
        p /= norm
        nonzero = np.nonzero(p)[0]
        if p[nonzero[-1]] < 0.0:
            p = -p
    return p


def _check_points(kind: ModelKind, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != kind.point_dim:
        raise ValueError(
            f"{kind.value} expects (n, {kind.point_dim}) points, got {pts.shape}"
        )
    return pts


# ---------------------------------------------------------------------------
# minimal solvers


def fit_minimal(kind: ModelKind, subset: np.ndarray) -> ModelHypothesis:
    """Fit a model to exactly ``kind.minimal_subset_size`` points.

    Raises DegenerateSubset when the subset does not determine a unique
    model (coincident points, collinear triples for circles/homographies,
    rank-deficient design for fundamental matrices).
    """
    pts = _check_points(kind, subset)
    if pts.shape[0] != kind.minimal_subset_size:
        raise ValueError(
            f"{kind.value} minimal fit needs {kind.minimal_subset_size} points, "
            f"got {pts.shape[0]}"
        )
    return _FIT[kind](pts)


def refit_least_squares(kind: ModelKind, inliers: np.ndarray) -> ModelHypothesis:
    """Least-squares refit over an inlier set (>= minimal subset size).

    Lines use the orthogonal-distance optimum (centroid + scatter direction);
    circles use the algebraic (Kasa) fit; the two-view kinds solve the full
    normalized DLT system over all rows.
    """
    pts = _check_points(kind, inliers)
    if pts.shape[0] < kind.minimal_subset_size:
        raise ValueError(
            f"{kind.value} refit needs at least {kind.minimal_subset_size} points"
        )
    return _REFIT[kind](pts)


def _fit_line(pts: np.ndarray) -> ModelHypothesis:
    a = np.column_stack([pts, np.ones(len(pts))])
    _, s, vt = np.linalg.svd(a)
    if s[1] < SV_RATIO_TOL * s[0] or s[0] == 0.0:
        raise DegenerateSubset("coincident points")
    return ModelHypothesis(ModelKind.LINE2D, normalize_params(ModelKind.LINE2D, vt[-1]))


def _refit_line(pts: np.ndarray) -> ModelHypothesis:
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    if s[0] == 0.0:
        raise DegenerateSubset("coincident points")
    normal = vt[-1]  # direction of least scatter
    c = -float(normal @ centroid)
    return ModelHypothesis(
        ModelKind.LINE2D,
        normalize_params(ModelKind.LINE2D, np.array([normal[0], normal[1], c])),
    )


def _solve_circle(design: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    _, s, _ = np.linalg.svd(design, full_matrices=False)
    if s[-1] < SV_RATIO_TOL * s[0] or s[0] == 0.0:
        raise DegenerateSubset("collinear or coincident points")
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    cx, cy, t = sol
    r2 = t + cx * cx + cy * cy
    if r2 <= 0.0:
        raise DegenerateSubset("no real circle through subset")
    return np.array([cx, cy, np.sqrt(r2)])


def _fit_circle(pts: np.ndarray) -> ModelHypothesis:
    x, y = pts[:, 0], pts[:, 1]
    design = np.column_stack([2.0 * x, 2.0 * y, np.ones(len(pts))])
    params = _solve_circle(design, x * x + y * y)
    return ModelHypothesis(ModelKind.CIRCLE2D, normalize_params(ModelKind.CIRCLE2D, params))


_refit_circle = _fit_circle  # Kasa design is identical for n >= 3


def _hartley_transform(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Isotropic normalization: centroid to origin, mean distance sqrt(2)."""
    centroid = pts.mean(axis=0)
    dist = np.linalg.norm(pts - centroid, axis=1).mean()
    if dist < 1e-12:
        raise DegenerateSubset("coincident points")
    scale = np.sqrt(2.0) / dist
    t = np.array(
        [
            [scale, 0.0, -scale * centroid[0]],
            [0.0, scale, -scale * centroid[1]],
            [0.0, 0.0, 1.0],
        ]
    )
    return t, (pts - centroid) * scale


def _fit_homography_dlt(corr: np.ndarray) -> ModelHypothesis:
    t1, p1 = _hartley_transform(corr[:, :2])
    t2, p2 = _hartley_transform(corr[:, 2:])
    n = len(corr)
    a = np.zeros((2 * n, 9))
    x, y = p1[:, 0], p1[:, 1]
    u, v = p2[:, 0], p2[:, 1]
    a[0::2, 3:6] = -np.column_stack([x, y, np.ones(n)])
    a[0::2, 6:9] = np.column_stack([v * x, v * y, v])
    a[1::2, 0:3] = np.column_stack([x, y, np.ones(n)])
    a[1::2, 6:9] = -np.column_stack([u * x, u * y, u])
    _, s, vt = np.linalg.svd(a)
    # unique solution needs rank 8: check the 8th singular value
    if s[7] < SV_RATIO_TOL * s[0] or s[0] == 0.0:
        raise DegenerateSubset("collinear or coincident correspondences")
    h = np.linalg.inv(t2) @ vt[-1].reshape(3, 3) @ t1
    return ModelHypothesis(
        ModelKind.HOMOGRAPHY, normalize_params(ModelKind.HOMOGRAPHY, h.ravel())
    )


def _fit_fundamental_dlt(corr: np.ndarray) -> ModelHypothesis:
    t1, p1 = _hartley_transform(corr[:, :2])
    t2, p2 = _hartley_transform(corr[:, 2:])
    x, y = p1[:, 0], p1[:, 1]
    u, v = p2[:, 0], p2[:, 1]
    ones = np.ones(len(corr))
    a = np.column_stack([u * x, u * y, u, v * x, v * y, v, x, y, ones])
    _, s, vt = np.linalg.svd(a)
    if s[7] < SV_RATIO_TOL * s[0] or s[0] == 0.0:
        raise DegenerateSubset("rank-deficient correspondence design")
    f = vt[-1].reshape(3, 3)
    # enforce rank 2 by zeroing the smallest singular value
    uf, sf, vft = np.linalg.svd(f)
    sf[2] = 0.0
    f = uf @ np.diag(sf) @ vft
    f = t2.T @ f @ t1
    return ModelHypothesis(
        ModelKind.FUNDAMENTAL, normalize_params(ModelKind.FUNDAMENTAL, f.ravel())
    )


_FIT = {
    ModelKind.LINE2D: _fit_line,
    ModelKind.CIRCLE2D: _fit_circle,
    ModelKind.HOMOGRAPHY: _fit_homography_dlt,
    ModelKind.FUNDAMENTAL: _fit_fundamental_dlt,
}

_REFIT = {
    ModelKind.LINE2D: _refit_line,
    ModelKind.CIRCLE2D: _refit_circle,
    ModelKind.HOMOGRAPHY: _fit_homography_dlt,
    ModelKind.FUNDAMENTAL: _fit_fundamental_dlt,
}


# ---------------------------------------------------------------------------
# residuals


def residuals(h: ModelHypothesis, pts: np.ndarray) -> np.ndarray:
    """Residual of every point against ``h``; non-finite maps report +inf.

    Line: orthogonal distance.  Circle: radial distance.  Homography:
    symmetric transfer error sqrt((forward^2 + backward^2) / 2).
    Fundamental: Sampson distance.
    """
    pts = _check_points(h.kind, pts)
    if h.kind is ModelKind.LINE2D:
        a, b, c = h.params
        return np.abs(pts[:, 0] * a + pts[:, 1] * b + c)
    if h.kind is ModelKind.CIRCLE2D:
        cx, cy, r = h.params
        return np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - r)
    if h.kind is ModelKind.HOMOGRAPHY:
        m = h.matrix()
        try:
            minv = np.linalg.inv(m)
        except np.linalg.LinAlgError:
            return np.full(len(pts), np.inf)
        return homography_transfer_residuals(m, minv, pts)
    return sampson_residuals(h.matrix(), pts)


def residual(h: ModelHypothesis, p: np.ndarray) -> float:
    """Residual of a single point (row vector of the kind's point dimension)."""
    return float(residuals(h, np.asarray(p, dtype=np.float64)[None, :])[0])


def homography_transfer_residuals(
    m: np.ndarray, minv: np.ndarray, corr: np.ndarray
) -> np.ndarray:
    x1 = np.column_stack([corr[:, :2], np.ones(len(corr))])
    x2 = np.column_stack([corr[:, 2:], np.ones(len(corr))])
    out = np.empty(len(corr))

    fwd = x1 @ m.T
    bwd = x2 @ minv.T
    wf = fwd[:, 2]
    wb = bwd[:, 2]
    bad = (np.abs(wf) <= _W_TOL) | (np.abs(wb) <= _W_TOL)
    ok = ~bad
    df = np.sum((fwd[ok, :2] / wf[ok, None] - corr[ok, 2:]) ** 2, axis=1)
    db = np.sum((bwd[ok, :2] / wb[ok, None] - corr[ok, :2]) ** 2, axis=1)
    out[ok] = np.sqrt(0.5 * (df + db))
    out[bad] = np.inf
    return out


def sampson_residuals(f: np.ndarray, corr: np.ndarray) -> np.ndarray:
    x1 = np.column_stack([corr[:, :2], np.ones(len(corr))])
    x2 = np.column_stack([corr[:, 2:], np.ones(len(corr))])
    fx1 = x1 @ f.T
    ftx2 = x2 @ f
    num = np.abs(np.sum(x2 * fx1, axis=1))
    den2 = fx1[:, 0] ** 2 + fx1[:, 1] ** 2 + ftx2[:, 0] ** 2 + ftx2[:, 1] ** 2
    out = np.full(len(corr), np.inf)
    ok = den2 > 0.0
    out[ok] = num[ok] / np.sqrt(den2[ok])
    return out
