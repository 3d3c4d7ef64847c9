"""Pure-numpy kernel implementations (fallback backend).

Mirrors kernels.jit operation for operation; the two backends are compared
in tests and in benchmarks/compare_backends.py.
"""

import numpy as np

from . import common
from ..geometry import homography_transfer_residuals, sampson_residuals

NAME = "numpy"


def expand_block(R, k, theta, max_iter, tol):
    """Scale, inlier mask and kernel-density weight for a block of hypotheses.

    R is the (m, n) residual matrix (rows: hypotheses).  Returns
    (sigma, n_inliers, iterations, converged, ok, weight, mask) where mask is
    the (m, n) inlier incidence (uint8) and ok marks hypotheses whose scale
    estimate survived (count never fell below k).
    """
    m, n = R.shape
    sigma = np.zeros(m)
    ninl = np.zeros(m, dtype=np.int64)
    iters = np.zeros(m, dtype=np.int64)
    conv = np.zeros(m, dtype=np.uint8)
    ok = np.zeros(m, dtype=np.uint8)
    weight = np.zeros(m)
    mask = np.zeros((m, n), dtype=np.uint8)

    rs_block = np.sort(R, axis=1)
    bw = common.bandwidth_factor(n)
    for r in range(m):
        sig, n_est, it, cv, good = common.ikose_sorted(
            rs_block[r], k, theta, max_iter, tol
        )
        sigma[r] = sig
        ninl[r] = n_est
        iters[r] = it
        conv[r] = 1 if cv else 0
        if not good:
            continue
        ok[r] = 1
        row = R[r]
        mask[r] = row < theta * sig
        h = bw * sig
        inside = row[row <= h]  # residuals are nonnegative; +inf falls outside
        contrib = 1.0 - (inside / h) ** 2
        weight[r] = 0.75 * contrib.sum() / (n * sig * h)
    return sigma, ninl, iters, conv, ok, weight, mask


def homography_residual_block(mats, invs, inv_ok, corr):
    """(m, n) symmetric transfer errors; rows with singular inverses are +inf."""
    m = mats.shape[0]
    out = np.empty((m, corr.shape[0]))
    for r in range(m):
        if inv_ok[r]:
            out[r] = homography_transfer_residuals(mats[r], invs[r], corr)
        else:
            out[r] = np.inf
    return out


def fundamental_residual_block(mats, corr):
    """(m, n) Sampson distances."""
    m = mats.shape[0]
    out = np.empty((m, corr.shape[0]))
    for r in range(m):
        out[r] = sampson_residuals(mats[r], corr)
    return out


# ---------------------------------------------------------------------------
# eigenvector rotation alignment


def _apply_rotation(Y, pi, pj, theta):
    Z = Y.copy()
    for a in range(theta.shape[0]):
        c = np.cos(theta[a])
        s = np.sin(theta[a])
        zi = Z[:, pi[a]].copy()
        zj = Z[:, pj[a]].copy()
        Z[:, pi[a]] = c * zi - s * zj
        Z[:, pj[a]] = s * zi + c * zj
    return Z


def _cost(Z):
    # per-vertex alignment cost: row norm over squared row max; zero rows
    # count as perfectly aligned
    sq = Z * Z
    m2 = sq.max(axis=1)
    s = sq.sum(axis=1)
    safe = m2 > 0.0
    out = np.ones(Z.shape[0])
    out[safe] = s[safe] / m2[safe]
    return out.sum() / Z.shape[0]


def _grad(Y, pi, pj, theta, Z):
    n, k = Y.shape
    K = theta.shape[0]
    # suffix Givens products S[a] = G_{a+1} ... G_{K-1}
    S = np.empty((K, k, k))
    S[K - 1] = np.eye(k)
    for a in range(K - 2, -1, -1):
        g = np.eye(k)
        c = np.cos(theta[a + 1])
        s = np.sin(theta[a + 1])
        i, j = pi[a + 1], pj[a + 1]
        g[i, i] = c
        g[i, j] = s
        g[j, i] = -s
        g[j, j] = c
        S[a] = g @ S[a + 1]

    sq = Z * Z
    mi = sq.argmax(axis=1)
    mv = Z[np.arange(n), mi]
    m2 = mv * mv
    q = sq.sum(axis=1)
    rows = m2 > 0.0

    grad = np.zeros(K)
    V = Y.copy()  # prefix Y @ G_0 ... G_{a-1}
    for a in range(K):
        i, j = pi[a], pj[a]
        c = np.cos(theta[a])
        s = np.sin(theta[a])
        w0 = -s * S[a, i] + c * S[a, j]
        w1 = -c * S[a, i] - s * S[a, j]
        dot = V[:, i] * (Z @ w0) + V[:, j] * (Z @ w1)
        am = V[:, i] * w0[mi] + V[:, j] * w1[mi]
        terms = 2.0 * dot[rows] / m2[rows] - 2.0 * q[rows] * am[rows] / (m2[rows] * mv[rows])
        grad[a] = terms.sum() / n
        vi = V[:, i].copy()
        vj = V[:, j].copy()
        V[:, i] = c * vi - s * vj
        V[:, j] = s * vi + c * vj
    return grad


def evrot(Y, theta0, max_iter=200, step0=0.1, conv_tol=1e-7):
    """Gradient descent over Givens angles minimizing the alignment cost.

    Works on the per-vertex cost (total cost / n); the step halves on
    non-descent and recovers toward step0 after accepted steps.  Returns
    (total_cost, angles, rotated_embedding).
    """
    n, k = Y.shape
    pi, pj = common.givens_pairs(k)
    theta = np.asarray(theta0, dtype=np.float64).copy()
    if theta.shape[0] != pi.shape[0]:
        raise ValueError("angle vector does not match k*(k-1)/2 pairs")
    if k == 1 or pi.shape[0] == 0:
        return _cost(Y) * n, theta, Y.copy()

    Z = _apply_rotation(Y, pi, pj, theta)
    e = _cost(Z)
    step = step0
    for _ in range(max_iter):
        g = _grad(Y, pi, pj, theta, Z)
        if not np.any(g):
            break
        e_new = e
        accepted = False
        while step > 1e-10:
            theta_try = theta - step * g
            Z_try = _apply_rotation(Y, pi, pj, theta_try)
            e_try = _cost(Z_try)
            if e_try < e:
                theta = theta_try
                Z = Z_try
                e_new = e_try
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        de = e - e_new
        e = e_new
        if de < conv_tol:
            break
        step = min(step * 2.0, step0)
    return e * n, theta, Z
