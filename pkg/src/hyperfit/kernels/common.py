"""Shared scalar helpers used by both kernel backends.

Everything in this module is plain Python + math so the numba backend can
compile the functions unchanged.
"""

import math

import numpy as np

# Guard against exact-interpolation hypotheses (K-th ordered residual zero):
# the scale is floored at a tiny positive value so thresholds and kernel
# bandwidths stay positive and weights stay finite.
SIGMA_FLOOR = 1e-12

# The half-normal quantile argument reaches 1.0 when the inlier-count
# estimate equals K; clamp just below so the quantile stays finite.
P_CLAMP = 1.0 - 1e-12


def ndtri_scalar(p: float) -> float:
    """Inverse standard normal CDF (Wichura's AS241 rational approximation).

    Accurate to ~1e-15 relative over (0, 1); the pipeline needs it inside
    compiled kernels where scipy is unavailable.
    """
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r = r - 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                    + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                  + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                    + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                  + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                + 2.05319162663775882187e0) * r + 1.0)
    else:
        r = r - 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                  + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                    + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                  + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
    val = num / den
    return -val if q < 0.0 else val


def base_sigma(rk: float, k: int, n_est: int) -> float:
    """Scale from the K-th ordered residual and an inlier-count estimate."""
    p = 0.5 * (1.0 + k / n_est)
    if p > P_CLAMP:
        p = P_CLAMP
    s = rk / ndtri_scalar(p)
    if s < SIGMA_FLOOR:
        s = SIGMA_FLOOR
    return s


def ikose_sorted(rs: np.ndarray, k: int, theta: float, max_iter: int, tol: float):
    """Iterative K-th ordered scale estimate over an ascending residual vector.

    Starts from the whole data set as the inlier-count estimate, alternates
    the count update #{r < theta*sigma} with the quantile-normalized scale,
    and stops on relative change < tol.  Returns
    (sigma, n_est, iterations, converged, ok); ok is False when the count
    falls below k (hypothesis should be discarded).
    """
    n = rs.shape[0]
    rk = rs[k - 1]
    n_est = n
    sigma = base_sigma(rk, k, n_est)
    iterations = 0
    converged = False
    ok = True
    for it in range(max_iter):
        iterations = it + 1
        n_new = int(np.searchsorted(rs, theta * sigma))
        if n_new < k:
            ok = False
            break
        sigma_new = base_sigma(rk, k, n_new)
        done = abs(sigma_new - sigma) < tol * sigma
        sigma = sigma_new
        n_est = n_new
        if done:
            converged = True
            break
    return sigma, n_est, iterations, converged, ok


def bandwidth_factor(n: int) -> float:
    """Plug-in bandwidth over scale for the Epanechnikov kernel weight.

    Uses the analytic kernel integrals: integral of the squared kernel is
    0.6 and the second moment is 0.2, giving (243*0.6 / (35*n*0.2))**0.2.
    """
    return (145.8 / (7.0 * n)) ** 0.2


def line_residual_block(params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """(m, n) orthogonal distances for m unit-normal lines over n points."""
    ph = np.column_stack([pts, np.ones(len(pts))])
    return np.abs(params @ ph.T)


def circle_residual_block(params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """(m, n) radial distances for m circles over n points."""
    dx = pts[None, :, 0] - params[:, 0, None]
    dy = pts[None, :, 1] - params[:, 1, None]
    return np.abs(np.hypot(dx, dy) - params[:, 2, None])


def givens_pairs(k: int):
    """Column pairs of the Givens parameterization, new-column pairs last."""
    pi = []
    pj = []
    for j in range(1, k):
        for i in range(j):
            pi.append(i)
            pj.append(j)
    return np.asarray(pi, dtype=np.int64), np.asarray(pj, dtype=np.int64)
