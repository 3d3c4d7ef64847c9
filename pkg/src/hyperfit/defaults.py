"""Shared default parameters of the fitting pipeline."""

# K-th ordered residual used by the iterative scale estimator.
DEFAULT_K = 10

# Inlier threshold factor: a point is an inlier of a hypothesis when its
# residual is below DEFAULT_THETA times the estimated noise scale.
DEFAULT_THETA = 2.5

# Largest possible number of model instances considered by the partitioner.
DEFAULT_C = 10

# Two final structures sharing more than this fraction of the smaller
# structure's inliers are considered duplicates.
DEFAULT_DEDUP_OVERLAP = 0.8

# Scale-estimator iteration control.
IKOSE_MAX_ITER = 100
IKOSE_TOL = 1e-6

# Relative tolerance on the normalized alignment cost when choosing the
# number of sub-hypergraphs (largest k within this factor of the minimum).
COUNT_REL_TOL = 0.02

# Default number of sampled hypotheses.
DEFAULT_HYPOTHESES = 5000
