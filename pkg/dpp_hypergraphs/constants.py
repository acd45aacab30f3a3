"""Numerical tolerances, guards and format versions shared across the package."""

# Rows of V must have unit Euclidean norm within this tolerance.
ROW_NORM_TOLERANCE = 1e-9

# Absolute tolerance on |L - L^T| for a kernel to count as symmetric.
SYMMETRY_TOLERANCE = 1e-12

# Eigenvalues of a kernel built from a valid config may undershoot min(alpha) by this much.
EIGENVALUE_TOLERANCE = 1e-9

# Norms below this are treated as zero (projection fallback, spectral row normalization).
ZERO_NORM_THRESHOLD = 1e-12

# Total residual squared mass below which the sampler's deflation step is considered degenerate.
DEFLATION_MASS_THRESHOLD = 1e-12

# Enumerating 2^n subsets is only allowed up to this many nodes.
BRUTE_FORCE_MAX_NODES = 20

# Exhaustive sign search for the kernel loss enumerates 2^(n-1) sign vectors.
EXHAUSTIVE_SIGN_SEARCH_MAX_NODES = 15

# Label counts up to this size are matched by exhaustive search over matchings; larger use the Hungarian method.
EXHAUSTIVE_LABEL_MATCHING_MAX_CLUSTERS = 12

MODEL_FILE_FORMAT_VERSION = "v1.0"
REPORT_SCHEMA_VERSION = "v1.0"
