"""Probabilistic metric spaces on finite carriers.

Distribution-function algebra with the Levy metric, triangle functions,
space axioms and strong-topology queries, the probabilistic
Pompeiu-Hausdorff distance machinery on point sets, simple random normed
spaces, and a batch-verification CLI.
"""

from .distfn import (
    EPSILON_INF,
    EPSILON_ZERO,
    DistributionFn,
    RawStepData,
    inf_family,
    left_regularize,
    leq,
    levy_distance,
    make_step,
    pointwise_equal,
    probe_points,
    sup_family,
    unit_step,
    weak_converges,
)
from .triangle import (
    CONVMIN,
    KINDS,
    MIN,
    PROD,
    TriangleFn,
    W,
    apply,
    check_identity_commutativity_monotonicity,
    check_lukasiewicz_bound,
    check_serstnev_inequality,
    check_sup_continuous,
)
from .pmspace import (
    PMSpace,
    build,
    converges_to,
    from_metric,
    from_samples,
    is_cauchy_prefix,
    neighborhood,
)
from .hausdorff import (
    PointSet,
    check_dilation_closure_bound,
    check_hausdorff_axioms,
    check_point_set_inequalities,
    closure_via_dilations,
    diameter,
    dilate,
    dist_point_set,
    excess,
    extract_cauchy_chain,
    finite_cover,
    hausdorff_distance,
    limit_set,
    point_set,
    proximity_witnesses,
)
from .rnspace import (
    RNSpace,
    check_convexity_preservation,
    check_rn_axioms,
    induced_metric,
    nu,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
