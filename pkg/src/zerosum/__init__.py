"""Zero-sum cliques in {-1,+1} and small-range edge weightings of complete graphs."""
from .detector import (
    Certificate,
    CertificateKind,
    ComponentProfile,
    Construction,
    classify_components,
    clique_weight_formula,
    find_zero_sum_clique,
    induced_forbidden_scan,
    is_triangle_free,
    is_zero_sum_k4_free,
)
from .pell import (
    Family,
    PellSolution,
    bal_clique_stream,
    ljunggren_check,
    neg_pell_stream,
    s1_members,
    s1_s2_intersection,
    s2_members,
)
from .weightings import (
    JChoice,
    SignedWeighting,
    SimpleGraph,
    ThresholdValues,
    bipartition_weighting,
    clique_negative_weighting,
    extremal_k4_free_weighting,
    imbalance_identity_check,
    threshold_values,
    weight_sum,
    wide_range_weighting,
)

__version__ = "0.1.0"
