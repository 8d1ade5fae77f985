"""Vietoris-Rips complexes of glued metric spaces: constructions, collapse certificates, homology."""
from .collapse import (
    CollapseCertificate,
    CollapseStep,
    apply_collapse,
    dismantle,
    free_face_check,
    gen39_sequence,
    greedy_collapse,
    is_dominated,
    lemma39_sequence,
    twoplusplus_sequence,
)
from .errors import *  # noqa: F401,F403
from .gluing import (
    SplitSpace,
    cech_condition_r,
    check_graph_gluing,
    check_unique_max_hypothesis,
    maximal_valid_complex,
    maximal_valid_sets_vr,
    new_split_space,
    shortest_cycle_through,
    split_from_gluing,
    verify_gluing_equivalence,
)
from .homology import betti, diagrams_equal, persistence, predicted_diagram, vr_persistence
from .metric import (
    FiniteMetricSpace,
    GluingSpec,
    MetricGraph,
    glue_metric,
    graph_metric,
    new_finite_metric,
    sample_circle,
    sample_line,
    sup_product_subset,
    wedge_metric,
)
from .replay import replay
from .simplicial import (
    SimplicialComplex,
    cech_ambient,
    clique_complex,
    critical_scales,
    union_complexes,
    vietoris_rips,
    vr_filtration,
    wedge_complexes,
)

__version__ = "0.1.0"
