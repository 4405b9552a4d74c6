"""Exact computational toolkit for 2-step ideals and nested Hilbert schemes:
dimension formulas, lattice certificate searches, generic samplers, and graded
tangent-space / trivial-negative-tangents certification."""

from .combinat import (
    HilbertFunction,
    LexIdeal,
    binomial,
    dim_forms,
    ek_betti,
    is_admissible,
    lex_ideal,
    macaulay_growth,
)
from .exactla import Mat, Subspace, kernel, mul_by_linear, mul_map_matrix, quotient_dim
from .forms import Form, parse_form
from .ideals import (
    GradedIdeal,
    Nesting,
    SamplerExhausted,
    betti_slice,
    hilbert_function,
    make_nesting,
    sample_few,
    sample_nested,
    sample_no_syz,
    sample_profile,
    sample_very_few,
    two_step_closure,
)
from .landscape import (
    CriticalReport,
    continuant_det,
    critical_point,
    delta,
    hessian,
    potential_tnt_area,
    theta,
)
from .profiles import (
    NestedProfile,
    SyzygyRegime,
    TwoStepProfile,
    classify,
    expected_tangent_dims,
    smoothable_dim,
    stratum_dim_bound,
)
from .search import (
    Certificate,
    Domain,
    enumerate_domain,
    find_certificates,
    minimal_sequences,
    seq_compare,
)
from .tangent import (
    TangentReport,
    derivation_classes,
    fiber_dim_initial,
    hom_graded,
    nested_hom_graded,
    nested_tangent_report,
    tangent_report,
)

__all__ = [
    "HilbertFunction", "LexIdeal", "binomial", "dim_forms", "ek_betti",
    "is_admissible", "lex_ideal", "macaulay_growth",
    "Mat", "Subspace", "kernel", "mul_by_linear", "mul_map_matrix", "quotient_dim",
    "Form", "parse_form",
    "GradedIdeal", "Nesting", "SamplerExhausted", "betti_slice", "hilbert_function",
    "make_nesting", "sample_few", "sample_nested", "sample_no_syz", "sample_profile",
    "sample_very_few", "two_step_closure",
    "CriticalReport", "continuant_det", "critical_point", "delta", "hessian",
    "potential_tnt_area", "theta",
    "NestedProfile", "SyzygyRegime", "TwoStepProfile", "classify",
    "expected_tangent_dims", "smoothable_dim", "stratum_dim_bound",
    "Certificate", "Domain", "enumerate_domain", "find_certificates",
    "minimal_sequences", "seq_compare",
    "TangentReport", "derivation_classes", "fiber_dim_initial", "hom_graded",
    "nested_hom_graded", "nested_tangent_report", "tangent_report",
]

__version__ = "1.0.0"
