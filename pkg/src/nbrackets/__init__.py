"""Exact symbolic verification of n-ary bracket structures.

Polynomial coefficient rings over the rationals, a graded exterior
algebra on a trivialized frame, structure-constant brackets with
exhaustive axiom checkers, the graded bracket extension engine, Nambu
tensors with their function and 1-form brackets, fibre-wise linear
structures, and the paired algebroid checks, all with explicit witnesses
on failure.
"""

__version__ = "0.1.0"

from .exterior import (
    Form,
    Frame,
    MultiVector,
    bundle_frame,
    contract,
    cotangent_frame,
    de_rham_d,
    differential,
    dual_bundle_frame,
    eval_multivector,
    lie_derivative,
    pairing,
    tangent_frame,
    vf_bracket,
    wedge,
)
from .extension import (
    AnchorMap,
    GradedBracket,
    check_filippov_algebroid,
    check_gerstenhaber_axioms,
    extend_bracket,
    restrict_to_algebroid,
    zero_anchor,
)
from .filippov import (
    StructureConstants,
    check_alternating,
    check_fundamental_identity,
    check_graded_fi,
    sc_bracket,
)
from .linear_nambu import (
    LinearNambuData,
    check_linear,
    induce_dual_anchor,
    induce_dual_bracket,
    linear_function,
    verify_dual_algebroid,
)
from .nambu import (
    InternalConsistencyError,
    NambuTensor,
    check_d_compatibility,
    check_form_bracket_properties,
    check_nambu_poisson,
    form_bracket,
    hamiltonian_vf,
    nambu_bracket,
    p_sharp,
    volume_tensor,
)
from .bialgebroid import (
    AlgebroidData,
    BialgebroidData,
    BundleMorphism,
    algebroid_d,
    bialgebroid_from_tensor,
    check_anchor_morphism,
    check_morphism,
    check_strong_compatibility,
    check_weak,
    induce_base_nambu,
    tangent_algebroid,
)
from .poly import Poly, parse_poly, format_poly
from .report import CheckItem, VerificationReport, VerificationError, Witness
