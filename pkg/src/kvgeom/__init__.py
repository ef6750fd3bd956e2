"""Exact symbolic verification of Koszul-Vinberg geometry on affine charts.

The package decides structural conditions (Codazzi identity, K-V maps and
submanifolds, transversality, coisotropy) by exact polynomial identity
testing over the rationals, constructs the derived objects (brackets,
contravariant connection, Hamiltonian fields, tangent-bundle Poisson lift,
induced structures, conormal algebroids), and cross-checks every symbolic
verdict with a deterministic numeric sampling oracle.
"""

from .errors import (
    ChartMismatch,
    ClosureFailure,
    DegenerateBasis,
    EngineInconsistency,
    InvalidAlgebra,
    InvalidSubspace,
    KVError,
    NotCoisotropic,
    NotTransverseAtSample,
    ParseError,
    PoleAtPoint,
    PreconditionViolated,
    SemanticError,
    UnknownVariable,
    ZeroDenominator,
)
from .symexpr import Expr, Poly, Rational, normalize, parse_expr
from .geometry import (
    Chart,
    OneForm,
    ScalarField,
    SymBivector,
    TrilinearForm,
    VectorField,
    associator,
    bracket_h,
    codazzi_tensor,
    contravariant_D,
    differential,
    hamiltonian,
    in_E,
    is_kv,
    kv_bracket_form,
    left_sym_product,
    lie_bracket,
    lie_derivative_h,
    lie_derivative_residual,
    rank_at,
    sharp,
    special_class_check,
)
from .tangent import (
    SkewBivector,
    TangentChart,
    build_pi,
    lift_oneform,
    lift_propositions_check,
    lift_vector,
    make_tangent_chart,
    pi_sharp,
    sasaki_J,
    sasaki_nabla,
    schouten_jacobi,
)
from .structures import (
    AdaptedFrame,
    AffineMap,
    AffineSubmanifold,
    ConormalAlgebroid,
    adapted_frame,
    are_F_related,
    conormal_algebroid,
    graph_check,
    is_coisotropic,
    is_kv_map,
    is_kv_submanifold,
    is_transversal,
    leaf_openness_check,
    preimage_transversal,
    product_kv,
    pullback,
    theorem1_equivalences,
)
from .algebra import (
    AlgebraSpec,
    SubspaceSpec,
    algebra_to_kv,
    annihilator_submanifold,
    random_algebra,
    validate_algebra,
    validate_subspace,
)
from .dsl import CheckOutcome, Scenario, parse_scenario, render_report, serialize
from .engine import RunConfig, run_scenario

__version__ = "0.1.0"
