"""Exact computer algebra for formal groups over Hopf algebras.

Sparse graded polynomials with arbitrary-precision coefficients,
truncated power series, Hopf structure maps and their axioms, ordinary
and Hopf-coefficient formal group laws, and the gcd/direct-limit
arithmetic of coprime-pair classifying stages.
"""

from .algebra import GeneratorDecl, GradedPoly, TensorElement, Universe, UniverseError
from .fab import (
    LimitGroup,
    PairChain,
    finite_direct_limit,
    representative_exists,
    stable_homotopy_group,
    tensor_admissible,
    transition_multiplier,
    validate_limit_sequence,
    validate_stable_chain,
)
from .fgl import (
    OrdinaryFGL,
    builtin_fgl,
    extract_associativity_constraints,
    fgl_inverse,
    verify_fgl,
)
from .hopf import (
    HopfAlgebraSpec,
    antipode_at,
    builtin_hopf,
    delta_at,
    eps_at,
    flip,
    mu_merge,
    verify_hopf,
)
from .hopffgl import (
    ExtendedHopf,
    GSeries,
    HopfFGL,
    commutativity_check,
    epsilon_reduce,
    epsilon_series,
    extend_hopf,
    extract_extension_constraints,
    g_series,
    grading_check,
    remark3_conditions,
    solve_theta,
    trivial_extension,
    verify_condition1,
    verify_condition2,
    verify_g_property,
)
from .report import Failure, VerificationReport
from .series import TruncatedSeries, solve_functional_inverse

__version__ = "0.1.0"
