"""mellinops: exact operator algebras for the torus/difference correspondence,
truncated tail-series reductions, and quadrature verification harnesses."""

from .errors import (
    EvaluationFailure,
    IndexOutOfRange,
    MellinopsError,
    MixedAlgebra,
    NotSeparable,
    ParseError,
    PreconditionFailed,
    QuadratureFailure,
    SingularEvaluation,
    TruncationOverflow,
)
from .ore import Algebra, GenKind, Generator, OreOperator, add, multiply, negate, normalize
from .shiftpoly import ShiftPolynomial
from .series import (
    Axis,
    FULL_TYPE,
    INF_TYPE,
    TailSeries,
    ZERO_TYPE,
    apply_twisted,
    monomial,
    shift_cycle,
)
from .koszul import (
    CongruenceResult,
    KoszulReport,
    induced_action_congruence,
    kernel_element,
    koszul_reduce,
    product_kernel,
    solve_inf,
    solve_zero,
)
from .transform import (
    PresentationMatrix,
    apply_difference,
    inverse_mellin_op,
    mellin_op,
    mellin_presentation,
)
from .syntax import format_operator, parse
from .testfunctions import BUILTIN_NAMES, SFactor, TestFunction, apply_operator, build_builtin
from .numerics import (
    ExpansionResult,
    MomentTable,
    ResidualReport,
    asymptotic_remainder_check,
    cauchy_convolve,
    convolution_remainder,
    epsilon_commutation_check,
    haar_integral,
    haar_moment,
    moment_table,
    parameter_expansion,
    ray_mellin,
    stokes_identity_check,
    verify_commutation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
