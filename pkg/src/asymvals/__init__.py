"""Exact asymptotic values of real bivariate polynomials, plus a numeric
explorer for polynomial pair maps."""

from .errors import (
    AllTrivial,
    AsymvalsError,
    ExponentDenominatorMismatch,
    FractionalPowerOfSum,
    NoBalance,
    NonRealPower,
    NotBivariate,
    NotLinearInC,
    NotUnivariate,
    ParseError,
    UnboundVariable,
    Unclassifiable,
    UnknownFixture,
    VariableClash,
)
from .explorer import (
    ComplementReport,
    GridSpec,
    PairMap,
    complement_scan,
    jacobian_det,
    preimage_count,
    sample_image,
)
from .peretz import (
    Assertion,
    AssertionList,
    AsymptoticIdentity,
    BalanceResult,
    BranchState,
    Interval,
    LIMIT_SYMBOL,
    OBound,
    PipelineReport,
    ValueSet,
    apply_substitution,
    asymptotic_values,
    build_assertions,
    build_identity,
    classify_residual,
    dominant_balance,
    first_active_level,
    normalization_check,
    o_simplify,
    run_pipeline,
    second_stage_value_map,
    value_set,
    verify_identity,
)
from .pinchuk import Fixture, list_builtins, load_builtin, pinchuk_p
from .poly import Poly, parse
from .roots import RootReport, real_roots, squarefree_part

__version__ = "0.1.0"
