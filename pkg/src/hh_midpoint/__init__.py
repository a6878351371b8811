"""Check the corrected midpoint rule and its convexity-based error bounds.

The main entry points are:

* :py:func:`parse` and :py:func:`eval_jet`, to build integrands and their
  derivatives
* :py:func:`check_identity`, which evaluates the rule, its exact remainder,
  and a reference integral
* :py:func:`best_bound` and :py:func:`certify`, for the error bounds and their
  convexity hypotheses
* :py:func:`check_corpus` and :py:func:`run_check`, which do all of the above
  for every entry of a corpus

Use :py:class:`Config` to set tolerances, and :py:func:`load_corpus` to read a
corpus file.
"""

from .bounds import (
    BoundReport,
    EndpointDerivs,
    HolderExponents,
    Theorem,
    all_bounds,
    best_bound,
    bound_convex,
    bound_holder,
    bound_power_mean,
)
from .config import Config, Corpus, CorpusEntry, load_corpus
from .convexity import (
    ConvexityCertificate,
    ConvexityTarget,
    certify,
    certify_function,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    HypothesisWarning,
    NumericError,
    OrderError,
    ParseError,
)
from .expr import Expression, Jet, derivatives, eval_jet, evaluate, parse, to_source
from .harness import (
    SanityOutcome,
    check_corpus,
    run_check,
    run_hh_sanity,
    run_table,
    tabulate_corpus,
)
from .kernel import (
    RuleOrder,
    kernel_integral,
    kernel_l1_norm,
    kernel_table,
    kernel_value,
    kernel_values,
)
from .messages import Message
from .quadrature import (
    Interval,
    QuadratureResult,
    check_identity,
    corrected_midpoint,
    reference_integral,
    remainder_abs_integral,
    remainder_integral,
)
from .report import CheckReport, HypothesisStatus, ReportRow, TableRow

# Keep this list sorted
__all__ = [
    "BoundReport",
    "CheckReport",
    "Config",
    "ConfigError",
    "ConvergenceError",
    "ConvexityCertificate",
    "ConvexityTarget",
    "Corpus",
    "CorpusEntry",
    "DomainError",
    "EndpointDerivs",
    "Expression",
    "HolderExponents",
    "HypothesisStatus",
    "HypothesisWarning",
    "Interval",
    "Jet",
    "Message",
    "NumericError",
    "OrderError",
    "ParseError",
    "QuadratureResult",
    "ReportRow",
    "RuleOrder",
    "SanityOutcome",
    "TableRow",
    "Theorem",
    "all_bounds",
    "best_bound",
    "bound_convex",
    "bound_holder",
    "bound_power_mean",
    "certify",
    "certify_function",
    "check_corpus",
    "check_identity",
    "corrected_midpoint",
    "derivatives",
    "eval_jet",
    "evaluate",
    "kernel_integral",
    "kernel_l1_norm",
    "kernel_table",
    "kernel_value",
    "kernel_values",
    "load_corpus",
    "parse",
    "reference_integral",
    "remainder_abs_integral",
    "remainder_integral",
    "run_check",
    "run_hh_sanity",
    "run_table",
    "tabulate_corpus",
    "to_source",
]
