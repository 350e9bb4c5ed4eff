"""Exact and certified tail probabilities of normalized Rademacher sums.

The package computes tails of equal-weight and two-atom weight vectors as
exact dyadic rationals, encloses the standard normal tail in certified
rational intervals, and combines the two into finite certificates that a
two-atom candidate strictly beats every equal-weight tail at its threshold.
"""

from .exactnum import (
    CertInterval,
    Ordering,
    QRoot,
    Rat,
    RootExpr,
    interval_refine,
    qroot_cmp,
    qroot_interval,
    rational_sqrt,
    rootexpr_cmp,
    sqrt_bounds,
)
from .gaussian import (
    BEConfig,
    BE_CONSTANT,
    DEFAULT_WIDTH,
    EnclosureWidthError,
    NoFiniteThresholdError,
    NormalTailEnclosure,
    be_band,
    be_threshold,
    normal_tail_bounds,
)
from .scan import Certificate, ScanResult, scan_exact_small, scan_max_equal
from .search import (
    CandidateReport,
    NoAdmissibleRootError,
    Quadruple,
    default_x_grid,
    family_max_x,
    heuristic_search,
    series_quadruple,
    solve_t,
)
from .tails import (
    EqualWeight,
    NotRepresentableError,
    TailValue,
    TwoAtom,
    atom_mass_equal,
    brute_force_tail,
    flip_threshold,
    series_tail_value,
    tail_equal,
    tail_two_atom,
    tail_two_atom_decomp,
)
from .verify import (
    BaseCaseReport,
    CheckLessResult,
    CheckLessStatus,
    Verdict,
    VerificationReport,
    base_case_check,
    check_less,
    verify_counterexample,
)

__version__ = "0.1.0"

__all__ = [
    "BEConfig",
    "BE_CONSTANT",
    "BaseCaseReport",
    "CandidateReport",
    "CertInterval",
    "Certificate",
    "CheckLessResult",
    "CheckLessStatus",
    "DEFAULT_WIDTH",
    "EnclosureWidthError",
    "EqualWeight",
    "NoAdmissibleRootError",
    "NoFiniteThresholdError",
    "NormalTailEnclosure",
    "NotRepresentableError",
    "Ordering",
    "QRoot",
    "Quadruple",
    "Rat",
    "RootExpr",
    "ScanResult",
    "TailValue",
    "TwoAtom",
    "Verdict",
    "VerificationReport",
    "atom_mass_equal",
    "base_case_check",
    "be_band",
    "be_threshold",
    "brute_force_tail",
    "check_less",
    "default_x_grid",
    "family_max_x",
    "flip_threshold",
    "heuristic_search",
    "interval_refine",
    "normal_tail_bounds",
    "qroot_cmp",
    "qroot_interval",
    "rational_sqrt",
    "rootexpr_cmp",
    "scan_exact_small",
    "scan_max_equal",
    "series_quadruple",
    "series_tail_value",
    "solve_t",
    "sqrt_bounds",
    "tail_equal",
    "tail_two_atom",
    "tail_two_atom_decomp",
    "verify_counterexample",
]
