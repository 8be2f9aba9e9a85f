"""Derangement and rencontres numbers in exact arithmetic, with identity checks."""

from .exact import ExactRatio, binomial, factorial
from .identities import CHECKERS, IdentityReport, RangeSpec, run_all
from .kernels import BACKEND
from .oracle import (
    FixedPointCensus,
    HorizonExceeded,
    Permutation,
    brute_derangement_count,
    count_fixed_points,
    enumerate_census,
    sample_derangement,
)
from .sequences import (
    CacheError,
    ConsistencyError,
    RencontresRow,
    SequenceCache,
    a_number,
    a_number_recurrence,
    cache_load,
    cache_save,
    derangement_alternating,
    derangement_subfactorial,
    derangement_telescoped,
    derangement_two_term,
    rencontres,
    rencontres_row,
)

__version__ = "0.1.0"
