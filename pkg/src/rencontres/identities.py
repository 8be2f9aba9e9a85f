"""Exact checkers for the derangement and rencontres identities.

Each checker evaluates both sides of one identity at every requested
parameter point, reading D_n from a :class:`SequenceCache`, and returns one
:class:`IdentityReport` per point.  Both sides are always ``Fraction`` values
and are compared structurally.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import binomial, falling_factorial, factorial, format_ratio
from .sequences import ConsistencyError, SequenceCache, CacheError, default_cache, rencontres

log = logging.getLogger(__name__)

DEFAULT_N_MAX = 200
DEFAULT_R_VALUES = (0, 1, 2, 3)


@dataclass(frozen=True)
class RangeSpec:
    n_min: int = 0
    n_max: int = DEFAULT_N_MAX
    r_values: tuple[int, ...] = DEFAULT_R_VALUES

    def __post_init__(self):
        if self.n_min < 0 or self.n_min > self.n_max:
            raise ValueError(f"need 0 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]")
        if any(r < 0 for r in self.r_values):
            raise ValueError(f"r values must be nonnegative: {self.r_values}")


@dataclass(frozen=True)
class IdentityReport:
    identity_id: str
    n: int
    r: int | None
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json(self) -> str:
        return json.dumps({
            "identity_id": self.identity_id,
            "n": self.n,
            "r": self.r,
            "lhs": format_ratio(self.lhs),
            "rhs": format_ratio(self.rhs),
            "holds": self.holds,
        })


def _sign(k):
    return -1 if k % 2 else 1


def _integral(value: Fraction, what: str, strict: bool) -> Fraction:
    if strict and value.denominator != 1:
        raise ConsistencyError(f"{what} = {format_ratio(value)} is not an integer")
    return value


# Each evaluator returns (lhs, rhs) at one parameter point.

def _row_sum(c, n, r, strict):
    return Fraction(factorial(n)), Fraction(sum(rencontres(n, k, c) for k in range(n + 1)))


def _deutsch_elizalde(c, n, r, strict):
    d = c.derangement
    rhs = sum((k - 1) * binomial(n, k) * d(n - k) for k in range(2, n + 1))
    return Fraction(d(n)), Fraction(rhs)


def _weighted_rencontres(c, n, r, strict):
    rhs = sum((k - 1) * rencontres(n, k, c) for k in range(2, n + 1))
    return Fraction(c.derangement(n)), Fraction(rhs)


def _prototype(c, n, r, strict):
    d = c.derangement
    lhs = factorial(n) + sum(falling_factorial(n, k) * d(k) for k in range(2, n + 1))
    rhs = _integral(Fraction(d(n + 2), n + 1), f"D_{n + 2}/{n + 1}", strict)
    return Fraction(lhs), rhs


def _thm1(c, n, r, strict):
    d = c.derangement
    lhs = Fraction(1)
    for k in range(1, n + 1):
        lhs += Fraction(d(k), c.factorial(k))
    return lhs, Fraction(d(n + 2), c.factorial(n + 1))


def _thm2(c, n, r, strict):
    d = c.derangement
    lhs = Fraction(1)
    for k in range(1, n + 1):
        term = _integral(Fraction(d(k + 3), k + 2), f"D_{k + 3}/{k + 2}", strict)
        lhs += _sign(k) * term
    return lhs, Fraction(_sign(n) * d(n + 2))


def _thm1_general(c, n, r, strict):
    lhs = Fraction(1)
    for k in range(1, n + 1):
        lhs += Fraction(rencontres(k + r, r, c), c.factorial(k) * binomial(k + r, r))
    rhs = Fraction(rencontres(n + r + 2, r, c), c.factorial(n + 1) * binomial(n + r + 2, r))
    return lhs, rhs


def _thm2_general(c, n, r, strict):
    lhs = Fraction(1)
    for k in range(1, n + 1):
        term = Fraction(rencontres(k + r + 3, r, c), (k + 2) * binomial(k + r + 3, r))
        lhs += _sign(k) * _integral(term, f"D_{k + r + 3}({r})/({k + 2}*C({k + r + 3},{r}))", strict)
    rhs = Fraction(_sign(n) * rencontres(n + r + 2, r, c), binomial(n + r + 2, r))
    return lhs, rhs


def _d1_difference(c, n, r, strict):
    return Fraction(c.derangement(n) - rencontres(n, 1, c)), Fraction(_sign(n))


@dataclass(frozen=True)
class Checker:
    identity_id: str
    min_n: int
    uses_r: bool
    evaluate: object = field(repr=False)

    def __call__(self, spec: RangeSpec, cache: SequenceCache | None = None,
                 strict: bool = True, notices: list[str] | None = None) -> list[IdentityReport]:
        c = default_cache() if cache is None else cache
        n_min = spec.n_min
        if n_min < self.min_n:
            msg = f"{self.identity_id}: n_min raised from {n_min} to {self.min_n}"
            log.info(msg)
            if notices is not None:
                notices.append(msg)
            n_min = self.min_n
        r_values = sorted(set(spec.r_values)) if self.uses_r else [None]
        reports = []
        for n in range(n_min, spec.n_max + 1):
            for r in r_values:
                lhs, rhs = self.evaluate(c, n, r, strict)
                reports.append(IdentityReport(self.identity_id, n, r, lhs, rhs, lhs == rhs))
        return reports


identity_row_sum = Checker("row_sum", 0, False, _row_sum)
identity_deutsch_elizalde = Checker("deutsch_elizalde", 2, False, _deutsch_elizalde)
identity_weighted_rencontres = Checker("weighted_rencontres", 2, False, _weighted_rencontres)
identity_prototype = Checker("prototype", 2, False, _prototype)
identity_thm1 = Checker("thm1", 1, False, _thm1)
identity_thm2 = Checker("thm2", 1, False, _thm2)
identity_thm1_general = Checker("thm1_general", 1, True, _thm1_general)
identity_thm2_general = Checker("thm2_general", 1, True, _thm2_general)
identity_d1_difference = Checker("d1_difference", 1, False, _d1_difference)

CHECKERS = {
    chk.identity_id: chk
    for chk in (
        identity_row_sum,
        identity_deutsch_elizalde,
        identity_weighted_rencontres,
        identity_prototype,
        identity_thm1,
        identity_thm2,
        identity_thm1_general,
        identity_thm2_general,
        identity_d1_difference,
    )
}


@dataclass
class Summary:
    reports: list[IdentityReport]
    notices: list[str]

    @property
    def checked(self) -> int:
        return len(self.reports)

    @property
    def failures(self) -> list[IdentityReport]:
        return [rep for rep in self.reports if not rep.holds]

    @property
    def failed(self) -> int:
        return len(self.failures)

    def line(self) -> str:
        return f"checked={self.checked} failed={self.failed}"


def cache_is_valid(cache: SequenceCache) -> bool:
    try:
        cache.validate()
    except CacheError:
        return False
    return True


def run_all(spec: RangeSpec, cache: SequenceCache | None = None,
            identities=None, strict: bool | None = None) -> Summary:
    """Run the selected checkers (all by default) over ``spec``.

    Integrality sub-claims raise :class:`ConsistencyError` in strict mode.
    By default strict mode is on exactly when the cache passes recurrence
    validation: on corrupt data a non-integral term is an identity failure,
    not an arithmetic bug.
    """
    c = default_cache() if cache is None else cache
    if strict is None:
        strict = cache_is_valid(c)
    ids = list(CHECKERS) if identities is None else list(identities)
    unknown = [i for i in ids if i not in CHECKERS]
    if unknown:
        raise KeyError(f"unknown identities: {', '.join(unknown)}")
    notices: list[str] = []
    reports: list[IdentityReport] = []
    for ident in ids:
        reports.extend(CHECKERS[ident](spec, c, strict=strict, notices=notices))
    summary = Summary(reports, notices)
    if summary.failed:
        log.warning("%d of %d identity reports FAILED", summary.failed, summary.checked)
    return summary
