"""Derangement and rencontres numbers.

Four independent ways of computing D_n are provided.  Only the two-term
recurrence feeds :class:`SequenceCache`; the others recompute from scratch so
that cross-checks between them stay meaningful.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exact import binomial, factorial, format_int, parse_nat, unlimited_digits

CACHE_HEADER = "rencontres-kit-cache v1"

TWO_TERM = "two-term"
LOADED = "file"


class CacheError(Exception):
    """A cache file is missing, unparsable or fails recurrence validation."""


class ConsistencyError(ArithmeticError):
    """A value that is proven to have some property does not have it."""


@dataclass(eq=False)
class SequenceCache:
    """Contiguous memoized prefix D_0, D_1, ... filled by the two-term recurrence.

    Writers extend under a lock; readers index the list directly and only ever
    see a prefix, because entries are appended one at a time.
    """

    derangements: list[int] = field(default_factory=lambda: [1, 0])
    source_method: list[str] = field(default_factory=lambda: [TWO_TERM, TWO_TERM])
    factorials: list[int] = field(default_factory=lambda: [1])
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __eq__(self, other):
        if not isinstance(other, SequenceCache):
            return NotImplemented
        return self.derangements == other.derangements

    def __len__(self):
        return len(self.derangements)

    def extend_to(self, n: int) -> None:
        if n < len(self.derangements):
            return
        with self._lock:
            d = self.derangements
            for m in range(len(d), n + 1):
                d.append((m - 1) * (d[m - 1] + d[m - 2]))
                self.source_method.append(TWO_TERM)

    def derangement(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"negative index {n}")
        if n >= len(self.derangements):
            self.extend_to(n)
        return self.derangements[n]

    def factorial(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"factorial of negative index {n}")
        f = self.factorials
        if n >= len(f):
            with self._lock:
                for m in range(len(f), n + 1):
                    f.append(f[m - 1] * m)
        return f[n]

    def validate(self) -> None:
        """Raise :class:`CacheError` unless seeds and the recurrence hold everywhere."""
        d = self.derangements
        if len(d) < 2 or d[0] != 1 or d[1] != 0:
            raise CacheError("cache must start with the seeds D_0=1, D_1=0")
        for n in range(2, len(d)):
            expected = (n - 1) * (d[n - 1] + d[n - 2])
            if d[n] != expected:
                raise CacheError(
                    f"D_{n} fails D_n = (n-1)(D_(n-1) + D_(n-2)): "
                    f"cached {format_int(d[n])}, recurrence gives {format_int(expected)}"
                )

    def tamper(self, n: int, delta: int) -> None:
        """Shift one cached entry by ``delta``; exists for mutation testing."""
        self.extend_to(n)
        self.derangements[n] += delta
        self.source_method[n] = "tampered"


_default_cache = SequenceCache()


def default_cache() -> SequenceCache:
    return _default_cache


def _cache(cache):
    return _default_cache if cache is None else cache


def derangement_two_term(n: int, cache: SequenceCache | None = None) -> int:
    """D_n from D_n = (n-1)(D_(n-1) + D_(n-2)), memoized in ``cache``."""
    return _cache(cache).derangement(n)


def derangement_alternating(n: int) -> int:
    """D_n from D_n = n D_(n-1) + (-1)^n with D_0 = 1."""
    if n < 0:
        raise ValueError(f"negative index {n}")
    d = 1
    for m in range(1, n + 1):
        d = m * d + (1 if m % 2 == 0 else -1)
    return d


def derangement_subfactorial(n: int) -> int:
    """D_n = sum_k (-1)^k n!/k!, each n!/k! an exact falling factorial."""
    if n < 0:
        raise ValueError(f"negative index {n}")
    total = 0
    ff = 1  # n!/k!, starting at k = n
    for k in range(n, -1, -1):
        total += -ff if k % 2 else ff
        ff *= k
    return total


def derangement_telescoped(n: int) -> int:
    """Evaluate the fully expanded alternating-recurrence form of D_n.

    The expansion is n(n-1)...3 * (-1)^2 + n(n-1)...4 * (-1)^3 + ... + (-1)^n:
    the term with sign (-1)^j carries the descending product n(n-1)...(j+1),
    i.e. n!/j!, for j = 2..n.  The j = 0 and j = 1 terms of the subfactorial
    sum (n! and -n!) cancel, which is why the expansion starts at j = 2.
    """
    if n < 2:
        raise ValueError(f"telescoped expansion starts at n=2, got n={n}")
    total = 0
    product = 1  # n(n-1)...(j+1), grown while j walks down from n
    for j in range(n, 1, -1):
        total += product if j % 2 == 0 else -product
        product *= j
    return total


def rencontres(n: int, r: int, cache: SequenceCache | None = None) -> int:
    """D_n(r) = C(n, r) D_(n-r); zero when r is out of range."""
    if n < 0:
        raise ValueError(f"negative index {n}")
    if r < 0 or r > n:
        return 0
    return binomial(n, r) * _cache(cache).derangement(n - r)


@dataclass(frozen=True)
class RencontresRow:
    n: int
    values: tuple[int, ...]


def rencontres_row(n: int, cache: SequenceCache | None = None) -> RencontresRow:
    values = tuple(rencontres(n, r, cache) for r in range(n + 1))
    if sum(values) != factorial(n):
        raise ConsistencyError(f"rencontres row {n} does not sum to {n}!")
    return RencontresRow(n, values)


def a_number(n: int, cache: SequenceCache | None = None) -> int:
    """Derangements of [n] with sigma(k) = j for one fixed pair k != j: D_n/(n-1)."""
    if n < 2:
        raise ValueError(f"a_number needs n >= 2, got {n}")
    q, rem = divmod(_cache(cache).derangement(n), n - 1)
    if rem:
        raise ConsistencyError(f"{n - 1} does not divide D_{n}")
    return q


def a_number_recurrence(n: int, cache: SequenceCache | None = None) -> int:
    """|A_n| = D_(n-2) + (n-2)|A_(n-1)| with |A_2| = 1."""
    if n < 2:
        raise ValueError(f"a_number_recurrence needs n >= 2, got {n}")
    c = _cache(cache)
    a = 1
    for m in range(3, n + 1):
        a = c.derangement(m - 2) + (m - 2) * a
    return a


def exp_inverse_partial(terms: int) -> Fraction:
    """Exact partial sum sum_{k=0}^{terms} (-1)^k / k!."""
    total = Fraction(0)
    for k in range(terms + 1):
        total += Fraction(-1 if k % 2 else 1, factorial(k))
    return total


def convergence_gap(n: int, extra: int = 5, cache: SequenceCache | None = None) -> Fraction:
    """|D_n/n! - sum_{k=0}^{n+extra} (-1)^k/k!| as an exact rational."""
    ratio = Fraction(_cache(cache).derangement(n), factorial(n))
    return abs(ratio - exp_inverse_partial(n + extra))


def cache_save(cache: SequenceCache, destination, limit: int | None = None) -> None:
    """Write the cache prefix (at most ``limit`` entries) atomically."""
    path = Path(destination)
    values = cache.derangements[: limit] if limit is not None else list(cache.derangements)
    with unlimited_digits():
        lines = [CACHE_HEADER, f"derangements {len(values)}"]
        lines.extend(str(v) for v in values)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text("\n".join(lines) + "\n", encoding="ascii")
    os.replace(tmp, path)


def cache_load(source, validate: bool = True) -> SequenceCache:
    """Read a cache file; with ``validate`` every entry is checked against the recurrence."""
    path = Path(source)
    try:
        text = path.read_text(encoding="ascii")
    except FileNotFoundError:
        raise CacheError(f"cache file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise CacheError(f"cannot read cache file {path}: {exc}") from exc
    if not text.endswith("\n"):
        raise CacheError(f"{path}: empty or not newline-terminated")
    lines = text[:-1].split("\n")
    if lines[0] != CACHE_HEADER:
        raise CacheError(f"{path}: bad header {lines[0]!r}")
    if len(lines) < 2 or not lines[1].startswith("derangements "):
        raise CacheError(f"{path}: missing 'derangements <count>' line")
    try:
        count = parse_nat(lines[1][len("derangements "):])
        values = [parse_nat(line) for line in lines[2:]]
    except ValueError as exc:
        raise CacheError(f"{path}: {exc}") from exc
    if len(values) != count:
        raise CacheError(f"{path}: header announces {count} values, found {len(values)}")
    if count < 2:
        raise CacheError(f"{path}: cache must hold at least D_0 and D_1")
    cache = SequenceCache(derangements=values, source_method=[LOADED] * count)
    if validate:
        cache.validate()
    return cache
