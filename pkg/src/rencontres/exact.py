"""Exact integer and rational primitives.

Integers are plain Python ``int`` (arbitrary precision).  Rationals are
``fractions.Fraction``, which already normalizes at construction: lowest
terms, positive denominator, zero stored as ``0/1``.
"""

from __future__ import annotations

import re
import sys
import threading
from contextlib import contextmanager
from fractions import Fraction

ExactRatio = Fraction

_INT_RE = re.compile(r"-?(0|[1-9][0-9]*)\Z")
_NAT_RE = re.compile(r"(0|[1-9][0-9]*)\Z")

_fact_lock = threading.Lock()
_fact_memo = [1]


def factorial(n: int) -> int:
    """Return ``n!``, memoized up to the largest ``n`` requested so far."""
    if n < 0:
        raise ValueError(f"factorial of negative index {n}")
    memo = _fact_memo
    if n < len(memo):
        return memo[n]
    with _fact_lock:
        # Appends keep the memo a contiguous prefix for lock-free readers.
        acc = memo[-1]
        for i in range(len(memo), n + 1):
            acc *= i
            memo.append(acc)
        return memo[n]


def falling_factorial(n: int, k: int) -> int:
    """Return n!/k! = n(n-1)...(k+1) for 0 <= k <= n."""
    if not 0 <= k <= n:
        raise ValueError(f"falling factorial needs 0 <= k <= n, got n={n}, k={k}")
    acc = 1
    for i in range(k + 1, n + 1):
        acc *= i
    return acc


def binomial(n: int, k: int) -> int:
    """C(n, k) by the multiplicative formula; 0 outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError(f"binomial with negative n={n}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    acc = 1
    for i in range(1, k + 1):
        # acc * (n - k + i) is divisible by i at every step.
        acc = acc * (n - k + i) // i
    return acc


def pascal_row(n: int) -> list[int]:
    """Row ``n`` of Pascal's triangle built additively (independent of binomial)."""
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def ratio_add(a: Fraction, b: Fraction) -> Fraction:
    return a + b


def ratio_is_integer(a: Fraction) -> tuple[bool, int | None]:
    """Return ``(True, value)`` when ``a`` is integral, else ``(False, None)``."""
    if a.denominator == 1:
        return True, a.numerator
    return False, None


@contextmanager
def unlimited_digits():
    """Lift the interpreter's int/str conversion digit cap for huge values."""
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def format_int(value: int) -> str:
    with unlimited_digits():
        return str(value)


def parse_int(text: str) -> int:
    """Parse a canonical signed decimal (no '+', no leading zeros, no '-0')."""
    if not _INT_RE.match(text) or text == "-0":
        raise ValueError(f"not a canonical decimal integer: {text!r}")
    with unlimited_digits():
        return int(text)


def parse_nat(text: str) -> int:
    if not _NAT_RE.match(text):
        raise ValueError(f"not a canonical decimal natural: {text!r}")
    with unlimited_digits():
        return int(text)


def format_ratio(value: Fraction) -> str:
    return f"{format_int(value.numerator)}/{format_int(value.denominator)}"


def parse_ratio(text: str) -> Fraction:
    """Parse ``"<int>/<nat>"``; the pair must already be in lowest terms."""
    num_text, sep, den_text = text.partition("/")
    if not sep:
        raise ValueError(f"ratio needs a '/': {text!r}")
    num = parse_int(num_text)
    den = parse_nat(den_text)
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(num, den)
    if value.numerator != num or value.denominator != den:
        raise ValueError(f"ratio not in lowest terms: {text!r}")
    return value


def digest(value: int, width: int = 8) -> str:
    """Short fingerprint of a huge integer: leading digits plus digit count."""
    text = format_int(abs(value))
    sign = "-" if value < 0 else ""
    return f"{sign}{text[:width]}..({len(text)} digits)"
