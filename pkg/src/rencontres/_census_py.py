"""Pure-Python fixed-point census kernels.

Both return the census of the permutations of [n] whose image of n is
``last``, as a list of length n + 1.  They enumerate in different orders.
"""

from __future__ import annotations

from collections import Counter
from itertools import permutations
from operator import eq


def _split(n, last):
    if n < 1:
        raise ValueError(f"block census needs n >= 1, got {n}")
    if not 1 <= last <= n:
        raise ValueError(f"last image must lie in [1, {n}], got {last}")
    rest = [v for v in range(1, n + 1) if v != last]
    return rest, (1 if last == n else 0)


def lex_block(n: int, last: int) -> list[int]:
    """Lexicographic enumeration via :func:`itertools.permutations`."""
    rest, base = _split(n, last)
    positions = range(1, n)
    tally = Counter(sum(map(eq, p, positions)) for p in permutations(rest))
    counts = [0] * (n + 1)
    for fixed, k in tally.items():
        counts[fixed + base] += k
    return counts


def heap_block(n: int, last: int) -> list[int]:
    """Heap's algorithm with an incrementally maintained fixed-point count."""
    arr, fixed = _split(n, last)
    m = n - 1
    fixed += sum(1 for i, v in enumerate(arr) if v == i + 1)
    counts = [0] * (n + 1)
    counts[fixed] += 1
    c = [0] * m
    i = 1
    while i < m:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            fixed -= (arr[i] == i + 1) + (arr[j] == j + 1)
            arr[i], arr[j] = arr[j], arr[i]
            fixed += (arr[i] == i + 1) + (arr[j] == j + 1)
            counts[fixed] += 1
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    return counts
