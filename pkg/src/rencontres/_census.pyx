# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-point census over a block of S_n (Heap's algorithm)."""

from libc.stdlib cimport malloc, calloc, free

# 20! < 2**63, so every count in a census with n <= 20 fits a signed 64-bit slot.
MAX_N = 20


cdef void _heap_block(int n, int last, long long *counts) noexcept nogil:
    # Positions 0..n-2 hold the values of [n] minus ``last``; position n-1 holds
    # ``last``.  Element at position i is a fixed point when it equals i + 1.
    cdef int m = n - 1
    cdef int *arr = <int *> malloc(m * sizeof(int)) if m > 0 else NULL
    cdef int *c = <int *> calloc(m, sizeof(int)) if m > 0 else NULL
    cdef int i, j, v, t, fixed, p
    fixed = 1 if last == n else 0
    p = 0
    for v in range(1, n + 1):
        if v != last:
            arr[p] = v
            if v == p + 1:
                fixed += 1
            p += 1
    counts[fixed] += 1
    i = 1
    while i < m:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            fixed -= (arr[i] == i + 1) + (arr[j] == j + 1)
            t = arr[i]
            arr[i] = arr[j]
            arr[j] = t
            fixed += (arr[i] == i + 1) + (arr[j] == j + 1)
            counts[fixed] += 1
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    free(arr)
    free(c)


def heap_block(int n, int last):
    """Census of the permutations of [n] with sigma(n) = last.

    Returns a list of length n + 1.  Runs without the GIL.
    """
    if n < 1 or n > MAX_N:
        raise OverflowError(f"compiled census supports 1 <= n <= {MAX_N}, got {n}")
    if not 1 <= last <= n:
        raise ValueError(f"last image must lie in [1, {n}], got {last}")
    cdef long long *counts = <long long *> calloc(n + 1, sizeof(long long))
    if counts == NULL:
        raise MemoryError()
    with nogil:
        _heap_block(n, last, counts)
    result = [counts[r] for r in range(n + 1)]
    free(counts)
    return result
