"""Backend selection for the census kernel.

The compiled extension is used when it imports and ``RENCONTRES_PURE_PYTHON``
is unset; otherwise the pure-Python kernel takes over.  ``BACKEND`` names the
choice made at import time.
"""

from __future__ import annotations

import os

from . import _census_py

try:
    if os.environ.get("RENCONTRES_PURE_PYTHON"):
        raise ImportError("pure Python forced by RENCONTRES_PURE_PYTHON")
    from . import _census as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
COMPILED_MAX_N = _compiled.MAX_N if _compiled is not None else 0


def block_census(n: int, last: int) -> list[int]:
    """Census of the permutations of [n] sending n to ``last``."""
    if _compiled is not None and n <= COMPILED_MAX_N:
        return _compiled.heap_block(n, last)
    return _census_py.lex_block(n, last)


def compiled_block(n: int, last: int) -> list[int]:
    if _compiled is None:
        raise RuntimeError("compiled census extension is not available")
    return _compiled.heap_block(n, last)


python_lex_block = _census_py.lex_block
python_heap_block = _census_py.heap_block
