import os
import subprocess
import sys

import pytest

from rencontres import kernels
from rencontres.kernels import python_heap_block, python_lex_block

from conftest import brute_census

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


@pytest.mark.parametrize("n", range(1, 8))
def test_python_kernels_agree_per_block(n):
    for last in range(1, n + 1):
        assert python_lex_block(n, last) == python_heap_block(n, last)


@pytest.mark.parametrize("n", range(1, 8))
def test_blocks_sum_to_census(n):
    total = [sum(col) for col in zip(*(python_heap_block(n, last) for last in range(1, n + 1)))]
    assert total == brute_census(n)


@pytest.mark.parametrize("bad", [(0, 1), (3, 0), (3, 4)])
def test_python_block_rejects(bad):
    with pytest.raises(ValueError):
        python_lex_block(*bad)


@needs_compiled
@pytest.mark.parametrize("n", range(1, 10))
def test_compiled_matches_python(n):
    for last in range(1, n + 1):
        assert kernels.compiled_block(n, last) == python_heap_block(n, last)


@needs_compiled
def test_compiled_bounds():
    with pytest.raises(OverflowError):
        kernels.compiled_block(21, 1)
    with pytest.raises(ValueError):
        kernels.compiled_block(4, 5)


def test_pure_python_forced_by_env():
    env = dict(os.environ, RENCONTRES_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from rencontres import kernels, enumerate_census;"
         "print(kernels.BACKEND, enumerate_census(6).counts)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python (265, 264, 135, 40, 15, 0, 1)"


def test_benchmark_script_runs():
    from pathlib import Path

    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--n", "5", "6", "--repeat", "1"],
                         capture_output=True, text=True, check=True)
    assert "python-lex" in out.stdout
    assert "disagrees" not in out.stdout + out.stderr
