from itertools import permutations

import pytest

ACCEPTANCE_LINES = []


def brute_census(n):
    """Fixed-point census of S_n straight from itertools, independent of the kernels."""
    counts = [0] * (n + 1)
    for p in permutations(range(1, n + 1)):
        counts[sum(1 for k, v in enumerate(p, 1) if k == v)] += 1
    return counts


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RENCONTRES_CACHE", str(tmp_path / "cache.txt"))
    monkeypatch.delenv("RENCONTRES_HORIZON", raising=False)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
