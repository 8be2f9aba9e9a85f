"""Brute-force ground truth: fixed-point censuses of S_n and a derangement sampler.

Permutations are 1-based, as one-line images: ``mapping[i]`` is the image of
``i + 1``.  The sampler draws from :class:`random.Random` (Mersenne Twister)
seeded with the caller's seed, so results are reproducible across runs.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial

from . import kernels

DEFAULT_HORIZON = 10
MAX_SAMPLE_TRIES = 1000


class HorizonExceeded(Exception):
    def __init__(self, n, horizon):
        super().__init__(
            f"refusing to enumerate S_{n}: enumeration horizon is {horizon} "
            f"(raise it with --horizon or RENCONTRES_HORIZON)"
        )
        self.n = n
        self.horizon = horizon


class SamplerExhausted(RuntimeError):
    """The rejection sampler hit its retry cap; indicates a broken RNG."""


@dataclass(frozen=True)
class Permutation:
    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise ValueError(f"not a permutation of [{len(self.mapping)}]: {self.mapping}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(tuple(int(tok) for tok in text.split()))

    def __str__(self):
        return " ".join(map(str, self.mapping))

    def __len__(self):
        return len(self.mapping)


@dataclass(frozen=True)
class FixedPointCensus:
    n: int
    counts: tuple[int, ...]

    def to_csv(self) -> str:
        lines = ["r,count"]
        lines += [f"{r},{c}" for r, c in enumerate(self.counts)]
        return "\n".join(lines) + "\n"


def count_fixed_points(p: Permutation) -> int:
    return sum(1 for k, image in enumerate(p.mapping, 1) if image == k)


def env_horizon(default: int = DEFAULT_HORIZON) -> int:
    raw = os.environ.get("RENCONTRES_HORIZON")
    return int(raw) if raw else default


def enumerate_census(
    n: int,
    horizon: int | None = None,
    workers: int = 1,
    block=None,
) -> FixedPointCensus:
    """Count every permutation of [n] by its number of fixed points.

    The space is split into n blocks by the image of n; blocks may run on
    ``workers`` threads (the compiled kernel releases the GIL).  ``block``
    overrides the per-block kernel, e.g. to pin an enumeration order.
    """
    if horizon is None:
        horizon = env_horizon()
    if n < 0:
        raise ValueError(f"negative n={n}")
    if n > horizon:
        raise HorizonExceeded(n, horizon)
    if n == 0:
        return FixedPointCensus(0, (1,))
    block = block or kernels.block_census
    lasts = range(1, n + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda last: block(n, last), lasts))
    else:
        parts = [block(n, last) for last in lasts]
    counts = tuple(sum(col) for col in zip(*parts))
    if sum(counts) != factorial(n):
        raise RuntimeError(f"census of S_{n} covers {sum(counts)} permutations, not {n}!")
    return FixedPointCensus(n, counts)


def brute_derangement_count(n: int, horizon: int | None = None) -> int:
    return enumerate_census(n, horizon).counts[0]


def sample_derangement(n: int, seed=None, rng: random.Random | None = None) -> Permutation:
    """Uniform derangement of [n] by rejection from uniform Fisher-Yates shuffles.

    Pass either a ``seed`` (a fresh generator is created) or a shared ``rng``
    to draw a reproducible stream of samples.
    """
    if n < 2:
        raise ValueError(f"no derangement of [{n}] exists for n < 2")
    if rng is None:
        rng = random.Random(seed)
    images = list(range(1, n + 1))
    for _ in range(MAX_SAMPLE_TRIES):
        rng.shuffle(images)
        if all(image != k for k, image in enumerate(images, 1)):
            return Permutation(tuple(images))
    raise SamplerExhausted(f"no derangement of [{n}] after {MAX_SAMPLE_TRIES} shuffles")
