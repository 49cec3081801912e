"""Seeded random sampling primitives.

Reproducibility contract: every stochastic routine takes an RngStream,
a PCG64 generator derived from a master seed and an integer key tuple.
Equal (seed, key) pairs always produce identical draw sequences, and
distinct keys give statistically independent streams, so trials can be
dispatched in any order (or across processes) without changing results.

Draw order is part of the interface. `uniform_in_ball` consumes one
standard-normal vector (the direction) followed by one uniform (the
radius). `sample_uncovered` consumes one Poisson count, then one
placement per candidate point in order; rejection against covered balls
consumes no randomness.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .geometry import Point, SpatialIndex, ball_volume

__all__ = [
    "DEFAULT_SEED",
    "RngStream",
    "trial_stream",
    "derive_seed",
    "poisson_count",
    "uniform_in_ball",
    "sample_uncovered",
    "place_candidates",
]

# Default master seed for CLI runs when none is given. A fixed constant,
# never wall clock, so bare invocations are reproducible.
DEFAULT_SEED = 1729


def _entropy(master_seed: int, key: tuple[int, ...]) -> list[int]:
    # The key length is part of the seed material: SeedSequence zero-pads
    # short entropy lists, so without it key (e,) would alias (e, 0).
    return [master_seed, len(key), *key]


class RngStream:
    """A keyed substream of a master seed.

    The stream is seeded from the integer sequence (master_seed, len(key),
    *key), so the same pair always reproduces the same draws and distinct
    keys, including keys of different lengths, are independent. Substreams
    derive new streams by extending the key.
    """

    __slots__ = ("master_seed", "key", "gen")

    def __init__(self, master_seed: int, key: Sequence[int] = ()):
        master_seed = int(master_seed)
        if master_seed < 0:
            raise ValueError(f"master seed must be non-negative, got {master_seed}")
        k = tuple(int(v) for v in key)
        if any(v < 0 for v in k):
            raise ValueError(f"stream key entries must be non-negative, got {k}")
        self.master_seed = master_seed
        self.key = k
        seq = np.random.SeedSequence(_entropy(master_seed, k))
        self.gen = np.random.Generator(np.random.PCG64(seq))

    def substream(self, *key: int) -> "RngStream":
        """A fresh independent stream whose key extends this one's."""
        return RngStream(self.master_seed, self.key + key)

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, key={self.key})"


def trial_stream(master_seed: int, eval_index: int, trial_index: int) -> RngStream:
    """The stream assigned to one trial of one evaluation.

    Standalone commands use eval_index 0; the critical-intensity search
    numbers its verdict evaluations 0, 1, 2, ... so every trial anywhere
    in a run has its own independent stream.
    """
    return RngStream(master_seed, (eval_index, trial_index))


def derive_seed(master_seed: int, *key: int) -> int:
    """A fresh 64-bit master seed derived deterministically from (master_seed, *key).

    Used when one command runs several independent searches (e.g. one per
    dimension): each gets its own derived master, so rows stay independent
    and running a subset reproduces the full run's rows exactly.
    """
    seq = np.random.SeedSequence(_entropy(int(master_seed), tuple(int(k) for k in key)))
    lo, hi = seq.generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


def poisson_count(rng: RngStream, mean: float) -> int:
    """One exact Poisson draw with the given mean (>= 0)."""
    if not (math.isfinite(mean) and mean >= 0.0):
        raise ValueError(f"Poisson mean must be finite and non-negative, got {mean!r}")
    return int(rng.gen.poisson(mean))


def uniform_in_ball(rng: RngStream, center: Point, radius: float, dim: int) -> Point:
    """One point uniform in the closed ball B(center, radius).

    Direction comes from a normalized Gaussian vector, distance from
    radius * U^(1/d). The returned Point has id -1 (unassigned) and its
    norm is the distance to the global origin, not to `center`.
    """
    gen = rng.gen
    while True:
        direction = gen.standard_normal(dim)
        length = math.hypot(*direction)
        if length > 0.0:
            break
    dist = radius * gen.random() ** (1.0 / dim)
    scale = dist / length
    coords = tuple(c + scale * g for c, g in zip(center.coords, direction))
    return Point(coords, math.hypot(*coords), -1)


Covered = Union[SpatialIndex, Sequence[Point]]


def sample_uncovered(
    rng: RngStream,
    center: Point,
    radius: float,
    covered: Covered,
    gamma: float,
    dim: int,
) -> list[Point]:
    """Poisson sample of intensity gamma on B(center, radius) minus covered balls.

    `covered` holds centers of equal-radius balls whose interiors have
    already been exhausted; candidate points falling within `radius` of
    any of them are discarded (thinning), which realizes a Poisson
    process on the uncovered region. Pass a SpatialIndex with cell size
    2 * radius (as the exploration does), or any sequence of Points.
    """
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise ValueError(f"intensity must be finite and non-negative, got {gamma!r}")
    count = poisson_count(rng, gamma * ball_volume(dim, radius))
    return place_candidates(rng, center, radius, covered, dim, count)


def place_candidates(
    rng: RngStream,
    center: Point,
    radius: float,
    covered: Covered,
    dim: int,
    count: int,
) -> list[Point]:
    """Place `count` uniform candidates in B(center, radius), thinning covered ones.

    The placement half of `sample_uncovered`, for callers that draw the
    Poisson count themselves (the exploration does, so it can clamp the
    count to its remaining work budget before any point materializes).
    Each candidate consumes one placement draw whether or not it is kept.

    Only covered centers within 2 * radius of `center` can overlap the
    sampling ball, so only those are tested.
    """
    if count <= 0:
        return []
    if isinstance(covered, SpatialIndex):
        if covered.cell_size != 2.0 * radius:
            raise ValueError(
                f"covered index cell size {covered.cell_size!r} must equal 2 * radius"
            )
        nearby = covered.query(center.coords)
    else:
        reach = 2.0 * radius
        nearby = [c for c in covered if math.dist(center.coords, c.coords) <= reach]
    # Closest covered balls reject most candidates; test them first.
    nearby.sort(key=lambda c: math.dist(center.coords, c.coords))
    blockers = [c.coords for c in nearby]
    kept: list[Point] = []
    for _ in range(count):
        p = uniform_in_ball(rng, center, radius, dim)
        pc = p.coords
        if any(math.dist(pc, b) <= radius for b in blockers):
            continue
        kept.append(p)
    return kept
