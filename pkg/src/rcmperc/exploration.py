"""Lazy exploration of the origin's cluster in a random connection model.

The cluster of the origin is grown breadth-outward without ever realizing
the full point process. Three disjoint pools are maintained:

  * saturated: cluster points whose neighborhood is fully resolved;
  * frontier: cluster points awaiting processing, popped farthest-from-
    origin first (ties by smaller id) so escaping clusters reach the
    boundary quickly;
  * unattached: generated points that have not joined the cluster. They
    are kept forever and retested against later frontier points, because
    their connection to those points is still undecided.

Processing a frontier point x runs, in this fixed order:
  (a) one uniform per unattached point within range of x, ascending id;
      successes move to the frontier;
  (b) one Poisson count, then one placement per candidate point, uniform
      in B(x, range), thinned against the union of previously processed
      balls (no randomness in the thinning);
  (c) one uniform per surviving new point, in generation order; successes
      join the frontier, the rest become unattached. Finally x's ball is
      marked covered.

No pair is ever tested twice: unattached points sit outside every covered
ball, so they are never regenerated, and points inside the cluster are
never tested against each other.

A run ends in one of three ways. Containment: the frontier empties.
Escape: a point with norm greater than the system size enters the
frontier, checked at insertion, ending the run immediately. Capped: a
work cap (generated points or processing steps) is hit first; capped
runs are flagged and must not be read as containment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from heapq import heappop, heappush
from itertools import count as _counter

from ._parallel import run_trials
from .connection import ConnectionModel, decide_connection
from .geometry import Point, SpatialIndex, ball_volume, make_point
from .sampling import RngStream, place_candidates, poisson_count, trial_stream

__all__ = [
    "SimParams",
    "ClusterOutcome",
    "PairConnectednessEstimate",
    "explore_cluster",
    "estimate_pair_connectedness",
    "wilson_interval",
]

DEFAULT_MAX_GENERATED = 10_000_000
DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class SimParams:
    """Parameters of one exploration run.

    extra_points places deterministic points into the initial unattached
    pool (used for pair-connectedness probes). Work caps bound the run
    and flag the outcome as capped: max_steps bounds processed frontier
    points, max_generated_points bounds candidate placements drawn
    (kept or thinned), so a run can never materialize more than that
    many points no matter how large the intensity is. track_pairs
    enables an internal ledger asserting that no pair is tested twice
    (testing aid; costs memory).
    """

    dim: int
    gamma: float
    system_size: float
    extra_points: tuple[tuple[float, ...], ...] = ()
    max_generated_points: int = DEFAULT_MAX_GENERATED
    max_steps: int = DEFAULT_MAX_STEPS
    track_pairs: bool = False

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise ValueError(f"intensity must be finite and non-negative, got {self.gamma!r}")
        if not (math.isfinite(self.system_size) and self.system_size > 0.0):
            raise ValueError(
                f"system size must be finite and positive, got {self.system_size!r}"
            )
        if self.max_generated_points < 1 or self.max_steps < 1:
            raise ValueError("work caps must be positive")
        cleaned = []
        for pt in self.extra_points:
            tup = tuple(float(v) for v in pt)
            if len(tup) != self.dim:
                raise ValueError(
                    f"extra point {pt!r} has {len(tup)} coordinates, expected {self.dim}"
                )
            if any(not math.isfinite(v) for v in tup):
                raise ValueError(f"extra point {pt!r} has non-finite coordinates")
            cleaned.append(tup)
        object.__setattr__(self, "extra_points", tuple(cleaned))


@dataclass(frozen=True)
class ClusterOutcome:
    """Result of one exploration run.

    cluster_size counts every point known to belong to the cluster when
    the run ended (saturated plus still-unprocessed frontier), so it is a
    partial count for escaped or capped runs. generated_points counts
    points kept after thinning; steps counts processed frontier points.
    extras_in_cluster flags, per SimParams.extra_points entry, whether
    that point had joined the cluster by the end of the run.
    """

    escaped: bool
    cluster_size: int
    generated_points: int
    steps: int
    max_norm: float
    capped: bool
    extras_in_cluster: tuple[bool, ...] = ()


def explore_cluster(
    params: SimParams, model: ConnectionModel, rng: RngStream
) -> ClusterOutcome:
    """Grow the origin's cluster until containment, escape, or a work cap.

    The rng must be fresh for this run: results are a pure function of
    (params, model, seed, key).
    """
    radius = model.radius
    system_size = params.system_size
    if system_size <= radius:
        raise ValueError(
            f"system size {system_size!r} must exceed the connection radius {radius!r}"
        )
    dim = params.dim
    gamma = params.gamma
    max_steps = params.max_steps
    max_generated = params.max_generated_points

    ids = _counter()
    origin = Point((0.0,) * dim, 0.0, next(ids))
    unattached = SpatialIndex(radius, dim)
    extras_in: dict[int, bool] = {}
    extra_order: list[int] = []
    for coords in params.extra_points:
        p = make_point(coords, next(ids))
        extras_in[p.id] = False
        extra_order.append(p.id)
        unattached.insert(p)
    covered = SpatialIndex(2.0 * radius, dim)

    frontier: list[tuple[float, int, Point]] = [(-0.0, origin.id, origin)]
    saturated: list[Point] = []
    pair_seen: set[tuple[int, int]] | None = set() if params.track_pairs else None

    escaped = False
    capped = False
    steps = 0
    generated = 0
    candidates = 0
    ball_mean = gamma * ball_volume(dim, radius)
    max_norm = 0.0
    gen = rng.gen

    def adopt(p: Point) -> None:
        """Move a point into the frontier; escape is checked here."""
        nonlocal escaped, max_norm
        if p.norm > max_norm:
            max_norm = p.norm
        heappush(frontier, (-p.norm, p.id, p))
        if p.id in extras_in:
            extras_in[p.id] = True
        if p.norm > system_size:
            escaped = True

    while frontier:
        if steps >= max_steps:
            capped = True
            break
        _, _, x = heappop(frontier)
        saturated.append(x)
        steps += 1

        for cand in unattached.query(x.coords):
            u = gen.random()
            if pair_seen is not None:
                key = (x.id, cand.id) if x.id < cand.id else (cand.id, x.id)
                assert key not in pair_seen, f"pair {key} tested twice"
                pair_seen.add(key)
            if decide_connection(model, x, cand, u):
                unattached.remove(cand)
                adopt(cand)
                if escaped:
                    break
        if escaped:
            break

        # clamp the Poisson intake to the remaining budget before any
        # candidate materializes, or a huge intensity would stall here
        budget = max_generated - candidates
        if ball_mean > max(2.0 * budget, 1000.0):
            # capping is then certain beyond any doubt (Chernoff gives
            # P[count <= budget] < e^-150) and numpy cannot draw such
            # means at all, so skip the draw
            capped = True
            count = budget
        else:
            count = poisson_count(rng, ball_mean)
            if count > budget:
                capped = True
                count = budget
        candidates += count
        fresh = place_candidates(rng, x, radius, covered, dim, count)
        for p in fresh:
            p.id = next(ids)
            generated += 1
            u = gen.random()
            if pair_seen is not None:
                key = (x.id, p.id)
                assert key not in pair_seen, f"pair {key} tested twice"
                pair_seen.add(key)
            if decide_connection(model, x, p, u):
                adopt(p)
                if escaped:
                    break
            else:
                unattached.insert(p)
        covered.insert(x)
        if escaped or capped:
            break

    return ClusterOutcome(
        escaped=escaped,
        cluster_size=len(saturated) + len(frontier),
        generated_points=generated,
        steps=steps,
        max_norm=max_norm,
        capped=capped,
        extras_in_cluster=tuple(extras_in[i] for i in extra_order),
    )


def _trial_task(task) -> ClusterOutcome:
    """Process-pool worker: one exploration trial from a picklable task."""
    params, model, master_seed, eval_key, trial_index = task
    return explore_cluster(params, model, trial_stream(master_seed, eval_key, trial_index))


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score 95% confidence interval for a binomial proportion."""
    if n <= 0:
        return (0.0, 1.0)
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class PairConnectednessEstimate:
    """Monte Carlo estimate of the two-point connection probability.

    A probe point is placed at distance r from the origin and the origin's
    cluster is explored; the estimate is the fraction of resolved trials
    in which the probe joined the cluster. Trials that escaped or were
    capped while the probe was still undecided are excluded and counted
    separately; exclusion_warning is set when they exceed 1% of trials.
    """

    r: float
    gamma: float
    trials: int
    positives: int
    resolved: int
    excluded_escaped: int
    excluded_capped: int
    tau_hat: float
    ci_low: float
    ci_high: float
    exclusion_warning: bool

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "gamma": self.gamma,
            "trials": self.trials,
            "positives": self.positives,
            "resolved": self.resolved,
            "excluded_escaped": self.excluded_escaped,
            "excluded_capped": self.excluded_capped,
            "tau_hat": self.tau_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "exclusion_warning": self.exclusion_warning,
        }


def estimate_pair_connectedness(
    params: SimParams,
    model: ConnectionModel,
    r: float,
    trials: int,
    master_seed: int,
    eval_key: int = 0,
    workers: int = 1,
) -> PairConnectednessEstimate:
    """Estimate the probability that the origin connects to a point at distance r.

    The probe starts in the unattached pool like any generated point and
    is resolved the moment it joins the cluster; a trial whose exploration
    ends (escape or cap) with the probe still unattached cannot decide it
    and is excluded from the denominator.
    """
    if not (0.0 < r < 2.0 * params.system_size):
        raise ValueError(
            f"probe distance must lie in (0, {2.0 * params.system_size!r}), got {r!r}"
        )
    if trials < 1:
        raise ValueError(f"trial count must be positive, got {trials}")
    probe = (r,) + (0.0,) * (params.dim - 1)
    run_params = replace(params, extra_points=(probe,))
    tasks = [(run_params, model, master_seed, eval_key, t) for t in range(trials)]
    outcomes = run_trials(_trial_task, tasks, workers=workers)

    positives = 0
    excluded_escaped = 0
    excluded_capped = 0
    for o in outcomes:
        if o.extras_in_cluster[0]:
            positives += 1
        elif o.capped:
            excluded_capped += 1
        elif o.escaped:
            excluded_escaped += 1
    excluded = excluded_escaped + excluded_capped
    resolved = trials - excluded
    tau_hat = positives / resolved if resolved > 0 else math.nan
    ci_low, ci_high = wilson_interval(positives, resolved)
    return PairConnectednessEstimate(
        r=r,
        gamma=params.gamma,
        trials=trials,
        positives=positives,
        resolved=resolved,
        excluded_escaped=excluded_escaped,
        excluded_capped=excluded_capped,
        tau_hat=tau_hat,
        ci_low=ci_low,
        ci_high=ci_high,
        exclusion_warning=excluded > 0.01 * trials,
    )
