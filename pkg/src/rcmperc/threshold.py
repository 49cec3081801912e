"""Percolation verdicts and the critical-intensity bracket search.

A verdict at one intensity runs many independent explorations in a
finite window; a single escape is taken as evidence of percolation at
that intensity and window. The search starts at the analytic branching
bound (guaranteed subcritical in the infinite system), ramps the
intensity geometrically until a verdict percolates, then refines the
resulting bracket by repeated midpoint verdicts.

Determinism: trial t of evaluation e draws from the keyed stream
(seed, e, t), and early exit truncates results at the first escaping
trial in trial order, so verdicts are identical for any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

from ._parallel import run_trials
from .bounds import branching_bound
from .connection import ConnectionModel
from .exploration import ClusterOutcome, SimParams, _trial_task

__all__ = ["PercolationVerdict", "CriticalEstimate", "percolation_verdict", "estimate_critical"]

_MAX_RAMP_STEPS = 500


@dataclass(frozen=True)
class PercolationVerdict:
    """Outcome of repeated explorations at one intensity.

    runs counts the trials actually consumed: with early exit the series
    stops at the first escaping trial, so runs can be below the request.
    capped_runs counts trials that hit a work cap; those are unreliable
    and never read as containment. step_kind records the search phase
    ('ramp' or 'refine') when the verdict was produced by a search.
    """

    gamma: float
    runs: int
    escapes: int
    capped_runs: int
    percolates: bool
    step_kind: str | None = None

    @property
    def contained(self) -> int:
        return self.runs - self.escapes - self.capped_runs

    @property
    def reliable(self) -> bool:
        return self.capped_runs == 0

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "gamma": self.gamma,
            "runs": self.runs,
            "escapes": self.escapes,
            "capped_runs": self.capped_runs,
            "contained": self.contained,
            "percolates": self.percolates,
        }
        if self.step_kind is not None:
            out["step_kind"] = self.step_kind
        return out


def percolation_verdict(
    params: SimParams,
    model: ConnectionModel,
    gamma: float,
    runs: int,
    master_seed: int,
    eval_key: int = 0,
    workers: int = 1,
    full_runs: bool = False,
) -> PercolationVerdict:
    """Explore `runs` independent clusters at one intensity.

    Percolates if any trial escapes. By default the series stops at the
    first escape; full_runs forces all trials (needed when escape counts
    themselves are of interest). The gamma argument overrides
    params.gamma.
    """
    if runs < 1:
        raise ValueError(f"run count must be positive, got {runs}")
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise ValueError(f"intensity must be finite and non-negative, got {gamma!r}")
    trial_params = replace(params, gamma=gamma)
    tasks = [(trial_params, model, master_seed, eval_key, t) for t in range(runs)]
    stop = None if full_runs else _escaped
    outcomes = run_trials(_trial_task, tasks, workers=workers, stop_condition=stop)
    escapes = sum(1 for o in outcomes if o.escaped)
    capped = sum(1 for o in outcomes if o.capped)
    return PercolationVerdict(
        gamma=gamma,
        runs=len(outcomes),
        escapes=escapes,
        capped_runs=capped,
        percolates=escapes >= 1,
    )


def _escaped(outcome: ClusterOutcome) -> bool:
    return outcome.escaped


@dataclass(frozen=True)
class CriticalEstimate:
    """Bracket around the finite-window percolation threshold.

    width is maintained by exact halving of the post-ramp bracket width,
    so after k refinements it equals the post-ramp width divided by 2^k
    exactly; upper - lower can differ from it by rounding in the last
    place. midpoint is (lower + upper) / 2. history holds every verdict
    in evaluation order, ramp phase then refine phase; unless the first
    tested intensity percolated (flagged in warnings), the last verdicts
    at lower and upper are non-percolating and percolating respectively.
    """

    lower: float
    upper: float
    midpoint: float
    width: float
    history: tuple[PercolationVerdict, ...]
    dim: int
    system_size: float
    runs: int
    ramp_factor: float
    refinements: int
    seed: int
    model: str
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "midpoint": self.midpoint,
            "width": self.width,
            "dim": self.dim,
            "system_size": self.system_size,
            "runs": self.runs,
            "ramp_factor": self.ramp_factor,
            "refinements": self.refinements,
            "seed": self.seed,
            "model": self.model,
            "warnings": list(self.warnings),
            "history": [v.to_dict() for v in self.history],
        }


def estimate_critical(
    params: SimParams,
    model: ConnectionModel,
    runs: int,
    master_seed: int,
    ramp_factor: float = 1.1,
    refinements: int = 2,
    workers: int = 1,
    full_runs: bool = False,
    quad_tol: float = 1e-10,
) -> CriticalEstimate:
    """Bracket the critical intensity for the given model and window.

    Starts at the branching bound, multiplies by ramp_factor until a
    verdict percolates, then runs `refinements` midpoint verdicts. If
    the very first verdict percolates the lower endpoint is set to
    gamma0 / ramp_factor without having been tested, and a warning is
    recorded.
    """
    if ramp_factor <= 1.0:
        raise ValueError(f"ramp factor must exceed 1, got {ramp_factor!r}")
    if refinements < 0:
        raise ValueError(f"refinement count must be non-negative, got {refinements}")
    gamma0 = branching_bound(model, params.dim, quad_tol)
    history: list[PercolationVerdict] = []
    warnings: list[str] = []
    capped_seen = False

    eval_index = 0
    gamma = gamma0
    previous: float | None = None
    while True:
        if eval_index >= _MAX_RAMP_STEPS:
            raise RuntimeError(
                f"no percolation after {_MAX_RAMP_STEPS} ramp steps from {gamma0!r}; "
                "check the window size and work caps"
            )
        verdict = percolation_verdict(
            params, model, gamma, runs, master_seed,
            eval_key=eval_index, workers=workers, full_runs=full_runs,
        )
        verdict = replace(verdict, step_kind="ramp")
        history.append(verdict)
        capped_seen = capped_seen or verdict.capped_runs > 0
        eval_index += 1
        if verdict.percolates:
            break
        previous = gamma
        gamma = gamma * ramp_factor

    if previous is None:
        lower = gamma0 / ramp_factor
        warnings.append(
            "first tested intensity (the branching bound) already percolated; "
            "lower bracket endpoint was not tested"
        )
    else:
        lower = previous
    upper = gamma
    width = upper - lower

    for _ in range(refinements):
        mid = (lower + upper) / 2.0
        verdict = percolation_verdict(
            params, model, mid, runs, master_seed,
            eval_key=eval_index, workers=workers, full_runs=full_runs,
        )
        verdict = replace(verdict, step_kind="refine")
        history.append(verdict)
        capped_seen = capped_seen or verdict.capped_runs > 0
        eval_index += 1
        if verdict.percolates:
            upper = mid
        else:
            lower = mid
        width = width / 2.0

    if capped_seen:
        warnings.append(
            "some explorations hit a work cap; affected verdicts are unreliable"
        )
    return CriticalEstimate(
        lower=lower,
        upper=upper,
        midpoint=(lower + upper) / 2.0,
        width=width,
        history=tuple(history),
        dim=params.dim,
        system_size=params.system_size,
        runs=runs,
        ramp_factor=ramp_factor,
        refinements=refinements,
        seed=master_seed,
        model=model.describe(),
        warnings=tuple(warnings),
    )
