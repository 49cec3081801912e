"""Deterministic trial dispatch, serial or across worker processes.

Results never depend on the worker count: each task carries its own RNG
stream, tasks are gathered in submission order, and when an early-stop
condition is given the returned list is cut at the first task (in task
order) that satisfies it. Extra tasks that finished in flight are
discarded, so counters derived from the result match a serial run
exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

__all__ = ["run_trials"]

T = TypeVar("T")
R = TypeVar("R")


def run_trials(
    worker: Callable[[T], R],
    tasks: Sequence[T],
    workers: int = 1,
    stop_condition: Callable[[R], bool] | None = None,
) -> list[R]:
    """Run `worker` over `tasks`, in order, optionally stopping early.

    With stop_condition, the result list ends at the first (lowest-index)
    task whose result satisfies it, regardless of scheduling. Workers > 1
    uses a process pool; the worker and tasks must be picklable.
    """
    if workers < 1:
        raise ValueError(f"worker count must be at least 1, got {workers}")
    if workers == 1 or len(tasks) <= 1:
        out: list[R] = []
        for task in tasks:
            result = worker(task)
            out.append(result)
            if stop_condition is not None and stop_condition(result):
                break
        return out

    results: list[R] = []
    wave = max(4 * workers, 16)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        start = 0
        n = len(tasks)
        while start < n:
            end = min(n, start + wave)
            chunk = list(pool.map(worker, tasks[start:end], chunksize=max(1, (end - start) // workers)))
            if stop_condition is None:
                results.extend(chunk)
            else:
                hit = next((i for i, r in enumerate(chunk) if stop_condition(r)), None)
                if hit is not None:
                    results.extend(chunk[: hit + 1])
                    return results
                results.extend(chunk)
            start = end
    return results
