"""Checked-in reference values for the five standard model settings.

Each table pairs a connection model with, per dimension, the window size
and run count of the full-scale study, the critical-intensity estimate
obtained at that scale, the analytic branching lower bound, and (for
Gilbert disks) an independent high-precision threshold estimate from the
percolation literature. The numeric values are regression anchors: the
branching column must be reproduced by `rcmperc.bounds` to five
significant digits, and the reproduce command reports simulated brackets
next to these estimates.

Scales: 'paper' uses the full-scale window and 5000 runs per verdict;
'desk' shrinks the window and uses 500 runs so a laptop-class machine
finishes in minutes. Desk brackets are wider and sit slightly below the
full-scale values because escapes come easier in a small window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connection import ConnectionModel, Gilbert, PenetrableSphere, SoftSphere

__all__ = [
    "ReferenceRow",
    "ReferenceTable",
    "REFERENCE_TABLES",
    "DESK_SYSTEM_SIZE",
    "DESK_RUNS",
    "SCALES",
]

SCALES = ("desk", "paper")

DESK_SYSTEM_SIZE: dict[int, float] = {2: 200.0, 3: 100.0, 4: 60.0, 5: 40.0}
DESK_RUNS = 500


@dataclass(frozen=True)
class ReferenceRow:
    """One dimension's reference values at full scale."""

    dim: int
    system_size: float
    runs: int
    critical_estimate: float
    branching_bound: float
    literature_value: float | None = None


@dataclass(frozen=True)
class ReferenceTable:
    """A model setting plus its per-dimension reference rows."""

    number: int
    label: str
    model_kind: str
    model_params: dict
    rows: tuple[ReferenceRow, ...]

    def build_model(self) -> ConnectionModel:
        if self.model_kind == "gilbert":
            return Gilbert(**self.model_params)
        if self.model_kind == "penetrable":
            return PenetrableSphere(**self.model_params)
        if self.model_kind == "soft-sphere":
            return SoftSphere(**self.model_params)
        raise ValueError(f"unknown model kind {self.model_kind!r}")

    def row(self, dim: int) -> ReferenceRow:
        for r in self.rows:
            if r.dim == dim:
                return r
        raise KeyError(f"table {self.number} has no row for dimension {dim}")


REFERENCE_TABLES: dict[int, ReferenceTable] = {
    1: ReferenceTable(
        number=1,
        label="Gilbert disks, radius 2",
        model_kind="gilbert",
        model_params={"radius": 2.0},
        rows=(
            ReferenceRow(2, 1000.0, 5000, 0.34072, 0.079577, 0.35909),
            ReferenceRow(3, 500.0, 5000, 0.079338, 0.029842, 0.081621),
            ReferenceRow(4, 300.0, 5000, 0.025915, 0.012665, 0.026435),
            ReferenceRow(5, 200.0, 5000, 0.010039, 0.0059368, 0.010342),
        ),
    ),
    2: ReferenceTable(
        number=2,
        label="penetrable spheres, radius 2, connection probability 0.5",
        model_kind="penetrable",
        model_params={"radius": 2.0, "prob": 0.5},
        rows=(
            ReferenceRow(2, 1000.0, 5000, 0.48813, 0.15915),
            ReferenceRow(3, 500.0, 5000, 0.12503, 0.059683),
            ReferenceRow(4, 300.0, 5000, 0.041814, 0.02533),
            ReferenceRow(5, 200.0, 5000, 0.01699, 0.011874),
        ),
    ),
    3: ReferenceTable(
        number=3,
        label="penetrable spheres, radius 2, connection probability 0.75",
        model_kind="penetrable",
        model_params={"radius": 2.0, "prob": 0.75},
        rows=(
            ReferenceRow(2, 1000.0, 5000, 0.39376, 0.1061),
            ReferenceRow(3, 500.0, 5000, 0.096166, 0.039789),
            ReferenceRow(4, 300.0, 5000, 0.03216, 0.016887),
            ReferenceRow(5, 200.0, 5000, 0.012459, 0.0079157),
        ),
    ),
    4: ReferenceTable(
        number=4,
        label="soft spheres, radius 2, hardness 6",
        model_kind="soft-sphere",
        model_params={"radius": 2.0, "hardness": 6},
        rows=(
            ReferenceRow(2, 1000.0, 5000, 0.35494, 0.084969),
            ReferenceRow(3, 500.0, 5000, 0.087095, 0.03276),
            ReferenceRow(4, 300.0, 5000, 0.028471, 0.014254),
            ReferenceRow(5, 200.0, 5000, 0.01128, 0.0068329),
        ),
    ),
    5: ReferenceTable(
        number=5,
        label="soft spheres, radius 2, hardness 12",
        model_kind="soft-sphere",
        model_params={"radius": 2.0, "hardness": 12},
        rows=(
            ReferenceRow(2, 1000.0, 5000, 0.35272, 0.082379),
            ReferenceRow(3, 500.0, 5000, 0.083445, 0.031387),
            ReferenceRow(4, 300.0, 5000, 0.027011, 0.013523),
            ReferenceRow(5, 200.0, 5000, 0.010873, 0.00643),
        ),
    ),
}
