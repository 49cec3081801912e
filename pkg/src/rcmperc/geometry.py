"""Points, Euclidean ball volumes, and a uniform-grid neighbor index.

Distance comparisons throughout the package are inclusive: a point at
exactly the query radius counts as "within". All coordinates are 64-bit
floats; norms are cached on the point at creation time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "Point",
    "SpatialIndex",
    "ball_volume",
    "sphere_surface",
    "make_point",
    "neighbors_within",
]


@dataclass(slots=True, eq=False)
class Point:
    """A point of the process: coordinates, cached norm, integer id.

    The id is -1 until the point is adopted by an exploration run, which
    stamps ids from a per-run monotone counter. Equality is identity;
    two points with equal coordinates are still distinct.
    """

    coords: tuple[float, ...]
    norm: float
    id: int = -1


def make_point(coords: Iterable[float], point_id: int = -1) -> Point:
    """Build a Point, computing and caching its Euclidean norm."""
    c = tuple(float(v) for v in coords)
    return Point(c, math.hypot(*c), point_id)


def ball_volume(dim: int, radius: float) -> float:
    """Volume of a Euclidean ball of the given radius in `dim` dimensions.

    Args:
        dim: dimension, a positive integer.
        radius: ball radius, finite and positive.

    Returns:
        pi^(d/2) * radius^d / Gamma(d/2 + 1).
    """
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")
    if not (math.isfinite(radius) and radius > 0):
        raise ValueError(f"radius must be finite and positive, got {radius!r}")
    return math.pi ** (dim / 2.0) * radius**dim / math.gamma(dim / 2.0 + 1.0)


def sphere_surface(dim: int) -> float:
    """Surface measure of the unit sphere in `dim` dimensions: 2 pi^(d/2) / Gamma(d/2)."""
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


class SpatialIndex:
    """Uniform grid over R^d answering fixed-radius neighbor queries.

    The cell edge equals the query radius, so a query scans the 3^d cells
    around the query point and filters by exact distance. Practical for
    moderate dimensions (the scan grows as 3^d).
    """

    __slots__ = ("cell_size", "dim", "_cells", "_count", "_offsets")

    def __init__(self, cell_size: float, dim: int):
        if not (math.isfinite(cell_size) and cell_size > 0):
            raise ValueError(f"cell size must be finite and positive, got {cell_size!r}")
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim!r}")
        self.cell_size = float(cell_size)
        self.dim = dim
        self._cells: dict[tuple[int, ...], list[Point]] = {}
        self._count = 0
        self._offsets = list(itertools.product((-1, 0, 1), repeat=dim))

    def _cell_of(self, coords: tuple[float, ...]) -> tuple[int, ...]:
        cs = self.cell_size
        return tuple(math.floor(c / cs) for c in coords)

    def insert(self, point: Point) -> None:
        if len(point.coords) != self.dim:
            raise ValueError(
                f"point has {len(point.coords)} coordinates, index expects {self.dim}"
            )
        self._cells.setdefault(self._cell_of(point.coords), []).append(point)
        self._count += 1

    def remove(self, point: Point) -> None:
        """Remove a previously inserted point (identity match)."""
        cell = self._cell_of(point.coords)
        bucket = self._cells.get(cell)
        if bucket is None:
            raise KeyError(f"point id {point.id} not present in index")
        for i, p in enumerate(bucket):
            if p is point:
                bucket.pop(i)
                self._count -= 1
                if not bucket:
                    del self._cells[cell]
                return
        raise KeyError(f"point id {point.id} not present in index")

    def query(self, coords: tuple[float, ...]) -> list[Point]:
        """All stored points at distance <= cell_size from coords, ascending id."""
        cs = self.cell_size
        base = tuple(math.floor(c / cs) for c in coords)
        cells = self._cells
        out: list[Point] = []
        for off in self._offsets:
            bucket = cells.get(tuple(b + o for b, o in zip(base, off)))
            if bucket:
                for p in bucket:
                    if math.dist(coords, p.coords) <= cs:
                        out.append(p)
        out.sort(key=lambda p: p.id)
        return out

    def __len__(self) -> int:
        return self._count

    def points(self) -> Iterator[Point]:
        for bucket in self._cells.values():
            yield from bucket

    @classmethod
    def from_points(cls, points: Iterable[Point], cell_size: float, dim: int) -> "SpatialIndex":
        index = cls(cell_size, dim)
        for p in points:
            index.insert(p)
        return index


def neighbors_within(index: SpatialIndex, point: Point, radius: float) -> list[int]:
    """Ids of indexed points at distance <= radius from `point`, ascending.

    The radius must equal the index cell size; the grid is built for a
    single query radius.
    """
    if radius != index.cell_size:
        raise ValueError(
            f"query radius {radius!r} does not match index cell size {index.cell_size!r}"
        )
    return [p.id for p in index.query(point.coords)]
