"""Progressive curve refinement on top of the optimistic tree search.

A cell does not store curve nodes directly: every dimension is a
*hierarchical offset*, the node's y-value relative to the linear
interpolation of its two neighbours one refinement level coarser (the fixed
endpoints act as level 0).  Shift coupling then holds by construction: moving
a coarse offset drags every finer node inside its interpolation support by
the corresponding hat-function weight, while the finer offsets themselves
stay untouched.

Dimensions are laid out in creation order, level-major and left to right
within a level, so index order doubles as dimension age.  A cell at
refinement level l has 2^l - 1 dimensions and materialises into a curve with
2^l - 1 interior nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import soo
from .curves import DiscretizedCurve, EndpointSpec
from .errors import ConfigError
from .functionals import FunctionalInstance

__all__ = [
    "DimensionMeta",
    "LevelSchedule",
    "MultiCell",
    "add_level",
    "choose_split_dim",
    "dimension_meta",
    "materialize",
    "needs_level_up",
    "run",
    "split_cell",
]

# tolerate one ulp of rounding when a width lands exactly on the threshold
_WIDTH_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class LevelSchedule:
    """Offset-width bookkeeping: how wide new dimensions start and shrink.

    Dimensions added when the cell reaches level l+1 start with width
    initial_width * shrink_base**(-l); the level-up itself triggers once every
    existing width has fallen to that size.
    """

    initial_width: float = 8.0
    shrink_base: float = 4.0
    arity: int = 3
    max_level: int | None = None

    def __post_init__(self):
        if self.initial_width <= 0.0:
            raise ConfigError("initial_width must be positive")
        if self.shrink_base <= 1.0:
            raise ConfigError("shrink_base must be > 1")
        if self.arity < 3 or self.arity % 2 == 0:
            raise ConfigError("arity must be odd and >= 3 (centre reuse needs a middle child)")
        if self.max_level is not None and self.max_level < 1:
            raise ConfigError("max_level must be >= 1")

    def width_at(self, level: int) -> float:
        """Width assigned to dimensions created when a cell reaches `level`."""
        return self.initial_width * self.shrink_base ** (-(level - 1))


@dataclass(frozen=True)
class DimensionMeta:
    level: int
    grid_index: int       # odd numerator k: the node sits at x_a + k * span / 2**level
    creation_order: int


def dimension_meta(index: int) -> DimensionMeta:
    """Metadata of the offset dimension stored at `index`."""
    if index < 0:
        raise ValueError("dimension index must be nonnegative")
    level = (index + 1).bit_length()
    within = index - (2 ** (level - 1) - 1)
    return DimensionMeta(level=level, grid_index=2 * within + 1, creation_order=index)


class MultiCell:
    """A search cell over hierarchical curve offsets."""

    __slots__ = ("level", "centers", "widths", "schedule", "endpoints")

    def __init__(self, level, centers, widths, schedule: LevelSchedule, endpoints: EndpointSpec):
        self.level = int(level)
        self.centers = np.asarray(centers, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        self.schedule = schedule
        self.endpoints = endpoints
        if self.centers.size != 2 ** self.level - 1 or self.widths.size != self.centers.size:
            raise ValueError(f"a level-{self.level} cell needs {2 ** self.level - 1} dimensions")

    @classmethod
    def initial(cls, schedule: LevelSchedule, endpoints: EndpointSpec) -> "MultiCell":
        """One dimension for the span midpoint, offset centred at zero."""
        return cls(1, [0.0], [schedule.initial_width], schedule, endpoints)

    @property
    def point(self) -> DiscretizedCurve:
        return materialize(self)

    def split(self) -> list["MultiCell"]:
        cell = self
        sched = self.schedule
        while needs_level_up(cell) and (sched.max_level is None or cell.level < sched.max_level):
            cell = add_level(cell)
        return split_cell(cell)


def materialize(cell: MultiCell, endpoints: EndpointSpec | None = None) -> DiscretizedCurve:
    """Resolve hierarchical offsets into absolute node values, coarse to fine.

    Each level-m node is the mean of its two coarser grid neighbours plus its
    own offset; the endpoints enter as fixed level-0 values.
    """
    ep = endpoints if endpoints is not None else cell.endpoints
    size = 2 ** cell.level + 1
    grid = np.empty(size)
    grid[0] = ep.y_a
    grid[-1] = ep.y_b
    for m in range(1, cell.level + 1):
        step = 2 ** (cell.level - m)
        coarse = grid[:: 2 * step]
        start = 2 ** (m - 1) - 1
        grid[step :: 2 * step] = 0.5 * (coarse[:-1] + coarse[1:]) + cell.centers[start : start + 2 ** (m - 1)]
    xs = np.linspace(ep.x_a, ep.x_b, size)
    return DiscretizedCurve(xs, grid)


def needs_level_up(cell: MultiCell) -> bool:
    """True once every offset width has shrunk to the level's threshold."""
    threshold = cell.schedule.initial_width * cell.schedule.shrink_base ** (-cell.level)
    return bool(np.all(cell.widths <= threshold * _WIDTH_SLACK))


def add_level(cell: MultiCell) -> MultiCell:
    """Append 2^l zero-centred offsets at the midpoints of the current grid.

    The new offsets are zero, so the materialised curve is unchanged and the
    cell keeps its cached value without re-evaluation.
    """
    if not needs_level_up(cell):
        raise ValueError("add_level called before the widths shrank to the level threshold")
    count = 2 ** cell.level
    width = cell.schedule.initial_width * cell.schedule.shrink_base ** (-cell.level)
    centers = np.concatenate((cell.centers, np.zeros(count)))
    widths = np.concatenate((cell.widths, np.full(count, width)))
    return MultiCell(cell.level + 1, centers, widths, cell.schedule, cell.endpoints)


def choose_split_dim(cell: MultiCell) -> int:
    """Widest dimension; among equal widths the oldest.

    Dimensions are stored in creation order (level-major, left to right), so
    the first maximum is simultaneously the oldest and, within a level, the
    leftmost grid node.
    """
    return int(np.argmax(cell.widths))


def split_cell(cell: MultiCell) -> list[MultiCell]:
    """Cut the chosen offset interval into `arity` equal parts.

    Children inherit every other offset verbatim; the middle child is
    bit-identical to the parent and reuses its evaluation.
    """
    d = choose_split_dim(cell)
    k = cell.schedule.arity
    child_width = cell.widths[d] / k
    children = []
    for i in range(k):
        centers = cell.centers.copy()
        centers[d] += (i - (k - 1) / 2.0) * child_width
        widths = cell.widths.copy()
        widths[d] = child_width
        children.append(MultiCell(cell.level, centers, widths, cell.schedule, cell.endpoints))
    return children


def run(instance: FunctionalInstance, schedule: LevelSchedule | None = None,
        budget: int = 1000, limit: soo.DepthLimit | None = None,
        reuse_center: bool = True,
        ) -> tuple[soo.Tree, list[tuple[int, float]], DiscretizedCurve]:
    """Minimise the instance functional by optimistic search over offset cells.

    The tree maximises the negated functional, so an infeasible curve (+inf)
    becomes a -inf score and its cell is never expanded.  Returns the tree,
    the per-evaluation trace of best scores, and the best curve found.
    """
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    schedule = schedule if schedule is not None else LevelSchedule()
    limit = limit if limit is not None else soo.DepthLimit()
    objective = soo.Objective(lambda curve: -instance.evaluate(curve))
    tree = soo.Tree(MultiCell.initial(schedule, instance.endpoints), objective)
    while tree.n < budget:
        if soo.sweep(tree, objective, limit, budget, reuse_center) == 0:
            break
    best_curve = materialize(tree.best_node.cell)
    return tree, list(tree.trace), best_curve
