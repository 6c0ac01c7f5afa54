"""Simultaneous optimistic optimisation over a fixed-dimension box.

The optimiser maintains a K-ary partition tree whose nodes carry the
objective value at their cell centre.  Each sweep walks the depths in
increasing order and expands, per depth, the best leaf provided its value is
at least the best value already expanded this sweep; a depth limit that
grows with the evaluation count keeps the search from turning into pure
depth-first descent.  Children born during a sweep only become candidates on
the next sweep.

Maximisation convention throughout.  A value of -inf marks an infeasible
cell: such leaves are never expanded, so a depth whose every leaf is
infeasible is simply skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ConfigError, ObjectiveError

__all__ = [
    "Box",
    "BoxCell",
    "DepthLimit",
    "Node",
    "Objective",
    "Tree",
    "default_depth_limit",
    "expand",
    "run",
    "select_expandable",
    "sqrt_depth_limit",
    "sweep",
]


def sqrt_depth_limit(n: int) -> int:
    """ceil(sqrt(n)), computed in exact integer arithmetic."""
    if n < 1:
        raise ValueError("evaluation count must be >= 1")
    return math.isqrt(n - 1) + 1


def default_depth_limit(n: int) -> int:
    """2 * ceil(sqrt(n)): sqrt growth, with headroom for deep refinement.

    The plain sqrt cap pins desk-scale curve searches to their cap depth well
    before the budget runs out; doubling it keeps the cap's growth rate while
    leaving the per-sweep value threshold as the effective brake.
    """
    return 2 * sqrt_depth_limit(n)


@dataclass(frozen=True)
class DepthLimit:
    """Maximum tree depth allowed after n evaluations; nondecreasing in n."""

    rule: Callable[[int], int] = default_depth_limit

    def __call__(self, n: int) -> int:
        return self.rule(n)


@dataclass(frozen=True)
class Box:
    """Axis-aligned search box: one (lower, upper) pair per dimension."""

    dims: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.dims) < 1:
            raise ValueError("box needs at least one dimension")
        for lo, hi in self.dims:
            if not lo < hi:
                raise ValueError(f"bad bounds ({lo!r}, {hi!r}): lower must be < upper")

    @classmethod
    def cube(cls, lower: float, upper: float, ndim: int) -> "Box":
        return cls(((float(lower), float(upper)),) * ndim)


class Objective:
    """Counts evaluations of a deterministic scalar objective (maximised).

    NaN and +inf results abort the run; -inf is the infeasible marker and is
    passed through.
    """

    def __init__(self, fn: Callable[[Any], float]):
        self.fn = fn
        self.evaluation_count = 0

    def evaluate(self, point) -> float:
        value = float(self.fn(point))
        if math.isnan(value) or value == math.inf:
            raise ObjectiveError(f"objective returned {value!r}")
        self.evaluation_count += 1
        return value


class BoxCell:
    """A hyperrectangular cell, stored as per-dimension (centre, width)."""

    __slots__ = ("centers", "widths", "arity")

    def __init__(self, centers, widths, arity: int = 3):
        self.centers = np.asarray(centers, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        self.arity = arity

    @classmethod
    def from_box(cls, box: Box, arity: int = 3) -> "BoxCell":
        lo = np.array([d[0] for d in box.dims])
        hi = np.array([d[1] for d in box.dims])
        return cls(0.5 * (lo + hi), hi - lo, arity)

    @property
    def point(self):
        return self.centers

    def split(self) -> list["BoxCell"]:
        """Cut the longest dimension (ties: lowest index) into `arity` equal parts."""
        d = int(np.argmax(self.widths))
        child_width = self.widths[d] / self.arity
        children = []
        for i in range(self.arity):
            centers = self.centers.copy()
            centers[d] += (i - (self.arity - 1) / 2.0) * child_width
            widths = self.widths.copy()
            widths[d] = child_width
            children.append(BoxCell(centers, widths, self.arity))
        return children


@dataclass(eq=False)
class Node:
    cell: Any
    depth: int
    value: float
    order: int
    children: list["Node"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class Tree:
    """Partition tree plus run bookkeeping (evaluation count, best, trace)."""

    def __init__(self, root_cell, objective: Objective):
        self.n = 0
        self.depth = 0
        self.trace: list[tuple[int, float]] = []
        self.best_node: Node | None = None
        self._by_depth: dict[int, list[Node]] = {}
        self._next_order = 0
        self.root = self._grow(root_cell, 0, objective)

    def _grow(self, cell, depth: int, objective: Objective, value: float | None = None) -> Node:
        """Attach a node, evaluating the objective unless a value is inherited."""
        fresh = value is None
        if fresh:
            value = objective.evaluate(cell.point)
        node = Node(cell=cell, depth=depth, value=value, order=self._next_order)
        self._next_order += 1
        self._by_depth.setdefault(depth, []).append(node)
        if depth > self.depth:
            self.depth = depth
        if self.best_node is None or value > self.best_node.value:
            self.best_node = node
        if fresh:
            self.n += 1
            self.trace.append((self.n, self.best_node.value))
        return node

    @property
    def best(self) -> tuple[Any, float]:
        return self.best_node.cell.point, self.best_node.value

    def nodes_at(self, depth: int) -> Sequence[Node]:
        return self._by_depth.get(depth, ())


def select_expandable(tree: Tree, depth: int, threshold: float = -math.inf,
                      created_before: int | None = None) -> Node | None:
    """Best leaf at exactly `depth`, if its value reaches `threshold`.

    Ties go to the earliest-created leaf; infeasible (-inf) leaves are never
    candidates; `created_before` excludes nodes born during the current sweep.
    """
    best = None
    for node in tree.nodes_at(depth):
        if node.children:
            continue
        if created_before is not None and node.order >= created_before:
            continue
        if node.value == -math.inf:
            continue
        if best is None or node.value > best.value:
            best = node
    if best is not None and best.value >= threshold:
        return best
    return None


def expand(tree: Tree, node: Node, objective: Objective, reuse_center: bool = True) -> list[Node]:
    """Split a leaf and evaluate its children.

    With `reuse_center` the middle child's centre coincides with the parent's,
    so the parent value is inherited without a fresh evaluation.
    """
    if node.children:
        raise ValueError("only leaves can be expanded")
    cells = node.cell.split()
    k = len(cells)
    middle = k // 2 if k % 2 == 1 else None
    for i, cell in enumerate(cells):
        inherited = node.value if (reuse_center and i == middle) else None
        node.children.append(tree._grow(cell, node.depth + 1, objective, value=inherited))
    return node.children


def sweep(tree: Tree, objective: Objective, limit: DepthLimit | None = None,
          budget: int | None = None, reuse_center: bool = True) -> int:
    """One pass over all depths; returns the number of expansions performed.

    The depth range and the candidate set are frozen at sweep entry, so the
    children created here compete only from the next sweep on.  Stops early
    once `budget` fresh evaluations have been spent.
    """
    limit = limit if limit is not None else DepthLimit()
    snapshot = tree._next_order
    top = min(tree.depth, limit(tree.n))
    threshold = -math.inf
    expansions = 0
    for depth in range(top + 1):
        if budget is not None and tree.n >= budget:
            break
        node = select_expandable(tree, depth, threshold, snapshot)
        if node is None:
            continue
        expand(tree, node, objective, reuse_center)
        threshold = node.value
        expansions += 1
    return expansions


def run(objective: Objective, box: Box, budget: int, limit: DepthLimit | None = None,
        arity: int = 3, reuse_center: bool = True) -> tuple[Tree, list[tuple[int, float]]]:
    """Evaluate the box centre, then sweep until `budget` fresh evaluations.

    The trace holds one (n, best value so far) record per fresh evaluation.
    Terminates early if a sweep makes no expansion (every candidate leaf is
    depth-capped or infeasible), since no further progress is possible.
    """
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    if reuse_center and arity % 2 == 0:
        raise ConfigError("centre reuse requires an odd split arity")
    limit = limit if limit is not None else DepthLimit()
    tree = Tree(BoxCell.from_box(box, arity), objective)
    while tree.n < budget:
        if sweep(tree, objective, limit, budget, reuse_center) == 0:
            break
    return tree, list(tree.trace)
