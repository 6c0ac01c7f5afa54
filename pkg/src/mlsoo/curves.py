"""Piecewise-linear curves with fixed endpoints."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EndpointSpec:
    """Fixed endpoints (x_a, y_a) and (x_b, y_b) shared by all candidate curves."""

    x_a: float
    y_a: float
    x_b: float
    y_b: float

    def __post_init__(self):
        if not self.x_a < self.x_b:
            raise ValueError(f"endpoints must satisfy x_a < x_b, got {self.x_a!r} and {self.x_b!r}")

    @property
    def span(self) -> float:
        return self.x_b - self.x_a


class DiscretizedCurve:
    """A curve materialised as nodes on a strictly increasing x grid.

    Between nodes the curve is the linear interpolant; the first and last
    nodes are the fixed endpoints.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("xs and ys must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(xs) > 0.0):
            raise ValueError("xs must be strictly increasing")
        self.xs = xs
        self.ys = ys

    @property
    def n_interior(self) -> int:
        return int(self.xs.size - 2)

    def y_at(self, x):
        return np.interp(x, self.xs, self.ys)

    def matches_endpoints(self, ep: EndpointSpec) -> bool:
        return (
            self.xs[0] == ep.x_a
            and self.ys[0] == ep.y_a
            and self.xs[-1] == ep.x_b
            and self.ys[-1] == ep.y_b
        )

    def __repr__(self):
        return f"DiscretizedCurve(<{self.xs.size} nodes on [{self.xs[0]}, {self.xs[-1]}]>)"


def uniform_curve(ep: EndpointSpec, interior_ys) -> DiscretizedCurve:
    """Curve through equally spaced interior y-values, endpoints appended exactly."""
    interior_ys = np.asarray(interior_ys, dtype=float)
    xs = np.linspace(ep.x_a, ep.x_b, interior_ys.size + 2)
    ys = np.concatenate(([ep.y_a], interior_ys, [ep.y_b]))
    return DiscretizedCurve(xs, ys)
