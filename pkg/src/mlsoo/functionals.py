"""Benchmark functionals over piecewise-linear curves.

Two built-in functionals: travel time of a bead sliding along the curve
(brachistochrone) and area of the surface obtained by rotating the curve
around the x-axis (catenary).  Both have closed-form per-segment values, a
slow quadrature twin used only for verification, and analytic optimum
generators (cycloid, catenoid) that supply the reference value for regret.

Coordinate convention: y is measured downward, so the bead speed obeys
v^2 = v0^2 + 2*g*y and larger y means faster.  The area functional uses |y|
as the radius of revolution and is orientation-independent.

All functionals return a plain float; math.inf marks an infeasible curve
(the bead cannot reach the far end).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .curves import DiscretizedCurve, EndpointSpec
from .errors import DomainError

__all__ = [
    "BrachistochroneParams",
    "CatenaryParams",
    "FunctionalInstance",
    "brachistochrone_time",
    "catenary_area",
    "cycloid_optimum",
    "catenoid_optimum",
    "quadrature_oracle",
    "brachistochrone_case1",
    "brachistochrone_case2",
    "catenary_problem",
    "PROBLEMS",
]


@dataclass(frozen=True)
class BrachistochroneParams:
    v0: float
    endpoints: EndpointSpec
    g: float = 1.0

    def __post_init__(self):
        if self.v0 < 0.0:
            raise ValueError("initial speed must be nonnegative")
        if self.g <= 0.0:
            raise ValueError("gravity must be positive")


@dataclass(frozen=True)
class CatenaryParams:
    endpoints: EndpointSpec


def brachistochrone_time(curve: DiscretizedCurve, params: BrachistochroneParams) -> float:
    """Travel time along the curve, or math.inf if the far end is unreachable.

    Node speeds follow from energy conservation; on a straight segment v^2 is
    linear in arc length, so the per-segment time 2*L/(v1+v2) is exact.
    """
    if not curve.matches_endpoints(params.endpoints):
        raise ValueError("curve endpoints do not match the problem endpoints")
    v_sq = params.v0 ** 2 + 2.0 * params.g * curve.ys
    if float(np.min(v_sq)) < 0.0:
        return math.inf
    v = np.sqrt(v_sq)
    seg = np.hypot(np.diff(curve.xs), np.diff(curve.ys))
    pair = v[:-1] + v[1:]
    if np.any(pair == 0.0):
        return math.inf
    return float(np.sum(2.0 * seg / pair))


def catenary_area(curve: DiscretizedCurve) -> float:
    """Area of the surface of revolution of the curve around the x-axis.

    Each segment contributes a frustum pi*(|y1|+|y2|)*L; segments crossing
    y = 0 are split at the crossing first, which keeps the formula exact.
    """
    y1, y2 = curve.ys[:-1], curve.ys[1:]
    seg = np.hypot(np.diff(curve.xs), y2 - y1)
    area = math.pi * (np.abs(y1) + np.abs(y2)) * seg
    crossing = y1 * y2 < 0.0
    if np.any(crossing):
        t = y1[crossing] / (y1[crossing] - y2[crossing])
        area[crossing] = math.pi * seg[crossing] * (
            np.abs(y1[crossing]) * t + np.abs(y2[crossing]) * (1.0 - t)
        )
    return float(np.sum(area))


# ---------------------------------------------------------------------------
# analytic optima


def _clamped_acos(c: float) -> float:
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class CycloidSolution:
    """Fastest-descent cycloid through the endpoints, in y-down coordinates."""

    scale: float          # rolling-circle radius
    t_start: float
    t_end: float
    endpoints: EndpointSpec
    gravity: float

    @property
    def min_time(self) -> float:
        return math.sqrt(self.scale / self.gravity) * (self.t_end - self.t_start)

    def position(self, t):
        t = np.asarray(t, dtype=float)
        a, t0 = self.scale, self.t_start
        x = self.endpoints.x_a + a * ((t - np.sin(t)) - (t0 - math.sin(t0)))
        y = self.endpoints.y_a + a * (math.cos(t0) - np.cos(t))
        return x, y

    def y_of_x(self, xs):
        """Invert the monotone x(t) per node by bisection."""
        xs = np.asarray(xs, dtype=float)
        lo = np.full(xs.shape, self.t_start)
        hi = np.full(xs.shape, self.t_end)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = self.position(mid)[0] < xs
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        y = self.position(0.5 * (lo + hi))[1]
        return y if y.shape else float(y)

    def curve(self, n_interior: int) -> DiscretizedCurve:
        ep = self.endpoints
        xs = np.linspace(ep.x_a, ep.x_b, n_interior + 2)
        ys = np.asarray(self.y_of_x(xs), dtype=float)
        ys[0], ys[-1] = ep.y_a, ep.y_b
        return DiscretizedCurve(xs, ys)


def cycloid_optimum(params: BrachistochroneParams) -> CycloidSolution:
    """Solve for the cycloid through the endpoints with the given launch speed.

    The virtual cusp sits v0^2/(2g) above the start; the radius and parameter
    range follow from matching both end heights and the x span.  The descending
    arc and the through-the-trough arc are both tried; each reduces to a scalar
    root in the radius, solved by bracketing bisection.
    """
    ep = params.endpoints
    drop0 = params.v0 ** 2 / (2.0 * params.g)
    drop1 = drop0 + (ep.y_b - ep.y_a)
    if drop1 < 0.0:
        raise DomainError("end point lies above the reachable height for this launch speed")
    span = ep.span
    a_floor = max(drop0, drop1) / 2.0

    def angles(a):
        t0 = _clamped_acos(1.0 - drop0 / a)
        t_end_mirror = _clamped_acos(1.0 - drop1 / a)
        return t0, t_end_mirror

    def span_of(a, through_trough):
        t0, tau = angles(a)
        t1 = 2.0 * math.pi - tau if through_trough else tau
        if t1 < t0:
            return math.nan
        return a * ((t1 - math.sin(t1)) - (t0 - math.sin(t0)))

    def solve_branch(through_trough):
        lo = a_floor if a_floor > 0.0 else span * 1e-12
        f = lambda a: span_of(a, through_trough) - span
        f_lo = f(lo)
        if math.isnan(f_lo):
            return None
        if abs(f_lo) <= 1e-13 * span:
            return lo
        hi = lo
        for _ in range(200):
            hi *= 2.0
            f_hi = f(hi)
            if math.isnan(f_hi):
                return None
            if f_lo * f_hi <= 0.0:
                return float(brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16))
            lo, f_lo = hi, f_hi
        return None

    best = None
    for through_trough in (True, False):
        a = solve_branch(through_trough)
        if a is None:
            continue
        t0, tau = angles(a)
        t1 = 2.0 * math.pi - tau if through_trough else tau
        sol = CycloidSolution(a, t0, t1, ep, params.g)
        if best is None or sol.min_time < best.min_time:
            best = sol
    if best is None:
        raise DomainError("no cycloid through the endpoints with the given launch speed")
    return best


@dataclass(frozen=True)
class CatenoidSolution:
    """Stable minimal surface of revolution between two equal-height rings."""

    radius: float         # 'a' in y = a*cosh((x - x_mid)/a)
    endpoints: EndpointSpec

    @property
    def x_mid(self) -> float:
        return 0.5 * (self.endpoints.x_a + self.endpoints.x_b)

    @property
    def min_area(self) -> float:
        a, h = self.radius, 0.5 * self.endpoints.span
        return 2.0 * math.pi * a * (h + 0.5 * a * math.sinh(2.0 * h / a))

    def y_of_x(self, xs):
        xs = np.asarray(xs, dtype=float)
        return self.radius * np.cosh((xs - self.x_mid) / self.radius)

    def curve(self, n_interior: int) -> DiscretizedCurve:
        ep = self.endpoints
        xs = np.linspace(ep.x_a, ep.x_b, n_interior + 2)
        ys = np.asarray(self.y_of_x(xs), dtype=float)
        ys[0], ys[-1] = ep.y_a, ep.y_b
        return DiscretizedCurve(xs, ys)


def catenoid_optimum(params: CatenaryParams) -> CatenoidSolution:
    """Solve a*cosh(h/a) = end height for the larger (stable) root.

    When the rings are too far apart no catenoid exists and the degenerate
    two-disk (Goldschmidt) area is reported in the raised error.
    """
    ep = params.endpoints
    if ep.y_a != ep.y_b:
        raise DomainError("catenoid solver requires equal end heights")
    y_end = float(ep.y_a)
    if y_end <= 0.0:
        raise DomainError("end height must be positive for a catenoid to exist")
    h = 0.5 * ep.span
    # residual a*cosh(h/a) - y_end is convex in a with its minimum where
    # u*tanh(u) = 1, u = h/a
    u_star = brentq(lambda u: u * math.tanh(u) - 1.0, 0.5, 2.0, xtol=1e-15)
    a_star = h / u_star
    residual = lambda a: a * math.cosh(h / a) - y_end
    if residual(a_star) > 0.0:
        goldschmidt = math.pi * (ep.y_a ** 2 + ep.y_b ** 2)
        raise DomainError(
            "rings are too far apart for a catenoid; the degenerate two-disk "
            f"area is {goldschmidt!r}"
        )
    a = float(brentq(residual, a_star, y_end, xtol=1e-15, rtol=8.9e-16))
    return CatenoidSolution(a, ep)


# ---------------------------------------------------------------------------
# quadrature twin (verification only)


def quadrature_oracle(curve: DiscretizedCurve, kind: str, params: Any = None) -> float:
    """Recompute a functional by adaptive per-segment integration.

    Deliberately ignores the closed forms above: integrates ds/v(y) or
    2*pi*|y| ds segment by segment.  Slow; used only in tests and selftest.
    """
    if kind == "brachistochrone":
        return _quadrature_time(curve, params)
    if kind == "catenary":
        return _quadrature_area(curve)
    raise ValueError(f"unknown functional kind {kind!r}")


def _quadrature_time(curve: DiscretizedCurve, params: BrachistochroneParams) -> float:
    v_sq = params.v0 ** 2 + 2.0 * params.g * curve.ys
    if float(np.min(v_sq)) < 0.0:
        return math.inf
    v = np.sqrt(v_sq)
    if np.any(v[:-1] + v[1:] == 0.0):
        return math.inf
    total = 0.0
    lengths = np.hypot(np.diff(curve.xs), np.diff(curve.ys))
    for length, a0, a1 in zip(lengths, v_sq[:-1], v_sq[1:]):
        slope = (a1 - a0) / length
        val, _ = quad(
            lambda s: 1.0 / math.sqrt(a0 + slope * s),
            0.0,
            length,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=500,
        )
        total += val
    return total


def _quadrature_area(curve: DiscretizedCurve) -> float:
    total = 0.0
    lengths = np.hypot(np.diff(curve.xs), np.diff(curve.ys))
    for length, y0, y1 in zip(lengths, curve.ys[:-1], curve.ys[1:]):
        slope = (y1 - y0) / length
        kinks = [y0 / (y0 - y1) * length] if y0 * y1 < 0.0 else None
        val, _ = quad(
            lambda s: 2.0 * math.pi * abs(y0 + slope * s),
            0.0,
            length,
            points=kinks,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=500,
        )
        total += val
    return total


# ---------------------------------------------------------------------------
# benchmark instances


@dataclass(frozen=True)
class FunctionalInstance:
    """A benchmark functional with its endpoints and (optional) analytic optimum."""

    name: str
    kind: str
    endpoints: EndpointSpec
    evaluate: Callable[[DiscretizedCurve], float]
    params: Any = None
    known_optimum: float | None = None
    optimum_curve: Callable[[int], DiscretizedCurve] | None = field(default=None, repr=False)
    optimum_y: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)


def brachistochrone_case1() -> FunctionalInstance:
    """Level start and end one unit apart, launch speed sqrt(2/(2+pi))."""
    ep = EndpointSpec(0.0, 0.0, 1.0, 0.0)
    params = BrachistochroneParams(v0=math.sqrt(2.0 / (2.0 + math.pi)), endpoints=ep)
    sol = cycloid_optimum(params)
    return FunctionalInstance(
        name="brachistochrone1",
        kind="brachistochrone",
        endpoints=ep,
        evaluate=lambda curve: brachistochrone_time(curve, params),
        params=params,
        known_optimum=math.pi / math.sqrt(2.0 + math.pi),
        optimum_curve=sol.curve,
        optimum_y=sol.y_of_x,
    )


def brachistochrone_case2() -> FunctionalInstance:
    """End point 2/(2+pi) below the start, launch speed 2/sqrt(2+pi)."""
    ep = EndpointSpec(0.0, 0.0, 1.0, 2.0 / (2.0 + math.pi))
    params = BrachistochroneParams(v0=2.0 / math.sqrt(2.0 + math.pi), endpoints=ep)
    sol = cycloid_optimum(params)
    return FunctionalInstance(
        name="brachistochrone2",
        kind="brachistochrone",
        endpoints=ep,
        evaluate=lambda curve: brachistochrone_time(curve, params),
        params=params,
        known_optimum=math.pi / math.sqrt(4.0 + 2.0 * math.pi),
        optimum_curve=sol.curve,
        optimum_y=sol.y_of_x,
    )


def catenary_problem(end_height: float = 1.0) -> FunctionalInstance:
    """Rings of the given height at x = -1/2 and x = +1/2."""
    ep = EndpointSpec(-0.5, end_height, 0.5, end_height)
    sol = catenoid_optimum(CatenaryParams(ep))
    return FunctionalInstance(
        name="catenary",
        kind="catenary",
        endpoints=ep,
        evaluate=catenary_area,
        params=CatenaryParams(ep),
        known_optimum=sol.min_area,
        optimum_curve=sol.curve,
        optimum_y=sol.y_of_x,
    )


PROBLEMS: dict[str, Callable[[], FunctionalInstance]] = {
    "brachistochrone1": brachistochrone_case1,
    "brachistochrone2": brachistochrone_case2,
    "catenary": catenary_problem,
}
