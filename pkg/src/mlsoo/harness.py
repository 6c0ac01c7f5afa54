"""Experiment orchestration: benchmark runs, regret traces, CSV artifacts,
and the empirical level-contraction diagnostic.

Everything here is deterministic; running the same configuration twice
produces byte-identical CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import multilevel, soo
from .curves import DiscretizedCurve, EndpointSpec, uniform_curve
from .errors import ConfigError
from .functionals import PROBLEMS, FunctionalInstance
from .multilevel import LevelSchedule

__all__ = [
    "ContractionRecord",
    "ExperimentResult",
    "RunConfig",
    "TraceRecord",
    "baseline_map",
    "compute_regret",
    "contraction_check",
    "load_config",
    "read_trace_csv",
    "run_experiment",
    "squared_deviation_functional",
    "write_solution_csv",
    "write_trace_csv",
]

REGRET_FLOOR = 1e-16

ALGORITHMS = ("multilevel", "soo")
_ALGORITHM_ALIASES = {"multilevel": "multilevel", "soo": "soo", "soo-fixed": "soo"}


@dataclass(frozen=True)
class TraceRecord:
    n: int
    best_value: float      # minimisation view: best functional value so far
    regret: float
    log10_regret: float


def compute_regret(best_value: float, known_optimum: float) -> tuple[float, float]:
    """Gap to the optimum plus its log10, floored at 1e-16 for exact hits."""
    if not math.isfinite(known_optimum):
        raise ValueError("known optimum must be finite")
    regret = best_value - known_optimum
    if regret == math.inf:
        return regret, math.inf
    return regret, math.log10(max(regret, REGRET_FLOOR))


def baseline_map(point, endpoints: EndpointSpec) -> DiscretizedCurve:
    """Fixed-dimension embedding: coordinate d is the y-value at the d-th of
    D equally spaced interior nodes."""
    return uniform_curve(endpoints, point)


@dataclass(frozen=True)
class RunConfig:
    problem: str = "brachistochrone1"
    algorithm: str = "multilevel"
    budget: int = 1000
    schedule: LevelSchedule = field(default_factory=LevelSchedule)
    baseline_dims: int = 7
    baseline_low: float = 0.0
    baseline_high: float = 1.0
    # the published fixed-dimension search re-evaluates every child centre;
    # set True to grant the baseline the same centre reuse as the curve search
    baseline_reuse: bool = False
    trace_out: str | None = None
    solution_out: str | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if _ALGORITHM_ALIASES.get(self.algorithm) is None:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.baseline_dims < 1:
            raise ConfigError("baseline_dims must be >= 1")
        if not self.baseline_low < self.baseline_high:
            raise ConfigError("baseline bounds must satisfy low < high")


@dataclass
class ExperimentResult:
    config: RunConfig
    instance: FunctionalInstance
    records: list[TraceRecord]
    best_curve: DiscretizedCurve
    best_value: float

    @property
    def final_regret(self) -> float:
        return self.records[-1].regret

    @property
    def evaluations(self) -> int:
        return self.records[-1].n

    def solution_grid(self):
        """Best curve and the analytic optimum sampled on the same x grid."""
        if self.instance.optimum_y is None:
            raise ConfigError(f"instance {self.instance.name!r} has no analytic optimum curve")
        xs = self.best_curve.xs
        return xs, self.best_curve.ys, np.asarray(self.instance.optimum_y(xs), dtype=float)


def run_experiment(config: RunConfig, instance: FunctionalInstance | None = None) -> ExperimentResult:
    """Run one algorithm on one benchmark and emit trace/solution artifacts."""
    if instance is None:
        if config.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {config.problem!r}")
        instance = PROBLEMS[config.problem]()
    if instance.known_optimum is None:
        raise ConfigError(f"instance {instance.name!r} has no known optimum; cannot report regret")

    algorithm = _ALGORITHM_ALIASES[config.algorithm]
    if algorithm == "multilevel":
        _, trace, best_curve = multilevel.run(instance, config.schedule, config.budget)
    else:
        box = soo.Box.cube(config.baseline_low, config.baseline_high, config.baseline_dims)
        objective = soo.Objective(
            lambda point: -instance.evaluate(baseline_map(point, instance.endpoints))
        )
        tree, trace = soo.run(objective, box, config.budget, arity=config.schedule.arity,
                              reuse_center=config.baseline_reuse)
        best_curve = baseline_map(tree.best_node.cell.centers, instance.endpoints)

    records = []
    for n, score in trace:
        best_value = -score
        regret, log_regret = compute_regret(best_value, instance.known_optimum)
        records.append(TraceRecord(n, best_value, regret, log_regret))

    result = ExperimentResult(config, instance, records, best_curve, records[-1].best_value)
    if config.trace_out:
        write_trace_csv(records, config.trace_out)
    if config.solution_out:
        write_solution_csv(*result.solution_grid(), config.solution_out)
    return result


# ---------------------------------------------------------------------------
# CSV artifacts


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trace_csv(records: Sequence[TraceRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("n,best_value,regret,log10_regret\n")
        for r in records:
            fh.write(f"{r.n},{_fmt(r.best_value)},{_fmt(r.regret)},{_fmt(r.log10_regret)}\n")


def read_trace_csv(path: str) -> list[TraceRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "n,best_value,regret,log10_regret":
            raise ValueError(f"unexpected trace header {header!r}")
        for line in fh:
            n, best_value, regret, log_regret = line.strip().split(",")
            records.append(TraceRecord(int(n), float(best_value), float(regret), float(log_regret)))
    return records


def write_solution_csv(xs, y_found, y_optimal, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,y_found,y_optimal\n")
        for x, yf, yo in zip(xs, y_found, y_optimal):
            fh.write(f"{_fmt(x)},{_fmt(yf)},{_fmt(yo)}\n")


# ---------------------------------------------------------------------------
# flat config files


_SCHEDULE_KEYS = {"initial_width": float, "shrink_base": float, "arity": int, "max_level": int}
_CONFIG_KEYS = {
    "problem": str,
    "algorithm": str,
    "budget": int,
    "baseline_dims": int,
    "baseline_low": float,
    "baseline_high": float,
    "trace_out": str,
    "solution_out": str,
}


def load_config(path: str) -> RunConfig:
    """Parse `key = value` lines into a RunConfig; unknown keys are errors."""
    values: dict = {}
    schedule_values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            try:
                if key in _SCHEDULE_KEYS:
                    schedule_values[key] = _SCHEDULE_KEYS[key](value)
                elif key in _CONFIG_KEYS:
                    values[key] = _CONFIG_KEYS[key](value)
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    config = RunConfig(**values)
    if schedule_values:
        config = replace(config, schedule=replace(config.schedule, **schedule_values))
    return config


# ---------------------------------------------------------------------------
# empirical level-contraction check


@dataclass(frozen=True)
class ContractionRecord:
    level: int
    distance: float              # L1 distance between the analytic optimum and
    ratio: float | None          # the best level-l curve; ratio to the previous level


def squared_deviation_functional(target: Callable, endpoints: EndpointSpec,
                                 order: int = 12) -> Callable[[DiscretizedCurve], float]:
    """Integral of (curve - target)^2, by per-segment Gauss-Legendre quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def evaluate(curve: DiscretizedCurve) -> float:
        x0, x1 = curve.xs[:-1], curve.xs[1:]
        half = 0.5 * (x1 - x0)
        xs = 0.5 * (x0 + x1)[:, None] + half[:, None] * nodes[None, :]
        t = (xs - x0[:, None]) / (x1 - x0)[:, None]
        poly = curve.ys[:-1, None] * (1.0 - t) + curve.ys[1:, None] * t
        residual = (poly - target(xs)) ** 2
        return float(np.sum(half[:, None] * weights[None, :] * residual))

    return evaluate


def _refine_coordinate(f: Callable[[float], float], y: float, f_y: float,
                       probe: float, tol: float) -> tuple[float, float]:
    """Successive parabolic interpolation toward the 1-D minimiser.

    Exact in one step for quadratic objectives; rejected steps shrink the
    probe, so non-finite or concave regions are backed away from.
    """
    d = probe
    for _ in range(60):
        f_plus, f_minus = f(y + d), f(y - d)
        curvature = f_plus - 2.0 * f_y + f_minus
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)) or curvature <= 0.0:
            d *= 0.25
            if d < 1e-14:
                break
            continue
        step = -0.5 * d * (f_plus - f_minus) / curvature
        step = max(-8.0 * d, min(8.0 * d, step))
        f_new = f(y + step)
        if f_new <= f_y:
            y, f_y = y + step, f_new
            if abs(step) < 0.1 * tol:
                break
            d = max(abs(step), 0.1 * tol)
        else:
            d *= 0.25
            if d < 1e-14:
                break
    return y, f_y


def contraction_check(evaluate: Callable[[DiscretizedCurve], float],
                      optimum: Callable, endpoints: EndpointSpec,
                      max_level: int = 5, tol: float = 1e-10,
                      max_passes: int = 200) -> list[ContractionRecord]:
    """How fast the best level-l curve approaches the analytic optimum.

    For each level, the best curve over the 2^l - 1 interior values is found
    by coordinate descent started from the optimum interpolated on the grid;
    the L1 distance to the optimum is then computed by dense quadrature.
    """
    records: list[ContractionRecord] = []
    previous = None
    for level in range(1, max_level + 1):
        xs = np.linspace(endpoints.x_a, endpoints.x_b, 2 ** level + 1)
        ys = np.asarray(optimum(xs), dtype=float)
        ys[0], ys[-1] = endpoints.y_a, endpoints.y_b
        ys = _coordinate_descent(evaluate, xs, ys, tol, max_passes)
        distance = _l1_distance(xs, ys, optimum)
        ratio = None if previous is None else distance / previous
        records.append(ContractionRecord(level, distance, ratio))
        previous = distance
    return records


def _coordinate_descent(evaluate, xs, ys, tol: float, max_passes: int):
    ys = ys.copy()

    def objective_at(i, value):
        trial = ys.copy()
        trial[i] = value
        return evaluate(DiscretizedCurve(xs, trial))

    f_current = evaluate(DiscretizedCurve(xs, ys))
    for _ in range(max_passes):
        largest_move = 0.0
        for i in range(1, ys.size - 1):
            y_new, f_current = _refine_coordinate(
                lambda v: objective_at(i, v), ys[i], f_current, probe=0.05, tol=tol
            )
            largest_move = max(largest_move, abs(y_new - ys[i]))
            ys[i] = y_new
        if largest_move < tol:
            return ys
    raise RuntimeError(
        f"coordinate descent did not converge to {tol} within {max_passes} passes"
    )


def _l1_distance(xs, ys, target, samples_per_segment: int = 4000) -> float:
    """Integral of |polyline - target| by dense per-segment midpoint quadrature."""
    offsets = (np.arange(samples_per_segment) + 0.5) / samples_per_segment
    x0, x1 = xs[:-1, None], xs[1:, None]
    sample_x = x0 + offsets[None, :] * (x1 - x0)
    poly = ys[:-1, None] + offsets[None, :] * (ys[1:, None] - ys[:-1, None])
    gaps = np.abs(poly - target(sample_x))
    widths = (xs[1:] - xs[:-1]) / samples_per_segment
    return float(np.sum(gaps * widths[:, None]))
