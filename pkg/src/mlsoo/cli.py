"""Command-line front end.

Exit codes: 0 success, 1 configuration error (including bad flags),
2 runtime or domain error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .curves import EndpointSpec
from .errors import ConfigError
from .functionals import (
    PROBLEMS,
    BrachistochroneParams,
    brachistochrone_time,
    catenary_area,
    quadrature_oracle,
)
from .harness import (
    RunConfig,
    contraction_check,
    load_config,
    run_experiment,
    squared_deviation_functional,
)
from .multilevel import LevelSchedule, MultiCell, add_level, dimension_meta, materialize


class _Parser(argparse.ArgumentParser):
    # bad flags are configuration errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_run_options(parser, with_algo=True):
    parser.add_argument("--problem", choices=sorted(PROBLEMS), default=None)
    if with_algo:
        parser.add_argument("--algo", choices=["multilevel", "soo", "soo-fixed"], default=None)
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument("--config", default=None, help="flat key = value config file")
    parser.add_argument("--initial-width", type=float, default=None)
    parser.add_argument("--shrink-base", type=float, default=None)
    parser.add_argument("--arity", type=int, default=None)
    parser.add_argument("--max-level", type=int, default=None)
    parser.add_argument("--baseline-dims", type=int, default=None)
    parser.add_argument("--baseline-low", type=float, default=None)
    parser.add_argument("--baseline-high", type=float, default=None)


def _merge_config(args, trace_out=None, solution_out=None) -> RunConfig:
    """Start from the config file (if any), then apply explicit flags on top."""
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for attr, key in (
        ("problem", "problem"),
        ("algo", "algorithm"),
        ("budget", "budget"),
        ("baseline_dims", "baseline_dims"),
        ("baseline_low", "baseline_low"),
        ("baseline_high", "baseline_high"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    schedule_overrides = {
        key: getattr(args, key)
        for key in ("initial_width", "shrink_base", "arity", "max_level")
        if getattr(args, key, None) is not None
    }
    schedule = replace(config.schedule, **schedule_overrides) if schedule_overrides else config.schedule
    if trace_out is not None:
        overrides["trace_out"] = trace_out
    if solution_out is not None:
        overrides["solution_out"] = solution_out
    return replace(config, schedule=schedule, **overrides)


def _cmd_run(args) -> int:
    config = _merge_config(args, trace_out=args.out, solution_out=args.solution_out)
    result = run_experiment(config)
    final = result.records[-1]
    print(
        f"{config.problem} [{config.algorithm}] evaluations={final.n} "
        f"best={final.best_value:.9g} regret={final.regret:.6g}"
    )
    if config.trace_out:
        print(f"trace written to {config.trace_out}")
    if config.solution_out:
        print(f"solution written to {config.solution_out}")
    return 0


def _cmd_compare(args) -> int:
    results = {}
    for algorithm in ("multilevel", "soo"):
        config = replace(_merge_config(args), algorithm=algorithm)
        results[algorithm] = run_experiment(config)
    for algorithm, result in results.items():
        final = result.records[-1]
        print(f"{algorithm:<10} final regret at n={final.n}: {final.regret:.9g}")
    if results["multilevel"].final_regret <= results["soo"].final_regret:
        print("multilevel matches or beats the fixed-dimension baseline")
    else:
        print("fixed-dimension baseline came out ahead on this run")
    return 0


def _cmd_solution(args) -> int:
    config = _merge_config(args, solution_out=args.out)
    result = run_experiment(config)
    print(
        f"{config.problem} [{config.algorithm}] best={result.best_value:.9g} "
        f"interior points={result.best_curve.n_interior}"
    )
    print(f"solution written to {config.solution_out}")
    return 0


def _cmd_lemma1(args) -> int:
    if args.problem == "quadratic":
        endpoints = EndpointSpec(0.0, 0.0, 1.0, 0.0)
        target = lambda xs: np.sin(np.pi * np.asarray(xs))
        evaluate = squared_deviation_functional(target, endpoints)
        optimum = target
    else:
        instance = PROBLEMS[args.problem]()
        endpoints, evaluate, optimum = instance.endpoints, instance.evaluate, instance.optimum_y
    records = contraction_check(evaluate, optimum, endpoints, max_level=args.levels)
    print("level  l1_distance      ratio")
    for r in records:
        ratio = "-" if r.ratio is None else f"{r.ratio:.6f}"
        print(f"{r.level:>5}  {r.distance:.9e}  {ratio}")
    return 0


def _random_cell(rng, schedule, endpoints, max_level=4) -> MultiCell:
    level = int(rng.integers(1, max_level + 1))
    dims = 2 ** level - 1
    widths = np.array([schedule.width_at(dimension_meta(i).level) for i in range(dims)])
    centers = rng.uniform(-0.5, 0.5, size=dims) * widths
    return MultiCell(level, centers, widths, schedule, endpoints)


def _selftest_checks(n_curves: int):
    rng = np.random.default_rng(20240917)
    endpoints = EndpointSpec(0.0, 0.0, 1.0, 0.0)
    params = BrachistochroneParams(v0=4.0, endpoints=endpoints)
    schedule = LevelSchedule()

    worst_time = worst_area = 0.0
    for _ in range(n_curves):
        curve = materialize(_random_cell(rng, schedule, endpoints))
        t_closed = brachistochrone_time(curve, params)
        t_quad = quadrature_oracle(curve, "brachistochrone", params)
        worst_time = max(worst_time, abs(t_closed - t_quad) / t_quad)
        a_closed = catenary_area(curve)
        a_quad = quadrature_oracle(curve, "catenary")
        worst_area = max(worst_area, abs(a_closed - a_quad) / a_quad)
    yield "time vs quadrature", worst_time <= 1e-6, f"worst rel err {worst_time:.3g}"
    yield "area vs quadrature", worst_area <= 1e-6, f"worst rel err {worst_area:.3g}"

    for name in ("brachistochrone1", "brachistochrone2", "catenary"):
        instance = PROBLEMS[name]()
        sampled = instance.evaluate(instance.optimum_curve(1023))
        gap = sampled - instance.known_optimum
        ok = -1e-9 <= gap <= 2e-3 * abs(instance.known_optimum)
        yield f"{name} optimum", ok, f"sampled-vs-analytic gap {gap:.3g}"

    max_diff = 0.0
    for _ in range(50):
        cell = _random_cell(rng, schedule, endpoints)
        # shrink the widths below the level threshold so a level-up is legal
        cap = schedule.width_at(cell.level + 1)
        shrunk = MultiCell(cell.level, cell.centers,
                           cap * rng.uniform(0.2, 1.0, size=cell.widths.size),
                           schedule, endpoints)
        before = materialize(shrunk)
        after = materialize(add_level(shrunk))
        max_diff = max(max_diff, float(np.max(np.abs(after.ys[::2] - before.ys))))
    yield "refinement invariance", max_diff == 0.0, f"max common-grid diff {max_diff:.3g}"


def _cmd_selftest(args) -> int:
    failures = 0
    for name, ok, detail in _selftest_checks(args.curves):
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} selftest check(s) failed", file=sys.stderr)
        return 2
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="mlsoo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one algorithm on one benchmark")
    _add_run_options(p_run)
    p_run.add_argument("--out", default=None, help="trace CSV path")
    p_run.add_argument("--solution-out", default=None, help="solution CSV path")
    p_run.set_defaults(handler=_cmd_run)

    p_cmp = sub.add_parser("compare", help="run both algorithms and print final regrets")
    _add_run_options(p_cmp, with_algo=False)
    p_cmp.set_defaults(handler=_cmd_compare)

    p_sol = sub.add_parser("solution", help="emit the best curve next to the analytic optimum")
    _add_run_options(p_sol)
    p_sol.add_argument("--out", required=True, help="solution CSV path")
    p_sol.set_defaults(handler=_cmd_solution)

    p_lem = sub.add_parser("lemma1", help="empirical level-contraction diagnostic")
    p_lem.add_argument("--problem", choices=["quadratic", *sorted(PROBLEMS)], default="quadratic")
    p_lem.add_argument("--levels", type=int, default=5)
    p_lem.set_defaults(handler=_cmd_lemma1)

    p_st = sub.add_parser("selftest", help="oracle agreement and invariance checks")
    p_st.add_argument("--curves", type=int, default=200)
    p_st.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # domain or runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
