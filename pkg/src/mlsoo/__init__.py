"""Derivative-free optimisation of 1-D curve functionals.

Core pieces: a simultaneous-optimistic-optimisation engine over boxes
(`mlsoo.soo`), a progressive curve-refinement layer on top of it
(`mlsoo.multilevel`), benchmark functionals with analytic optima
(`mlsoo.functionals`), and an experiment harness with regret traces and CSV
artifacts (`mlsoo.harness`).
"""

from . import functionals, harness, multilevel, soo
from .curves import DiscretizedCurve, EndpointSpec, uniform_curve
from .errors import ConfigError, DomainError, ObjectiveError
from .functionals import (
    PROBLEMS,
    BrachistochroneParams,
    CatenaryParams,
    FunctionalInstance,
    brachistochrone_time,
    catenary_area,
    catenoid_optimum,
    cycloid_optimum,
    quadrature_oracle,
)
from .harness import (
    RunConfig,
    TraceRecord,
    baseline_map,
    compute_regret,
    contraction_check,
    load_config,
    run_experiment,
)
from .multilevel import LevelSchedule, MultiCell, materialize
from .soo import Box, DepthLimit, Objective, Tree, default_depth_limit

__all__ = [
    "Box",
    "BrachistochroneParams",
    "CatenaryParams",
    "ConfigError",
    "DepthLimit",
    "DiscretizedCurve",
    "DomainError",
    "EndpointSpec",
    "FunctionalInstance",
    "LevelSchedule",
    "MultiCell",
    "Objective",
    "ObjectiveError",
    "PROBLEMS",
    "RunConfig",
    "TraceRecord",
    "Tree",
    "baseline_map",
    "brachistochrone_time",
    "catenary_area",
    "catenoid_optimum",
    "compute_regret",
    "contraction_check",
    "cycloid_optimum",
    "default_depth_limit",
    "functionals",
    "harness",
    "load_config",
    "materialize",
    "multilevel",
    "quadrature_oracle",
    "run_experiment",
    "soo",
    "uniform_curve",
]

__version__ = "0.1.0"
