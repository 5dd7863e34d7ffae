"""Incremental near-optimal inspection planning.

This package plans paths for a robot whose sensor must see a set of points of
interest (POIs). A roadmap is grown by coverage-informed sampling, and a
near-optimal graph search over (vertex, covered-set) pairs returns the shortest
walk that sees nearly everything the roadmap can see. Edges are validated
lazily and search lists are reused as the roadmap grows and the bounds tighten.

Features:
    - **Scenes**: 2D/3D workspaces with sphere and box obstacles, range/FOV
      sensors with optional occlusion
    - **Robots**: planar, planar with yaw, and spatial with yaw and pitch
    - **Planner variants**: baseline ``iris`` plus ``c``, ``l``, ``cl`` and ``cli``
      enhancement combinations
    - **Exact oracle**: brute-force optimum on small explicit graphs
    - **Traces**: per-iteration CSVs, xarray datasets and an ``iris`` accessor

Usage:
    Library::

        from iris_inspect import PlannerConfig, plan
        result = plan(scene, model, start, PlannerConfig(budget_s=5.0))

    Command line::

        iris-bench run --scenario desk.scn --variant iris --variant cli --seed 0 --out results

Example:
    ```python
    import numpy as np
    from iris_inspect import (
        PlannerConfig, RobotKind, RobotModel, Scene, SensorSpec, Workspace, plan,
    )

    scene = Scene(
        Workspace((0.0, 0.0), (10.0, 10.0)),
        np.array([[2.0, 8.0], [8.0, 8.0], [8.0, 2.0]]),
        SensorSpec(range=2.5),
    )
    model = RobotModel(RobotKind.PLANAR2D)
    result = plan(scene, model, (1.0, 1.0), PlannerConfig(max_iterations=500))
    result.plan.vertices, result.plan.length
    result.trace.to_frame()
    ```
"""

from importlib.metadata import PackageNotFoundError, version

from xarray import register_dataset_accessor

from iris_inspect import config
from iris_inspect.accessor import TraceDatasetAccessor
from iris_inspect.bench import Scenario, load_scenario, run_experiment
from iris_inspect.common import CoverageSet, IrisError
from iris_inspect.cspace import RobotKind, RobotModel
from iris_inspect.planner import PlannerConfig, PlanResult, plan, run_variant_matrix
from iris_inspect.scene import Box, Scene, SensorSpec, Sphere, Workspace
from iris_inspect.search import Plan
from iris_inspect.traces import summarize, traces_to_dataset

__all__ = [
    "Box",
    "CoverageSet",
    "IrisError",
    "Plan",
    "PlanResult",
    "PlannerConfig",
    "RobotKind",
    "RobotModel",
    "Scenario",
    "Scene",
    "SensorSpec",
    "Sphere",
    "TraceDatasetAccessor",
    "Workspace",
    "config",
    "load_scenario",
    "plan",
    "run_experiment",
    "run_variant_matrix",
    "summarize",
    "traces_to_dataset",
]

try:
    __version__ = version("iris_inspect")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

# Register the accessor
register_dataset_accessor("iris")(TraceDatasetAccessor)  # type: ignore[no-untyped-call]
