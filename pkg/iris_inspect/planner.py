"""The planning loop: expand the roadmap, tighten the bounds, search when it pays off."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import TYPE_CHECKING, Any

import pandas as pd

from iris_inspect.common import DegenerateScene
from iris_inspect.config import PRESETS, _options, resolve_variant
from iris_inspect.cspace import RngStreams
from iris_inspect.roadmap import ExpansionParams, Roadmap, expand_roadmap
from iris_inspect.search import (
    Plan,
    SearchLists,
    SearchStats,
    initialize_lists,
    near_optimal_search,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from iris_inspect.common import FloatArray
    from iris_inspect.cspace import RobotModel
    from iris_inspect.scene import Scene

logger = logging.getLogger(__name__)

CLOCKS = ("work", "wall")

TRACE_COLUMNS = (
    "iter",
    "wall_s",
    "num_vertices",
    "coverage_count",
    "coverage_frac",
    "plan_length",
    "build_s",
    "search_s",
    "eval_s",
)
"""Columns of the per-run trace CSV, in order."""


@dataclass(frozen=True)
class ApproxParams:
    """Current approximation factors and the tightening factor.

    The schedule is evaluated in closed form from the values the object was
    created with: after ``k`` updates ``p = 1 - (1 - p0)(1 - f)^k`` and
    ``eps = eps0 (1 - f)^k``.
    """

    eps: float
    p: float
    f: float = 1e-4
    updates: int = 0
    origin: tuple[float, float] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.eps < 0:
            msg = f"eps must be >= 0, got {self.eps!r}"
            raise ValueError(msg)
        if not 0.0 <= self.p <= 1.0:
            msg = f"p must lie in [0, 1], got {self.p!r}"
            raise ValueError(msg)
        if not 0.0 < self.f < 1.0:
            msg = f"f must lie in (0, 1), got {self.f!r}"
            raise ValueError(msg)
        if self.origin is None:
            object.__setattr__(self, "origin", (self.eps, self.p))


def update_approximation(params: ApproxParams) -> ApproxParams:
    """Apply one tightening step: ``p += f (1 - p)`` and ``eps += f (0 - eps)``.

    Example:
        ```python
        update_approximation(ApproxParams(eps=10.0, p=0.85, f=1e-4))
        # ApproxParams(eps=9.999, p=0.850015, f=0.0001, updates=1)
        ```
    """
    assert params.origin is not None
    eps0, p0 = params.origin
    k = params.updates + 1
    decay = (1.0 - params.f) ** k
    return replace(params, eps=eps0 * decay, p=1.0 - (1.0 - p0) * decay, updates=k)


def need_new_search(
    prev_plan_coverage: int,
    p: float,
    roadmap_coverage: int,
    omega: float,
    samples_since_search: int,
    n_max: int,
) -> bool:
    """True iff the last plan fell below ``omega * p * |S(V)|`` or ``n_max`` vertices arrived."""
    return prev_plan_coverage < omega * p * roadmap_coverage or samples_since_search >= n_max


@dataclass(frozen=True)
class PlannerConfig:
    """Planner hyperparameters and variant flags.

    Attributes:
        p0: Initial coverage approximation factor.
        eps0: Initial length approximation factor.
        f: Tightening factor.
        p_accept: Probability of accepting a sample that adds no coverage.
        omega: Search gating relaxation.
        n_max: Vertices after which a search runs regardless of gating.
        batch: Vertices requested per expansion.
        steer_step: RRT step; default 0.1 x the shortest workspace extent.
        connect_radius: Neighbor radius; default 4 x ``steer_step``.
        resolution: Collision-check spacing; default 0.01 x the shortest extent.
        budget_s: Time budget, checked between iterations.
        max_iterations: Optional iteration cap.
        seed: Master seed for all random streams.
        clock: ``"work"`` (deterministic operation counts) or ``"wall"``.
        coverage_sampling: Coverage-informed sampling and omega/n_max gating.
        refined_lazy: Lazy edge evaluation with T/NT pairs; eager validation when off.
        incremental_reuse: Carry search lists across iterations.
    """

    p0: float = 0.85
    eps0: float = 10.0
    f: float = 1e-4
    p_accept: float = 0.05
    omega: float = 0.9
    n_max: int = 200
    batch: int = 1
    steer_step: float | None = None
    connect_radius: float | None = None
    resolution: float | None = None
    budget_s: float = 1.0
    max_iterations: int | None = None
    seed: int = 0
    clock: str = "work"
    coverage_sampling: bool = True
    refined_lazy: bool = True
    incremental_reuse: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_accept <= 1.0:
            msg = f"p_accept must lie in [0, 1], got {self.p_accept!r}"
            raise ValueError(msg)
        if not 0.0 < self.omega <= 1.0:
            msg = f"omega must lie in (0, 1], got {self.omega!r}"
            raise ValueError(msg)
        if self.n_max < 1:
            msg = f"n_max must be >= 1, got {self.n_max!r}"
            raise ValueError(msg)
        if self.clock not in CLOCKS:
            msg = f"Unknown clock: {self.clock!r}. Available clocks: {list(CLOCKS)}"
            raise ValueError(msg)
        if self.budget_s < 0:
            msg = f"budget_s must be >= 0, got {self.budget_s!r}"
            raise ValueError(msg)
        if self.max_iterations is not None and self.max_iterations < 1:
            msg = f"max_iterations must be >= 1, got {self.max_iterations!r}"
            raise ValueError(msg)
        for name in ("steer_step", "connect_radius", "resolution"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                msg = f"{name} must be > 0, got {value!r}"
                raise ValueError(msg)

    @classmethod
    def from_preset(cls, name: str, **overrides: Any) -> PlannerConfig:
        """Config from a named preset (``bridge`` or ``cavity``) plus overrides.

        Raises:
            ValueError: If the preset is unknown.
        """
        if name not in PRESETS:
            msg = f"Unknown preset: {name!r}. Available presets: {sorted(PRESETS)}"
            raise ValueError(msg)
        return cls(**{**PRESETS[name], **overrides})

    def with_variant(self, name: str) -> PlannerConfig:
        """Copy with the enhancement flags of a named variant."""
        _, variant = resolve_variant(name)
        return replace(self, **variant._asdict())

    def geometry(self, scene: Scene) -> tuple[float, float, float]:
        """Resolved ``(steer_step, connect_radius, resolution)`` for a scene."""
        extent = scene.workspace.shortest_extent
        step = self.steer_step if self.steer_step is not None else 0.1 * extent
        radius = self.connect_radius if self.connect_radius is not None else 4.0 * step
        resolution = self.resolution if self.resolution is not None else scene.default_resolution()
        return step, radius, resolution

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class WorkClock:
    """Deterministic clock: operation counts times a nominal unit.

    Sample attempts, collision point checks, per-POI visibility tests, search
    pops, generated pairs, released pairs and loop iterations each cost one unit.
    """

    def __init__(self, roadmap: Roadmap, search_stats: SearchStats, unit_s: float | None = None) -> None:
        self._roadmap = roadmap
        self._search = search_stats
        self.unit_s = unit_s if unit_s is not None else _options.work_unit_s
        self.ticks = 0

    def _build_units(self) -> int:
        stats = self._roadmap.stats
        return (
            stats.attempts
            + stats.build_point_checks
            + stats.visibility_queries * self._roadmap.scene.num_pois
        )

    def _search_units(self) -> int:
        return self._search.pops + self._search.generated + self._search.released

    def eval_time(self) -> float:
        return self._roadmap.stats.eval_point_checks * self.unit_s

    def now(self) -> float:
        units = self._build_units() + self._search_units() + self._roadmap.stats.eval_point_checks
        return (units + self.ticks) * self.unit_s

    def tick(self) -> None:
        self.ticks += 1


class WallClock:
    """``time.perf_counter`` since construction."""

    def __init__(self, roadmap: Roadmap) -> None:
        self._roadmap = roadmap
        self._origin = time.perf_counter()

    def eval_time(self) -> float:
        return self._roadmap.stats.eval_seconds

    def now(self) -> float:
        return time.perf_counter() - self._origin

    def tick(self) -> None:
        pass


@dataclass(frozen=True)
class TraceRow:
    iter: int
    wall_s: float
    num_vertices: int
    coverage_count: int
    coverage_frac: float
    plan_length: float
    build_s: float
    search_s: float
    eval_s: float
    roadmap_coverage: int = 0
    p: float = 0.0
    eps: float = 0.0
    searched: bool = False
    found: bool = False


@dataclass
class PlanTrace:
    """Per-iteration records of one planner run."""

    variant: str = "cli"
    seed: int = 0
    num_pois: int = 0
    rows: list[TraceRow] = field(default_factory=list)

    def append(self, row: TraceRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self, *, extended: bool = False) -> pd.DataFrame:
        """Trace as a DataFrame with the CSV columns, plus bookkeeping columns if ``extended``."""
        columns = [f.name for f in fields(TraceRow)] if extended else list(TRACE_COLUMNS)
        frame = pd.DataFrame([asdict(row) for row in self.rows], columns=columns)
        return frame.astype({"iter": "int64", "num_vertices": "int64", "coverage_count": "int64"})


@dataclass
class PlanResult:
    plan: Plan
    trace: PlanTrace
    roadmap: Roadmap
    search_stats: SearchStats
    approx: ApproxParams
    lists: SearchLists | None = field(default=None, repr=False)


def plan(
    scene: Scene,
    model: RobotModel,
    start: Sequence[float] | FloatArray,
    config: PlannerConfig,
    *,
    variant: str = "",
    on_row: Callable[[TraceRow], None] | None = None,
) -> PlanResult:
    """Run the planning loop until the budget is spent.

    Every iteration expands the roadmap, tightens (eps, p) and, when gating
    allows (always on the first iteration), searches. A failed search keeps
    the previous plan.

    Args:
        scene: The scene.
        model: Robot model.
        start: Start configuration.
        config: Hyperparameters and variant flags.
        variant: Name recorded on the trace.
        on_row: Called with every trace row as it is produced.

    Returns:
        Final plan, trace, roadmap and statistics.

    Raises:
        DegenerateScene: If the scene has no POIs.
        InvalidStart: If the start configuration is in collision.
    """
    if scene.num_pois == 0:
        msg = "Scene has no POIs to inspect"
        raise DegenerateScene(msg)

    step, radius, resolution = config.geometry(scene)
    roadmap = Roadmap(scene, model, start, connect_radius=radius, resolution=resolution)
    streams = RngStreams.from_seed(config.seed)
    search_stats = SearchStats()
    clock: WorkClock | WallClock = (
        WorkClock(roadmap, search_stats) if config.clock == "work" else WallClock(roadmap)
    )

    p_accept = config.p_accept if config.coverage_sampling else 1.0
    omega = config.omega if config.coverage_sampling else 1.0
    lazy = config.refined_lazy
    expansion = ExpansionParams(steer_step=step, p_accept=p_accept, batch=config.batch)

    approx = ApproxParams(eps=config.eps0, p=config.p0, f=config.f)
    current = Plan((roadmap.root,), 0.0, roadmap.coverage(roadmap.root))
    trace = PlanTrace(variant=variant, seed=config.seed, num_pois=scene.num_pois)
    lists: SearchLists | None = None
    pending: list[int] = []
    wall = 0.0
    iteration = 0

    logger.info(
        "Planning %s seed=%d on %d POIs (step=%.4g, radius=%.4g, resolution=%.4g)",
        variant or "planner",
        config.seed,
        scene.num_pois,
        step,
        radius,
        resolution,
    )

    while True:
        iteration += 1
        started = clock.now()
        inserted = expand_roadmap(roadmap, expansion, streams)
        build_s = clock.now() - started
        pending.extend(inserted)

        approx = update_approximation(approx)
        searched = iteration == 1 or need_new_search(
            len(current.coverage),
            approx.p,
            len(roadmap.total_coverage),
            omega,
            len(pending),
            config.n_max,
        )
        search_s = eval_s = 0.0
        found = False
        if searched:
            started = clock.now()
            eval_started = clock.eval_time()
            previous = lists if config.incremental_reuse else None
            lists = initialize_lists(
                roadmap, approx.eps, approx.p, previous, pending, lazy=lazy, stats=search_stats
            )
            result = near_optimal_search(roadmap, lists, approx.eps, approx.p, lazy=lazy)
            eval_s = clock.eval_time() - eval_started
            search_s = max(clock.now() - started - eval_s, 0.0)
            pending = []
            if result is not None:
                current = result
                found = True

        clock.tick()
        wall = max(clock.now(), math.nextafter(wall, math.inf))
        row = TraceRow(
            iter=iteration,
            wall_s=wall,
            num_vertices=roadmap.num_vertices,
            coverage_count=len(current.coverage),
            coverage_frac=len(current.coverage) / scene.num_pois,
            plan_length=current.length,
            build_s=build_s,
            search_s=search_s,
            eval_s=eval_s,
            roadmap_coverage=len(roadmap.total_coverage),
            p=approx.p,
            eps=approx.eps,
            searched=searched,
            found=found,
        )
        trace.append(row)
        logger.info(
            "iter=%d wall_s=%.6f |V|=%d |S(V)|=%d plan=%d/%d length=%.4f%s",
            row.iter,
            row.wall_s,
            row.num_vertices,
            row.roadmap_coverage,
            row.coverage_count,
            scene.num_pois,
            row.plan_length,
            " (searched)" if searched else "",
        )
        if on_row is not None:
            on_row(row)

        if config.max_iterations is not None and iteration >= config.max_iterations:
            break
        if clock.now() >= config.budget_s:
            break

    return PlanResult(current, trace, roadmap, search_stats, approx, lists)


def _run_cell(
    job: tuple[Scene, RobotModel, tuple[float, ...], PlannerConfig, str, int],
) -> PlanTrace:
    scene, model, start, config, variant, seed = job
    cell = replace(config.with_variant(variant), seed=seed)
    return plan(scene, model, start, cell, variant=variant).trace


def run_variant_matrix(
    scene: Scene,
    model: RobotModel,
    start: Sequence[float] | FloatArray,
    config: PlannerConfig,
    variants: Iterable[str],
    seeds: Iterable[int],
    *,
    jobs: int = 1,
) -> dict[tuple[str, int], PlanTrace]:
    """Run every variant for every seed.

    Cells share nothing and run in a process pool when ``jobs > 1``; results are
    keyed and ordered by ``(variant, seed)`` as requested.

    Raises:
        ValueError: If a variant name is unknown.
    """
    names = [resolve_variant(v)[0] for v in variants]
    seed_list = list(seeds)
    start_tuple = tuple(float(x) for x in start)
    cells = [(scene, model, start_tuple, config, v, s) for v in names for s in seed_list]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_run_cell, cells))
    else:
        traces = [_run_cell(cell) for cell in cells]
    return {(cell[4], cell[5]): trace for cell, trace in zip(cells, traces, strict=True)}
