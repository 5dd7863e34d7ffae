"""Scenario files, experiment orchestration and the ``iris-bench`` command.

Scenario files are line oriented UTF-8 text. ``#`` starts a comment, sections
are ``[workspace]``, ``[obstacles]``, ``[pois]``, ``[sensor]``, ``[robot]``
and ``[planner]``, entries are ``key = value``. Fields inside a value are
separated by ``;`` and vector components by ``,``::

    [workspace]
    lower = 0, 0
    upper = 10, 10

    [obstacles]
    sphere = 5, 5; 1.5
    box = 2, 7; 3, 9

    [pois]
    grid_box_surface = 4, 4; 6, 6; 5
    ring = 5, 5; 2.5; 12
    point = 9, 1

    [sensor]
    range = 3

    [robot]
    kind = planar2d
    start = 0.5, 0.5

    [planner]
    preset = bridge

``obstacles`` and ``pois`` entries may repeat and keep file order; every
other key appears at most once.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from iris_inspect.common import IrisError, ScenarioError
from iris_inspect.config import VARIANT_ALIASES, VARIANTS, resolve_variant, set_options
from iris_inspect.cspace import RobotKind, RobotModel
from iris_inspect.oracle import (
    LazyGraph,
    load_graph,
    optimal_inspection_plan,
    plan_cost,
    verify_near_optimal,
)
from iris_inspect.planner import CLOCKS, PlannerConfig, run_variant_matrix
from iris_inspect.scene import Box, Scene, SensorSpec, Sphere, Workspace
from iris_inspect.search import initialize_lists, near_optimal_search
from iris_inspect.traces import (
    baseline_name,
    coverage_shortfalls,
    summarize,
    timing_decomposition,
    traces_to_dataset,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    import pandas as pd

    from iris_inspect.common import FloatArray
    from iris_inspect.planner import PlanTrace

logger = logging.getLogger(__name__)

SECTIONS: dict[str, tuple[str, ...]] = {
    "workspace": ("dim", "lower", "upper"),
    "obstacles": ("sphere", "box"),
    "pois": ("point", "grid_box_surface", "ring"),
    "sensor": ("range", "fov_half_angle", "occlusion"),
    "robot": (
        "kind",
        "radius",
        "angular_weight",
        "steer_step",
        "connect_radius",
        "start",
        "translation_lower",
        "translation_upper",
    ),
    "planner": (
        "preset",
        "p0",
        "eps0",
        "f",
        "p_accept",
        "omega",
        "n_max",
        "batch",
        "resolution",
        "budget_s",
        "max_iterations",
        "seed",
        "clock",
    ),
}
"""Known keys per section, in canonical order."""

_REPEATED = frozenset({"obstacles", "pois"})

_PLANNER_TYPES: dict[str, type] = {
    "p0": float,
    "eps0": float,
    "f": float,
    "p_accept": float,
    "omega": float,
    "n_max": int,
    "batch": int,
    "resolution": float,
    "budget_s": float,
    "max_iterations": int,
    "seed": int,
    "clock": str,
}

# CLI flag -> PlannerConfig field
_FLAG_FIELDS = {
    "budget_s": "budget_s",
    "p0": "p0",
    "eps0": "eps0",
    "f": "f",
    "p_accept": "p_accept",
    "omega": "omega",
    "n_max": "n_max",
    "max_iterations": "max_iterations",
    "clock": "clock",
}


@dataclass(frozen=True, eq=False)
class Scenario:
    """A parsed scenario: everything one planner run needs."""

    scene: Scene
    model: RobotModel
    start: tuple[float, ...]
    config: PlannerConfig


@dataclass
class _Entry:
    key: str
    value: str
    line: int


# parsing


def _split_sections(text: str) -> dict[str, list[_Entry]]:
    sections: dict[str, list[_Entry]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError(f"malformed section header {line!r}", line=lineno)
            current = line[1:-1].strip()
            if current not in SECTIONS:
                msg = f"unknown section [{current}]. Available sections: {list(SECTIONS)}"
                raise ScenarioError(msg, line=lineno)
            if current in sections:
                raise ScenarioError(f"section [{current}] appears twice", line=lineno)
            sections[current] = []
            continue
        if current is None:
            raise ScenarioError("entry before the first section header", line=lineno)
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ScenarioError(f"expected 'key = value', got {line!r}", line=lineno)
        if key not in SECTIONS[current]:
            msg = f"unknown key {current}.{key}. Available keys: {list(SECTIONS[current])}"
            raise ScenarioError(msg, line=lineno)
        if current not in _REPEATED and any(e.key == key for e in sections[current]):
            raise ScenarioError(f"duplicate key {current}.{key}", line=lineno)
        sections[current].append(_Entry(key, value, lineno))
    return sections


def _fields(entry: _Entry, count: int) -> list[str]:
    parts = [part.strip() for part in entry.value.split(";")]
    if len(parts) != count:
        msg = f"expected {count} ';'-separated fields, got {len(parts)}"
        raise ScenarioError(msg, line=entry.line)
    return parts


def _vector(text: str, line: int) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ScenarioError(f"bad number in {text!r}", line=line) from exc
    if not all(math.isfinite(v) for v in values):
        raise ScenarioError(f"non-finite value in {text!r}", line=line)
    return values


def _scalar(entry: _Entry, kind: type = float) -> Any:
    if kind is bool:
        lowered = entry.value.lower()
        if lowered not in ("true", "false"):
            raise ScenarioError(f"expected true or false, got {entry.value!r}", line=entry.line)
        return lowered == "true"
    if kind is str:
        return entry.value
    try:
        value = kind(entry.value)
    except ValueError as exc:
        msg = f"expected {kind.__name__}, got {entry.value!r}"
        raise ScenarioError(msg, line=entry.line) from exc
    if kind is float and not math.isfinite(value):
        raise ScenarioError(f"non-finite value {entry.value!r}", line=entry.line)
    return value


def grid_box_surface(
    lower: Sequence[float], upper: Sequence[float], per_axis: int
) -> FloatArray:
    """Points of a regular grid that lie on the surface of a box.

    The grid has ``per_axis`` points along every axis, corners included; in 2D
    the surface is the rectangle's perimeter.

    Raises:
        ValueError: If ``per_axis < 2`` or the corners are not ordered.
    """
    if per_axis < 2:
        msg = f"per_axis must be >= 2, got {per_axis!r}"
        raise ValueError(msg)
    lo = np.asarray(lower, dtype=np.float64)
    hi = np.asarray(upper, dtype=np.float64)
    if lo.shape != hi.shape or np.any(lo >= hi):
        msg = f"Box corners must satisfy lower < upper per axis: {list(lower)!r} / {list(upper)!r}"
        raise ValueError(msg)
    axes = [np.linspace(a, b, per_axis) for a, b in zip(lo, hi, strict=True)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, lo.shape[0])
    on_surface = np.any((grid == lo) | (grid == hi), axis=1)
    return grid[on_surface]


def ring(center: Sequence[float], radius: float, count: int) -> FloatArray:
    """``count`` evenly spaced points on a horizontal circle around ``center``."""
    if count < 1 or not radius > 0:
        msg = f"ring needs count >= 1 and radius > 0, got {count!r} and {radius!r}"
        raise ValueError(msg)
    angles = 2.0 * math.pi * np.arange(count) / count
    points = np.tile(np.asarray(center, dtype=np.float64), (count, 1))
    points[:, 0] += radius * np.cos(angles)
    points[:, 1] += radius * np.sin(angles)
    return points


def _build_workspace(entries: list[_Entry], obstacles: list[_Entry]) -> Workspace:
    values = {e.key: e for e in entries}
    for required in ("lower", "upper"):
        if required not in values:
            raise ScenarioError("missing required key", key=f"workspace.{required}")
    lower = _vector(values["lower"].value, values["lower"].line)
    upper = _vector(values["upper"].value, values["upper"].line)
    if "dim" in values and _scalar(values["dim"], int) != len(lower):
        msg = f"dim {values['dim'].value} does not match {len(lower)}-component bounds"
        raise ScenarioError(msg, key="workspace.dim")

    shapes: list[Sphere | Box] = []
    for index, entry in enumerate(obstacles):
        try:
            if entry.key == "sphere":
                center, radius = _fields(entry, 2)
                shapes.append(Sphere(_vector(center, entry.line), float(radius)))
            else:
                low, high = _fields(entry, 2)
                shapes.append(Box(_vector(low, entry.line), _vector(high, entry.line)))
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"obstacle {index}: {exc}", key=f"obstacles.{entry.key}") from exc
    try:
        return Workspace(lower, upper, tuple(shapes))
    except ValueError as exc:
        raise ScenarioError(str(exc), key="workspace") from exc


def _build_pois(entries: list[_Entry], dim: int) -> FloatArray:
    blocks: list[FloatArray] = []
    for entry in entries:
        try:
            if entry.key == "point":
                blocks.append(np.asarray([_vector(entry.value, entry.line)]))
            elif entry.key == "grid_box_surface":
                low, high, count = _fields(entry, 3)
                blocks.append(
                    grid_box_surface(_vector(low, entry.line), _vector(high, entry.line), int(count))
                )
            else:
                center, radius, count = _fields(entry, 3)
                blocks.append(ring(_vector(center, entry.line), float(radius), int(count)))
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(str(exc), key=f"pois.{entry.key}") from exc
        if blocks[-1].shape[1] != dim:
            msg = f"{entry.key} has {blocks[-1].shape[1]} components in a {dim}D workspace"
            raise ScenarioError(msg, key=f"pois.{entry.key}")
    return np.concatenate(blocks) if blocks else np.zeros((0, dim))


def _defaulted(section: str, key: str, value: Any) -> Any:
    logger.info("Scenario default %s.%s = %r", section, key, value)
    return value


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text into validated domain objects.

    Defaults filled in for missing keys are logged at INFO.

    Raises:
        ScenarioError: With a line number for syntax errors, or a ``section.key``
            path for semantic errors.
    """
    sections = _split_sections(text)
    workspace = _build_workspace(sections.get("workspace", []), sections.get("obstacles", []))
    pois = _build_pois(sections.get("pois", []), workspace.dim)

    sensor_entries = {e.key: e for e in sections.get("sensor", [])}
    if "range" not in sensor_entries:
        raise ScenarioError("missing required key", key="sensor.range")
    sensor_kwargs: dict[str, Any] = {"range": _scalar(sensor_entries["range"])}
    if "fov_half_angle" in sensor_entries:
        sensor_kwargs["fov_half_angle"] = _scalar(sensor_entries["fov_half_angle"])
    else:
        sensor_kwargs["fov_half_angle"] = _defaulted("sensor", "fov_half_angle", math.pi)
    if "occlusion" in sensor_entries:
        sensor_kwargs["occlusion_enabled"] = _scalar(sensor_entries["occlusion"], bool)
    else:
        sensor_kwargs["occlusion_enabled"] = _defaulted("sensor", "occlusion", False)
    try:
        sensor = SensorSpec(**sensor_kwargs)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="sensor") from exc

    try:
        scene = Scene(workspace, pois, sensor)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="pois") from exc

    model, start, geometry = _build_robot(sections.get("robot", []), scene)
    config = _build_config(sections.get("planner", []), geometry)
    return Scenario(scene, model, start, config)


def _build_robot(
    entries: list[_Entry], scene: Scene
) -> tuple[RobotModel, tuple[float, ...], dict[str, float]]:
    values = {e.key: e for e in entries}
    if "kind" in values:
        try:
            kind = RobotKind(values["kind"].value)
        except ValueError as exc:
            msg = (
                f"unknown robot kind {values['kind'].value!r}. "
                f"Available kinds: {[k.value for k in RobotKind]}"
            )
            raise ScenarioError(msg, key="robot.kind") from exc
    else:
        default = RobotKind.PLANAR2D if scene.dim == 2 else RobotKind.SPATIAL3D_YAW_PITCH
        kind = _defaulted("robot", "kind", default)
    if kind.translational_dims != scene.dim:
        msg = f"{kind.value} needs a {kind.translational_dims}D workspace, got {scene.dim}D"
        raise ScenarioError(msg, key="robot.kind")
    if kind is RobotKind.PLANAR2D and not scene.sensor.omnidirectional:
        msg = "planar2d has no heading; use planar2d_yaw for a finite field of view"
        raise ScenarioError(msg, key="sensor.fov_half_angle")

    bounds = None
    if ("translation_lower" in values) != ("translation_upper" in values):
        msg = "translation_lower and translation_upper must be given together"
        raise ScenarioError(msg, key="robot.translation_lower")
    if "translation_lower" in values:
        low, high = values["translation_lower"], values["translation_upper"]
        bounds = (_vector(low.value, low.line), _vector(high.value, high.line))

    kwargs: dict[str, Any] = {"translation_bounds": bounds}
    for name in ("radius", "angular_weight"):
        if name in values:
            kwargs[name] = _scalar(values[name])
        else:
            kwargs[name] = _defaulted("robot", name, 0.0 if name == "radius" else 1.0)
    try:
        model = RobotModel(kind, **kwargs)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="robot") from exc

    if "start" not in values:
        raise ScenarioError("missing required key", key="robot.start")
    start = _vector(values["start"].value, values["start"].line)
    if len(start) != model.config_dim:
        msg = f"{kind.value} start needs {model.config_dim} components, got {len(start)}"
        raise ScenarioError(msg, key="robot.start")

    geometry = {
        name: _scalar(values[name]) for name in ("steer_step", "connect_radius") if name in values
    }
    return model, start, geometry


def _build_config(entries: list[_Entry], geometry: dict[str, float]) -> PlannerConfig:
    values = {e.key: e for e in entries}
    overrides: dict[str, Any] = dict(geometry)
    for key, entry in values.items():
        if key != "preset":
            overrides[key] = _scalar(entry, _PLANNER_TYPES[key])
    try:
        if "preset" in values:
            config = PlannerConfig.from_preset(values["preset"].value, **overrides)
        else:
            config = PlannerConfig(**overrides)
    except ValueError as exc:
        raise ScenarioError(str(exc), key="planner") from exc
    for f in fields(PlannerConfig):
        if f.name in SECTIONS["planner"] and f.name not in overrides:
            _defaulted("planner", f.name, getattr(config, f.name))
    return config


def load_scenario(path: str | Path) -> Scenario:
    """Read and parse a scenario file.

    Raises:
        ScenarioError: If the file does not parse or validate.
        OSError: If the file cannot be read.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"Cannot read scenario {path}: {exc.strerror or exc}"
        raise OSError(msg) from exc
    logger.info("Loading scenario %s", path)
    return parse_scenario(text)


def _fmt_vector(values: Iterable[float]) -> str:
    return ", ".join(repr(float(v)) for v in values)


def dump_scenario(scenario: Scenario) -> str:
    """Canonical scenario text; generators are expanded into explicit points.

    ``parse_scenario(dump_scenario(s))`` rebuilds objects equal to ``s``.
    """
    scene, model, config = scenario.scene, scenario.model, scenario.config
    lines = [
        "[workspace]",
        f"dim = {scene.dim}",
        f"lower = {_fmt_vector(scene.workspace.lower)}",
        f"upper = {_fmt_vector(scene.workspace.upper)}",
        "",
        "[obstacles]",
    ]
    for obstacle in scene.workspace.obstacles:
        if isinstance(obstacle, Sphere):
            lines.append(f"sphere = {_fmt_vector(obstacle.center)}; {float(obstacle.radius)!r}")
        else:
            lines.append(f"box = {_fmt_vector(obstacle.lower)}; {_fmt_vector(obstacle.upper)}")
    lines += ["", "[pois]"]
    lines += [f"point = {_fmt_vector(point)}" for point in scene.pois]
    lines += [
        "",
        "[sensor]",
        f"range = {float(scene.sensor.range)!r}",
        f"fov_half_angle = {float(scene.sensor.fov_half_angle)!r}",
        f"occlusion = {str(scene.sensor.occlusion_enabled).lower()}",
        "",
        "[robot]",
        f"kind = {model.kind.value}",
        f"radius = {float(model.radius)!r}",
        f"angular_weight = {float(model.angular_weight)!r}",
    ]
    for name in ("steer_step", "connect_radius"):
        value = getattr(config, name)
        if value is not None:
            lines.append(f"{name} = {float(value)!r}")
    lines.append(f"start = {_fmt_vector(scenario.start)}")
    if model.translation_bounds is not None:
        lines.append(f"translation_lower = {_fmt_vector(model.translation_bounds[0])}")
        lines.append(f"translation_upper = {_fmt_vector(model.translation_bounds[1])}")
    lines += ["", "[planner]"]
    for key in SECTIONS["planner"][1:]:
        value = getattr(config, key)
        if value is None:
            continue
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


# experiments


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    try:
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as exc:
        msg = f"Cannot write {path}: {exc.strerror or exc}"
        raise OSError(msg) from exc
    return path


def emit_timing_decomposition(trace: PlanTrace, path: str | Path) -> pd.DataFrame:
    """Write the per-iteration build/search/eval breakdown of a trace as CSV.

    Raises:
        OSError: If the file cannot be written; the message names the path.
    """
    frame = timing_decomposition(trace)
    _write_csv(frame, Path(path))
    return frame


def run_experiment(
    scenario: Scenario,
    variants: Sequence[str],
    seeds: Sequence[int],
    out_dir: str | Path,
    *,
    budget_s: float | None = None,
    jobs: int = 1,
) -> list[Path]:
    """Run every (variant, seed) cell and write its trace, timing and the summary CSVs.

    Files: ``trace_{variant}_seed{seed}.csv``, ``timing_{variant}_seed{seed}.csv``
    and ``summary.csv`` in ``out_dir``.

    Returns:
        Paths written, in the order above per cell, summary last.

    Raises:
        ValueError: If a variant is unknown or no variant or seed is given.
        OSError: If an output cannot be written; the message names the path.

    Example:
        ```python
        scenario = load_scenario("desk.scn")
        run_experiment(scenario, ["iris", "cli"], [0, 1, 2], "out", budget_s=5.0)
        ```
    """
    if not variants or not seeds:
        msg = "At least one variant and one seed are required"
        raise ValueError(msg)
    names = list(dict.fromkeys(resolve_variant(v)[0] for v in variants))
    config = scenario.config if budget_s is None else replace(scenario.config, budget_s=budget_s)

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        msg = f"Cannot create output directory {out}: {exc.strerror or exc}"
        raise OSError(msg) from exc

    traces = run_variant_matrix(
        scenario.scene, scenario.model, scenario.start, config, names, seeds, jobs=jobs
    )
    written: list[Path] = []
    for (variant, seed), trace in traces.items():
        omega = config.omega if resolve_variant(variant)[1].coverage_sampling else 1.0
        shortfalls = coverage_shortfalls(trace, omega)
        if shortfalls:
            logger.warning(
                "%s seed %d: plan coverage below the gating bound at iterations %s",
                variant,
                seed,
                shortfalls,
            )
        written.append(_write_csv(trace.to_frame(), out / f"trace_{variant}_seed{seed}.csv"))
        timing_path = out / f"timing_{variant}_seed{seed}.csv"
        emit_timing_decomposition(trace, timing_path)
        written.append(timing_path)

    summary = summarize(traces_to_dataset(traces), baseline=baseline_name(names))
    written.append(_write_csv(summary, out / "summary.csv"))
    logger.info("Wrote %d files to %s", len(written), out)
    return written


def verify_graph(path: str | Path, eps: float, p: float) -> dict[str, Any]:
    """Check a plan against the exact optimum of a small graph file.

    The plan given in the file is checked; without one, the near-optimal search
    runs on the graph (edges validated lazily) and its plan is checked.
    """
    graph, given = load_graph(path)
    if given is None:
        lazy = LazyGraph(graph)
        found = near_optimal_search(lazy, initialize_lists(lazy, eps, p, None, ()), eps, p)
        given = found.vertices if found is not None else (graph.start,)
    covered, length = plan_cost(graph, given)
    optimum = optimal_inspection_plan(graph)
    ok = verify_near_optimal(graph, given, eps, p)
    return {
        "plan": " ".join(map(str, given)),
        "plan_coverage": len(covered),
        "plan_length": length,
        "optimal_coverage": len(optimum.coverage),
        "optimal_length": optimum.length,
        "near_optimal": ok,
    }


# command line


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iris-bench",
        description="Run inspection planning experiments and write trace CSVs.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG and search traces"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run variants x seeds on a scenario")
    run.add_argument("--scenario", required=True, type=Path, help="scenario file")
    run.add_argument(
        "--variant",
        action="append",
        choices=sorted([*VARIANTS, *VARIANT_ALIASES]),
        help="planner variant (repeatable, default cli)",
    )
    run.add_argument("--seed", action="append", type=int, help="seed (repeatable)")
    run.add_argument("--budget-s", type=float, help="time budget per run in seconds")
    run.add_argument("--p0", type=float, help="initial coverage approximation factor")
    run.add_argument("--eps0", type=float, help="initial length approximation factor")
    run.add_argument("--f", type=float, help="tightening factor")
    run.add_argument("--p-accept", type=float, help="acceptance probability for useless samples")
    run.add_argument("--omega", type=float, help="search gating relaxation")
    run.add_argument("--n-max", type=int, help="vertices between forced searches")
    run.add_argument("--max-iterations", type=int, help="iteration cap per run")
    run.add_argument("--clock", choices=CLOCKS, help="budget clock")
    run.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    run.add_argument("--jobs", type=int, default=1, help="parallel experiment cells")

    verify = sub.add_parser("verify", help="check a plan on a small graph file against the optimum")
    verify.add_argument("graph", type=Path, help="graph file")
    verify.add_argument("--eps", type=float, default=0.0, help="length approximation factor")
    verify.add_argument("--p", type=float, default=1.0, help="coverage approximation factor")

    canon = sub.add_parser("scenario", help="print the canonical form of a scenario file")
    canon.add_argument("path", type=Path, help="scenario file")
    return parser


def _apply_flags(args: argparse.Namespace, scenario: Scenario) -> Scenario:
    overrides: dict[str, Any] = {}
    for flag, name in _FLAG_FIELDS.items():
        value = getattr(args, flag)
        if value is None:
            continue
        current = getattr(scenario.config, name)
        if current != value:
            logger.warning("--%s=%r overrides scenario value %r", flag.replace("_", "-"), value, current)
        overrides[name] = value
    if not overrides:
        return scenario
    return replace(scenario, config=replace(scenario.config, **overrides))


def _command_run(args: argparse.Namespace) -> int:
    scenario = _apply_flags(args, load_scenario(args.scenario))
    variants = args.variant or ["cli"]
    seeds = args.seed or [scenario.config.seed]
    written = run_experiment(scenario, variants, seeds, args.out, jobs=args.jobs)
    for path in written:
        sys.stdout.write(f"{path}\n")
    return 0


def _command_verify(args: argparse.Namespace) -> int:
    result = verify_graph(args.graph, args.eps, args.p)
    for key, value in result.items():
        sys.stdout.write(f"{key}: {value}\n")
    return 0 if result["near_optimal"] else 1


def _command_scenario(args: argparse.Namespace) -> int:
    sys.stdout.write(dump_scenario(load_scenario(args.path)))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of ``iris-bench``; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    commands = {"run": _command_run, "verify": _command_verify, "scenario": _command_scenario}
    try:
        with set_options(trace_search=args.verbose >= 2):
            return commands[args.command](args)
    except (IrisError, ValueError, OSError) as exc:
        logger.error("%s", exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
