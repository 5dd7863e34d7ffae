"""Trace tables: comparative datasets, timing decomposition and summaries."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
import xarray as xr

from iris_inspect.accessor import TraceDatasetAccessor

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from iris_inspect.planner import PlanTrace

SUMMARY_LEVELS: tuple[float, ...] = (0.5, 0.75, 0.9, 1.0)

# (long_name, units) per dataset variable
TRACE_ATTRS: dict[str, tuple[str, str]] = {
    "wall_s": ("elapsed time", "s"),
    "num_vertices": ("roadmap vertices", "1"),
    "coverage_count": ("plan coverage", "POIs"),
    "coverage_frac": ("plan coverage fraction", "1"),
    "plan_length": ("plan length", "m"),
    "build_s": ("roadmap build time", "s"),
    "search_s": ("search time", "s"),
    "eval_s": ("edge evaluation time", "s"),
    "roadmap_coverage": ("roadmap coverage", "POIs"),
    "p": ("coverage approximation factor", "1"),
    "eps": ("length approximation factor", "1"),
}

SUMMARY_COLUMNS = (
    "variant",
    "seed",
    "level",
    "target_count",
    "time_s",
    "search_time_s",
    "final_coverage_count",
    "final_plan_length",
)


def traces_to_dataset(traces: Mapping[tuple[str, int], PlanTrace]) -> xr.Dataset:
    """Stack traces into a dataset with dims ``variant``, ``seed`` and ``iter``.

    Shorter traces are padded with NaN. Variant and seed order follow first
    appearance in ``traces``.

    Example:
        ```python
        traces = run_variant_matrix(scene, model, start, config, ["iris", "cli"], [0, 1])
        ds = traces_to_dataset(traces)
        ds.iris.time_to_coverage(40)
        ```
    """
    variants = list(dict.fromkeys(v for v, _ in traces))
    seeds = list(dict.fromkeys(s for _, s in traces))
    length = max((len(t) for t in traces.values()), default=0)
    shape = (len(variants), len(seeds), length)
    data = {name: np.full(shape, np.nan) for name in TRACE_ATTRS}
    num_pois = 0
    for (variant, seed), trace in traces.items():
        num_pois = max(num_pois, trace.num_pois)
        frame = trace.to_frame(extended=True)
        i, j = variants.index(variant), seeds.index(seed)
        for name in TRACE_ATTRS:
            data[name][i, j, : len(frame)] = frame[name].to_numpy(dtype=np.float64)

    ds = xr.Dataset(
        {
            name: (("variant", "seed", "iter"), values, {"long_name": ln, "units": units})
            for (name, (ln, units)), values in zip(TRACE_ATTRS.items(), data.values(), strict=True)
        },
        coords={"variant": variants, "seed": seeds, "iter": np.arange(1, length + 1)},
        attrs={"num_pois": num_pois},
    )
    return ds


def timing_decomposition(trace: PlanTrace) -> pd.DataFrame:
    """Per-iteration shares of build, search and edge evaluation time.

    ``duration_s`` is the time elapsed since the previous row; ``other_frac`` is
    the residual (bookkeeping overhead), so the four fractions sum to 1.
    """
    frame = trace.to_frame()
    duration = frame["wall_s"].diff().fillna(frame["wall_s"])
    out = pd.DataFrame({"iter": frame["iter"], "duration_s": duration})
    for phase in ("build", "search", "eval"):
        out[f"{phase}_s"] = frame[f"{phase}_s"]
        out[f"{phase}_frac"] = frame[f"{phase}_s"] / duration
    out["other_frac"] = 1.0 - out[["build_frac", "search_frac", "eval_frac"]].sum(axis=1)
    return out


def baseline_name(variants: Sequence[str]) -> str:
    """``iris`` when present, else the first variant."""
    return "iris" if "iris" in variants else variants[0]


def summarize(
    ds: xr.Dataset, levels: Sequence[float] = SUMMARY_LEVELS, baseline: str | None = None
) -> pd.DataFrame:
    """Time (total and search-only) to reach fractions of the baseline's final coverage.

    For each seed the target count at level ``l`` is ``ceil(l * c)`` where ``c``
    is the baseline variant's final plan coverage for that seed.
    """
    variants = [str(v) for v in ds["variant"].values]
    reference = baseline if baseline is not None else baseline_name(variants)
    trace_view = TraceDatasetAccessor(ds)
    final = trace_view.final()
    rows = []
    for seed in ds["seed"].values:
        base = float(final["coverage_count"].sel(variant=reference, seed=seed))
        for level in levels:
            target = math.ceil(level * base - 1e-9) if not math.isnan(base) else 0
            total = trace_view.time_to_coverage(target).sel(seed=seed)
            search = trace_view.time_to_coverage(target, clock="search_s").sel(seed=seed)
            for variant in variants:
                rows.append(
                    {
                        "variant": variant,
                        "seed": int(seed),
                        "level": level,
                        "target_count": target,
                        "time_s": float(total.sel(variant=variant)),
                        "search_time_s": float(search.sel(variant=variant)),
                        "final_coverage_count": float(
                            final["coverage_count"].sel(variant=variant, seed=seed)
                        ),
                        "final_plan_length": float(
                            final["plan_length"].sel(variant=variant, seed=seed)
                        ),
                    }
                )
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))


def coverage_shortfalls(trace: PlanTrace, omega: float = 1.0, slack: float = 1e-9) -> list[int]:
    """Iterations whose plan coverage is below ``omega * p * |S(V)|``.

    Searches either run and return a p-bounded plan or are skipped because the
    previous plan still meets the gating threshold, so a correct run yields an
    empty list. ``omega`` is the effective gating factor (1 with coverage
    sampling off).
    """
    return [
        row.iter
        for row in trace.rows
        if row.coverage_count < omega * row.p * row.roadmap_coverage - slack
    ]
