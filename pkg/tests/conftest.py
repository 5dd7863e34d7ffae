"""Shared fixtures."""

from __future__ import annotations

import pytest

from iris_inspect.planner import PlanTrace, TraceRow


def make_trace(
    variant: str,
    seed: int,
    coverage: list[int],
    search: list[float],
    *,
    step: float = 1.0,
    num_pois: int = 4,
) -> PlanTrace:
    """Trace whose row i ends at ``i * step`` seconds."""
    trace = PlanTrace(variant=variant, seed=seed, num_pois=num_pois)
    for i, (count, search_s) in enumerate(zip(coverage, search, strict=True), start=1):
        trace.append(
            TraceRow(
                iter=i,
                wall_s=i * step,
                num_vertices=i + 1,
                coverage_count=count,
                coverage_frac=count / num_pois,
                plan_length=float(count),
                build_s=0.0,
                search_s=search_s,
                eval_s=0.0,
                roadmap_coverage=count,
                p=0.9,
                eps=1.0,
                searched=True,
                found=True,
            )
        )
    return trace


@pytest.fixture
def traces() -> dict[tuple[str, int], PlanTrace]:
    """Two variants over two seeds with uneven lengths."""
    return {
        ("iris", 0): make_trace("iris", 0, [1, 2, 3, 4], [1.0, 1.0, 1.0, 1.0]),
        ("iris", 1): make_trace("iris", 1, [1, 1, 2], [1.0, 1.0, 1.0]),
        ("cli", 0): make_trace("cli", 0, [2, 4, 4], [0.5, 0.1, 0.1], step=0.5),
        ("cli", 1): make_trace("cli", 1, [3, 4], [0.25, 0.25], step=0.5),
    }
