"""Configuration for iris_inspect.

This module provides a global configuration system similar to xarray and pandas,
allowing users to switch search diagnostics on and tune numeric tolerances without
threading extra arguments through every call. It also holds the planner presets
and the table of planner variants.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING, Any, NamedTuple

if TYPE_CHECKING:
    from collections.abc import Generator


OPEN_KEYS: tuple[str, ...] = ("length", "coverage")
"""Available OPEN-list orderings for the near-optimal search."""


# Hyperparameter presets for the two scene families.
PRESETS: dict[str, dict[str, float]] = {
    "bridge": {"p_accept": 0.05, "p0": 0.85, "eps0": 10.0},
    "cavity": {"p_accept": 0.1, "p0": 0.9, "eps0": 15.0},
}


class Variant(NamedTuple):
    """Enhancement flags of a planner variant."""

    coverage_sampling: bool
    refined_lazy: bool
    incremental_reuse: bool


VARIANTS: dict[str, Variant] = {
    "iris": Variant(coverage_sampling=False, refined_lazy=False, incremental_reuse=False),
    "c": Variant(coverage_sampling=True, refined_lazy=False, incremental_reuse=False),
    "l": Variant(coverage_sampling=False, refined_lazy=True, incremental_reuse=False),
    "cl": Variant(coverage_sampling=True, refined_lazy=True, incremental_reuse=False),
    "cli": Variant(coverage_sampling=True, refined_lazy=True, incremental_reuse=True),
}

VARIANT_ALIASES: dict[str, str] = {"cle": "cl", "cile": "cli"}


def resolve_variant(name: str) -> tuple[str, Variant]:
    """Look up a variant by name or alias.

    Returns:
        The canonical variant name and its flags.

    Raises:
        ValueError: If the name is unknown.
    """
    key = VARIANT_ALIASES.get(name.lower(), name.lower())
    if key not in VARIANTS:
        available = sorted([*VARIANTS, *VARIANT_ALIASES])
        msg = f"Unknown variant: {name!r}. Available variants: {available}"
        raise ValueError(msg)
    return key, VARIANTS[key]


@dataclass
class Options:
    """Configuration options for iris_inspect.

    Attributes:
        debug_assertions: Audit list boundedness and T/NT invariants after list
            initialization and after every search step. Default False.
        trace_search: Emit one debug record per OPEN pop on the
            ``iris_inspect.search.trace`` logger. Default False.
        open_key: OPEN ordering, ``"length"`` (PAP length first) or ``"coverage"``
            (PAP coverage first). Default ``"length"``.
        bounded_slack: Absolute slack toward acceptance in boundedness tests.
        max_attempts_factor: Sampling attempts allowed per requested vertex in one
            roadmap expansion batch.
        work_unit_s: Nominal seconds charged per unit by the deterministic work clock.
    """

    debug_assertions: bool = False
    trace_search: bool = False
    open_key: str = "length"
    bounded_slack: float = 1e-9
    max_attempts_factor: int = 100
    work_unit_s: float = 1e-6

    def to_dict(self) -> dict[str, Any]:
        """Return options as a dictionary."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


# Global options instance
_options = Options()


def get_options() -> dict[str, Any]:
    """Get the current iris_inspect options.

    Returns:
        Dictionary of current option values.

    Example:
        ```python
        from iris_inspect import config
        config.get_options()
        ```
    """
    return _options.to_dict()


def _validate(name: str, value: Any) -> None:
    if name == "open_key" and value not in OPEN_KEYS:
        msg = f"Unknown open_key: {value!r}. Available keys: {list(OPEN_KEYS)}"
        raise ValueError(msg)
    if name == "bounded_slack" and value < 0:
        msg = f"bounded_slack must be >= 0, got {value!r}"
        raise ValueError(msg)
    if name == "max_attempts_factor" and value < 1:
        msg = f"max_attempts_factor must be >= 1, got {value!r}"
        raise ValueError(msg)
    if name == "work_unit_s" and value <= 0:
        msg = f"work_unit_s must be > 0, got {value!r}"
        raise ValueError(msg)


@contextmanager
def set_options(
    *,
    debug_assertions: bool | None = None,
    trace_search: bool | None = None,
    open_key: str | None = None,
    bounded_slack: float | None = None,
    max_attempts_factor: int | None = None,
    work_unit_s: float | None = None,
) -> Generator[None, None, None]:
    """Set iris_inspect options as a context manager.

    Args:
        debug_assertions: Audit search invariants after every step.
        trace_search: Emit per-pop search trace records.
        open_key: OPEN ordering, ``"length"`` or ``"coverage"``.
        bounded_slack: Absolute slack toward acceptance in boundedness tests.
        max_attempts_factor: Sampling attempts per requested vertex.
        work_unit_s: Nominal seconds per work-clock unit.

    Yields:
        None when used as a context manager.

    Raises:
        ValueError: If a value is out of range.

    Example:
        ```python
        from iris_inspect import config

        with config.set_options(debug_assertions=True, open_key="coverage"):
            result = plan(scene, model, start, planner_config)
        # Defaults are back after the context
        ```
    """
    requested = {
        "debug_assertions": debug_assertions,
        "trace_search": trace_search,
        "open_key": open_key,
        "bounded_slack": bounded_slack,
        "max_attempts_factor": max_attempts_factor,
        "work_unit_s": work_unit_s,
    }
    updates = {name: value for name, value in requested.items() if value is not None}
    for name, value in updates.items():
        _validate(name, value)

    old_values = _options.to_dict()
    for name, value in updates.items():
        setattr(_options, name, value)

    try:
        yield
    finally:
        for name, value in old_values.items():
            setattr(_options, name, value)
