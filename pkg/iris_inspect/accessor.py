"""Accessor for comparative trace datasets."""

from __future__ import annotations

from typing import ClassVar

from xarray import DataArray, Dataset

CLOCK_VARIABLES = ("wall_s", "search_s")


class TraceDatasetAccessor:
    """Reductions over a ``variant x seed x iter`` trace dataset.

    Registered as ``ds.iris`` on import of ``iris_inspect``.

    Args:
        ds: Dataset built by ``traces_to_dataset``.

    Example:
        ```python
        ds = traces_to_dataset(traces)
        ds.iris.final()["coverage_count"]
        ds.iris.time_to_coverage(45)                   # elapsed time
        ds.iris.time_to_coverage(45, clock="search_s")  # cumulative search time
        ds.iris.search_efficiency("iris", 45)
        ```
    """

    __all__: ClassVar = ["final", "time_to_coverage", "search_efficiency"]

    def __init__(self, ds: Dataset) -> None:
        self._ds = ds

    def __dir__(self) -> list[str]:
        return list(self.__all__) + list(super().__dir__())

    def final(self) -> Dataset:
        """Last recorded row of every (variant, seed) run."""
        count = self._ds["wall_s"].notnull().sum("iter")
        return self._ds.isel(iter=(count - 1).clip(min=0)).drop_vars("iter")

    def time_to_coverage(self, target: float, clock: str = "wall_s") -> DataArray:
        """First time the plan coverage reaches ``target`` POIs.

        Args:
            target: Plan coverage count to reach.
            clock: ``"wall_s"`` for elapsed time or ``"search_s"`` for cumulative
                search time.

        Returns:
            Times over ``variant`` and ``seed``; NaN where never reached.

        Raises:
            ValueError: If ``clock`` is unknown.
        """
        if clock not in CLOCK_VARIABLES:
            msg = f"Unknown clock: {clock!r}. Available clocks: {list(CLOCK_VARIABLES)}"
            raise ValueError(msg)
        ds = self._ds
        times = ds["wall_s"] if clock == "wall_s" else ds["search_s"].fillna(0.0).cumsum("iter")
        reached = ds["coverage_count"] >= target
        first = times.isel(iter=reached.astype("int8").argmax("iter")).drop_vars("iter")
        result = first.where(reached.any("iter"))
        result.attrs = {"long_name": f"time to {target:g} POIs", "units": "s"}
        return result.rename(f"{clock}_to_{target:g}")

    def search_efficiency(self, reference: str, target: float) -> DataArray:
        """Cumulative search time of ``reference`` divided by each variant's, to reach ``target``.

        Values above 1 mean the variant spent less time searching than the reference.
        """
        search = self.time_to_coverage(target, clock="search_s")
        ratio = search.sel(variant=reference).drop_vars("variant") / search
        ratio.attrs = {"long_name": f"search efficiency vs {reference}", "units": "1"}
        return ratio.rename("search_efficiency")
