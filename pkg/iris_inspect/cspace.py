"""Configurations, robot models, the path metric, interpolation and samplers.

A configuration is a flat float vector whose layout is fixed by the robot kind:

- ``planar2d``: ``(x, y)``
- ``planar2d_yaw``: ``(x, y, yaw)``
- ``spatial3d_yaw_pitch``: ``(x, y, z, yaw, pitch)``

Angles are radians wrapped to ``(-pi, pi]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from iris_inspect.common import FloatArray, ModelMismatch, OutOfRange

if TYPE_CHECKING:
    from collections.abc import Sequence

    from iris_inspect.scene import Workspace

Configuration = FloatArray
"""Type alias for a configuration vector."""


class RobotKind(str, enum.Enum):
    """Supported robot models."""

    PLANAR2D = "planar2d"
    PLANAR2D_YAW = "planar2d_yaw"
    SPATIAL3D_YAW_PITCH = "spatial3d_yaw_pitch"

    @property
    def translational_dims(self) -> int:
        return 3 if self is RobotKind.SPATIAL3D_YAW_PITCH else 2

    @property
    def angular_dims(self) -> int:
        return {RobotKind.PLANAR2D: 0, RobotKind.PLANAR2D_YAW: 1, RobotKind.SPATIAL3D_YAW_PITCH: 2}[
            self
        ]


@dataclass(frozen=True)
class RobotModel:
    """Robot occupancy and configuration layout.

    Attributes:
        kind: Configuration layout.
        radius: Radius of the occupancy sphere around the translational part (meters).
        angular_weight: Meters charged per radian of rotation in the path metric.
        translation_bounds: Optional per-axis ``(lower, upper)`` sampling limits
            overriding the workspace box. A zero-width interval pins the coordinate.
    """

    kind: RobotKind
    radius: float = 0.0
    angular_weight: float = 1.0
    translation_bounds: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self) -> None:
        if self.radius < 0:
            msg = f"Robot radius must be >= 0, got {self.radius!r}"
            raise ValueError(msg)
        if self.angular_weight < 0:
            msg = f"angular_weight must be >= 0, got {self.angular_weight!r}"
            raise ValueError(msg)
        if self.translation_bounds is not None:
            lower, upper = self.translation_bounds
            dims = self.kind.translational_dims
            if len(lower) != dims or len(upper) != dims:
                msg = f"translation_bounds must have {dims} components per corner"
                raise ValueError(msg)
            if any(lo > hi for lo, hi in zip(lower, upper, strict=True)):
                msg = f"translation_bounds lower exceeds upper: {lower!r} / {upper!r}"
                raise ValueError(msg)

    @property
    def config_dim(self) -> int:
        return self.kind.translational_dims + self.kind.angular_dims

    def check(self, q: Sequence[float] | FloatArray) -> Configuration:
        """Return ``q`` as a float array, verifying its length.

        Raises:
            ModelMismatch: If the length does not match the model layout.
        """
        arr = np.asarray(q, dtype=np.float64).reshape(-1)
        if arr.shape[0] != self.config_dim:
            msg = (
                f"Configuration of length {arr.shape[0]} does not match "
                f"{self.kind.value} (expects {self.config_dim})"
            )
            raise ModelMismatch(msg)
        return arr


def wrap_angle(angle: float | FloatArray) -> FloatArray:
    """Wrap angles to ``(-pi, pi]``."""
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=np.float64), 2.0 * np.pi)


def _delta(model: RobotModel, q_a: FloatArray, q_b: FloatArray) -> FloatArray:
    """Componentwise difference, shortest signed arc for angles."""
    delta = q_b - q_a
    t = model.kind.translational_dims
    if model.kind.angular_dims:
        delta[t:] = wrap_angle(delta[t:])
    return delta


def distance(
    model: RobotModel, q_a: Sequence[float] | FloatArray, q_b: Sequence[float] | FloatArray
) -> float:
    """Path-length metric between two configurations.

    Euclidean over the translational part plus ``angular_weight`` times the
    shortest angular difference per angle, combined in quadrature.

    Raises:
        ModelMismatch: If either configuration does not match the model.

    Example:
        ```python
        model = RobotModel(RobotKind.PLANAR2D)
        distance(model, (0, 0), (3, 4))  # 5.0
        ```
    """
    a = model.check(q_a)
    b = model.check(q_b)
    delta = _delta(model, a, b)
    delta[model.kind.translational_dims :] *= model.angular_weight
    return float(np.sqrt(delta @ delta))


def distances_to(model: RobotModel, q: FloatArray, others: FloatArray) -> FloatArray:
    """Vectorized ``distance`` from ``q`` to each row of ``others``."""
    delta = others - q[None, :]
    t = model.kind.translational_dims
    if model.kind.angular_dims:
        delta[:, t:] = wrap_angle(delta[:, t:]) * model.angular_weight
    return np.sqrt(np.einsum("ij,ij->i", delta, delta))


def path_length(model: RobotModel, configs: Sequence[FloatArray]) -> float:
    """Sum of metric distances between consecutive configurations."""
    return math.fsum(distance(model, a, b) for a, b in zip(configs, configs[1:], strict=False))


def interpolate(
    model: RobotModel,
    q_a: Sequence[float] | FloatArray,
    q_b: Sequence[float] | FloatArray,
    t: float,
) -> Configuration:
    """Linear interpolation, angles along the shortest arc.

    Raises:
        OutOfRange: If ``t`` is outside ``[0, 1]``.
        ModelMismatch: If either configuration does not match the model.
    """
    if not 0.0 <= t <= 1.0:
        msg = f"Interpolation parameter must lie in [0, 1], got {t!r}"
        raise OutOfRange(msg)
    a = model.check(q_a)
    b = model.check(q_b)
    if t == 0.0:
        return a.copy()
    if t == 1.0:
        return b.copy()
    q = a + t * _delta(model, a, b)
    td = model.kind.translational_dims
    if model.kind.angular_dims:
        q[td:] = wrap_angle(q[td:])
    return q


def _sampling_bounds(model: RobotModel, workspace: Workspace) -> tuple[FloatArray, FloatArray]:
    if model.translation_bounds is not None:
        lower, upper = model.translation_bounds
    else:
        lower, upper = workspace.lower, workspace.upper
    angles = model.kind.angular_dims
    lo = np.concatenate([np.asarray(lower, dtype=np.float64), np.full(angles, -math.pi)])
    hi = np.concatenate([np.asarray(upper, dtype=np.float64), np.full(angles, math.pi)])
    return lo, hi


def sample_uniform(
    model: RobotModel, workspace: Workspace, rng: np.random.Generator
) -> Configuration:
    """Draw a configuration uniformly over the sampling bounds and angle ranges.

    Exactly one ``rng.uniform`` call is made per sample so streams stay aligned
    across robot kinds of the same size.
    """
    lo, hi = _sampling_bounds(model, workspace)
    q = rng.uniform(lo, hi)
    td = model.kind.translational_dims
    if model.kind.angular_dims:
        q[td:] = wrap_angle(q[td:])
    return np.asarray(q, dtype=np.float64)


def steer(
    model: RobotModel,
    q_near: Sequence[float] | FloatArray,
    q_rand: Sequence[float] | FloatArray,
    step: float,
) -> Configuration:
    """Move from ``q_near`` toward ``q_rand`` by at most ``step``.

    Raises:
        ValueError: If ``step`` is not positive.
    """
    if not step > 0:
        msg = f"Steer step must be > 0, got {step!r}"
        raise ValueError(msg)
    d = distance(model, q_near, q_rand)
    if d <= step:
        return model.check(q_rand).copy()
    return interpolate(model, q_near, q_rand, step / d)


def occupancy(model: RobotModel, q: FloatArray) -> FloatArray:
    """Workspace point the robot sphere is centered on."""
    return q[: model.kind.translational_dims]


def sensor_pose(model: RobotModel, q: FloatArray) -> tuple[FloatArray, FloatArray | None]:
    """Sensor position and unit viewing direction (None for headless robots)."""
    position = occupancy(model, q)
    if model.kind is RobotKind.PLANAR2D:
        return position, None
    if model.kind is RobotKind.PLANAR2D_YAW:
        yaw = q[2]
        return position, np.array([math.cos(yaw), math.sin(yaw)])
    yaw, pitch = q[3], q[4]
    return position, np.array(
        [math.cos(pitch) * math.cos(yaw), math.cos(pitch) * math.sin(yaw), math.sin(pitch)]
    )


@dataclass(frozen=True)
class RngStreams:
    """Independent random streams derived from one master seed.

    Attributes:
        sampling: Configuration sampling.
        acceptance: Coverage-informed acceptance coin flips.
        scenario: Scenario generation (random POIs, random graphs).
    """

    sampling: np.random.Generator
    acceptance: np.random.Generator
    scenario: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> RngStreams:
        sampling, acceptance, scenario = np.random.SeedSequence(seed).spawn(3)
        return cls(
            sampling=np.random.default_rng(sampling),
            acceptance=np.random.default_rng(acceptance),
            scenario=np.random.default_rng(scenario),
        )
