"""Workspace geometry, obstacles, POIs, collision predicates and the sensor model.

A scene is immutable once built; every predicate here is a pure function of its
arguments and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from iris_inspect.common import CoverageSet, FloatArray, InvalidEndpoint, OutOfBounds

if TYPE_CHECKING:
    from collections.abc import Sequence

# Segment parameters closer than this to an endpoint do not count as occluding hits,
# so POIs lying on an obstacle surface stay visible from the outside.
_OCCLUSION_T_TOL = 1e-9
_FOV_TOL = 1e-12


def _as_point(values: Sequence[float] | FloatArray, dim: int, what: str) -> FloatArray:
    point = np.asarray(values, dtype=np.float64).reshape(-1)
    if point.shape != (dim,):
        msg = f"{what} must have {dim} components, got {point.shape[0]}"
        raise ValueError(msg)
    return point


@dataclass(frozen=True)
class Sphere:
    """Spherical obstacle (a disc in 2D)."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            msg = f"Sphere radius must be > 0, got {self.radius!r}"
            raise ValueError(msg)

    @property
    def dim(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box obstacle given by its min and max corners."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            msg = f"Box corners differ in dimension: {self.lower!r} vs {self.upper!r}"
            raise ValueError(msg)
        if not all(lo < hi for lo, hi in zip(self.lower, self.upper, strict=True)):
            msg = f"Box min corner must be below max corner per axis: {self.lower!r} vs {self.upper!r}"
            raise ValueError(msg)

    @property
    def dim(self) -> int:
        return len(self.lower)


Obstacle = Sphere | Box
"""Type alias for the supported obstacle primitives."""


@dataclass(frozen=True)
class Workspace:
    """Axis-aligned workspace box with its obstacles.

    Attributes:
        lower: Lower bound per axis (meters).
        upper: Upper bound per axis (meters).
        obstacles: Obstacle primitives; their dimension must match the workspace.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self) -> None:
        if len(self.lower) not in (2, 3) or len(self.lower) != len(self.upper):
            msg = f"Workspace must be 2D or 3D with matching bounds, got {self.lower!r} / {self.upper!r}"
            raise ValueError(msg)
        if not all(lo < hi for lo, hi in zip(self.lower, self.upper, strict=True)):
            msg = f"Workspace bounds must satisfy lower < upper per axis: {self.lower!r} / {self.upper!r}"
            raise ValueError(msg)
        for index, obstacle in enumerate(self.obstacles):
            if obstacle.dim != self.dim:
                msg = f"Obstacle {index} is {obstacle.dim}D in a {self.dim}D workspace"
                raise ValueError(msg)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def shortest_extent(self) -> float:
        """Smallest side length of the workspace box."""
        return min(hi - lo for lo, hi in zip(self.lower, self.upper, strict=True))

    def contains(self, point: FloatArray) -> bool:
        """Return True iff the point lies inside the closed bounds."""
        return bool(np.all(point >= self.lower) and np.all(point <= self.upper))


@dataclass(frozen=True)
class SensorSpec:
    """Sensor model parameters.

    Attributes:
        range: Maximum sensing distance (meters).
        fov_half_angle: Half opening angle of the view cone (radians). A value of
            pi means omnidirectional.
        occlusion_enabled: Whether obstacles block the line of sight.
    """

    range: float
    fov_half_angle: float = math.pi
    occlusion_enabled: bool = False

    def __post_init__(self) -> None:
        if not self.range > 0:
            msg = f"Sensor range must be > 0, got {self.range!r}"
            raise ValueError(msg)
        if not 0 < self.fov_half_angle <= math.pi:
            msg = f"Sensor fov_half_angle must lie in (0, pi], got {self.fov_half_angle!r}"
            raise ValueError(msg)

    @property
    def omnidirectional(self) -> bool:
        return self.fov_half_angle >= math.pi


@dataclass(frozen=True, eq=False)
class Scene:
    """Workspace, ordered POIs and sensor.

    The row index of a POI in ``pois`` is its bit position in every CoverageSet.

    Raises:
        ValueError: If a POI has the wrong dimension or lies outside the workspace;
            the message names the POI index.
    """

    workspace: Workspace
    pois: FloatArray
    sensor: SensorSpec
    _obstacle_arrays: dict[str, FloatArray] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pois = np.asarray(self.pois, dtype=np.float64)
        if pois.size == 0:
            pois = pois.reshape(0, self.workspace.dim)
        if pois.ndim != 2 or pois.shape[1] != self.workspace.dim:
            msg = f"POIs must be an (N, {self.workspace.dim}) array, got shape {pois.shape}"
            raise ValueError(msg)
        for index, point in enumerate(pois):
            if not self.workspace.contains(point):
                msg = f"POI {index} at {point.tolist()} lies outside the workspace bounds"
                raise ValueError(msg)
        pois.setflags(write=False)
        object.__setattr__(self, "pois", pois)

        spheres = [o for o in self.workspace.obstacles if isinstance(o, Sphere)]
        boxes = [o for o in self.workspace.obstacles if isinstance(o, Box)]
        dim = self.workspace.dim
        arrays = {
            "sphere_centers": np.array([s.center for s in spheres], dtype=np.float64).reshape(-1, dim),
            "sphere_radii": np.array([s.radius for s in spheres], dtype=np.float64),
            "box_lower": np.array([b.lower for b in boxes], dtype=np.float64).reshape(-1, dim),
            "box_upper": np.array([b.upper for b in boxes], dtype=np.float64).reshape(-1, dim),
        }
        object.__setattr__(self, "_obstacle_arrays", arrays)

    @property
    def dim(self) -> int:
        return self.workspace.dim

    @property
    def num_pois(self) -> int:
        return int(self.pois.shape[0])

    @cached_property
    def lower(self) -> FloatArray:
        return np.asarray(self.workspace.lower, dtype=np.float64)

    @cached_property
    def upper(self) -> FloatArray:
        return np.asarray(self.workspace.upper, dtype=np.float64)

    def default_resolution(self) -> float:
        """Collision-check spacing used when a scenario does not set one."""
        return 0.01 * self.workspace.shortest_extent


def _points_colliding(scene: Scene, points: FloatArray, robot_radius: float) -> FloatArray:
    """Vectorized collision test for an (k, d) array of occupancy points.

    Returns a boolean array, True where the robot sphere touches an obstacle or
    leaves the workspace.
    """
    arrays = scene._obstacle_arrays
    out_of_bounds = np.any(points < scene.lower + robot_radius, axis=1) | np.any(
        points > scene.upper - robot_radius, axis=1
    )
    colliding = out_of_bounds

    centers = arrays["sphere_centers"]
    if len(centers):
        gaps = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
        reach = arrays["sphere_radii"][None, :] + robot_radius
        colliding = colliding | np.any(gaps <= reach, axis=1)

    lower = arrays["box_lower"]
    if len(lower):
        upper = arrays["box_upper"]
        nearest = np.clip(points[:, None, :], lower[None, :, :], upper[None, :, :])
        gaps = np.linalg.norm(points[:, None, :] - nearest, axis=2)
        colliding = colliding | np.any(gaps <= robot_radius, axis=1)

    return colliding


def is_collision_free(
    scene: Scene, point: Sequence[float] | FloatArray, robot_radius: float = 0.0
) -> bool:
    """Test whether a robot sphere at the given occupancy point is collision free.

    Args:
        scene: The scene.
        point: Occupancy point (meters).
        robot_radius: Radius of the robot sphere; 0 models a point robot.

    Returns:
        True iff the sphere intersects no obstacle and stays within bounds.

    Raises:
        OutOfBounds: If the point itself lies outside the workspace bounds.
    """
    p = _as_point(point, scene.dim, "Occupancy point")
    if not scene.workspace.contains(p):
        msg = f"Point {p.tolist()} lies outside the workspace bounds"
        raise OutOfBounds(msg)
    return not bool(_points_colliding(scene, p[None, :], robot_radius)[0])


def checkpoint_count(length: float, resolution: float) -> int:
    """Number of points checked along a segment of the given length.

    The segment is split into 2**k equal pieces with the smallest k whose piece
    length is at most ``resolution``; refining the resolution therefore only ever
    adds checkpoints.
    """
    if not resolution > 0:
        msg = f"Resolution must be > 0, got {resolution!r}"
        raise ValueError(msg)
    if length <= resolution:
        return 2
    pieces = 1 << math.ceil(math.log2(length / resolution))
    # guard against log2 rounding just below an exact power
    while length / pieces > resolution:
        pieces <<= 1
    return pieces + 1


def motion_checkpoints(a: FloatArray, b: FloatArray, resolution: float) -> FloatArray:
    """Evenly spaced points covering the segment a-b, endpoints included.

    Endpoints are put in lexicographic order first so the result does not depend
    on the direction of travel.
    """
    if tuple(b.tolist()) < tuple(a.tolist()):
        a, b = b, a
    count = checkpoint_count(float(np.linalg.norm(b - a)), resolution)
    t = np.arange(count, dtype=np.float64) / (count - 1)
    return a[None, :] + t[:, None] * (b - a)[None, :]


def validate_motion(
    scene: Scene,
    a: Sequence[float] | FloatArray,
    b: Sequence[float] | FloatArray,
    resolution: float,
    robot_radius: float = 0.0,
) -> bool:
    """Check a straight occupancy-space motion for collisions.

    Args:
        scene: The scene.
        a: Start occupancy point.
        b: End occupancy point.
        resolution: Maximum spacing between checked points (meters).
        robot_radius: Radius of the robot sphere.

    Returns:
        True iff every checkpoint is collision free. Symmetric in a and b.

    Raises:
        InvalidEndpoint: If either endpoint is in collision.
    """
    pa = _as_point(a, scene.dim, "Motion start")
    pb = _as_point(b, scene.dim, "Motion end")
    for name, endpoint in (("start", pa), ("end", pb)):
        if not scene.workspace.contains(endpoint) or _points_colliding(
            scene, endpoint[None, :], robot_radius
        )[0]:
            msg = f"Motion {name} {endpoint.tolist()} is in collision"
            raise InvalidEndpoint(msg)
    points = motion_checkpoints(pa, pb, resolution)
    return not bool(np.any(_points_colliding(scene, points, robot_radius)))


def _occluded_by_spheres(scene: Scene, origin: FloatArray, rays: FloatArray) -> FloatArray:
    arrays = scene._obstacle_arrays
    blocked = np.zeros(len(rays), dtype=bool)
    a = np.einsum("ij,ij->i", rays, rays)
    nonzero = a > 0
    for center, radius in zip(arrays["sphere_centers"], arrays["sphere_radii"], strict=True):
        f = origin - center
        b = 2.0 * rays @ f
        c = float(f @ f) - radius * radius
        disc = b * b - 4.0 * a * c
        hit = nonzero & (disc > 0)
        root = np.sqrt(np.where(hit, disc, 0.0))
        denom = np.where(nonzero, 2.0 * a, 1.0)
        t_enter = (-b - root) / denom
        t_exit = (-b + root) / denom
        blocked |= hit & (t_enter < 1.0 - _OCCLUSION_T_TOL) & (t_exit > _OCCLUSION_T_TOL)
    return blocked


def _occluded_by_boxes(scene: Scene, origin: FloatArray, rays: FloatArray) -> FloatArray:
    arrays = scene._obstacle_arrays
    blocked = np.zeros(len(rays), dtype=bool)
    parallel = rays == 0
    safe = np.where(parallel, 1.0, rays)
    for lower, upper in zip(arrays["box_lower"], arrays["box_upper"], strict=True):
        t1 = (lower - origin) / safe
        t2 = (upper - origin) / safe
        inside_slab = (origin >= lower) & (origin <= upper)
        t_min = np.where(parallel, np.where(inside_slab, -np.inf, np.inf), np.minimum(t1, t2))
        t_max = np.where(parallel, np.where(inside_slab, np.inf, -np.inf), np.maximum(t1, t2))
        t_enter = t_min.max(axis=1)
        t_exit = t_max.min(axis=1)
        blocked |= (
            (t_enter < t_exit)
            & (t_enter < 1.0 - _OCCLUSION_T_TOL)
            & (t_exit > _OCCLUSION_T_TOL)
        )
    return blocked


def visible_pois(
    scene: Scene,
    position: Sequence[float] | FloatArray,
    direction: Sequence[float] | FloatArray | None = None,
) -> CoverageSet:
    """Compute the POIs seen from a sensor pose.

    Args:
        scene: The scene.
        position: Sensor position.
        direction: Viewing direction; ignored when the sensor is omnidirectional
            and treated as omnidirectional when None.

    Returns:
        Bit i set iff POI i is within range, inside the view cone (angle between
        direction and POI offset at most the half angle) and, with occlusion
        enabled, the segment from the position to the POI crosses no obstacle.
    """
    origin = _as_point(position, scene.dim, "Sensor position")
    offsets = scene.pois - origin[None, :]
    distances = np.linalg.norm(offsets, axis=1)
    mask = distances <= scene.sensor.range

    if direction is not None and not scene.sensor.omnidirectional:
        heading = _as_point(direction, scene.dim, "Sensor direction")
        norm = float(np.linalg.norm(heading))
        if norm > 0:
            cosines = np.divide(
                offsets @ (heading / norm),
                distances,
                out=np.ones_like(distances),
                where=distances > 0,
            )
            angles = np.arccos(np.clip(cosines, -1.0, 1.0))
            mask &= angles <= scene.sensor.fov_half_angle + _FOV_TOL

    if scene.sensor.occlusion_enabled and mask.any():
        candidates = np.flatnonzero(mask)
        rays = offsets[candidates]
        blocked = _occluded_by_spheres(scene, origin, rays) | _occluded_by_boxes(
            scene, origin, rays
        )
        mask[candidates[blocked]] = False

    return CoverageSet.from_mask(mask)
