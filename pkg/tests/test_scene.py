"""Tests for scene geometry, collision checks and visibility."""

from __future__ import annotations

import math
from typing import Any

import numpy as np
import pytest

from iris_inspect.common import CoverageSet, InvalidEndpoint, OutOfBounds
from iris_inspect.scene import (
    Box,
    Scene,
    SensorSpec,
    Sphere,
    Workspace,
    checkpoint_count,
    is_collision_free,
    motion_checkpoints,
    validate_motion,
    visible_pois,
)


def make_scene(
    *obstacles: Sphere | Box, pois: list[list[float]] | None = None, **sensor: Any
) -> Scene:
    workspace = Workspace((-5.0, -5.0), (5.0, 5.0), tuple(obstacles))
    points = np.array(pois if pois is not None else [[4.0, 4.0]])
    return Scene(workspace, points, SensorSpec(**{"range": 2.0, **sensor}))


class TestTypes:
    """Tests for scene type validation."""

    def test_sphere_radius(self) -> None:
        """Test that a sphere needs a positive radius."""
        with pytest.raises(ValueError, match="radius must be > 0"):
            Sphere((0.0, 0.0), 0.0)

    def test_box_corners(self) -> None:
        """Test that box corners must be ordered."""
        with pytest.raises(ValueError, match="min corner"):
            Box((1.0, 0.0), (0.0, 1.0))

    def test_workspace_dimension(self) -> None:
        """Test that only 2D and 3D workspaces exist."""
        with pytest.raises(ValueError, match="2D or 3D"):
            Workspace((0.0,), (1.0,))
        with pytest.raises(ValueError, match="lower < upper"):
            Workspace((0.0, 0.0), (1.0, 0.0))

    def test_obstacle_dimension(self) -> None:
        """Test that obstacles must match the workspace dimension."""
        with pytest.raises(ValueError, match="Obstacle 0 is 3D"):
            Workspace((0.0, 0.0), (1.0, 1.0), (Sphere((0.0, 0.0, 0.0), 1.0),))

    def test_sensor_ranges(self) -> None:
        """Test sensor parameter validation."""
        with pytest.raises(ValueError, match="range"):
            SensorSpec(range=0.0)
        with pytest.raises(ValueError, match="fov_half_angle"):
            SensorSpec(range=1.0, fov_half_angle=4.0)
        assert SensorSpec(range=1.0).omnidirectional
        assert not SensorSpec(range=1.0, fov_half_angle=0.8).omnidirectional

    def test_poi_outside_bounds_names_index(self) -> None:
        """Test that an out-of-bounds POI is reported by index."""
        with pytest.raises(ValueError, match="POI 1 at"):
            make_scene(pois=[[0.0, 0.0], [6.0, 0.0]])

    def test_pois_read_only(self) -> None:
        """Test that the POI array is frozen."""
        scene = make_scene(pois=[[0.0, 0.0]])
        assert scene.num_pois == 1
        with pytest.raises(ValueError):
            scene.pois[0, 0] = 1.0

    def test_default_resolution(self) -> None:
        """Test the default collision spacing."""
        assert make_scene().default_resolution() == pytest.approx(0.1)


class TestIsCollisionFree:
    """Tests for is_collision_free()."""

    def test_empty_scene(self) -> None:
        """Test that an empty scene is free everywhere in bounds."""
        assert is_collision_free(make_scene(), (0.3, -2.0))

    def test_inside_sphere(self) -> None:
        """Test a point inside a sphere."""
        assert not is_collision_free(make_scene(Sphere((0.0, 0.0), 1.0)), (0.5, 0.0))

    def test_near_box_with_radius(self) -> None:
        """Test a robot sphere 0.05 m from a box with radius 0.1."""
        scene = make_scene(Box((0.0, 0.0), (1.0, 1.0)))
        assert not is_collision_free(scene, (1.05, 0.5), robot_radius=0.1)
        assert is_collision_free(scene, (1.05, 0.5), robot_radius=0.01)

    def test_radius_leaves_bounds(self) -> None:
        """Test that the robot sphere must stay within bounds."""
        assert not is_collision_free(make_scene(), (4.95, 0.0), robot_radius=0.1)

    def test_out_of_bounds_raises(self) -> None:
        """Test that a point outside the bounds raises."""
        with pytest.raises(OutOfBounds):
            is_collision_free(make_scene(), (5.5, 0.0))


class TestValidateMotion:
    """Tests for validate_motion()."""

    def test_free_scene(self) -> None:
        """Test that any segment in an empty scene is valid."""
        assert validate_motion(make_scene(), (-4.0, -4.0), (4.0, 3.0), 0.1)

    def test_through_sphere(self) -> None:
        """Test a segment through a sphere."""
        assert not validate_motion(make_scene(Sphere((0.0, 0.0), 1.0)), (-2.0, 0.0), (2.0, 0.0), 0.1)

    def test_grazing_segment(self) -> None:
        """Test a segment passing 0.01 m from a sphere surface."""
        scene = make_scene(Sphere((0.0, 1.01), 1.0))
        assert validate_motion(scene, (-2.0, 0.0), (2.0, 0.0), 0.005)
        assert validate_motion(scene, (-2.0, 0.0), (2.0, 0.0), 0.0005)

    def test_endpoint_in_collision(self) -> None:
        """Test that colliding endpoints raise."""
        with pytest.raises(InvalidEndpoint, match="start"):
            validate_motion(make_scene(Sphere((0.0, 0.0), 1.0)), (0.0, 0.0), (3.0, 0.0), 0.1)

    def test_symmetry(self) -> None:
        """Test that direction of travel does not matter."""
        rng = np.random.default_rng(3)
        scene = make_scene(Sphere((0.0, 0.0), 1.0), Box((1.5, -3.0), (2.5, -1.0)))
        for _ in range(200):
            a, b = rng.uniform(-4.5, 4.5, size=(2, 2))
            if not (is_collision_free(scene, a) and is_collision_free(scene, b)):
                continue
            assert validate_motion(scene, a, b, 0.3) == validate_motion(scene, b, a, 0.3)

    def test_refinement_monotone(self) -> None:
        """Test that a finer resolution never turns an invalid motion valid."""
        rng = np.random.default_rng(5)
        scene = make_scene(Sphere((0.0, 0.0), 0.3), Sphere((2.0, 2.0), 0.2))
        for _ in range(200):
            a, b = rng.uniform(-4.5, 4.5, size=(2, 2))
            if not (is_collision_free(scene, a) and is_collision_free(scene, b)):
                continue
            coarse = validate_motion(scene, a, b, 1.0)
            fine = validate_motion(scene, a, b, 0.25)
            assert coarse or not fine

    def test_checkpoints_nested(self) -> None:
        """Test that finer checkpoints contain the coarser ones."""
        a, b = np.array([0.0, 0.0]), np.array([3.0, 1.0])
        coarse = motion_checkpoints(a, b, 1.0)
        fine = motion_checkpoints(a, b, 0.5)
        assert len(fine) == 2 * (len(coarse) - 1) + 1
        np.testing.assert_allclose(fine[::2], coarse)

    def test_checkpoint_count(self) -> None:
        """Test the power-of-two split."""
        assert checkpoint_count(0.5, 1.0) == 2
        assert checkpoint_count(4.0, 1.0) == 5
        assert checkpoint_count(4.1, 1.0) == 9
        with pytest.raises(ValueError, match="Resolution"):
            checkpoint_count(1.0, 0.0)


class TestVisiblePois:
    """Tests for visible_pois()."""

    def test_range(self) -> None:
        """Test the distance test."""
        scene = make_scene(pois=[[1.0, 0.0], [3.0, 0.0]])
        assert visible_pois(scene, (0.0, 0.0)) == CoverageSet.from_indices([0], 2)

    def test_out_of_range(self) -> None:
        """Test a pose far from every POI."""
        scene = make_scene(pois=[[1.0, 0.0], [3.0, 0.0]])
        assert not visible_pois(scene, (-4.0, -4.0))

    def test_sphere_occlusion(self) -> None:
        """Test that a sphere between pose and POI blocks the view."""
        scene = make_scene(Sphere((1.0, 0.0), 0.5), pois=[[2.0, 0.0]], range=5.0, occlusion_enabled=True)
        assert not visible_pois(scene, (0.0, 0.0))

    def test_occlusion_off(self) -> None:
        """Test that obstacles are ignored without occlusion."""
        scene = make_scene(Sphere((1.0, 0.0), 0.5), pois=[[2.0, 0.0]], range=5.0)
        assert visible_pois(scene, (0.0, 0.0)) == CoverageSet.full(1)

    def test_box_occlusion(self) -> None:
        """Test the slab test."""
        scene = make_scene(
            Box((0.5, -0.5), (1.0, 0.5)),
            pois=[[2.0, 0.0], [2.0, 2.0]],
            range=5.0,
            occlusion_enabled=True,
        )
        assert visible_pois(scene, (0.0, 0.0)).indices() == [1]

    def test_poi_on_obstacle_surface(self) -> None:
        """Test that a POI lying on the blocking surface is visible from outside."""
        scene = make_scene(Box((1.0, -0.5), (2.0, 0.5)), pois=[[1.0, 0.0]], range=5.0, occlusion_enabled=True)
        assert visible_pois(scene, (0.0, 0.0)) == CoverageSet.full(1)

    def test_field_of_view(self) -> None:
        """Test the view cone half angle."""
        scene = make_scene(pois=[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]], fov_half_angle=math.pi / 4)
        assert visible_pois(scene, (0.0, 0.0), (1.0, 0.0)).indices() == [0]
        assert visible_pois(scene, (0.0, 0.0), (1.0, 1.0)).indices() == [0, 1]
        assert visible_pois(scene, (0.0, 0.0)).indices() == [0, 1, 2]

    def test_range_monotone(self) -> None:
        """Test that enlarging the range never removes a POI."""
        rng = np.random.default_rng(11)
        pois = rng.uniform(-4.5, 4.5, size=(40, 2))
        obstacles = (Sphere((0.0, 0.0), 1.0), Box((2.0, 2.0), (3.0, 3.0)))
        workspace = Workspace((-5.0, -5.0), (5.0, 5.0), obstacles)
        for _ in range(50):
            pose = rng.uniform(-4.5, 4.5, size=2)
            small = Scene(workspace, pois, SensorSpec(range=2.0, occlusion_enabled=True))
            large = Scene(workspace, pois, SensorSpec(range=3.5, occlusion_enabled=True))
            assert visible_pois(large, pose).issuperset(visible_pois(small, pose))
