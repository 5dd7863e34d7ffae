"""Incrementally densified roadmap: an explicit RRT implicitly defining an RRG.

Every vertex keeps the coverage of its sensor pose. Edges to the RRT parent are
validated on insertion; all other neighbor edges within the connection radius
are registered with status ``UNKNOWN`` and validated lazily, once, on demand.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from iris_inspect.common import (
    BadEdge,
    CoverageSet,
    FloatArray,
    InvalidStart,
    NoSuchVertex,
    OutOfBounds,
)
from iris_inspect.config import get_options
from iris_inspect.cspace import (
    distance,
    distances_to,
    occupancy,
    sample_uniform,
    sensor_pose,
    steer,
)
from iris_inspect.scene import (
    checkpoint_count,
    is_collision_free,
    validate_motion,
    visible_pois,
)

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from iris_inspect.cspace import RngStreams, RobotModel
    from iris_inspect.scene import Scene

logger = logging.getLogger(__name__)


class EdgeStatus(str, enum.Enum):
    """Cached validity of an edge. Only ``UNKNOWN`` ever changes."""

    UNKNOWN = "unknown"
    VALID = "valid"
    INVALID = "invalid"


@dataclass(frozen=True, slots=True)
class Vertex:
    id: int
    config: FloatArray = field(repr=False)
    coverage: CoverageSet


@dataclass(slots=True, eq=False)
class Edge:
    """Undirected roadmap edge with lazily evaluated validity."""

    u: int
    v: int
    length: float
    status: EdgeStatus = EdgeStatus.UNKNOWN

    def __post_init__(self) -> None:
        if not self.length > 0:
            msg = f"Edge ({self.u}, {self.v}) must have positive length, got {self.length!r}"
            raise ValueError(msg)

    def other(self, w: int) -> int:
        """Return the endpoint opposite to ``w``.

        Raises:
            BadEdge: If ``w`` is not an endpoint.
        """
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        msg = f"Edge ({self.u}, {self.v}) is not incident to vertex {w}"
        raise BadEdge(msg)

    def set_status(self, status: EdgeStatus) -> None:
        if self.status is not EdgeStatus.UNKNOWN and status is not self.status:
            msg = f"Edge ({self.u}, {self.v}) is already {self.status.value}"
            raise ValueError(msg)
        self.status = status


@dataclass
class RoadmapStats:
    """Operation counters of one roadmap.

    ``build_point_checks`` covers sample and RRT-edge collision checks;
    ``eval_point_checks`` covers lazy edge validations only.
    """

    attempts: int = 0
    collision_free: int = 0
    accepted: int = 0
    inserted: int = 0
    build_point_checks: int = 0
    rrt_validations: int = 0
    edge_validations: int = 0
    eval_point_checks: int = 0
    visibility_queries: int = 0
    eval_seconds: float = 0.0


@dataclass(frozen=True)
class ExpansionParams:
    """Parameters of one ``expand_roadmap`` call.

    Attributes:
        steer_step: Maximum metric distance of a new vertex from its RRT parent.
        p_accept: Probability of accepting a sample that adds no coverage.
        batch: Number of vertices requested.
    """

    steer_step: float
    p_accept: float = 1.0
    batch: int = 1

    def __post_init__(self) -> None:
        if not self.steer_step > 0:
            msg = f"steer_step must be > 0, got {self.steer_step!r}"
            raise ValueError(msg)
        if not 0.0 <= self.p_accept <= 1.0:
            msg = f"p_accept must lie in [0, 1], got {self.p_accept!r}"
            raise ValueError(msg)
        if self.batch < 1:
            msg = f"batch must be >= 1, got {self.batch!r}"
            raise ValueError(msg)


class Roadmap:
    """RRT skeleton plus implicit RRG neighbor edges.

    Vertex 0 is the start configuration. Mutation is single-owner.

    Args:
        scene: The scene to plan in.
        model: Robot model.
        start: Start configuration.
        connect_radius: Metric radius within which neighbor edges are registered.
        resolution: Collision-check spacing for motion validation (meters).

    Raises:
        InvalidStart: If the start configuration is in collision.
    """

    root = 0

    def __init__(
        self,
        scene: Scene,
        model: RobotModel,
        start: Sequence[float] | FloatArray,
        *,
        connect_radius: float,
        resolution: float,
    ) -> None:
        if not connect_radius > 0:
            msg = f"connect_radius must be > 0, got {connect_radius!r}"
            raise ValueError(msg)
        if not resolution > 0:
            msg = f"resolution must be > 0, got {resolution!r}"
            raise ValueError(msg)
        self.scene = scene
        self.model = model
        self.connect_radius = connect_radius
        self.resolution = resolution
        self.stats = RoadmapStats()

        q_start = model.check(start)
        if not self.is_free(q_start):
            msg = f"Start configuration {q_start.tolist()} is in collision"
            raise InvalidStart(msg)

        self._configs = np.empty((16, model.config_dim), dtype=np.float64)
        self._vertices: list[Vertex] = []
        self._adjacency: list[dict[int, Edge]] = []
        self.rrt_parent: list[int | None] = []
        self._total_coverage = CoverageSet.empty(scene.num_pois)
        self._insert(q_start, self.compute_coverage(q_start), parent=None)

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def total_coverage(self) -> CoverageSet:
        """Union of all vertex coverages."""
        return self._total_coverage

    @property
    def configs(self) -> FloatArray:
        return self._configs[: self.num_vertices]

    def vertex(self, v: int) -> Vertex:
        if not 0 <= v < len(self._vertices):
            msg = f"No vertex with id {v!r} (roadmap has {len(self._vertices)})"
            raise NoSuchVertex(msg)
        return self._vertices[v]

    def coverage(self, v: int) -> CoverageSet:
        return self.vertex(v).coverage

    def config(self, v: int) -> FloatArray:
        return self.vertex(v).config

    def edge(self, u: int, v: int) -> Edge:
        """Return the registered edge between ``u`` and ``v``.

        Raises:
            NoSuchVertex: If either vertex is unknown.
            KeyError: If the vertices are not connected.
        """
        self.vertex(v)
        return self._adjacency[self.vertex(u).id][v]

    def edges(self) -> Iterator[Edge]:
        """Yield every registered edge once."""
        for u, adjacent in enumerate(self._adjacency):
            for v, e in adjacent.items():
                if u < v:
                    yield e

    def neighbors(self, u: int) -> list[Edge]:
        """Edges incident to ``u`` that are not known to be invalid, by neighbor id.

        Raises:
            NoSuchVertex: If ``u`` is unknown.
        """
        self.vertex(u)
        adjacent = self._adjacency[u]
        return [adjacent[v] for v in sorted(adjacent) if adjacent[v].status is not EdgeStatus.INVALID]

    # collision and visibility

    def is_free(self, q: FloatArray) -> bool:
        """Collision test of a configuration's occupancy sphere."""
        self.stats.build_point_checks += 1
        try:
            return is_collision_free(self.scene, occupancy(self.model, q), self.model.radius)
        except OutOfBounds:
            return False

    def compute_coverage(self, q: FloatArray) -> CoverageSet:
        self.stats.visibility_queries += 1
        position, direction = sensor_pose(self.model, q)
        return visible_pois(self.scene, position, direction)

    def _motion_free(self, q_a: FloatArray, q_b: FloatArray) -> tuple[bool, int]:
        a = occupancy(self.model, q_a)
        b = occupancy(self.model, q_b)
        checks = checkpoint_count(float(np.linalg.norm(b - a)), self.resolution)
        return validate_motion(self.scene, a, b, self.resolution, self.model.radius), checks

    def ensure_edge_validated(self, edge: Edge) -> EdgeStatus:
        """Resolve an ``UNKNOWN`` edge with one motion validation and cache the result.

        Idempotent: already resolved edges return their status without any work.
        """
        if edge.status is EdgeStatus.UNKNOWN:
            started = time.perf_counter()
            ok, checks = self._motion_free(self.config(edge.u), self.config(edge.v))
            self.stats.eval_seconds += time.perf_counter() - started
            self.stats.edge_validations += 1
            self.stats.eval_point_checks += checks
            edge.set_status(EdgeStatus.VALID if ok else EdgeStatus.INVALID)
            logger.debug("Edge (%d, %d) validated: %s", edge.u, edge.v, edge.status.value)
        return edge.status

    # growth

    def nearest(self, q: FloatArray) -> int:
        """Id of the vertex closest to ``q`` (lowest id on ties)."""
        return int(np.argmin(distances_to(self.model, q, self.configs)))

    def _insert(self, q: FloatArray, coverage: CoverageSet, parent: int | None) -> int:
        vid = len(self._vertices)
        gaps = distances_to(self.model, q, self.configs) if vid else np.empty(0)
        if vid == len(self._configs):
            self._configs = np.concatenate([self._configs, np.empty_like(self._configs)])
        self._configs[vid] = q
        self._vertices.append(Vertex(vid, self._configs[vid].copy(), coverage))
        self._adjacency.append({})
        self.rrt_parent.append(parent)
        self._total_coverage = self._total_coverage | coverage

        if vid:
            for other in np.flatnonzero((gaps <= self.connect_radius) & (gaps > 0)).tolist():
                self._link(other, vid, float(gaps[other]), EdgeStatus.UNKNOWN)
        if parent is not None:
            length = float(gaps[parent])
            if parent in self._adjacency[vid]:
                self._adjacency[vid][parent].set_status(EdgeStatus.VALID)
            else:
                self._link(parent, vid, length, EdgeStatus.VALID)
        return vid

    def _link(self, u: int, v: int, length: float, status: EdgeStatus) -> None:
        e = Edge(u, v, length, status)
        self._adjacency[u][v] = e
        self._adjacency[v][u] = e

    def add_vertex(self, q: Sequence[float] | FloatArray, parent: int) -> int:
        """Insert a collision-free configuration as an RRT child of ``parent``.

        The caller guarantees the RRT edge is collision free. Returns the new id.
        """
        config = self.model.check(q)
        self.vertex(parent)
        if distance(self.model, self.config(parent), config) == 0:
            msg = f"Configuration {config.tolist()} duplicates vertex {parent}"
            raise ValueError(msg)
        return self._insert(config, self.compute_coverage(config), parent)


def accept_sample(
    sample_coverage: CoverageSet,
    total_coverage: CoverageSet,
    p_accept: float,
    rng: np.random.Generator,
) -> bool:
    """Coverage-informed acceptance.

    A coin with success probability ``p_accept`` is always flipped first; on
    failure the sample is accepted iff it sees a POI not yet covered.
    """
    if rng.random() < p_accept:
        return True
    return len(total_coverage | sample_coverage) > len(total_coverage)


def expand_roadmap(roadmap: Roadmap, params: ExpansionParams, streams: RngStreams) -> list[int]:
    """Grow the RRT by up to ``params.batch`` vertices.

    Each attempt samples uniformly, steers from the nearest vertex, rejects
    colliding candidates, applies ``accept_sample`` to the steered candidate,
    validates the RRT edge and inserts the vertex. Attempts are capped at
    ``max_attempts_factor * batch``.

    Returns:
        Ids of the inserted vertices, possibly empty.
    """
    model = roadmap.model
    stats = roadmap.stats
    max_attempts = get_options()["max_attempts_factor"] * params.batch
    inserted: list[int] = []

    for _ in range(max_attempts):
        if len(inserted) == params.batch:
            break
        stats.attempts += 1
        q_rand = sample_uniform(model, roadmap.scene.workspace, streams.sampling)
        near = roadmap.nearest(q_rand)
        q_near = roadmap.config(near)
        q_new = steer(model, q_near, q_rand, params.steer_step)
        if distance(model, q_near, q_new) == 0 or not roadmap.is_free(q_new):
            continue
        stats.collision_free += 1
        coverage = roadmap.compute_coverage(q_new)
        if not accept_sample(coverage, roadmap.total_coverage, params.p_accept, streams.acceptance):
            continue
        stats.accepted += 1
        ok, checks = roadmap._motion_free(q_near, q_new)
        stats.rrt_validations += 1
        stats.build_point_checks += checks
        if not ok:
            continue
        inserted.append(roadmap._insert(q_new, coverage, parent=near))
        stats.inserted += 1

    if len(inserted) < params.batch:
        logger.debug(
            "Expansion inserted %d of %d vertices in %d attempts",
            len(inserted),
            params.batch,
            max_attempts,
        )
    return inserted
