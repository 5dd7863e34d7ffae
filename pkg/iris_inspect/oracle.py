"""Ground-truth inspection plans on small explicit graphs.

``optimal_inspection_plan`` runs a uniform-cost search over (vertex, coverage)
states with dominance pruning. ``LazyGraph`` exposes an explicit graph to the
near-optimal search, revealing blocked edges only when they are validated, so
both can be compared on the same instance.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from iris_inspect.common import CoverageSet, InvalidPlan, NoSuchVertex, ScenarioError, TooLarge
from iris_inspect.roadmap import Edge, EdgeStatus

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    import numpy as np

logger = logging.getLogger(__name__)

MAX_ORACLE_POIS = 20
MAX_ORACLE_VERTICES = 12
_SLACK = 1e-9


@dataclass(frozen=True)
class ExplicitGraph:
    """Weighted undirected graph with per-vertex coverage.

    Attributes:
        coverages: Coverage of each vertex; the list index is the vertex id.
        edges: ``(u, v, weight)`` triples.
        start: Start vertex.
        blocked: Edges, as ``(min(u, v), max(u, v))``, that are in collision.
    """

    coverages: tuple[CoverageSet, ...]
    edges: tuple[tuple[int, int, float], ...]
    start: int = 0
    blocked: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        n = len(self.coverages)
        if not 0 <= self.start < n:
            msg = f"Start vertex {self.start!r} outside 0..{n - 1}"
            raise ValueError(msg)
        widths = {c.width for c in self.coverages}
        if len(widths) > 1:
            msg = f"Vertex coverages have different widths: {sorted(widths)}"
            raise ValueError(msg)
        seen: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                msg = f"Edge ({u}, {v}) must join two distinct vertices in 0..{n - 1}"
                raise ValueError(msg)
            if not w > 0:
                msg = f"Edge ({u}, {v}) must have positive weight, got {w!r}"
                raise ValueError(msg)
            key = (min(u, v), max(u, v))
            if key in seen:
                msg = f"Duplicate edge ({u}, {v})"
                raise ValueError(msg)
            seen.add(key)
        unknown = self.blocked - seen
        if unknown:
            msg = f"Blocked edges not in the graph: {sorted(unknown)}"
            raise ValueError(msg)

    @property
    def num_vertices(self) -> int:
        return len(self.coverages)

    @property
    def num_pois(self) -> int:
        return self.coverages[0].width if self.coverages else 0

    def adjacency(self, *, include_blocked: bool = False) -> list[dict[int, float]]:
        adjacent: list[dict[int, float]] = [{} for _ in self.coverages]
        for u, v, w in self.edges:
            if include_blocked or (min(u, v), max(u, v)) not in self.blocked:
                adjacent[u][v] = w
                adjacent[v][u] = w
        return adjacent


@dataclass(frozen=True)
class OracleResult:
    plan: tuple[int, ...]
    coverage: CoverageSet
    length: float


def optimal_inspection_plan(g: ExplicitGraph) -> OracleResult:
    """Walk from the start maximizing coverage, then minimizing length.

    Blocked edges are not traversable. Vertices may repeat.

    Raises:
        TooLarge: If the graph has more than 12 vertices or 20 POIs.

    Example:
        ```python
        cov = [CoverageSet.from_indices(ix, 2) for ix in ([], [0], [1])]
        g = ExplicitGraph(tuple(cov), ((0, 1, 1.0), (0, 2, 2.0), (1, 2, 1.0)))
        optimal_inspection_plan(g).plan  # (0, 1, 2)
        ```
    """
    if g.num_pois > MAX_ORACLE_POIS or g.num_vertices > MAX_ORACLE_VERTICES:
        msg = (
            f"Oracle limited to {MAX_ORACLE_VERTICES} vertices and {MAX_ORACLE_POIS} POIs, "
            f"got {g.num_vertices} and {g.num_pois}"
        )
        raise TooLarge(msg)

    adjacency = g.adjacency()
    bits = [c.bits for c in g.coverages]
    start = (g.start, bits[g.start])
    best: dict[tuple[int, int], float] = {start: 0.0}
    parent: dict[tuple[int, int], tuple[int, int] | None] = {start: None}
    settled: dict[int, list[tuple[int, float]]] = {}
    order: list[tuple[int, int]] = []
    heap: list[tuple[float, int, int]] = [(0.0, g.start, bits[g.start])]

    while heap:
        d, v, covered = heapq.heappop(heap)
        state = (v, covered)
        if d > best[state]:
            continue
        if any(other | covered == other for other, _ in settled.get(v, ())):
            continue
        settled.setdefault(v, []).append((covered, d))
        order.append(state)
        for w, weight in sorted(adjacency[v].items()):
            nxt = (w, covered | bits[w])
            nd = d + weight
            if nd < best.get(nxt, math.inf):
                best[nxt] = nd
                parent[nxt] = state
                heapq.heappush(heap, (nd, w, nxt[1]))

    top = max(order, key=lambda s: (s[1].bit_count(), -best[s]))
    plan: list[int] = []
    cursor: tuple[int, int] | None = top
    while cursor is not None:
        plan.append(cursor[0])
        cursor = parent[cursor]
    plan.reverse()
    return OracleResult(tuple(plan), CoverageSet(top[1], g.num_pois), best[top])


def plan_cost(g: ExplicitGraph, plan: Sequence[int]) -> tuple[CoverageSet, float]:
    """Coverage and length of a vertex sequence.

    Raises:
        InvalidPlan: If the plan is empty, does not begin at the start vertex or
            uses an edge that is missing or blocked.
    """
    if not plan or plan[0] != g.start:
        msg = f"Plan must begin at start vertex {g.start}, got {list(plan)!r}"
        raise InvalidPlan(msg)
    adjacency = g.adjacency()
    covered = CoverageSet.empty(g.num_pois)
    length = 0.0
    for index, v in enumerate(plan):
        if not 0 <= v < g.num_vertices:
            msg = f"Plan vertex {v!r} does not exist"
            raise InvalidPlan(msg)
        covered = covered | g.coverages[v]
        if index:
            u = plan[index - 1]
            if v not in adjacency[u]:
                msg = f"Plan uses missing or blocked edge ({u}, {v})"
                raise InvalidPlan(msg)
            length += adjacency[u][v]
    return covered, length


def verify_near_optimal(g: ExplicitGraph, plan: Sequence[int], eps: float, p: float) -> bool:
    """True iff the plan covers at least p times and is at most (1+eps) times the optimum.

    Raises:
        InvalidPlan: If the plan is not a walk in the graph.
    """
    covered, length = plan_cost(g, plan)
    optimum = optimal_inspection_plan(g)
    ok = (
        len(covered) >= p * len(optimum.coverage) - _SLACK
        and length <= (1.0 + eps) * optimum.length + _SLACK
    )
    if not ok:
        logger.info(
            "Plan %s (|S|=%d, length %.6g) is not (%g, %g)-near-optimal vs %s (|S|=%d, length %.6g)",
            list(plan),
            len(covered),
            length,
            eps,
            p,
            list(optimum.plan),
            len(optimum.coverage),
            optimum.length,
        )
    return ok


class LazyGraph:
    """Explicit graph presented to the near-optimal search.

    Every edge starts ``UNKNOWN``; validation reveals whether it is blocked. The
    graph can grow with ``add_vertex`` to mimic roadmap densification.
    """

    def __init__(self, g: ExplicitGraph) -> None:
        self._coverages = list(g.coverages)
        self._adjacency: list[dict[int, Edge]] = [{} for _ in g.coverages]
        self._blocked: set[tuple[int, int]] = set(g.blocked)
        self._width = g.num_pois
        self.root = g.start
        self.validations = 0
        self._total = CoverageSet.empty(self._width)
        for c in self._coverages:
            self._total = self._total | c
        for u, v, w in g.edges:
            self._link(u, v, w)

    @property
    def num_vertices(self) -> int:
        return len(self._coverages)

    @property
    def total_coverage(self) -> CoverageSet:
        return self._total

    def coverage(self, v: int) -> CoverageSet:
        if not 0 <= v < len(self._coverages):
            msg = f"No vertex with id {v!r}"
            raise NoSuchVertex(msg)
        return self._coverages[v]

    def edge(self, u: int, v: int) -> Edge:
        return self._adjacency[u][v]

    def neighbors(self, u: int) -> list[Edge]:
        self.coverage(u)
        adjacent = self._adjacency[u]
        return [adjacent[v] for v in sorted(adjacent) if adjacent[v].status is not EdgeStatus.INVALID]

    def ensure_edge_validated(self, edge: Edge) -> EdgeStatus:
        if edge.status is EdgeStatus.UNKNOWN:
            self.validations += 1
            key = (min(edge.u, edge.v), max(edge.u, edge.v))
            edge.set_status(EdgeStatus.INVALID if key in self._blocked else EdgeStatus.VALID)
        return edge.status

    def _link(self, u: int, v: int, weight: float) -> None:
        e = Edge(u, v, weight)
        self._adjacency[u][v] = e
        self._adjacency[v][u] = e

    def add_vertex(
        self, coverage: CoverageSet, edges: Iterable[tuple[int, float, bool]]
    ) -> int:
        """Append a vertex joined by ``(other, weight, blocked)`` edges; return its id."""
        vid = len(self._coverages)
        self._coverages.append(coverage)
        self._adjacency.append({})
        self._total = self._total | coverage
        for other, weight, blocked in edges:
            self.coverage(other)
            self._link(other, vid, weight)
            if blocked:
                self._blocked.add((other, vid))
        return vid

    def to_explicit(self) -> ExplicitGraph:
        """Snapshot as an ``ExplicitGraph`` (blocked edges included as blocked)."""
        edges = tuple(
            (u, v, e.length)
            for u, adjacent in enumerate(self._adjacency)
            for v, e in sorted(adjacent.items())
            if u < v
        )
        return ExplicitGraph(
            tuple(self._coverages), edges, self.root, frozenset(self._blocked)
        )


def random_graph(
    rng: np.random.Generator,
    n_vertices: int,
    n_pois: int,
    *,
    edge_prob: float = 0.35,
    coverage_prob: float = 0.25,
    blocked_fraction: float = 0.0,
    weight_range: tuple[float, float] = (0.5, 5.0),
) -> ExplicitGraph:
    """Random connected instance rooted at vertex 0.

    A random spanning tree is never blocked; each additional edge is present
    with ``edge_prob`` and blocked with ``blocked_fraction``.
    """
    if n_vertices < 1:
        msg = f"n_vertices must be >= 1, got {n_vertices!r}"
        raise ValueError(msg)
    coverages = tuple(
        CoverageSet.from_mask(rng.random(n_pois) < coverage_prob) for _ in range(n_vertices)
    )
    low, high = weight_range
    edges: list[tuple[int, int, float]] = []
    tree: set[tuple[int, int]] = set()
    for v in range(1, n_vertices):
        u = int(rng.integers(0, v))
        tree.add((u, v))
    blocked: set[tuple[int, int]] = set()
    for u in range(n_vertices):
        for v in range(u + 1, n_vertices):
            in_tree = (u, v) in tree
            if not in_tree and rng.random() >= edge_prob:
                continue
            edges.append((u, v, float(rng.uniform(low, high))))
            if not in_tree and rng.random() < blocked_fraction:
                blocked.add((u, v))
    return ExplicitGraph(coverages, tuple(edges), 0, frozenset(blocked))


# graph files


def parse_graph(text: str) -> tuple[ExplicitGraph, tuple[int, ...] | None]:
    """Parse the line-oriented graph format.

    ``pois N``, ``start V``, ``vertex ID [i,j,...]`` (ids in order from 0),
    ``edge U V W [blocked]`` and an optional ``plan V V ...``. ``#`` starts a
    comment.

    Raises:
        ScenarioError: With the offending line number.
    """
    n_pois: int | None = None
    start = 0
    coverages: list[CoverageSet] = []
    edges: list[tuple[int, int, float]] = []
    blocked: set[tuple[int, int]] = set()
    plan: tuple[int, ...] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        try:
            if head == "pois" and len(args) == 1:
                n_pois = int(args[0])
                if n_pois < 0:
                    raise ValueError(n_pois)
            elif head == "start" and len(args) == 1:
                start = int(args[0])
            elif head == "vertex" and len(args) in (1, 2):
                if n_pois is None:
                    raise ScenarioError("'pois' must come before the first vertex", line=lineno)
                if int(args[0]) != len(coverages):
                    msg = f"expected vertex id {len(coverages)}, got {args[0]}"
                    raise ScenarioError(msg, line=lineno)
                indices = [int(i) for i in args[1].split(",")] if len(args) == 2 else []
                coverages.append(CoverageSet.from_indices(indices, n_pois))
            elif head == "edge" and len(args) in (3, 4):
                u, v, w = int(args[0]), int(args[1]), float(args[2])
                edges.append((u, v, w))
                if len(args) == 4:
                    if args[3] != "blocked":
                        raise ScenarioError(f"unknown edge flag {args[3]!r}", line=lineno)
                    blocked.add((min(u, v), max(u, v)))
            elif head == "plan" and args:
                plan = tuple(int(a) for a in args)
            else:
                raise ScenarioError(f"cannot parse {raw.strip()!r}", line=lineno)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"bad value in {raw.strip()!r}: {exc}", line=lineno) from exc

    if not coverages:
        raise ScenarioError("graph has no vertices", key="vertex")
    try:
        graph = ExplicitGraph(tuple(coverages), tuple(edges), start, frozenset(blocked))
    except ValueError as exc:
        raise ScenarioError(str(exc), key="edge") from exc
    return graph, plan


def load_graph(path: str | Path) -> tuple[ExplicitGraph, tuple[int, ...] | None]:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def format_graph(g: ExplicitGraph, plan: Sequence[int] | None = None) -> str:
    """Canonical text form accepted by ``parse_graph``."""
    lines = [f"pois {g.num_pois}", f"start {g.start}"]
    for v, c in enumerate(g.coverages):
        lines.append(f"vertex {v} {','.join(map(str, c.indices()))}".rstrip())
    for u, v, w in g.edges:
        flag = " blocked" if (min(u, v), max(u, v)) in g.blocked else ""
        lines.append(f"edge {u} {v} {w!r}{flag}")
    if plan is not None:
        lines.append("plan " + " ".join(map(str, plan)))
    return "\n".join(lines) + "\n"
