"""Near-optimal graph search over path pairs.

A path pair couples an achievable path (AP), reconstructed by following
``pred`` links, with a potentially achievable path (PAP) known only by its
coverage and length. The search keeps every revealed pair (OPEN and CLOSED)
(eps, p)-bounded, merges pairs at the same vertex by subsuming, evaluates edges
lazily and can carry its lists over to the next search after the bounds are
tightened and the graph has grown.

Example:
    ```python
    lists = initialize_lists(roadmap, eps, p, None, [])
    plan = near_optimal_search(roadmap, lists, eps, p)
    # next iteration, after expansion and tightening
    lists = initialize_lists(roadmap, eps2, p2, lists, new_ids)
    plan = near_optimal_search(roadmap, lists, eps2, p2)
    ```
"""

from __future__ import annotations

import enum
import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

from iris_inspect.common import CoverageSet, InvariantViolation, VertexMismatch
from iris_inspect.config import _options
from iris_inspect.roadmap import EdgeStatus

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

    from iris_inspect.roadmap import Edge

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger(f"{__name__}.trace")

_serials = itertools.count()


class SearchGraph(Protocol):
    """What the search needs from a graph: coverages, neighbors, lazy validation."""

    @property
    def root(self) -> int: ...

    @property
    def total_coverage(self) -> CoverageSet: ...

    def coverage(self, v: int) -> CoverageSet: ...

    def neighbors(self, u: int) -> list[Edge]: ...

    def ensure_edge_validated(self, edge: Edge) -> EdgeStatus: ...


class NodeKind(str, enum.Enum):
    """T: has not subsumed another pair. NT: has, and its incoming edge is validated."""

    T = "T"
    NT = "NT"


class NodeClass(str, enum.Enum):
    REUSABLE = "reusable"
    BOUNDARY = "boundary"
    NON_REUSABLE = "non_reusable"


class AddOutcome(str, enum.Enum):
    """What ``add_new_node`` did with the new pair."""

    DOMINATED = "dominated"
    MERGED = "merged"
    INSERTED = "inserted"
    DISCARDED = "discarded"


@dataclass(frozen=True, slots=True)
class HiddenPair:
    """A subsumed pair stored as its predecessor plus the edge into its vertex.

    ``pred`` is None only for the root pair.
    """

    vertex: int
    pred: PathPair | None
    edge: Edge | None


@dataclass(eq=False, slots=True)
class PathPair:
    """Search node.

    Raises:
        InvariantViolation: If the PAP does not dominate the AP, an NT pair has an
            unvalidated incoming edge or a T pair carries subsumed entries.
    """

    vertex: int
    pred: PathPair | None = field(repr=False)
    edge: Edge | None = field(repr=False)
    ap_coverage: CoverageSet
    ap_length: float
    pap_coverage: CoverageSet
    pap_length: float
    kind: NodeKind = NodeKind.T
    subsumed: list[HiddenPair] = field(default_factory=list, repr=False)
    serial: int = field(default_factory=lambda: next(_serials))

    def __post_init__(self) -> None:
        if self.pap_length > self.ap_length or not self.pap_coverage.issuperset(self.ap_coverage):
            msg = f"PAP does not dominate AP in {self!r}"
            raise InvariantViolation(msg)
        if self.kind is NodeKind.NT and not self.edge_validated:
            msg = f"NT pair with unvalidated incoming edge: {self!r}"
            raise InvariantViolation(msg)
        if self.kind is NodeKind.T and self.subsumed:
            msg = f"T pair carries subsumed entries: {self!r}"
            raise InvariantViolation(msg)

    @property
    def edge_validated(self) -> bool:
        return self.edge is None or self.edge.status is EdgeStatus.VALID

    def hidden(self) -> HiddenPair:
        return HiddenPair(self.vertex, self.pred, self.edge)

    def ancestors(self) -> Iterator[PathPair]:
        """Strict ancestors along the AP, nearest first."""
        node = self.pred
        while node is not None:
            yield node
            node = node.pred

    def ap_vertices(self) -> list[int]:
        """Vertex sequence of the AP, start first."""
        vertices = [self.vertex, *(a.vertex for a in self.ancestors())]
        vertices.reverse()
        return vertices

    def ap_edges(self) -> list[Edge]:
        edges = [n.edge for n in (self, *self.ancestors()) if n.edge is not None]
        edges.reverse()
        return edges

    def absorb(self, other: PathPair) -> None:
        """Record ``other`` as subsumed in place; the PAP must already dominate it."""
        if other.vertex != self.vertex:
            msg = f"Cannot absorb a pair at vertex {other.vertex} into one at {self.vertex}"
            raise VertexMismatch(msg)
        if not self.edge_validated:
            msg = f"Absorbing into a pair with unvalidated incoming edge: {self!r}"
            raise InvariantViolation(msg)
        self.subsumed.extend(_stored_entries(self, other))
        self.kind = NodeKind.NT


@dataclass(frozen=True)
class Plan:
    """An inspection plan: the AP of the pair that reached full coverage."""

    vertices: tuple[int, ...]
    length: float
    coverage: CoverageSet

    @classmethod
    def from_pair(cls, pp: PathPair) -> Plan:
        return cls(tuple(pp.ap_vertices()), pp.ap_length, pp.ap_coverage)


@dataclass
class SearchStats:
    """Counters accumulated over all searches sharing one stats object."""

    searches: int = 0
    pops: int = 0
    invalid_pops: int = 0
    generated: int = 0
    dominated: int = 0
    merged: int = 0
    absorbed: int = 0
    inserted: int = 0
    discarded: int = 0
    validations: int = 0
    released: int = 0
    rebuilt: int = 0


def root_pair(graph: SearchGraph) -> PathPair:
    """Pair whose AP and PAP are the start vertex alone."""
    coverage = graph.coverage(graph.root)
    return PathPair(graph.root, None, None, coverage, 0.0, coverage, 0.0)


def extend(pp_u: PathPair, edge: Edge, vertex_coverage: CoverageSet) -> PathPair:
    """Extend both paths of ``pp_u`` by ``edge``.

    Raises:
        BadEdge: If the edge is not incident to ``pp_u``'s vertex.
    """
    v = edge.other(pp_u.vertex)
    return PathPair(
        vertex=v,
        pred=pp_u,
        edge=edge,
        ap_coverage=pp_u.ap_coverage | vertex_coverage,
        ap_length=pp_u.ap_length + edge.length,
        pap_coverage=pp_u.pap_coverage | vertex_coverage,
        pap_length=pp_u.pap_length + edge.length,
    )


def _bounded(
    ap_length: float, ap_count: int, pap_length: float, pap_count: int, eps: float, p: float
) -> bool:
    slack = _options.bounded_slack
    return ap_length <= (1.0 + eps) * pap_length + slack and ap_count >= p * pap_count - slack


def is_bounded(pp: PathPair, eps: float, p: float) -> bool:
    """True iff ``ap_length <= (1+eps) pap_length`` and ``|ap| >= p |pap|``.

    Both comparisons carry the configured slack toward acceptance.
    """
    return _bounded(pp.ap_length, len(pp.ap_coverage), pp.pap_length, len(pp.pap_coverage), eps, p)


def _merge_is_bounded(keep: PathPair, other: PathPair, eps: float, p: float) -> bool:
    """Boundedness of ``subsume(keep, other)`` without building it."""
    return _bounded(
        keep.ap_length,
        len(keep.ap_coverage),
        min(keep.pap_length, other.pap_length),
        len(keep.pap_coverage | other.pap_coverage),
        eps,
        p,
    )


def _stored_entries(pp1: PathPair, pp2: PathPair) -> list[HiddenPair]:
    entries = list(pp2.subsumed)
    dominated = pp1.ap_coverage.issuperset(pp2.pap_coverage) and pp1.ap_length <= pp2.pap_length
    if not dominated:
        entries.insert(0, pp2.hidden())
    return entries


def subsume(pp1: PathPair, pp2: PathPair) -> PathPair:
    """Return ``pp1`` subsuming ``pp2``: pp1's AP with the union/min PAP.

    ``pp2`` is kept as a hidden entry unless pp1's AP already dominates pp2's PAP;
    pp2's own hidden entries are always inherited. The caller checks that the
    result is bounded and that pp1's incoming edge is validated.

    Raises:
        VertexMismatch: If the pairs end at different vertices.
    """
    if pp1.vertex != pp2.vertex:
        msg = f"Cannot subsume a pair at vertex {pp2.vertex} into one at {pp1.vertex}"
        raise VertexMismatch(msg)
    return PathPair(
        vertex=pp1.vertex,
        pred=pp1.pred,
        edge=pp1.edge,
        ap_coverage=pp1.ap_coverage,
        ap_length=pp1.ap_length,
        pap_coverage=pp1.pap_coverage | pp2.pap_coverage,
        pap_length=min(pp1.pap_length, pp2.pap_length),
        kind=NodeKind.NT,
        subsumed=[*pp1.subsumed, *_stored_entries(pp1, pp2)],
    )


def reconstruct(hidden: HiddenPair, graph: SearchGraph) -> PathPair:
    """Rebuild a hidden pair from its predecessor and incoming edge."""
    if hidden.pred is None or hidden.edge is None:
        return root_pair(graph)
    return extend(hidden.pred, hidden.edge, graph.coverage(hidden.vertex))


class SearchLists:
    """OPEN priority queue and CLOSED set, both bucketed by end vertex.

    OPEN ordering follows ``Options.open_key`` at construction time, with the
    creation serial as the final tie-breaker. Removal from OPEN is lazy.

    Args:
        stats: Counter object to update; a fresh one is created when omitted.
    """

    def __init__(self, *, stats: SearchStats | None = None) -> None:
        self.open_key: str = _options.open_key
        self.stats = stats if stats is not None else SearchStats()
        self.best_result: PathPair | None = None
        self.open: dict[int, PathPair] = {}
        self.closed: dict[int, PathPair] = {}
        self._heap: list[tuple[tuple[float, float, int], PathPair]] = []
        self._open_at: dict[int, dict[int, PathPair]] = {}
        self._closed_at: dict[int, dict[int, PathPair]] = {}

    def _key(self, pp: PathPair) -> tuple[float, float, int]:
        if self.open_key == "coverage":
            return (-len(pp.pap_coverage), pp.pap_length, pp.serial)
        return (pp.pap_length, -len(pp.pap_coverage), pp.serial)

    def __contains__(self, pp: object) -> bool:
        return isinstance(pp, PathPair) and (
            self.open.get(pp.serial) is pp or self.closed.get(pp.serial) is pp
        )

    def open_at(self, v: int) -> list[PathPair]:
        return list(self._open_at.get(v, {}).values())

    def closed_at(self, v: int) -> list[PathPair]:
        return list(self._closed_at.get(v, {}).values())

    def revealed(self) -> list[PathPair]:
        """All OPEN and CLOSED pairs in creation order."""
        return sorted([*self.closed.values(), *self.open.values()], key=lambda pp: pp.serial)

    def push(self, pp: PathPair) -> None:
        self.open[pp.serial] = pp
        self._open_at.setdefault(pp.vertex, {})[pp.serial] = pp
        heapq.heappush(self._heap, (self._key(pp), pp))

    def remove_open(self, pp: PathPair) -> None:
        del self.open[pp.serial]
        del self._open_at[pp.vertex][pp.serial]

    def replace_open(self, old: PathPair, new: PathPair) -> None:
        self.remove_open(old)
        self.push(new)
        if self.best_result is old:
            self.best_result = new

    def pop(self) -> PathPair | None:
        """Remove and return the minimum-key OPEN pair, or None when OPEN is empty."""
        while self._heap:
            _, pp = heapq.heappop(self._heap)
            if self.open.get(pp.serial) is pp:
                self.remove_open(pp)
                return pp
        return None

    def close(self, pp: PathPair) -> None:
        self.closed[pp.serial] = pp
        self._closed_at.setdefault(pp.vertex, {})[pp.serial] = pp

    def remove_closed(self, pp: PathPair) -> None:
        del self.closed[pp.serial]
        del self._closed_at[pp.vertex][pp.serial]

    def discard(self, pp: PathPair) -> None:
        """Remove a revealed pair from whichever list holds it."""
        if self.open.get(pp.serial) is pp:
            self.remove_open(pp)
        elif self.closed.get(pp.serial) is pp:
            self.remove_closed(pp)


def _edge_ready(pp: PathPair, graph: SearchGraph, stats: SearchStats) -> bool:
    """Make sure ``pp``'s incoming edge is validated; False if it is invalid."""
    if pp.edge_validated:
        return True
    assert pp.edge is not None
    if pp.edge.status is EdgeStatus.UNKNOWN:
        stats.validations += 1
    return graph.ensure_edge_validated(pp.edge) is EdgeStatus.VALID


def add_new_node(
    pp_v: PathPair, lists: SearchLists, graph: SearchGraph, eps: float, p: float
) -> AddOutcome:
    """Add a new pair to the lists while keeping every revealed pair bounded.

    Rules, applied in order at ``pp_v``'s vertex:

    1. A CLOSED pair whose PAP dominates pp_v's PAP records pp_v as subsumed.
    2. Otherwise the first OPEN pair that can subsume pp_v with a bounded result
       is replaced by that result. A T candidate has its incoming edge validated
       first; if the edge is invalid the candidate is dropped and the scan goes on.
    3. Otherwise pp_v subsumes every OPEN pair it can while staying bounded,
       validating its own incoming edge before the first merge (pp_v is discarded
       if that edge is invalid), and is pushed onto OPEN.
    """
    stats = lists.stats
    v = pp_v.vertex

    for closed in lists.closed_at(v):
        if closed.pap_coverage.issuperset(pp_v.pap_coverage) and closed.pap_length <= pp_v.pap_length:
            closed.absorb(pp_v)
            stats.dominated += 1
            return AddOutcome.DOMINATED

    for other in lists.open_at(v):
        if not _merge_is_bounded(other, pp_v, eps, p):
            continue
        if not _edge_ready(other, graph, stats):
            lists.remove_open(other)
            stats.discarded += 1
            continue
        lists.replace_open(other, subsume(other, pp_v))
        stats.merged += 1
        return AddOutcome.MERGED

    current = pp_v
    for other in lists.open_at(v):
        if not _merge_is_bounded(current, other, eps, p):
            continue
        if not _edge_ready(current, graph, stats):
            stats.discarded += 1
            return AddOutcome.DISCARDED
        lists.remove_open(other)
        if lists.best_result is other:
            lists.best_result = None
        current = subsume(current, other)
        stats.absorbed += 1
    lists.push(current)
    stats.inserted += 1
    return AddOutcome.INSERTED


def validate_node(pp: PathPair, graph: SearchGraph, stats: SearchStats | None = None) -> bool:
    """Check a popped pair's incoming edge; NT pairs and the root need no work."""
    if pp.kind is NodeKind.NT or pp.edge is None:
        return True
    return _edge_ready(pp, graph, stats if stats is not None else SearchStats())


def _trace(pp: PathPair, action: str) -> None:
    trace_logger.debug(
        "pop serial=%d vertex=%d kind=%s |pap|=%d pap_length=%.9g action=%s",
        pp.serial,
        pp.vertex,
        pp.kind.value,
        len(pp.pap_coverage),
        pp.pap_length,
        action,
    )


def _successors(
    pp: PathPair,
    graph: SearchGraph,
    stats: SearchStats,
    *,
    lazy: bool,
    only: set[int] | None = None,
) -> Iterator[PathPair]:
    for edge in graph.neighbors(pp.vertex):
        if only is not None and edge.other(pp.vertex) not in only:
            continue
        if not lazy:
            if edge.status is EdgeStatus.UNKNOWN:
                stats.validations += 1
            if graph.ensure_edge_validated(edge) is not EdgeStatus.VALID:
                continue
        stats.generated += 1
        yield extend(pp, edge, graph.coverage(edge.other(pp.vertex)))


def near_optimal_search(
    graph: SearchGraph, lists: SearchLists, eps: float, p: float, *, lazy: bool = True
) -> Plan | None:
    """Run the search until a pair's PAP covers everything the graph covers.

    The goal pair is pushed back onto OPEN and remembered as ``best_result`` so
    the next search can start from these lists.

    Args:
        graph: Roadmap or explicit graph.
        lists: Lists from ``initialize_lists``.
        eps: Length approximation factor.
        p: Coverage approximation factor.
        lazy: Validate edges only when a pair is popped or about to subsume. When
            False every edge is validated as soon as it is used for an extension.

    Returns:
        The AP of the goal pair, or None if OPEN runs empty.
    """
    stats = lists.stats
    stats.searches += 1
    tracing = _options.trace_search and trace_logger.isEnabledFor(logging.DEBUG)
    target = graph.total_coverage

    while (pp := lists.pop()) is not None:
        stats.pops += 1
        if not validate_node(pp, graph, stats):
            stats.invalid_pops += 1
            if tracing:
                _trace(pp, "invalid")
            continue
        if pp.pap_coverage == target:
            lists.push(pp)
            lists.best_result = pp
            if tracing:
                _trace(pp, "goal")
            return Plan.from_pair(pp)
        if tracing:
            _trace(pp, "expand")
        for child in _successors(pp, graph, stats, lazy=lazy):
            add_new_node(child, lists, graph, eps, p)
        lists.close(pp)
        if _options.debug_assertions:
            check_lists(lists, eps, p)

    logger.warning("Search exhausted OPEN without reaching coverage %d", len(target))
    return None


def classify_node(
    pp: PathPair, eps: float, p: float, memo: dict[int, NodeClass] | None = None
) -> NodeClass:
    """Classify a pair from a previous search under the tightened bounds.

    Reusable: the pair and all its AP ancestors are bounded. Boundary: the pair
    is unbounded but its ancestors are bounded. Non-reusable: some strict
    ancestor is unbounded. Results are memoized by serial in ``memo``.
    """
    memo = {} if memo is None else memo
    chain: list[PathPair] = []
    node: PathPair | None = pp
    while node is not None and node.serial not in memo:
        chain.append(node)
        node = node.pred
    parent_class = NodeClass.REUSABLE if node is None else memo[node.serial]
    for member in reversed(chain):
        if parent_class is NodeClass.REUSABLE:
            parent_class = NodeClass.REUSABLE if is_bounded(member, eps, p) else NodeClass.BOUNDARY
        else:
            parent_class = NodeClass.NON_REUSABLE
        memo[member.serial] = parent_class
    return memo[pp.serial]


def recursively_release(
    item: PathPair | HiddenPair,
    lists: SearchLists,
    graph: SearchGraph,
    eps: float,
    p: float,
    *,
    memo: dict[int, NodeClass] | None = None,
    lazy: bool = True,
) -> None:
    """Return a released pair and everything it subsumed to the lists.

    Reusable pairs are added as they are; a boundary pair is replaced by the
    fresh extension of its predecessor. Boundary and non-reusable pairs also
    release every subsumed entry. Hidden entries are rebuilt from their
    predecessor first. Runs on an explicit stack.
    """
    memo = {} if memo is None else memo
    stats = lists.stats
    stack: list[PathPair | HiddenPair] = [item]
    while stack:
        entry = stack.pop()
        node = reconstruct(entry, graph) if isinstance(entry, HiddenPair) else entry
        stats.released += 1
        kind = classify_node(node, eps, p, memo)
        if kind is NodeClass.REUSABLE:
            _readd(node, lists, graph, eps, p, lazy=lazy)
            continue
        if kind is NodeClass.BOUNDARY and node.pred is not None and node.edge is not None:
            stats.rebuilt += 1
            rebuilt = extend(node.pred, node.edge, graph.coverage(node.vertex))
            _readd(rebuilt, lists, graph, eps, p, lazy=lazy)
        stack.extend(reversed(node.subsumed))


def _readd(
    pp: PathPair, lists: SearchLists, graph: SearchGraph, eps: float, p: float, *, lazy: bool
) -> None:
    if pp.edge is not None:
        if pp.edge.status is EdgeStatus.INVALID:
            return
        if not lazy and graph.ensure_edge_validated(pp.edge) is not EdgeStatus.VALID:
            return
    add_new_node(pp, lists, graph, eps, p)


def initialize_lists(
    graph: SearchGraph,
    eps: float,
    p: float,
    prev_lists: SearchLists | None,
    new_vertex_ids: Iterable[int],
    *,
    lazy: bool = True,
    stats: SearchStats | None = None,
) -> SearchLists:
    """Prepare the lists for the next search.

    Without previous lists OPEN holds only the root pair. Otherwise the previous
    lists are reused in place: the best result goes back to OPEN, every revealed
    pair that is no longer reusable under (eps, p) is released, and every CLOSED
    pair gains its successors toward the new vertices.
    """
    if prev_lists is None:
        lists = SearchLists(stats=stats)
        lists.push(root_pair(graph))
        return lists

    lists = prev_lists
    if lists.best_result is not None and lists.best_result not in lists:
        lists.push(lists.best_result)

    memo: dict[int, NodeClass] = {}
    release = [pp for pp in lists.revealed() if classify_node(pp, eps, p, memo) is not NodeClass.REUSABLE]
    for pp in release:
        lists.discard(pp)
        if lists.best_result is pp:
            lists.best_result = None
    if release:
        logger.debug("Releasing %d of the previous search's revealed pairs", len(release))
    for pp in release:
        recursively_release(pp, lists, graph, eps, p, memo=memo, lazy=lazy)

    new = set(new_vertex_ids)
    if new:
        for pp_u in sorted(lists.closed.values(), key=lambda pp: pp.serial):
            for child in _successors(pp_u, graph, lists.stats, lazy=lazy, only=new):
                add_new_node(child, lists, graph, eps, p)

    if _options.debug_assertions:
        check_lists(lists, eps, p)
    return lists


# audits


def check_lists(lists: SearchLists, eps: float, p: float) -> None:
    """Audit every revealed pair.

    Raises:
        InvariantViolation: If a revealed pair is unbounded, its PAP does not
            dominate its AP, an NT pair has an unvalidated edge or a T pair holds
            subsumed entries.
    """
    for pp in lists.revealed():
        if not is_bounded(pp, eps, p):
            msg = f"Revealed pair is not ({eps}, {p})-bounded: {pp!r}"
            raise InvariantViolation(msg)
        if pp.pap_length > pp.ap_length or not pp.pap_coverage.issuperset(pp.ap_coverage):
            msg = f"PAP does not dominate AP in revealed pair {pp!r}"
            raise InvariantViolation(msg)
        if pp.kind is NodeKind.NT and not pp.edge_validated:
            msg = f"NT pair with unvalidated incoming edge: {pp!r}"
            raise InvariantViolation(msg)
        if pp.kind is NodeKind.T and pp.subsumed:
            msg = f"T pair carries subsumed entries: {pp!r}"
            raise InvariantViolation(msg)


def _signature(pp: PathPair | HiddenPair) -> tuple[int, int]:
    return (pp.pred.serial if pp.pred is not None else -1, pp.vertex)


def snapshot_pairs(lists: SearchLists, graph: SearchGraph) -> list[PathPair]:
    """Every revealed pair plus a rebuilt copy of every hidden pair."""
    pairs = lists.revealed()
    hidden = [reconstruct(h, graph) for holder in pairs for h in holder.subsumed]
    return [*pairs, *hidden]


def audit_accounting(
    snapshot: list[PathPair], lists: SearchLists, graph: SearchGraph
) -> list[PathPair]:
    """Check that no pair from a snapshot was silently lost.

    A snapshot pair is accounted for if it is still revealed, its AP uses an edge
    found invalid, it or one of its AP ancestors is in OPEN or stored as hidden,
    or an OPEN, CLOSED or hidden pair at its vertex has an AP at least as good.
    An ancestor still sitting in CLOSED does not count for its descendants.

    Returns:
        The snapshot pairs checked (for reporting).

    Raises:
        InvariantViolation: Naming the first unaccounted pair.
    """
    slack = _options.bounded_slack
    revealed = lists.revealed()
    hidden_pairs = [reconstruct(h, graph) for holder in revealed for h in holder.subsumed]
    kept = {_signature(pp) for pp in lists.open.values()} | {_signature(h) for h in hidden_pairs}
    aps: dict[int, list[PathPair]] = {}
    for pp in (*revealed, *hidden_pairs):
        aps.setdefault(pp.vertex, []).append(pp)

    def dominated(x: PathPair) -> bool:
        return any(
            other is not x
            and other.ap_coverage.issuperset(x.ap_coverage)
            and other.ap_length <= x.ap_length + slack
            for other in aps.get(x.vertex, ())
        )

    for x in snapshot:
        if x in lists:
            continue
        if any(e.status is EdgeStatus.INVALID for e in x.ap_edges()):
            continue
        if _signature(x) in kept or dominated(x):
            continue
        if any(
            _signature(a) in kept or (a not in lists and dominated(a)) for a in x.ancestors()
        ):
            continue
        msg = f"Pair lost across list initialization: {x!r} (AP {x.ap_vertices()})"
        raise InvariantViolation(msg)
    return snapshot
