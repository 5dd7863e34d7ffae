"""Tests for path pairs, AddNewNode rules and the near-optimal search."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from iris_inspect import config
from iris_inspect.common import BadEdge, CoverageSet, InvariantViolation, VertexMismatch
from iris_inspect.oracle import ExplicitGraph, LazyGraph, random_graph, verify_near_optimal
from iris_inspect.roadmap import Edge, EdgeStatus
from iris_inspect.search import (
    AddOutcome,
    HiddenPair,
    NodeClass,
    NodeKind,
    PathPair,
    Plan,
    SearchLists,
    add_new_node,
    check_lists,
    classify_node,
    extend,
    initialize_lists,
    is_bounded,
    near_optimal_search,
    root_pair,
    subsume,
    validate_node,
)


def cs(*indices: int, width: int = 4) -> CoverageSet:
    return CoverageSet.from_indices(indices, width)


def pair(
    ap: tuple[float, CoverageSet],
    pap: tuple[float, CoverageSet],
    *,
    vertex: int = 0,
    pred: PathPair | None = None,
    edge: Edge | None = None,
) -> PathPair:
    return PathPair(vertex, pred, edge, ap[1], ap[0], pap[1], pap[0])


def abc_graph(ac_weight: float = 2.0, blocked: frozenset[tuple[int, int]] = frozenset()) -> LazyGraph:
    """a(empty) - b({0}) weight 1, a - c({1}), b - c weight 1."""
    coverages = (cs(width=2), cs(0, width=2), cs(1, width=2))
    edges = ((0, 1, 1.0), (0, 2, ac_weight), (1, 2, 1.0))
    return LazyGraph(ExplicitGraph(coverages, edges, 0, blocked))


def search(graph: LazyGraph, eps: float, p: float, *, lazy: bool = True) -> tuple[SearchLists, Plan | None]:
    lists = initialize_lists(graph, eps, p, None, (), lazy=lazy)
    return lists, near_optimal_search(graph, lists, eps, p, lazy=lazy)


class TestPathPair:
    """Tests for PathPair construction invariants."""

    def test_pap_must_dominate(self) -> None:
        """Test that a PAP longer than its AP is rejected."""
        with pytest.raises(InvariantViolation, match="PAP does not dominate"):
            pair((1.0, cs(0)), (2.0, cs(0)))
        with pytest.raises(InvariantViolation, match="PAP does not dominate"):
            pair((1.0, cs(0, 1)), (1.0, cs(0)))

    def test_nt_needs_validated_edge(self) -> None:
        """Test that NT pairs carry validated incoming edges."""
        with pytest.raises(InvariantViolation, match="NT pair"):
            PathPair(1, None, Edge(0, 1, 1.0), cs(), 1.0, cs(), 1.0, kind=NodeKind.NT)

    def test_t_has_no_subsumed(self) -> None:
        """Test that T pairs never hold subsumed entries."""
        hidden = HiddenPair(0, None, None)
        with pytest.raises(InvariantViolation, match="T pair"):
            PathPair(0, None, None, cs(), 0.0, cs(), 0.0, subsumed=[hidden])

    def test_ap_vertices(self) -> None:
        """Test AP reconstruction by back-tracing."""
        graph = abc_graph()
        root = root_pair(graph)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        c = extend(b, graph.edge(1, 2), graph.coverage(2))
        assert c.ap_vertices() == [0, 1, 2]
        assert [(e.u, e.v) for e in c.ap_edges()] == [(0, 1), (1, 2)]


class TestIsBounded:
    """Tests for is_bounded()."""

    def test_bounded(self) -> None:
        """Test a pair within both factors."""
        wide = pair((10.0, CoverageSet.from_indices(range(9), 10)), (9.5, CoverageSet.full(10)))
        assert is_bounded(wide, 0.1, 0.85)

    def test_coverage_short(self) -> None:
        """Test a pair failing the coverage factor."""
        pp = pair((10.0, CoverageSet.from_indices(range(7), 10)), (9.5, CoverageSet.full(10)))
        assert not is_bounded(pp, 0.1, 0.85)

    def test_length_long(self) -> None:
        """Test a pair failing the length factor."""
        pp = pair((11.0, cs(0)), (9.5, cs(0)))
        assert not is_bounded(pp, 0.1, 0.85)

    def test_root_always_bounded(self) -> None:
        """Test that the identity pair is bounded for any factors."""
        root = root_pair(abc_graph())
        for eps, p in ((0.0, 1.0), (10.0, 0.0), (0.5, 0.9)):
            assert is_bounded(root, eps, p)

    def test_slack(self) -> None:
        """Test that rounding noise is accepted."""
        pp = pair((1.0 + 1e-12, cs(0)), (1.0, cs(0)))
        assert is_bounded(pp, 0.0, 1.0)
        with config.set_options(bounded_slack=0.0):
            assert not is_bounded(pp, 0.0, 1.0)


class TestExtend:
    """Tests for extend()."""

    def test_definition(self) -> None:
        """Test both paths grow by the edge."""
        pp = pair((2.0, cs(0)), (1.5, cs(0, 1)))
        child = extend(pp, Edge(0, 1, 1.0), cs(2))
        assert child.vertex == 1
        assert child.pred is pp
        assert (child.ap_length, child.ap_coverage) == (3.0, cs(0, 2))
        assert (child.pap_length, child.pap_coverage) == (2.5, cs(0, 1, 2))
        assert child.kind is NodeKind.T
        assert child.subsumed == []
        assert not child.edge_validated

    def test_empty_vertex_coverage(self) -> None:
        """Test that an empty vertex only adds length."""
        pp = pair((2.0, cs(0)), (1.5, cs(0, 1)))
        child = extend(pp, Edge(1, 0, 0.5), cs())
        assert child.ap_coverage == pp.ap_coverage
        assert child.pap_coverage == pp.pap_coverage
        assert child.ap_length == 2.5

    def test_not_incident(self) -> None:
        """Test that a foreign edge raises."""
        with pytest.raises(BadEdge):
            extend(pair((0.0, cs()), (0.0, cs())), Edge(2, 3, 1.0), cs())

    def test_closure(self) -> None:
        """Test that extending a bounded pair keeps it bounded."""
        rng = np.random.default_rng(0)
        checked = 0
        for _ in range(2000):
            pap_cov = CoverageSet.from_mask(rng.random(8) < 0.6)
            ap_cov = pap_cov & CoverageSet.from_mask(rng.random(8) < 0.8)
            pap_len = float(rng.uniform(0.0, 5.0))
            ap_len = pap_len * float(rng.uniform(1.0, 1.6))
            eps, p = float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0))
            pp = pair((ap_len, ap_cov), (pap_len, pap_cov))
            if not is_bounded(pp, eps, p):
                continue
            child = extend(pp, Edge(0, 1, float(rng.uniform(0.1, 3.0))), CoverageSet.from_mask(rng.random(8) < 0.3))
            assert is_bounded(child, eps, p)
            checked += 1
        assert checked > 100


class TestSubsume:
    """Tests for subsume()."""

    @pytest.fixture(autouse=True)
    def setup(self) -> None:
        """Create two pairs at vertex 1 reached over different edges."""
        self.root = pair((0.0, cs()), (0.0, cs()))
        self.valid = Edge(0, 1, 1.0, EdgeStatus.VALID)
        self.other = Edge(2, 1, 1.0)

    def test_pap_union_min(self) -> None:
        """Test the merged PAP."""
        pp1 = pair((8.5, cs(0, 1)), (8.0, cs(0, 1, 2)), vertex=1, pred=self.root, edge=self.valid)
        pp2 = pair((9.5, cs(2)), (9.0, cs(2, 3)), vertex=1, pred=self.root, edge=self.other)
        merged = subsume(pp1, pp2)
        assert (merged.pap_length, merged.pap_coverage) == (8.0, cs(0, 1, 2, 3))
        assert (merged.ap_length, merged.ap_coverage) == (8.5, cs(0, 1))
        assert merged.kind is NodeKind.NT
        assert merged.pred is self.root
        assert merged.subsumed == [pp2.hidden()]

    def test_dominated_not_stored(self) -> None:
        """Test that a pair whose PAP the kept AP dominates is dropped."""
        pp1 = pair((5.0, cs(0, 1)), (5.0, cs(0, 1)), vertex=1, pred=self.root, edge=self.valid)
        pp2 = pair((6.0, cs(0)), (6.0, cs(0)), vertex=1, pred=self.root, edge=self.other)
        assert subsume(pp1, pp2).subsumed == []

    def test_inherits_entries(self) -> None:
        """Test that the subsumed pair's own entries are inherited."""
        h1 = HiddenPair(1, self.root, Edge(3, 1, 2.0))
        h2 = HiddenPair(1, self.root, Edge(4, 1, 2.0))
        pp2 = PathPair(
            1, self.root, Edge(2, 1, 1.0, EdgeStatus.VALID), cs(3), 7.0, cs(2, 3), 6.0,
            kind=NodeKind.NT, subsumed=[h1, h2],
        )
        pp1 = pair((5.0, cs(0)), (5.0, cs(0)), vertex=1, pred=self.root, edge=self.valid)
        assert subsume(pp1, pp2).subsumed == [pp2.hidden(), h1, h2]

    def test_vertex_mismatch(self) -> None:
        """Test that pairs at different vertices cannot merge."""
        with pytest.raises(VertexMismatch):
            subsume(self.root, pair((1.0, cs()), (1.0, cs()), vertex=1, pred=self.root, edge=self.valid))


class TestSearchLists:
    """Tests for SearchLists ordering and bookkeeping."""

    def test_length_order(self) -> None:
        """Test that the default key pops the shortest PAP first."""
        lists = SearchLists()
        long = pair((3.0, cs(0, 1)), (3.0, cs(0, 1)))
        short = pair((1.0, cs()), (1.0, cs()))
        lists.push(long)
        lists.push(short)
        assert lists.pop() is short
        assert lists.pop() is long
        assert lists.pop() is None

    def test_coverage_order(self) -> None:
        """Test the coverage-first key."""
        with config.set_options(open_key="coverage"):
            lists = SearchLists()
        long = pair((3.0, cs(0, 1)), (3.0, cs(0, 1)))
        short = pair((1.0, cs()), (1.0, cs()))
        lists.push(short)
        lists.push(long)
        assert lists.pop() is long

    def test_lazy_removal(self) -> None:
        """Test that removed pairs are skipped by pop."""
        lists = SearchLists()
        a, b = pair((1.0, cs()), (1.0, cs())), pair((2.0, cs()), (2.0, cs()))
        lists.push(a)
        lists.push(b)
        lists.remove_open(a)
        assert a not in lists
        assert lists.pop() is b

    def test_buckets(self) -> None:
        """Test per-vertex buckets and membership."""
        lists = SearchLists()
        a = pair((1.0, cs()), (1.0, cs()), vertex=3)
        lists.push(a)
        assert lists.open_at(3) == [a]
        lists.remove_open(a)
        lists.close(a)
        assert lists.closed_at(3) == [a]
        assert lists.revealed() == [a]
        lists.discard(a)
        assert a not in lists


class TestAddNewNode:
    """Tests for the AddNewNode rules."""

    def test_insert_into_empty(self) -> None:
        """Test that a pair with no rivals is inserted."""
        graph = abc_graph()
        lists = SearchLists()
        pp = extend(root_pair(graph), graph.edge(0, 1), graph.coverage(1))
        assert add_new_node(pp, lists, graph, 0.0, 1.0) is AddOutcome.INSERTED
        assert lists.open_at(1) == [pp]

    def test_closed_dominator(self) -> None:
        """Test rule (i): a CLOSED pair with a dominating PAP records the new pair."""
        graph = abc_graph()
        lists = SearchLists()
        root = root_pair(graph)
        lists.close(root)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        back = extend(b, graph.edge(1, 0), graph.coverage(0))
        # a PAP at the root covering nothing does not dominate {0}
        assert add_new_node(back, lists, graph, 0.0, 1.0) is AddOutcome.INSERTED

        lists = SearchLists()
        lists.close(root)
        loop = PathPair(0, root, graph.edge(0, 2), cs(width=2), 4.0, cs(width=2), 4.0)
        before = len(root.subsumed)
        assert add_new_node(loop, lists, graph, 0.0, 1.0) is AddOutcome.DOMINATED
        assert lists.open == {}
        assert len(root.subsumed) - before <= 1
        assert root.kind is NodeKind.NT

    def test_open_merge(self) -> None:
        """Test rule (ii): an OPEN pair subsumes the new pair."""
        graph = abc_graph(ac_weight=2.5)
        lists = SearchLists()
        root = root_pair(graph)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        via_b = extend(b, graph.edge(1, 2), graph.coverage(2))
        direct = extend(root, graph.edge(0, 2), graph.coverage(2))
        lists.push(via_b)
        assert add_new_node(direct, lists, graph, 0.5, 0.5) is AddOutcome.MERGED
        (merged,) = lists.open_at(2)
        assert merged.ap_vertices() == [0, 1, 2]
        assert merged.kind is NodeKind.NT
        assert graph.edge(1, 2).status is EdgeStatus.VALID
        assert graph.edge(0, 2).status is EdgeStatus.UNKNOWN

    def test_open_candidate_invalid(self) -> None:
        """Test rule (ii) dropping a T candidate whose edge is invalid."""
        graph = abc_graph(ac_weight=2.5, blocked=frozenset({(1, 2)}))
        lists = SearchLists()
        root = root_pair(graph)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        via_b = extend(b, graph.edge(1, 2), graph.coverage(2))
        direct = extend(root, graph.edge(0, 2), graph.coverage(2))
        lists.push(via_b)
        assert add_new_node(direct, lists, graph, 0.5, 0.5) is AddOutcome.INSERTED
        assert lists.open_at(2) == [direct]
        assert lists.stats.discarded == 1

    def test_new_pair_absorbs(self) -> None:
        """Test rule (iii): the new pair subsumes OPEN pairs it keeps bounded."""
        graph = abc_graph(ac_weight=1.5)
        lists = SearchLists()
        root = root_pair(graph)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        via_b = extend(b, graph.edge(1, 2), graph.coverage(2))
        direct = extend(root, graph.edge(0, 2), graph.coverage(2))
        lists.push(via_b)
        assert add_new_node(direct, lists, graph, 0.2, 0.5) is AddOutcome.INSERTED
        (merged,) = lists.open_at(2)
        assert merged.ap_vertices() == [0, 2]
        assert (merged.pap_length, merged.pap_coverage) == (1.5, cs(0, 1, width=2))
        assert merged.kind is NodeKind.NT
        assert merged.subsumed == [via_b.hidden()]

    def test_new_pair_invalid_edge(self) -> None:
        """Test rule (iii) discarding a new pair whose own edge is invalid."""
        graph = abc_graph(ac_weight=1.5, blocked=frozenset({(0, 2)}))
        lists = SearchLists()
        root = root_pair(graph)
        b = extend(root, graph.edge(0, 1), graph.coverage(1))
        via_b = extend(b, graph.edge(1, 2), graph.coverage(2))
        direct = extend(root, graph.edge(0, 2), graph.coverage(2))
        lists.push(via_b)
        assert add_new_node(direct, lists, graph, 0.2, 0.5) is AddOutcome.DISCARDED
        assert lists.open_at(2) == [via_b]
        assert graph.edge(0, 2).status is EdgeStatus.INVALID


class TestValidateNode:
    """Tests for validate_node()."""

    def test_root(self) -> None:
        """Test that the root needs no validation."""
        graph = abc_graph()
        assert validate_node(root_pair(graph), graph)
        assert graph.validations == 0

    def test_nt_free(self) -> None:
        """Test that NT pairs cost nothing."""
        graph = abc_graph()
        edge = graph.edge(0, 1)
        graph.ensure_edge_validated(edge)
        nt = PathPair(1, root_pair(graph), edge, cs(0, width=2), 1.0, cs(0, width=2), 1.0, kind=NodeKind.NT)
        assert validate_node(nt, graph)
        assert graph.validations == 1

    def test_blocked_t(self) -> None:
        """Test that a T pair over a blocked edge fails."""
        graph = abc_graph(blocked=frozenset({(0, 2)}))
        pp = extend(root_pair(graph), graph.edge(0, 2), graph.coverage(2))
        assert not validate_node(pp, graph)


class TestNearOptimalSearch:
    """Tests for near_optimal_search()."""

    def test_root_covers_all(self) -> None:
        """Test that a start seeing everything is the plan."""
        graph = LazyGraph(ExplicitGraph((cs(0, 1, width=2), cs(width=2)), ((0, 1, 1.0),)))
        _, plan = search(graph, 0.0, 1.0)
        assert plan is not None
        assert plan.vertices == (0,)
        assert plan.length == 0.0

    def test_three_vertex_optimum(self) -> None:
        """Test the a-b-c instance against its hand-computed optimum."""
        lists, plan = search(abc_graph(), 0.0, 1.0)
        assert plan is not None
        assert plan.vertices == (0, 1, 2)
        assert plan.length == pytest.approx(2.0)
        assert lists.best_result is not None
        assert lists.best_result in lists
        assert lists.open.get(lists.best_result.serial) is lists.best_result

    def test_blocked_edge_avoided(self) -> None:
        """Test that an invalid shortcut is never part of a plan."""
        graph = abc_graph(ac_weight=0.5, blocked=frozenset({(0, 2)}))
        _, plan = search(graph, 0.0, 1.0)
        assert plan is not None
        assert plan.vertices == (0, 1, 2)

    def test_eager_mode(self) -> None:
        """Test that eager validation finds the same optimum."""
        graph = abc_graph(ac_weight=0.5, blocked=frozenset({(0, 2)}))
        _, plan = search(graph, 0.0, 1.0, lazy=False)
        assert plan is not None
        assert plan.vertices == (0, 1, 2)
        assert graph.edge(0, 2).status is EdgeStatus.INVALID

    def test_exhausted(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test that an unreachable POI exhausts OPEN and warns."""
        graph = abc_graph(blocked=frozenset({(0, 2), (1, 2)}))
        with caplog.at_level(logging.WARNING, logger="iris_inspect.search"):
            _, plan = search(graph, 0.0, 1.0)
        assert plan is None
        assert "exhausted OPEN" in caplog.text

    def test_trace_records(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test the per-pop debug trace."""
        with caplog.at_level(logging.DEBUG, logger="iris_inspect.search.trace"):
            search(abc_graph(), 0.0, 1.0)
            assert "action=" not in caplog.text
            with config.set_options(trace_search=True):
                search(abc_graph(), 0.0, 1.0)
        assert "action=expand" in caplog.text
        assert "action=goal" in caplog.text

    @pytest.mark.parametrize(("eps", "p"), [(0.0, 1.0), (0.5, 0.9), (10.0, 0.85)])
    def test_near_optimal_vs_oracle(self, eps: float, p: float) -> None:
        """Test plans on random graphs against the exact optimum."""
        rng = np.random.default_rng(int(eps * 100 + p * 10))
        with config.set_options(debug_assertions=True):
            for _ in range(200):
                g = random_graph(rng, int(rng.integers(1, 11)), int(rng.integers(0, 9)))
                _, plan = search(LazyGraph(g), eps, p)
                assert plan is not None
                assert verify_near_optimal(g, plan.vertices, eps, p)

    @pytest.mark.parametrize(("eps", "p"), [(0.0, 1.0), (0.5, 0.9)])
    def test_near_optimal_with_blocked_edges(self, eps: float, p: float) -> None:
        """Test plans on random graphs with hidden blocked edges."""
        rng = np.random.default_rng(17)
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(2, 10)), 6, edge_prob=0.5, blocked_fraction=0.2)
            lazy = LazyGraph(g)
            _, plan = search(lazy, eps, p)
            assert plan is not None
            assert verify_near_optimal(g, plan.vertices, eps, p)

    def test_lazy_soundness(self) -> None:
        """Test that every plan edge has been validated and found valid."""
        rng = np.random.default_rng(23)
        for _ in range(100):
            g = random_graph(rng, 9, 6, edge_prob=0.6, blocked_fraction=0.2)
            lazy = LazyGraph(g)
            _, plan = search(lazy, 0.3, 0.9)
            assert plan is not None
            for u, v in zip(plan.vertices, plan.vertices[1:], strict=False):
                assert lazy.edge(u, v).status is EdgeStatus.VALID

    def test_each_edge_validated_once(self) -> None:
        """Test that neither mode validates an edge twice."""
        rng = np.random.default_rng(29)
        for _ in range(30):
            g = random_graph(rng, 9, 6, edge_prob=0.6, blocked_fraction=0.2)
            lazy_graph, eager_graph = LazyGraph(g), LazyGraph(g)
            search(lazy_graph, 0.3, 0.9)
            search(eager_graph, 0.3, 0.9, lazy=False)
            assert lazy_graph.validations <= len(g.edges)
            assert eager_graph.validations <= len(g.edges)

    def test_coverage_key_meets_coverage_bound(self) -> None:
        """Test that the coverage-first ordering still meets the coverage factor."""
        rng = np.random.default_rng(31)
        with config.set_options(open_key="coverage"):
            for _ in range(50):
                g = random_graph(rng, 8, 6)
                lazy = LazyGraph(g)
                _, plan = search(lazy, 0.5, 0.9)
                assert plan is not None
                assert len(plan.coverage) >= 0.9 * len(lazy.total_coverage) - 1e-9


class TestClassifyNode:
    """Tests for classify_node()."""

    @pytest.fixture(autouse=True)
    def setup(self) -> None:
        """Build a chain root -> a -> b over fresh edges."""
        self.root = pair((0.0, cs()), (0.0, cs()))
        self.e1 = Edge(0, 1, 1.0)
        self.e2 = Edge(1, 2, 1.0)

    def test_root_reusable(self) -> None:
        """Test that the root is always reusable."""
        assert classify_node(self.root, 0.0, 1.0) is NodeClass.REUSABLE

    def test_boundary(self) -> None:
        """Test bounded -> bounded -> unbounded."""
        a = pair((1.0, cs(0)), (1.0, cs(0)), vertex=1, pred=self.root, edge=self.e1)
        b = pair((5.0, cs(0)), (2.0, cs(0, 1)), vertex=2, pred=a, edge=self.e2)
        assert classify_node(b, 0.0, 1.0) is NodeClass.BOUNDARY
        assert classify_node(b, 2.0, 0.5) is NodeClass.REUSABLE

    def test_non_reusable(self) -> None:
        """Test bounded -> unbounded -> bounded."""
        a = pair((3.0, cs(0)), (1.0, cs(0)), vertex=1, pred=self.root, edge=self.e1)
        b = pair((4.0, cs(0)), (4.0, cs(0)), vertex=2, pred=a, edge=self.e2)
        assert classify_node(b, 0.0, 1.0) is NodeClass.NON_REUSABLE

    def test_memo(self) -> None:
        """Test that results are memoized by serial."""
        a = pair((3.0, cs(0)), (1.0, cs(0)), vertex=1, pred=self.root, edge=self.e1)
        memo: dict[int, NodeClass] = {}
        classify_node(a, 0.0, 1.0, memo)
        assert memo == {self.root.serial: NodeClass.REUSABLE, a.serial: NodeClass.BOUNDARY}


class TestFuzz:
    """Randomized extend/subsume/add_new_node sequences under debug audits."""

    @pytest.mark.parametrize("operations", [3_000, pytest.param(100_000, marks=pytest.mark.slow)])
    def test_invariants_hold(self, operations: int) -> None:
        """Test boundedness, dominance and T/NT invariants after every operation."""
        rng = np.random.default_rng(41)
        done = 0
        with config.set_options(debug_assertions=True):
            while done < operations:
                g = LazyGraph(random_graph(rng, 7, 6, edge_prob=0.5, blocked_fraction=0.2))
                eps, p = float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.5, 1.0))
                lists = initialize_lists(g, eps, p, None, ())
                for _ in range(200):
                    done += 1
                    if rng.random() < 0.3:
                        popped = lists.pop()
                        if popped is not None and validate_node(popped, g):
                            lists.close(popped)
                    else:
                        pool = lists.revealed()
                        if not pool:
                            break
                        pp = pool[int(rng.integers(len(pool)))]
                        edges = g.neighbors(pp.vertex)
                        if edges:
                            edge = edges[int(rng.integers(len(edges)))]
                            child = extend(pp, edge, g.coverage(edge.other(pp.vertex)))
                            add_new_node(child, lists, g, eps, p)
                    check_lists(lists, eps, p)
