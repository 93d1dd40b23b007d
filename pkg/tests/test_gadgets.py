from pathlib import Path

import pytest

import oracles as O
from qct import gadgets as GD
from qct import graph as G
from qct import morphisms as M
from qct.errors import GraphError
from qct.io import load_graph

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("m", range(2, 7))
@pytest.mark.parametrize("plus", [False, True])
def test_cyl_matches_definition(m, plus):
    g = GD.build_cyl(m, plus)
    n, edges = O.cyl(m, plus)
    assert g.graph.n == n and g.graph.edges == edges
    assert len(g.graph.edges) == 2 * m * m + 2 * m * (m - 1) + (2 if plus else 0)
    assert g.bottom_cycle == tuple(range(m))
    assert g.top_cycle == tuple(range(m * (m - 1), m * m))
    for j in range(m):
        assert G.is_hamilton_cycle(G.induced(g.graph, g.copy(j))[0], list(range(m)))


def test_cyl4_counts_and_plus3():
    g = GD.build_cyl(4)
    assert (g.graph.n, len(g.graph.edges)) == (16, 56)
    p = GD.build_cyl(3, plus=True)
    assert p.graph.n == 10 and p.pendant == 9
    assert p.graph.in_neighbours(9) == [6, 9]
    assert p.graph.out_neighbours(9) == [9]
    with pytest.raises(GraphError):
        GD.build_cyl(1)


def test_attach_instance(dc3):
    inst = GD.attach_spill_instance(dc3, [0, 1, 2], [0, 1, 2])
    assert inst.graph.n == 9
    assert inst.to_f[:3] == (0, 1, 2)
    with pytest.raises(GraphError):
        GD.attach_spill_instance(dc3, [0, 1, 2], [0, 1, 1])
    with pytest.raises(GraphError):
        GD.attach_spill_instance(dc3, [0, 1, 2], [0, 2, 1])


def _dc3_hosts(max_n):
    dc3 = G.reflexive_directed_cycle(3)
    for n in range(3, max_n + 1):
        for t in G.enumerate_tournaments(n):
            for e in M.iso_embeddings(dc3, t):
                if e.table == min(e.table[i:] + e.table[:i] for i in range(3)):
                    yield t, e.table


@pytest.mark.parametrize("plus", [False, True])
def test_spill_matches_naive(plus):
    checked = 0
    for t, cyc in _dc3_hosts(4):
        rep = GD.spill(t, cyc, cyc, plus=plus)
        naive = O.naive_spill(t.n, t.edges, list(cyc), plus)
        assert {x: set(v) for x, v in rep.per_top_vertex.items()} == naive
        checked += 1
    assert checked == 5  # DC*_3 itself, two cycles in the strong 4-tournament, one in each of the two others


def test_spill_full_on_retracting_hosts_and_core_contained():
    full = 0
    for t, cyc in _dc3_hosts(5):
        rep = GD.spill(t, cyc, cyc)
        for ys in rep.per_top_vertex.values():
            assert set(cyc) <= ys
        if M.retraction_to(t, cyc) is not None:
            assert rep.full
            full += 1
    assert full > 0


def test_spill_per_vertex_frozen():
    # brute-force oracle values on the stored witness
    w = load_graph(GOLDEN / "figure4_witness.txt").graph
    rep = GD.spill(w, [0, 1, 2], [0, 1, 2])
    assert {x: sorted(v) for x, v in rep.per_top_vertex.items()} == {
        9: [0, 1, 2, 3, 4, 5], 10: [0, 1, 2, 5], 11: [0, 1, 2]}


@pytest.mark.parametrize("m", [3, 4])
def test_dagger(m):
    ok, maps = GD.verify_dagger(m)
    assert ok and len(maps) == m


def test_collapse_lemma():
    targets = [t for n in range(1, 5) for t in G.enumerate_tournaments(n)]
    assert GD.collapse_check(3, targets) == (True, None)
    assert GD.collapse_check(3, [G.make_digraph(1, reflexive=True)])[0]


def test_collapse_counterexample_on_non_tournament():
    # a target with a double edge lets the cylinder map non-constantly
    two = G.make_digraph(2, [(0, 1), (1, 0)], reflexive=True)
    ok, cex = GD.collapse_check(3, [two])
    assert not ok and not cex[1].is_constant()


def test_figure4_golden_matches_search_head():
    w = load_graph(GOLDEN / "figure4_witness.txt").graph
    assert w == GD.extension_orientation(8)
    assert M.retraction_to(w, [0, 1, 2]) is None
    assert GD.spill(w, [0, 1, 2], [0, 1, 2]).full
    for code in range(8):
        h = GD.extension_orientation(code)
        assert M.retraction_to(h, [0, 1, 2]) is not None or not GD.spill(h, [0, 1, 2], [0, 1, 2]).full


def test_extension_orientation_bits():
    h = GD.extension_orientation(0)
    assert all(h.has_edge(u, v) for u in range(6) for v in range(u + 1, 6) if v >= 3)
    top = GD.extension_orientation(1)
    assert top.has_edge(5, 4) and not top.has_edge(4, 5)
