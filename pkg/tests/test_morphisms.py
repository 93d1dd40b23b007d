import itertools

import pytest

import oracles as O
from qct import graph as G
from qct import morphisms as M
from qct.errors import CapExceeded, NotAPolymorphism, NotTransitive

# four small reflexive tournaments and the brute-force hom counts between them
SMALL = {
    "K1": (1, [(0, 0)]),
    "TT2r": (2, [(0, 0), (1, 0), (1, 1)]),
    "TT3r": (3, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]),
    "DC3": (3, [(0, 0), (0, 2), (1, 0), (1, 1), (2, 1), (2, 2)]),
}
HOM_COUNTS = [[1, 2, 3, 3], [1, 3, 6, 6], [1, 4, 10, 9], [1, 2, 3, 6]]


def _g(name):
    n, e = SMALL[name]
    return G.Digraph(n, frozenset(e))


def test_hom_count_table():
    names = list(SMALL)
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            assert M.count_homs(_g(a), _g(b)) == HOM_COUNTS[i][j]


def test_enumerate_against_naive_small_digraphs():
    # all digraphs on 2 vertices (16) against each other, and some on 3
    graphs = [G.Digraph(2, frozenset(e)) for r in range(5)
              for e in itertools.combinations([(0, 0), (0, 1), (1, 0), (1, 1)], r)]
    for a in graphs:
        for b in graphs:
            got = [m.table for m in M.enumerate_homs(a, b)]
            assert got == O.all_homs(2, a.edges, 2, b.edges)


def test_constant_and_surjective(dc3, tt2):
    assert M.find_hom(dc3, tt2) is not None
    assert M.find_hom(dc3, tt2, M.HomConstraints(surjective=True)) is None


def test_cyl_projection_exists(dc3):
    from qct.gadgets import build_cyl
    g = build_cyl(3)
    c = M.HomConstraints(pinned={v: v for v in g.bottom_cycle})
    assert M.find_hom(g.graph, dc3, c) is not None


def test_endomorphisms_tt2(tt2, dc3):
    assert {m.table for m in M.enumerate_homs(tt2, tt2)} == {(0, 1), (0, 0), (1, 1)}
    assert M.count_homs(dc3, dc3) == 6
    assert M.count_homs(G.make_digraph(1, reflexive=True), tt2) == 2


def test_retraction_examples(dc3):
    tt3 = G.transitive_tournament(3)
    r = M.retraction_to(tt3, [0, 2])
    assert r.table == (0, 0, 2)
    assert M.retraction_to(dc3, [0, 1]) is None
    assert M.retraction_to(dc3, [0, 1, 2]).is_identity()


@pytest.mark.parametrize("n", range(1, 5))
def test_retraction_idempotent_and_complete(n):
    for t in G.enumerate_tournaments(n):
        for size in range(1, n + 1):
            for sub in itertools.combinations(range(n), size):
                r = M.retraction_to(t, sub)
                naive = O.retractions(n, t.edges, sub)
                assert (r is not None) == bool(naive)
                if r is not None:
                    assert r.compose(r) == r
                    assert all(r.table[v] == v for v in sub)


def test_endo_class_examples(dc3):
    assert M.endomorphism_class(dc3).endo_trivial
    rep = M.endomorphism_class(G.transitive_tournament(3))
    assert not rep.endo_trivial
    w = rep.nontrivial_witness
    assert M.is_homomorphism(G.transitive_tournament(3), G.transitive_tournament(3), w.table)
    assert len(set(w.table)) == 2
    assert M.endomorphism_class(G.make_digraph(1, reflexive=True)).endo_trivial


@pytest.mark.parametrize("n,endo_trivial_count", [(1, 1), (2, 1), (3, 1), (4, 0), (5, 3)])
def test_endo_trivial_equals_retract_trivial(n, endo_trivial_count):
    found = 0
    for t in G.enumerate_tournaments(n):
        rep = M.endomorphism_class(t)
        assert rep.endo_trivial == rep.retract_trivial == O.endo_trivial(n, t.edges)
        found += rep.endo_trivial
    assert found == endo_trivial_count


@pytest.mark.parametrize("m", range(1, 6))
def test_automorphisms_of_cycles_and_chains(m):
    autos = M.automorphisms(G.reflexive_directed_cycle(m))
    assert {a.table for a in autos} == {tuple((i + r) % m for i in range(m)) for r in range(m)}
    assert [a.table for a in M.automorphisms(G.transitive_tournament(m))] == [tuple(range(m))]


def test_pair_endo_trivial(dc3):
    ok, wit = M.pair_endo_trivial(dc3, [0])
    assert not ok and wit.is_constant()
    ok, wit = M.pair_endo_trivial(dc3, [0, 1])
    assert ok and wit is None
    ok, wit = M.pair_endo_trivial(G.transitive_tournament(3), [0, 2])
    assert not ok and wit.table == (0, 0, 2)


def test_polymorphisms_tt2(tt2):
    tables = {f.table for f in M.polymorphisms(tt2, 2)}
    mn = tuple(min(G.decode_tuple([2, 2], x)) for x in range(4))
    mx = tuple(max(G.decode_tuple([2, 2], x)) for x in range(4))
    assert mn in tables and mx in tables
    for k in (1, 2, 3):
        for i in range(k):
            assert M.projection(2, k, i).table in {f.table for f in M.polymorphisms(tt2, k)}


def test_polymorphism_cap():
    with pytest.raises(CapExceeded):
        list(M.polymorphisms(G.transitive_tournament(5), 2))


def test_binary_polymorphisms_dc3_essentially_unary(dc3):
    polys = list(M.polymorphisms(dc3, 2))
    # exhaustive oracle over all 3^9 tables
    prod = G.power(dc3, 2)
    naive = [t for t in itertools.product(range(3), repeat=9) if O.is_hom(prod.edges, dc3.edges, t)]
    assert [f.table for f in polys] == naive
    assert len(naive) == 9  # 3 constants, 3 rotations on each coordinate
    for f in polys:
        assert M.classify_polymorphism(f, dc3, 2).essentially_unary


def test_classify_polymorphism_reports(tt2):
    mn = M.Mapping(4, 2, tuple(min(G.decode_tuple([2, 2], x)) for x in range(4)))
    rep = M.classify_polymorphism(mn, tt2, 2)
    assert not rep.essentially_unary and rep.uniformly_constant is None
    const = M.Mapping(4, 2, (1, 1, 1, 1))
    assert M.classify_polymorphism(const, tt2, 2).uniformly_constant == 1
    with pytest.raises(NotAPolymorphism):
        M.classify_polymorphism(M.Mapping(4, 2, (1, 0, 0, 0)), tt2, 2)


def test_surjective_polymorphism_moving_a_component(sdt5):
    """A surjective binary polymorphism of s => DC*_3 => t that sends (1,1),
    a pair inside the 3-cycle, to the sink.  f(x, s) applies the rotation
    1->3->2->1 and every other input goes to the sink."""
    table = (0, 4, 4, 4, 4, 3, 4, 4, 4, 4, 1, 4, 4, 4, 4, 2, 4, 4, 4, 4, 4, 4, 4, 4, 4)
    prod = G.power(sdt5, 2)
    assert O.is_hom(prod.edges, sdt5.edges, table)
    assert set(table) == set(range(5))
    rep = M.classify_polymorphism(M.Mapping(25, 5, table), sdt5, 2)
    assert not rep.component_preserving


def test_surjective_polymorphism_moving_a_singleton():
    tt3 = G.transitive_tournament(3).reverse()
    table = (0, 0, 0, 0, 0, 0, 0, 1, 2)
    assert O.is_hom(G.power(tt3, 2).edges, tt3.edges, table)
    rep = M.classify_polymorphism(M.Mapping(9, 3, table), G.check_reflexive_tournament(tt3), 2)
    assert not rep.component_preserving


def test_median():
    assert M.has_median_polymorphism(G.transitive_tournament(2))
    assert M.has_median_polymorphism(G.transitive_tournament(4))
    with pytest.raises(NotTransitive):
        M.has_median_polymorphism(G.check_reflexive_tournament(G.reflexive_directed_cycle(3)))


def test_iso_embeddings(dc3):
    assert {e.table for e in M.iso_embeddings(dc3, dc3)} == {(0, 1, 2), (1, 2, 0), (2, 0, 1)}
    assert list(M.iso_embeddings(dc3, G.transitive_tournament(4))) == []
    assert len(list(M.iso_embeddings(G.make_digraph(1, reflexive=True), G.transitive_tournament(4)))) == 4


def test_edge_surjective_images(dc3):
    imgs = list(M.edge_surjective_images(dc3, 2))
    assert imgs and all(i.has_double_edge for i in imgs)
    assert all(i.graph.edges == {(0, 0)} for i in M.edge_surjective_images(dc3, 1))
    tt3 = G.transitive_tournament(3)
    collapse = [i for i in M.edge_surjective_images(tt3, 2) if i.mapping.table == (0, 0, 1)]
    assert collapse and collapse[0].graph.edges == {(0, 0), (0, 1), (1, 1)}


@pytest.mark.parametrize("n", [3, 5])
def test_double_edge_images_of_endo_trivial(n):
    for t in G.enumerate_tournaments(n):
        if not O.endo_trivial(n, t.edges):
            continue
        for size in range(2, n):
            assert all(i.has_double_edge for i in M.edge_surjective_images(t, size))
