import random

import pytest

import oracles as O
from qct import graph as G
from qct import qcsp as Q
from qct import tractable as T
from qct.errors import EngineRefused, GraphError


@pytest.mark.parametrize("k", range(1, 6))
def test_transitive_is_nl(k):
    assert T.classify(G.transitive_tournament(k)).verdict == "NL"


def test_classify_examples(dc3, sdt5):
    c = T.classify(dc3)
    assert c.verdict == "NPHard" and c.chain_endpoint_sizes == (3, 3)
    assert T.classify(sdt5).to_json() == {"verdict": "NL", "chain_endpoint_sizes": [1, 1]}


@pytest.mark.parametrize("n", range(1, 6))
def test_classifier_endpoint_rule(n):
    for t in G.enumerate_tournaments(n):
        parts = O.scc_partition(n, t.edges)
        # the initial component is the one reaching every vertex
        r = O.reach(n, t.edges)
        init = next(p for p in parts if all(r[next(iter(p))][v] for v in range(n)))
        fin = next(p for p in parts if all(r[v][next(iter(p))] for v in range(n)))
        want = "NL" if len(init) == len(fin) == 1 else "NPHard"
        assert T.classify(t).verdict == want


def test_unit_tuple_surjection(sdt5):
    f = T.sur_hom_tt2_power(G.chain_tournament([G.transitive_tournament(1), G.transitive_tournament(2),
                                                G.transitive_tournament(1)]))
    assert f.table == (0, 2, 1, 3)
    g = T.sur_hom_tt2_power(sdt5)
    assert g.source_size == 8 and g.image() == frozenset(range(5))
    src = G.power(G.transitive_tournament(2), 3)
    assert O.is_hom(src.edges, sdt5.edges, g.table)
    with pytest.raises(GraphError):
        T.sur_hom_tt2_power(G.transitive_tournament(3))


def test_collapse_to_tt2(sdt5):
    assert T.collapse_to_tt2(sdt5).table == (0, 1, 1, 1, 1)


def test_implication_form_contrapositive():
    s = Q.parse_sentence("A x E y E z : edge(x,y) edge(y,z)")
    sys = T.tt2_implication_form(s)
    assert sys.is_closed()
    assert (sys.literal("x", 1), sys.literal("y", 1)) in sys.edges
    assert (sys.literal("y", 0), sys.literal("x", 0)) in sys.edges


@pytest.mark.parametrize("text,want", [
    ("A x E y : edge(x,y)", True),
    ("A x A y : edge(x,y)", False),
    ("E x A y : edge(x,y) edge(y,x)", False),
    ("E x A y : edge(x,y)", True),
    ("A x E y A z : edge(y,z) edge(x,y)", False),
    ("E y A x : edge(x,y)", True),
])
def test_q2sat_examples(text, want):
    s = Q.parse_sentence(text)
    assert T.solve_q2sat(T.tt2_implication_form(s)) == want
    assert O.sentence_game(s, 2, O.tt2_edges()) == want


def test_q2sat_against_naive_game():
    rng = random.Random(2024)
    seen = {True: 0, False: 0}
    for _ in range(400):
        s = Q.random_sentence(rng, rng.randint(1, 8), rng.randint(0, 10))
        want = O.sentence_game(s, 2, O.tt2_edges())
        assert T.solve_q2sat(T.tt2_implication_form(s)) == want
        seen[want] += 1
    assert min(seen.values()) > 50


def test_solve_engines(dc3, sdt5, tt2):
    s = Q.parse_sentence("A x E y : edge(x,y)")
    assert T.solve(s, sdt5) == T.Answer(True, "q2sat")
    assert T.solve(s, sdt5, engine="game") == T.Answer(True, "game")
    e = Q.parse_sentence("E x A y : edge(x,y)")
    assert T.solve(e, sdt5).answer and T.solve(e, sdt5, engine="game").answer
    assert T.solve(s, dc3).engine == "game"
    with pytest.raises(EngineRefused):
        T.solve(s, dc3, engine="q2sat")
    # one-vertex NL template runs the game
    assert T.solve(s, G.transitive_tournament(1)).engine == "game"


def test_solve_budget_outcome(dc3):
    names = [f"v{i}" for i in range(19)]
    text = " ".join(f"E {v}" for v in names) + " A w : edge(v18,w) edge(w,v18)"
    assert T.solve(Q.parse_sentence(text), dc3, budget=500).answer == "budget"


def test_solve_with_equality_on_nl_template(sdt5):
    s = Q.parse_sentence("A x E y : eq(x,y) edge(y,x)")
    assert T.solve(s, sdt5) == T.Answer(True, "q2sat")
    assert T.solve(Q.parse_sentence("E y A x : eq(x,y)"), sdt5).answer is False
    assert T.solve(Q.parse_sentence("E y A x : eq(x,y)"), G.transitive_tournament(1)).answer is True


def test_nl_template_three_way(sdt5):
    rng = random.Random(77)
    for _ in range(150):
        s = Q.random_sentence(rng, rng.randint(1, 7), rng.randint(0, 10))
        a = Q.solve_game(s, sdt5)
        assert a == O.sentence_game(s, 2, O.tt2_edges()) == T.solve_q2sat(T.tt2_implication_form(s))
