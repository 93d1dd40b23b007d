import json

import oracles as O
from qct import graph as G
from qct.suites import SUITES, run_suite


def test_suite_names():
    assert sorted(SUITES) == ["lemmas", "reduction", "solver", "spill"]


def test_reduction_and_solver_suites_pass():
    for name in ("reduction", "solver"):
        rep = run_suite(name)
        assert rep.passed, [c.to_json() for c in rep.checks if c.status == "fail"]
        assert json.dumps(rep.to_json()) == json.dumps(run_suite(name).to_json())


def test_lemmas_suite_report():
    rep = run_suite("lemmas", max_n=4)
    status = {c.name: c.status for c in rep.checks}
    others = {k: v for k, v in status.items() if k != "component-preservation"}
    assert set(others.values()) == {"pass"}
    comp = next(c for c in rep.checks if c.name == "component-preservation")
    if comp.status == "fail":
        # the reproducer must be a genuine surjective polymorphism that moves a
        # tuple drawn from one component out of it
        r = comp.reproducer
        edges = {tuple(e) for e in r["edges"]}
        n = max(max(e) for e in edges) + 1
        k, f = r["k"], r["f"]
        t = G.check_reflexive_tournament(G.Digraph(n, frozenset(edges)))
        assert O.is_hom(G.power(t, k).edges, edges, f) and set(f) == set(range(n))
        parts = O.scc_partition(n, edges)
        moved = [x for x in range(n ** k)
                 if any(set(G.decode_tuple([n] * k, x)) <= p and f[x] not in p for p in parts)]
        assert moved
        assert comp.counters["violations"] > 0


def test_timing_only_on_request():
    rep = run_suite("reduction")
    assert "elapsed" not in rep.to_json() and "elapsed" in rep.to_json(timing=True)
