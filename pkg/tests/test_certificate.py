import dataclasses
from pathlib import Path

import pytest

import oracles as O
from qct import graph as G
from qct.certificate import find_hardness_certificate, verify_certificate
from qct.errors import GraphError
from qct.io import load_graph

WITNESS = Path(__file__).parent / "golden" / "figure4_witness.txt"


def test_dc3_is_direct(dc3):
    cert = find_hardness_certificate(dc3)
    assert cert.route == "direct-endo-trivial" and cert.k is None
    assert verify_certificate(dc3, cert) == []


def test_nl_template_rejected(sdt5):
    with pytest.raises(GraphError):
        find_hardness_certificate(sdt5)


def test_strong_four_vertex_routes_through_a_three_cycle():
    s4 = next(t for t in G.enumerate_tournaments(4) if O.is_strong(4, t.edges))
    cert = find_hardness_certificate(s4)
    assert cert.route in ("BaseI", "BaseII")
    h0 = cert.chain[0]
    sub, _ = G.induced(s4, list(h0))
    assert G.are_isomorphic(sub, G.reflexive_directed_cycle(3))
    assert O.retractions(4, s4.edges, h0)
    assert verify_certificate(s4, cert) == []


def test_plus_and_reversed_variants(dc3):
    one = G.transitive_tournament(1)
    plus = G.chain_tournament([dc3, one])
    cert = find_hardness_certificate(plus)
    assert cert.plus and not cert.reversed and cert.route.startswith("A-")
    rev = G.chain_tournament([one, dc3])
    cert = find_hardness_certificate(rev)
    assert cert.reversed and cert.plus and cert.component == (1, 2, 3)
    assert verify_certificate(rev, cert) == []


def test_figure4_witness_routes():
    w = G.check_reflexive_tournament(load_graph(WITNESS).graph)
    cert = find_hardness_certificate(w)
    # the default core is a larger retract, never the cycle that does not retract
    assert cert.route == "BaseI" and cert.chain[0] == (0, 1, 2, 3, 5)
    assert verify_certificate(w, cert) == []
    forced = find_hardness_certificate(w, core=(0, 1, 2))
    assert forced.route == "GeneralI" and forced.k == 1
    assert forced.chain == [(0, 1, 2), (0, 1, 2, 3, 5), (0, 1, 2, 3, 4, 5)]
    assert verify_certificate(w, forced) == []


def test_tampered_fact_is_detected(dc3):
    s4 = next(t for t in G.enumerate_tournaments(4) if O.is_strong(4, t.edges))
    cert = find_hardness_certificate(s4)
    facts = list(cert.facts)
    facts[0] = dataclasses.replace(facts[0], value=not facts[0].value)
    bad = dataclasses.replace(cert, facts=facts)
    assert verify_certificate(s4, bad)


def test_core_override_validation():
    w = G.check_reflexive_tournament(load_graph(WITNESS).graph)
    with pytest.raises(GraphError):
        find_hardness_certificate(w, core=(0, 1))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_every_hard_tournament_certifies(n):
    for t in G.enumerate_tournaments(n):
        if G.scc_chain(t).endpoint_sizes() == (1, 1):
            continue
        cert = find_hardness_certificate(t)
        assert verify_certificate(t, cert) == []
        assert cert.to_json()["route"] == cert.route
