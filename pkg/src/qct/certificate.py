"""Search for a hardness route for a reflexive tournament with a non-trivial
end component, recording every fact the route depends on.

The procedure works inside one strongly connected component H: the whole
tournament when it is strongly connected, otherwise its initial component
(plus variants).  When only the final component is non-trivial the search
runs on the reversed tournament.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import GraphError, PaperCheckFailure
from .gadgets import spill
from .graph import Digraph, Tournament, check_reflexive_tournament, hamilton_cycle, induced, is_strongly_connected, scc_chain
from .morphisms import (
    endomorphism_class, is_homomorphism, iso_embeddings, pair_endo_trivial, retraction_to,
)


@dataclass
class Fact:
    kind: str  # endo-trivial | pair-endo-trivial | retracts-to | spill-full
    args: dict
    value: bool
    witness: list | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, **self.args, "value": self.value}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class HardnessCertificate:
    route: str
    k: int | None
    reversed: bool
    plus: bool
    component: tuple
    chain: list  # vertex tuples H_0 .. H_{k+1}, tournament ids
    cycles: list  # HC_0 .. HC_k
    facts: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "k": self.k,
            "reversed": self.reversed,
            "plus": self.plus,
            "component": list(self.component),
            "chain": [list(c) for c in self.chain],
            "cycles": [list(c) for c in self.cycles],
            "facts": [f.to_json() for f in self.facts],
        }


class _Work:
    """Fact recorder over the working tournament (ids are tournament ids)."""

    def __init__(self, w: Digraph, plus: bool, budget):
        self.w = w
        self.plus = plus
        self.budget = budget
        self.facts: list[Fact] = []

    def sub(self, s: Sequence[int]):
        return induced(self.w, sorted(s))

    def endo_trivial(self, s) -> bool:
        g, ids = self.sub(s)
        rep = endomorphism_class(g, bound=len(ids), budget=self.budget)
        wit = None if rep.nontrivial_witness is None else [ids[x] for x in rep.nontrivial_witness.table]
        self.facts.append(Fact("endo-trivial", {"vertices": sorted(s)}, rep.endo_trivial, wit))
        return rep.endo_trivial

    def pair_endo_trivial(self, outer, inner) -> bool:
        g, ids = self.sub(outer)
        loc = {v: i for i, v in enumerate(ids)}
        ok, wit = pair_endo_trivial(g, [loc[v] for v in inner], self.budget)
        self.facts.append(Fact("pair-endo-trivial", {"outer": sorted(outer), "inner": sorted(inner)}, ok,
                               None if wit is None else [ids[x] for x in wit.table]))
        return ok

    def retracts(self, outer, inner, record: bool = True):
        g, ids = self.sub(outer)
        loc = {v: i for i, v in enumerate(ids)}
        r = retraction_to(g, [loc[v] for v in inner], self.budget)
        wit = None if r is None else [ids[x] for x in r.table]
        if record:
            self.facts.append(Fact("retracts-to", {"graph": sorted(outer), "sub": sorted(inner)}, r is not None, wit))
        return wit

    def spill_full(self, host, core, cycle) -> bool:
        g, ids = self.sub(host)
        loc = {v: i for i, v in enumerate(ids)}
        rep = spill(g, [loc[v] for v in core], [loc[v] for v in cycle], plus=self.plus, budget=self.budget)
        self.facts.append(Fact("spill-full", {"host": sorted(host), "core": sorted(core), "cycle": list(cycle),
                                              "plus": self.plus, "union": sorted(ids[x] for x in rep.union)},
                               rep.full))
        return rep.full


def _cycle_of(w: Digraph, s) -> tuple:
    g, ids = induced(w, sorted(s))
    return tuple(ids[i] for i in hamilton_cycle(g))


def _strong_subsets(w: Digraph, inside, strictly_contains=(), size_range=None):
    inside = sorted(inside)
    base = set(strictly_contains)
    rest = [v for v in inside if v not in base]
    lo, hi = size_range if size_range else (3, len(inside))
    for size in range(max(lo, len(base) + 1), hi + 1):
        for extra in itertools.combinations(rest, size - len(base)):
            s = tuple(sorted(base | set(extra)))
            if is_strongly_connected(induced(w, list(s))[0]):
                yield s


def _core(work: _Work, comp) -> tuple:
    """Smallest strongly connected retract on at least 3 vertices (least in
    sorted order among equals); minimality makes it endo-trivial."""
    for s in _strong_subsets(work.w, comp, size_range=(3, len(comp) - 1)):
        if work.retracts(comp, s, record=False) is not None:
            return s
    raise PaperCheckFailure("no proper strongly connected retract found for a non-endo-trivial component")


def _embeddings(w: Digraph, level, comp):
    """All embeddings of the induced ``level`` into ``comp`` as dicts."""
    g0, ids0 = induced(w, sorted(level))
    g, ids = induced(w, sorted(comp))
    for e in iso_embeddings(g0, g):
        yield {ids0[i]: ids[e.table[i]] for i in range(len(ids0))}


def find_hardness_certificate(t: Digraph, budget: int | None = None, max_n: int = 7,
                              core: Sequence[int] | None = None) -> HardnessCertificate:
    """Run the route search.  ``core`` overrides the choice of H_0 (default:
    the smallest strongly connected proper retract); it must be an
    endo-trivial strongly connected subtournament of the component."""
    t = t if isinstance(t, Tournament) else check_reflexive_tournament(t)
    if t.n > max_n:
        raise GraphError(f"certificate search supports at most {max_n} vertices")
    chain = scc_chain(t)
    init, fin = chain.endpoint_sizes()
    if init == 1 and fin == 1:
        raise GraphError("both end components are trivial; the template is in the tractable class")
    rev = init == 1
    w = t.reverse() if rev else t
    wchain = scc_chain(check_reflexive_tournament(w))
    comp = tuple(sorted(wchain.initial))
    plus = len(wchain.components) > 1
    work = _Work(w, plus, budget)

    def cert(route, k, sets, cycles):
        return HardnessCertificate(route, k, rev, plus, comp, [tuple(sorted(s)) for s in sets],
                                   [tuple(c) for c in cycles], work.facts)

    if core is None and work.endo_trivial(comp):
        if not plus:
            return cert("direct-endo-trivial", None, [comp], [])
        hc = _cycle_of(w, comp)
        work.pair_endo_trivial(comp, comp)
        work.spill_full(comp, comp, hc)
        return cert("A-II", 0, [comp, comp], [hc])

    # level 0: an endo-trivial core
    if core is None:
        core = _core(work, comp)
    else:
        core = tuple(sorted(core))
        if not set(core) <= set(comp) or len(core) < 3 or not is_strongly_connected(induced(w, list(core))[0]):
            raise GraphError("core must be a strongly connected subset of the component with at least 3 vertices")
    core_retract = work.retracts(comp, core) is not None
    if not work.endo_trivial(core):
        raise PaperCheckFailure(f"core {list(core)} is not endo-trivial")
    lower = [core]  # H_0 .. H_k, all nested
    cycles = [_cycle_of(w, core)]
    while True:
        k = len(lower) - 1
        level, hc = lower[-1], cycles[-1]
        chosen = None
        for emb in _embeddings(w, level, comp):
            copy = tuple(sorted(emb.values()))
            ccycle = tuple(emb[v] for v in hc)
            if not work.spill_full(comp, copy, ccycle):
                continue
            if work.retracts(comp, copy) is None:
                chosen = emb
                break
        if chosen is None:
            if k == 0 and not core_retract:
                raise PaperCheckFailure("the component does not retract to the chosen core and no copy qualifies")
            route = "A-I" if plus else ("BaseI" if k == 0 else "GeneralI")
            return cert(route, k, lower + [comp], cycles)
        # move the whole lower chain onto the non-retract copy
        lower = [tuple(sorted(chosen[v] for v in s)) for s in lower]
        cycles = [tuple(chosen[v] for v in c) for c in cycles]
        if work.pair_endo_trivial(comp, lower[-1]):
            route = "A-II" if plus else ("BaseII" if k == 0 else "GeneralII")
            return cert(route, k, lower + [comp], cycles)
        nxt = None
        for s in _strong_subsets(w, comp, strictly_contains=lower[-1], size_range=(3, len(comp) - 1)):
            if work.retracts(comp, s, record=False) is None:
                continue
            g, ids = induced(w, list(s))
            if pair_endo_trivial(g, [ids.index(v) for v in lower[-1]], budget)[0]:
                nxt = s
                break
        if nxt is None:
            raise PaperCheckFailure(f"no intermediate retract strictly between {list(lower[-1])} and the component")
        work.retracts(comp, nxt)
        work.pair_endo_trivial(nxt, lower[-1])
        nhc = _cycle_of(w, nxt)
        if not work.spill_full(nxt, lower[-1], cycles[-1]):
            raise PaperCheckFailure(
                f"spill of {list(lower[-1])} inside the intermediate retract {list(nxt)} is not full")
        lower.append(nxt)
        cycles.append(nhc)


def verify_certificate(t: Digraph, cert: HardnessCertificate, budget: int | None = None) -> list[str]:
    """Re-check every recorded fact with fresh searches.  Returns a list of
    problems (empty when the certificate is sound)."""
    t = t if isinstance(t, Tournament) else check_reflexive_tournament(t)
    w = t.reverse() if cert.reversed else t
    check = _Work(w, cert.plus, budget)
    problems = []
    for f in cert.facts:
        a = f.args
        if f.kind == "endo-trivial":
            got = check.endo_trivial(a["vertices"])
        elif f.kind == "pair-endo-trivial":
            got = check.pair_endo_trivial(a["outer"], a["inner"])
        elif f.kind == "retracts-to":
            got = check.retracts(a["graph"], a["sub"]) is not None
        elif f.kind == "spill-full":
            got = check.spill_full(a["host"], a["core"], a["cycle"])
        else:
            problems.append(f"unknown fact kind {f.kind}")
            continue
        if got != f.value:
            problems.append(f"{f.kind} {a}: recorded {f.value}, recomputed {got}")
        if f.witness is not None:
            problems.extend(_check_witness(w, f))
    return problems


def _check_witness(w: Digraph, f: Fact) -> list[str]:
    a = f.args
    host = a.get("vertices") or a.get("outer") or a.get("graph")
    g, ids = induced(w, sorted(host))
    loc = {v: i for i, v in enumerate(ids)}
    table = [loc[x] for x in f.witness]
    if not is_homomorphism(g, g, table):
        return [f"{f.kind} witness is not an endomorphism"]
    if f.kind == "retracts-to":
        sub = {loc[v] for v in a["sub"]}
        if set(table) != sub or any(table[v] != v for v in sub):
            return ["retraction witness does not fix its image"]
    if f.kind == "pair-endo-trivial":
        if any(table[loc[v]] != loc[v] for v in a["inner"]) or len(set(table)) == len(table):
            return ["pair endo-triviality witness is not a non-injective endomorphism fixing the inner set"]
    if f.kind == "endo-trivial" and (len(set(table)) in (1, len(table))):
        return ["endo-triviality witness is trivial"]
    return []
