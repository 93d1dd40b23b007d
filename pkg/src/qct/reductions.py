"""Canonical queries, products with constants over assignments, and the six
reduction builders that turn a retraction instance into a QCSP sentence.

Vertex naming in generated sentences: constant ``c_i`` is ``c<i>`` (1-based),
the fresh vertex ``d_i`` of the A-kinds is ``z<i>``, every other vertex ``v``
is ``v<id>``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import config
from .errors import CapExceeded, GraphError
from .gadgets import build_cyl, check_core_cycle
from .graph import (
    Digraph, LabeledGraph, Tournament, check_reflexive_tournament, encode_tuple, hamilton_cycle,
    induced, product_with_constants, scc_chain,
)
from .morphisms import HomConstraints, find_hom
from .qcsp import EXISTS, FORALL, Atom, QcspSentence, solve_game

KINDS = ("BaseI", "BaseII", "GeneralI", "GeneralII", "A-I", "A-II")


# ---------------------------------------------------------------- queries

def _query(g: Digraph, constants: Sequence[int], constant_quantifier: str | None,
           universal_first: Sequence[tuple] = (), domains: dict | None = None) -> QcspSentence:
    """Shared sentence builder.

    ``constants`` name vertices ``c1..cn``; repeated vertices get eq atoms.
    They become free variables when ``constant_quantifier`` is None, otherwise
    outermost variables with that quantifier.  ``universal_first`` is a list of
    (vertex, name) pairs quantified universally before everything else."""
    names = {}
    eqs = []
    for i, c in enumerate(constants, start=1):
        if c in names:
            eqs.append(Atom("eq", names[c], f"c{i}"))
        else:
            names[c] = f"c{i}"
    const_vars = [f"c{i}" for i in range(1, len(constants) + 1)]
    for v, name in universal_first:
        names[v] = name
    for v in range(g.n):
        names.setdefault(v, f"v{v}")
    special = set(constants) | {v for v, _ in universal_first}
    prefix = [(FORALL, name) for _, name in universal_first]
    free = ()
    if constant_quantifier is None:
        free = tuple(const_vars)
    else:
        prefix += [(constant_quantifier, name) for name in const_vars]
    prefix += [(EXISTS, names[v]) for v in range(g.n) if v not in special]
    atoms = tuple(Atom("edge", names[u], names[v]) for u, v in g.sorted_edges()) + tuple(eqs)
    dom = {}
    if domains is not None:
        dom = {name: domains for q, name in prefix if q == EXISTS}
    return QcspSentence(tuple(prefix), atoms, dom, free)


def canonical_query(g: LabeledGraph | Digraph) -> QcspSentence:
    """Existential sentence with one atom per edge (loops included).  Constants
    become free variables ``c1..cn``; a constant repeated on one vertex adds an
    eq atom."""
    if isinstance(g, Digraph):
        g = LabeledGraph(g)
    return _query(g.graph, g.constants, None)


def query_holds(g: LabeledGraph, h: Digraph, values: Sequence[int] = ()) -> bool:
    """Evaluate the canonical query of ``g`` on ``h`` with constants set to ``values``."""
    s = canonical_query(g)
    return solve_game(s, h, assignment={f"c{i}": x for i, x in enumerate(values, start=1)})


# ---------------------------------------------------------------- containment

def _size_text(base: int, exponent: int) -> str:
    digits = exponent * math.log10(base) if base > 1 else 0
    if digits < 18:
        return f"{base}^{exponent} = {base ** exponent}"
    return f"{base}^{exponent} (about 10^{digits:.1f})"


def all_assignments(n: int, values: Sequence[int]) -> list[tuple]:
    return list(itertools.product(values, repeat=n))


def containment_sentence(h: Digraph, cap: int | None = None,
                         n: int | None = None) -> tuple[LabeledGraph, QcspSentence]:
    """Product of H(lambda) over every lambda: [n] -> V(H) (n defaults to
    |V(H)|) and its canonical query with the constants universally
    quantified outermost."""
    cap = config.CARRIER_CAP if cap is None else cap
    n = h.n if n is None else n
    factors = h.n ** n
    if factors * math.log10(max(h.n, 2)) > math.log10(cap) + 1e-9:
        raise CapExceeded(
            f"containment product needs N = {h.n}^{n} = {factors} factors and a carrier of "
            f"{_size_text(h.n, factors)} vertices; cap is {cap}",
            required=f"{h.n}^{factors}", cap=cap)
    parts = [LabeledGraph(h, lam) for lam in all_assignments(n, range(h.n))]
    prod = product_with_constants(parts, cap=cap)
    return prod, _query(prod.graph, prod.constants, FORALL)


def qcsp_containment(h: Digraph, h2: Digraph, cap: int | None = None, budget: int | None = None) -> bool:
    """Whether every sentence true on ``h`` is true on ``h2``.

    Uses max(|V(H)|, |V(H')|) constants so that a surjective assignment onto
    H' exists; the universal block is evaluated by one pinned homomorphism
    search per assignment, which is what the game does on this sentence."""
    prod, _ = containment_sentence(h, cap, n=max(h.n, h2.n))
    for values in itertools.product(range(h2.n), repeat=len(prod.constants)):
        pins = {}
        for c, x in zip(prod.constants, values):
            if pins.setdefault(c, x) != x:
                return False  # two universals forced equal
        if find_hom(prod.graph, h2, HomConstraints(pinned=pins), budget) is None:
            return False
    return True


def pp_closure(h: Digraph, relation: Sequence[Sequence[int]], cap: int | None = None) -> list[tuple]:
    """Closure of a relation under the polymorphisms of ``h``: the tuples
    (f(c_1), ..., f(c_k)) for homomorphisms f from the product of the
    factors H(t), one per tuple t of the relation."""
    rel = [tuple(t) for t in relation]
    if not rel:
        return []
    k = len(rel[0])
    if any(len(t) != k for t in rel):
        raise GraphError("relation tuples must share one arity")
    prod = product_with_constants([LabeledGraph(h, t) for t in rel], cap=cap)
    out = []
    for cand in itertools.product(range(h.n), repeat=k):
        pins = {}
        ok = True
        for c, x in zip(prod.constants, cand):
            if pins.setdefault(c, x) != x:
                ok = False
                break
        if ok and find_hom(prod.graph, h, HomConstraints(pinned=pins)) is not None:
            out.append(cand)
    return out


# ---------------------------------------------------------------- reductions

@dataclass
class ReductionConfig:
    """Inputs of a reduction build.

    ``template`` is H_{k+1} itself for the non-A kinds and the tournament H^+
    for the A-kinds.  ``chain`` lists vertex sets H_0 <= ... <= H_{k+1} in
    template ids; the last one is the whole template (non-A) or its initial
    component (A-kinds).  ``cycles`` gives HC_0..HC_k (defaults to the
    constructive Hamilton cycle).  ``marked`` lists the ids in ``instance``
    of the copy of H_k (kinds I) or H_{k+1} (kinds II), aligned with the
    sorted vertex set.  ``lambdas`` is an explicit list of maps [n] -> V(H_{k+1})
    or the string "ALL"."""

    kind: str
    template: Digraph
    chain: list
    instance: Digraph
    marked: list
    lambdas: object = "ALL"
    cycles: list | None = None
    cap: int | None = None

    def to_json(self) -> dict:
        from .io import graph_to_json

        return {
            "kind": self.kind,
            "template": graph_to_json(self.template),
            "chain": [sorted(c) for c in self.chain],
            "cycles": None if self.cycles is None else [list(c) for c in self.cycles],
            "instance": graph_to_json(self.instance),
            "marked": list(self.marked),
            "lambdas": self.lambdas if self.lambdas == "ALL" else [list(l) for l in self.lambdas],
            "cap": self.cap,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReductionConfig":
        from .io import graph_from_json

        lam = data.get("lambdas", "ALL")
        return cls(
            kind=data["kind"],
            template=graph_from_json(data["template"]).graph,
            chain=[tuple(c) for c in data["chain"]],
            instance=graph_from_json(data["instance"]).graph,
            marked=list(data["marked"]),
            lambdas=lam if lam == "ALL" else [tuple(l) for l in lam],
            cycles=None if data.get("cycles") is None else [tuple(c) for c in data["cycles"]],
            cap=data.get("cap"),
        )


@dataclass
class BuildStats:
    kind: str
    k: int
    n: int
    factor_count: int
    glued_size: int
    carrier_size: int
    core_carrier_size: int
    gadgets: dict
    gadget_m: dict
    instance_size: int
    edge_count: int
    universal_count: int
    existential_count: int
    atom_count: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ReductionResult:
    instance: Digraph
    sentence: QcspSentence
    stats: BuildStats
    factors: list
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.instance, self.sentence, self.stats))


def _new_vertices(m: int, plus: bool) -> int:
    # the bottom copy and one anchor vertex are shared with the carrier
    return m * (m - 1) if plus else m * m - m - 1


def _plan(kind: str, template: Digraph, chain: list):
    if kind not in KINDS:
        raise GraphError(f"unknown reduction kind {kind!r}; expected one of {', '.join(KINDS)}")
    t = template if isinstance(template, Tournament) else check_reflexive_tournament(template)
    if len(chain) < 2:
        raise GraphError("chain needs at least H_0 and H_{k+1}")
    sets = [tuple(sorted(set(c))) for c in chain]
    for c in sets:
        if any(not 0 <= v < t.n for v in c):
            raise GraphError(f"chain set {list(c)} has vertices outside the template")
    for a, b in zip(sets, sets[1:]):
        if not set(a) <= set(b):
            raise GraphError(f"chain is not increasing: {list(a)} is not inside {list(b)}")
    a_plus = kind.startswith("A-")
    top = sets[-1]
    if a_plus:
        initial = tuple(sorted(scc_chain(t).initial))
        if top != initial:
            raise GraphError(f"last chain set must be the initial component {list(initial)}")
    elif top != tuple(range(t.n)):
        raise GraphError("last chain set must be the whole template")
    k = len(sets) - 2
    if kind in ("BaseI", "BaseII") and k != 0:
        raise GraphError(f"{kind} takes a chain H_0, H_1; use the General kinds for longer chains")
    for i in range(k + 1):
        if len(sets[i]) < 3:
            raise GraphError(f"H_{i} has {len(sets[i])} vertices; gadget cycles need at least 3")
    return t, sets, k, a_plus


def build_reduction(cfg: ReductionConfig) -> ReductionResult:
    t, sets, k, a_plus = _plan(cfg.kind, cfg.template, cfg.chain)
    cap = config.CARRIER_CAP if cfg.cap is None else cfg.cap
    kind_one = cfg.kind in ("BaseI", "GeneralI", "A-I")
    top = sets[-1]
    base, base_ids = induced(t, list(top))
    index = {v: i for i, v in enumerate(base_ids)}
    a = base.n
    n = t.n if a_plus else a
    local = [tuple(index[v] for v in s) for s in sets]

    # Hamilton cycles of H_0..H_k, in base indices
    cycles = []
    for i in range(k + 1):
        if cfg.cycles is not None:
            hc = tuple(index.get(v, -1) for v in cfg.cycles[i])
        else:
            sub, ids = induced(base, list(local[i]))
            hc = tuple(ids[j] for j in hamilton_cycle(sub))
        check_core_cycle(base, local[i], hc)
        cycles.append(hc)

    # glue: base keeps ids 0..a-1, other instance vertices follow in id order
    shared = local[k] if kind_one else local[k + 1]
    if len(cfg.marked) != len(shared) or len(set(cfg.marked)) != len(shared):
        raise GraphError(f"marked copy must list {len(shared)} distinct instance vertices")
    g = cfg.instance
    to_glued = {}
    for gv, bv in zip(cfg.marked, shared):
        if not 0 <= gv < g.n:
            raise GraphError(f"marked vertex {gv} is not an instance vertex")
        to_glued[gv] = bv
    for u in cfg.marked:
        for v in cfg.marked:
            if g.has_edge(u, v) != base.has_edge(to_glued[u], to_glued[v]):
                raise GraphError("marked vertices do not induce a copy of the shared subtournament")
    nxt = a
    for v in range(g.n):
        if v not in to_glued:
            to_glued[v] = nxt
            nxt += 1
    glued_edges = set(base.edges) if kind_one else set()
    glued_edges.update((to_glued[u], to_glued[v]) for u, v in g.edges)
    if not kind_one:
        missing = [e for e in base.edges if e not in glued_edges]
        if missing:
            raise GraphError("instance does not contain the marked copy")
    glued = Digraph(nxt, frozenset(glued_edges))

    # assignments
    if cfg.lambdas == "ALL":
        factor_count = a ** n
        lambdas = None
    else:
        lambdas = [tuple(l) for l in cfg.lambdas]
        factor_count = len(lambdas)
        if factor_count == 0:
            raise GraphError("lambda list is empty")
        for lam in lambdas:
            if len(lam) != n or any(x not in index for x in lam):
                raise GraphError(f"lambda {list(lam)} is not a map [{n}] -> {list(top)}")

    # exact size arithmetic before building anything
    sizes = [len(s) for s in sets]
    m_k = sizes[k]
    second = None if factor_count * math.log10(a) > 18 else a ** factor_count - m_k
    chain_count = sum(sizes[i] - sizes[i - 1] for i in range(1, k + 1))
    third = n if cfg.kind == "A-I" else 0
    if factor_count * math.log10(max(glued.n, 2)) > math.log10(cap) + 1e-9:
        raise CapExceeded(
            f"{cfg.kind}: N = {factor_count} factors ({a}^{n} maps) over a {glued.n}-vertex glued "
            f"instance give a carrier of {_size_text(glued.n, factor_count)} vertices; cap is {cap}",
            required=f"{glued.n}^{factor_count}", cap=cap)
    carrier = glued.n ** factor_count
    total = (carrier + second * _new_vertices(m_k, a_plus)
             + sum((sizes[i] - sizes[i - 1]) * _new_vertices(sizes[i - 1], a_plus) for i in range(1, k + 1))
             + (n if a_plus else 0) + third * _new_vertices(m_k, True))
    if total > cap:
        raise CapExceeded(f"{cfg.kind}: instance needs {total} vertices (carrier {carrier}); cap is {cap}",
                          required=total, cap=cap)
    if lambdas is None:
        lambdas = all_assignments(n, range(a))
    else:
        lambdas = [tuple(index[x] for x in lam) for lam in lambdas]

    factors = [LabeledGraph(glued, lam) for lam in lambdas]
    prod = product_with_constants(factors, cap=cap)
    radix = [glued.n] * factor_count
    diag = [encode_tuple(radix, [x] * factor_count) for x in range(glued.n)]
    core_carrier = sorted(encode_tuple(radix, tup) for tup in itertools.product(range(a), repeat=factor_count))

    edges = set(prod.graph.edges)
    nxt = prod.graph.n
    gadget_log = []

    def attach(m: int, plus: bool, bottom: Sequence[int], anchor: int, stage: str):
        nonlocal nxt
        gad = build_cyl(m, plus)
        ids = {}
        for j, gv in enumerate(gad.bottom_cycle):
            ids[gv] = bottom[j]
        ids[gad.pendant if plus else gad.top_cycle[0]] = anchor
        for gv in range(gad.graph.n):
            if gv not in ids:
                ids[gv] = nxt
                nxt += 1
        edges.update((ids[u], ids[v]) for u, v in gad.graph.edges)
        gadget_log.append({"stage": stage, "m": m, "plus": plus, "anchor": anchor,
                           "bottom": list(bottom)})

    bottom_k = [diag[x] for x in cycles[k]]
    core_k = {diag[x] for x in local[k]}
    for v in core_carrier:
        if v not in core_k:
            attach(m_k, a_plus, bottom_k, v, "second")
    for i in range(1, k + 1):
        bottom = [diag[x] for x in cycles[i - 1]]
        for x in local[i]:
            if x not in local[i - 1]:
                attach(sizes[i - 1], a_plus, bottom, diag[x], "chain")
    d_ids = []
    if a_plus:
        for c in prod.constants:
            d = nxt
            nxt += 1
            edges.update({(d, d), (c, d)})
            d_ids.append(d)
        if cfg.kind == "A-I":
            for d in d_ids:
                attach(m_k, True, bottom_k, d, "third")
    instance = Digraph(nxt, frozenset(edges))
    if nxt != total:
        raise GraphError(f"internal size mismatch: built {nxt}, predicted {total}")

    if a_plus:
        sentence = _query(instance, prod.constants, EXISTS,
                          universal_first=[(d, f"z{i}") for i, d in enumerate(d_ids, start=1)],
                          domains=frozenset(top))
    else:
        sentence = _query(instance, prod.constants, FORALL)
    counts = {"second": sum(1 for gl in gadget_log if gl["stage"] == "second"),
              "chain": sum(1 for gl in gadget_log if gl["stage"] == "chain"),
              "third": sum(1 for gl in gadget_log if gl["stage"] == "third")}
    stats = BuildStats(
        kind=cfg.kind, k=k, n=n, factor_count=factor_count, glued_size=glued.n,
        carrier_size=carrier, core_carrier_size=len(core_carrier), gadgets=counts,
        gadget_m={"second": m_k, "chain": [sizes[i - 1] for i in range(1, k + 1)], "third": m_k if third else None},
        instance_size=instance.n, edge_count=len(instance.edges),
        universal_count=len(sentence.universals()),
        existential_count=sum(1 for q, _ in sentence.prefix if q == EXISTS),
        atom_count=len(sentence.atoms),
    )
    meta = {
        "base_ids": list(base_ids),
        "glued_map": {str(v): to_glued[v] for v in range(g.n)},
        "diagonal": diag[:a],
        "constants": list(prod.constants),
        "d": d_ids,
        "cycles": [list(c) for c in cycles],
        "gadgets": gadget_log,
    }
    return ReductionResult(instance, sentence, stats, factors, meta)


def reduction_problems(cfg: ReductionConfig, res: ReductionResult) -> list[str]:
    """Structural checks on a finished build; returns human-readable problems."""
    problems = []
    t, sets, k, a_plus = _plan(cfg.kind, cfg.template, cfg.chain)
    st, s, inst, meta = res.stats, res.sentence, res.instance, res.meta
    sizes = [len(x) for x in sets]
    a, n, big_n = sizes[-1], st.n, st.factor_count
    glued = res.factors[0].graph

    if len(s.universals()) != n:
        problems.append(f"expected {n} universal variables, found {len(s.universals())}")
    declared = set(s.variables)
    if any(v not in declared for atom in s.atoms for v in (atom.a, atom.b)):
        problems.append("atom uses an undeclared variable")
    for j, f in enumerate(res.factors):
        if f.graph != glued:
            problems.append(f"factor {j} does not reduce to the glued instance")
    expected = {"second": a ** big_n - sizes[k],
                "chain": sum(sizes[i] - sizes[i - 1] for i in range(1, k + 1)),
                "third": n if cfg.kind == "A-I" else 0}
    if st.gadgets != expected:
        problems.append(f"gadget counts {st.gadgets} differ from {expected}")

    radix = [glued.n] * big_n
    lam_cols = [f.constants for f in res.factors]
    want_consts = [encode_tuple(radix, [lam[i] for lam in lam_cols]) for i in range(n)]
    if meta["constants"] != want_consts:
        problems.append("product constants are not the tuples of the factor constants")
    prefix = dict((v, q) for q, v in s.prefix)
    if a_plus:
        for i, (c, d) in enumerate(zip(meta["constants"], meta["d"]), start=1):
            if not inst.has_edge(c, d) or prefix.get(f"z{i}") != FORALL:
                problems.append(f"d_{i} is not a universal out-neighbour of c_{i}")
        top = frozenset(sets[-1])
        if any(q == EXISTS and s.domains.get(v) != top for v, q in prefix.items()):
            problems.append("an existential variable lacks the initial-component domain")
        if s.prefix[:n] != tuple((FORALL, f"z{i}") for i in range(1, n + 1)):
            problems.append("z variables are not the outermost block")
    else:
        if s.prefix[:n] != tuple((FORALL, f"c{i}") for i in range(1, n + 1)):
            problems.append("constants are not the outermost universal block")

    diag = meta["diagonal"]
    base, _ = induced(t, list(sets[-1]))
    for x in range(a):
        for y in range(a):
            if inst.has_edge(diag[x], diag[y]) != base.has_edge(x, y):
                problems.append("diagonal copy does not induce the base tournament")
                return problems
    return problems
