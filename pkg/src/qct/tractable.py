"""Dichotomy classifier and the polynomial path through TT_2.

Over TT_2 (edges 00, 01, 11) an atom E(x, y) fails only at x=1, y=0, so a
conjunction of edge atoms is a 2-CNF of implications and a QCSP instance is a
quantified 2-SAT formula.  Those are decided with the implication-graph
criteria of Aspvall, Plass and Tarjan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, EngineRefused, GraphError, PaperCheckFailure, QctError
from .graph import Digraph, Tournament, check_reflexive_tournament, power, scc_chain, strongly_connected_components, transitive_tournament
from .morphisms import Mapping, is_homomorphism
from .qcsp import EXISTS, FORALL, ConstantFalse, QcspSentence, eliminate_equality, solve_game


@dataclass(frozen=True)
class Classification:
    verdict: str  # "NL" or "NPHard"
    chain_endpoint_sizes: tuple

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "chain_endpoint_sizes": list(self.chain_endpoint_sizes)}


def classify(t: Digraph) -> Classification:
    t = t if isinstance(t, Tournament) else check_reflexive_tournament(t)
    sizes = scc_chain(t).endpoint_sizes()
    return Classification("NL" if sizes == (1, 1) else "NPHard", sizes)


# ---------------------------------------------------------------- TT_2 maps

def _endpoints(t: Tournament):
    chain = scc_chain(t)
    if chain.endpoint_sizes() != (1, 1):
        raise GraphError("initial and final components must both be single vertices")
    s, u = chain.initial[0], chain.final[0]
    middle = sorted(v for v in range(t.n) if v not in (s, u))
    return s, u, middle


def sur_hom_tt2_power(t: Tournament) -> Mapping:
    """Surjective homomorphism (TT_2)^m -> T for |V(T)| = m + 2, m >= 2:
    the zero tuple goes to the source s, the i-th unit tuple to the i-th middle
    vertex (by id), and every other tuple to the sink t."""
    s, sink, middle = _endpoints(t)
    m = len(middle)
    if m < 2:
        raise GraphError(f"need at least 2 middle vertices, got {m}; (TT_2)^{m} is too small to cover {t.n} vertices")
    size = 2 ** m
    table = [sink] * size
    table[0] = s
    for i, v in enumerate(middle):
        table[1 << (m - 1 - i)] = v  # leftmost coordinate is most significant
    f = Mapping(size, t.n, tuple(table))
    src = power(transitive_tournament(2), m)
    if not is_homomorphism(src, t, f.table) or len(f.image()) != t.n:
        raise PaperCheckFailure("unit-tuple map is not a surjective homomorphism")
    return f


def collapse_to_tt2(t: Tournament) -> Mapping:
    """Surjection T -> TT_2 sending the source to 0 and everything else to 1."""
    s, _, _ = _endpoints(t)
    f = Mapping(t.n, 2, tuple(0 if v == s else 1 for v in range(t.n)))
    if t.n >= 2 and not is_homomorphism(t, transitive_tournament(2), f.table):
        raise PaperCheckFailure("source collapse is not a homomorphism")
    return f


# ---------------------------------------------------------------- quantified 2-SAT

@dataclass
class ImplicationSystem:
    """Literal ``2*i + b`` means variable ``i`` takes value ``b``."""

    names: list
    quantifiers: list
    edges: set = field(default_factory=set)

    def literal(self, name: str, value: int) -> int:
        return 2 * self.names.index(name) + value

    def add(self, p: int, q: int):
        self.edges.add((p, q))
        self.edges.add((q ^ 1, p ^ 1))

    def is_closed(self) -> bool:
        return all((q ^ 1, p ^ 1) in self.edges for p, q in self.edges)


def tt2_implication_form(s: QcspSentence) -> ImplicationSystem:
    if s.free:
        raise QctError("free variables are not supported by the 2-SAT engine")
    if s.has_equality():
        raise QctError("eliminate equality before building the implication form")
    names = [v for _, v in s.prefix]
    sys = ImplicationSystem(names, [q for q, _ in s.prefix])
    for a in s.atoms:
        sys.add(sys.literal(a.a, 1), sys.literal(a.b, 1))
    for v, dom in s.domains.items():
        if not dom <= {0, 1}:
            raise QctError(f"domain of {v} is not a subset of {{0,1}}")
        if dom == {0, 1}:
            continue
        if sys.quantifiers[names.index(v)] == FORALL or not dom:
            # a universal with a restricted domain, or an empty domain
            sys.add(sys.literal(v, 0), sys.literal(v, 1))
            sys.add(sys.literal(v, 1), sys.literal(v, 0))
            continue
        (b,) = dom
        sys.add(sys.literal(v, 1 - b), sys.literal(v, b))
    return sys


def solve_q2sat(sys: ImplicationSystem) -> bool:
    n = len(sys.names)
    succ = [[] for _ in range(2 * n)]
    for p, q in sys.edges:
        succ[p].append(q)
    comps = strongly_connected_components(2 * n, lambda v: succ[v])
    comp = [0] * (2 * n)
    for i, c in enumerate(comps):
        for v in c:
            comp[v] = i
    universal = [q == FORALL for q in sys.quantifiers]
    for i in range(n):
        if comp[2 * i] == comp[2 * i + 1]:
            return False
    # universal literal equivalent to an existential literal quantified earlier
    members = {}
    for lit in range(2 * n):
        members.setdefault(comp[lit], []).append(lit)
    for lits in members.values():
        univ = [l >> 1 for l in lits if universal[l >> 1]]
        if not univ:
            continue
        last_univ = max(univ)
        if any(not universal[l >> 1] and (l >> 1) < last_univ for l in lits):
            return False
    # a universal literal must not imply a different universal literal
    for i in range(n):
        if not universal[i]:
            continue
        for start in (2 * i, 2 * i + 1):
            seen = {start}
            stack = [start]
            while stack:
                p = stack.pop()
                for q in succ[p]:
                    if q in seen:
                        continue
                    if universal[q >> 1] and q != start:
                        return False
                    seen.add(q)
                    stack.append(q)
    return True


# ---------------------------------------------------------------- front door

TT2 = transitive_tournament(2)


@dataclass(frozen=True)
class Answer:
    answer: object  # True, False or "budget"
    engine: str

    def to_json(self) -> dict:
        return {"answer": self.answer, "engine": self.engine}


def _q2sat_applicable(s: QcspSentence) -> bool:
    return not s.free and not s.domains


def solve(s: QcspSentence, t: Digraph, engine: str = "auto", budget: int | None = None,
          assignment: dict | None = None) -> Answer:
    """Decide ``t |= s``.  In auto mode an NL template with at least two
    vertices is replaced by TT_2 and the 2-SAT engine is used; otherwise the
    game engine runs on ``t`` itself."""
    if engine not in ("auto", "game", "q2sat"):
        raise QctError(f"unknown engine {engine!r}")
    nl = False
    if engine != "game":
        nl = classify(t).verdict == "NL"
        if engine == "q2sat" and not nl:
            raise EngineRefused("the 2-SAT engine only handles templates classified NL")
    use_q2sat = nl and t.n >= 2 and _q2sat_applicable(s)
    if engine == "q2sat" and not use_q2sat:
        raise EngineRefused("the 2-SAT engine needs a template with at least 2 vertices and a sentence without domains or free variables")
    tag = "q2sat" if use_q2sat else "game"
    reduced = eliminate_equality(s, t.n)
    if reduced is ConstantFalse:
        return Answer(False, tag)
    if use_q2sat:
        return Answer(solve_q2sat(tt2_implication_form(reduced)), tag)
    try:
        return Answer(solve_game(reduced, t, budget=budget, assignment=assignment), tag)
    except BudgetExceeded:
        return Answer("budget", tag)
