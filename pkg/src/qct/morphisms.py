"""Homomorphism search and the predicates built on it: retractions,
endomorphism classes, automorphisms, polymorphisms, embeddings, images."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping as TMapping, Sequence

from . import config
from .errors import BudgetExceeded, CapExceeded, NotAPolymorphism, NotTransitive
from .graph import Digraph, SccChain, Tournament, _bits, decode_tuple, power, scc_chain


@dataclass(frozen=True)
class Mapping:
    source_size: int
    target_size: int
    table: tuple

    def __post_init__(self):
        table = tuple(int(x) for x in self.table)
        if len(table) != self.source_size:
            raise ValueError("table length must equal source size")
        if any(not 0 <= x < self.target_size for x in table):
            raise ValueError("table entry out of target range")
        object.__setattr__(self, "table", table)

    def __call__(self, v: int) -> int:
        return self.table[v]

    def image(self) -> frozenset:
        return frozenset(self.table)

    def is_injective(self) -> bool:
        return len(set(self.table)) == self.source_size

    def is_constant(self) -> bool:
        return len(set(self.table)) <= 1

    def is_identity(self) -> bool:
        return self.table == tuple(range(self.source_size))

    def compose(self, inner: "Mapping") -> "Mapping":
        """``self`` after ``inner``."""
        return Mapping(inner.source_size, self.target_size, tuple(self.table[x] for x in inner.table))

    def to_json(self) -> list:
        return list(self.table)

    @classmethod
    def identity(cls, n: int) -> "Mapping":
        return cls(n, n, tuple(range(n)))


@dataclass
class HomConstraints:
    pinned: dict = field(default_factory=dict)
    allowed: dict = field(default_factory=dict)
    surjective: bool = False
    edge_surjective: bool = False
    injective: bool = False

    def __post_init__(self):
        for v, t in self.pinned.items():
            if v in self.allowed and t not in self.allowed[v]:
                raise ValueError(f"pinned value {t} for {v} lies outside its allowed set")


def is_homomorphism(a: Digraph, b: Digraph, table: Sequence[int]) -> bool:
    return all(b.has_edge(table[u], table[v]) for u, v in a.edges)


def is_edge_surjective(a: Digraph, b: Digraph, table: Sequence[int]) -> bool:
    hit = {(table[u], table[v]) for u, v in a.edges}
    return hit >= b.edges


# ---------------------------------------------------------------- the engine

class _Search:
    """Backtracking over a static vertex order with forward checking on
    bitmask domains.  Assigning v := t intersects each unassigned
    out-neighbour's domain with out(t) and each in-neighbour's with in(t)."""

    def __init__(self, a: Digraph, b: Digraph, c: HomConstraints | None, order: str, budget: int | None):
        c = c or HomConstraints()
        self.a, self.b, self.c = a, b, c
        self.budget = config.HOM_NODE_BUDGET if budget is None else budget
        self.nodes = 0
        full = (1 << b.n) - 1
        loops = sum(1 << t for t in range(b.n) if b.has_edge(t, t))
        dom = []
        for v in range(a.n):
            mask = full
            if v in c.allowed:
                mask = 0
                for t in c.allowed[v]:
                    mask |= 1 << t
            if v in c.pinned:
                mask &= 1 << c.pinned[v]
            if a.has_edge(v, v):
                mask &= loops
            dom.append(mask)
        self.dom = dom
        self.succ = [[u for u in a.out_neighbours(v) if u != v] for v in range(a.n)]
        self.pred = [[u for u in a.in_neighbours(v) if u != v] for v in range(a.n)]
        if order == "lex":
            self.order = list(range(a.n))
        else:
            degree = [len(self.succ[v]) + len(self.pred[v]) for v in range(a.n)]
            fixed = [v for v in range(a.n) if dom[v] and dom[v] & (dom[v] - 1) == 0]
            fixed_set = set(fixed)
            rest = sorted((v for v in range(a.n) if v not in fixed_set), key=lambda v: (-degree[v], v))
            self.order = fixed + rest

    def run(self) -> Iterator[tuple]:
        a, b, c = self.a, self.b, self.c
        n = a.n
        if any(m == 0 for m in self.dom):
            return
        assign = [-1] * n
        dom = self.dom
        out_b, in_b = b.out_masks, b.in_masks
        order = self.order
        hit = [0] * b.n

        def rec(depth: int, missing: int):
            if depth == n:
                if c.surjective and missing:
                    return
                table = tuple(assign)
                if c.edge_surjective and not is_edge_surjective(a, b, table):
                    return
                yield table
                return
            if c.surjective and n - depth < missing:
                return
            v = order[depth]
            for t in _bits(dom[v]):
                self.nodes += 1
                if self.nodes > self.budget:
                    raise BudgetExceeded(f"homomorphism search exceeded {self.budget} nodes")
                trail = []
                ok = True
                for u in self.succ[v]:
                    if assign[u] < 0:
                        new = dom[u] & out_b[t]
                        if new != dom[u]:
                            trail.append((u, dom[u]))
                            dom[u] = new
                            if not new:
                                ok = False
                                break
                if ok:
                    for u in self.pred[v]:
                        if assign[u] < 0:
                            new = dom[u] & in_b[t]
                            if new != dom[u]:
                                trail.append((u, dom[u]))
                                dom[u] = new
                                if not new:
                                    ok = False
                                    break
                if ok and c.injective:
                    bit = 1 << t
                    for u in order[depth + 1:]:
                        if dom[u] & bit:
                            trail.append((u, dom[u]))
                            dom[u] &= ~bit
                            if not dom[u]:
                                ok = False
                                break
                if ok:
                    assign[v] = t
                    hit[t] += 1
                    yield from rec(depth + 1, missing - (hit[t] == 1))
                    hit[t] -= 1
                    assign[v] = -1
                for u, old in reversed(trail):
                    dom[u] = old

        yield from rec(0, b.n)


def find_hom(a: Digraph, b: Digraph, c: HomConstraints | None = None,
             budget: int | None = None) -> Mapping | None:
    """First homomorphism a -> b meeting the constraints, or None."""
    for table in _Search(a, b, c, "degree", budget).run():
        return Mapping(a.n, b.n, table)
    return None


def enumerate_homs(a: Digraph, b: Digraph, c: HomConstraints | None = None,
                   budget: int | None = None) -> Iterator[Mapping]:
    """Every constrained homomorphism once, tables in lexicographic order.

    On budget exhaustion raises BudgetExceeded carrying the maps already
    yielded in ``partial``.
    """
    found = []
    try:
        for table in _Search(a, b, c, "lex", budget).run():
            m = Mapping(a.n, b.n, table)
            found.append(m)
            yield m
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), partial=found) from None


def count_homs(a: Digraph, b: Digraph, c: HomConstraints | None = None, budget: int | None = None) -> int:
    return sum(1 for _ in _Search(a, b, c, "lex", budget).run())


# ---------------------------------------------------------------- retractions

def retraction_to(d: Digraph, sub: Sequence[int], budget: int | None = None) -> Mapping | None:
    """Endomorphism of d with image inside ``sub`` that fixes ``sub`` pointwise."""
    keep = frozenset(sub)
    c = HomConstraints(pinned={v: v for v in keep}, allowed={v: keep for v in range(d.n)})
    return find_hom(d, d, c, budget)


def is_retraction(m: Mapping) -> bool:
    return all(m.table[x] == x for x in m.table)


def _is_trivial_endo(m: Mapping) -> bool:
    return m.is_constant() or m.is_injective()


@dataclass(frozen=True)
class EndoReport:
    endo_trivial: bool
    retract_trivial: bool
    nontrivial_witness: Mapping | None

    def to_json(self) -> dict:
        return {
            "endo_trivial": self.endo_trivial,
            "retract_trivial": self.retract_trivial,
            "nontrivial_witness": self.nontrivial_witness.to_json() if self.nontrivial_witness else None,
        }


def endomorphism_class(t: Digraph, bound: int | None = None, budget: int | None = None) -> EndoReport:
    """Endo- and retract-triviality.  A bijective endomorphism of a finite
    digraph is an automorphism (edge counts match), so trivial means
    injective or constant.  The witness prefers a non-trivial retraction."""
    bound = config.ENDO_BOUND if bound is None else bound
    if t.n > bound:
        raise CapExceeded(f"endomorphism_class limited to {bound} vertices", required=t.n, cap=bound)
    endo_witness = None
    retract_witness = None
    for m in enumerate_homs(t, t, budget=budget):
        if _is_trivial_endo(m):
            continue
        if endo_witness is None:
            endo_witness = m
        if is_retraction(m):
            retract_witness = m
            break
    return EndoReport(endo_witness is None, retract_witness is None, retract_witness or endo_witness)


def is_endo_trivial(t: Digraph) -> bool:
    for m in enumerate_homs(t, t):
        if not _is_trivial_endo(m):
            return False
    return True


def pair_endo_trivial(t: Digraph, sub: Sequence[int], budget: int | None = None) -> tuple[bool, Mapping | None]:
    """Whether every endomorphism fixing ``sub`` pointwise is an automorphism.
    Returns the verdict and a non-automorphism witness if there is one."""
    c = HomConstraints(pinned={v: v for v in sub})
    for m in enumerate_homs(t, t, c, budget):
        if not m.is_injective():
            return False, m
    return True, None


def automorphisms(d: Digraph, budget: int | None = None) -> list[Mapping]:
    if d.n > config.AUTO_BOUND:
        raise CapExceeded(f"automorphisms limited to {config.AUTO_BOUND} vertices", required=d.n,
                          cap=config.AUTO_BOUND)
    return list(enumerate_homs(d, d, HomConstraints(injective=True), budget))


def iso_embeddings(h0: Digraph, h: Digraph) -> Iterator[Mapping]:
    """Injective maps whose image induces a copy of h0 (edges and non-edges kept)."""
    if not h0.n <= h.n <= config.EMBED_BOUND:
        raise CapExceeded(f"iso_embeddings needs |V(H0)| <= |V(H)| <= {config.EMBED_BOUND}",
                          required=h.n, cap=config.EMBED_BOUND)
    for table in itertools.permutations(range(h.n), h0.n):
        if all(h0.has_edge(u, v) == h.has_edge(table[u], table[v])
               for u in range(h0.n) for v in range(h0.n)):
            yield Mapping(h0.n, h.n, table)


# ---------------------------------------------------------------- polymorphisms

def polymorphisms(d: Digraph, k: int, c: HomConstraints | None = None,
                  budget: int | None = None) -> Iterator[Mapping]:
    """k-ary polymorphisms as maps from the carrier of power(d, k)."""
    supported = k == 1 or (k == 2 and d.n <= 4) or (k == 3 and d.n <= 3)
    if not supported:
        raise CapExceeded(f"polymorphism search space {d.n}^{d.n ** k} is beyond the supported range",
                          required=d.n ** k)
    prod = power(d, k)
    yield from enumerate_homs(prod, d, c, budget)


def projection(n: int, k: int, i: int) -> Mapping:
    sizes = [n] * k
    return Mapping(n ** k, n, tuple(decode_tuple(sizes, x)[i] for x in range(n ** k)))


@dataclass(frozen=True)
class PolymorphismReport:
    essentially_unary: bool
    unary_coordinate: int | None
    unary_map: Mapping | None
    uniformly_constant: int | None
    component_preserving: bool

    def to_json(self) -> dict:
        return {
            "essentially_unary": self.essentially_unary,
            "unary_coordinate": self.unary_coordinate,
            "unary_map": self.unary_map.to_json() if self.unary_map else None,
            "uniformly_constant": self.uniformly_constant,
            "component_preserving": self.component_preserving,
        }


def classify_polymorphism(f: Mapping, d: Digraph, k: int, chain: SccChain | None = None,
                          endos: list | None = None) -> PolymorphismReport:
    prod = power(d, k)
    if f.source_size != prod.n or f.target_size != d.n or not is_homomorphism(prod, d, f.table):
        raise NotAPolymorphism("map is not a polymorphism of the given arity")
    sizes = [d.n] * k
    tuples = [decode_tuple(sizes, x) for x in range(prod.n)]
    if endos is None:
        endos = list(enumerate_homs(d, d))
    coord = None
    unary = None
    for i in range(k):
        for g in endos:
            if all(f.table[x] == g.table[tup[i]] for x, tup in enumerate(tuples)):
                coord, unary = i, g
                break
        if unary is not None:
            break
    values = set(f.table)
    constant = next(iter(values)) if len(values) == 1 else None
    if chain is None:
        chain = scc_chain(d) if isinstance(d, Tournament) else None
    preserving = True
    if chain is not None:
        for x, tup in enumerate(tuples):
            comps = {chain.component_of[v] for v in tup}
            if len(comps) == 1 and chain.component_of[f.table[x]] not in comps:
                preserving = False
                break
    return PolymorphismReport(unary is not None, coord, unary, constant, preserving)


def median_map(t: Tournament) -> Mapping:
    """Ternary median over the linear order of a transitive tournament."""
    chain = scc_chain(t)
    if any(len(c) != 1 for c in chain.components):
        raise NotTransitive("tournament is not transitive")
    rank = {c[0]: i for i, c in enumerate(chain.components)}
    sizes = [t.n] * 3
    table = []
    for x in range(t.n ** 3):
        tup = decode_tuple(sizes, x)
        table.append(sorted(tup, key=rank.__getitem__)[1])
    return Mapping(t.n ** 3, t.n, tuple(table))


def has_median_polymorphism(t: Tournament) -> bool:
    med = median_map(t)
    sizes = [t.n] * 3
    from .graph import encode_tuple

    edges = sorted(t.edges)
    for e1, e2, e3 in itertools.product(edges, repeat=3):
        src = med.table[encode_tuple(sizes, (e1[0], e2[0], e3[0]))]
        dst = med.table[encode_tuple(sizes, (e1[1], e2[1], e3[1]))]
        if not t.has_edge(src, dst):
            return False
    return True


# ---------------------------------------------------------------- images

def _set_partitions(n: int, blocks: int) -> Iterator[tuple]:
    """Restricted growth strings of length n using exactly ``blocks`` labels."""
    def rec(prefix, used):
        i = len(prefix)
        if i == n:
            if used == blocks:
                yield tuple(prefix)
            return
        if used + (n - i) < blocks:
            return
        for label in range(min(used + 1, blocks)):
            prefix.append(label)
            yield from rec(prefix, max(used, label + 1))
            prefix.pop()
    yield from rec([], 0)


@dataclass(frozen=True)
class HomImage:
    graph: Digraph
    mapping: Mapping
    has_double_edge: bool


def edge_surjective_images(h: Digraph, size: int) -> Iterator[HomImage]:
    """All homomorphic images on ``size`` vertices, one per vertex partition.

    The image digraph is the edge image, so the quotient map is surjective and
    edge-surjective by construction.
    """
    if not 1 <= size <= h.n or h.n > 6:
        raise CapExceeded("edge_surjective_images supports size <= |V(H)| <= 6", required=h.n, cap=6)
    for labels in _set_partitions(h.n, size):
        edges = frozenset((labels[u], labels[v]) for u, v in h.edges)
        img = Digraph(size, edges)
        yield HomImage(img, Mapping(h.n, size, labels), img.has_double_edge())
