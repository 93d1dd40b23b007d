"""Digraphs, reflexive tournaments, SCC chains and product constructions.

Vertices are dense ids ``0..n-1``.  Each graph keeps its out- and
in-neighbourhoods as Python-int bitmasks so edge tests are a shift and a mask.

Products flatten tuples with a mixed-radix code, leftmost factor most
significant: for factor sizes ``(n_1, ..., n_k)`` the tuple ``(x_1, ..., x_k)``
has id ``((x_1 * n_2 + x_2) * n_3 + ...) + x_k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import config
from .errors import CapExceeded, GraphError, NotATournament, NotStronglyConnected

Edge = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: frozenset
    name: str | None = field(default=None, compare=False)
    out_masks: tuple = field(init=False, repr=False, compare=False)
    in_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        out = [0] * self.n
        inn = [0] * self.n
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) has an endpoint out of range for n={self.n}")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "out_masks", tuple(out))
        object.__setattr__(self, "in_masks", tuple(inn))

    def __eq__(self, other):
        # structural: a Tournament equals the plain Digraph with the same edges
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def out_neighbours(self, v: int) -> list[int]:
        return _bits(self.out_masks[v])

    def in_neighbours(self, v: int) -> list[int]:
        return _bits(self.in_masks[v])

    def is_reflexive(self) -> bool:
        return all(self.has_edge(v, v) for v in range(self.n))

    def has_double_edge(self) -> bool:
        return any(u != v and self.has_edge(v, u) for u, v in self.edges)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, frozenset((v, u) for u, v in self.edges), self.name)

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Graph whose vertex ``i`` is old vertex ``perm[i]``."""
        pos = {old: new for new, old in enumerate(perm)}
        return Digraph(self.n, frozenset((pos[u], pos[v]) for u, v in self.edges), self.name)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Digraph{label} n={self.n} |E|={len(self.edges)}>"


class Tournament(Digraph):
    """A Digraph that has been checked to be a reflexive tournament."""

    def __post_init__(self):
        super().__post_init__()
        problem = _tournament_problem(self)
        if problem:
            raise NotATournament(problem)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Tournament{label} n={self.n}>"


@dataclass(frozen=True)
class SccChain:
    components: tuple  # tuple of sorted vertex tuples, chain order
    component_of: tuple  # vertex -> index into components

    @property
    def initial(self) -> tuple:
        return self.components[0]

    @property
    def final(self) -> tuple:
        return self.components[-1]

    def endpoint_sizes(self) -> tuple[int, int]:
        return len(self.components[0]), len(self.components[-1])

    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


@dataclass(frozen=True)
class LabeledGraph:
    graph: Digraph
    constants: tuple = ()

    def __post_init__(self):
        consts = tuple(int(c) for c in self.constants)
        for c in consts:
            if not 0 <= c < self.graph.n:
                raise GraphError(f"constant {c} is not a vertex of a {self.graph.n}-vertex graph")
        object.__setattr__(self, "constants", consts)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _tournament_problem(d: Digraph) -> str | None:
    for v in range(d.n):
        if not d.has_edge(v, v):
            return f"missing loop at {v}"
    for u in range(d.n):
        for v in range(u + 1, d.n):
            a, b = d.has_edge(u, v), d.has_edge(v, u)
            if a and b:
                return f"double edge between pair ({u},{v})"
            if not a and not b:
                return f"pair ({u},{v}) unrelated"
    return None


# ---------------------------------------------------------------- builders

def make_digraph(n: int, edges: Iterable[Edge] = (), reflexive: bool = False,
                 name: str | None = None) -> Digraph:
    """Build a digraph; duplicate edges are ignored, loops added if ``reflexive``."""
    edge_set = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) has an endpoint out of range for n={n}")
        edge_set.add((u, v))
    if reflexive:
        edge_set.update((v, v) for v in range(n))
    return Digraph(n, frozenset(edge_set), name)


def reflexive_directed_cycle(m: int) -> Digraph:
    if m < 1:
        raise GraphError("cycle length must be at least 1")
    return make_digraph(m, [(i, (i + 1) % m) for i in range(m)], reflexive=True, name=f"DC*_{m}")


def transitive_tournament(k: int) -> Tournament:
    if k < 1:
        raise GraphError("transitive tournament needs at least one vertex")
    edges = [(i, j) for i in range(k) for j in range(i, k)]
    return Tournament(k, frozenset(edges), f"TT_{k}")


def check_reflexive_tournament(d: Digraph) -> Tournament:
    if isinstance(d, Tournament):
        return d
    problem = _tournament_problem(d)
    if problem:
        raise NotATournament(problem)
    return Tournament(d.n, d.edges, d.name)


def chain_tournament(parts: Sequence[Digraph], name: str | None = None) -> Tournament:
    """Tournament ``parts[0] => parts[1] => ...``: every cross edge goes forward."""
    offsets = list(itertools.accumulate([0] + [p.n for p in parts]))
    edges = set()
    for idx, part in enumerate(parts):
        base = offsets[idx]
        edges.update((u + base, v + base) for u, v in part.edges)
        for later in range(idx + 1, len(parts)):
            for u in range(part.n):
                for v in range(parts[later].n):
                    edges.add((u + base, v + offsets[later]))
    return check_reflexive_tournament(Digraph(offsets[-1], frozenset(edges), name))


# ---------------------------------------------------------------- structure

def strongly_connected_components(n: int, succ) -> list[list[int]]:
    """Iterative Tarjan.  ``succ(v)`` yields successors.  Components come out
    in reverse topological order (sinks first)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(d: Digraph) -> bool:
    return len(strongly_connected_components(d.n, d.out_neighbours)) <= 1


def scc_chain(t: Tournament) -> SccChain:
    """Split a reflexive tournament into its chain H_1 => ... => H_n."""
    comps = strongly_connected_components(t.n, t.out_neighbours)
    # Tarjan emits sinks first; the chain starts at the source component.
    comps.reverse()
    component_of = [0] * t.n
    for i, comp in enumerate(comps):
        for v in comp:
            component_of[v] = i
    for u, v in t.edges:
        if component_of[u] > component_of[v]:
            raise AssertionError(f"SCC chain broken: edge ({u},{v}) points backwards")
    for i, ci in enumerate(comps):
        for cj in comps[i + 1:]:
            for u in ci:
                for v in cj:
                    if not t.has_edge(u, v):
                        raise AssertionError(f"SCC chain broken: missing forward edge ({u},{v})")
    return SccChain(tuple(tuple(c) for c in comps), tuple(component_of))


def hamilton_cycle(t: Tournament) -> tuple[int, ...]:
    """Directed Hamilton cycle of a strongly connected reflexive tournament.

    Grows a cycle from a directed triangle.  An outside vertex with both an
    in- and an out-neighbour on the cycle is spliced in where the relation
    flips; if every outside vertex dominates or is dominated by the whole
    cycle, strong connectivity gives an edge u -> w from a dominated u to a
    dominating w, and both are spliced in after c_0.
    """
    n = t.n
    if n == 1:
        return (0,)
    if not is_strongly_connected(t):
        raise NotStronglyConnected(f"tournament on {n} vertices is not strongly connected")

    def arc(u, v):
        return u != v and t.has_edge(u, v)

    cycle = None
    for u, v, w in itertools.permutations(range(n), 3):
        if arc(u, v) and arc(v, w) and arc(w, u):
            cycle = [u, v, w]
            break
    assert cycle is not None
    outside = [v for v in range(n) if v not in cycle]
    while outside:
        spliced = False
        for v in outside:
            k = len(cycle)
            for i in range(k):
                if arc(cycle[i], v) and arc(v, cycle[(i + 1) % k]):
                    cycle.insert(i + 1, v)
                    outside.remove(v)
                    spliced = True
                    break
            if spliced:
                break
        if spliced:
            continue
        dominated = [v for v in outside if arc(cycle[0], v)]
        dominating = [v for v in outside if arc(v, cycle[0])]
        pair = next(((u, w) for u in dominated for w in dominating if arc(u, w)), None)
        if pair is None:
            raise NotStronglyConnected("no edge from the dominated to the dominating side")
        u, w = pair
        cycle[1:1] = [u, w]
        outside.remove(u)
        outside.remove(w)
    return tuple(cycle)


def is_hamilton_cycle(d: Digraph, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(d.n)):
        return False
    k = len(order)
    return all(d.has_edge(order[i], order[(i + 1) % k]) for i in range(k))


def induced(d: Digraph, vertices: Sequence[int]) -> tuple[Digraph, tuple[int, ...]]:
    """Induced subgraph on ``vertices``; new id i is old vertex ``index_map[i]``.

    The order of ``vertices`` is kept, so callers control the labelling.
    """
    index_map = tuple(int(v) for v in vertices)
    if len(set(index_map)) != len(index_map):
        raise GraphError("vertex set has repeated ids")
    for v in index_map:
        if not 0 <= v < d.n:
            raise GraphError(f"vertex {v} not in graph of size {d.n}")
    pos = {v: i for i, v in enumerate(index_map)}
    edges = frozenset((pos[u], pos[v]) for u, v in d.edges if u in pos and v in pos)
    sub = Digraph(len(index_map), edges)
    if isinstance(d, Tournament):
        sub = check_reflexive_tournament(sub)
    return sub, index_map


# ---------------------------------------------------------------- products

def encode_tuple(sizes: Sequence[int], coords: Sequence[int]) -> int:
    code = 0
    for size, x in zip(sizes, coords):
        code = code * size + x
    return code


def decode_tuple(sizes: Sequence[int], code: int) -> tuple[int, ...]:
    out = []
    for size in reversed(sizes):
        code, x = divmod(code, size)
        out.append(x)
    return tuple(reversed(out))


def _check_cap(required: int, cap: int | None, what: str):
    cap = config.CARRIER_CAP if cap is None else cap
    if required > cap:
        raise CapExceeded(f"{what} needs {required} vertices, cap is {cap}", required=required, cap=cap)


def direct_product(a: Digraph, b: Digraph, cap: int | None = None) -> Digraph:
    return product_of([a, b], cap=cap)


def product_of(parts: Sequence[Digraph], cap: int | None = None) -> Digraph:
    """Direct product of several digraphs with the mixed-radix encoding."""
    if not parts:
        raise GraphError("empty product")
    sizes = [p.n for p in parts]
    required = 1
    for s in sizes:
        required *= s
    _check_cap(required, cap, "direct product")
    edges = [(0, 0)]
    for p in parts:
        edges = [(u * p.n + x, v * p.n + y) for u, v in edges for x, y in p.edges]
    return Digraph(required, frozenset(edges))


def power(a: Digraph, k: int, cap: int | None = None) -> Digraph:
    if k < 1:
        raise GraphError("power exponent must be positive")
    return product_of([a] * k, cap=cap)


def product_with_constants(parts: Sequence[LabeledGraph], cap: int | None = None) -> LabeledGraph:
    if not parts:
        raise GraphError("empty product")
    count = len(parts[0].constants)
    if any(len(p.constants) != count for p in parts):
        raise GraphError("all parts must carry the same number of constants")
    if len(parts) == 1:
        return parts[0]
    graph = product_of([p.graph for p in parts], cap=cap)
    sizes = [p.graph.n for p in parts]
    consts = tuple(encode_tuple(sizes, [p.constants[i] for p in parts]) for i in range(count))
    return LabeledGraph(graph, consts)


def diagonal_embedding(a: Digraph, k: int, cap: int | None = None):
    """Mapping x -> (x, ..., x) into ``power(a, k)``."""
    from .morphisms import Mapping

    required = a.n ** k
    _check_cap(required, cap, "power")
    table = tuple(encode_tuple([a.n] * k, [x] * k) for x in range(a.n))
    return Mapping(a.n, required, table)


# ---------------------------------------------------------------- enumeration

def _adjacency_code(d: Digraph, perm: Sequence[int]) -> int:
    """Row-major adjacency bits of ``d`` listed in the vertex order ``perm``."""
    code = 0
    for pi in perm:
        row = d.out_masks[pi]
        for pj in perm:
            code = (code << 1) | (row >> pj & 1)
    return code


def _refined_cells(d: Digraph) -> list[list[int]]:
    """Ordered vertex partition that every isomorphism must respect
    (degrees and loop, then iterated neighbourhood-colour signatures)."""
    n = d.n
    deg = lambda m: bin(m).count("1")
    sig0 = [(deg(d.out_masks[v]), deg(d.in_masks[v]), d.has_edge(v, v)) for v in range(n)]
    ranks = {s: i for i, s in enumerate(sorted(set(sig0)))}
    colour = [ranks[s] for s in sig0]
    while True:
        sig = [
            (colour[v],
             tuple(sorted(colour[u] for u in d.out_neighbours(v))),
             tuple(sorted(colour[u] for u in d.in_neighbours(v))))
            for v in range(n)
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        stable = len(ranks) == len(set(colour))
        colour = new
        if stable:
            break
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colour[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def canonical_form(d: Digraph) -> tuple[int, tuple[int, ...]]:
    """Minimum adjacency code over every vertex order compatible with the
    refined partition, plus an order achieving it.  Exhaustive inside cells,
    so only meant for small graphs."""
    if d.n > config.EMBED_BOUND:
        raise GraphError(f"canonical form is exhaustive and limited to n <= {config.EMBED_BOUND}")
    cells = _refined_cells(d)
    best = None
    best_perm = None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        perm = tuple(v for part in choice for v in part)
        code = _adjacency_code(d, perm)
        if best is None or code < best:
            best, best_perm = code, perm
    return best, best_perm


def enumerate_tournaments(n: int) -> Iterator[Tournament]:
    """One reflexive tournament per isomorphism class, in canonical labelling,
    sorted by canonical code.  Grown vertex by vertex from the classes on n-1."""
    if not 1 <= n <= 7:
        raise GraphError(f"enumerate_tournaments supports 1 <= n <= 7, got {n}")
    reps = {1: Tournament(1, frozenset({(0, 0)}))}
    for size in range(2, n + 1):
        nxt: dict[int, Tournament] = {}
        for base in reps.values():
            for pattern in range(1 << (size - 1)):
                edges = set(base.edges)
                new = size - 1
                edges.add((new, new))
                for v in range(new):
                    edges.add((new, v) if pattern >> v & 1 else (v, new))
                cand = Digraph(size, frozenset(edges))
                code, perm = canonical_form(cand)
                if code not in nxt:
                    nxt[code] = Tournament(size, cand.relabel(perm).edges)
        reps = nxt
    for code in sorted(reps):
        yield reps[code]


def are_isomorphic(a: Digraph, b: Digraph) -> bool:
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    return canonical_form(a)[0] == canonical_form(b)[0]
