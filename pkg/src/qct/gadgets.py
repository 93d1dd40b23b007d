"""The cylinder gadget, spill sets, and the gadget lemmas checked by search.

Cylinder vertex ``(i, j)`` is position ``i`` of copy ``j`` and has id
``j * m + i``.  Copy 0 is the bottom, copy m-1 the top.  In the plus variant
the pendant vertex has id ``m * m`` and receives its single non-loop edge from
top position 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import GraphError
from .graph import Digraph, Tournament, induced, is_hamilton_cycle, make_digraph, reflexive_directed_cycle
from .morphisms import HomConstraints, Mapping, enumerate_homs, find_hom


@dataclass(frozen=True)
class Gadget:
    graph: Digraph
    m: int
    bottom_cycle: tuple
    top_cycle: tuple
    pendant: int | None = None

    def copy(self, j: int) -> tuple:
        return tuple(j * self.m + i for i in range(self.m))

    def meta(self) -> dict:
        return {
            "m": self.m,
            "labels": {str(v): _label(v, self.m) for v in range(self.graph.n)},
            "bottom_cycle": list(self.bottom_cycle),
            "top_cycle": list(self.top_cycle),
            "pendant": self.pendant,
        }


def _label(v: int, m: int) -> str:
    if v == m * m:
        return "pendant"
    j, i = divmod(v, m)
    return f"copy{j}/pos{i}"


def build_cyl(m: int, plus: bool = False) -> Gadget:
    if m < 2:
        raise GraphError("cylinder gadget needs m >= 2")
    vid = lambda i, j: j * m + i
    edges = []
    for j in range(m):
        for i in range(m):
            edges.append((vid(i, j), vid((i + 1) % m, j)))
            if j + 1 < m:
                edges.append((vid(i, j), vid(i, j + 1)))  # red
                edges.append((vid(i, j + 1), vid((i + 1) % m, j)))  # green
    n = m * m
    pendant = None
    if plus:
        pendant = n
        edges.append((vid(0, m - 1), pendant))
        n += 1
    g = make_digraph(n, edges, reflexive=True, name=f"Cyl{'+' if plus else ''}_{m}")
    return Gadget(g, m, tuple(vid(i, 0) for i in range(m)), tuple(vid(i, m - 1) for i in range(m)), pendant)


@dataclass(frozen=True)
class SpillInstance:
    """F(H_0, HC_0): H with a cylinder whose bottom copy is glued onto HC_0."""

    graph: Digraph
    host_size: int
    gadget: Gadget
    to_f: tuple  # gadget vertex id -> id in F
    top_cycle: tuple  # ids in F
    pendant: int | None  # id in F

    def meta(self) -> dict:
        return {
            "host_size": self.host_size,
            "gadget_to_instance": list(self.to_f),
            "top_cycle": list(self.top_cycle),
            "pendant": self.pendant,
        }


def check_core_cycle(h: Digraph, core: Sequence[int], hc: Sequence[int]):
    core_set = set(core)
    if len(core_set) != len(core):
        raise GraphError("core repeats a vertex")
    if len(hc) != len(core) or set(hc) != core_set:
        raise GraphError(f"cycle {list(hc)} is not an ordering of the core {sorted(core_set)}")
    if not is_hamilton_cycle(induced(h, list(hc))[0], list(range(len(hc)))):
        raise GraphError(f"{list(hc)} is not a directed Hamilton cycle of the core")


def attach_spill_instance(h: Digraph, core: Sequence[int], hc: Sequence[int], plus: bool = False) -> SpillInstance:
    check_core_cycle(h, core, hc)
    m = len(hc)
    gadget = build_cyl(m, plus)
    to_f = []
    nxt = h.n
    for v in range(gadget.graph.n):
        if v < m:
            to_f.append(hc[v])
        else:
            to_f.append(nxt)
            nxt += 1
    edges = set(h.edges)
    edges.update((to_f[u], to_f[v]) for u, v in gadget.graph.edges)
    f = Digraph(nxt, frozenset(edges))
    top = tuple(to_f[v] for v in gadget.top_cycle)
    pendant = to_f[gadget.pendant] if plus else None
    return SpillInstance(f, h.n, gadget, tuple(to_f), top, pendant)


@dataclass(frozen=True)
class SpillReport:
    per_top_vertex: dict  # designated vertex id in F -> frozenset of H vertices
    union: frozenset
    full: bool
    host_size: int

    def to_json(self) -> dict:
        return {
            "per_top_vertex": {str(x): sorted(ys) for x, ys in sorted(self.per_top_vertex.items())},
            "union": sorted(self.union),
            "full": self.full,
        }


def spill(h: Digraph, core: Sequence[int], hc: Sequence[int], plus: bool = False,
          budget: int | None = None) -> SpillReport:
    """For each designated vertex x (every top-cycle vertex; the pendant in
    plus mode) the set of y in H reached as r(x) by a retraction r of F to H."""
    inst = attach_spill_instance(h, core, hc, plus)
    f = inst.graph
    host = frozenset(range(h.n))
    designated = [inst.pendant] if plus else list(inst.top_cycle)
    reach = {x: set() for x in designated}
    base_pins = {v: v for v in range(h.n)}
    allowed = {v: host for v in range(f.n)}
    for x in designated:
        for y in range(h.n):
            if y in reach[x]:
                continue
            c = HomConstraints(pinned={**base_pins, x: y}, allowed=allowed)
            r = find_hom(f, f, c, budget)
            if r is not None:
                for x2 in designated:
                    reach[x2].add(r.table[x2])
    per = {x: frozenset(ys) for x, ys in reach.items()}
    union = frozenset().union(*per.values())
    return SpillReport(per, union, union == host, h.n)


def dagger_maps(m: int, budget: int | None = None) -> set:
    """Top-copy maps (position -> bottom position) induced by retractions of
    Cyl*_m onto its bottom copy."""
    g = build_cyl(m)
    bottom = frozenset(g.bottom_cycle)
    c = HomConstraints(pinned={v: v for v in bottom}, allowed={v: bottom for v in range(g.graph.n)})
    maps = set()
    for r in enumerate_homs(g.graph, g.graph, c, budget):
        maps.add(tuple(r.table[v] for v in g.top_cycle))
    return maps


def verify_dagger(m: int, budget: int | None = None) -> tuple[bool, set]:
    if m > 4:
        raise GraphError("verify_dagger supports m <= 4")
    maps = dagger_maps(m, budget)
    rotations = {tuple((i + r) % m for i in range(m)) for r in range(m)}
    return maps == rotations, maps


def collapse_check(m: int, targets: Sequence[Digraph], plus: bool = False,
                   budget: int | None = None) -> tuple[bool, tuple | None]:
    """Whether every homomorphism from the gadget to a target that sends the
    bottom cycle to one vertex is constant.  Returns (verdict, counterexample)
    where the counterexample is (target index, mapping)."""
    g = build_cyl(m, plus)
    for idx, target in enumerate(targets):
        for z in range(target.n):
            c = HomConstraints(pinned={v: z for v in g.bottom_cycle})
            for hom in enumerate_homs(g.graph, target, c, budget):
                if not hom.is_constant():
                    return False, (idx, hom)
    return True, None


def reflexive_cycle_core(m: int) -> Digraph:
    return reflexive_directed_cycle(m)


def extension_orientation(code: int, core_size: int = 3, n: int = 6) -> Digraph:
    """The tournament on ``n`` vertices with DC*_core on the first ids and the
    remaining pairs (u < v, sorted) oriented by the bits of ``code``, most
    significant bit first; a set bit means v -> u."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if not (u < core_size and v < core_size)]
    edges = [(i, (i + 1) % core_size) for i in range(core_size)]
    for k, (u, v) in enumerate(pairs):
        bit = (code >> (len(pairs) - 1 - k)) & 1
        edges.append((v, u) if bit else (u, v))
    return make_digraph(n, edges, reflexive=True)


def full_spill_nonretract_search(n: int = 6, core_size: int = 3, budget: int | None = None) -> list[int]:
    """Codes of all orientations (see ``extension_orientation``) in which the
    fixed cycle has full spill but is not a retract, in increasing order."""
    from .morphisms import retraction_to

    free_pairs = n * (n - 1) // 2 - core_size * (core_size - 1) // 2
    core = list(range(core_size))
    found = []
    for code in range(1 << free_pairs):
        h = extension_orientation(code, core_size, n)
        if retraction_to(h, core, budget) is not None:
            continue
        if spill(h, core, core, budget=budget).full:
            found.append(code)
    return found
