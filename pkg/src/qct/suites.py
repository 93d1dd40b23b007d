"""Executable verification suites behind ``qct verify``.

Each check enumerates its inputs exhaustively (or from a seeded generator)
and compares two independent computations.  A failing check keeps the first
counterexample as an inline reproducer.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import gadgets, graph as G, morphisms as M, qcsp, reductions as R, tractable as T
from .errors import BudgetExceeded, CapExceeded


@dataclass
class Check:
    name: str
    status: str = "pass"  # pass | fail | skipped-budget
    counters: dict = field(default_factory=dict)
    reproducer: object = None
    detail: object = None

    def fail(self, reproducer):
        if self.status != "fail":
            self.status = "fail"
            self.reproducer = reproducer

    def bump(self, key: str, by: int = 1):
        self.counters[key] = self.counters.get(key, 0) + by

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "counters": self.counters}
        if self.reproducer is not None:
            out["reproducer"] = self.reproducer
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    max_n: int
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "max_n": self.max_n, "passed": self.passed,
               "checks": [c.to_json() for c in self.checks]}
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def _edges(d):
    return [list(e) for e in d.sorted_edges()]


def _run(check: Check, fn):
    try:
        fn(check)
    except BudgetExceeded as exc:
        check.status = "skipped-budget"
        check.detail = str(exc)
    return check


def _tournaments(lo: int, hi: int):
    for n in range(lo, hi + 1):
        yield from G.enumerate_tournaments(n)


# ---------------------------------------------------------------- lemma suite

def check_chains(c: Check, max_n: int):
    for t in _tournaments(1, max_n):
        ch = G.scc_chain(t)
        seen = sorted(v for comp in ch.components for v in comp)
        ok = seen == list(range(t.n))
        ok &= all(G.is_strongly_connected(G.induced(t, list(comp))[0]) for comp in ch.components)
        ok &= all(ch.component_of[u] <= ch.component_of[v] for u, v in t.edges)
        c.bump("tournaments")
        if not ok:
            c.fail({"edges": _edges(t)})


def check_hamilton(c: Check, max_n: int):
    for t in _tournaments(1, max_n):
        if not G.is_strongly_connected(t):
            continue
        c.bump("strong")
        if not G.is_hamilton_cycle(t, G.hamilton_cycle(t)):
            c.fail({"edges": _edges(t)})


def check_counts(c: Check, max_n: int):
    expected = [1, 1, 2, 4, 12, 56, 456]
    for n in range(1, min(max_n, 7) + 1):
        got = sum(1 for _ in G.enumerate_tournaments(n))
        c.counters[str(n)] = got
        if got != expected[n - 1]:
            c.fail({"n": n, "got": got, "expected": expected[n - 1]})


def _arities(n: int) -> list[int]:
    return [1, 2, 3] if n <= 3 else [1, 2]


def check_uniformly_constant(c: Check, max_n: int):
    """A polymorphism constant on the diagonal is constant everywhere."""
    for t in _tournaments(1, min(max_n, 4)):
        for k in _arities(t.n):
            diag = [G.encode_tuple([t.n] * k, [x] * k) for x in range(t.n)]
            for z in range(t.n):
                pins = {d: z for d in diag}
                for f in M.polymorphisms(t, k, M.HomConstraints(pinned=pins)):
                    c.bump("polymorphisms")
                    if not f.is_constant():
                        c.fail({"edges": _edges(t), "k": k, "f": f.to_json()})
                        return


def check_component_preservation(c: Check, max_n: int):
    """Surjective polymorphisms map each component's power into that component."""
    for t in _tournaments(1, min(max_n, 4)):
        ch = G.scc_chain(t)
        for k in _arities(t.n):
            sizes = [t.n] * k
            inside = [(x, ch.component_of[G.decode_tuple(sizes, x)[0]]) for x in range(t.n ** k)
                      if len({ch.component_of[v] for v in G.decode_tuple(sizes, x)}) == 1]
            for f in M.polymorphisms(t, k, M.HomConstraints(surjective=True)):
                c.bump("surjective")
                if any(ch.component_of[f.table[x]] != comp for x, comp in inside):
                    c.bump("violations")
                    c.fail({"edges": _edges(t), "k": k, "f": f.to_json()})


def check_essentially_unary(c: Check, max_n: int):
    """Binary polymorphisms of endo-trivial tournaments on 3..4 vertices."""
    for t in _tournaments(3, min(max_n, 4)):
        if not M.endomorphism_class(t).endo_trivial:
            continue
        c.bump("endo_trivial")
        endos = list(M.enumerate_homs(t, t))
        for f in M.polymorphisms(t, 2):
            c.bump("polymorphisms")
            if not M.classify_polymorphism(f, t, 2, endos=endos).essentially_unary:
                c.fail({"edges": _edges(t), "f": f.to_json()})
                return


def check_endo_retract(c: Check, max_n: int):
    for t in _tournaments(1, min(max_n, 5)):
        rep = M.endomorphism_class(t)
        c.bump("tournaments")
        if rep.endo_trivial != rep.retract_trivial:
            c.fail({"edges": _edges(t), "report": rep.to_json()})


def check_double_edge(c: Check, max_n: int):
    for t in _tournaments(3, min(max_n, 5)):
        if not M.endomorphism_class(t).endo_trivial:
            continue
        for size in range(2, t.n):
            for img in M.edge_surjective_images(t, size):
                c.bump("images")
                if not img.has_double_edge:
                    c.fail({"edges": _edges(t), "map": img.mapping.to_json()})
                    return


def lemmas_suite(max_n: int = 4, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("lemmas", seed, max_n)
    for name, fn in [
        ("scc-chain", check_chains), ("hamilton-cycle", check_hamilton), ("class-counts", check_counts),
        ("uniformly-constant", check_uniformly_constant),
        ("component-preservation", check_component_preservation),
        ("essentially-unary", check_essentially_unary), ("endo-iff-retract-trivial", check_endo_retract),
        ("double-edge-images", check_double_edge),
    ]:
        rep.checks.append(_run(Check(name), lambda c, fn=fn: fn(c, max_n)))
    return rep


# ---------------------------------------------------------------- spill suite

def dc3_copies(t):
    """(core, cycle) for every embedded directed 3-cycle, every rotation."""
    dc3 = G.reflexive_directed_cycle(3)
    for e in M.iso_embeddings(dc3, t):
        yield tuple(sorted(e.table)), tuple(e.table)


def check_dagger(c: Check, max_n: int):
    for m in (3, 4):
        ok, maps = gadgets.verify_dagger(m)
        c.counters[f"m{m}"] = len(maps)
        if not ok:
            c.fail({"m": m, "maps": sorted(maps)})


def check_collapse(c: Check, max_n: int):
    targets = list(_tournaments(1, min(max_n, 4)))
    ok, cex = gadgets.collapse_check(3, targets)
    c.counters["targets"] = len(targets)
    if not ok:
        c.fail({"target": _edges(targets[cex[0]]), "map": cex[1].to_json()})


def check_retract_spill(c: Check, max_n: int):
    """Full spill when the host retracts to the cycle; the core always spills to itself."""
    for t in _tournaments(3, min(max_n, 5)):
        for core, cycle in dc3_copies(t):
            rep = gadgets.spill(t, core, cycle)
            c.bump("pairs")
            if any(not set(core) <= ys for ys in rep.per_top_vertex.values()):
                c.fail({"edges": _edges(t), "core": list(core), "cycle": list(cycle), "why": "core not in spill"})
            if M.retraction_to(t, core) is not None:
                c.bump("retracting")
                if not rep.full:
                    c.fail({"edges": _edges(t), "core": list(core), "cycle": list(cycle), "why": "spill not full"})


def check_plus_extension(c: Check, max_n: int):
    """Full Spill+ on an initial 3-cycle stays full after appending sink-side vertices."""
    for t in _tournaments(4, min(max(max_n, 4), 5)):
        ch = G.scc_chain(t)
        if len(ch.initial) != 3:
            continue
        core = tuple(ch.initial)
        cycle = G.hamilton_cycle(G.induced(t, list(core))[0])
        cycle = tuple(core[i] for i in cycle)
        inner, _ = G.induced(t, list(core))
        local = tuple(core.index(v) for v in cycle)
        if not gadgets.spill(inner, range(3), local, plus=True).full:
            continue
        c.bump("hosts")
        if not gadgets.spill(t, core, cycle, plus=True).full:
            c.fail({"edges": _edges(t), "core": list(core)})


def check_figure4(c: Check, max_n: int):
    found = gadgets.full_spill_nonretract_search()
    c.counters["witnesses"] = len(found)
    c.counters["orientations"] = 1 << 12
    if not found:
        c.fail({"why": "no witness"})
        return
    w = gadgets.extension_orientation(found[0])
    c.detail = {"code": found[0], "edges": _edges(w)}


def spill_suite(max_n: int = 5, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("spill", seed, max_n)
    for name, fn in [("dagger", check_dagger), ("collapse", check_collapse),
                     ("retract-spill-and-core", check_retract_spill), ("plus-extension", check_plus_extension),
                     ("figure4-witness", check_figure4)]:
        rep.checks.append(_run(Check(name), lambda c, fn=fn: fn(c, max_n)))
    return rep


# ---------------------------------------------------------------- reduction suite

def sample_configs() -> dict:
    """One small build per kind, on templates with at most 4 vertices."""
    dc3 = G.check_reflexive_tournament(G.reflexive_directed_cycle(3))
    s4 = next(t for t in G.enumerate_tournaments(4) if G.is_strongly_connected(t))
    s4_core = next(core for core, _ in dc3_copies(s4))
    plus4 = G.chain_tournament([dc3, G.transitive_tournament(1)])

    def with_extra(h, marked_set):
        # h plus one extra vertex hanging off the marked copy
        return G.make_digraph(h.n + 1, list(h.edges) + [(marked_set[0], h.n)], reflexive=True)

    dc3_g = with_extra(dc3, [0, 1, 2])
    s4_sub, _ = G.induced(s4, list(s4_core))
    return {
        "BaseI": R.ReductionConfig("BaseI", dc3, [(0, 1, 2), (0, 1, 2)], dc3_g, [0, 1, 2],
                                   [(0, 1, 2), (1, 2, 0)]),
        "BaseII": R.ReductionConfig("BaseII", dc3, [(0, 1, 2), (0, 1, 2)], dc3_g, [0, 1, 2],
                                    [(0, 1, 2), (2, 2, 0)]),
        "GeneralI": R.ReductionConfig("GeneralI", s4, [s4_core, tuple(range(4)), tuple(range(4))],
                                      with_extra(s4, [0]), [0, 1, 2, 3], [(0, 1, 2, 3), (3, 2, 1, 0)]),
        "GeneralII": R.ReductionConfig("GeneralII", s4, [s4_core, tuple(range(4)), tuple(range(4))],
                                       with_extra(s4, [0]), [0, 1, 2, 3], [(0, 1, 2, 3)]),
        "A-I": R.ReductionConfig("A-I", plus4, [(0, 1, 2), (0, 1, 2)], dc3_g, [0, 1, 2],
                                 [(0, 1, 2, 0), (1, 2, 0, 0)]),
        "A-II": R.ReductionConfig("A-II", plus4, [(0, 1, 2), (0, 1, 2)], dc3_g, [0, 1, 2],
                                  [(0, 1, 2, 0), (1, 2, 0, 0)]),
    }


def check_reduction_kind(c: Check, cfg):
    res = R.build_reduction(cfg)
    problems = R.reduction_problems(cfg, res)
    c.counters.update({"instance_size": res.stats.instance_size, "universals": res.stats.universal_count})
    c.detail = res.stats.to_json()
    if problems:
        c.fail({"config": cfg.to_json(), "problems": problems})


def reduction_suite(max_n: int = 4, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("reduction", seed, max_n)
    for kind, cfg in sample_configs().items():
        rep.checks.append(_run(Check(f"structure-{kind}"), lambda c, cfg=cfg: check_reduction_kind(c, cfg)))

    def containment(c):
        tt2 = G.transitive_tournament(2)
        for h2, want in [(tt2, True), (tt2.reverse(), True), (G.reflexive_directed_cycle(3), False)]:
            c.bump("pairs")
            if R.qcsp_containment(tt2, h2) != want:
                c.fail({"h2": _edges(h2), "expected": want})

    def closure(c):
        for t in _tournaments(1, min(max_n, 3)):
            rng = random.Random(seed + t.n)
            for _ in range(3):
                rel = sorted({(rng.randrange(t.n), rng.randrange(t.n)) for _ in range(rng.randint(1, 2))})
                cl = R.pp_closure(t, rel)
                c.bump("relations")
                try:
                    again = R.pp_closure(t, cl, cap=3 ** 6)
                except CapExceeded:
                    c.bump("reclose-over-cap")
                    again = cl if set(rel) <= set(cl) else None
                if not set(rel) <= set(cl) or sorted(again or []) != sorted(cl):
                    c.fail({"edges": _edges(t), "relation": rel})

    rep.checks.append(_run(Check("containment"), containment))
    rep.checks.append(_run(Check("closure-monotone-idempotent"), closure))
    return rep


# ---------------------------------------------------------------- solver suite

def random_sentences(seed: int, count: int, max_vars: int, max_atoms: int, eq_prob: float = 0.0):
    rng = random.Random(seed)
    for _ in range(count):
        yield qcsp.random_sentence(rng, rng.randint(1, max_vars), rng.randint(0, max_atoms), eq_prob)


def nl_templates(max_n: int):
    return [t for t in _tournaments(2, max_n) if T.classify(t).verdict == "NL"]


def solver_suite(max_n: int = 5, seed: int = 0, count: int = 200) -> SuiteReport:
    rep = SuiteReport("solver", seed, max_n)
    tt2 = G.transitive_tournament(2)

    def q2sat(c):
        for s in random_sentences(seed, 5 * count, 12, 14):
            c.bump("sentences")
            want = qcsp.solve_game(s, tt2)
            c.bump("true" if want else "false")
            if T.solve_q2sat(T.tt2_implication_form(s)) != want:
                c.fail(qcsp.serialize(s))

    def theorem(c):
        for t in nl_templates(max_n):
            c.bump("templates")
            for s in random_sentences(seed + t.n, count, 7, 10):
                c.bump("sentences")
                a, b = qcsp.solve_game(s, t), qcsp.solve_game(s, tt2)
                if not a == b == T.solve_q2sat(T.tt2_implication_form(s)):
                    c.fail({"template": _edges(t), "sentence": qcsp.serialize(s)})

    def equality(c):
        temps = list(_tournaments(1, min(max_n, 4)))
        for i, s in enumerate(random_sentences(seed + 7, 300, 8, 8, eq_prob=0.3)):
            t = temps[i % len(temps)]
            c.bump("sentences")
            red = qcsp.eliminate_equality(s, t.n)
            got = False if red is qcsp.ConstantFalse else qcsp.solve_game(red, t)
            if got != qcsp.solve_game(s, t):
                c.fail({"template": _edges(t), "sentence": qcsp.serialize(s)})

    def surjection(c):
        for t in nl_templates(max(max_n, 4)):
            if t.n < 4:
                continue
            c.bump("templates")
            f = T.sur_hom_tt2_power(t)
            src = G.power(tt2, t.n - 2)
            if not M.is_homomorphism(src, t, f.table) or len(f.image()) != t.n:
                c.fail({"template": _edges(t)})

    def purity(c):
        seen = {}
        for t in _tournaments(1, max_n):
            cl = T.classify(t)
            c.bump("tournaments")
            if seen.setdefault(cl.chain_endpoint_sizes, cl.verdict) != cl.verdict:
                c.fail({"template": _edges(t)})

    def monotone(c):
        for s in random_sentences(seed + 3, count, 8, 8):
            before = qcsp.solve_game(s, tt2)
            for i, (q, v) in enumerate(s.prefix):
                if q != qcsp.EXISTS:
                    continue
                flipped = s.prefix[:i] + ((qcsp.FORALL, v),) + s.prefix[i + 1:]
                c.bump("flips")
                if qcsp.solve_game(qcsp.QcspSentence(flipped, s.atoms), tt2) and not before:
                    c.fail(qcsp.serialize(s))

    for name, fn in [("q2sat-vs-game", q2sat), ("nl-templates-agree", theorem),
                     ("equality-elimination", equality), ("unit-tuple-surjection", surjection),
                     ("classifier-purity", purity), ("monotone-prefix", monotone)]:
        rep.checks.append(_run(Check(name), fn))
    return rep


SUITES = {"lemmas": lemmas_suite, "spill": spill_suite, "reduction": reduction_suite, "solver": solver_suite}


def run_suite(name: str, max_n: int | None = None, seed: int = 0) -> SuiteReport:
    fn = SUITES[name]
    start = time.perf_counter()
    rep = fn(seed=seed) if max_n is None else fn(max_n=max_n, seed=seed)
    rep.elapsed = time.perf_counter() - start
    return rep
