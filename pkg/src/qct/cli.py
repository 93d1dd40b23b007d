"""``qct`` command line.

Reports go to stdout as JSON and a one-line summary goes to stderr.  Exit
codes: 0 success, 1 check failure, 2 usage or parse error, 3 engine refusal,
4 budget or size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config
from .certificate import find_hardness_certificate, verify_certificate
from .errors import BudgetExceeded, CapExceeded, EngineRefused, PaperCheckFailure, QctError
from .gadgets import build_cyl, spill
from .graph import check_reflexive_tournament, enumerate_tournaments, hamilton_cycle, induced
from .io import graph_to_json, load_graph, write_graph
from .qcsp import load_sentence, serialize
from .reductions import ReductionConfig, build_reduction, reduction_problems
from .suites import SUITES, run_suite
from .tractable import classify, solve

OK, CHECK_FAILED, USAGE, REFUSED, BUDGET = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"qct: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _emit(data, summary: str | None = None):
    print(json.dumps(data, sort_keys=True))
    if summary:
        print(summary, file=sys.stderr)


def _ids(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex ids, got {text!r}") from None


def _template(path):
    return check_reflexive_tournament(load_graph(path).graph)


# ---------------------------------------------------------------- commands

def cmd_classify(args) -> int:
    c = classify(_template(args.template))
    _emit(c.to_json(), f"verdict: {c.verdict}")
    return OK


def cmd_solve(args) -> int:
    t = _template(args.template)
    s = load_sentence(Path(args.sentence).read_text())
    assignment = {}
    for item in args.assign or []:
        name, _, value = item.partition("=")
        if not value.isdigit():
            raise QctError(f"--assign expects name=vertex, got {item!r}")
        assignment[name] = int(value)
    missing = [v for v in s.free if v not in assignment]
    if missing:
        raise QctError(f"free variables need --assign: {', '.join(missing)}")
    ans = solve(s, t, engine=args.engine, budget=args.budget, assignment=assignment)
    _emit(ans.to_json(), f"answer: {ans.answer} ({ans.engine})")
    return BUDGET if ans.answer == "budget" else OK


def cmd_spill(args) -> int:
    h = load_graph(args.template).graph
    cycle = args.cycle
    if cycle is None:
        sub, ids = induced(h, sorted(args.core))
        cycle = [ids[i] for i in hamilton_cycle(check_reflexive_tournament(sub))]
    rep = spill(h, args.core, cycle, plus=args.plus, budget=args.budget)
    out = rep.to_json()
    out["cycle"] = list(cycle)
    out["plus"] = args.plus
    _emit(out, f"spill union {sorted(rep.union)}; full: {rep.full}")
    return OK


def cmd_gadget(args) -> int:
    g = build_cyl(args.m, plus=args.plus)
    meta = g.meta()
    if args.output:
        write_graph(args.output, g.graph, meta)
    out = {"n": g.graph.n, "edge_count": len(g.graph.edges), "meta": meta}
    if not args.output:
        out["graph"] = graph_to_json(g.graph)
    _emit(out, f"{g.graph.name}: {g.graph.n} vertices, {len(g.graph.edges)} edges")
    return OK


def cmd_reduce(args) -> int:
    try:
        data = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise QctError(f"config is not valid JSON: {exc}") from None
    cfg = ReductionConfig.from_json(data)
    res = build_reduction(cfg)
    problems = reduction_problems(cfg, res)
    text = serialize(res.sentence)
    out = {"stats": res.stats.to_json(), "sentence": text, "problems": problems}
    if args.output:
        write_graph(args.output, res.instance, {"stats": res.stats.to_json(), "sentence": text,
                                                **{k: v for k, v in res.meta.items() if k != "gadgets"}})
        Path(str(args.output) + ".sentence").write_text(text + "\n")
    else:
        out["instance"] = graph_to_json(res.instance)
    st = res.stats
    _emit(out, f"{st.kind}: {st.instance_size} vertices, {st.universal_count} universal variables, "
               f"{len(problems)} problems")
    return CHECK_FAILED if problems else OK


def cmd_certify(args) -> int:
    t = _template(args.template)
    if classify(t).verdict == "NL":
        raise EngineRefused("template is classified NL; there is no hardness route to certify")
    cert = find_hardness_certificate(t, budget=args.budget, max_n=args.max_n, core=args.core)
    problems = verify_certificate(t, cert, budget=args.budget)
    out = cert.to_json()
    out["problems"] = problems
    _emit(out, f"route {cert.route}; {len(cert.facts)} facts; {len(problems)} problems")
    return CHECK_FAILED if problems else OK


def cmd_enum(args) -> int:
    ts = list(enumerate_tournaments(args.n))
    _emit({"n": args.n, "count": len(ts), "tournaments": [[list(e) for e in t.sorted_edges()] for t in ts]},
          f"{len(ts)} reflexive tournaments on {args.n} vertices up to isomorphism")
    return OK


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, max_n=args.max_n, seed=args.seed)
    _emit(rep.to_json(timing=args.timing))
    for c in rep.checks:
        print(f"{c.status:>14}  {c.name}  {json.dumps(c.counters, sort_keys=True)}", file=sys.stderr)
    if args.suite == "spill":
        for c in rep.checks:
            if c.name.startswith("figure4") and c.detail:
                print(f"figure-4 witness edges: {c.detail.get('edges')}", file=sys.stderr)
    print(f"suite {rep.suite}: {'pass' if rep.passed else 'FAIL'}", file=sys.stderr)
    return OK if rep.passed else CHECK_FAILED


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qct", description="QCSP tools for reflexive tournaments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="NL / NP-hard verdict for a template")
    c.add_argument("template")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("solve", help="decide a sentence on a template")
    c.add_argument("template")
    c.add_argument("sentence", help="sentence file (text grammar or JSON)")
    c.add_argument("--engine", choices=["auto", "game", "q2sat"], default="auto")
    c.add_argument("--budget", type=int, default=None,
                   help="game node budget (default: QCT_NODE_BUDGET or %d)" % config.GAME_NODE_BUDGET)
    c.add_argument("--assign", action="append", metavar="NAME=V", help="value of a free variable")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("spill", help="spill sets of a core inside a host")
    c.add_argument("template")
    c.add_argument("--core", type=_ids, required=True, help="comma-separated core vertex ids")
    c.add_argument("--cycle", type=_ids, default=None, help="Hamilton cycle of the core (default: constructive)")
    c.add_argument("--plus", action="store_true", help="use the pendant variant of the gadget")
    c.add_argument("--budget", type=int, default=None)
    c.set_defaults(func=cmd_spill)

    c = sub.add_parser("gadget", help="write a cylinder gadget")
    c.add_argument("kind", choices=["cyl"])
    c.add_argument("-m", type=int, required=True)
    c.add_argument("--plus", action="store_true")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(func=cmd_gadget)

    c = sub.add_parser("reduce", help="build a reduction from a JSON config")
    c.add_argument("config")
    c.add_argument("-o", "--output", default=None, help="instance path; a .sentence and .meta.json are written beside it")
    c.set_defaults(func=cmd_reduce)

    c = sub.add_parser("certify", help="find and re-verify a hardness route")
    c.add_argument("template")
    c.add_argument("--core", type=_ids, default=None, help="override the level-0 core")
    c.add_argument("--max-n", type=int, default=7)
    c.add_argument("--budget", type=int, default=None)
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("enum", help="list reflexive tournaments up to isomorphism")
    c.add_argument("-n", type=int, required=True)
    c.set_defaults(func=cmd_enum)

    c = sub.add_parser("verify", help="run a verification suite")
    c.add_argument("--suite", choices=sorted(SUITES), required=True)
    c.add_argument("--max-n", type=int, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-identity)")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineRefused as exc:
        print(f"qct: refused: {exc}", file=sys.stderr)
        return REFUSED
    except (BudgetExceeded, CapExceeded) as exc:
        print(f"qct: limit: {exc}", file=sys.stderr)
        return BUDGET
    except PaperCheckFailure as exc:
        print(f"qct: check failed: {exc}", file=sys.stderr)
        return CHECK_FAILED
    except (QctError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"qct: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
