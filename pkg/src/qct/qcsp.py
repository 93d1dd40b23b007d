"""Prenex sentences over the edge relation: model, text format, equality
elimination, and the exact game-tree evaluator.

Text grammar::

    A x E y E z : edge(x,y) eq(y,z) in(z,{0,2})   # comment

``F name`` declares a free variable (used by canonical queries).  An
``in(v,{...})`` atom is a unary conjunct: the value of ``v`` must lie in the
set.  For an existential variable that is the same as relativising its
quantifier; for a universal one it makes the sentence false unless the set
covers the template.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field

from . import config
from .errors import BudgetExceeded, QctError, SentenceSyntaxError
from .graph import Digraph

FORALL = "A"
EXISTS = "E"


@dataclass(frozen=True)
class Atom:
    kind: str  # "edge" or "eq"
    a: str
    b: str

    def __str__(self):
        return f"{self.kind}({self.a},{self.b})"


@dataclass(frozen=True)
class QcspSentence:
    prefix: tuple  # ((quantifier, name), ...)
    atoms: tuple = ()
    domains: dict = field(default_factory=dict, compare=False, hash=False)
    free: tuple = ()

    def __post_init__(self):
        names = [v for _, v in self.prefix] + list(self.free)
        if len(set(names)) != len(names):
            raise QctError("variable names must be unique")
        declared = set(names)
        for atom in self.atoms:
            for v in (atom.a, atom.b):
                if v not in declared:
                    raise QctError(f"undeclared variable {v}")
        for v in self.domains:
            if v not in declared:
                raise QctError(f"undeclared variable {v}")
        object.__setattr__(self, "domains", {v: frozenset(s) for v, s in self.domains.items()})

    @property
    def variables(self) -> list[str]:
        return list(self.free) + [v for _, v in self.prefix]

    def quantifier(self, name: str) -> str | None:
        for q, v in self.prefix:
            if v == name:
                return q
        return None

    def universals(self) -> list[str]:
        return [v for q, v in self.prefix if q == FORALL]

    def has_equality(self) -> bool:
        return any(a.kind == "eq" for a in self.atoms)

    def normalized(self) -> "QcspSentence":
        atoms = tuple(sorted(set(self.atoms), key=lambda a: (a.kind, a.a, a.b)))
        return QcspSentence(self.prefix, atoms, self.domains, self.free)

    def __eq__(self, other):
        if not isinstance(other, QcspSentence):
            return NotImplemented
        return (self.prefix, self.atoms, self.free, self.domains) == (
            other.prefix, other.atoms, other.free, other.domains)

    def __hash__(self):
        return hash((self.prefix, self.atoms, self.free))

    def to_json(self) -> dict:
        return {
            "free": list(self.free),
            "prefix": [[q, v] for q, v in self.prefix],
            "atoms": [[a.kind, a.a, a.b] for a in self.atoms],
            "domains": {v: sorted(s) for v, s in sorted(self.domains.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "QcspSentence":
        return cls(
            prefix=tuple((q, v) for q, v in data["prefix"]),
            atoms=tuple(Atom(k, a, b) for k, a, b in data.get("atoms", [])),
            domains={v: frozenset(s) for v, s in data.get("domains", {}).items()},
            free=tuple(data.get("free", [])),
        )


class _ConstantFalse:
    """Result of equality elimination when the sentence is false outright."""

    def __repr__(self):
        return "ConstantFalse"

    def __bool__(self):
        return False


ConstantFalse = _ConstantFalse()


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<atom>(edge|eq|in)\()|(?P<word>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<num>\d+)|(?P<punct>[(),:{}])"
)


def _tokens(text: str):
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SentenceSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind not in ("ws", "comment"):
            yield kind, value, line, col
        for i, ch in enumerate(value):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()


def parse_sentence(text: str) -> QcspSentence:
    toks = list(_tokens(text))
    i = 0

    def err(msg, tok=None):
        tok = tok or (toks[i] if i < len(toks) else (None, None, None, None))
        return SentenceSyntaxError(msg, tok[2], tok[3])

    def expect(value):
        nonlocal i
        if i >= len(toks) or toks[i][1] != value:
            raise err(f"expected {value!r}")
        i += 1

    def name():
        nonlocal i
        if i >= len(toks) or toks[i][0] != "word":
            raise err("expected a variable name")
        i += 1
        return toks[i - 1][1]

    prefix, free = [], []
    while i < len(toks) and toks[i][1] != ":":
        q = toks[i]
        if q[1] not in ("A", "E", "F"):
            raise err(f"expected quantifier A, E or F, got {q[1]!r}", q)
        i += 1
        v = name()
        (free if q[1] == "F" else prefix).append((q[1], v))
    if i < len(toks):
        expect(":")
    atoms, domains = [], {}
    declared = {v for _, v in prefix} | {v for _, v in free}
    while i < len(toks):
        tok = toks[i]
        if tok[0] != "atom":
            raise err(f"expected an atom, got {tok[1]!r}", tok)
        kind = tok[1][:-1]
        i += 1
        first_tok = toks[i] if i < len(toks) else tok
        a = name()
        if a not in declared:
            raise err(f"undeclared variable {a}", first_tok)
        expect(",")
        if kind == "in":
            expect("{")
            values = []
            while i < len(toks) and toks[i][1] != "}":
                t = toks[i]
                if t[0] == "num":
                    values.append(int(t[1]))
                elif t[0] == "word" and re.fullmatch(r"v\d+", t[1]):
                    values.append(int(t[1][1:]))
                else:
                    raise err(f"expected a vertex id, got {t[1]!r}", t)
                i += 1
                if i < len(toks) and toks[i][1] == ",":
                    i += 1
            expect("}")
            domains[a] = (domains[a] & frozenset(values)) if a in domains else frozenset(values)
        else:
            second_tok = toks[i] if i < len(toks) else tok
            b = name()
            if b not in declared:
                raise err(f"undeclared variable {b}", second_tok)
            atoms.append(Atom(kind, a, b))
        expect(")")
    return QcspSentence(tuple(prefix), tuple(atoms), domains, tuple(v for _, v in free))


def serialize(s: QcspSentence) -> str:
    parts = [f"F {v}" for v in s.free] + [f"{q} {v}" for q, v in s.prefix]
    body = [str(a) for a in s.atoms]
    body += [f"in({v},{{{','.join(str(x) for x in sorted(d))}}})" for v, d in sorted(s.domains.items())]
    return " ".join(parts) + " : " + " ".join(body)


def load_sentence(text: str) -> QcspSentence:
    """Parse either the text grammar or its JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return QcspSentence.from_json(json.loads(text))
    return parse_sentence(text)


# ---------------------------------------------------------------- equality

def eliminate_equality(s: QcspSentence, template_size: int | None = None):
    """Remove eq atoms by substitution.  x = x is dropped.  For x = y the
    later-quantified variable is the inner one: if it is universal the
    sentence is false on every template with at least two vertices,
    otherwise it is replaced by the outer variable.  Pass ``template_size=1``
    for a one-vertex template, where every equality holds and is merged."""
    position = {v: -1 for v in s.free}
    position.update({v: i for i, (_, v) in enumerate(s.prefix)})
    quant = {v: q for q, v in s.prefix}
    parent = {v: v for v in position}
    kept = []

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for atom in s.atoms:
        if atom.kind != "eq":
            continue
        x, y = find(atom.a), find(atom.b)
        if x == y:
            continue
        outer, inner = (x, y) if position[x] < position[y] else (y, x)
        if inner not in quant:
            kept.append(Atom("eq", x, y))  # both free: left for the solver
            continue
        if quant[inner] != EXISTS and template_size != 1:
            return ConstantFalse
        parent[inner] = outer
    domains = {}
    for v, d in s.domains.items():
        r = find(v)
        domains[r] = domains[r] & d if r in domains else d
    atoms = []
    seen = set()
    for atom in s.atoms:
        if atom.kind == "eq":
            continue
        new = Atom("edge", find(atom.a), find(atom.b))
        if new not in seen:
            seen.add(new)
            atoms.append(new)
    atoms += [Atom("eq", find(a.a), find(a.b)) for a in kept]
    prefix = tuple((q, v) for q, v in s.prefix if find(v) == v)
    return QcspSentence(prefix, tuple(atoms), domains, s.free)


# ---------------------------------------------------------------- game solver

def _compile(s: QcspSentence):
    """Per prefix position: the variable, its quantifier, its allowed values
    mask (or None) and the atoms that become checkable once it is set."""
    order = list(s.free) + [v for _, v in s.prefix]
    pos = {v: i for i, v in enumerate(order)}
    checks = [[] for _ in order]
    for atom in s.atoms:
        i, j = pos[atom.a], pos[atom.b]
        checks[max(i, j)].append((i, j, atom.kind == "eq"))
    return order, pos, checks


def solve_game(s: QcspSentence, t: Digraph, budget: int | None = None,
               assignment: dict | None = None) -> bool:
    """Exact evaluation of the sentence on ``t``.  Universal quantifiers are a
    conjunction over vertices and existential ones a disjunction; each atom is
    checked as soon as both of its variables are set.  Free variables take
    their values from ``assignment``.  Remaining eq atoms are checked as
    plain equality (needed for free variables, which cannot be substituted)."""
    budget = config.game_node_budget() if budget is None else budget
    order, pos, checks = _compile(s)
    quant = [None] * len(s.free) + [q for q, _ in s.prefix]
    allowed = []
    for v in order:
        d = s.domains.get(v)
        allowed.append(range(t.n) if d is None else [x for x in range(t.n) if x in d])
    values = [0] * len(order)
    nfree = len(s.free)
    assignment = assignment or {}
    for k, v in enumerate(s.free):
        x = assignment[v]
        if s.domains.get(v) is not None and x not in s.domains[v]:
            return False
        values[k] = x
    has_edge = t.has_edge
    nodes = 0
    full = t.n
    depth_total = len(order)

    def ok_at(k):
        for i, j, eq in checks[k]:
            if eq:
                if values[i] != values[j]:
                    return False
            elif not has_edge(values[i], values[j]):
                return False
        return True

    for k in range(nfree):
        if not ok_at(k):
            return False

    def rec(k):
        nonlocal nodes
        if k == depth_total:
            return True
        if quant[k] == FORALL:
            if len(allowed[k]) < full:
                return False
            for x in allowed[k]:
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(f"game search exceeded {budget} nodes")
                values[k] = x
                if not ok_at(k) or not rec(k + 1):
                    return False
            return True
        for x in allowed[k]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"game search exceeded {budget} nodes")
            values[k] = x
            if ok_at(k) and rec(k + 1):
                return True
        return False

    return rec(nfree)


# ---------------------------------------------------------------- random sentences

def random_sentence(rng: random.Random, n_vars: int, n_atoms: int, eq_prob: float = 0.0) -> QcspSentence:
    """Uniform quantifier per variable; atoms drawn uniformly over ordered
    variable pairs (repeats allowed), each an eq atom with ``eq_prob``."""
    names = [f"v{i}" for i in range(n_vars)]
    prefix = tuple((rng.choice((FORALL, EXISTS)), v) for v in names)
    atoms = []
    for _ in range(n_atoms):
        a, b = rng.choice(names), rng.choice(names)
        kind = "eq" if rng.random() < eq_prob else "edge"
        atoms.append(Atom(kind, a, b))
    return QcspSentence(prefix, tuple(atoms))
