"""Quivers, paths, potentials and the relation sets derived from them.

Composition is left to right throughout: the path ``a*b`` traverses ``a``
first, so ``target(a) == source(b)``.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .errors import NonBinomialConsequence, ParseError


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (id, source, target)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex id")
        seen = set()
        for a, s, t in self.arrows:
            if a in seen:
                raise ValueError(f"duplicate arrow id {a!r}")
            seen.add(a)
            if s not in vs or t not in vs:
                raise ValueError(f"arrow {a!r} references an unknown vertex")
        object.__setattr__(self, "_ends", {a: (s, t) for a, s, t in self.arrows})

    @classmethod
    def build(cls, vertices, arrows) -> "Quiver":
        return cls(tuple(str(v) for v in vertices), tuple((str(a), str(s), str(t)) for a, s, t in arrows))

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a for a, _, _ in self.arrows)

    def source(self, a: str) -> str:
        return self._ends[a][0]

    def target(self, a: str) -> str:
        return self._ends[a][1]

    def has_arrow(self, a: str) -> bool:
        return a in self._ends

    def arrows_from(self, v: str) -> list[str]:
        return [a for a, s, _ in self.arrows if s == v]

    def arrows_to(self, v: str) -> list[str]:
        return [a for a, _, t in self.arrows if t == v]

    def without_vertices(self, drop) -> "Quiver":
        drop = set(drop)
        return Quiver(
            tuple(v for v in self.vertices if v not in drop),
            tuple(x for x in self.arrows if x[1] not in drop and x[2] not in drop),
        )

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True, order=False)
class Path:
    """A path in a quiver; ``arrows == ()`` means the constant path at ``source``."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def trivial(cls, v: str) -> "Path":
        return cls(v, v, ())

    @classmethod
    def of(cls, q: Quiver, arrows) -> "Path":
        arrows = tuple(arrows)
        if not arrows:
            raise ValueError("use Path.trivial for constant paths")
        for a in arrows:
            if not q.has_arrow(a):
                raise ValueError(f"unknown arrow {a!r}")
        for a, b in zip(arrows, arrows[1:]):
            if q.target(a) != q.source(b):
                raise ValueError(f"arrows {a!r} and {b!r} do not compose")
        return cls(q.source(arrows[0]), q.target(arrows[-1]), arrows)

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def key(self):
        """Length-then-lexicographic sort key."""
        return (len(self.arrows), self.arrows, self.source)

    def vertices(self, q: Quiver) -> list[str]:
        if not self.arrows:
            return [self.source]
        return [q.source(self.arrows[0])] + [q.target(a) for a in self.arrows]

    def __str__(self):
        return "*".join(self.arrows) if self.arrows else f"e_{self.source}"


def compose(p: Path, r: Path) -> Path | None:
    if p.target != r.source:
        return None
    return Path(p.source, r.target, p.arrows + r.arrows)


def canonical_rotation(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    return min(cycle[k:] + cycle[:k] for k in range(n))


@dataclass(frozen=True)
class Potential:
    terms: tuple[tuple[int, tuple[str, ...]], ...]  # (sign, cyclic arrow sequence)

    def __post_init__(self):
        seen = set()
        for sign, cyc in self.terms:
            if sign not in (1, -1):
                raise ValueError("potential signs must be +1 or -1")
            c = canonical_rotation(cyc)
            if c in seen:
                raise ValueError(f"cycle {'*'.join(cyc)} repeated up to rotation")
            seen.add(c)

    def check_cycles(self, q: Quiver) -> None:
        for _, cyc in self.terms:
            p = Path.of(q, cyc)
            if p.source != p.target:
                raise ValueError(f"{p} is not a cycle")

    def canonical(self) -> dict[tuple[str, ...], int]:
        return {canonical_rotation(c): s for s, c in self.terms}

    def restricted(self, q: Quiver) -> "Potential":
        """Keep only the cycles that survive in the (sub)quiver ``q``."""
        return Potential(tuple((s, c) for s, c in self.terms if all(q.has_arrow(a) for a in c)))

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths declared to be zero."""

    terms: tuple[tuple[Fraction, Path], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty relation")
        s, t = self.terms[0][1].source, self.terms[0][1].target
        for c, p in self.terms:
            if p.source != s or p.target != t:
                raise ValueError("relation terms are not parallel")
            if p.is_trivial:
                raise ValueError("relations may not contain constant paths")
            if c == 0:
                raise ValueError("zero coefficient in relation")

    @classmethod
    def monomial(cls, p: Path) -> "Relation":
        return cls(((Fraction(1), p),))

    @classmethod
    def binomial(cls, u: Path, v: Path, sign: int = -1) -> "Relation":
        """``u + sign*v``; the default is the commutativity relation u = v."""
        return cls(((Fraction(1), u), (Fraction(sign), v)))

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __str__(self):
        out = []
        for k, (c, p) in enumerate(self.terms):
            if k == 0:
                out.append(("-" if c < 0 else "") + (f"{abs(c)}" if abs(c) != 1 else "") + str(p))
            else:
                out.append((" - " if c < 0 else " + ") + (f"{abs(c)}" if abs(c) != 1 else "") + str(p))
        return "".join(out)


@dataclass(frozen=True)
class RelationSet:
    relations: tuple[Relation, ...] = ()

    def check(self, q: Quiver) -> None:
        for r in self.relations:
            for _, p in r.terms:
                Path.of(q, p.arrows)

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)


class ParsedQuiver(NamedTuple):
    quiver: Quiver
    potential: Potential | None
    relations: RelationSet | None
    involution: dict | None  # {"pairs": [(v, w), ...], "fixed": [v, ...]}

    @property
    def presentation(self):
        return self.potential if self.potential is not None else self.relations


_ARROW = re.compile(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_CYCLE = re.compile(r"^cycle\s*([+-])\s*:\s*(.+)$")


def _parse_path_expr(expr: str, lineno: int, arrows: dict) -> list[str]:
    ids = [x.strip() for x in expr.split("*")]
    if not ids or any(not x for x in ids):
        raise ParseError(f"malformed path {expr!r}", lineno)
    for a in ids:
        if a not in arrows:
            raise ParseError(f"unknown arrow {a!r}", lineno)
    return ids


def parse_quiver(text: str) -> ParsedQuiver:
    """Parse the ``.qp`` text format (see README for the grammar)."""
    vertices: list[str] = []
    arrows: dict[str, tuple[str, str]] = {}
    arrow_order: list[str] = []
    cycles: list[tuple[int, list[str], int]] = []
    relations: list[tuple[list[tuple[int, list[str]]], int]] = []
    involution = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            for v in line[len("vertices:"):].split():
                if v in vertices:
                    raise ParseError(f"duplicate vertex {v!r}", lineno)
                vertices.append(v)
        elif line.startswith("arrow"):
            m = _ARROW.match(line)
            if not m:
                raise ParseError(f"malformed arrow line {raw!r}", lineno)
            a, s, t = m.groups()
            if a in arrows:
                raise ParseError(f"duplicate arrow {a!r}", lineno)
            for v in (s, t):
                if v not in vertices:
                    raise ParseError(f"unknown vertex {v!r}", lineno)
            arrows[a] = (s, t)
            arrow_order.append(a)
        elif line.startswith("cycle"):
            m = _CYCLE.match(line)
            if not m:
                raise ParseError(f"malformed cycle line {raw!r}", lineno)
            sign = 1 if m.group(1) == "+" else -1
            ids = m.group(2).replace("*", " ").split()
            for a in ids:
                if a not in arrows:
                    raise ParseError(f"unknown arrow {a!r}", lineno)
            cycles.append((sign, ids, lineno))
        elif line.startswith("relation"):
            body = line.split(":", 1)
            if len(body) != 2 or not body[1].strip():
                raise ParseError(f"malformed relation line {raw!r}", lineno)
            expr = body[1].strip()
            parts = re.split(r"\s+([+-])\s+", expr)
            terms = [(1, _parse_path_expr(parts[0], lineno, arrows))]
            for k in range(1, len(parts), 2):
                terms.append((1 if parts[k] == "+" else -1, _parse_path_expr(parts[k + 1], lineno, arrows)))
            relations.append((terms, lineno))
        elif line.startswith("involution:"):
            body = line[len("involution:"):].split()
            pairs, fixed, in_fix = [], [], False
            for tok in body:
                if tok == "fix":
                    in_fix = True
                elif in_fix:
                    fixed.append(tok)
                else:
                    if "<->" not in tok:
                        raise ParseError(f"malformed involution pair {tok!r}", lineno)
                    v, w = tok.split("<->")
                    pairs.append((v, w))
            for v in [x for p in pairs for x in p] + fixed:
                if v not in vertices:
                    raise ParseError(f"unknown vertex {v!r}", lineno)
            involution = {"pairs": pairs, "fixed": fixed}
        else:
            raise ParseError(f"unrecognised line {raw!r}", lineno)

    if cycles and relations:
        raise ParseError("a file may give a potential (cycle lines) or relations, not both", cycles[0][2])
    q = Quiver(tuple(vertices), tuple((a, *arrows[a]) for a in arrow_order))

    potential = None
    rels = None
    if cycles:
        terms = []
        for sign, ids, lineno in cycles:
            try:
                p = Path.of(q, ids)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if p.source != p.target:
                raise ParseError(f"{p} is not a cycle", lineno)
            terms.append((sign, tuple(ids)))
        try:
            potential = Potential(tuple(terms))
        except ValueError as exc:
            raise ParseError(str(exc), cycles[0][2]) from None
    else:
        out = []
        for terms, lineno in relations:
            try:
                out.append(Relation(tuple((Fraction(c), Path.of(q, ids)) for c, ids in terms)))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        rels = RelationSet(tuple(out))
    return ParsedQuiver(q, potential, rels, involution)


def load(path) -> ParsedQuiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())


def format_quiver(q: Quiver, potential: Potential | None = None, relations: RelationSet | None = None,
                  involution: dict | None = None) -> str:
    lines = ["vertices: " + " ".join(q.vertices)]
    lines += [f"arrow {a}: {s} -> {t}" for a, s, t in q.arrows]
    if potential is not None:
        lines += [f"cycle {'+' if s > 0 else '-'}: " + " ".join(c) for s, c in potential.terms]
    if relations is not None:
        for r in relations:
            lines.append("relation: " + str(r))
    if involution is not None:
        pairs = " ".join(f"{v}<->{w}" for v, w in involution["pairs"])
        lines.append(f"involution: {pairs} fix " + " ".join(involution["fixed"]))
    return "\n".join(lines) + "\n"


# -- cycles -----------------------------------------------------------------

def simple_cycles(q: Quiver) -> list[tuple[str, ...]]:
    """All directed simple cycles as arrow tuples, each once up to rotation.

    Each cycle is reported starting from its smallest vertex (in declaration
    order), which makes the enumeration rotation-free without post-filtering.
    """
    order = {v: k for k, v in enumerate(q.vertices)}
    out = []
    for start in q.vertices:
        s0 = order[start]

        def dfs(v, path, visited):
            for a in q.arrows_from(v):
                t = q.target(a)
                if t == start:
                    out.append(tuple(path + [a]))
                elif order[t] > s0 and t not in visited:
                    visited.add(t)
                    dfs(t, path + [a], visited)
                    visited.discard(t)

        dfs(start, [], {start})
    return out


def _has_chord(q: Quiver, cycle: tuple[str, ...]) -> bool:
    verts = [q.source(a) for a in cycle]
    n = len(verts)
    pos = {v: k for k, v in enumerate(verts)}
    for _, s, t in q.arrows:
        if s in pos and t in pos:
            d = abs(pos[s] - pos[t])
            if d not in (1, n - 1) and d != 0:
                return True
    return False


def chordless_cycles(q: Quiver) -> list[tuple[str, ...]]:
    """Directed simple cycles with no arrow joining two non-adjacent cycle vertices."""
    cycles = [c for c in simple_cycles(q) if not _has_chord(q, c)]
    return sorted((canonical_rotation(c) for c in cycles), key=lambda c: (len(c), c))


# -- Jacobian relations -------------------------------------------------------

def cyclic_derivative(w: Potential, beta: str) -> dict[tuple[str, ...], Fraction]:
    out: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
    for sign, cyc in w.terms:
        for k, a in enumerate(cyc):
            if a == beta:
                out[cyc[k + 1:] + cyc[:k]] += sign
    return {p: c for p, c in out.items() if c != 0}


def jacobian_relations(q: Quiver, w: Potential) -> RelationSet:
    """One relation per arrow: the cyclic derivative of ``w`` in that direction."""
    w.check_cycles(q)
    rels = []
    for beta in q.arrow_ids:
        d = cyclic_derivative(w, beta)
        if not d:
            continue
        if len(d) > 2:
            raise NonBinomialConsequence(
                f"derivative by {beta} has {len(d)} terms; only monomial/binomial relations are supported")
        items = sorted(d.items(), key=lambda kv: (len(kv[0]), kv[0]))
        rels.append(Relation(tuple((c, Path.of(q, p)) for p, c in items)))
    return RelationSet(tuple(rels))


def _normalized(terms) -> frozenset:
    terms = sorted(terms, key=lambda kv: (len(kv[0]), kv[0]))
    lead = terms[0][1]
    return frozenset((p, c / lead) for p, c in terms)


def infer_potential(q: Quiver, relations: RelationSet, max_cycles: int = 16) -> Potential | None:
    """A signed sum of the chordless cycles whose cyclic derivatives are the given relations.

    Relations are compared up to nonzero scalars.  Returns None if no sign
    pattern works (or there are too many cycles to try)."""
    cycles = chordless_cycles(q)
    if not cycles or len(cycles) > max_cycles:
        return None
    target = {_normalized([(p.arrows, c) for c, p in r.terms]) for r in relations}
    for signs in product((1, -1), repeat=len(cycles) - 1):
        w = Potential(tuple(zip((1,) + signs, cycles)))
        got = set()
        for beta in q.arrow_ids:
            d = cyclic_derivative(w, beta)
            if d:
                got.add(_normalized(list(d.items())))
        if got == target:
            return w
    return None


# -- dimer tree validation ----------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    cycles: list[tuple[str, ...]] = field(default_factory=list)
    dual_edges: list[tuple[int, int, str]] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _weakly_connected(q: Quiver) -> bool:
    if not q.vertices:
        return True
    adj = defaultdict(set)
    for _, s, t in q.arrows:
        adj[s].add(t)
        adj[t].add(s)
    seen = {q.vertices[0]}
    stack = [q.vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(q.vertices)


def cycles_by_arrow(cycles) -> dict[str, list[int]]:
    out = defaultdict(list)
    for k, c in enumerate(cycles):
        for a in c:
            out[a].append(k)
    return out


def validate_dimer_tree(q: Quiver, w: Potential | None) -> ValidationReport:
    rep = ValidationReport(ok=True)

    def fail(msg):
        rep.ok = False
        rep.failures.append(msg)

    if not _weakly_connected(q):
        fail("quiver is not connected")
    loops = [a for a, s, t in q.arrows if s == t]
    if loops:
        fail("loops: " + ", ".join(loops))
    pairs = {(s, t) for _, s, t in q.arrows}
    two = sorted({tuple(sorted((s, t))) for s, t in pairs if s != t and (t, s) in pairs})
    if two:
        fail("2-cycles between " + ", ".join(f"{a}<->{b}" for a, b in two))

    cycles = chordless_cycles(q)
    rep.cycles = cycles
    by_arrow = cycles_by_arrow(cycles)
    missing = [a for a in q.arrow_ids if a not in by_arrow]
    if missing:
        fail("arrows in no chordless cycle: " + ", ".join(missing))
    crowded = [a for a in q.arrow_ids if len(by_arrow.get(a, ())) > 2]
    if crowded:
        fail("arrows in more than two chordless cycles: " + ", ".join(crowded))

    edges = []
    for a in q.arrow_ids:
        cs = by_arrow.get(a, [])
        for x in range(len(cs)):
            for y in range(x + 1, len(cs)):
                edges.append((cs[x], cs[y], a))
    rep.dual_edges = edges
    n = len(cycles)
    if n:
        adj = defaultdict(set)
        for x, y, _ in edges:
            adj[x].add(y)
            adj[y].add(x)
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for u in adj[v] - seen:
                seen.add(u)
                stack.append(u)
        if len(seen) != n or len(edges) != n - 1:
            fail(f"dual graph is not a tree ({n} cycles, {len(edges)} shared arrows, "
                 f"{'connected' if len(seen) == n else 'disconnected'})")
    else:
        fail("no chordless cycles")

    if w is None:
        fail("no potential given")
    else:
        wc = w.canonical()
        cc = {canonical_rotation(c) for c in cycles}
        extra = [c for c in wc if c not in cc]
        absent = [c for c in cc if c not in wc]
        if extra or absent:
            msg = []
            if absent:
                msg.append("missing cycles " + ", ".join("*".join(c) for c in sorted(absent)))
            if extra:
                msg.append("non-chordless terms " + ", ".join("*".join(c) for c in sorted(extra)))
            fail("potential is not the signed sum of the chordless cycles: " + "; ".join(msg))
        else:
            for x, y, a in edges:
                cx, cy = canonical_rotation(cycles[x]), canonical_rotation(cycles[y])
                if wc[cx] == wc[cy]:
                    rep.notes.append(f"cycles sharing {a} carry equal signs (expected opposite orientation)")
    return rep
