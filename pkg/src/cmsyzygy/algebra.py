"""Finite-dimensional quotients of path algebras by monomial/binomial relations.

Relations are oriented into rewrite rules ``word -> c*word`` or ``word -> 0``
using the length-then-lexicographic order and completed by resolving
overlaps.  Because every rule maps a monomial to a scalar multiple of a
monomial, reduction never creates sums and completion stays inside the
monomial/binomial fragment.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import CapExceeded, NonBinomialConsequence
from .quiver import Path, Potential, Quiver, Relation, RelationSet, jacobian_relations

Word = tuple  # tuple of arrow ids
Rule = tuple  # (coefficient, word) or None for zero


def _wkey(w: Word):
    return (len(w), w)


class RewriteSystem:
    def __init__(self):
        self.rules: dict[Word, tuple[Fraction, Word] | None] = {}

    def _match(self, word: Word):
        rules = self.rules
        n = len(word)
        for i in range(n):
            for j in range(i + 1, n + 1):
                if word[i:j] in rules:
                    return i, j
        return None

    def reduce(self, word: Word, coef: Fraction = Fraction(1)):
        """Return ``(c, normal word)`` or ``None`` if the word reduces to zero."""
        while True:
            m = self._match(word)
            if m is None:
                return coef, word
            i, j = m
            rhs = self.rules[word[i:j]]
            if rhs is None:
                return None
            c, r = rhs
            coef = coef * c
            word = word[:i] + r + word[j:]

    def add_equation(self, lhs, rhs):
        """Record ``lhs == rhs`` where each side is ``(c, word)`` or None.

        Returns the new rule's left side, or None if the equation was trivial.
        """
        lhs = self.reduce(lhs[1], lhs[0]) if lhs is not None else None
        rhs = self.reduce(rhs[1], rhs[0]) if rhs is not None else None
        if lhs is None and rhs is None:
            return None
        if lhs is None or rhs is None:
            c, w = lhs if lhs is not None else rhs
            self.rules[w] = None
            return w
        (c1, w1), (c2, w2) = lhs, rhs
        if w1 == w2:
            if c1 == c2:
                return None
            self.rules[w1] = None
            return w1
        if _wkey(w1) < _wkey(w2):
            (c1, w1), (c2, w2) = (c2, w2), (c1, w1)
        self.rules[w1] = (c2 / c1, w2)
        return w1

    def interreduce(self):
        """Drop rules whose left side contains another left side; normalise right sides."""
        changed = True
        while changed:
            changed = False
            for lhs in sorted(self.rules, key=_wkey, reverse=True):
                rhs = self.rules.pop(lhs)
                if self._match(lhs) is not None:
                    # redundant or a new consequence; re-add as an equation
                    self.add_equation((Fraction(1), lhs), rhs)
                    changed = True
                    break
                if rhs is not None:
                    rhs = self.reduce(rhs[1], rhs[0])
                self.rules[lhs] = rhs


def _overlaps(l1: Word, l2: Word):
    """Words where l1 and l2 overlap: proper suffix/prefix overlaps and inclusions."""
    out = []
    n1, n2 = len(l1), len(l2)
    for k in range(1, min(n1, n2)):
        if l1[n1 - k:] == l2[:k]:
            out.append((l1 + l2[k:], 0, n1 - k))
    if n2 < n1:
        for s in range(n1 - n2 + 1):
            if l1[s:s + n2] == l2:
                out.append((l1, 0, s))
    return out


def _apply_rule_at(system: RewriteSystem, word: Word, lhs: Word, at: int):
    rhs = system.rules[lhs]
    if rhs is None:
        return None
    c, r = rhs
    return system.reduce(word[:at] + r + word[at + len(lhs):], c)


def complete(system: RewriteSystem, length_cap: int, max_rounds: int = 10_000) -> None:
    """Knuth-Bendix style completion; raises CapExceeded if rules grow past the cap."""
    system.interreduce()
    done: set = set()
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise CapExceeded("rewriting completion did not terminate")
        pending = None
        lhss = sorted(system.rules, key=_wkey)
        for l1 in lhss:
            for l2 in lhss:
                if (l1, l2) in done:
                    continue
                for word, _, at in _overlaps(l1, l2):
                    a = _apply_rule_at(system, word, l1, 0)
                    b = _apply_rule_at(system, word, l2, at)
                    if a != b:
                        pending = (a, b)
                        break
                if pending:
                    break
                done.add((l1, l2))
            if pending:
                break
        if pending is None:
            return
        new = system.add_equation(*pending)
        if new is not None and len(new) > length_cap:
            raise CapExceeded(f"completion produced a rule of length {len(new)} > cap {length_cap}")
        system.interreduce()
        done = {p for p in done if p[0] in system.rules and p[1] in system.rules}


class AlgebraBasis:
    """Basis of normal-form paths of kQ/I with exact multiplication."""

    def __init__(self, quiver: Quiver, relations: RelationSet, system: RewriteSystem,
                 basis: list[Path], potential: Potential | None = None, length_cap: int = 0):
        self.quiver = quiver
        self.relations = relations
        self.potential = potential
        self.system = system
        self.length_cap = length_cap
        self.basis = basis
        self.index = {p: k for k, p in enumerate(basis)}
        self._by_pair: dict[tuple[str, str], list[Path]] = defaultdict(list)
        self._from: dict[str, list[Path]] = defaultdict(list)
        for p in basis:
            self._by_pair[(p.source, p.target)].append(p)
            self._from[p.source].append(p)

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def dim(self) -> int:
        return len(self.basis)

    def paths(self, j: str, i: str) -> list[Path]:
        """Normal-form paths from j to i."""
        return list(self._by_pair.get((j, i), []))

    def paths_from(self, j: str) -> list[Path]:
        return list(self._from.get(j, []))

    def paths_to(self, i: str) -> list[Path]:
        return [p for p in self.basis if p.target == i]

    def m(self, j: str, i: str) -> int:
        return len(self._by_pair.get((j, i), ()))

    def reduce_word(self, source: str, word: Word):
        """Normal form of a composable word starting at ``source``: (coef, Path) or None."""
        if not word:
            return Fraction(1), Path.trivial(source)
        r = self.system.reduce(tuple(word))
        if r is None:
            return None
        c, w = r
        if not w:
            # only possible for non-admissible input collapsing a cycle to a vertex
            return c, Path.trivial(source)
        return c, Path(source, self.quiver.target(w[-1]), w)

    def mult(self, p: Path, r: Path):
        """Product p*r as (coef, normal Path) or None when zero."""
        if p.target != r.source:
            return None
        return self.reduce_word(p.source, p.arrows + r.arrows)

    def times_arrow(self, p: Path, a: str):
        if p.target != self.quiver.source(a):
            return None
        return self.reduce_word(p.source, p.arrows + (a,))

    def dim_vector_of_projective(self, j: str) -> dict[str, int]:
        out = {v: 0 for v in self.vertices}
        for p in self._from.get(j, ()):
            out[p.target] += 1
        return out

    def dim_vector(self) -> dict[str, int]:
        out = {v: 0 for v in self.vertices}
        for p in self.basis:
            out[p.target] += 1
        return out

    def structure_constants(self) -> dict[tuple[int, int], tuple[Fraction, int]]:
        table = {}
        for x, p in enumerate(self.basis):
            for y, r in enumerate(self.basis):
                res = self.mult(p, r)
                if res is not None:
                    table[(x, y)] = (res[0], self.index[res[1]])
        return table

    def check_associativity(self) -> bool:
        table = self.structure_constants()
        n = self.dim
        for x, y, z in product(range(n), repeat=3):
            left = table.get((x, y))
            left = None if left is None else (left[0], table.get((left[1], z)))
            right = table.get((y, z))
            right = None if right is None else (right[0], table.get((x, right[1])))
            lv = None if left is None or left[1] is None else (left[0] * left[1][0], left[1][1])
            rv = None if right is None or right[1] is None else (right[0] * right[1][0], right[1][1])
            if lv != rv:
                return False
        return True

    def __repr__(self):
        return f"AlgebraBasis(dim={self.dim}, vertices={len(self.vertices)})"


def default_cap(q: Quiver) -> int:
    return 2 * len(q.arrows) + 2


def _combine(rel: Relation):
    acc: dict[Word, Fraction] = defaultdict(Fraction)
    for c, p in rel.terms:
        acc[p.arrows] += c
    return [(c, w) for w, c in acc.items() if c != 0]


def build_algebra(q: Quiver, r: RelationSet | Potential | None = None, length_cap: int | None = None) -> AlgebraBasis:
    """Basis and multiplication of kQ/(r).  A Potential is turned into its Jacobian relations."""
    potential = None
    if isinstance(r, Potential):
        potential = r
        r = jacobian_relations(q, r)
    if r is None:
        r = RelationSet(())
    cap = default_cap(q) if length_cap is None else length_cap
    if cap < 1:
        raise ValueError("length cap must be positive")
    r.check(q)

    system = RewriteSystem()
    for rel in r:
        terms = _combine(rel)
        if not terms:
            continue
        if len(terms) > 2:
            raise NonBinomialConsequence(f"relation {rel} has {len(terms)} terms")
        if len(terms) == 1:
            system.add_equation(terms[0], None)
        else:
            (c1, w1), (c2, w2) = terms
            system.add_equation((c1, w1), (-c2, w2))
        system.interreduce()
    complete(system, cap)

    lhs = set(system.rules)
    basis = [Path.trivial(v) for v in q.vertices]
    frontier = [(v, ()) for v in q.vertices]
    length = 0
    while frontier:
        length += 1
        if length > cap:
            raise CapExceeded(f"normal forms of length {cap} still exist; raise --cap or check the relations")
        nxt = []
        for src, w in frontier:
            end = q.target(w[-1]) if w else src
            for a in q.arrows_from(end):
                nw = w + (a,)
                if any(nw[k:] in lhs for k in range(len(nw))):
                    continue
                nxt.append((src, nw))
        nxt.sort(key=lambda x: (x[1],))
        basis.extend(Path(src, q.target(w[-1]), w) for src, w in nxt)
        frontier = nxt
    order = {v: k for k, v in enumerate(q.vertices)}
    basis.sort(key=lambda p: (order[p.source], len(p.arrows), p.arrows, order[p.target]))
    return AlgebraBasis(q, r, system, basis, potential=potential, length_cap=cap)


def m_matrix(a: AlgebraBasis) -> np.ndarray:
    """Integer matrix with entry (j, i) = number of normal-form paths j -> i."""
    vs = a.vertices
    out = np.zeros((len(vs), len(vs)), dtype=int)
    for p in a.basis:
        out[vs.index(p.source), vs.index(p.target)] += 1
    return out


def is_schurian(a: AlgebraBasis) -> bool:
    return bool((m_matrix(a) <= 1).all())
