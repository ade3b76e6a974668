"""Brute-force catalogs of indecomposable CM modules at desk scale.

Over a 1-Gorenstein algebra the CM modules are exactly the submodules of
projective modules.  The search therefore walks the submodule lattice of
small projective modules over a prime field, lifts every submodule to the
rationals, and keeps the indecomposable ones up to isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

import numpy as np

from . import linalg as la
from .algebra import AlgebraBasis
from .errors import BijectionFailure, CharacteristicDependence, SearchSpaceTooLarge
from .modules import (Representation, decompose, direct_sum, ext1, generated_submodule, is_cm,
                      is_indecomposable, is_isomorphic, loewy_label, middle_term, projective, radical,
                      syzygy, top_vector)

SEARCH_LIMIT = 10**7


@dataclass
class CatalogEntry:
    index: int
    rep: Representation
    label: str
    dim_vector: tuple
    projective: bool
    top: str | None = None  # vertex i when the entry is P(i)
    origin: str = "search"

    def describe(self) -> str:
        tag = f"P({self.top})" if self.projective else self.label
        return f"[{self.index}] {tag} dim={self.dim_vector}"


@dataclass
class CmpCatalog:
    algebra: AlgebraBasis
    entries: list
    omega: dict = field(default_factory=dict)  # index -> indices of the summands of Ω
    ext: np.ndarray | None = None  # dim Ext^1(entry x, entry y)
    settings: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    _index: dict | None = field(default=None, repr=False)
    _indexed: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.entries)

    def nonprojective(self) -> list:
        return [e for e in self.entries if not e.projective]

    def find(self, m: Representation):
        """Index of the entry isomorphic to m, or None."""
        stamp = [(id(e), e.index) for e in self.entries]
        if self._index is None or self._indexed != stamp:
            self._index = {}
            for e in self.entries:
                self._index.setdefault((e.dim_vector, e.label), []).append(e.index)
            self._indexed = stamp
        for k in self._index.get((m.dim_vector, loewy_label(m)), ()):
            if is_isomorphic(self.entries[k].rep, m):
                return k
        return None

    def labels(self, nonprojective_only: bool = False) -> list[str]:
        return [e.label for e in self.entries if not (nonprojective_only and e.projective)]

    def to_dot(self) -> str:
        lines = ["digraph cmp {", "  rankdir=LR;"]
        for e in self.entries:
            shape = "box" if e.projective else "ellipse"
            lbl = (f"P({e.top})\\n" if e.projective else "") + e.label.replace("/", "\\n")
            lines.append(f'  n{e.index} [label="{lbl}", shape={shape}];')
        if self.ext is not None:
            for x, y in product(range(len(self.entries)), repeat=2):
                d = int(self.ext[x, y])
                if d:
                    lines.append(f'  n{x} -> n{y} [label="{d}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- submodule lattice over F_p ------------------------------------------------------

class _ModP:
    """A representation reduced mod p with integer matrices."""

    def __init__(self, rep: Representation, p: int):
        self.rep = rep
        self.p = p
        self.mats = {a: la.to_mod_p(m, p) if m.size else np.zeros(m.shape, dtype=np.int64)
                     for a, m in rep.mats.items()}
        q = rep.algebra.quiver
        self.out = {v: [(a, q.target(a)) for a in q.arrows_from(v)] for v in rep.vertices}

    def close(self, spans: dict, v: str, x: np.ndarray) -> dict | None:
        """Add x at v and close under arrows; returns new spans or None if x already inside."""
        p = self.p
        spans = dict(spans)
        todo = [(v, x % p)]
        grew = False
        while todo:
            w, y = todo.pop()
            if not y.any():
                continue
            cur = spans[w]
            stacked = np.vstack([cur, y[None, :]]) if cur.shape[0] else y[None, :]
            red, piv = la.rref_mod_p(stacked, p)
            if len(piv) == cur.shape[0]:
                continue
            spans[w] = red
            grew = True
            for a, t in self.out[w]:
                todo.append((t, self.mats[a].dot(y) % p))
        return spans if grew else None


def _key(spans, order):
    return tuple(tuple(map(tuple, spans[v].tolist())) for v in order)


def _vectors_mod_p(d: int, p: int):
    """Nonzero vectors of F_p^d up to scalars (first nonzero entry 1)."""
    for k in range(d):
        for tail in product(range(p), repeat=d - k - 1):
            v = np.zeros(d, dtype=np.int64)
            v[k] = 1
            v[k + 1:] = tail
            yield v


def _lift(x: np.ndarray, p: int):
    return [int(c) if c <= p // 2 else int(c) - p for c in x]


def submodules_mod_p(amb: Representation, p: int, dmax: dict, limit: int):
    """All submodules of ``amb`` over F_p with dimension vector <= dmax.

    Yields (dims, generators) where generators is a list of (vertex, int vector)."""
    mp = _ModP(amb, p)
    order = amb.vertices
    empty = {v: np.zeros((0, amb.dims[v]), dtype=np.int64) for v in order}
    vecs = [(v, x) for v in order for x in _vectors_mod_p(amb.dims[v], p)]
    seen = {_key(empty, order)}
    queue = [(empty, [])]
    count = 0
    while queue:
        spans, gens = queue.pop()
        for v, x in vecs:
            if spans[v].shape[0]:
                red, piv = la.rref_mod_p(np.vstack([spans[v], x[None, :]]), p)
                if len(piv) == spans[v].shape[0]:
                    continue
            new = mp.close(spans, v, x)
            if new is None:
                continue
            dims = {w: new[w].shape[0] for w in order}
            if any(dims[w] > dmax.get(w, 0) for w in order):
                continue
            k = _key(new, order)
            if k in seen:
                continue
            seen.add(k)
            count += 1
            if count > limit:
                raise SearchSpaceTooLarge(f"more than {limit} submodules of {amb.name}")
            g2 = gens + [(v, x)]
            queue.append((new, g2))
            yield dims, g2


def _lift_submodule(amb: Representation, dims: dict, gens, p: int):
    """The rational submodule generated by lifted generators, with matching dimensions."""
    choices = []
    for v, x in gens:
        base = _lift(x, p)
        nz = [k for k, c in enumerate(base) if c]
        opts = [base]
        if p == 2 and len(nz) > 1:
            opts = []
            for signs in product((1, -1), repeat=len(nz) - 1):
                y = list(base)
                for k, s in zip(nz[1:], signs):
                    y[k] = s * y[k]
                opts.append(y)
        choices.append([(v, y) for y in opts])
    tries = 0
    for pick in product(*choices):
        tries += 1
        if tries > 256:
            break
        sub, _ = generated_submodule(amb, [(v, la.column(y)) for v, y in pick])
        if all(sub.dims[w] == dims[w] for w in amb.vertices):
            return sub
    raise CharacteristicDependence(f"a submodule of {amb.name} over F_{p} has no rational lift with the same dimensions")


# -- the catalog ------------------------------------------------------------------------

def _ambient_modules(a: AlgebraBasis, rank: int):
    for k in range(1, rank + 1):
        for combo in combinations_with_replacement(a.vertices, k):
            reps = [projective(a, v) for v in combo]
            yield reps[0] if k == 1 else direct_sum(reps, " + ".join(r.name for r in reps))[0]


def enumerate_cmp(a: AlgebraBasis, dmax=None, field_char: int = 2, ambient_rank: int = 1,
                  limit: int = SEARCH_LIMIT, ext_table: bool = True) -> CmpCatalog:
    """Indecomposable CM modules of a up to isomorphism.

    Candidates are the submodules, with dimension vector <= dmax, of sums of at
    most ``ambient_rank`` indecomposable projectives.  ``field_char`` is the
    prime used for the search (0 means 3, the smallest odd prime, which avoids
    sign ambiguities); every candidate is re-verified over the rationals.
    """
    p = field_char or 3
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not a prime")
    if dmax is None:
        dmax = a.dim_vector()
    elif isinstance(dmax, int):
        dmax = {v: dmax for v in a.vertices}
    elif not isinstance(dmax, dict):
        dmax = dict(zip(a.vertices, dmax))
    buckets: dict = {}
    entries: list[Representation] = []
    n_candidates = 0
    for amb in _ambient_modules(a, ambient_rank):
        for dims, gens in submodules_mod_p(amb, p, dmax, limit):
            n_candidates += 1
            if n_candidates > limit:
                raise SearchSpaceTooLarge(f"more than {limit} candidate submodules")
            sub = _lift_submodule(amb, dims, gens, p)
            if not is_indecomposable(sub):
                continue
            key = (sub.dim_vector, loewy_label(sub))
            bucket = buckets.setdefault(key, [])
            if any(is_isomorphic(r, sub) for r in bucket):
                continue
            bucket.append(sub)
            entries.append(sub)
    # keep the CM ones (all of them when A is 1-Gorenstein)
    entries = [m for m in entries if is_cm(m)]
    cat = _finish(a, entries, ext_table)
    cat.settings = {"dmax": dict(dmax), "char": p, "ambient_rank": ambient_rank}
    cat.stats = {"candidates": n_candidates}
    return cat


def _finish(a: AlgebraBasis, mods: list, ext_table: bool) -> CmpCatalog:
    projs = {v: projective(a, v) for v in a.vertices}
    for m in mods:
        m.name = ""
    records = []
    for m in mods:
        top = None
        for v, pv in projs.items():
            if pv.dim_vector == m.dim_vector and is_isomorphic(pv, m):
                top = v
                break
        records.append((m, top))
    cat = CmpCatalog(a, [])
    _reindex(cat, records)
    # close under Ω
    changed = True
    while changed:
        changed = False
        for e in list(cat.entries):
            if e.projective or e.index in cat.omega:
                continue
            idx = []
            for s in decompose(syzygy(e.rep)):
                k = cat.find(s)
                if k is None:
                    if not (is_indecomposable(s) and is_cm(s)):
                        continue
                    s.name = ""
                    cat.entries.append(CatalogEntry(len(cat.entries), s, loewy_label(s), s.dim_vector, False,
                                                    None, "syzygy closure"))
                    k = len(cat.entries) - 1
                    changed = True
                idx.append(k)
            cat.omega[e.index] = idx
        if changed:
            old = [(e.rep, e.top, e.origin) for e in cat.entries]
            omega_by_rep = {id(cat.entries[k].rep): [id(cat.entries[x].rep) for x in v] for k, v in cat.omega.items()}
            cat.entries = []
            _reindex(cat, [(r, t) for r, t, _ in old], origins={id(r): o for r, _, o in old})
            pos = {id(e.rep): e.index for e in cat.entries}
            cat.omega = {pos[k]: [pos[x] for x in v] for k, v in omega_by_rep.items()}
    for e in cat.entries:
        e.rep.name = f"P({e.top})" if e.projective else e.label
    if ext_table:
        n = len(cat.entries)
        cat.ext = np.zeros((n, n), dtype=int)
        for x, y in product(range(n), repeat=2):
            m, n = cat.entries[x].rep, cat.entries[y].rep
            if _may_extend(m, n):
                cat.ext[x, y] = ext1(m, n).dim
    return cat


def _reindex(cat: CmpCatalog, records, origins=None):
    vs = cat.algebra.vertices
    order = {v: k for k, v in enumerate(vs)}

    def sort_key(rec):
        m, top = rec
        return (top is None, order.get(top, 0), m.dim, tuple(-d for d in m.dim_vector), loewy_label(m))

    for m, top in sorted(records, key=sort_key):
        origin = (origins or {}).get(id(m), "search")
        cat.entries.append(CatalogEntry(len(cat.entries), m, loewy_label(m), m.dim_vector, top is not None, top,
                                        origin))


# -- generation by radicals -----------------------------------------------------------

def radical_summands(a: AlgebraBasis, catalog: CmpCatalog, vertices=None) -> set:
    """Catalog indices of the non-projective indecomposable summands of rad P(v)."""
    out = set()
    for v in (vertices if vertices is not None else a.vertices):
        for s in decompose(radical(projective(a, v))[0]):
            k = catalog.find(s)
            if k is None:
                raise BijectionFailure(f"summand {loewy_label(s)} of rad P({v}) is missing from the catalog")
            if not catalog.entries[k].projective:
                out.add(k)
    return out


def _may_extend(m: Representation, n: Representation) -> bool:
    """False when Hom(Ω m, n) = 0 is forced by supports (so Ext^1(m, n) = 0)."""
    om = syzygy(m)
    if om.dim == 0:
        return False
    tv = top_vector(om)
    return any(tv[v] and n.dims[v] for v in om.vertices)


def radical_generation_closure(a: AlgebraBasis, catalog: CmpCatalog, start_vertices=None) -> set:
    """Indices reached from radical summands by taking summands of middle terms of extensions.

    Pairs are visited in the order their members were reached; the walk stops
    early once every non-projective entry has been reached.
    """
    gen = set(radical_summands(a, catalog, start_vertices))
    everything = {e.index for e in catalog.nonprojective()}
    order = sorted(gen)
    n_done = 0
    while n_done < len(order) and not gen >= everything:
        y0 = order[n_done]
        n_done += 1
        # pair the newly visited entry with every visited entry, both ways round
        pairs = [(y0, y0)] + [(x, y0) for x in order[:n_done - 1]] + [(y0, x) for x in order[:n_done - 1]]
        for x, y in pairs:
            if catalog.ext is not None and not catalog.ext[x, y]:
                continue
            m, n = catalog.entries[x].rep, catalog.entries[y].rep
            if not _may_extend(m, n):
                continue
            e = ext1(m, n)
            if not e.dim:
                continue
            classes = list(e.cocycles)
            classes += [c1 + c2 for k, c1 in enumerate(e.cocycles) for c2 in e.cocycles[k + 1:]]
            for c in classes:
                for s in decompose(middle_term(m, n, c)):
                    k = catalog.find(s)
                    if k is None:
                        raise BijectionFailure(f"middle-term summand {loewy_label(s)} is missing from the catalog")
                    if not catalog.entries[k].projective and k not in gen:
                        gen.add(k)
                        order.append(k)
            if gen >= everything:
                break
    return gen


# -- the stable equivalence on objects -------------------------------------------------

@dataclass
class StableSummary:
    perp: list  # catalog indices in J-perp
    survivors: list  # indices surviving modulo add J and projectives
    image: dict  # survivor index -> index in the B catalog
    ext_preserved: bool | None = None

    def pairs(self, cat_a: CmpCatalog, cat_b: CmpCatalog):
        return [(cat_a.entries[x].label, cat_b.entries[y].label) for x, y in self.image.items()]


def stable_summary(catalog: CmpCatalog, j, catalog_b: CmpCatalog) -> StableSummary:
    from .reduction import functor_F, is_in_J_perp

    b = catalog_b.algebra
    perp = [e.index for e in catalog.entries if is_in_J_perp(j, e.rep)]
    jtypes = [t for t, _, proj in j.types if not proj]
    survivors = []
    for k in perp:
        e = catalog.entries[k]
        if e.projective:
            continue
        if any(t.dim_vector == e.dim_vector and is_isomorphic(t, e.rep) for t in jtypes):
            continue
        survivors.append(k)
    image = {}
    for k in survivors:
        fx = functor_F(j, catalog.entries[k].rep, b)
        parts = decompose(fx)
        idx = [catalog_b.find(s) for s in parts]
        nonproj = [x for x in idx if x is not None and not catalog_b.entries[x].projective]
        if None in idx or len(nonproj) != 1:
            raise BijectionFailure(f"F({catalog.entries[k].label}) is not a single non-projective CM B-module")
        image[k] = nonproj[0]
    targets = sorted(image.values())
    expected = sorted(e.index for e in catalog_b.nonprojective())
    if len(set(targets)) != len(targets) or targets != expected:
        raise BijectionFailure(f"F does not match survivors {survivors} with the non-projective B-modules")
    ext_ok = None
    if catalog.ext is not None and catalog_b.ext is not None:
        ext_ok = all(catalog.ext[x, y] == catalog_b.ext[image[x], image[y]] for x in survivors for y in survivors)
    return StableSummary(perp, survivors, image, ext_ok)
