"""Right modules over an AlgebraBasis, stored as quiver representations.

A representation assigns a vector space k^d(v) to each vertex and to each
arrow a: s -> t a matrix of shape (d(t), d(s)).  Vectors are columns, so the
path a1*a2*...*ak acts by M_ak ... M_a1, i.e. right multiplication.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import linalg as la
from .algebra import AlgebraBasis
from .errors import DecompositionFailure, InconclusiveIso
from .quiver import Path

ISO_GRID_CAP = 100_000


def _rng() -> random.Random:
    return random.Random(int(os.environ.get("CMSYZ_SEED", "0")))


class Representation:
    def __init__(self, algebra: AlgebraBasis, dims, mats, name: str = ""):
        self.algebra = algebra
        vs = algebra.vertices
        if not isinstance(dims, dict):
            dims = dict(zip(vs, dims))
        self.dims: dict[str, int] = {v: int(dims.get(v, 0)) for v in vs}
        q = algebra.quiver
        self.mats: dict[str, np.ndarray] = {}
        for a, s, t in q.arrows:
            m = mats.get(a)
            if m is None:
                m = la.zeros(self.dims[t], self.dims[s])
            else:
                m = la.as_matrix(m, self.dims[t], self.dims[s])
                if m.shape != (self.dims[t], self.dims[s]):
                    if m.size == 0 and (self.dims[t] == 0 or self.dims[s] == 0):
                        m = la.zeros(self.dims[t], self.dims[s])
                    else:
                        raise ValueError(f"arrow {a}: shape {m.shape}, expected {(self.dims[t], self.dims[s])}")
            self.mats[a] = m
        self.name = name
        self.offsets = {}
        k = 0
        for v in vs:
            self.offsets[v] = k
            k += self.dims[v]
        self.dim = k
        self._cache: dict = {}

    # -- basic data ----------------------------------------------------------
    @property
    def vertices(self):
        return self.algebra.vertices

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.vertices)

    @property
    def support(self) -> list[str]:
        return [v for v in self.vertices if self.dims[v]]

    def is_zero(self) -> bool:
        return self.dim == 0

    def path_matrix(self, p: Path) -> np.ndarray:
        out = la.identity(self.dims[p.source])
        for a in p.arrows:
            out = la.matmul(self.mats[a], out)
        return out

    def word_matrix(self, source: str, word) -> np.ndarray:
        return self.path_matrix(Path(source, self.algebra.quiver.target(word[-1]) if word else source, tuple(word)))

    def global_arrow(self, a: str) -> np.ndarray:
        """The action of ``a`` as a (dim x dim) matrix on the whole module."""
        q = self.algebra.quiver
        out = la.zeros(self.dim, self.dim)
        s, t = q.source(a), q.target(a)
        os_, ot = self.offsets[s], self.offsets[t]
        out[ot:ot + self.dims[t], os_:os_ + self.dims[s]] = self.mats[a]
        return out

    def satisfies_relations(self) -> bool:
        for rel in self.algebra.relations:
            p0 = rel.terms[0][1]
            acc = la.zeros(self.dims[p0.target], self.dims[p0.source])
            for c, p in rel.terms:
                acc = acc + c * self.path_matrix(p)
            if not la.is_zero(acc):
                return False
        return True

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<Representation{tag} dim={self.dim_vector}>"

    def label(self) -> str:
        return loewy_label(self)


@dataclass
class Morphism:
    source: Representation
    target: Representation
    blocks: dict  # vertex -> matrix (target dim x source dim)

    def __post_init__(self):
        for v in self.source.vertices:
            b = self.blocks.get(v)
            shape = (self.target.dims[v], self.source.dims[v])
            if b is None or b.shape != shape:
                if b is None or b.size == 0:
                    self.blocks[v] = la.zeros(*shape)
                else:
                    raise ValueError(f"block at {v} has shape {b.shape}, expected {shape}")

    @classmethod
    def zero(cls, m: Representation, n: Representation) -> "Morphism":
        return cls(m, n, {v: la.zeros(n.dims[v], m.dims[v]) for v in m.vertices})

    @classmethod
    def identity(cls, m: Representation) -> "Morphism":
        return cls(m, m, {v: la.identity(m.dims[v]) for v in m.vertices})

    def matrix(self) -> np.ndarray:
        return la.block_diag([self.blocks[v] for v in self.source.vertices])

    def vector(self) -> list[Fraction]:
        out = []
        for v in self.source.vertices:
            out.extend(self.blocks[v].flatten().tolist())
        return out

    def is_morphism(self) -> bool:
        q = self.source.algebra.quiver
        for a, s, t in q.arrows:
            lhs = la.matmul(self.target.mats[a], self.blocks[s])
            rhs = la.matmul(self.blocks[t], self.source.mats[a])
            if not la.is_zero(lhs - rhs):
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self ∘ other``."""
        return Morphism(other.source, self.target,
                        {v: la.matmul(self.blocks[v], other.blocks[v]) for v in self.source.vertices})

    def __add__(self, other):
        return Morphism(self.source, self.target, {v: self.blocks[v] + other.blocks[v] for v in self.source.vertices})

    def scale(self, c) -> "Morphism":
        c = Fraction(c)
        return Morphism(self.source, self.target, {v: self.blocks[v] * c for v in self.source.vertices})

    def rank(self) -> int:
        return sum(la.rank(self.blocks[v]) for v in self.source.vertices if self.blocks[v].size)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim_vector == self.target.dim_vector and self.is_injective()

    def is_zero(self) -> bool:
        return all(la.is_zero(b) for b in self.blocks.values())

    def kernel(self):
        basis = {v: la.nullspace(self.blocks[v]) if self.source.dims[v] else la.zeros(0, 0)
                 for v in self.source.vertices}
        return submodule(self.source, basis)

    def image(self):
        basis = {v: la.column_basis(self.blocks[v]) for v in self.source.vertices}
        return submodule(self.target, basis)

    def cokernel(self):
        basis = {v: la.column_basis(self.blocks[v]) for v in self.source.vertices}
        return quotient(self.target, basis)


# -- constructions -------------------------------------------------------------

def submodule(m: Representation, basis: dict, name: str = ""):
    """Subrepresentation spanned by the given columns (must be arrow-stable).

    Returns (sub, inclusion)."""
    q = m.algebra.quiver
    bas = {}
    for v in m.vertices:
        b = basis.get(v)
        if b is None or b.shape[1] == 0 or m.dims[v] == 0:
            bas[v] = la.zeros(m.dims[v], 0)
        else:
            bas[v] = la.column_basis(b)
    mats = {}
    for a, s, t in q.arrows:
        img = la.matmul(m.mats[a], bas[s])
        if bas[s].shape[1] == 0:
            mats[a] = la.zeros(bas[t].shape[1], 0)
            continue
        x = la.solve(bas[t], img) if bas[t].shape[1] else (la.zeros(0, bas[s].shape[1]) if la.is_zero(img) else None)
        if x is None:
            raise ValueError(f"span is not closed under arrow {a}")
        mats[a] = x
    sub = Representation(m.algebra, {v: bas[v].shape[1] for v in m.vertices}, mats, name)
    return sub, Morphism(sub, m, dict(bas))


def quotient(m: Representation, basis: dict, name: str = ""):
    """Quotient of ``m`` by the arrow-stable span of ``basis``; returns (quot, projection)."""
    q = m.algebra.quiver
    sub, comp, coords = {}, {}, {}
    for v in m.vertices:
        d = m.dims[v]
        b = basis.get(v)
        b = la.zeros(d, 0) if b is None or b.shape[1] == 0 or d == 0 else la.column_basis(b)
        idx = la.extend_basis(b, la.identity(d)) if d else []
        c = la.identity(d)[:, idx] if d else la.zeros(0, 0)
        sub[v], comp[v] = b, c
        full = np.hstack([b, c]) if d else la.zeros(0, 0)
        inv = la.inverse(full) if d else la.zeros(0, 0)
        coords[v] = inv[b.shape[1]:, :] if d else la.zeros(0, 0)  # rows: quotient coordinates
    mats = {}
    for a, s, t in q.arrows:
        mats[a] = la.matmul(coords[t], la.matmul(m.mats[a], comp[s])) if comp[s].shape[1] and comp[t].shape[1] \
            else la.zeros(comp[t].shape[1], comp[s].shape[1])
    qm = Representation(m.algebra, {v: comp[v].shape[1] for v in m.vertices}, mats, name)
    proj = Morphism(m, qm, {v: coords[v] if m.dims[v] else la.zeros(qm.dims[v], 0) for v in m.vertices})
    return qm, proj


def generated_submodule(m: Representation, gens, name: str = ""):
    """Smallest submodule containing the vectors ``gens`` = [(vertex, column), ...]."""
    q = m.algebra.quiver
    span = {v: la.zeros(m.dims[v], 0) for v in m.vertices}
    todo = list(gens)
    while todo:
        v, x = todo.pop()
        x = la.as_matrix(x).reshape((m.dims[v], 1)) if not (isinstance(x, np.ndarray) and x.ndim == 2) else x
        if la.is_zero(x):
            continue
        cur = span[v]
        if cur.shape[1] and la.rank(np.hstack([cur, x])) == cur.shape[1]:
            continue
        span[v] = np.hstack([cur, x]) if cur.shape[1] else x
        for a in q.arrows_from(v):
            todo.append((q.target(a), la.matmul(m.mats[a], x)))
    return submodule(m, span, name)


def direct_sum(reps, name: str = ""):
    """(sum, inclusions, projections)."""
    reps = list(reps)
    alg = reps[0].algebra
    q = alg.quiver
    dims = {v: sum(r.dims[v] for r in reps) for v in alg.vertices}
    mats = {a: la.block_diag([r.mats[a] for r in reps]) for a, _, _ in q.arrows}
    s = Representation(alg, dims, mats, name or " + ".join(r.name or "?" for r in reps))
    incs, projs = [], []
    off = {v: 0 for v in alg.vertices}
    for r in reps:
        ib, pb = {}, {}
        for v in alg.vertices:
            ib[v] = la.zeros(dims[v], r.dims[v])
            for k in range(r.dims[v]):
                ib[v][off[v] + k, k] = la.ONE
            pb[v] = ib[v].T.copy()
            off[v] += r.dims[v]
        incs.append(Morphism(r, s, ib))
        projs.append(Morphism(s, r, pb))
    return s, incs, projs


def zero_module(a: AlgebraBasis) -> Representation:
    return Representation(a, {}, {}, "0")


def projective(a: AlgebraBasis, i: str) -> Representation:
    """P(i) = e_i A with basis the normal-form paths starting at i."""
    cache = a.__dict__.setdefault("_projectives", {})
    if i in cache:
        return cache[i]
    if i not in a.vertices:
        raise ValueError(f"unknown vertex {i!r}")
    q = a.quiver
    by_t = {v: [p for p in a.paths_from(i) if p.target == v] for v in a.vertices}
    pos = {p: k for v in a.vertices for k, p in enumerate(by_t[v])}
    mats = {}
    for arr, s, t in q.arrows:
        m = la.zeros(len(by_t[t]), len(by_t[s]))
        for k, p in enumerate(by_t[s]):
            r = a.times_arrow(p, arr)
            if r is not None:
                m[pos[r[1]], k] = r[0]
        mats[arr] = m
    rep = Representation(a, {v: len(by_t[v]) for v in a.vertices}, mats, f"P({i})")
    rep.basis_paths = by_t
    cache[i] = rep
    return rep


def regular_module(a: AlgebraBasis) -> Representation:
    return direct_sum([projective(a, v) for v in a.vertices], "A")[0]


def simple(a: AlgebraBasis, i: str) -> Representation:
    return Representation(a, {i: 1}, {}, f"S({i})")


def radical(m: Representation):
    """(rad m, inclusion)."""
    q = m.algebra.quiver
    basis = {}
    for v in m.vertices:
        ins = [m.mats[a] for a in q.arrows_to(v) if m.mats[a].shape[1]]
        basis[v] = la.column_basis(np.hstack(ins)) if ins and m.dims[v] else la.zeros(m.dims[v], 0)
    return submodule(m, basis, f"rad {m.name}" if m.name else "")


def top(m: Representation):
    """(top m, projection)."""
    r, inc = radical(m)
    return quotient(m, inc.blocks, f"top {m.name}" if m.name else "")


def top_vector(m: Representation) -> dict[str, int]:
    r, _ = radical(m)
    return {v: m.dims[v] - r.dims[v] for v in m.vertices}


@dataclass
class ProjectiveCover:
    module: Representation
    projective: Representation
    tops: list  # vertex of each indecomposable summand, in order
    generators: list  # (vertex, column) images of the summand generators
    surjection: Morphism
    kernel: Representation
    inclusion: Morphism  # kernel -> projective


def projective_cover(m: Representation) -> ProjectiveCover:
    if "cover" in m._cache:
        return m._cache["cover"]
    a = m.algebra
    r, inc = radical(m)
    tops, gens = [], []
    for v in m.vertices:
        d = m.dims[v]
        if not d:
            continue
        for k in la.extend_basis(inc.blocks[v], la.identity(d)):
            g = la.zeros(d, 1)
            g[k, 0] = la.ONE
            tops.append(v)
            gens.append((v, g))
    if not tops:
        z = zero_module(a)
        cov = ProjectiveCover(m, z, [], [], Morphism.zero(z, m), z, Morphism.zero(z, z))
        m._cache["cover"] = cov
        return cov
    summands = [projective(a, v) for v in tops]
    p, _, _ = direct_sum(summands, " + ".join(s.name for s in summands))
    blocks = {}
    for t in a.vertices:
        cols = []
        for (v, g), s in zip(gens, summands):
            for path in s.basis_paths[t]:
                cols.append(la.matmul(m.path_matrix(path), g))
        blocks[t] = np.hstack(cols) if cols else la.zeros(m.dims[t], 0)
    surj = Morphism(p, m, blocks)
    ker, kinc = surj.kernel()
    ker.name = f"Ω({m.name})" if m.name else ""
    cov = ProjectiveCover(m, p, tops, gens, surj, ker, kinc)
    m._cache["cover"] = cov
    return cov


def syzygy(m: Representation) -> Representation:
    return projective_cover(m).kernel


def is_projective(m: Representation) -> bool:
    return projective_cover(m).projective.dim == m.dim


# -- Hom and Ext ------------------------------------------------------------------

@dataclass
class HomSpace:
    source: Representation
    target: Representation
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs) -> Morphism:
        blocks = {v: la.zeros(self.target.dims[v], self.source.dims[v]) for v in self.source.vertices}
        for c, f in zip(coeffs, self.basis):
            if c:
                c = Fraction(c)
                for v in blocks:
                    blocks[v] = blocks[v] + c * f.blocks[v]
        return Morphism(self.source, self.target, blocks)


def hom_space(m: Representation, n: Representation) -> HomSpace:
    """Basis of Hom_A(m, n) from the intertwining equations."""
    q = m.algebra.quiver
    vs = m.vertices
    off, k = {}, 0
    for v in vs:
        off[v] = k
        k += n.dims[v] * m.dims[v]
    nvars = k

    def var(v, r, c):
        return off[v] + r * m.dims[v] + c

    rows = []
    for a, s, t in q.arrows:
        na, ma = n.mats[a], m.mats[a]
        # (na f_s - f_t ma)[r, c] = 0 for r < n_t, c < m_s
        if not m.dims[s] or not n.dims[t]:
            continue
        nz_n = [[(kk, na[r, kk]) for kk in range(n.dims[s]) if na[r, kk] != 0] for r in range(n.dims[t])]
        nz_m = [[(kk, ma[kk, c]) for kk in range(m.dims[t]) if ma[kk, c] != 0] for c in range(m.dims[s])]
        for r in range(n.dims[t]):
            for c in range(m.dims[s]):
                row = {}
                for kk, x in nz_n[r]:
                    key = var(s, kk, c)
                    row[key] = row.get(key, 0) + x
                for kk, x in nz_m[c]:
                    key = var(t, r, kk)
                    row[key] = row.get(key, 0) - x
                row = {kk: x for kk, x in row.items() if x != 0}
                if row:
                    rows.append(row)
    sols = la.sparse_nullspace(rows, nvars)
    basis = []
    for sol in sols:
        blocks = {}
        for v in vs:
            b = la.zeros(n.dims[v], m.dims[v])
            for r in range(n.dims[v]):
                for c in range(m.dims[v]):
                    x = sol.get(var(v, r, c))
                    if x:
                        b[r, c] = x
            blocks[v] = b
        basis.append(Morphism(m, n, blocks))
    return HomSpace(m, n, basis)


def _vectors(morphs) -> np.ndarray:
    if not morphs:
        return None
    return la.as_matrix([f.vector() for f in morphs]).T


@dataclass
class ExtResult:
    dim: int
    cocycles: list  # morphisms Ω(m) -> n representing a basis of Ext^1
    cover: ProjectiveCover = field(repr=False, default=None)

    def __int__(self):
        return self.dim


def _maps_from_cover(cov: ProjectiveCover, n: Representation) -> list:
    """Basis of Hom(P, n) for the cover P, restricted to the syzygy (Yoneda)."""
    a = n.algebra
    out = []
    summands = [projective(a, v) for v in cov.tops]
    offsets = {v: 0 for v in a.vertices}
    starts = []
    for s in summands:
        starts.append(dict(offsets))
        for v in a.vertices:
            offsets[v] += s.dims[v]
    for idx, (v, s) in enumerate(zip(cov.tops, summands)):
        for k in range(n.dims[v]):
            x = la.zeros(n.dims[v], 1)
            x[k, 0] = la.ONE
            blocks = {}
            for t in a.vertices:
                b = la.zeros(n.dims[t], cov.projective.dims[t])
                for j, path in enumerate(s.basis_paths[t]):
                    col = la.matmul(n.path_matrix(path), x)
                    b[:, starts[idx][t] + j] = col[:, 0]
                blocks[t] = b
            out.append(Morphism(cov.projective, n, blocks))
    return out


def ext1(m: Representation, n: Representation) -> ExtResult:
    """Ext^1(m, n) as the cokernel of Hom(P, n) -> Hom(Ω m, n)."""
    cov = projective_cover(m)
    k = cov.kernel
    if k.dim == 0 or n.dim == 0:
        return ExtResult(0, [], cov)
    h = hom_space(k, n)
    if h.dim == 0:
        return ExtResult(0, [], cov)
    restricted = [f @ cov.inclusion for f in _maps_from_cover(cov, n)]
    hv = _vectors(h.basis)
    img = _vectors(restricted)
    img = la.column_basis(img) if img is not None else la.zeros(hv.shape[0], 0)
    r = img.shape[1]
    extra = la.extend_basis(img, hv)
    return ExtResult(h.dim - r, [h.basis[j] for j in extra], cov)


def ext2(m: Representation, n: Representation) -> ExtResult:
    return ext1(syzygy(m), n)


def is_cm(m: Representation) -> bool:
    """Ext^1(m, A) = 0."""
    a = m.algebra
    return all(ext1(m, projective(a, v)).dim == 0 for v in a.vertices)


def middle_term(m: Representation, n: Representation, cocycle: Morphism | None = None):
    """The extension 0 -> n -> E -> m -> 0 classified by ``cocycle`` (a map Ω m -> n)."""
    cov = projective_cover(m)
    if cocycle is None:
        cocycle = Morphism.zero(cov.kernel, n)
    if cocycle.source.dim_vector != cov.kernel.dim_vector or cocycle.target is not n and \
            cocycle.target.dim_vector != n.dim_vector:
        raise ValueError("cocycle does not match the syzygy of m")
    s, _, _ = direct_sum([n, cov.projective])
    blocks = {}
    for v in m.vertices:
        blocks[v] = np.vstack([cocycle.blocks[v], -cov.inclusion.blocks[v]]) if s.dims[v] else la.zeros(0, cov.kernel.dims[v])
    u = Morphism(cov.kernel, s, blocks)
    e, _ = u.cokernel()
    e.name = f"E({m.name},{n.name})" if m.name and n.name else ""
    return e


# -- isomorphism and decomposition -------------------------------------------------

@dataclass
class IsoResult:
    value: bool
    witness: Morphism | None = None
    reason: str = ""

    def __bool__(self):
        return self.value


def _det_at(blocks_list, coeffs, v):
    acc = None
    for c, b in zip(coeffs, blocks_list):
        if c:
            acc = b[v] * Fraction(c) if acc is None else acc + b[v] * Fraction(c)
    if acc is None:
        return Fraction(0)
    return la.det(acc)


def is_isomorphic(m: Representation, n: Representation) -> IsoResult:
    if m.dim_vector != n.dim_vector:
        return IsoResult(False, reason="dimension vectors differ")
    if m.dim == 0:
        return IsoResult(True, Morphism.zero(m, n), "zero modules")
    if top_vector(m) != top_vector(n):
        return IsoResult(False, reason="tops differ")
    h = hom_space(m, n)
    if h.dim == 0:
        return IsoResult(False, reason="Hom(m, n) = 0")
    if h.dim != hom_space(n, n).dim or h.dim != hom_space(m, m).dim:
        return IsoResult(False, reason="Hom dimensions differ from End dimensions")
    blocks = [f.blocks for f in h.basis]
    vs = [v for v in m.vertices if m.dims[v]]
    rng = _rng()
    for _ in range(8):
        coeffs = [rng.randint(-10**6, 10**6) for _ in h.basis]
        f = h.combination(coeffs)
        if f.is_iso():
            return IsoResult(True, f, "generic combination")
    # Each per-vertex determinant is a polynomial of degree <= dim_v in every
    # coefficient; it vanishes identically iff it vanishes on {0..dim_v}^d.
    for v in vs:
        grid = range(m.dims[v] + 1)
        if (m.dims[v] + 1) ** h.dim > ISO_GRID_CAP:
            raise InconclusiveIso(f"no invertible map found and the exact test at vertex {v} exceeds the grid cap")
        if all(_det_at(blocks, c, v) == 0 for c in product(grid, repeat=h.dim)):
            return IsoResult(False, reason=f"every map is singular at vertex {v}")
    for coeffs in product(range(-2, 3), repeat=min(h.dim, 7)):
        coeffs = list(coeffs) + [0] * (h.dim - len(coeffs))
        f = h.combination(coeffs)
        if f.is_iso():
            return IsoResult(True, f, "grid combination")
    raise InconclusiveIso("per-vertex determinants are nonzero polynomials but no invertible map was found")


def endomorphism_blocks(m: Representation) -> list[dict]:
    return [f.blocks for f in hom_space(m, m).basis]


def _block_trace(x: dict, y: dict) -> Fraction:
    t = Fraction(0)
    for v, bx in x.items():
        if bx.size:
            t += sum((bx * y[v].T).flat, Fraction(0))
    return t


def trace_form_rank(blocks) -> int:
    """Rank of (x, y) -> tr(xy) on a list of block-diagonal endomorphisms."""
    d = len(blocks)
    g = la.zeros(d, d)
    for x in range(d):
        for y in range(x, d):
            g[x, y] = g[y, x] = _block_trace(blocks[x], blocks[y])
    return la.rank(g)


def is_indecomposable(m: Representation) -> bool:
    """True iff End(m)/rad End(m) is one-dimensional (trace-form radical)."""
    if m.dim == 0:
        return False
    if "indec" not in m._cache:
        if sum(top_vector(m).values()) == 1:
            m._cache["indec"] = True
        else:
            blocks = endomorphism_blocks(m)
            m._cache["indec"] = len(blocks) == 1 or trace_form_rank(blocks) == 1
    return m._cache["indec"]


def _fitting_split(m: Representation, x: dict):
    """Split m = im x^n ⊕ ker x^n if both parts are nonzero."""
    n = m.dim
    img, ker, r = {}, {}, 0
    for v in m.vertices:
        d = m.dims[v]
        if not d:
            img[v] = ker[v] = la.zeros(0, 0)
            continue
        p = x[v]
        for _ in range(max(1, d.bit_length())):
            p = la.matmul(p, p)
        img[v] = la.column_basis(p)
        ker[v] = la.nullspace(p)
        r += img[v].shape[1]
    if r == 0 or r == n:
        return None
    return [submodule(m, img)[0], submodule(m, ker)[0]]


def _rational_eigenvalues(x: dict) -> list[Fraction]:
    out = []
    for b in x.values():
        n = b.shape[0]
        if not n:
            continue
        for z in np.linalg.eigvals(np.array(b, dtype=float)):
            if abs(z.imag) > 1e-7:
                continue
            lam = Fraction(float(z.real)).limit_denominator(10_000)
            if lam in out:
                continue
            if la.rank(b - lam * la.identity(n)) < n:
                out.append(lam)
    return out


def _shift(x: dict, lam: Fraction) -> dict:
    return {v: b - lam * la.identity(b.shape[0]) for v, b in x.items()}


def decompose(m: Representation) -> list[Representation]:
    """Indecomposable summands of m (Fitting decomposition of endomorphisms)."""
    if m.dim == 0:
        return []
    if is_indecomposable(m):
        return [m]
    ends = endomorphism_blocks(m)
    rng = _rng()

    def comb(cs):
        return {v: sum((c * e[v] for c, e in zip(cs, ends) if c), la.zeros(m.dims[v], m.dims[v])) for v in m.vertices}

    candidates = list(ends)
    k = len(ends)
    candidates += [comb([1 if t in (x, y) else 0 for t in range(k)]) for x in range(k) for y in range(x + 1, k)][:40]
    candidates += [comb([rng.randint(-5, 5) for _ in ends]) for _ in range(10)]
    for x in candidates:
        for lam in [Fraction(0)] + _rational_eigenvalues(x):
            parts = _fitting_split(m, _shift(x, lam) if lam else x)
            if parts:
                out = []
                for p in parts:
                    out.extend(decompose(p))
                return out
    raise DecompositionFailure(f"could not split {m!r} although its endomorphism ring is not local")


# -- reporting -------------------------------------------------------------------

def radical_layers(m: Representation) -> list[dict[str, int]]:
    layers = []
    cur = m
    while cur.dim:
        r, _ = radical(cur)
        layers.append({v: cur.dims[v] - r.dims[v] for v in m.vertices})
        if r.dim == cur.dim:
            break  # not nilpotent; cannot happen for admissible ideals
        cur = r
    return layers


def loewy_label(m: Representation) -> str:
    """Radical layers top to bottom, e.g. ``1 5/2``."""
    if m.dim == 0:
        return "0"
    rows = []
    for layer in radical_layers(m):
        rows.append(" ".join(v for v in m.vertices for _ in range(layer[v])))
    return "/".join(rows)
