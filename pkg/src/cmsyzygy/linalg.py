"""Exact linear algebra over the rationals.

Matrices are numpy object arrays holding :class:`fractions.Fraction` entries.
Everything here is small and dense; the point is exactness, not speed.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

Q = Fraction
ZERO = Q(0)
ONE = Q(1)


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for k in range(n):
        out[k, k] = ONE
    return out


def as_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Convert nested sequences (or an array) to an object matrix of Fractions."""
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        arr = data
    else:
        arr = np.array(data, dtype=object)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape((rows or 0, cols or 0))
        if arr.ndim == 1:
            arr = arr.reshape((1, -1))
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, Fraction) else Q(x)
    return out


def column(vec) -> np.ndarray:
    v = as_matrix([[x] for x in vec]) if len(vec) else zeros(0, 1)
    return v


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = m.copy()
    rows, cols = r.shape
    pivots: list[int] = []
    lead = 0
    for c in range(cols):
        if lead >= rows:
            break
        piv = None
        for k in range(lead, rows):
            if r[k, c] != 0:
                piv = k
                break
        if piv is None:
            continue
        if piv != lead:
            r[[lead, piv]] = r[[piv, lead]]
        p = r[lead, c]
        if p != 1:
            r[lead] = r[lead] / p
        for k in range(rows):
            if k != lead and r[k, c] != 0:
                r[k] = r[k] - r[k, c] * r[lead]
        pivots.append(c)
        lead += 1
    return r, pivots


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of ``{x : m x = 0}`` as the columns of the returned matrix."""
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = zeros(cols, len(free))
    for j, f in enumerate(free):
        out[f, j] = ONE
        for k, p in enumerate(pivots):
            out[p, j] = -r[k, f]
    return out


def column_basis(m: np.ndarray) -> np.ndarray:
    """Independent columns of ``m`` spanning its column space (greedy, in order)."""
    if m.shape[1] == 0 or m.shape[0] == 0:
        return zeros(m.shape[0], 0)
    _, pivots = rref(m)
    return m[:, pivots]


def extend_basis(sub: np.ndarray, ambient: np.ndarray) -> list[int]:
    """Indices of columns of ``ambient`` that extend the column space of ``sub``.

    Greedy left to right, so the result is deterministic.
    """
    n = sub.shape[0]
    if n == 0:
        return []
    stacked = np.hstack([sub, ambient]) if sub.shape[1] else ambient
    _, pivots = rref(stacked)
    k = sub.shape[1]
    return [p - k for p in pivots if p >= k]


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution ``x`` of ``m x = b`` (b may have several columns), or None."""
    rows, cols = m.shape
    if rows == 0:
        return zeros(cols, b.shape[1])
    aug = np.hstack([m, b])
    r, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for k, p in enumerate(pivots):
        x[p] = r[k, cols:]
    return x


def inverse(m: np.ndarray) -> np.ndarray | None:
    n = m.shape[0]
    if m.shape != (n, n):
        return None
    if n == 0:
        return zeros(0, 0)
    r, pivots = rref(np.hstack([m, identity(n)]))
    if pivots[:n] != list(range(n)):
        return None
    return r[:, n:]


def is_invertible(m: np.ndarray) -> bool:
    n = m.shape[0]
    return m.shape == (n, n) and rank(m) == n


def det(m: np.ndarray) -> Fraction:
    n = m.shape[0]
    a = m.copy()
    d = ONE
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k, c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            d = -d
        d *= a[c, c]
        for k in range(c + 1, n):
            if a[k, c] != 0:
                a[k] = a[k] - (a[k, c] / a[c, c]) * a[c]
    return d


def intersect(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Basis of col(a) ∩ col(b)."""
    n = a.shape[0]
    if a.shape[1] == 0 or b.shape[1] == 0:
        return zeros(n, 0)
    ns = nullspace(np.hstack([a, -b]))
    if ns.shape[1] == 0:
        return zeros(n, 0)
    return column_basis(matmul(a, ns[: a.shape[1]]))


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def to_mod_p(m: np.ndarray, p: int) -> np.ndarray:
    """Reduce a rational matrix to integers mod p (denominators must be units)."""
    out = np.zeros(m.shape, dtype=np.int64)
    for idx, x in np.ndenumerate(m):
        num, den = x.numerator, x.denominator
        if den % p == 0:
            raise ZeroDivisionError(f"denominator {den} not invertible mod {p}")
        out[idx] = (num * pow(den, -1, p)) % p
    return out


def rref_mod_p(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    r = np.array(m, dtype=np.int64) % p
    rows, cols = r.shape
    pivots: list[int] = []
    lead = 0
    for c in range(cols):
        if lead >= rows:
            break
        nz = np.nonzero(r[lead:, c])[0]
        if nz.size == 0:
            continue
        piv = lead + int(nz[0])
        if piv != lead:
            r[[lead, piv]] = r[[piv, lead]]
        r[lead] = (r[lead] * pow(int(r[lead, c]), -1, p)) % p
        for k in range(rows):
            if k != lead and r[k, c]:
                r[k] = (r[k] - r[k, c] * r[lead]) % p
        pivots.append(c)
        lead += 1
    return r[:lead], pivots


# -- sparse elimination -------------------------------------------------------
# Hom-space systems are large but very sparse (entries 0/±1), so they are solved
# with dict rows instead of dense object arrays.

def sparse_rref(rows, ncols: int) -> dict[int, dict[int, Fraction]]:
    """Reduced echelon form of sparse rows; returns {pivot column: row}."""
    piv: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        r = {c: Q(v) for c, v in raw.items() if v != 0}
        for c in [c for c in r if c in piv]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in piv[c].items():
                nv = r.get(cc, ZERO) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        f = r[p]
        if f != 1:
            r = {c: v / f for c, v in r.items()}
        for prow in piv.values():
            g = prow.get(p)
            if g:
                for cc, vv in r.items():
                    nv = prow.get(cc, ZERO) - g * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        piv[p] = r
    return piv


def sparse_nullspace(rows, ncols: int) -> list[dict[int, Fraction]]:
    """Basis of the solution space of a homogeneous sparse system, as sparse vectors."""
    piv = sparse_rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    # column -> [(pivot, coefficient)] so each free column is handled once
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for p, r in piv.items():
        for c, v in r.items():
            if c != p:
                by_col.setdefault(c, []).append((p, v))
    out = []
    for f in free:
        vec = {f: ONE}
        for p, v in by_col.get(f, ()):
            vec[p] = -v
        out.append(vec)
    return out
