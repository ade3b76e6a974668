"""Random small dimer trees, built by gluing fresh polygons onto boundary arrows."""
from __future__ import annotations

import random

from .quiver import Potential, Quiver, cycles_by_arrow, validate_dimer_tree


def random_dimer_tree(rng: random.Random, n_cycles: int, lengths=(3, 3, 3, 4, 5)):
    """A validated dimer tree with ``n_cycles`` chordless cycles.

    Starts from one polygon and repeatedly glues a new polygon with fresh
    vertices onto a boundary arrow, giving it the opposite sign.
    """
    for _ in range(100):
        q, w = _attempt(rng, n_cycles, lengths)
        if validate_dimer_tree(q, w).ok:
            return q, w
    raise RuntimeError("could not generate a dimer tree")


def _attempt(rng, n_cycles, lengths):
    counter = [0]

    def fresh():
        counter[0] += 1
        return str(counter[0])

    arrows: list[tuple[str, str, str]] = []
    cycles: list[tuple[int, tuple[str, ...]]] = []

    def add_arrow(s, t):
        a = f"a{len(arrows) + 1}"
        arrows.append((a, s, t))
        return a

    L = rng.choice(lengths)
    vs = [fresh() for _ in range(L)]
    cyc = tuple(add_arrow(vs[k], vs[(k + 1) % L]) for k in range(L))
    cycles.append((1, cyc))
    for _ in range(n_cycles - 1):
        by = cycles_by_arrow([c for _, c in cycles])
        boundary = [a for a, _, _ in arrows if len(by[a]) == 1]
        a = rng.choice(boundary)
        sign = -cycles[by[a][0]][0]
        _, s, t = next(x for x in arrows if x[0] == a)
        L = rng.choice(lengths)
        path = [t] + [fresh() for _ in range(L - 2)] + [s]
        new = tuple(add_arrow(path[k], path[k + 1]) for k in range(L - 1))
        cycles.append((sign, (a,) + new))
    vertices = sorted({v for _, s, t in arrows for v in (s, t)}, key=int)
    return Quiver(tuple(vertices), tuple(arrows)), Potential(tuple(cycles))
