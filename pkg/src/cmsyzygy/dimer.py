"""Combinatorics of dimer tree quivers: zigzag paths, weights and CM-type."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Ambiguous, NotBoundary, NotDimerTree
from .quiver import Potential, Quiver, chordless_cycles, cycles_by_arrow, validate_dimer_tree


def _successor(cycle, a):
    k = cycle.index(a)
    return cycle[(k + 1) % len(cycle)]


def _predecessor(cycle, a):
    k = cycle.index(a)
    return cycle[k - 1]


def _cycles_of(cycles, a):
    return [c for c in cycles if a in c]


def zigzag_path(q: Quiver, cycles, beta: str) -> list[str]:
    """The maximal zigzag path starting with the boundary arrow ``beta``.

    Each step continues inside the chordless cycle not used by the previous
    step; the path stops at the first boundary arrow after ``beta``.
    """
    return _walk(q, cycles, beta, forward=True)


def cozigzag_path(q: Quiver, cycles, beta: str) -> list[str]:
    """The maximal zigzag path ending with ``beta``."""
    return _walk(q, cycles, beta, forward=False)


def _walk(q, cycles, beta, forward):
    cs = _cycles_of(cycles, beta)
    if len(cs) != 1:
        raise NotBoundary(f"{beta} lies in {len(cs)} chordless cycles")
    step = _successor if forward else _predecessor
    path = [beta]
    cur_cycle = cs[0]
    cur = beta
    for _ in range(len(q.arrows) + 1):
        nxt = step(cur_cycle, cur)
        path.append(nxt)
        owners = _cycles_of(cycles, nxt)
        if len(owners) == 1:
            return path if forward else path[::-1]
        others = [c for c in owners if c is not cur_cycle and c != cur_cycle]
        if len(owners) > 2 or len(others) != 1:
            raise Ambiguous(f"arrow {nxt} does not have a unique other chordless cycle")
        cur_cycle, cur = others[0], nxt
    raise Ambiguous("zigzag path does not terminate")


def weight_of_length(n: int) -> int:
    return 1 if n % 2 else 2


@dataclass
class DimerAnalysis:
    quiver: Quiver
    cycles: list
    boundary: list
    interior: list
    zigzag: dict  # boundary arrow -> path starting with it
    cozigzag: dict  # boundary arrow -> path ending with it
    weight: dict
    coweight: dict
    total_weight: int
    notes: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.total_weight // 2

    @property
    def cm_type(self) -> str:
        return f"A_{self.N - 2}"

    def length(self, beta: str) -> int:
        return len(self.zigzag[beta])


def weights(q: Quiver, cycles=None) -> DimerAnalysis:
    if cycles is None:
        cycles = chordless_cycles(q)
    by = cycles_by_arrow(cycles)
    boundary = sorted(a for a in q.arrow_ids if len(by.get(a, ())) == 1)
    interior = sorted(a for a in q.arrow_ids if len(by.get(a, ())) == 2)
    other = [a for a in q.arrow_ids if len(by.get(a, ())) not in (1, 2)]
    if other:
        raise NotDimerTree("arrows in no or more than two chordless cycles: " + ", ".join(other))
    zig = {b: zigzag_path(q, cycles, b) for b in boundary}
    coz = {b: cozigzag_path(q, cycles, b) for b in boundary}
    w = {b: weight_of_length(len(zig[b])) for b in boundary}
    cw = {b: weight_of_length(len(coz[b])) for b in boundary}
    total = sum(w.values())
    notes = []
    if any(len(p) == 1 for p in zig.values()):
        notes.append("a boundary arrow is its own zigzag path")
    if total % 2:
        raise NotDimerTree(f"odd total weight {total}")
    return DimerAnalysis(q, cycles, boundary, interior, zig, coz, w, cw, total, notes)


def analyze(q: Quiver, w: Potential | None) -> DimerAnalysis:
    """Validate and analyse; raises NotDimerTree listing the failed axioms."""
    rep = validate_dimer_tree(q, w)
    if not rep.ok:
        raise NotDimerTree("; ".join(rep.failures))
    an = weights(q, rep.cycles)
    an.notes.extend(rep.notes)
    return an


@dataclass
class CriterionVerdict:
    vertex: str
    value: bool
    witness: dict | None = None
    boundary_triangles: list = field(default_factory=list)  # 3-cycles with β, γ boundary, δ interior

    def __bool__(self):
        return self.value


def reduction_criterion(an: DimerAnalysis, i: str) -> CriterionVerdict:
    """Whether reducing at i keeps the CM-type (local 3-cycle test)."""
    q = an.quiver
    bset = set(an.boundary)
    iset = set(an.interior)
    tri = []
    for c in an.cycles:
        if len(c) != 3:
            continue
        for k in range(3):
            beta, gamma, delta = c[k], c[(k + 1) % 3], c[(k + 2) % 3]
            if q.target(beta) != i:
                continue
            if beta in bset and gamma in bset and delta in iset:
                tri.append((beta, gamma, delta))
    for beta, gamma, delta in tri:
        if an.coweight[beta] == 1 and an.weight[gamma] == 1:
            return CriterionVerdict(i, True, {
                "cycle": (beta, gamma, delta),
                "coweight": an.coweight[beta], "weight": an.weight[gamma],
                "cozigzag": an.cozigzag[beta], "zigzag": an.zigzag[gamma],
            }, tri)
    wit = None
    if tri:
        beta, gamma, delta = tri[0]
        wit = {"cycle": tri[0], "coweight": an.coweight[beta], "weight": an.weight[gamma],
               "cozigzag": an.cozigzag[beta], "zigzag": an.zigzag[gamma]}
    return CriterionVerdict(i, False, wit, tri)


@dataclass
class MinimalityReport:
    minimal: bool
    verdicts: dict  # vertex -> CriterionVerdict

    def __bool__(self):
        return self.minimal


def cm_minimal(an: DimerAnalysis) -> MinimalityReport:
    verdicts = {v: reduction_criterion(an, v) for v in an.quiver.vertices}
    return MinimalityReport(not any(verdicts.values()), verdicts)


def reduced_potential(q: Quiver, w: Potential, removed) -> tuple[Quiver, Potential]:
    """Quiver and potential after deleting vertices (cycles through them vanish)."""
    qb = q.without_vertices(removed)
    return qb, w.restricted(qb)
