"""Acceptance criteria 1-6, one test (or small group) per criterion.

Each test records a PASS/FAIL line in RESULTS; conftest prints them at the end
of the session.  ``python3 tests/test_acceptance.py`` runs the same checks
without pytest.
"""
import time

import pytest

from cmsyzygy import build_algebra
from cmsyzygy.catalog import enumerate_cmp, stable_summary
from cmsyzygy.dimer import analyze, cm_minimal, reduction_criterion
from cmsyzygy.golden import (EX314_B_RELATIONS, EX314_DIM_STATED, FIG42_QB_ARROWS, FIG42_QB_VERTICES, check_tree,
                             random_trees)
from cmsyzygy.quiver import validate_dimer_tree
from cmsyzygy.reduction import functor_F, ideal_J, module_tag, quotient_algebra, reduction_report
from cmsyzygy.skew import action_from_involution, fibered_product, minimality_transfer_check, skew_quiver

from conftest import algebra, parsed

RESULTS: dict = {}

# (dimension vector, label) for every indecomposable in the two catalogs
EX314_CATALOG = {
    ((1, 1, 1, 1, 0), "1/2 3/4"), ((0, 1, 0, 1, 0), "2/4"), ((0, 0, 1, 1, 1), "3/4/5"),
    ((1, 1, 0, 1, 1), "4/1 5/2"), ((0, 1, 0, 0, 1), "5/2"), ((0, 1, 0, 0, 0), "2"), ((0, 0, 0, 1, 0), "4"),
    ((0, 0, 0, 0, 1), "5"), ((1, 1, 0, 0, 0), "1/2"), ((0, 0, 1, 1, 0), "3/4"), ((0, 0, 0, 1, 1), "4/5"),
    ((1, 1, 0, 0, 1), "1 5/2"), ((0, 1, 1, 1, 0), "2 3/4"),
}
EX314_SURVIVORS = {("1 5/2", "1"), ("4/5", "4"), ("2 3/4", "2 3/4")}
N_RANDOM_TREES = 20


class record:
    """Context manager storing PASS/FAIL for one criterion."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, kind, exc, tb):
        dt = time.perf_counter() - self.t0
        detail = f"{dt:.1f}s" if kind is None else f"{kind.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        RESULTS[self.name] = (kind is None, detail)
        return False


def test_criterion_1_dimension():
    # The stated dimension is 13; the algebra presented by these relations has dimension 15
    # (P(4) contains e_4, eps, sigma and eps*alpha = sigma*tau).  Left failing on purpose.
    with record("1 dim A = 13"):
        a = algebra("ex314.qp")
        assert a.dim == EX314_DIM_STATED, f"dim A = {a.dim}"


def test_criterion_1_reduction():
    with record("1 J, verdicts, B, F((1 5/2))"):
        t0 = time.perf_counter()
        a = algebra("ex314.qp")
        j = ideal_J(a, "5")
        tags = sorted("P(5)" if s.projective else module_tag(s.rep) for s in j.summands)
        assert tags == ["P(5)", "P(5)", "S(5)"] and j.dim == 5
        cat = enumerate_cmp(a, ext_table=False)
        rep = reduction_report(a, "5", catalog=cat)
        assert rep.verdicts == dict.fromkeys("abcdef", False)
        b = quotient_algebra(a, "5")
        assert {str(r) for r in b.relations} == EX314_B_RELATIONS
        x = next(e.rep for e in cat.entries if e.label == "1 5/2")
        fx = functor_F(j, x, b)
        assert fx.dim == 1 and fx.dims["1"] == 1
        assert time.perf_counter() - t0 < 10


def test_criterion_2_catalogs():
    with record("2 catalogs and stable bijection"):
        t0 = time.perf_counter()
        a = algebra("ex314.qp")
        cat = enumerate_cmp(a, a.dim_vector(), field_char=2)
        b = quotient_algebra(a, "5")
        cat_b = enumerate_cmp(b, b.dim_vector(), field_char=2)
        assert {(e.dim_vector, e.label) for e in cat.entries} == EX314_CATALOG
        assert len(cat) == 13 and len(cat.nonprojective()) == 8
        assert len(cat_b) == 7 and len(cat_b.nonprojective()) == 3
        ss = stable_summary(cat, ideal_J(a, "5"), cat_b)
        assert {(cat.entries[x].label, cat_b.entries[y].label) for x, y in ss.image.items()} == EX314_SURVIVORS
        assert time.perf_counter() - t0 < 60


def test_criterion_3_reduction_family():
    with record("3 fig1 family: non-dimer parent, A_2 reductions, minimality"):
        pq = parsed("fig1_A.qp")
        assert not validate_dimer_tree(pq.quiver, pq.potential).ok
        for name, right in (("fig1_red1.qp", False), ("fig1_red2.qp", False),
                            ("fig1_red6.qp", True), ("fig1_red12.qp", True)):
            pq = parsed(name)
            an = analyze(pq.quiver, pq.potential)
            assert an.total_weight == 8 and an.cm_type == "A_2", name
            mr = cm_minimal(an)
            if right:
                assert mr.minimal, name
            a = build_algebra(pq.quiver, pq.potential)
            for v in pq.quiver.vertices:
                assert bool(mr.verdicts[v]) == reduction_report(a, v, search_witness=False).verdicts["b"], (name, v)


def test_criterion_4_seven_vertex():
    with record("4 seven-vertex example"):
        pq = parsed("seven_vertex.qp")
        an = analyze(pq.quiver, pq.potential)
        verdicts = {v: reduction_criterion(an, v) for v in pq.quiver.vertices}
        assert [v for v, x in verdicts.items() if x] == ["7"]
        w7 = verdicts["7"].witness
        assert sorted((len(w7["zigzag"]), len(w7["cozigzag"]))) == [3, 5]
        assert len(verdicts["4"].witness["cozigzag"]) == 4


def test_criterion_5_skew():
    with record("5 skew quiver and transfer"):
        pq = parsed("fig42_q0.qp")
        q, w, g = fibered_product(pq.quiver, pq.potential, "alpha")
        sq = skew_quiver(q, g)
        assert set(sq.quiver.vertices) == FIG42_QB_VERTICES
        assert set(sq.quiver.arrows) == FIG42_QB_ARROWS
        glued = parsed("fig42.qp")
        g2 = action_from_involution(glued.quiver, glued.involution)
        assert set(skew_quiver(glued.quiver, g2).quiver.arrows) == FIG42_QB_ARROWS
        assert minimality_transfer_check(pq.quiver, pq.potential, "alpha").agree


@pytest.mark.slow
def test_criterion_6_random_trees():
    with record(f"6 property sweep on {N_RANDOM_TREES} random dimer trees"):
        trees = random_trees(N_RANDOM_TREES, seed=0, max_cycles=6)
        assert max(len(w.terms) for _, w in trees) == 6
        bad = [f"tree {k}: {m}" for k, (q, w) in enumerate(trees) for m in check_tree(q, w)]
        assert not bad, "; ".join(bad[:5])


def summary_lines():
    return [f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})" for name, (ok, detail) in RESULTS.items()]


if __name__ == "__main__":
    for fn in list(globals().values()):
        if callable(fn) and getattr(fn, "__name__", "").startswith("test_criterion"):
            try:
                fn()
            except Exception:
                pass
    print("\n".join(summary_lines()))
