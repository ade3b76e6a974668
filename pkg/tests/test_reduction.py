import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from cmsyzygy.algebra import build_algebra
from cmsyzygy.catalog import enumerate_cmp
from cmsyzygy.dimer import analyze, reduction_criterion
from cmsyzygy.errors import MapsNotGiven, NotCM
from cmsyzygy.modules import (Morphism, decompose, ext1, hom_space, is_cm, is_isomorphic, loewy_label, projective,
                              radical, simple, top, top_vector)
from cmsyzygy.quiver import parse_quiver
from cmsyzygy.reduction import (ShortExactSequence, add_J_approximation, functor_F, ideal_J, inflate, is_in_J_perp,
                                lift_to_J_perp, natural_inclusion, quotient_algebra, reduction_report, restrict,
                                verify_generation_witness)

from conftest import algebra, small_trees

DATA_FILES = ["ex314.qp", "fig1_A.qp", "fig1_red1.qp", "fig1_red2.qp", "fig1_red6.qp", "fig1_red12.qp",
              "seven_vertex.qp"]


def _by_label(cat):
    return {e.label: e.rep for e in cat.entries}


def test_J_at_5(ex314_J):
    assert ex314_J.dim == 5
    assert ex314_J.describe() == "delta*sigmaA ≅ S(5) + sigmaA ≅ P(5) + e_5A ≅ P(5)"
    assert sorted((t.dim_vector, m, p) for t, m, p in ex314_J.types) == [
        ((0, 0, 0, 0, 1), 1, False), ((0, 1, 0, 0, 1), 2, True)]
    assert ex314_J.direct


def test_B_at_5(ex314, ex314_B, ex314_J):
    assert ex314_B.vertices == ("1", "2", "3", "4")
    assert {str(r) for r in ex314_B.relations} == {
        "alpha*beta - gamma*delta", "eps*alpha", "eps*gamma", "delta*eps", "beta*eps"}
    assert ex314_B.dim == 10
    assert ex314_J.dim + ex314_B.dim == ex314.dim


def test_report_ex314(ex314, ex314_cat):
    r = reduction_report(ex314, "5")
    assert [r.verdicts[k] for k in "abcd"] == [False] * 4
    assert r.verdicts["e"] is None and r.verdicts["f"] is None
    assert r.witnesses["b"] == "summand delta*sigmaA ≅ S(5) non-projective"
    r = reduction_report(ex314, "5", catalog=ex314_cat)
    assert all(v is False for v in r.verdicts.values())


@pytest.mark.parametrize("name", DATA_FILES)
def test_bcd_agree_everywhere(name):
    a = algebra(name)
    for v in a.vertices:
        r = reduction_report(a, v, search_witness=False)
        assert r.verdicts["b"] == r.verdicts["c"] == r.verdicts["d"] == r.verdicts["a"]


def test_fig1_A_vertex1_preserves():
    a = algebra("fig1_A.qp")
    j = ideal_J(a, "1")
    assert all(s.projective for s in j.summands)
    r = reduction_report(a, "1")
    assert r.verdicts["b"] and r.verdicts["f"]
    assert verify_generation_witness(a, r.witnesses["f"], [v for v in a.vertices if v != "1"])


def test_one_vertex_algebra():
    a = build_algebra(parse_quiver("vertices: 1\n").quiver, None)
    j = ideal_J(a, "1")
    assert j.dim == 1 and all(s.projective for s in j.summands)
    r = reduction_report(a, "1")
    assert r.verdicts["b"] and r.verdicts["c"] and r.verdicts["d"]
    assert quotient_algebra(a, "1").dim == 0


def test_isolated_vertex_quotient():
    pq = parse_quiver("vertices: 1 2 3\narrow a: 1 -> 2\n")
    a = build_algebra(pq.quiver, None)
    b = quotient_algebra(a, "3")
    assert b.dim == a.dim - 1 and b.vertices == ("1", "2")


def test_canonical_witness(ex314):
    for v in ex314.vertices:
        p = projective(ex314, v)
        r, inc = radical(p)
        s, proj = top(p)
        assert verify_generation_witness(ex314, ShortExactSequence(r, p, s, inc, proj), [v])


def test_bad_witnesses(ex314):
    p = projective(ex314, "4")
    r, inc = radical(p)
    s, proj = top(p)
    assert not verify_generation_witness(ex314, ShortExactSequence(r, p, s, inc, proj), ["1"])
    zero = Morphism.zero(r, p)
    assert not verify_generation_witness(ex314, ShortExactSequence(r, p, s, zero, proj), ["4"])
    with pytest.raises(MapsNotGiven):
        verify_generation_witness(ex314, ShortExactSequence(r, p, s), ["4"])


def test_natural_inclusion(ex314):
    f = natural_inclusion(ex314, "5", "4")
    assert f.is_morphism() and f.is_injective()
    g = natural_inclusion(ex314, "5", "3")  # delta*sigma generates a copy of S(5) only
    assert g.is_morphism() and not g.is_injective()


def test_functor_F_examples(ex314, ex314_J, ex314_B, ex314_cat):
    by = _by_label(ex314_cat)
    approx = add_J_approximation(ex314_J, by["1 5/2"])
    assert approx.image.dim_vector == (0, 1, 0, 0, 1)
    assert approx.cokernel.dim_vector == (1, 0, 0, 0, 0)
    fx = functor_F(ex314_J, by["1 5/2"], ex314_B)
    assert is_isomorphic(fx, simple(ex314_B, "1"))
    assert functor_F(ex314_J, projective(ex314, "5"), ex314_B).dim == 0
    for v in ex314_B.vertices:
        assert is_isomorphic(functor_F(ex314_J, projective(ex314, v), ex314_B), projective(ex314_B, v))


def test_approximation_is_universal(ex314, ex314_J, ex314_cat):
    # every map from a summand type of J factors through f_X: Hom(t, X) = Hom(t, image)
    for e in ex314_cat.entries:
        approx = add_J_approximation(ex314_J, e.rep)
        for t, _, _ in ex314_J.types:
            assert hom_space(t, e.rep).dim == hom_space(t, approx.image).dim


def test_ideal_J_invariants(ex314, ex314_J, ex314_B):
    for t, _, _ in ex314_J.types:
        assert is_cm(t)
        tv = top_vector(t)
        assert all(tv[v] == 0 for v in ex314.vertices if v != "5")
        for u in ex314_B.vertices:
            assert hom_space(t, simple(ex314, u)).dim == 0
        for t2, _, _ in ex314_J.types:
            assert ext1(t, t2).dim == 0


def test_J_perp(ex314, ex314_J, ex314_cat):
    by = _by_label(ex314_cat)
    for v in ex314.vertices:
        assert is_in_J_perp(ex314_J, projective(ex314, v))
    for t, _, _ in ex314_J.types:
        assert is_in_J_perp(ex314_J, t)
    assert not is_in_J_perp(ex314_J, by["1/2"])
    perp = sorted(e.label for e in ex314_cat.nonprojective() if is_in_J_perp(ex314_J, e.rep))
    assert perp == ["1 5/2", "2 3/4", "4/5", "5"]


def test_largest_quotient(ex314, ex314_J, ex314_B, ex314_cat, ex314_B_cat):
    targets = [inflate(e.rep, ex314) for e in ex314_B_cat.entries] + [simple(ex314, v) for v in ex314_B.vertices]
    for e in ex314_cat.entries:
        if not is_in_J_perp(ex314_J, e.rep):
            continue
        fx = functor_F(ex314_J, e.rep)
        assert is_cm(restrict(fx, ex314_B))
        for m in targets:
            assert hom_space(e.rep, m).dim == hom_space(fx, m).dim


def test_lift(ex314, ex314_J, ex314_B, ex314_B_cat):
    res = lift_to_J_perp(ex314_J, simple(ex314_B, "1"), ex314_B)
    assert loewy_label(res.module) == "1 5/2"
    assert is_in_J_perp(ex314_J, res.module)
    assert is_isomorphic(res.image, simple(ex314_B, "1"))
    res = lift_to_J_perp(ex314_J, projective(ex314_B, "2"), ex314_B)
    assert is_isomorphic(res.module, projective(ex314, "2"))
    y = _by_label(ex314_B_cat)["2 3/4"]
    res = lift_to_J_perp(ex314_J, y, ex314_B)
    assert loewy_label(res.module) == "2 3/4"
    assert all(a > b for a, b in zip(res.steps, res.steps[1:]))
    with pytest.raises(NotCM):
        lift_to_J_perp(ex314_J, simple(ex314_B, "2"), ex314_B)


def test_lift_every_B_module(ex314, ex314_J, ex314_B, ex314_B_cat):
    for e in ex314_B_cat.entries:
        res = lift_to_J_perp(ex314_J, e.rep, ex314_B)
        assert is_in_J_perp(ex314_J, res.module)
        assert is_isomorphic(res.image, e.rep)


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_random_tree_reduction_properties(seed):
    (q, w), = small_trees(seed, 1, max_cycles=5)
    a = build_algebra(q, w)
    an = analyze(q, w)
    for v in q.vertices:
        j = ideal_J(a, v)
        b = quotient_algebra(a, v)
        assert j.dim + b.dim == a.dim
        for t, _, _ in j.types:
            assert is_cm(t)
            assert all(x == 0 for u, x in top_vector(t).items() if u != v)
        r = reduction_report(a, v, search_witness=False)
        assert r.verdicts["b"] == r.verdicts["c"] == r.verdicts["d"]
        assert r.verdicts["b"] == bool(reduction_criterion(an, v))


@settings(max_examples=4, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_random_tree_lift_roundtrip(seed):
    (q, w), = small_trees(seed, 1, max_cycles=3)
    a = build_algebra(q, w)
    v = q.vertices[seed % len(q.vertices)]
    j = ideal_J(a, v)
    b = quotient_algebra(a, v)
    if b.dim == 0:
        return
    for e in enumerate_cmp(b, ext_table=False).entries:
        res = lift_to_J_perp(j, e.rep, b)
        assert is_in_J_perp(j, res.module)
        assert is_isomorphic(res.image, e.rep)
