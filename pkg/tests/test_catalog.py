import pytest

from cmsyzygy import build_algebra
from cmsyzygy.catalog import (enumerate_cmp, radical_generation_closure, radical_summands, stable_summary,
                              submodules_mod_p)
from cmsyzygy.errors import SearchSpaceTooLarge
from cmsyzygy.modules import ext2, is_cm, is_indecomposable, is_isomorphic, projective, projective_cover

from conftest import small_trees
from oracles import hom_dim

# labels frozen after the Ext table below was checked against the sympy Hom oracle
EX314_LABELS = ["1/2 3/4", "2/4", "3/4/5", "4/1 5/2", "5/2", "2", "4", "5", "1/2", "3/4", "4/5", "1 5/2", "2 3/4"]
EX314_B_NONPROJ = ["1", "4", "2 3/4"]


def test_ex314_counts(ex314_cat, ex314_B_cat):
    # 13 indecomposables over A, 8 of them non-projective; 7 over B with 3 non-projective
    assert len(ex314_cat) == 13 and len(ex314_cat.nonprojective()) == 8
    assert len(ex314_B_cat) == 7 and len(ex314_B_cat.nonprojective()) == 3


def test_ex314_labels(ex314_cat, ex314_B_cat):
    assert ex314_cat.labels() == EX314_LABELS
    assert ex314_B_cat.labels(nonprojective_only=True) == EX314_B_NONPROJ


def test_entries_are_indecomposable_cm_and_distinct(ex314_cat):
    es = ex314_cat.entries
    for e in es:
        assert is_cm(e.rep) and is_indecomposable(e.rep)
    for x in range(len(es)):
        for y in range(x + 1, len(es)):
            assert not is_isomorphic(es[x].rep, es[y].rep)


def test_projectives_flagged(ex314, ex314_cat):
    tops = {e.top for e in ex314_cat.entries if e.projective}
    assert tops == set(ex314.vertices)
    for e in ex314_cat.entries:
        if e.projective:
            assert is_isomorphic(e.rep, projective(ex314, e.top))


def test_omega_permutes_nonprojectives(ex314_cat):
    nonproj = {e.index for e in ex314_cat.nonprojective()}
    images = [ex314_cat.omega[k] for k in nonproj]
    assert all(len(x) == 1 for x in images)
    assert {x[0] for x in images} == nonproj


def test_ext_table_matches_hom_oracle(ex314_cat):
    # 0 -> Hom(M,N) -> Hom(P,N) -> Hom(ΩM,N) -> Ext^1(M,N) -> 0
    for m in ex314_cat.entries:
        cov = projective_cover(m.rep)
        for n in ex314_cat.entries:
            want = hom_dim(cov.kernel, n.rep) - hom_dim(cov.projective, n.rep) + hom_dim(m.rep, n.rep)
            assert ex314_cat.ext[m.index, n.index] == want, (m.label, n.label)


def test_three_calabi_yau(ex314_cat):
    # Ext^1(X, Y) and Ext^2(Y, X) have the same dimension on non-projective CM modules
    nonproj = ex314_cat.nonprojective()
    for x in nonproj:
        for y in nonproj:
            assert ex314_cat.ext[x.index, y.index] == ext2(y.rep, x.rep).dim


def test_find(ex314_cat):
    for e in ex314_cat.entries:
        assert ex314_cat.find(e.rep) == e.index


def test_radical_closure_is_everything(ex314, ex314_cat, ex314_B, ex314_B_cat):
    assert radical_generation_closure(ex314, ex314_cat) == {e.index for e in ex314_cat.nonprojective()}
    assert radical_generation_closure(ex314_B, ex314_B_cat) == {e.index for e in ex314_B_cat.nonprojective()}


def test_radical_summands_in_catalog(ex314, ex314_cat):
    rs = radical_summands(ex314, ex314_cat)
    assert rs and all(not ex314_cat.entries[k].projective for k in rs)


def test_stable_summary_ex314(ex314_cat, ex314_J, ex314_B_cat):
    ss = stable_summary(ex314_cat, ex314_J, ex314_B_cat)
    pairs = {(ex314_cat.entries[x].label, ex314_B_cat.entries[y].label) for x, y in ss.image.items()}
    # the three survivors and their images over B
    assert pairs == {("1 5/2", "1"), ("4/5", "4"), ("2 3/4", "2 3/4")}
    assert ss.ext_preserved is True


@pytest.mark.parametrize("char", [0, 3, 5])
def test_other_characteristics_agree(ex314, ex314_cat, char):
    cat = enumerate_cmp(ex314, field_char=char, ext_table=False)
    assert cat.settings["char"] == (char or 3)
    assert sorted(cat.labels()) == sorted(ex314_cat.labels())


def test_non_prime_rejected(ex314):
    with pytest.raises(ValueError):
        enumerate_cmp(ex314, field_char=4)


def test_dmax_bounds(ex314):
    cat = enumerate_cmp(ex314, dmax=1, ext_table=False)
    assert all(max(e.dim_vector) <= 1 for e in cat.entries)
    assert {"2", "4", "5", "1/2", "2/4"} <= set(cat.labels())


def test_search_limit(ex314):
    with pytest.raises(SearchSpaceTooLarge):
        enumerate_cmp(ex314, limit=3)


def test_submodules_mod_p_of_uniserial(ex314):
    s = projective(ex314, "2")
    subs = list(submodules_mod_p(s, 2, {v: 9 for v in ex314.vertices}, 100))
    # P(2) = 2/4 is uniserial: nonzero submodules S(4) and P(2)
    assert sorted(sum(d.values()) for d, _ in subs) == [1, 2]


def test_rank_two_ambient_adds_nothing_for_ex314(ex314, ex314_cat):
    cat = enumerate_cmp(ex314, ambient_rank=2, ext_table=False)
    assert sorted(cat.labels()) == sorted(ex314_cat.labels())


def test_dot(ex314_cat):
    dot = ex314_cat.to_dot()
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert dot.count("shape=box") == 5 and dot.count("shape=ellipse") == 8


def test_random_tree_catalogs():
    for q, w in small_trees(7, 6):
        a = build_algebra(q, w)
        cat = enumerate_cmp(a)
        nonproj = {e.index for e in cat.nonprojective()}
        assert radical_generation_closure(a, cat) == nonproj
        assert {x for k in nonproj for x in cat.omega[k]} == nonproj
