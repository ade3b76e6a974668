from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cmsyzygy.errors import ParseError
from cmsyzygy.quiver import (Path, Potential, Quiver, canonical_rotation, chordless_cycles, compose,
                             cyclic_derivative, format_quiver, infer_potential, jacobian_relations, parse_quiver,
                             validate_dimer_tree)

from conftest import parsed
from oracles import chordless_cycles_oracle, jacobian_relation_dicts

TRIANGLE = """
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 1
cycle +: a b c
"""


def test_parse_triangle():
    pq = parse_quiver(TRIANGLE)
    assert pq.quiver.vertices == ("1", "2", "3")
    assert pq.quiver.source("b") == "2" and pq.quiver.target("b") == "3"
    assert pq.potential.terms == ((1, ("a", "b", "c")),)
    assert pq.relations is None and pq.involution is None


def test_parse_relations_and_involution():
    pq = parsed("ex314.qp")
    assert len(pq.relations) == 7
    assert str(pq.relations.relations[0]) == "alpha*beta - gamma*delta"
    glued = parsed("fig42.qp")
    assert sorted(glued.involution["fixed"]) == ["1", "2"]
    assert ("3", "3'") in glued.involution["pairs"]


@pytest.mark.parametrize("text,line", [
    ("vertices: 1 2\narrow a: 1 -> 3\n", 2),
    ("vertices: 1 2\narrow a: 1 -> 2\narrow a: 2 -> 1\n", 3),
    ("vertices: 1 2\narrow a: 1 -> 2\ncycle +: a b\n", 3),
    ("vertices: 1 2\nbogus line\n", 2),
    ("vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation: a*a\n", 4),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        parse_quiver(text)
    assert e.value.line == line


def test_cycles_and_relations_together_rejected():
    with pytest.raises(ParseError):
        parse_quiver(TRIANGLE + "relation: a*b\n")


def test_format_roundtrip():
    for name in ("ex314.qp", "fig1_A.qp", "fig42.qp", "seven_vertex.qp"):
        pq = parsed(name)
        again = parse_quiver(format_quiver(*pq))
        assert again == pq


def test_paths_compose():
    q = parse_quiver(TRIANGLE).quiver
    ab = Path.of(q, ["a", "b"])
    assert (ab.source, ab.target) == ("1", "3")
    assert compose(ab, Path.of(q, ["c"])).arrows == ("a", "b", "c")
    assert compose(ab, Path.of(q, ["a"])) is None
    assert compose(Path.trivial("1"), ab) == ab
    with pytest.raises(ValueError):
        Path.of(q, ["a", "c"])


def test_canonical_rotation():
    assert canonical_rotation(("c", "a", "b")) == ("a", "b", "c")


def test_cyclic_derivative_ex314():
    w = parsed("ex314_potential.qp").potential
    assert cyclic_derivative(w, "eps") == {("alpha", "beta"): 1, ("gamma", "delta"): -1}
    assert cyclic_derivative(w, "beta") == {("eps", "alpha"): 1, ("sigma", "tau"): -1}


def test_jacobian_relations_match_oracle():
    for name in ("ex314_potential.qp", "fig1_A.qp", "seven_vertex.qp"):
        pq = parsed(name)
        mine = [{p.arrows: c for c, p in r.terms} for r in jacobian_relations(pq.quiver, pq.potential)]
        theirs = jacobian_relation_dicts(pq.quiver, pq.potential.terms)
        assert sorted(map(sorted, (d.items() for d in mine))) == sorted(map(sorted, (d.items() for d in theirs)))


def test_infer_potential_recovers_ex314():
    pq = parsed("ex314.qp")
    w = infer_potential(pq.quiver, pq.relations)
    assert w.canonical() == parsed("ex314_potential.qp").potential.canonical()


def test_infer_potential_fails_on_wrong_relations():
    pq = parse_quiver(TRIANGLE.replace("cycle +: a b c", "relation: a*b"))
    assert infer_potential(pq.quiver, pq.relations) is None


def _vertex_cycles(q, cycles):
    out = set()
    for c in cycles:
        vs = [q.source(a) for a in c]
        k = vs.index(min(vs))
        out.add(tuple(vs[k:] + vs[:k]))
    return out


@st.composite
def digraphs(draw):
    n = draw(st.integers(2, 6))
    vs = [str(k) for k in range(1, n + 1)]
    pairs = [(s, t) for s in vs for t in vs if s < t]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=10))
    arrows = []
    for k, (s, t) in enumerate(chosen):
        if draw(st.booleans()):
            s, t = t, s
        arrows.append((f"x{k}", s, t))
    return Quiver(tuple(vs), tuple(arrows))


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_chordless_cycles_match_networkx(q):
    # no 2-cycles here (at most one arrow per vertex pair), matching the dimer setting
    assert _vertex_cycles(q, chordless_cycles(q)) == chordless_cycles_oracle(q)


def test_validation_examples():
    assert validate_dimer_tree(*parsed("ex314_potential.qp")[:2]).ok
    rep = validate_dimer_tree(*parsed("fig1_A.qp")[:2])
    assert not rep.ok and any("not a tree" in f for f in rep.failures)
    for name in ("fig1_red1.qp", "fig1_red2.qp", "fig1_red6.qp", "fig1_red12.qp", "seven_vertex.qp", "fig42.qp"):
        assert validate_dimer_tree(*parsed(name)[:2]).ok, name


def test_validation_failures():
    q = Quiver(("1", "2"), (("a", "1", "2"), ("b", "2", "1")))
    rep = validate_dimer_tree(q, Potential(((1, ("a", "b")),)))
    assert not rep.ok and any("2-cycles" in f for f in rep.failures)
    pq = parse_quiver(TRIANGLE)
    assert "no potential given" in validate_dimer_tree(pq.quiver, None).failures
    extra = parse_quiver(TRIANGLE + "arrow d: 1 -> 3\n").quiver
    rep = validate_dimer_tree(extra, Potential(((1, ("a", "b", "c")),)))
    assert not rep.ok


def test_potential_sign_note():
    pq = parsed("ex314_potential.qp")
    same = Potential(tuple((1, c) for _, c in pq.potential.terms))
    rep = validate_dimer_tree(pq.quiver, same)
    assert rep.ok and rep.notes


def test_relation_coefficients_are_fractions():
    rel = parsed("ex314.qp").relations.relations[0]
    assert all(isinstance(c, Fraction) for c, _ in rel.terms)
