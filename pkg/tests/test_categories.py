import random

import pytest
from _strategies import posets
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.categories import (
    BoundedCategory,
    CategoryError,
    SetDiagram,
    comma,
    generating_arrows,
    grothendieck,
    identity_functor,
    indiscrete_category,
    last_vertex_map,
    nerve,
    nerve_chains,
    nerve_h1_chains,
    opposite,
    poset_category,
    random_set_diagram,
    simplex_category,
    simplicial_replacement,
    surjective_simplex_category,
    suscat_square,
)
from combtopo.homology import cone_equivalence, homology, normalized_chains, sset_homology
from combtopo.paths import gallery_category
from combtopo.sset import TrustError, identity_map, isomorphic, standard_simplex


def _poset(drawn):
    elems, rel = drawn
    return poset_category(elems, lambda a, b: a == b or (a, b) in rel)


def test_nerve_of_a_chain_is_a_simplex():
    assert isomorphic(nerve(poset_category([0, 1, 2], lambda a, b: a <= b)), standard_simplex(2))


def test_indiscrete_nerve_needs_a_cap():
    with pytest.raises(CategoryError):
        nerve(indiscrete_category([0, 1]))
    assert nerve(indiscrete_category([0, 1]), 2).counts() == (2, 2, 2)


@settings(max_examples=40, deadline=None)
@given(posets())
def test_direct_chains_match_the_nerve(drawn):
    c = _poset(drawn)
    direct = nerve_chains(c, 3)
    via = normalized_chains(nerve(c), 3)
    assert [homology(direct, k) for k in range(3)] == [homology(via, k) for k in range(3)]


@settings(max_examples=40, deadline=None)
@given(posets())
def test_generators_of_a_poset_are_its_covers(drawn):
    elems, rel = drawn
    c = _poset(drawn)
    covers = {(a, b) for a, b in rel if not any((a, m) in rel and (m, b) in rel for m in elems)}
    assert {(m.src, m.tgt) for m in generating_arrows(c)} == covers


@settings(max_examples=40, deadline=None)
@given(posets())
def test_low_degree_chains_give_exact_h0_h1(drawn):
    c = _poset(drawn)
    small, full = nerve_h1_chains(c), nerve_chains(c, 2)
    assert [homology(small, k) for k in range(2)] == [homology(full, k) for k in range(2)]
    with pytest.raises(TrustError):
        homology(small, 2)


def test_low_degree_chains_on_a_category_with_many_parallel_arrows():
    tt = corpus.two_triangles()
    a, b = corpus.ENDPOINTS["two-triangles"]
    cat = gallery_category(tt, a, b, 3)
    small, full = nerve_h1_chains(cat), nerve_chains(cat, 2)
    assert [str(homology(small, k)) for k in range(2)] == [str(homology(full, k)) for k in range(2)] == ["Z", "0"]


def test_simplices_of_a_point():
    # [0] -> [1] twice, [1] -> [0] once, and two constant self-maps of [1]
    sc = simplex_category(standard_simplex(0), 1)
    assert len(sc.objects) == 2 and len(sc.non_identity()) == 5
    sc.check()


def test_last_vertex_map_is_an_equivalence():
    k = standard_simplex(1)
    lv = last_vertex_map(k, 2)
    lv.check()
    assert cone_equivalence(lv, 1).acyclic


def test_surjective_simplices_over_identity():
    s = surjective_simplex_category(identity_map(standard_simplex(1)), 2)
    s.check()
    assert s.objects


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_replacement_is_the_opposite_nerve(seed):
    fd = random_set_diagram(random.Random(seed), 3, 4)
    rep = simplicial_replacement(fd)
    assert isomorphic(rep, nerve(opposite(grothendieck(fd))))
    assert sset_homology(rep, 1) == sset_homology(nerve(grothendieck(fd)), 1)


def test_set_diagram_round_trip():
    fd = random_set_diagram(random.Random(3), 3, 4)
    back = SetDiagram.from_json(fd.to_json())
    back.check()
    assert back.to_json() == fd.to_json()


def test_category_json_round_trip():
    c = poset_category("abc", lambda x, y: x <= y)
    back = BoundedCategory.from_json(c.to_json())
    back.check()
    assert back.to_json() == c.to_json()


def test_set_diagram_rejects_bad_action():
    c01 = poset_category([0, 1], lambda a, b: a <= b)
    fd = SetDiagram(c01, {0: ("x",), 1: ("y",)}, lambda f, x: "z")
    with pytest.raises(CategoryError):
        fd.check()


@pytest.mark.parametrize("cut", [1, 2])
def test_arrow_square_models_the_nerve(cut):
    c = poset_category([0, 1, 2], lambda a, b: a <= b)
    cyl, ner = suscat_square(c, lambda o: 0 if o < cut else 1)
    assert sset_homology(cyl, 2) == sset_homology(ner, 2)


def test_comma_over_terminal_object():
    c = poset_category([0, 1], lambda a, b: a <= b)
    cm, proj = comma(identity_functor(c), 1, "over")
    assert len(cm.objects) == 2
    with pytest.raises(ValueError):
        comma(identity_functor(c), 1, "sideways")
