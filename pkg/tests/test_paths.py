import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.categories import nerve_chains, nerve_h1_chains
from combtopo.homology import homology, reduced_homology
from combtopo.paths import (
    BinaryFraction,
    Gallery,
    StonePath,
    check_adjunction,
    comb_category,
    comb_sequences,
    fat_and_reg_subposets,
    functor_from_fat,
    galleries,
    gallery_category,
    gallery_morphism_ok,
    interpolate,
    is_fat,
    nonmaximal_retraction,
    reduce_gallery,
    stone_paths,
    stone_poset,
    to_gallery,
    to_gallery_mor,
    transition_poset,
)
from combtopo.sset import ComplexError, SimplicialComplex

TT = corpus.two_triangles()
A, B = corpus.ENDPOINTS["two-triangles"]


def _brute_paths(k, a, b, level):
    simplices = sorted(k.simplices, key=k.simplex_key)
    n = 2**level
    out = 0
    for mid in itertools.product(simplices, repeat=n - 1):
        v = (frozenset(a),) + mid + (frozenset(b),)
        out += all((x | y) in k.simplices for x, y in zip(v, v[1:]))
    return out


def _runs(p):
    """Values of the maximal runs of equal pieces, read off directly from the grid."""
    seq = []
    for i, v in enumerate(p.values):
        if i:
            seq.append(p.values[i - 1] | v)
        seq.append(v)
    return [v for i, v in enumerate(seq) if i == 0 or v != seq[i - 1]]


def test_binary_fractions_normalise():
    assert BinaryFraction(2, 2) == BinaryFraction(1, 1)
    assert BinaryFraction.of(Fraction(3, 4)) == BinaryFraction(3, 2)
    assert BinaryFraction(0, 3) == BinaryFraction(0, 0)
    assert BinaryFraction(1, 2) < BinaryFraction(1, 1)
    with pytest.raises(ValueError):
        BinaryFraction.of(Fraction(1, 3))


@pytest.mark.parametrize("level,count", [(0, 0), (1, 3), (2, 315)])
def test_stone_path_counts(level, count):
    assert len(stone_paths(TT, A, B, level)) == count == _brute_paths(TT, A, B, level)


def test_stone_paths_on_a_triangle(triangle):
    t = (0, 1, 2)
    for level in range(3):
        assert len(stone_paths(triangle, t, t, level)) == _brute_paths(triangle, t, t, level)
    assert len(stone_poset(triangle, t, t, 1).objects) == 7


LEVEL2 = stone_paths(TT, A, B, 2)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(LEVEL2))
def test_normal_form_round_trip(p):
    p.check_normal_form()
    ts, vals = p.normal_form()
    assert StonePath.from_normal_form(p.level, ts, vals) == p
    assert StonePath.from_json(p.to_json()) == p
    assert list(vals) == _runs(p)
    assert interpolate(p).normal_form() == p.normal_form()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(LEVEL2), st.sampled_from(LEVEL2))
def test_interpolation_is_monotone(p, q):
    if p.leq(q):
        assert interpolate(p).leq(interpolate(q))


def test_values_between_grid_points():
    p = LEVEL2[0]
    assert p(Fraction(1, 8)) == p.values[0] | p.values[1]
    assert p(BinaryFraction(1, 1)) == p.values[2]


def test_fat_and_regular_counts():
    poset = stone_poset(TT, A, B, 2)
    fat, reg, both = fat_and_reg_subposets(poset, TT)
    assert (len(fat.objects), len(reg.objects), len(both.objects)) == (131, 17, 9)
    # independent reading of fatness: odd number of runs, maximal exactly at even positions
    brute = [p for p in poset.objects if len(_runs(p)) % 2 == 1 and all(TT.is_maximal(v) == (i % 2 == 0) for i, v in enumerate(_runs(p)))]
    assert set(brute) == set(fat.objects)


def test_fat_paths_need_maximal_endpoints():
    poset = stone_poset(TT, (1, 2), B, 1)
    with pytest.raises(ComplexError):
        fat_and_reg_subposets(poset, TT)
    _, reg, _ = fat_and_reg_subposets(poset, TT, fat=False)
    assert reg is not None


def test_fat_poset_homology():
    got = []
    for level in range(3):
        fat, _, _ = fat_and_reg_subposets(stone_poset(TT, A, B, level), TT)
        c = nerve_chains(fat, 2)
        got.append([str(homology(c, k)) for k in range(2)])
    assert got == [["0", "0"], ["Z", "0"], ["Z", "0"]]


def test_gallery_validation():
    with pytest.raises(ValueError):
        Gallery([A, (1, 2)])
    g = Gallery([A, (1, 2), B])
    g.check(TT)
    with pytest.raises(ComplexError):
        Gallery([A, (0, 3), B]).check(TT)
    assert Gallery.from_json(g.to_json(TT)) == g
    assert g.chambers == (frozenset(A), frozenset(B)) and g.length == 1


@pytest.mark.parametrize("max_chambers", [1, 2, 3])
def test_gallery_morphisms_match_brute_force(max_chambers):
    cat = gallery_category(TT, A, B, max_chambers)
    cat.check()
    brute = set()
    for s in cat.objects:
        for t in cat.objects:
            for f in itertools.product(range(1, t.length + 1), repeat=s.length):
                if gallery_morphism_ok(s, t, f):
                    brute.add((s, t, f))
    assert {(m.src, m.tgt, m.label) for m in cat.morphisms} == brute


def test_gallery_sizes():
    cat = gallery_category(TT, A, B, 3)
    assert (len(cat.objects), len(cat.morphisms)) == (45, 805)
    assert len(galleries(TT, A, B, 3, nonmaximal=True)) == 39


@pytest.mark.parametrize("max_chambers", [2, 3])
def test_retraction_is_right_adjoint(max_chambers):
    cat = gallery_category(TT, A, B, max_chambers)
    sub, ret, counit = nonmaximal_retraction(cat, TT)
    ret.check()
    assert check_adjunction(cat, sub, ret, counit) == []
    assert set(sub.objects) == set(galleries(TT, A, B, max_chambers, nonmaximal=True))


def test_reduction_drops_maximal_faces():
    g = Gallery([A, A, A, (1, 2), B])
    assert reduce_gallery(g, TT) == Gallery([A, (1, 2), B])


def test_fat_paths_give_a_contravariant_functor():
    fat, _, _ = fat_and_reg_subposets(stone_poset(TT, A, B, 2), TT)
    small = fat.full_subcategory(lambda p: len(p.normal_form()[1]) <= 5)
    gal = gallery_category(TT, A, B, 3)
    assert functor_from_fat(small, gal, TT) == []
    for arr in small.non_identity():
        m = to_gallery_mor(arr, TT)
        assert m.src == to_gallery(arr.tgt, TT) and m.tgt == to_gallery(arr.src, TT)


def test_non_fat_paths_have_no_gallery():
    poset = stone_poset(TT, A, B, 2)
    thin = next(p for p in poset.objects if not is_fat(p, TT))
    with pytest.raises(ValueError):
        to_gallery(thin, TT)


def _brute_comb(k, a, b, n_max):
    simplices = list(k.simplices)
    out = 0
    for n in range(n_max + 1):
        for mid in itertools.product(simplices, repeat=max(n - 1, 0)):
            seq = (frozenset(a),) + mid + (frozenset(b),) if n else (frozenset(a),)
            if n == 0 and frozenset(a) != frozenset(b):
                continue
            out += all(x <= y or y <= x for x, y in zip(seq, seq[1:]))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_comb_sequence_counts(n):
    assert len(comb_sequences(TT, A, B, n)) == _brute_comb(TT, A, B, n)


def test_comb_truncation_homology():
    got = []
    for n in range(1, 6):
        c = nerve_h1_chains(comb_category(TT, A, B, n))
        got.append([str(homology(c, k)) for k in range(2)])
    assert got == [["0", "0"], ["Z", "0"], ["Z", "Z"], ["Z", "0"], ["Z", "0"]]


def test_comb_category_is_a_category():
    comb_category(TT, A, B, 3).check()


@pytest.mark.parametrize("d", [("weak",), ("strict", "weak"), ("weak", "strict", "strict")])
@pytest.mark.parametrize("m", [1, 2])
def test_transition_posets_are_acyclic(d, m):
    for e in itertools.product((-1, 1), repeat=len(d) - 1):
        p = transition_poset(d, e, m)
        if not p.objects:
            continue
        c = nerve_chains(p, 2)
        assert all(reduced_homology(c, k).is_zero for k in range(2))


def test_transition_poset_validation():
    with pytest.raises(ValueError):
        transition_poset(("strict",), (1,), 1)
    with pytest.raises(ValueError):
        transition_poset(("loose",), (), 1)
    assert len(transition_poset(("strict",), (), 3).objects) == 1
    # two strict steps on the coarsest grid are impossible
    assert transition_poset(("strict", "strict"), (1,), 0).objects == ()


def test_non_pure_complex_has_no_galleries():
    k = SimplicialComplex.from_facets([(0, 1, 2), (2, 3)])
    with pytest.raises(ComplexError):
        galleries(k, (0, 1, 2), (2, 3), 3)
