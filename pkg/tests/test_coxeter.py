import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.coxeter import (
    affine_weyl_group,
    box_chambers,
    chamber_elements,
    convexity_check,
    coxeter_complex,
    fixed_subcomplex,
    gallery_interval,
    is_downward_closed,
    length_ball,
    minimal_galleries,
    one_sided_region,
    truncated_complex,
    typed_galleries,
    weyl_distance,
)
from combtopo.homology import normalized_chains, reduced_homology
from combtopo.sset import from_complex

EXPONENTS = {"A1": (1,), "A2": (1, 2), "C2": (1, 3), "G2": (1, 5)}


def _poincare(exponents, top):
    """Length generating function of the affine group: prod (1 + ... + t^e) / (1 - t^e)."""
    series = [1] + [0] * top
    for e in exponents:
        num = [1] * (e + 1)
        series = [sum(num[j] * series[i - j] for j in range(len(num)) if i - j >= 0) for i in range(top + 1)]
        for i in range(e, top + 1):
            series[i] += series[i - e]
    return series


@pytest.mark.parametrize("name", sorted(EXPONENTS))
def test_growth_matches_poincare_series(name):
    g = affine_weyl_group(name)
    assert [len(level) for level in g.group_bfs(6)] == _poincare(EXPONENTS[name], 6)


@pytest.mark.parametrize("name,orders", [("A1", [None]), ("A2", [3, 3, 3]), ("C2", [2, 4, 4]), ("G2", [2, 3, 6])])
def test_coxeter_matrix(name, orders):
    g = affine_weyl_group(name)
    got = []
    for i in g.generators:
        assert g.simple[i] * g.simple[i] == g.identity
        for j in g.generators:
            if i < j:
                x, p = g.simple[i] * g.simple[j], 1
                y = x
                while y != g.identity and p <= 12:
                    y, p = y * x, p + 1
                got.append(None if p > 12 else p)
    assert sorted(got, key=lambda v: (v is None, v)) == orders


G2_ELEMS = affine_weyl_group("A2").elements_up_to(4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(G2_ELEMS), st.sampled_from(G2_ELEMS))
def test_lengths_and_words(u, w):
    g = affine_weyl_group("A2")
    assert g.length(w) == len(g.word(w))
    assert g.from_word(g.word(w)) == w
    for word in g.reduced_words(w):
        assert g.from_word(word) == w and len(word) == g.length(w)
    for i in g.generators:
        assert abs(g.length(w * g.simple[i]) - g.length(w)) == 1
    assert (w * u).inverse() == u.inverse() * w.inverse()
    assert len(minimal_galleries(g, u, w)) == len(g.reduced_words(weyl_distance(g, u, w)))
    assert {u, w} <= gallery_interval(g, u, w)


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_bruhat_subwords_match_reflections(name):
    g = affine_weyl_group(name)
    for w in g.elements_up_to(4):
        assert g.bruhat_downset(w) == g.bruhat_downset_geometric(w)


def test_weak_orders_refine_bruhat():
    g = affine_weyl_group("A2")
    for w in g.elements_up_to(3):
        for u in g.elements_up_to(3):
            if g.weak_leq(u, w, "right") or g.weak_leq(u, w, "left"):
                assert g.bruhat_leq(u, w)


def _box_count(name, n):
    # A1: an interval of 2n + 1 alcoves; A2: a triangle of side 3n + 1 with three corners of side n cut off
    return 2 * n + 1 if name == "A1" else (3 * n + 1) ** 2 - 3 * n * n


@pytest.mark.parametrize("name,n", [("A1", 0), ("A1", 1), ("A1", 2), ("A1", 3), ("A2", 0), ("A2", 1), ("A2", 2)])
def test_truncation_sizes_and_closure(name, n):
    g = affine_weyl_group(name)
    s = box_chambers(g, n)
    assert s.certified and len(s) == _box_count(name, n)
    for order in ("bruhat", "left", "right"):
        assert is_downward_closed(s, order).closed
    assert convexity_check(s).ok


def test_zero_truncation_is_identity():
    for name in ("A1", "A2"):
        g = affine_weyl_group(name)
        assert box_chambers(g, 0).elements == frozenset({g.identity})


def test_uncertified_sets_are_refused():
    g = affine_weyl_group("A2")
    with pytest.raises(ValueError):
        is_downward_closed(box_chambers(g, 2, max_length=2))


def test_one_sided_region_witness():
    g = affine_weyl_group("A2")
    s = one_sided_region(g, 1)
    assert len(s) == 16
    rep = is_downward_closed(s, "bruhat")
    assert rep.to_json(g)["witness"] == [[0, 1, 2], [0, 1, 0, 2]]


def test_length_ball_leak():
    g = affine_weyl_group("A2")
    rep = convexity_check(length_ball(g, 3))
    assert not rep.ok
    assert rep.to_json(g)["leaking_gallery"] == [[0, 1], [0, 1, 2], [0, 1, 2, 1], [0, 2, 1]]
    assert is_downward_closed(length_ball(g, 3)).closed


@pytest.mark.parametrize("name,n", [("A1", 1), ("A1", 3), ("A2", 1), ("A2", 2)])
def test_truncated_complex_is_acyclic_and_typed(name, n):
    g = affine_weyl_group(name)
    k = truncated_complex(g, n)
    c = normalized_chains(from_complex(k), 2)
    assert all(reduced_homology(c, i).is_zero for i in range(2))
    assert set(chamber_elements(g, k).values()) == set(box_chambers(g, n).elements)


def _fixed_reduced(g, word, k):
    f = fixed_subcomplex(g, g.from_word(word), k)
    if not f.simplices:
        return None
    c = normalized_chains(from_complex(f), 2)
    return [str(reduced_homology(c, i)) for i in range(2)], len(f.vertices)


def test_fixed_subcomplexes():
    g = affine_weyl_group("A2")
    k = truncated_complex(g, 1)
    assert _fixed_reduced(g, (), k)[1] == len(k.vertices)
    assert _fixed_reduced(g, (1, 2), k) == (["0", "0"], 1)
    for word in [(0,), (1, 2, 1)]:
        assert _fixed_reduced(g, word, k)[0] == ["0", "0"]
    h = affine_weyl_group("A1")
    assert _fixed_reduced(h, (0, 1), truncated_complex(h, 2)) is None


@pytest.mark.parametrize("name,n", [("A1", 4), ("A2", 3)])
def test_typed_gallery_counts(name, n):
    g = affine_weyl_group(name)
    k = truncated_complex(g, n)
    proper = [frozenset(j) for j in ([], *[[i] for i in g.generators])]
    if name == "A2":
        proper += [frozenset(j) for j in ([0, 1], [0, 2], [1, 2])]
    for a in proper:
        for b in proper:
            got = len(typed_galleries(g, k, g.identity, [a, b]))
            assert got == len(g.parabolic(a)) * len(g.parabolic(b))


def test_typed_galleries_refuse_small_truncations():
    g = affine_weyl_group("A1")
    with pytest.raises(ValueError, match="truncation too small"):
        typed_galleries(g, truncated_complex(g, 0), g.identity, [[0]])
    with pytest.raises(ValueError):
        typed_galleries(g, truncated_complex(g, 1), g.identity, [[0, 1]])


def test_ending_chamber_filter():
    g = affine_weyl_group("A2")
    k = truncated_complex(g, 2)
    end = g.from_word((0,))
    out = typed_galleries(g, k, g.identity, [[0]], end=end)
    assert len(out) == 1 and out[0][-1] == g.chamber_vertices(end)


def test_group_lookup():
    assert corpus.group_named("affine-a2").rank == 2
    with pytest.raises(KeyError):
        corpus.group_named("affine-e8")
    g = affine_weyl_group("A2")
    assert g.to_json(g.from_word([0, 1])) == {"type": "A2", "word": [0, 1], "length": 2}
    assert coxeter_complex(g, [g.identity]).dim == 2
