import itertools
from math import comb

import pytest
from _strategies import complexes
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.categories import indiscrete_category, nerve
from combtopo.homology import sset_homology
from combtopo.sset import (
    ComplexError,
    SimplicialComplex,
    TrustError,
    boundary_or_horn,
    check_acyclic_kan,
    complex_map,
    disjoint_union,
    from_complex,
    glued_join,
    hom_as_map,
    identity_map,
    isomorphic,
    iter_homs,
    join,
    point,
    product,
    projection,
    relative_hom,
    sset_from_json,
    sset_to_json,
    standard_simplex,
    to_point,
    truncate,
)


def _nondegenerate_chains(a, n, k):
    """Strict chains of length k + 1 in the grid poset [a] x [n]."""
    pts = sorted(itertools.product(range(a + 1), range(n + 1)))
    le = lambda p, q: p[0] <= q[0] and p[1] <= q[1]
    return sum(1 for ch in itertools.combinations(pts, k + 1) if all(le(x, y) for x, y in zip(ch, ch[1:])))


@pytest.mark.parametrize("n", range(5))
def test_standard_simplex_counts(n):
    assert standard_simplex(n).counts() == tuple(comb(n + 1, k + 1) for k in range(n + 1))


@pytest.mark.parametrize("a,n", [(a, n) for a in range(4) for n in range(4)])
def test_product_cells_are_grid_chains(a, n):
    prod = product(standard_simplex(a), standard_simplex(n))
    assert prod.counts() == tuple(_nondegenerate_chains(a, n, k) for k in range(a + n + 1))
    assert prod.ncells(a + n) == comb(a + n, a)


def test_join_of_simplices():
    assert join(standard_simplex(1), standard_simplex(0)).counts() == standard_simplex(2).counts()


@settings(max_examples=40, deadline=None)
@given(complexes(), st.data())
def test_simplicial_identities(k, data):
    x = from_complex(k)
    n = data.draw(st.integers(2, 3))
    s = data.draw(st.sampled_from(x.simplices(n)))
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.integers(i + 1, n))
    assert x.face(i, x.face(j, s)) == x.face(j - 1, x.face(i, s))
    jj = data.draw(st.integers(0, n))
    ii = data.draw(st.integers(0, jj))
    assert x.degeneracy(ii, x.degeneracy(jj, s)) == x.degeneracy(jj + 1, x.degeneracy(ii, s))
    assert x.face(jj, x.degeneracy(jj, s)) == s == x.face(jj + 1, x.degeneracy(jj, s))


@settings(max_examples=30, deadline=None)
@given(complexes(max_facets=3), st.integers(0, 2))
def test_yoneda_counts(k, n):
    x = from_complex(k)
    assert sum(1 for _ in iter_homs(standard_simplex(n), x)) == len(x.simplices(n))


@settings(max_examples=30, deadline=None)
@given(complexes())
def test_json_round_trip(k):
    x = from_complex(k)
    assert isomorphic(sset_from_json(sset_to_json(x)), x)
    assert SimplicialComplex.from_json(k.to_json()) == k


@pytest.mark.parametrize(
    "name,expected",
    [
        ("boundary-delta-3", ["Z", "0", "Z"]),
        ("two-triangles", ["Z", "0", "0"]),
        ("six-cycle", ["Z", "Z", "0"]),
        ("torus-7", ["Z", "Z^2", "Z"]),
        ("rp2-6", ["Z", "Z/2", "0"]),
    ],
)
def test_corpus_homology(name, expected):
    x = from_complex(corpus.complex_named(name))
    assert [str(h) for h in sset_homology(x, 2)] == expected


def test_euler_characteristics():
    got = {n: from_complex(f()).euler_characteristic() for n, f in corpus.COMPLEXES.items()}
    assert got == {"boundary-delta-3": 2, "two-triangles": 1, "six-cycle": 0, "torus-7": 0, "rp2-6": 1}


def test_isomorphism_test_distinguishes():
    d0, d1 = standard_simplex(0), standard_simplex(1)
    assert isomorphic(disjoint_union([d1, d0]), disjoint_union([d0, d1]))
    assert not isomorphic(d1, boundary_or_horn(2)[0])


def test_complex_map_checks_order():
    line = SimplicialComplex.from_facets([(0, 1)])
    with pytest.raises(ComplexError):
        complex_map(line, line, lambda v: 1 - v)
    assert complex_map(line, line, lambda v: v).is_isomorphism()


def test_truncation_refuses_higher_degrees():
    t = truncate(from_complex(corpus.two_triangles()), 1)
    with pytest.raises(TrustError):
        t.require(2)


def test_kan_checks():
    sphere, _ = boundary_or_horn(2)
    rep = check_acyclic_kan(sphere, 1)
    # already the reversed edge 1 -> 0 is missing
    assert not rep.passed and rep.witness["m"] == 1
    assert not check_acyclic_kan(standard_simplex(2), 1).passed
    chaotic = nerve(indiscrete_category([0, 1]), 3)
    assert check_acyclic_kan(chaotic, 2).passed


def test_relative_hom_of_identity_is_a_point():
    d1 = standard_simplex(1)
    sigma = identity_map(d1)
    rel = relative_hom(sigma, identity_map(d1), cap=2)
    assert rel.counts() == (1,)


def test_relative_hom_of_projection():
    d1 = standard_simplex(1)
    prod = product(d1, d1)
    rel = relative_hom(identity_map(d1), projection(prod, 0, d1), cap=2)
    # sections of the square over its first side: one per vertex of the fibre, joined by an edge
    assert [str(h) for h in sset_homology(rel, 1)] == ["Z", "0"]


@pytest.mark.parametrize("a,c", [(a, c) for a in range(3) for c in range(3)])
def test_m_functor_on_empty_is_disjoint_union(a, c):
    from combtopo.sset import empty_sset

    glued, incl = glued_join(a, empty_sset(), c)
    assert incl.is_isomorphism()
    assert isomorphic(glued, disjoint_union([standard_simplex(a), standard_simplex(c)]))


def test_m_functor_on_point_is_a_simplex():
    glued, _ = glued_join(1, point(), 1)
    assert isomorphic(glued, standard_simplex(3))


def test_hom_round_trip():
    d1 = standard_simplex(1)
    x = from_complex(corpus.six_cycle())
    for phi in iter_homs(d1, x):
        assert hom_as_map(d1, x, phi).is_valid()


def test_to_point_is_unique():
    x = from_complex(corpus.two_triangles())
    assert sum(1 for _ in iter_homs(x, point())) == 1
    assert to_point(x).is_valid()
