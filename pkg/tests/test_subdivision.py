from math import comb

import pytest
from _strategies import complexes
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.homology import cone_equivalence, sset_homology
from combtopo.sset import (
    from_complex,
    identity_map,
    product,
    projection,
    standard_simplex,
    to_point,
)
from combtopo.subdivision import (
    SubdivisionParams,
    ex,
    ex_unit,
    interpolation_homotopies,
    interpolation_map,
    last_vertex_sd,
    poset_nerve,
    sd,
    sd_map,
    straightening_iso,
)


@pytest.mark.parametrize("r,n", [(r, n) for r in (1, 2, 3) for n in range(4)])
def test_subdivided_simplex_vertices_and_top_cells(r, n):
    s = sd(r, standard_simplex(n))
    assert s.ncells(0) == comb(n + r, r)
    assert s.ncells(n) == r**n
    assert s.euler_characteristic() == 1


def test_arity_must_be_positive():
    with pytest.raises(ValueError):
        SubdivisionParams(0)


@settings(max_examples=25, deadline=None)
@given(complexes(), st.sampled_from([2, 3]))
def test_subdivision_preserves_homology(k, r):
    x = from_complex(k)
    s = sd(r, x)
    s.check()
    assert sset_homology(s, 2) == sset_homology(x, 2)
    assert cone_equivalence(last_vertex_sd(r, x), 2).acyclic


@settings(max_examples=20, deadline=None)
@given(complexes(max_facets=3))
def test_rho_is_a_homology_equivalence_in_low_degrees(k):
    x = from_complex(k)
    e = ex(2, x, 2)
    r = ex_unit(2, x, 2, e)
    r.check()
    assert cone_equivalence(r, 1).acyclic


def test_ex_vertices_are_vertices():
    # degree 0 of Ex_r is maps out of sd_r of a point, which is a point
    for name, f in corpus.COMPLEXES.items():
        x = from_complex(f())
        assert ex(2, x, 1).ncells(0) == x.ncells(0)
    assert ex(2, standard_simplex(1), 2).counts()[0] == 2


def test_sd_map_is_functorial():
    x = from_complex(corpus.two_triangles())
    f = identity_map(x)
    g = to_point(x)
    assert sd_map(2, f.then(g)) == sd_map(2, f).then(sd_map(2, g))


@pytest.mark.parametrize("elements", [[0, 1], [0, 1, 2]])
def test_end_homotopies_are_the_two_last_vertex_maps(elements):
    nerve = poset_nerve(elements, lambda a, b: a <= b)
    assert interpolation_map(nerve, 2, 0) == sd_map(2, last_vertex_sd(2, nerve))
    assert interpolation_map(nerve, 2, 2) == last_vertex_sd(2, sd(2, nerve))


@pytest.mark.parametrize("length", range(3))
@pytest.mark.parametrize("i", range(3))
def test_interpolation_homotopies(length, i):
    _, homotopy, rep = interpolation_homotopies(list(range(length + 1)), lambda a, b: a <= b, 2, i)
    assert rep.ok
    assert (homotopy is None) == (i == 2)


@pytest.mark.parametrize("name", sorted(corpus.COMPLEXES))
def test_straightening_over_a_point(name):
    rep = straightening_iso(0, to_point(from_complex(corpus.complex_named(name))), 2)
    assert rep.ok
    assert all(a == b for a, b in rep.counts)


def test_straightening_over_an_edge_counterexample():
    d1 = standard_simplex(1)
    rep = straightening_iso(1, projection(product(d1, d1), 1, d1), 2)
    assert not rep.ok
    assert rep.counts == [(3, 3), (3, 5), (1, 7)]
    assert rep.failure["degree"] == 1


def test_straightening_over_identity():
    assert straightening_iso(1, identity_map(standard_simplex(1)), 2).ok


def test_straightening_needs_the_simplex():
    with pytest.raises(ValueError):
        straightening_iso(1, to_point(standard_simplex(1)), 2)
