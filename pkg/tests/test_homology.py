import itertools
from math import gcd

import pytest
from _strategies import complexes
from hypothesis import given, settings
from hypothesis import strategies as st

from combtopo import corpus
from combtopo.homology import (
    ChainComplex,
    HomologyGroup,
    cone_equivalence,
    homology,
    mapping_cone,
    matrix_rank,
    naive_rational_betti,
    normalized_chains,
    reduced_homology,
    smith_invariants,
    sset_homology,
    stabilized_homology,
)
from combtopo.sset import TrustError, boundary_or_horn, from_complex, identity_map, standard_simplex, to_point


def _det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)) if m[0][j])


def _divisor_invariants(rows):
    """Invariant factors as ratios of gcds of k x k minors."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    ds = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in itertools.combinations(range(nr), k):
            for ci in itertools.combinations(range(nc), k):
                g = gcd(g, _det([[rows[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        ds.append(g)
    return [ds[i] // ds[i - 1] for i in range(1, len(ds))]


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_smith_matches_determinantal_divisors(rows):
    cols = [{i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(len(rows[0]))]
    assert smith_invariants(cols, len(rows)) == _divisor_invariants(rows)
    assert matrix_rank(cols) == len(_divisor_invariants(rows))


def test_smith_example():
    assert smith_invariants([{0: 2, 1: 4}, {0: 6, 1: 8}]) == [2, 4]


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_boundary_squares_to_zero_and_rational_betti(k):
    c = normalized_chains(from_complex(k), 3)
    c.check()
    for d in range(3):
        assert naive_rational_betti(c, d) == homology(c, d).betti


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_euler_from_homology(k):
    x = from_complex(k)
    hs = sset_homology(x, x.dim)
    assert sum((-1) ** d * h.betti for d, h in enumerate(hs)) == x.euler_characteristic()


def test_reduced_homology_of_point_and_empty():
    c = normalized_chains(standard_simplex(0), 1)
    assert reduced_homology(c, 0).is_zero
    empty = ChainComplex([0], [[]])
    assert reduced_homology(empty, -1) == HomologyGroup(1)


def test_trust_cap_refuses():
    c = ChainComplex([1, 0], [[], []], trusted_through=1)
    homology(c, 0)
    with pytest.raises(TrustError):
        homology(c, 1)


def test_cone_of_identity_is_acyclic():
    x = from_complex(corpus.torus_7())
    assert cone_equivalence(identity_map(x), 2).acyclic


def test_cone_of_two_points_to_a_point():
    sphere, _ = boundary_or_horn(1)
    rep = cone_equivalence(to_point(sphere), 1)
    assert not rep.acyclic and rep.first_nonzero == 1
    mapping_cone(to_point(sphere), 1).check()


def test_stabilization_first_and_tail():
    groups = [HomologyGroup(0), HomologyGroup(0), HomologyGroup(1), HomologyGroup(0), HomologyGroup(0)]
    fam = [ChainComplex([g.betti], [[]]) for g in groups]
    first = stabilized_homology(fam, 0, window=2)
    assert first.stable_from == 0 and first.heuristic
    tail = stabilized_homology(fam, 0, window=2, tail=True)
    assert tail.stable_from == 3 and tail.value == HomologyGroup(0)
    assert len(tail.levels) == 5
    assert not stabilized_homology(fam[:3], 0, window=2, tail=True).stable


def test_homology_group_text():
    assert str(HomologyGroup(2, (2, 3))) == "Z^2 + Z/2 + Z/3"
    assert HomologyGroup(0).to_json() == {"betti": 0, "torsion": []}
