"""Named small complexes and groups used by the verification suites."""

from __future__ import annotations

from .coxeter import AffineWeylGroup, affine_weyl_group
from .sset import SimplicialComplex


def boundary_delta_3() -> SimplicialComplex:
    return SimplicialComplex.from_facets([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def two_triangles() -> SimplicialComplex:
    """Two triangles glued along the edge {1, 2}; contractible."""
    return SimplicialComplex.from_facets([(0, 1, 2), (1, 2, 3)])


def six_cycle() -> SimplicialComplex:
    return SimplicialComplex.from_facets([(i, (i + 1) % 6) for i in range(6)])


def torus_7() -> SimplicialComplex:
    """The seven-vertex triangulation of the torus."""
    return SimplicialComplex.from_facets(
        [f for i in range(7) for f in ((i, (i + 1) % 7, (i + 3) % 7), (i, (i + 2) % 7, (i + 3) % 7))]
    )


def rp2_6() -> SimplicialComplex:
    """The six-vertex real projective plane."""
    return SimplicialComplex.from_facets(
        [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    )


COMPLEXES = {
    "boundary-delta-3": boundary_delta_3,
    "two-triangles": two_triangles,
    "six-cycle": six_cycle,
    "torus-7": torus_7,
    "rp2-6": rp2_6,
}

GROUPS = {"affine-a1": "A1", "affine-a2": "A2"}

# default path endpoints: a pair of maximal simplices
ENDPOINTS = {
    "boundary-delta-3": ((0, 1, 2), (1, 2, 3)),
    "two-triangles": ((0, 1, 2), (1, 2, 3)),
    "six-cycle": ((0, 1), (0, 1)),
    "torus-7": ((0, 1, 3), (0, 1, 3)),
    "rp2-6": ((0, 1, 2), (0, 1, 2)),
}


def complex_named(name: str) -> SimplicialComplex:
    try:
        return COMPLEXES[name]()
    except KeyError:
        raise KeyError(f"unknown complex {name!r}; known: {sorted(COMPLEXES)}") from None


def group_named(name: str) -> AffineWeylGroup:
    if name not in GROUPS:
        raise KeyError(f"unknown group {name!r}; known: {sorted(GROUPS)}")
    return affine_weyl_group(GROUPS[name])


def names() -> list[str]:
    return sorted(COMPLEXES) + sorted(GROUPS)
