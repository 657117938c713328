import itertools

from hypothesis import strategies as st

from combtopo.sset import SimplicialComplex

_SUBSETS = [c for r in (1, 2, 3) for c in itertools.combinations(range(5), r)]


@st.composite
def complexes(draw, max_facets: int = 5):
    facets = draw(st.lists(st.sampled_from(_SUBSETS), min_size=1, max_size=max_facets, unique=True))
    return SimplicialComplex.from_facets(facets)


@st.composite
def posets(draw, max_size: int = 5):
    """A random partial order on ``0..n-1`` refining the usual order, as a set of pairs."""
    n = draw(st.integers(1, max_size))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rel = set(draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else [])
    closed = True
    while closed:
        closed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                closed = True
    return list(range(n)), rel
