"""Affine Weyl groups acting on alcoves, with exact rational geometry.

Points are written in coordinates ``y_i = alpha_i(x)`` for the simple roots of
the finite root system, so every root is an integer form in ``y`` and every
group element is an integer affine map.  The fundamental alcove is
``{y_i >= 0, theta(y) <= 1}``; the affine wall functionals are ``f_i = y_i``
for ``i >= 1`` and ``f_0 = 1 - theta(y)``.

Generator 0 is the affine reflection; reduced words are ShortLex-least with
generators ordered 0, 1, ..., r.

>>> g = affine_weyl_group("A1")
>>> [g.word(w) for w in g.elements_up_to(2)]
[(), (0,), (1,), (0, 1), (1, 0)]
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .sset import SimplicialComplex

# Gram matrices of the simple roots; the first root is short where lengths differ.
_GRAM = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "C2": ((2, -2), (-2, 4)),
    "G2": ((2, -3), (-3, 6)),
}

_ALIASES = {"affine-a1": "A1", "affine-a2": "A2", "affine-c2": "C2", "affine-g2": "G2"}


@dataclass(frozen=True)
class CoxeterElement:
    """The integer affine map ``y -> linear @ y + shift`` on alcove coordinates."""

    linear: tuple[tuple[int, ...], ...]
    shift: tuple[int, ...]

    def apply(self, y: Sequence) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, y)) + s for row, s in zip(self.linear, self.shift))

    def __mul__(self, other: "CoxeterElement") -> "CoxeterElement":
        lin = tuple(
            tuple(sum(self.linear[i][k] * other.linear[k][j] for k in range(len(other.linear))) for j in range(len(other.linear)))
            for i in range(len(self.linear))
        )
        return CoxeterElement(lin, self.apply(other.shift))

    def inverse(self) -> "CoxeterElement":
        inv = _invert([[Fraction(v) for v in row] for row in self.linear])
        lin = tuple(tuple(int(v) for v in row) for row in inv)
        shift = tuple(-sum(a * b for a, b in zip(row, self.shift)) for row in lin)
        return CoxeterElement(lin, tuple(int(v) for v in shift))


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class FaceAddress:
    """The face of type ``J`` of the alcove of ``rep``; ``rep`` is minimal in its coset."""

    rep: CoxeterElement
    types: frozenset


class AffineWeylGroup:
    """Affine Weyl group of a crystallographic finite type, realized on alcoves."""

    def __init__(self, name: str):
        key = _ALIASES.get(name, name).upper()
        if key not in _GRAM:
            raise ValueError(f"unknown type {name!r}; known: {sorted(_GRAM)}")
        self.name = key
        self.gram = _GRAM[key]
        self.rank = len(self.gram)
        self.generators = tuple(range(self.rank + 1))
        self.positive_roots = self._positive_roots()
        self.highest_root = max(self.positive_roots, key=sum)
        self.marks = self.highest_root
        self.identity = CoxeterElement(
            tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)), (0,) * self.rank
        )
        self.simple = tuple(
            self.reflection(self.highest_root, 1) if i == 0 else self.reflection(_unit(self.rank, i - 1), 0)
            for i in self.generators
        )
        self.base_point = tuple(Fraction(1, (self.rank + 1) * m) for m in self.marks)
        self.vertices = (tuple(Fraction(0) for _ in range(self.rank)),) + tuple(
            tuple(Fraction(int(i == j), self.marks[i]) for j in range(self.rank)) for i in range(self.rank)
        )
        self._words: dict = {self.identity: ()}
        self._parabolic: dict = {}

    def __repr__(self):
        return f"AffineWeylGroup({self.name!r})"

    # roots and reflections

    def pair(self, c: Sequence[int], d: Sequence[int]) -> int:
        return sum(c[i] * self.gram[i][j] * d[j] for i in range(self.rank) for j in range(self.rank))

    def _positive_roots(self) -> tuple[tuple[int, ...], ...]:
        roots = {_unit(self.rank, i) for i in range(self.rank)}
        frontier = list(roots)
        while frontier:
            nxt = []
            for c in frontier:
                for i in range(self.rank):
                    e = _unit(self.rank, i)
                    k = 2 * self.pair(c, e) // self.gram[i][i]
                    d = tuple(ci - k * ei for ci, ei in zip(c, e))
                    if d not in roots and all(x >= 0 for x in d) and any(d):
                        roots.add(d)
                        nxt.append(d)
            frontier = nxt
        return tuple(sorted(roots, key=lambda c: (sum(c), c)))

    def reflection(self, root: Sequence[int], m: int) -> CoxeterElement:
        """Reflection in the hyperplane ``root(y) = m``."""
        norm = self.pair(root, root)
        co = [Fraction(2 * self.pair(root, _unit(self.rank, j)), norm) for j in range(self.rank)]
        lin = tuple(
            tuple(int(i == j) - co[i] * root[j] for j in range(self.rank)) for i in range(self.rank)
        )
        shift = tuple(m * co[i] for i in range(self.rank))
        if any(Fraction(v).denominator != 1 for row in lin for v in row) or any(Fraction(v).denominator != 1 for v in shift):
            raise ArithmeticError("reflection is not integral in alcove coordinates")
        return CoxeterElement(tuple(tuple(int(v) for v in row) for row in lin), tuple(int(v) for v in shift))

    @staticmethod
    def root_value(root: Sequence[int], y: Sequence) -> Fraction:
        return sum(c * v for c, v in zip(root, y))

    def wall_values(self, y: Sequence) -> tuple:
        """``(f_0(y), f_1(y), ..., f_r(y))``."""
        return (1 - self.root_value(self.highest_root, y),) + tuple(y)

    def barycenter(self, w: CoxeterElement) -> tuple:
        return w.apply(self.base_point)

    # lengths and words

    def separating_hyperplanes(self, w: CoxeterElement, u: CoxeterElement | None = None) -> list[tuple]:
        """Hyperplanes ``(root, m)`` separating the alcoves of ``u`` (default identity) and ``w``."""
        p = self.barycenter(u) if u is not None else self.base_point
        q = self.barycenter(w)
        out = []
        for beta in self.positive_roots:
            a, b = self.root_value(beta, p), self.root_value(beta, q)
            lo, hi = min(a, b), max(a, b)
            out.extend((beta, m) for m in range(math.floor(lo) + 1, math.floor(hi) + 1))
        return out

    def length(self, w: CoxeterElement) -> int:
        return len(self.separating_hyperplanes(w))

    def from_word(self, word: Iterable[int]) -> CoxeterElement:
        w = self.identity
        for i in word:
            w = w * self.simple[i]
        return w

    def right_descents(self, w: CoxeterElement) -> list[int]:
        n = self.length(w)
        return [i for i in self.generators if self.length(w * self.simple[i]) < n]

    def word(self, w: CoxeterElement) -> tuple[int, ...]:
        """ShortLex-least reduced word."""
        if w not in self._words:
            best = None
            for i in self.right_descents(w):
                cand = self.word(w * self.simple[i]) + (i,)
                if best is None or cand < best:
                    best = cand
            self._words[w] = best
        return self._words[w]

    def reduced_words(self, w: CoxeterElement) -> list[tuple[int, ...]]:
        return _reduced_words(self, w)

    def group_bfs(self, max_length: int) -> list[list[CoxeterElement]]:
        """Elements by length layers, with every length checked against the hyperplane count."""
        layers = [[self.identity]]
        seen = {self.identity}
        for k in range(1, max_length + 1):
            new = []
            for w in layers[-1]:
                for s in self.simple:
                    v = w * s
                    if v not in seen:
                        seen.add(v)
                        new.append(v)
            for v in new:
                if self.length(v) != k:
                    raise ArithmeticError(f"breadth-first length {k} disagrees with the geometric length of {v}")
            new.sort(key=self.word)
            layers.append(new)
        return layers

    def elements_up_to(self, max_length: int) -> list[CoxeterElement]:
        return [w for layer in self.group_bfs(max_length) for w in layer]

    # orders

    def bruhat_downset(self, w: CoxeterElement) -> frozenset:
        """All subword products of the reduced word of ``w``."""
        out = {self.identity}
        for i in self.word(w):
            out |= {x * self.simple[i] for x in out}
        return frozenset(out)

    def bruhat_leq(self, u: CoxeterElement, w: CoxeterElement) -> bool:
        return u in self.bruhat_downset(w)

    def bruhat_downset_geometric(self, w: CoxeterElement) -> frozenset:
        """Close ``{w}`` under reflecting in hyperplanes that separate an alcove from the base alcove."""
        out = {w}
        stack = [w]
        while stack:
            x = stack.pop()
            for beta, m in self.separating_hyperplanes(x):
                y = self.reflection(beta, m) * x
                if y not in out:
                    out.add(y)
                    stack.append(y)
        return frozenset(out)

    def weak_leq(self, u: CoxeterElement, w: CoxeterElement, side: str = "right") -> bool:
        """``u`` is a prefix (right order) or suffix (left order) of a reduced word of ``w``."""
        rest = u.inverse() * w if side == "right" else w * u.inverse()
        return self.length(u) + self.length(rest) == self.length(w)

    # truncations

    def in_box(self, w: CoxeterElement, n: int) -> bool:
        """Whether the alcove of ``w`` lies in ``{-n <= f_i <= n + 1}``."""
        return all(-n <= v <= n + 1 for v in self.wall_values(self.barycenter(w)))

    def length_bound(self, n: int) -> int:
        """Upper bound on lengths of alcoves in the box, from root heights alone."""
        return sum((2 * n + 1) * sum(beta) for beta in self.positive_roots)

    def parabolic(self, types: Iterable[int]) -> list[CoxeterElement]:
        key = frozenset(types)
        if key not in self._parabolic:
            if key == frozenset(self.generators):
                raise ValueError("the full set of generators generates an infinite group")
            out = {self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for i in key:
                        y = x * self.simple[i]
                        if y not in out:
                            out.add(y)
                            nxt.append(y)
                frontier = nxt
            self._parabolic[key] = sorted(out, key=lambda x: (self.length(x), self.word(x)))
        return self._parabolic[key]

    def face_address(self, w: CoxeterElement, types: Iterable[int]) -> FaceAddress:
        key = frozenset(types)
        rep = min((w * x for x in self.parabolic(key)), key=lambda x: (self.length(x), self.word(x)))
        return FaceAddress(rep, key)

    def vertex(self, w: CoxeterElement, i: int) -> tuple:
        """The type-``i`` vertex of the alcove of ``w``, as ``(i, point)``."""
        return (i, w.apply(self.vertices[i]))

    def chamber_vertices(self, w: CoxeterElement) -> frozenset:
        return frozenset(self.vertex(w, i) for i in self.generators)

    def face_vertices(self, w: CoxeterElement, types: Iterable[int]) -> frozenset:
        """Face of type ``J``: the vertices whose type is not in ``J``."""
        key = set(types)
        return frozenset(self.vertex(w, i) for i in self.generators if i not in key)

    def to_json(self, w: CoxeterElement) -> dict:
        return {"type": self.name, "word": list(self.word(w)), "length": self.length(w)}


def _unit(r: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(r))


def _reduced_words(g: AffineWeylGroup, w: CoxeterElement) -> list[tuple[int, ...]]:
    memo: dict = {}

    def rec(x):
        if x not in memo:
            if x == g.identity:
                memo[x] = [()]
            else:
                memo[x] = sorted(p + (i,) for i in g.right_descents(x) for p in rec(x * g.simple[i]))
        return memo[x]

    return rec(w)


@lru_cache(maxsize=None)
def affine_weyl_group(name: str) -> AffineWeylGroup:
    return AffineWeylGroup(name)


# ----------------------------------------------------------------------------
# truncated chamber sets


@dataclass
class ChamberSet:
    """A set of alcoves claimed complete, with the bound that certifies it."""

    group: AffineWeylGroup
    elements: frozenset
    searched_length: int
    certified: bool
    certificate: str

    def __contains__(self, w):
        return w in self.elements

    def __len__(self):
        return len(self.elements)

    def sorted(self) -> list[CoxeterElement]:
        return sorted(self.elements, key=lambda w: (self.group.length(w), self.group.word(w)))


def box_chambers(g: AffineWeylGroup, n: int, max_length: int | None = None) -> ChamberSet:
    """Alcoves inside ``{-n <= f_i <= n + 1}``, searched through the root-height length bound."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    bound = g.length_bound(n)
    search = bound if max_length is None else max_length
    members = frozenset(w for w in g.elements_up_to(search) if g.in_box(w, n))
    return ChamberSet(
        g,
        members,
        search,
        search >= bound,
        f"every alcove in the box has length <= {bound} (sum over positive roots of (2n+1) * height)",
    )


def region_chambers(g: AffineWeylGroup, inside: Callable[[CoxeterElement], bool], max_length: int, certified: bool, note: str) -> ChamberSet:
    return ChamberSet(g, frozenset(w for w in g.elements_up_to(max_length) if inside(w)), max_length, certified, note)


def one_sided_region(g: AffineWeylGroup, n: int) -> ChamberSet:
    """Alcoves with ``f_i >= -n`` only; bounded because the marks sum the ``f_i`` to 1."""
    # f_i <= 1 + n * (sum of the other marks), so each root value is bounded by that height box
    top = 1 + n * sum(g.marks)
    bound = sum((top + n) * sum(beta) for beta in g.positive_roots)
    return region_chambers(
        g,
        lambda w: all(v >= -n for v in g.wall_values(g.barycenter(w))),
        bound,
        True,
        f"every alcove in the region has length <= {bound}",
    )


def length_ball(g: AffineWeylGroup, n: int) -> ChamberSet:
    return region_chambers(g, lambda w: g.length(w) <= n, n, True, "the ball is searched to its radius")


@dataclass
class ClosureReport:
    closed: bool
    order: str
    witness: tuple | None = None

    def to_json(self, g: AffineWeylGroup) -> dict:
        wit = None if self.witness is None else [list(g.word(x)) for x in self.witness]
        return {"closed": self.closed, "order": self.order, "witness": wit}


def is_downward_closed(s: ChamberSet, order: str = "bruhat") -> ClosureReport:
    """Check closure under the strong Bruhat order or a weak order ("left"/"right").

    The witness is ``(u, w)`` with ``u <= w``, ``w`` in the set and ``u`` not.
    """
    if not s.certified:
        raise ValueError("refusing to judge a set without a completeness certificate")
    g = s.group
    for w in s.sorted():
        if order == "bruhat":
            below = g.bruhat_downset(w)
        elif order == "right":
            below = {w * g.simple[i] for i in g.right_descents(w)}
        elif order == "left":
            below = {g.simple[i] * w for i in g.generators if g.length(g.simple[i] * w) < g.length(w)}
        else:
            raise ValueError(f"unknown order {order!r}")
        for u in sorted(below, key=lambda x: (g.length(x), g.word(x))):
            if u not in s.elements:
                return ClosureReport(False, order, (u, w))
    return ClosureReport(True, order)


# ----------------------------------------------------------------------------
# galleries in the thin building


def weyl_distance(g: AffineWeylGroup, c1: CoxeterElement, c2: CoxeterElement) -> CoxeterElement:
    return c1.inverse() * c2


def minimal_galleries(g: AffineWeylGroup, u: CoxeterElement, w: CoxeterElement) -> list[tuple[CoxeterElement, ...]]:
    """Every minimal chamber gallery from the alcove of ``u`` to that of ``w``."""
    out = []
    for word in g.reduced_words(weyl_distance(g, u, w)):
        x = u
        seq = [x]
        for i in word:
            x = x * g.simple[i]
            seq.append(x)
        out.append(tuple(seq))
    return out


def gallery_interval(g: AffineWeylGroup, u: CoxeterElement, w: CoxeterElement) -> frozenset:
    """Alcoves lying on at least one minimal gallery from ``u`` to ``w``."""
    v = weyl_distance(g, u, w)
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for i in g.right_descents(x):
            y = x * g.simple[i]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(u * x for x in seen)


@dataclass
class ConvexityReport:
    ok: bool
    pairs: int
    leak: tuple | None = None

    def to_json(self, g: AffineWeylGroup) -> dict:
        leak = None if self.leak is None else [list(g.word(x)) for x in self.leak]
        return {"ok": self.ok, "pairs": self.pairs, "leaking_gallery": leak}


def convexity_check(s: ChamberSet) -> ConvexityReport:
    """Every minimal gallery between two members stays inside; otherwise one leaking gallery."""
    if not s.certified:
        raise ValueError("refusing to judge a set without a completeness certificate")
    g = s.group
    elems = s.sorted()
    pairs = 0
    for u, w in itertools.combinations(elems, 2):
        pairs += 1
        for x in sorted(gallery_interval(g, u, w), key=lambda y: (g.length(y), g.word(y))):
            if x not in s.elements:
                # splice a gallery through the leaking alcove
                first = minimal_galleries(g, u, x)[0]
                second = minimal_galleries(g, x, w)[0]
                return ConvexityReport(False, pairs, first + second[1:])
    return ConvexityReport(True, pairs)


# ----------------------------------------------------------------------------
# Coxeter complexes


def coxeter_complex(g: AffineWeylGroup, chambers: Iterable[CoxeterElement]) -> SimplicialComplex:
    """The simplicial complex spanned by the given alcoves; vertices are ``(type, point)``."""
    facets = [sorted(g.chamber_vertices(w)) for w in chambers]
    return SimplicialComplex.from_facets(facets)


def truncated_complex(g: AffineWeylGroup, n: int) -> SimplicialComplex:
    return coxeter_complex(g, box_chambers(g, n).elements)


def chamber_elements(g: AffineWeylGroup, k: SimplicialComplex) -> dict:
    """Recover the group element of every chamber of ``k`` from gallery types alone.

    Walks adjacent chambers from the base alcove; crossing the wall of type
    ``i`` multiplies on the right by ``s_i``.  Only the combinatorics of ``k``
    and the vertex types are used.
    """
    base = g.chamber_vertices(g.identity)
    if base not in k.simplices:
        raise ValueError("the base alcove is not in the complex")
    chambers = k.maximal()
    by_facet: dict = {}
    for c in chambers:
        for v in c:
            by_facet.setdefault(c - {v}, []).append(c)
    found = {base: g.identity}
    queue = [base]
    while queue:
        c = queue.pop(0)
        for v in sorted(c):
            for d in by_facet[c - {v}]:
                if d not in found:
                    found[d] = found[c] * g.simple[v[0]]
                    queue.append(d)
    return found


def fixed_subcomplex(g: AffineWeylGroup, elem: CoxeterElement, k: SimplicialComplex) -> SimplicialComplex:
    """Faces of ``k`` fixed by ``elem``; the action preserves types, so faces are fixed vertexwise."""
    fixed = {v for v in k.vertices if (v[0], elem.apply(v[1])) == v}
    simp = frozenset(s for s in k.simplices if s <= fixed)
    return SimplicialComplex(tuple(v for v in k.vertices if v in fixed), simp)


def typed_galleries(
    g: AffineWeylGroup,
    k: SimplicialComplex,
    start: CoxeterElement,
    types: Sequence[Iterable[int]],
    end: CoxeterElement | None = None,
) -> list[tuple[frozenset, ...]]:
    """Galleries ``(C_0, F_1, ..., F_n, C_n)`` in ``k`` whose face ``F_i`` has type ``J_i``.

    Chambers are found by searching ``k`` itself; a gallery that would need a
    chamber outside ``k`` raises, since the count would then be wrong.
    """
    types = [frozenset(j) for j in types]
    for j in types:
        if j >= frozenset(g.generators):
            raise ValueError("types must be proper subsets of the generators")
    chambers = [c for c in k.maximal()]
    containing: dict = {}
    for c in chambers:
        for r in range(1, len(c) + 1):
            for f in itertools.combinations(sorted(c), r):
                containing.setdefault(frozenset(f), []).append(c)
    start_c = g.chamber_vertices(start)
    if start_c not in k.simplices:
        raise ValueError("start chamber is not in the complex")
    end_c = g.chamber_vertices(end) if end is not None else None
    out = []

    def rec(seq, i):
        if i == len(types):
            if end_c is None or seq[-1] == end_c:
                out.append(tuple(seq))
            return
        face = frozenset(v for v in seq[-1] if v[0] not in types[i])
        nxt = containing.get(face, [])
        if len(nxt) != len(g.parabolic(types[i])):
            raise ValueError("truncation too small: a face is missing some of its chambers")
        for c in nxt:
            rec(seq + [face, c], i + 1)

    rec([start_c], 0)
    return out
