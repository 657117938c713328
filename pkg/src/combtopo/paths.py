"""Combinatorial path spaces of a simplicial complex.

Three finite models of the space of paths from simplex ``a`` to simplex ``b``:

* binary-fraction path posets (functions on the level-n grid of [0, 1]);
* galleries ``(C_0, F_1, C_1, ..., F_n, C_n)`` in a pure complex;
* comb sequences ``(F_0, ..., F_n)`` of pairwise comparable simplices.

All of them are infinite in the limit, so each constructor takes a level or a
length bound and records it on the returned category.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .categories import BoundedCategory, Functor, Morphism, poset_category
from .sset import ComplexError, SimplicialComplex

# ----------------------------------------------------------------------------
# binary fractions and grid functions


@dataclass(frozen=True, order=False)
class BinaryFraction:
    """``numerator / 2**level`` in [0, 1], kept at the smallest possible level."""

    numerator: int
    level: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.numerator <= 2**self.level:
            raise ValueError(f"{self.numerator}/2^{self.level} is not a binary fraction in [0, 1]")
        num, lev = self.numerator, self.level
        while lev > 0 and num % 2 == 0:
            num //= 2
            lev -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "level", lev)

    @classmethod
    def of(cls, value) -> "BinaryFraction":
        q = Fraction(value)
        lev = q.denominator.bit_length() - 1
        if q.denominator != 2**lev:
            raise ValueError(f"{value} is not a binary fraction")
        return cls(q.numerator, lev)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 2**self.level)

    def __lt__(self, other):
        return self.value < other.value

    def __le__(self, other):
        return self.value <= other.value

    def __gt__(self, other):
        return self.value > other.value

    def __ge__(self, other):
        return self.value >= other.value

    def __repr__(self):
        return f"{self.numerator}/2^{self.level}"

    def to_json(self) -> list[int]:
        return [self.numerator, self.level]


def grid(level: int) -> list[BinaryFraction]:
    return [BinaryFraction(i, level) for i in range(2**level + 1)]


@dataclass(frozen=True)
class StonePath:
    """A function from the level-n grid to simplices, stored by its grid values."""

    level: int
    values: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(frozenset(v) for v in self.values))
        if len(self.values) != 2**self.level + 1:
            raise ValueError("a level-n path has 2^n + 1 values")

    def __call__(self, t) -> frozenset:
        t = t if isinstance(t, BinaryFraction) else BinaryFraction.of(t)
        if t.level > self.level:
            # between two grid points the path sits in the union of its neighbours
            q = t.value * 2**self.level
            lo = int(q)
            return self.values[lo] | self.values[lo + 1]
        return self.values[t.numerator * 2 ** (self.level - t.level)]

    def leq(self, other: "StonePath") -> bool:
        """Pointwise inclusion (paths of the same level)."""
        return self.level == other.level and all(x <= y for x, y in zip(self.values, other.values))

    def pieces(self) -> list[tuple[frozenset, int]]:
        """Grid points and open grid intervals in order, with their values.

        The integer is the grid index of the point, or ``-1`` for an interval.
        """
        out = []
        for i, v in enumerate(self.values):
            if i:
                out.append((self.values[i - 1] | v, -1))
            out.append((v, i))
        return out

    def normal_form(self) -> tuple[tuple[BinaryFraction, ...], tuple[frozenset, ...]]:
        """Transition points ``(t_0, ..., t_l)`` and values ``(s_1, ..., s_l)``."""
        n = 2**self.level
        runs: list[list] = []
        for val, idx in self.pieces():
            if runs and runs[-1][0] == val:
                runs[-1][1].append(idx)
            else:
                runs.append([val, [idx]])
        cuts = [BinaryFraction(0, 0)]
        for (_, left), (_, right) in zip(runs, runs[1:]):
            # the boundary between two runs always touches a grid point
            pt = left[-1] if left[-1] >= 0 else right[0]
            cuts.append(BinaryFraction(pt, self.level))
        cuts.append(BinaryFraction(n, self.level))
        return tuple(cuts), tuple(r[0] for r in runs)

    @classmethod
    def from_normal_form(cls, level: int, transitions: Sequence, values: Sequence) -> "StonePath":
        ts = [t.value if isinstance(t, BinaryFraction) else Fraction(t) for t in transitions]
        vals = [frozenset(v) for v in values]
        if len(ts) != len(vals) + 1 or ts[0] != 0 or ts[-1] != 1:
            raise ValueError("transitions must run from 0 to 1 with one more entry than values")
        out = []
        for i in range(2**level + 1):
            t = Fraction(i, 2**level)
            hits = [k for k, tk in enumerate(ts) if tk == t]
            if hits:
                cands = [vals[j] for k in hits for j in (k - 1, k) if 0 <= j < len(vals)]
                out.append(frozenset.intersection(*cands))
            else:
                k = next(k for k, tk in enumerate(ts) if tk > t)
                out.append(vals[k - 1])
        return cls(level, tuple(out))

    def check_normal_form(self) -> None:
        """Raise unless the normal form obeys the ordering, adjacency and valley rules."""
        ts, vals = self.normal_form()
        for i in range(len(ts) - 2):
            if not ts[i] < ts[i + 2]:
                raise ValueError(f"transitions {ts[i]} and {ts[i + 2]} collide")
        for x, y in zip(vals, vals[1:]):
            if not (x < y or y < x):
                raise ValueError("adjacent values are not strictly comparable")
        for i in range(1, len(ts) - 1):
            if ts[i - 1] == ts[i] and 1 < i < len(vals):
                if not (vals[i - 2] > vals[i - 1] < vals[i]):
                    raise ValueError("repeated transition without a valley")
        if StonePath.from_normal_form(self.level, ts, vals) != self:
            raise ValueError("normal form does not reconstruct the path")

    def is_regular(self) -> bool:
        ts, _ = self.normal_form()
        return all(x < y for x, y in zip(ts, ts[1:]))

    def to_json(self, complex_: SimplicialComplex | None = None) -> dict:
        ts, vals = self.normal_form()
        order = complex_.ordered if complex_ is not None else (lambda s: sorted(s))
        return {
            "level": self.level,
            "transitions": [t.to_json() for t in ts],
            "values": [list(order(v)) for v in vals],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StonePath":
        ts = [BinaryFraction(*t) for t in data["transitions"]]
        vals = [frozenset(_hashable(v) for v in s) for s in data["values"]]
        return cls.from_normal_form(data["level"], ts, vals)


def _hashable(x):
    return tuple(_hashable(y) for y in x) if isinstance(x, list) else x


def _simplex(k: SimplicialComplex, s) -> frozenset:
    s = frozenset(s)
    if s not in k.simplices:
        raise ComplexError("not a simplex of the complex", s)
    return s


def stone_paths(k: SimplicialComplex, a, b, level: int) -> list[StonePath]:
    """Every level-n grid function from ``a`` to ``b`` whose adjacent unions are simplices."""
    a, b = _simplex(k, a), _simplex(k, b)
    n = 2**level
    simplices = k.sorted_simplices()
    nbrs = {s: [t for t in simplices if (s | t) in k.simplices] for s in simplices}
    out: list[StonePath] = []
    if n == 1:
        return [StonePath(0, (a, b))] if (a | b) in k.simplices else []
    # positions that can still reach b in the remaining steps
    reach = [{b}]
    for _ in range(n - 1):
        prev = reach[-1]
        reach.append({s for s in simplices if any(t in prev for t in nbrs[s])})
    reach.reverse()  # reach[i - 1] holds the values allowed at grid point i

    def dfs(vals):
        i = len(vals)
        if i == n:
            if (vals[-1] | b) in k.simplices:
                out.append(StonePath(level, tuple(vals) + (b,)))
            return
        allowed = reach[i - 1]
        for t in nbrs[vals[-1]]:
            if t in allowed:
                vals.append(t)
                dfs(vals)
                vals.pop()

    dfs([a])
    return out


def stone_poset(k: SimplicialComplex, a, b, level: int) -> BoundedCategory:
    """The finite poset of level-n paths, ordered by pointwise inclusion.

    >>> tri = SimplicialComplex.from_facets([(0, 1, 2)])
    >>> len(stone_poset(tri, (0, 1, 2), (0, 1, 2), 1).objects)
    7
    """
    paths = stone_paths(k, a, b, level)
    return _path_poset(paths)


def _path_poset(paths: list[StonePath]) -> BoundedCategory:
    # comparability is pointwise, so index the grid values for a cheap prefilter
    return poset_category(paths, StonePath.leq)


def interpolate(p: StonePath) -> StonePath:
    """The same path viewed on the next finer grid."""
    vals = []
    for i, v in enumerate(p.values):
        if i:
            vals.append(p.values[i - 1] | v)
        vals.append(v)
    return StonePath(p.level + 1, tuple(vals))


def _require_fat_setting(k: SimplicialComplex, a, b) -> None:
    if k.purity() is None:
        raise ComplexError("the complex is not pure", None)
    for s in (a, b):
        if not k.is_maximal(s):
            raise ComplexError("endpoint is not a maximal simplex", frozenset(s))


def is_fat(p: StonePath, k: SimplicialComplex) -> bool:
    _, vals = p.normal_form()
    return len(vals) % 2 == 1 and all(k.is_maximal(v) == (i % 2 == 0) for i, v in enumerate(vals))


def fat_and_reg_subposets(poset: BoundedCategory, k: SimplicialComplex, fat: bool = True):
    """Full subposets of fat paths, regular paths, and paths that are both.

    With ``fat=False`` only the regular subposet is built (purity is then not
    needed) and the other two entries are ``None``.
    """
    reg = poset.full_subcategory(StonePath.is_regular)
    if not fat:
        return None, reg, None
    if poset.objects:
        p0 = poset.objects[0]
        _require_fat_setting(k, p0.values[0], p0.values[-1])
    elif k.purity() is None:
        raise ComplexError("the complex is not pure", None)
    fat_cat = poset.full_subcategory(lambda p: is_fat(p, k))
    both = fat_cat.full_subcategory(StonePath.is_regular)
    return fat_cat, reg, both


# ----------------------------------------------------------------------------
# galleries


class Gallery(tuple):
    """``(C_0, F_1, C_1, ..., F_n, C_n)``; chambers sit at even positions.

    A plain tuple underneath, so hashing and comparison stay cheap inside
    large hom-set enumerations.
    """

    __slots__ = ()

    def __new__(cls, items: Iterable):
        items = tuple(frozenset(s) for s in items)
        if len(items) % 2 == 0:
            raise ValueError("a gallery has an odd number of entries")
        return super().__new__(cls, items)

    def __repr__(self):
        return "Gallery(" + ", ".join("{" + ",".join(map(str, sorted(s, key=str))) + "}" for s in self) + ")"

    @property
    def items(self) -> tuple[frozenset, ...]:
        return tuple(self)

    @property
    def length(self) -> int:
        return len(self) // 2

    @property
    def chambers(self) -> tuple[frozenset, ...]:
        return self[::2]

    @property
    def faces(self) -> tuple[frozenset, ...]:
        """``faces[i - 1]`` is F_i."""
        return self[1::2]

    def check(self, k: SimplicialComplex) -> None:
        for c in self.chambers:
            if not k.is_maximal(c):
                raise ComplexError("gallery chamber is not maximal", c)
        for i, f in enumerate(self.faces):
            if not (f and f <= self.chambers[i] and f <= self.chambers[i + 1]):
                raise ComplexError("gallery face is not a common face of its chambers", f)

    def to_json(self, k: SimplicialComplex | None = None) -> list:
        order = k.ordered if k is not None else sorted
        return [list(order(s)) for s in self.items]

    @classmethod
    def from_json(cls, data: list) -> "Gallery":
        return cls(tuple(frozenset(_hashable(v) for v in s) for s in data))


def gallery_morphism_ok(src: Gallery, tgt: Gallery, f: Sequence[int]) -> bool:
    """Both morphism conditions for an index map ``f`` given as ``(f(1), ..., f(n))``."""
    n, m = src.length, tgt.length
    if len(f) != n or any(not 1 <= j <= m for j in f) or any(x > y for x, y in zip(f, f[1:])):
        return False
    for j in range(1, m + 1):
        pre = [src.faces[i] for i in range(n) if f[i] == j]
        if pre and not tgt.faces[j - 1] <= frozenset.intersection(*pre):
            return False
    ext = (0,) + tuple(f) + (m + 1,)
    for i in range(n + 1):
        for j in range(ext[i], ext[i + 1]):
            if src.chambers[i] != tgt.chambers[j]:
                return False
    return True


@lru_cache(maxsize=None)
def _increasing_maps(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations_with_replacement(range(1, m + 1), n))


def _forced_chambers(src: Gallery, f: tuple[int, ...], m: int) -> tuple[frozenset, ...]:
    ext = (0,) + f + (m + 1,)
    out = [None] * (m + 1)
    for i in range(src.length + 1):
        for j in range(ext[i], ext[i + 1]):
            out[j] = src.chambers[i]
    return tuple(out)


def galleries(k: SimplicialComplex, a, b, max_chambers: int, nonmaximal: bool = False) -> list[Gallery]:
    """All galleries from ``a`` to ``b`` with at most ``max_chambers`` chambers.

    With ``nonmaximal`` only galleries whose faces are all non-maximal are kept.
    """
    a, b = _simplex(k, a), _simplex(k, b)
    if k.purity() is None:
        raise ComplexError("the complex is not pure", None)
    for s in (a, b):
        if not k.is_maximal(s):
            raise ComplexError("endpoint is not a maximal simplex", s)
    chambers = k.maximal()
    faces_of = {c: [s for s in k.sorted_simplices() if s < c or (s == c and not nonmaximal)] for c in chambers}
    out = []

    def dfs(items):
        if items[-1] == b:
            out.append(Gallery(tuple(items)))
        if len(items) // 2 + 1 >= max_chambers:
            return
        for f in faces_of[items[-1]]:
            for c in chambers:
                if f <= c:
                    dfs(items + [f, c])

    dfs([a])
    out.sort(key=lambda g: (g.length, [k.simplex_key(s) for s in g.items]))
    return out


def _gallery_comp(g: Morphism, f: Morphism) -> Morphism:
    return Morphism(f.src, g.tgt, tuple(g.label[i - 1] for i in f.label))


def gallery_category(k: SimplicialComplex, a, b, max_chambers: int, nonmaximal: bool = False) -> BoundedCategory:
    """Galleries with at most ``max_chambers`` chambers and every index-map morphism.

    Morphism labels are the index maps ``(f(1), ..., f(n))``.  ``nonmaximal``
    builds the full subcategory of galleries without maximal faces directly.
    """
    objs = galleries(k, a, b, max_chambers, nonmaximal)
    by_chambers: dict = {}
    for g in objs:
        by_chambers.setdefault(g.chambers, []).append(g)
    mors = []
    for src in objs:
        n = src.length
        for m in range(max_chambers):
            for f in _increasing_maps(n, m):
                cs = _forced_chambers(src, f, m)
                bounds = []
                for j in range(1, m + 1):
                    pre = [src.faces[i] for i in range(n) if f[i] == j]
                    bounds.append(frozenset.intersection(*pre) if pre else None)
                for tgt in by_chambers.get(cs, ()):
                    if all(bd is None or fa <= bd for fa, bd in zip(tgt.faces, bounds)):
                        mors.append(Morphism(src, tgt, f))
    ids = {g: Morphism(g, g, tuple(range(1, g.length + 1))) for g in objs}
    bound = ("chambers", max_chambers) if not nonmaximal else ("chambers", max_chambers, "nonmaximal")
    return BoundedCategory(objs, mors, _gallery_comp, ids, bound=bound)


def reduce_gallery(g: Gallery, k: SimplicialComplex) -> Gallery:
    """Drop every maximal face together with the repeated chamber after it."""
    items = [g.items[0]]
    for f, c in zip(g.faces, g.chambers[1:]):
        if k.is_maximal(f):
            continue
        items += [f, c]
    return Gallery(tuple(items))


def _surviving(g: Gallery, k: SimplicialComplex) -> list[int]:
    return [i + 1 for i, f in enumerate(g.faces) if not k.is_maximal(f)]


def nonmaximal_retraction(cat: BoundedCategory, k: SimplicialComplex):
    """The subcategory of galleries with no maximal face, and the retraction onto it.

    Returns ``(sub, retraction, counit)`` where ``counit[y]`` is the arrow
    ``R(y) -> y`` that reinserts the deleted faces.
    """
    sub = cat.full_subcategory(lambda g: all(not k.is_maximal(f) for f in g.faces))
    counit = {}
    for y in cat.objects:
        keep = _surviving(y, k)
        counit[y] = Morphism(reduce_gallery(y, k), y, tuple(keep))

    def on_mor(h: Morphism) -> Morphism:
        keep_src = _surviving(h.src, k)
        pos_tgt = {j: i + 1 for i, j in enumerate(_surviving(h.tgt, k))}
        label = tuple(pos_tgt[h.label[i - 1]] for i in keep_src)
        return Morphism(reduce_gallery(h.src, k), reduce_gallery(h.tgt, k), label)

    ret = Functor(cat, sub, lambda g: reduce_gallery(g, k), on_mor)
    return sub, ret, counit


def check_adjunction(cat: BoundedCategory, sub: BoundedCategory, ret: Functor, counit: dict) -> list[tuple]:
    """Check that composing with the counit is a bijection Hom(x, R y) -> Hom(x, y).

    Returns the list of offending pairs (empty when the adjunction holds).
    """
    bad = []
    for x in sub.objects:
        for y in cat.objects:
            ry = ret.on_objects(y)
            image = {cat.compose(counit[y], g) for g in sub.hom(x, ry)}
            if image != set(cat.hom(x, y)) or len(image) != len(sub.hom(x, ry)):
                bad.append((x, y))
    return bad


def to_gallery(p: StonePath, k: SimplicialComplex) -> Gallery:
    if not is_fat(p, k):
        raise ValueError("only fat paths have a gallery")
    return Gallery(p.normal_form()[1])


def _face_intervals(p: StonePath) -> list[tuple[Fraction, Fraction]]:
    ts, _ = p.normal_form()
    return [(ts[2 * i - 1].value, ts[2 * i].value) for i in range(1, (len(ts) - 1) // 2 + 1)]


def to_gallery_mor(arrow: Morphism, k: SimplicialComplex) -> Morphism:
    """Gallery morphism attached to an inclusion ``p <= q`` of fat paths.

    Larger paths have fewer non-maximal stretches, so the map goes from the
    gallery of ``q`` to the gallery of ``p``.
    """
    p, q = arrow.src, arrow.tgt
    if not p.leq(q):
        raise ValueError("arrow is not a pointwise inclusion")
    big, small = _face_intervals(q), _face_intervals(p)
    f = []
    for lo, hi in big:
        hits = [j + 1 for j, (lo2, hi2) in enumerate(small) if lo2 <= lo and hi <= hi2]
        if len(hits) != 1:
            raise ValueError("face interval is not contained in a unique interval")
        f.append(hits[0])
    return Morphism(to_gallery(q, k), to_gallery(p, k), tuple(f))


# ----------------------------------------------------------------------------
# comb sequences


def comb_sequences(k: SimplicialComplex, a, b, max_length: int) -> list[tuple[frozenset, ...]]:
    """Sequences ``(a = F_0, ..., F_n = b)`` with comparable neighbours and ``n <= max_length``."""
    a, b = _simplex(k, a), _simplex(k, b)
    simplices = k.sorted_simplices()
    comparable = {s: [t for t in simplices if s <= t or t <= s] for s in simplices}
    out = []

    def dfs(seq):
        if seq[-1] == b:
            out.append(tuple(seq))
        if len(seq) - 1 >= max_length:
            return
        for t in comparable[seq[-1]]:
            seq.append(t)
            dfs(seq)
            seq.pop()

    dfs([a])
    out.sort(key=lambda s: (len(s), [k.simplex_key(x) for x in s]))
    return out


@lru_cache(maxsize=None)
def _surjections_onto(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(f for f in _increasing_maps(n, m) if len(set(f)) == m)


def comb_category(k: SimplicialComplex, a, b, max_length: int) -> BoundedCategory:
    """Comb sequences of length at most ``max_length`` with all surjective index maps."""
    objs = comb_sequences(k, a, b, max_length)
    by_len: dict = {}
    for s in objs:
        by_len.setdefault(len(s) - 1, []).append(s)
    mors = []
    for src in objs:
        n = len(src) - 1
        for m in range(n + 1):
            for f in _surjections_onto(n, m):
                bounds = [frozenset.intersection(*[src[i + 1] for i in range(n) if f[i] == j]) for j in range(1, m + 1)]
                for tgt in by_len.get(m, ()):
                    if all(t <= bd for t, bd in zip(tgt[1:], bounds)):
                        mors.append(Morphism(src, tgt, f))
    ids = {s: Morphism(s, s, tuple(range(1, len(s)))) for s in objs}
    return BoundedCategory(objs, mors, _gallery_comp, ids, bound=("length", max_length))


# ----------------------------------------------------------------------------
# transition-point posets


def transition_poset(d: Sequence[str], e: Sequence[int], m: int) -> BoundedCategory:
    """Tuples ``0 = t_0, ..., t_n = 1`` on the level-m grid.

    ``d[i-1]`` says whether ``t_{i-1} < t_i`` ("strict") or ``<=`` ("weak");
    ``e[i-1]`` orients the comparison of the interior point ``t_i``.
    """
    n = len(d)
    if n < 1 or len(e) != n - 1:
        raise ValueError("need n >= 1 strictness flags and n - 1 signs")
    if any(x not in ("strict", "weak") for x in d) or any(x not in (-1, 1) for x in e):
        raise ValueError("flags must be 'strict'/'weak' and signs -1/+1")
    pts = grid(m)
    objs = []

    def extend(tup):
        i = len(tup)
        if i == n:
            if _ok_step(tup[-1], pts[-1], d[n - 1]):
                objs.append(tuple(tup) + (pts[-1],))
            return
        for t in pts:
            if _ok_step(tup[-1], t, d[i - 1]):
                extend(tup + [t])

    extend([pts[0]])

    def leq(x, y):
        return all((y[i] <= x[i]) if e[i - 1] == -1 else (y[i] >= x[i]) for i in range(1, n))

    return poset_category(objs, leq)


def _ok_step(s: BinaryFraction, t: BinaryFraction, flag: str) -> bool:
    return s < t if flag == "strict" else s <= t


def functor_from_fat(fat: BoundedCategory, gal: BoundedCategory, k: SimplicialComplex) -> list[str]:
    """Check that the gallery assignment is a contravariant functor into ``gal``.

    Returns a list of problems; empty means every arrow and composable pair passed.
    """
    problems = []
    objs = set(gal.objects)
    mors = set(gal.morphisms)
    for p in fat.objects:
        if to_gallery(p, k) not in objs:
            problems.append(f"gallery of {p} is not an object")
    for arr in fat.morphisms:
        try:
            g = to_gallery_mor(arr, k)
        except ValueError as exc:
            problems.append(str(exc))
            continue
        if g not in mors:
            problems.append(f"{g} is not a gallery morphism")
    return problems
