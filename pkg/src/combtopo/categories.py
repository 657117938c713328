"""Finite categories, their nerves, and the constructions built from them.

Morphisms are ``Morphism(src, tgt, label)`` triples; composition is supplied as
a function of two composable morphisms.  Categories that are really infinite
(the category of simplices of ``K``, for example) are generated under a bound,
which is stored on the object and propagated into nerve truncations.

>>> c = poset_category([0, 1, 2], lambda a, b: a <= b)
>>> nerve(c).counts()
(3, 3, 1)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

from .sset import (
    SMap,
    SSet,
    TruncatedSSet,
    identity,
    label_key,
    monotone_maps,
    product,
    product_locate,
    pushout,
    simplex_vertices,
    standard_simplex,
)


class Morphism(NamedTuple):
    src: Hashable
    tgt: Hashable
    label: Hashable


class Vertex(NamedTuple):
    """A nerve vertex, kept distinct from arrows even when objects are arrows."""

    obj: Hashable


class CategoryError(ValueError):
    pass


class BoundedCategory:
    """A finite category, possibly a bounded piece of an infinite one.

    ``bound`` is ``None`` for a complete category and otherwise records the
    parameter the objects were generated under.
    """

    def __init__(
        self,
        objects: Iterable[Hashable],
        morphisms: Iterable[Morphism],
        compose: Callable[[Morphism, Morphism], Morphism],
        identities: dict | None = None,
        bound=None,
    ):
        self.objects = tuple(objects)
        self.morphisms = tuple(Morphism(*m) for m in morphisms)
        self._compose = compose
        self.bound = bound
        self.homs: dict[tuple, list[Morphism]] = {}
        for m in self.morphisms:
            self.homs.setdefault((m.src, m.tgt), []).append(m)
        if identities is None:
            identities = {}
            for o in self.objects:
                cands = [m for m in self.homs.get((o, o), []) if m.label == ("id", o)]
                if not cands:
                    raise CategoryError(f"no identity found for {o!r}")
                identities[o] = cands[0]
        self.identities = dict(identities)
        self._ids = set(self.identities.values())
        self.out: dict = {}
        for m in self.morphisms:
            self.out.setdefault(m.src, []).append(m)

    def __repr__(self):
        b = "complete" if self.bound is None else f"bound={self.bound!r}"
        return f"BoundedCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms, {b})"

    def hom(self, a, b) -> list[Morphism]:
        return self.homs.get((a, b), [])

    def is_identity(self, m: Morphism) -> bool:
        return m in self._ids

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """``g`` after ``f``."""
        if f.tgt != g.src:
            raise CategoryError(f"{g!r} and {f!r} are not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return Morphism(*self._compose(g, f))

    def non_identity(self) -> list[Morphism]:
        return [m for m in self.morphisms if m not in self._ids]

    def check(self, triples: int | None = None) -> None:
        """Closure, unit laws and associativity on every composable triple."""
        mors = set(self.morphisms)
        for f in self.morphisms:
            for g in self.out.get(f.tgt, []):
                if self.compose(g, f) not in mors:
                    raise CategoryError(f"composite of {g!r} and {f!r} is not stored")
        count = 0
        for f in self.morphisms:
            for g in self.out.get(f.tgt, []):
                for h in self.out.get(g.tgt, []):
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                        raise CategoryError("composition is not associative")
                    count += 1
                    if triples is not None and count >= triples:
                        return

    def composition_table(self) -> dict:
        return {(g, f): self.compose(g, f) for f in self.morphisms for g in self.out.get(f.tgt, [])}

    def full_subcategory(self, keep: Callable[[Hashable], bool]) -> "BoundedCategory":
        objs = [o for o in self.objects if keep(o)]
        s = set(objs)
        mors = [m for m in self.morphisms if m.src in s and m.tgt in s]
        return BoundedCategory(objs, mors, self._compose, {o: self.identities[o] for o in objs}, self.bound)

    def to_json(self) -> dict:
        idx = {m: i for i, m in enumerate(self.morphisms)}
        return {
            "objects": [_js(o) for o in self.objects],
            "morphisms": [[_js(m.src), _js(m.tgt), _js(m.label)] for m in self.morphisms],
            "identities": [idx[self.identities[o]] for o in self.objects],
            "composition": sorted([idx[g], idx[f], idx[h]] for (g, f), h in self.composition_table().items()),
            "bound": self.bound,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BoundedCategory":
        objs = [_unjs(o) for o in data["objects"]]
        mors = [Morphism(_unjs(a), _unjs(b), _unjs(l)) for a, b, l in data["morphisms"]]
        table = {(mors[g], mors[f]): mors[h] for g, f, h in data["composition"]}
        ids = {o: mors[i] for o, i in zip(objs, data["identities"])}

        def comp(g, f):
            try:
                return table[(g, f)]
            except KeyError:
                raise CategoryError(f"composite of {g!r} and {f!r} is not in the table") from None

        return cls(objs, mors, comp, ids, data.get("bound"))


def _js(x):
    if isinstance(x, tuple):
        return [_js(y) for y in x]
    if isinstance(x, frozenset):
        return sorted((_js(y) for y in x), key=label_key)
    return x


def _unjs(x):
    if isinstance(x, list):
        return tuple(_unjs(y) for y in x)
    return x


def poset_category(elements: Sequence, leq: Callable[[Hashable, Hashable], bool]) -> BoundedCategory:
    """A poset as a category; the arrow a -> b is labelled ``("le", a, b)`` or ``("id", a)``."""
    elements = list(elements)
    mors = []
    for a in elements:
        for b in elements:
            if a == b:
                mors.append(Morphism(a, a, ("id", a)))
            elif leq(a, b):
                mors.append(Morphism(a, b, ("le", a, b)))

    def comp(g, f):
        return Morphism(f.src, g.tgt, ("id", f.src) if f.src == g.tgt else ("le", f.src, g.tgt))

    return BoundedCategory(elements, mors, comp)


def indiscrete_category(objects: Sequence) -> BoundedCategory:
    """Exactly one arrow between any two objects."""
    return poset_category(objects, lambda a, b: True)


def arrow_category_01() -> BoundedCategory:
    return poset_category([0, 1], lambda a, b: a <= b)


def opposite(c: BoundedCategory) -> BoundedCategory:
    def flip(m):
        return Morphism(m.tgt, m.src, m.label)

    return BoundedCategory(
        c.objects,
        [flip(m) for m in c.morphisms],
        lambda g, f: flip(c.compose(flip(f), flip(g))),
        {o: flip(m) for o, m in c.identities.items()},
        c.bound,
    )


@dataclass
class Functor:
    source: BoundedCategory
    target: BoundedCategory
    on_objects: Callable[[Hashable], Hashable]
    on_morphisms: Callable[[Morphism], Morphism]

    def check(self) -> None:
        for o in self.source.objects:
            if self.on_morphisms(self.source.identities[o]) != self.target.identities[self.on_objects(o)]:
                raise CategoryError(f"identity of {o!r} is not preserved")
        for f in self.source.morphisms:
            img = self.on_morphisms(f)
            if (img.src, img.tgt) != (self.on_objects(f.src), self.on_objects(f.tgt)):
                raise CategoryError(f"{f!r} is sent to an arrow between the wrong objects")
            for g in self.source.out.get(f.tgt, []):
                lhs = self.on_morphisms(self.source.compose(g, f))
                if lhs != self.target.compose(self.on_morphisms(g), img):
                    raise CategoryError("composition is not preserved")

    def then(self, other: "Functor") -> "Functor":
        return Functor(
            self.source,
            other.target,
            lambda o: other.on_objects(self.on_objects(o)),
            lambda m: other.on_morphisms(self.on_morphisms(m)),
        )


def identity_functor(c: BoundedCategory) -> Functor:
    return Functor(c, c, lambda o: o, lambda m: m)


# ----------------------------------------------------------------------------
# nerves


def _chains(c: BoundedCategory, n: int) -> list[tuple]:
    """Composable chains of n arrows (identities allowed); a 0-chain is ``(object,)``."""
    if n == 0:
        return [(Vertex(o),) for o in c.objects]
    out = [(m,) for m in c.morphisms]
    for _ in range(n - 1):
        out = [ch + (g,) for ch in out for g in c.out.get(ch[-1].tgt, [])]
    return out


def _chain_objects(ch: tuple) -> list:
    if isinstance(ch[0], Vertex):
        return [ch[0].obj]
    return [ch[0].src] + [m.tgt for m in ch]


def _chain_act(c: BoundedCategory, th, ch: tuple) -> tuple:
    objs = _chain_objects(ch)
    mors = [] if isinstance(ch[0], Vertex) else list(ch)
    if len(th) == 1:
        return (Vertex(objs[th[0]]),)
    out = []
    for a, b in zip(th, th[1:]):
        m = c.identities[objs[a]]
        for t in range(a, b):
            m = c.compose(mors[t], m)
        out.append(m)
    return tuple(out)


def nerve(c: BoundedCategory, cap: int | None = None) -> SSet:
    """Nerve of ``c``.  Cells are labelled by chains of non-identity arrows.

    Without ``cap`` the category must have no composable loops of non-identity
    arrows; otherwise the result is truncated at ``cap``.  A category generated
    under a bound gives a truncated nerve as well.
    """
    if cap is None:
        top = _nerve_dimension(c)
        out_cap = None if c.bound is None else top
    else:
        top = cap
        exact = c.bound is None and not _has_nondegenerate_chain(c, cap + 1)
        out_cap = None if exact else cap
    cls = SSet if out_cap is None else TruncatedSSet
    return cls.from_degreewise(
        lambda n: _chains(c, n),
        lambda th, ch: _chain_act(c, th, ch),
        top,
        cap=out_cap,
    )


def nerve_chains(c: BoundedCategory, top: int):
    """Normalized chains of the nerve through degree ``top``, built straight from chains of arrows.

    Much cheaper than materializing the nerve when only homology is wanted.
    Inner faces compose neighbouring arrows; a face containing an identity
    is degenerate and drops out.
    """
    from .homology import ChainComplex

    levels = [[(o,) for o in c.objects]]
    if top >= 1:
        levels.append([(m,) for m in c.non_identity()])
    for _ in range(2, top + 1):
        levels.append([ch + (g,) for ch in levels[-1] for g in c.out.get(ch[-1].tgt, []) if not c.is_identity(g)])
    index = [{ch: i for i, ch in enumerate(lv)} for lv in levels]
    bds: list = [[]]
    for k in range(1, len(levels)):
        cols = []
        for ch in levels[k]:
            col: dict[int, int] = {}
            for i in range(k + 1):
                if k == 1:
                    face = ((ch[0].tgt,), (ch[0].src,))[i]
                elif i == 0:
                    face = ch[1:]
                elif i == k:
                    face = ch[:-1]
                else:
                    comp = c.compose(ch[i], ch[i - 1])
                    if c.is_identity(comp):
                        continue
                    face = ch[: i - 1] + (comp,) + ch[i + 1:]
                j = index[k - 1][face]
                v = col.get(j, 0) + (-1) ** i
                if v:
                    col[j] = v
                else:
                    col.pop(j)
            cols.append(col)
        bds.append(cols)
    exact = c.bound is None and not _has_nondegenerate_chain(c, top + 1)
    return ChainComplex([len(lv) for lv in levels], bds, float("inf") if exact else top)


def generating_arrows(c: BoundedCategory) -> list[Morphism]:
    """A set of non-identity arrows whose composites give every non-identity arrow.

    Starts from the arrows that are not composites of two non-identity arrows
    and adds arrows (idempotents, say) until the closure is everything.
    """
    nonid = c.non_identity()
    composites = set()
    for f in nonid:
        for g in c.out.get(f.tgt, []):
            if not c.is_identity(g):
                composites.add(c.compose(g, f))
    gens = [m for m in nonid if m not in composites]
    by_src: dict = {}
    for g in gens:
        by_src.setdefault(g.src, []).append(g)
    reach: set = set()
    frontier = list(gens)
    while True:
        reach.update(frontier)
        while frontier:
            nxt = []
            for f in frontier:
                for g in by_src.get(f.tgt, []):
                    h = c.compose(g, f)
                    if not c.is_identity(h) and h not in reach:
                        reach.add(h)
                        nxt.append(h)
            frontier = nxt
        missing = next((m for m in nonid if m not in reach), None)
        if missing is None:
            return gens
        # a new generator composes with everything reached so far
        gens.append(missing)
        by_src.setdefault(missing.src, []).append(missing)
        frontier = [missing] + [f for f in reach if f.tgt == missing.src]


def nerve_h1_chains(c: BoundedCategory, generators: list[Morphism] | None = None):
    """Chains of the nerve through degree 2 with only the 2-chains needed for H_1.

    Only pairs ``(f, g)`` with ``g`` in a generating set are kept.  Every other
    relation ``[f] + [h] = [hf]`` follows from these by factoring ``h``, so the
    image of the degree-2 boundary and hence H_0 and H_1 are exact.  The
    degree-2 module itself is not the nerve's, which is why the result is
    trusted only through degree 2 and never for H_2.
    """
    from .homology import ChainComplex

    objs = list(c.objects)
    oidx = {o: i for i, o in enumerate(objs)}
    arrows = c.non_identity()
    aidx = {m: i for i, m in enumerate(arrows)}
    d1 = []
    for m in arrows:
        col = {}
        if m.src != m.tgt:
            col = {oidx[m.tgt]: 1, oidx[m.src]: -1}
        d1.append(col)
    gens = generating_arrows(c) if generators is None else generators
    into: dict = {}
    for f in arrows:
        into.setdefault(f.tgt, []).append(f)
    d2 = []
    for g in gens:
        for f in into.get(g.src, []):
            col: dict[int, int] = {}
            comp = c.compose(g, f)
            terms = [(aidx[g], 1), (aidx[f], 1)]
            if not c.is_identity(comp):
                terms.append((aidx[comp], -1))
            for j, v in terms:
                col[j] = col.get(j, 0) + v
            d2.append({j: v for j, v in col.items() if v})
    return ChainComplex([len(objs), len(arrows), len(d2)], [[], d1, d2], 2)


def _nerve_dimension(c: BoundedCategory) -> int:
    top = 0
    while _has_nondegenerate_chain(c, top + 1):
        top += 1
        if top > len(c.objects):
            raise CategoryError("the nerve is infinite-dimensional; pass a cap")
    return top


def _has_nondegenerate_chain(c: BoundedCategory, n: int) -> bool:
    level = [(m,) for m in c.non_identity()]
    for _ in range(n - 1):
        level = [ch + (g,) for ch in level for g in c.out.get(ch[-1].tgt, []) if not c.is_identity(g)]
        if not level:
            return False
    return bool(level)


def nerve_map(f: Functor, src: SSet, tgt: SSet) -> SMap:
    """The map of nerves induced by a functor (nerves as built by ``nerve``)."""

    def img(d, k):
        ch = src.cells[d][k]
        if d == 0:
            return tgt.locate(0, (Vertex(f.on_objects(ch[0].obj)),))
        return tgt.locate(d, tuple(f.on_morphisms(m) for m in ch))

    return SMap.from_function(src, tgt, img)


def chain_objects(ch: tuple) -> list:
    """Objects visited by a nerve cell label."""
    return _chain_objects(ch)


# ----------------------------------------------------------------------------
# categories of simplices


def simplex_category(k: SSet, cap: int, surjective_over: SMap | None = None) -> BoundedCategory:
    """Simplices ``Delta^m -> K`` with ``m <= cap`` and the operators between them.

    Objects are ``(m, simplex)``.  A morphism labelled ``theta`` goes from
    ``(m, theta^* y)`` to ``(m', y)``.
    """
    k.require(cap)
    objs = [(m, x) for m in range(cap + 1) for x in k.simplices(m)]
    if surjective_over is not None:
        n = surjective_over.target.dim
        objs = [(m, x) for m, x in objs if len(set(simplex_vertices(n, surjective_over(x)))) == n + 1]
    present = set(objs)
    by_dim: dict[int, list] = {}
    for m, x in objs:
        by_dim.setdefault(m, []).append(x)
    mors = []
    for m2, ys in by_dim.items():
        for m1 in by_dim:
            ths = list(monotone_maps(m1, m2))
            for y in ys:
                for th in ths:
                    x = k.apply(th, y)
                    if (m1, x) in present:
                        mors.append(Morphism((m1, x), (m2, y), ("id", (m1, x)) if m1 == m2 and th == identity(m1) else th))

    def comp(g, f):
        tg, tf = _op_of(g), _op_of(f)
        th = tuple(tg[t] for t in tf)
        return Morphism(f.src, g.tgt, ("id", f.src) if f.src == g.tgt and th == identity(f.src[0]) else th)

    return BoundedCategory(objs, mors, comp, bound=cap)


def surjective_simplex_category(p: SMap, cap: int) -> BoundedCategory:
    """The full subcategory of simplices whose image in ``Delta^n`` hits every vertex."""
    return simplex_category(p.source, cap, surjective_over=p)


def fibre_sizes(p: SMap, obj) -> tuple[int, ...]:
    """Vertex-fibre sizes minus one: the multidegree of an object of the surjective category."""
    n = p.target.dim
    verts = simplex_vertices(n, p(obj[1]))
    return tuple(verts.count(i) - 1 for i in range(n + 1))


def _op_of(m: Morphism):
    """The monotone map underlying a morphism of a category of simplices."""
    return identity(m.src[0]) if m.label == ("id", m.src) else m.label


def last_vertex_map(k: SSet, cap: int, category: BoundedCategory | None = None, source: SSet | None = None) -> SMap:
    """The last-vertex map from the (truncated) nerve of the category of simplices to ``K``.

    A chain ``x_0 -> ... -> x_p`` goes to the p-simplex of ``x_p`` spanned by the
    images of the last vertices of the ``x_j``.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    cat = category or simplex_category(k, cap)
    ner = source or nerve(cat, cap)

    def img(d, c):
        ch = ner.cells[d][c]
        if d == 0:
            m, x = ch[0].obj
            return k.apply((m,), x)
        objs = _chain_objects(ch)
        mp, xp = objs[-1]
        verts = []
        for j in range(d + 1):
            v = objs[j][0]
            for mor in ch[j:]:
                v = _op_of(mor)[v]
            verts.append(v)
        return k.apply(tuple(verts), xp)

    return SMap.from_function(ner, k, img)


# ----------------------------------------------------------------------------
# arrow categories, comma categories, elements


@dataclass
class ArrowAlpha:
    arrows: BoundedCategory
    fibre0: BoundedCategory
    fibre1: BoundedCategory
    to_fibre0: Functor
    to_fibre1: Functor
    include0: Functor
    include1: Functor


def arrow_alpha(c: BoundedCategory, label: Callable[[Hashable], int]) -> ArrowAlpha:
    """Arrows of ``c`` from the 0-fibre to the 1-fibre of a functor to ``{0 -> 1}``."""
    for m in c.morphisms:
        if label(m.src) > label(m.tgt):
            raise CategoryError(f"labelling is not a functor: {m!r} goes from 1 to 0")
        if label(m.src) not in (0, 1):
            raise CategoryError("labels must be 0 or 1")
    objs = [m for m in c.morphisms if label(m.src) == 0 and label(m.tgt) == 1]
    mors = []
    for f in objs:
        for f2 in objs:
            for u in c.hom(f.src, f2.src):
                for v in c.hom(f.tgt, f2.tgt):
                    if c.compose(v, f) == c.compose(f2, u):
                        lab = ("id", f) if u == c.identities[f.src] and v == c.identities[f.tgt] else (u, v)
                        mors.append(Morphism(f, f2, lab))

    def pair(m):
        if m.label == ("id", m.src):
            return c.identities[m.src.src], c.identities[m.src.tgt]
        return m.label

    def comp(g, f):
        ug, vg = pair(g)
        uf, vf = pair(f)
        u, v = c.compose(ug, uf), c.compose(vg, vf)
        if u == c.identities[f.src.src] and v == c.identities[f.src.tgt] and f.src == g.tgt:
            return Morphism(f.src, g.tgt, ("id", f.src))
        return Morphism(f.src, g.tgt, (u, v))

    arr = BoundedCategory(objs, mors, comp, bound=c.bound)
    c0 = c.full_subcategory(lambda o: label(o) == 0)
    c1 = c.full_subcategory(lambda o: label(o) == 1)
    t0 = Functor(arr, c0, lambda f: f.src, lambda m: pair(m)[0])
    t1 = Functor(arr, c1, lambda f: f.tgt, lambda m: pair(m)[1])
    return ArrowAlpha(arr, c0, c1, t0, t1, Functor(c0, c, lambda o: o, lambda m: m), Functor(c1, c, lambda o: o, lambda m: m))


def double_mapping_cylinder(f0: SMap, f1: SMap) -> SSet:
    """Homotopy pushout of ``B0 <- A -> B1`` as ``B0 + A x Delta^1 + B1`` glued at the ends."""
    a = f0.source
    cyl = product(a, standard_simplex(1))
    interval = standard_simplex(1)

    def end(e):
        v = interval.index[(e,)][1]
        return SMap.from_function(a, cyl, lambda d, c: product_locate(cyl, (identity(d), c), ((0,) * (d + 1), v)))

    _, cyl_in, _ = pushout(end(0), f0)
    out, _, _ = pushout(end(1).then(cyl_in), f1)
    return out


def suscat_square(c: BoundedCategory, label: Callable[[Hashable], int], cap: int | None = None) -> tuple[SSet, SSet]:
    """Double mapping cylinder of the arrow square next to the nerve of ``c``."""
    aa = arrow_alpha(c, label)
    na, n0, n1 = nerve(aa.arrows, cap), nerve(aa.fibre0, cap), nerve(aa.fibre1, cap)
    f0 = nerve_map(aa.to_fibre0, na, n0)
    f1 = nerve_map(aa.to_fibre1, na, n1)
    return double_mapping_cylinder(f0, f1), nerve(c, cap)


def comma(f: Functor, b, direction: str = "over") -> tuple[BoundedCategory, Functor]:
    """``(F | b)`` (direction "over") or ``(b | F)`` ("under") with its projection to the source."""
    a_cat, b_cat = f.source, f.target
    if b not in b_cat.objects:
        raise CategoryError(f"{b!r} is not an object of the target")
    if direction == "over":
        objs = [(a, g) for a in a_cat.objects for g in b_cat.hom(f.on_objects(a), b)]
    elif direction == "under":
        objs = [(a, g) for a in a_cat.objects for g in b_cat.hom(b, f.on_objects(a))]
    else:
        raise ValueError("direction must be 'over' or 'under'")
    mors = []
    for x in objs:
        for y in objs:
            for u in a_cat.hom(x[0], y[0]):
                fu = f.on_morphisms(u)
                ok = b_cat.compose(y[1], fu) == x[1] if direction == "over" else b_cat.compose(fu, x[1]) == y[1]
                if ok:
                    mors.append(Morphism(x, y, ("id", x) if u == a_cat.identities[x[0]] and x == y else u))

    def under(m):
        return a_cat.identities[m.src[0]] if m.label == ("id", m.src) else m.label

    def comp(g, h):
        u = a_cat.compose(under(g), under(h))
        return Morphism(h.src, g.tgt, ("id", h.src) if h.src == g.tgt and u == a_cat.identities[h.src[0]] else u)

    cat = BoundedCategory(objs, mors, comp, bound=a_cat.bound)
    return cat, Functor(cat, a_cat, lambda o: o[0], under)


class SetDiagram:
    """A contravariant set-valued functor: ``action(f, x)`` sends ``x`` in ``F(tgt)`` to ``F(src)``."""

    def __init__(self, category: BoundedCategory, values: dict, action: Callable[[Morphism, Hashable], Hashable]):
        self.category = category
        self.values = {o: tuple(v) for o, v in values.items()}
        self.action = action

    def __call__(self, f: Morphism, x):
        if self.category.is_identity(f):
            return x
        return self.action(f, x)

    def check(self) -> None:
        c = self.category
        for f in c.morphisms:
            for x in self.values[f.tgt]:
                if self(f, x) not in self.values[f.src]:
                    raise CategoryError(f"{f!r} sends {x!r} outside F({f.src!r})")
            for g in c.out.get(f.tgt, []):
                for x in self.values[g.tgt]:
                    if self(c.compose(g, f), x) != self(f, self(g, x)):
                        raise CategoryError("the diagram is not functorial")

    def to_json(self) -> dict:
        c = self.category
        return {
            "category": c.to_json(),
            "values": [[_js(x) for x in self.values[o]] for o in c.objects],
            "action": [[_js(x) for x in (self(f, x) for x in self.values[f.tgt])] for f in c.morphisms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SetDiagram":
        c = BoundedCategory.from_json(data["category"])
        values = {o: tuple(_unjs(x) for x in vs) for o, vs in zip(c.objects, data["values"])}
        table = {}
        for f, imgs in zip(c.morphisms, data["action"]):
            for x, y in zip(values[f.tgt], imgs):
                table[(f, x)] = _unjs(y)
        return cls(c, values, lambda f, x: table[(f, x)])


def grothendieck(fd: SetDiagram) -> BoundedCategory:
    """Category of elements: ``(c, x) -> (c', x')`` over ``f: c -> c'`` with ``F(f)(x') = x``."""
    c = fd.category
    objs = [(o, x) for o in c.objects for x in fd.values[o]]
    mors = []
    for f in c.morphisms:
        for x2 in fd.values[f.tgt]:
            x1 = fd(f, x2)
            src, tgt = (f.src, x1), (f.tgt, x2)
            mors.append(Morphism(src, tgt, ("id", src) if c.is_identity(f) else f))

    def under(m):
        return c.identities[m.src[0]] if m.label == ("id", m.src) else m.label

    def comp(g, h):
        u = c.compose(under(g), under(h))
        return Morphism(h.src, g.tgt, ("id", h.src) if c.is_identity(u) else u)

    return BoundedCategory(objs, mors, comp, bound=c.bound)


def simplicial_replacement(fd: SetDiagram) -> SSet:
    """Chains in the opposite category with an element at the vertex that is last for ``C``.

    An m-cell is a chain ``c_m -> ... -> c_0`` of arrows of ``C`` together with
    an element of ``F(c_0)``; removing ``c_0`` transports the element along the
    first arrow.  This is isomorphic to the nerve of the opposite of the
    category of elements.
    """
    c = fd.category
    cop = opposite(c)

    def simplices(n):
        out = []
        for ch in _chains(cop, n):
            first = _chain_objects(ch)[0]
            out.extend((ch, x) for x in fd.values[first])
        return out

    def act(th, elem):
        ch, x = elem
        mors = [] if isinstance(ch[0], Vertex) else list(ch)
        # transport x from c_0 to c_{th[0]} along the arrows of C
        for t in range(th[0]):
            m = mors[t]
            x = fd(Morphism(m.tgt, m.src, m.label), x)
        return _chain_act(cop, th, ch), x

    return SSet.from_degreewise(simplices, act, _nerve_dimension(c))


def random_set_diagram(rng, n_objects: int = 3, n_tokens: int = 4) -> SetDiagram:
    """A random contravariant diagram on a random poset on ``0..n_objects-1``.

    Each token lives on a random down-set; ``F(o)`` is the set of tokens at ``o``
    truncated at a threshold that grows along the order, and restriction
    truncates further.  Functoriality holds by construction and is rechecked.
    """
    objs = list(range(n_objects))
    rel = {(a, b) for a in objs for b in objs if a < b and rng.random() < 0.6}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for b2, c in list(rel):
                if b == b2 and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    cat = poset_category(objs, lambda a, b: a == b or (a, b) in rel)
    below = {o: {a for a in objs if (a, o) in rel} for o in objs}
    support = []
    for _ in range(n_tokens):
        top = {o for o in objs if rng.random() < 0.5}
        support.append(top | {a for o in top for a in below[o]})
    level: dict[int, int] = {}
    for o in objs:
        level[o] = max([rng.randrange(n_tokens)] + [level[a] for a in below[o]])
    values = {o: tuple(sorted({min(t, level[o]) for t in range(n_tokens) if o in support[t]})) for o in objs}
    fd = SetDiagram(cat, values, lambda f, x: min(x, level[f.src]))
    fd.check()
    return fd
