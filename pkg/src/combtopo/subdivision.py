"""Edgewise subdivision, its right adjoint, and the maps between them.

``sd(r, K)`` has as m-simplices the (r(m+1)-1)-simplices of ``K``; an operator
``theta`` acts through the r-fold ordinal sum ``theta * ... * theta``.  Cells are
labelled by the ``K``-simplex they come from, so ``sd_K.label(x)`` is a
``(surj, cell)`` pair of ``K``.

>>> from combtopo.sset import standard_simplex
>>> sd(2, standard_simplex(1)).counts()
(3, 2)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Sequence

from .sset import (
    Op,
    Simplex,
    SMap,
    SSet,
    TruncatedSSet,
    codegeneracy,
    coface,
    compose,
    flat_cells,
    identity,
    identity_map,
    iter_homs,
    precompose,
    product,
    product_locate,
    simplex_map,
    standard_simplex,
    star,
)


@dataclass(frozen=True)
class SubdivisionParams:
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("subdivision arity must be at least 1")


def _check_r(r: int) -> None:
    SubdivisionParams(r)


def last_block(r: int, m: int) -> Op:
    """Inclusion of the final summand ``[m] -> [r(m+1)-1]``."""
    return tuple((r - 1) * (m + 1) + j for j in range(m + 1))


def _sd_degree(r: int, length: int) -> int:
    return length // r - 1


def sd(r: int, k: SSet) -> SSet:
    """The r-fold edgewise subdivision of ``k``."""
    _check_r(r)
    return _sd_cached(r, k)


@lru_cache(maxsize=64)
def _sd_cached(r: int, k: SSet) -> SSet:
    top = k.dim
    if k.is_empty():
        return k
    if k.cap is not None:
        # degree m needs K in degree r(m+1)-1
        top = (k.cap + 1) // r - 1
        if top < 0:
            raise ValueError("truncation cap too small to subdivide")

    def simplices(m):
        return k.simplices(r * (m + 1) - 1)

    def act(th, x):
        return k.apply(star(th, r, _sd_degree(r, len(x[0]))), x)

    out = SSet.from_degreewise(simplices, act, top, cap=top if k.cap is not None else None)
    return out


def sd_map(r: int, f: SMap) -> SMap:
    """``sd_r`` applied to a map."""
    src, tgt = sd(r, f.source), sd(r, f.target)
    return SMap.from_function(src, tgt, lambda d, c: tgt.locate(d, f(src.cells[d][c])))


def last_vertex_sd(r: int, k: SSet) -> SMap:
    """The natural map ``sd_r K -> K`` restricting to the last summand."""
    s = sd(r, k)
    return SMap.from_function(s, k, lambda d, c: k.apply(last_block(r, d), s.cells[d][c]))


def ex(r: int, k: SSet, cap: int = 2) -> TruncatedSSet:
    """``Ex_r K`` through degree ``cap``: degree m is the set of maps ``sd_r Delta^m -> K``."""
    _check_r(r)
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    sds = {m: sd(r, standard_simplex(m)) for m in range(cap + 1)}
    sizes = {sum(s.counts()): m for m, s in sds.items()}
    maps: dict = {}

    def simplices(m):
        return list(iter_homs(sds[m], k))

    def act(th, phi):
        key = (th, sizes[len(phi)])
        if key not in maps:
            maps[key] = sd_map(r, simplex_map(th, key[1]))
        return precompose(phi, maps[key], k)

    return TruncatedSSet.from_degreewise(simplices, act, cap, cap=cap)


def ex_map(r: int, f: SMap, cap: int = 2, source: SSet | None = None, target: SSet | None = None) -> SMap:
    src = source or ex(r, f.source, cap)
    tgt = target or ex(r, f.target, cap)
    return SMap.from_function(src, tgt, lambda d, c: tgt.locate(d, tuple(f(y) for y in src.cells[d][c])))


def ex_unit(r: int, k: SSet, cap: int = 2, target: SSet | None = None) -> SMap:
    """The unit ``K -> Ex_r K``: a simplex goes to its composite with ``lambda``."""
    if cap < k.dim:
        raise ValueError(f"cap {cap} is below the dimension {k.dim} of the source")
    tgt = target or ex(r, k, cap)

    def img(d, c):
        lam = last_vertex_sd(r, standard_simplex(d))
        delta = standard_simplex(d)
        phi = []
        for dd, cc in flat_cells(lam.source):
            y = lam.images[dd][cc]
            verts = tuple(delta.label((identity(y[0][-1]), y[1]))[t] for t in y[0])
            phi.append(k.apply(verts, (identity(d), c)))
        return tgt.locate(d, tuple(phi))

    return SMap.from_function(k, tgt, img)


# ----------------------------------------------------------------------------
# multisimplicial straightening


class MultiSSet:
    """A multisimplicial set given by element lists and a coordinatewise action.

    ``elements(degrees)`` lists the elements in multidegree ``degrees`` and
    ``act(ops, x)`` applies one monotone map per coordinate.
    """

    def __init__(self, arity: int, elements: Callable[[tuple[int, ...]], list], act: Callable[[tuple, Hashable], Hashable]):
        self.arity = arity
        self.elements = elements
        self.act = act

    def count(self, degrees: Sequence[int]) -> int:
        return len(self.elements(tuple(degrees)))

    def check(self, max_degree: int = 1) -> None:
        """Closure under faces and degeneracies, and functoriality of faces, in each coordinate."""

        def ops(degs, coord, theta):
            return tuple(theta if i == coord else identity(d) for i, d in enumerate(degs))

        def shift(degs, coord, by):
            return degs[:coord] + (degs[coord] + by,) + degs[coord + 1:]

        for degs in itertools.product(range(max_degree + 1), repeat=self.arity):
            elems = self.elements(degs)
            for coord in range(self.arity):
                m = degs[coord]
                low = set(self.elements(shift(degs, coord, -1))) if m else set()
                up = set(self.elements(shift(degs, coord, 1)))
                for x in elems:
                    for j in range(m + 1):
                        if self.act(ops(degs, coord, codegeneracy(j, m)), x) not in up:
                            raise ValueError("degeneracy leaves the multidegree")
                    if not m:
                        continue
                    for j in range(m + 1):
                        y = self.act(ops(degs, coord, coface(j, m)), x)
                        if y not in low:
                            raise ValueError("face leaves the multidegree")
                        if m < 2:
                            continue
                        for i in range(m):
                            direct = self.act(ops(degs, coord, compose(coface(j, m), coface(i, m - 1))), x)
                            twice = self.act(ops(shift(degs, coord, -1), coord, coface(i, m - 1)), y)
                            if direct != twice:
                                raise ValueError("face maps do not compose")

    def diagonal(self, top: int) -> SSet:
        """The diagonal simplicial set through degree ``top``; cells are labelled by elements."""
        return SSet.from_degreewise(
            lambda k: self.elements((k,) * self.arity),
            lambda th, x: self.act((th,) * self.arity, x),
            top,
        )


def block_vertices(degrees: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, m in enumerate(degrees) for _ in range(m + 1))


def straighten_surjective(p: SMap) -> MultiSSet:
    """Simplices of the source over ``Delta^n`` sorted by the sizes of their vertex fibres."""
    k, base = p.source, p.target
    n = base.dim
    cache: dict = {}

    def elements(degrees):
        degrees = tuple(degrees)
        if degrees not in cache:
            total = sum(m + 1 for m in degrees)
            over = _base_simplex(n, block_vertices(degrees))
            cache[degrees] = [x for x in k.simplices(total - 1) if p(x) == over]
        return cache[degrees]

    def act(ops, x):
        # operators act blockwise; block sizes of x come from the projection
        sizes = _fibre_sizes(p(x), n)
        theta, start = [], 0
        for op, size in zip(ops, sizes):
            theta.extend(start + v for v in op)
            start += size
        return k.apply(tuple(theta), x)

    return MultiSSet(n + 1, elements, act)


def _base_simplex(n: int, verts: Sequence[int]) -> Simplex:
    from .sset import simplex_from_vertices

    return simplex_from_vertices(n, verts)


def _fibre_sizes(y: Simplex, n: int) -> list[int]:
    from .sset import simplex_vertices

    verts = simplex_vertices(n, y)
    return [verts.count(i) for i in range(n + 1)]


def diag_of_straightening(p: SMap) -> SSet:
    """``F . diag`` for the straightening of ``p``; dimension is bounded by that of the source."""
    return straighten_surjective(p).diagonal(max(p.source.dim, 0))


@dataclass
class StraighteningReport:
    ok: bool
    through: int
    counts: list[tuple[int, int]] = field(default_factory=list)
    failure: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "through": self.through, "counts": [list(c) for c in self.counts], "failure": self.failure}


def straightening_iso(n: int, p: SMap, cap: int = 2) -> StraighteningReport:
    """Build both sides of the comparison for ``p: K -> Delta^n`` and check it degreewise.

    The left side has degree-a simplices the maps ``Delta^a x Delta^n -> K`` over
    ``Delta^n``; the right side is ``Ex_{n+1}`` of the diagonal of the
    straightening.  Each intermediate description is materialised and the
    composite is checked for injectivity, surjectivity and compatibility with
    faces.
    """
    if p.target.dim != n:
        raise ValueError("p must land in the n-simplex")
    r = n + 1
    k = p.source
    base = standard_simplex(n)
    lhs = _relative_sections(p, cap)
    dg = diag_of_straightening(p)
    rhs = ex(r, dg, cap)
    counts = [(lhs.ncells(a) if a <= lhs.dim else 0, rhs.ncells(a) if a <= rhs.dim else 0) for a in range(cap + 1)]
    images: dict[int, dict] = {}
    for a in range(cap + 1):
        da = standard_simplex(a)
        pr = product(da, base)
        sda = sd(r, da)
        seen: dict = {}
        elems = list(_relative_homs(a, p, pr))
        for phi in elems:
            # (A) -> (B): value on every simplex (u, v), degenerate ones included
            offs = _offsets(pr)
            table_b = {}
            for m in range(max(a + n, r * (a + 1) - 1) + 1):
                for u in da.simplices(m):
                    for v in base.simplices(m):
                        s, c = product_locate(pr, u, v)
                        table_b[(u, v)] = k.apply(s, phi[offs[s[-1]] + c])
            # (B) -> (C): keep only v surjective onto Delta^n
            table_c = {uv: y for uv, y in table_b.items() if len(set(_vertices(n, uv[1]))) == n + 1}
            # (C) -> (D): restrict to v of block form, indexed by (k, u)
            table_d = {}
            for kk in range(a + 1):
                blk = _base_simplex(n, block_vertices((kk,) * r))
                for u in da.simplices(r * (kk + 1) - 1):
                    table_d[(kk, u)] = table_c[(u, blk)]
            # (D) -> (E): the same data as a transformation into F . diag
            table_e = dict(table_d)
            # (E) -> (F): a map sd(Delta^a) -> F . diag, then its adjoint
            psi = []
            for d, c in flat_cells(sda):
                u = sda.cells[d][c]
                y = table_e[(d, u)]
                try:
                    psi.append(dg.locate(d, y))
                except KeyError:
                    return StraighteningReport(False, cap, counts, {"degree": a, "step": "E", "element": repr(phi)})
            psi = tuple(psi)
            if psi in seen:
                return StraighteningReport(False, cap, counts, {"degree": a, "step": "F", "reason": "not injective", "element": repr(phi)})
            seen[psi] = phi
        rhs_elems = set(iter_homs(sda, dg))
        if set(seen) != rhs_elems:
            missing = sorted(rhs_elems - set(seen), key=repr)[:1]
            return StraighteningReport(False, cap, counts, {"degree": a, "step": "F", "reason": "not surjective", "element": repr(missing)})
        images[a] = {phi: psi for psi, phi in seen.items()}
    # compatibility with faces
    for a in range(1, cap + 1):
        for phi, psi in images[a].items():
            for i in range(a + 1):
                th = coface(i, a)
                lf = _act_relative(a, th, phi, p)
                rf = precompose(psi, sd_map(r, simplex_map(th, a)), dg)
                if images[a - 1].get(lf) != rf:
                    return StraighteningReport(False, cap, counts, {"degree": a, "step": "faces", "face": i, "element": repr(phi)})
    return StraighteningReport(True, cap, counts)


def _vertices(n: int, v: Simplex) -> tuple[int, ...]:
    from .sset import simplex_vertices

    return simplex_vertices(n, v)


def _offsets(x: SSet) -> list[int]:
    out, t = [], 0
    for d in range(x.dim + 1):
        out.append(t)
        t += x.ncells(d)
    return out


def _relative_homs(a: int, p: SMap, pr: SSet):
    from .sset import projection

    base = p.target
    return iter_homs(pr, p.source, over=(p, projection(pr, 1, base)))


def _act_relative(a: int, th: Op, phi, p: SMap):
    from .sset import product_map

    base = p.target
    m = len(th) - 1
    f = product_map(simplex_map(th, a), identity_map(base), product(standard_simplex(m), base), product(standard_simplex(a), base))
    return precompose(phi, f, p.source)


def _relative_sections(p: SMap, cap: int) -> SSet:
    from .sset import relative_hom

    return relative_hom(identity_map(p.target), p, cap)


# ----------------------------------------------------------------------------
# homotopies on subdivided nerves


def poset_nerve(elements: Sequence, leq: Callable[[Hashable, Hashable], bool]) -> SSet:
    """Nerve of a finite poset; cells are strictly increasing chains."""
    elements = list(elements)
    top = 0
    chains = [[(e,) for e in elements]]
    while chains[-1]:
        nxt = [c + (e,) for c in chains[-1] for e in elements if e != c[-1] and leq(c[-1], e)]
        chains.append(nxt)
        top += 1
    cells = chains[:-1]
    faces = {c: tuple((identity(len(c) - 2), c[:i] + c[i + 1:]) for i in range(len(c))) for cs in cells[1:] for c in cs}
    return SSet.assemble(cells, faces)


def chain_of(x: SSet, s: Simplex) -> tuple:
    """Weakly increasing chain of a simplex in a poset nerve."""
    lab = x.label(s)
    return tuple(lab[t] for t in s[0])


def simplex_of_chain(x: SSet, chain: Sequence) -> Simplex:
    from .sset import factor

    keep = [t for t in range(len(chain)) if t == 0 or chain[t] != chain[t - 1]]
    surj, _ = factor([sum(1 for t in keep if t <= j) - 1 for j in range(len(chain))])
    lab = tuple(chain[t] for t in keep)
    d, c = x.index[lab]
    return surj, c


def _double_chain(nerve: SSet, r: int, z_cell, m: int) -> tuple:
    """The underlying chain of length r*r*(m+1) of an m-cell of sd(sd(N))."""
    s1 = sd(r, nerve)
    kk = z_cell[0][-1]
    w = nerve.apply(star(z_cell[0], r, kk), s1.label((identity(kk), z_cell[1])))
    return chain_of(nerve, w)


def _pos(r: int, m: int, p: int, f: int, j: int) -> int:
    return p * r * (m + 1) + f * (m + 1) + j


def interpolation_map(nerve: SSet, r: int, i: int) -> SMap:
    """h^(i): blocks 1..i take the last factor of their own copy, later blocks the matching factor of the last copy."""
    if not 0 <= i <= r:
        raise ValueError(f"index {i} outside 0..{r}")
    s1 = sd(r, nerve)
    s2 = sd(r, s1)

    def img(m, c):
        z = s2.cells[m][c]
        ch = _double_chain(nerve, r, z, m)
        out = []
        for b in range(1, r + 1):
            p, f = (b, r) if b <= i else (r, b)
            out.extend(ch[_pos(r, m, p - 1, f - 1, j)] for j in range(m + 1))
        return s1.locate(m, simplex_of_chain(nerve, out))

    return SMap.from_function(s2, s1, img)


def interpolation_homotopy(nerve: SSet, r: int, i: int) -> tuple[SMap, SSet]:
    """The homotopy between h^(i+1) (at vertex 0) and h^(i) (at vertex 1).

    Only block i+1 moves: vertices at or before the switching index use the
    last factor of copy i+1, later ones use factor i+1 of the last copy.
    """
    if not 0 <= i < r:
        raise ValueError(f"index {i} outside 0..{r - 1}")
    s1 = sd(r, nerve)
    s2 = sd(r, s1)
    interval = standard_simplex(1)
    cyl = product(interval, s2)
    sw = i + 1
    from .sset import simplex_vertices

    def img(m, c):
        e, z = cyl.cells[m][c]
        ev = simplex_vertices(1, e)
        a = sum(1 for v in ev if v == 0) - 1
        kk = z[0][-1]
        zc = s2.cells[kk][z[1]]
        ch_full = _double_chain(nerve, r, zc, kk)
        # pull the chain of the cell back along the degeneracy of z
        zz = z[0]
        ch = [ch_full[_pos(r, kk, p, f, zz[j])] for p in range(r) for f in range(r) for j in range(m + 1)]
        out = []
        for b in range(1, r + 1):
            for j in range(m + 1):
                if b < sw:
                    p, f = b, r
                elif b > sw:
                    p, f = r, b
                elif j <= a:
                    p, f = sw, r
                else:
                    p, f = r, sw
                out.append(ch[_pos(r, m, p - 1, f - 1, j)])
        return s1.locate(m, simplex_of_chain(nerve, out))

    return SMap.from_function(cyl, s1, img), cyl


@dataclass
class HomotopyReport:
    h_valid: bool
    eta_valid: bool
    starts_at: bool
    ends_at: bool

    @property
    def ok(self) -> bool:
        return self.h_valid and self.eta_valid and self.starts_at and self.ends_at

    def to_json(self) -> dict:
        return {"ok": self.ok, "h_valid": self.h_valid, "eta_valid": self.eta_valid, "vertex0_is_h_next": self.starts_at, "vertex1_is_h": self.ends_at}


def interpolation_homotopies(elements: Sequence, leq: Callable, r: int, i: int) -> tuple[SMap, SMap | None, HomotopyReport]:
    nerve = poset_nerve(elements, leq)
    h = interpolation_map(nerve, r, i)
    if i == r:
        return h, None, HomotopyReport(h.is_valid(), True, True, True)
    h_next = interpolation_map(nerve, r, i + 1)
    homotopy, cyl = interpolation_homotopy(nerve, r, i)
    s2 = h.source
    interval = standard_simplex(1)

    def restrict(end):
        return SMap.from_function(
            s2, homotopy.target, lambda d, c: homotopy(product_locate(cyl, ((0,) * (d + 1), interval.index[(end,)][1]), (identity(d), c)))
        )

    return h, homotopy, HomotopyReport(h.is_valid(), homotopy.is_valid(), restrict(0) == h_next, restrict(1) == h)
