"""Finite simplicial sets presented by their nondegenerate cells.

A simplex of degree ``n`` is stored as a pair ``(surj, cell)`` where ``surj`` is a
monotone surjection ``[n] -> [k]`` written as its value tuple and ``cell`` is the
index of a nondegenerate ``k``-cell.  This is the Eilenberg-Zilber normal form, so
two simplices are equal exactly when their pairs are equal.

Simplicial operators are monotone maps ``[m] -> [n]``, again written as value
tuples, and act on the right: ``X.apply(theta, x)`` is ``theta^* x``.

>>> tri = standard_simplex(2)
>>> tri.counts()
(3, 3, 1)
>>> product(standard_simplex(1), standard_simplex(1)).counts()
(4, 5, 2)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Sequence

Op = tuple[int, ...]
Simplex = tuple[Op, int]


class TrustError(ValueError):
    """Raised when a computation asks for degrees beyond a truncation cap."""


class ComplexError(ValueError):
    def __init__(self, message: str, subset=None):
        super().__init__(message)
        self.subset = subset


# ----------------------------------------------------------------------------
# monotone maps


def identity(n: int) -> Op:
    return tuple(range(n + 1))


def coface(i: int, n: int) -> Op:
    """The injection [n-1] -> [n] that skips ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(j: int, n: int) -> Op:
    """The surjection [n+1] -> [n] that hits ``j`` twice."""
    return tuple(t if t <= j else t - 1 for t in range(n + 2))


def compose(a: Op, b: Op) -> Op:
    """``a`` after ``b``."""
    return tuple(a[t] for t in b)


def monotone_maps(m: int, n: int) -> Iterator[Op]:
    return itertools.combinations_with_replacement(range(n + 1), m + 1)


def surjections(n: int, k: int) -> Iterator[Op]:
    """Monotone surjections [n] -> [k], in lexicographic order of jump positions."""
    for steps in itertools.combinations(range(1, n + 1), k):
        out, v, it = [], 0, iter(steps)
        nxt = next(it, None)
        for t in range(n + 1):
            if t == nxt:
                v += 1
                nxt = next(it, None)
            out.append(v)
        yield tuple(out)


def is_surjective(g: Sequence[int], k: int) -> bool:
    if g[0] != 0 or g[-1] != k:
        return False
    return all(g[t + 1] - g[t] <= 1 for t in range(len(g) - 1))


def factor(theta: Sequence[int]) -> tuple[Op, Op]:
    """Split a monotone map into (surjection, injection)."""
    image = sorted(set(theta))
    rank = {v: i for i, v in enumerate(image)}
    return tuple(rank[v] for v in theta), tuple(image)


def star(theta: Op, r: int, m: int) -> Op:
    """The r-fold ordered join of ``theta: [len-1] -> [m]``."""
    return tuple(b * (m + 1) + v for b in range(r) for v in theta)


@dataclass(frozen=True)
class DegeneracyWord:
    """A composite ``s_{i_1} ... s_{i_k}`` with ``i_1 > ... > i_k``."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if any(i < 0 for i in idx) or any(a <= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"degeneracy indices must strictly decrease: {idx}")

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def from_surjection(cls, surj: Sequence[int]) -> "DegeneracyWord":
        rep = [j for j in range(len(surj) - 1) if surj[j] == surj[j + 1]]
        return cls(tuple(sorted(rep, reverse=True)))

    def surjection(self, k: int) -> Op:
        """The surjection [k + len] -> [k] this word applies to a k-cell."""
        g = list(range(k + len(self.indices) + 1))
        top = k + len(self.indices)
        for i in self.indices:
            top -= 1
            g = [v if v <= i else v - 1 for v in g]
        return tuple(g)


def label_key(x):
    """Total order on the hashable labels used in this package."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, (int, Fraction)):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, (tuple, list)):
        return (3, tuple(label_key(y) for y in x))
    if isinstance(x, frozenset):
        return (4, tuple(sorted(label_key(y) for y in x)))
    if x is None:
        return (-1,)
    return (5, repr(x))


# ----------------------------------------------------------------------------
# simplicial sets


class SSet:
    """A finite simplicial set, optionally truncated at ``cap``.

    ``cells[d]`` lists labels of nondegenerate d-cells and ``faces[d][c][i]`` is
    the simplex ``d_i`` of cell ``c``.  When ``cap`` is set, cells above that
    dimension are not represented and nothing is claimed about them.
    """

    def __init__(self, cells, faces, cap: int | None = None):
        cells = [tuple(c) for c in cells]
        faces = [tuple(tuple(f) for f in fd) for fd in faces]
        while cells and not cells[-1]:
            cells.pop()
            faces.pop()
        self.cells: tuple[tuple[Hashable, ...], ...] = tuple(cells)
        self.faces: tuple[tuple[tuple[Simplex, ...], ...], ...] = tuple(faces)
        self.cap = cap
        self.index = {lab: (d, i) for d, cs in enumerate(self.cells) for i, lab in enumerate(cs)}
        self._simplices: dict[int, list[Simplex]] = {}
        self._face_index: dict[int, dict] = {}
        self._locate: list[dict] | None = None
        self._act = None

    # -- basic data
    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def ncells(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def is_empty(self) -> bool:
        return not self.cells

    @property
    def trusted_through(self) -> float:
        return float("inf") if self.cap is None else self.cap

    def require(self, degree: int) -> None:
        if self.cap is not None and degree > self.cap:
            raise TrustError(f"degree {degree} requested but cells are only known through {self.cap}")

    def cell(self, label) -> Simplex:
        d, i = self.index[label]
        return identity(d), i

    def label(self, x: Simplex):
        return self.cells[x[0][-1]][x[1]]

    def __eq__(self, other):
        return (
            isinstance(other, SSet)
            and self.cells == other.cells
            and self.faces == other.faces
            and self.cap == other.cap
        )

    def __hash__(self):
        return hash((self.cells, self.faces, self.cap))

    def __repr__(self):
        cap = "" if self.cap is None else f", cap={self.cap}"
        return f"SSet(counts={self.counts()}{cap})"

    # -- the simplicial action
    def apply(self, theta: Op, x: Simplex) -> Simplex:
        """``theta^* x`` for a monotone ``theta`` into the degree of ``x``."""
        surj, c = x
        g = tuple(surj[t] for t in theta)
        k = surj[-1]
        while True:
            if is_surjective(g, k):
                return g, c
            if g[0] != 0:
                v = 0
            elif g[-1] != k:
                v = k
            else:
                v = next(g[t] + 1 for t in range(len(g) - 1) if g[t + 1] - g[t] > 1)
            rho, c = self.faces[k][c][v]
            g = tuple(rho[u - (u > v)] for u in g)
            k = rho[-1]

    def face(self, i: int, x: Simplex) -> Simplex:
        return self.apply(coface(i, len(x[0]) - 1), x)

    def degeneracy(self, j: int, x: Simplex) -> Simplex:
        return self.apply(codegeneracy(j, len(x[0]) - 1), x)

    def vertices(self, x: Simplex) -> tuple[int, ...]:
        """Indices of the vertices of ``x`` in order."""
        return tuple(self.apply((t,), x)[1] for t in range(len(x[0])))

    def simplices(self, n: int) -> list[Simplex]:
        """All simplices of degree ``n``, degenerate ones included."""
        if n not in self._simplices:
            self.require(n)
            out = []
            for k in range(min(n, self.dim) + 1):
                for s in surjections(n, k):
                    out.extend((s, c) for c in range(len(self.cells[k])))
            self._simplices[n] = out
        return self._simplices[n]

    def face_index(self, n: int) -> dict:
        """Map from face tuples to the degree-n simplices having those faces."""
        if n not in self._face_index:
            idx: dict = {}
            for x in self.simplices(n):
                key = tuple(self.face(i, x) for i in range(n + 1)) if n else ()
                idx.setdefault(key, []).append(x)
            self._face_index[n] = idx
        return self._face_index[n]

    def locate(self, n: int, element) -> Simplex:
        """Normal form of a degreewise element, for sets built by ``from_degreewise``."""
        if self._locate is None:
            raise TypeError("this simplicial set has no degreewise model attached")
        if n < len(self._locate):
            return self._locate[n][element]
        # above the stored range every element is degenerate: find j with s_j d_j x = x
        act = self._act
        for j in range(n):
            y = act(coface(j, n), element)
            if act(codegeneracy(j, n - 1), y) == element:
                rho, c = self.locate(n - 1, y)
                return tuple(rho[t] for t in codegeneracy(j, n - 1)), c
        raise KeyError(f"{element!r} is not degenerate in degree {n}")

    # -- validation
    def check(self) -> None:
        """Verify face dimensions and the identities d_i d_j = d_{j-1} d_i."""
        for d in range(1, self.dim + 1):
            for c in range(len(self.cells[d])):
                fs = self.faces[d][c]
                if len(fs) != d + 1:
                    raise ValueError(f"cell {self.cells[d][c]!r} has {len(fs)} faces")
                for surj, f in fs:
                    k = surj[-1]
                    if len(surj) != d or not is_surjective(surj, k) or not 0 <= f < self.ncells(k):
                        raise ValueError(f"bad face data on {self.cells[d][c]!r}")
                if d < 2:
                    continue
                x = (identity(d), c)
                for j in range(d + 1):
                    for i in range(j):
                        lhs = self.face(i, self.face(j, x))
                        rhs = self.face(j - 1, self.face(i, x))
                        if lhs != rhs:
                            raise ValueError(f"simplicial identity fails on {self.cells[d][c]!r} at ({i},{j})")

    # -- constructors
    @classmethod
    def assemble(cls, cells_by_dim: Sequence[Sequence], faces: dict, cap: int | None = None) -> "SSet":
        """Build from labels; ``faces[label]`` lists ``(surj, face_label)`` pairs.

        Cells are sorted by vertex path, then face data, then label, which gives
        a deterministic presentation.
        """
        cells_by_dim = [list(c) for c in cells_by_dim]
        while cells_by_dim and not cells_by_dim[-1]:
            cells_by_dim.pop()
        vpath: dict = {}
        for lab in cells_by_dim[0] if cells_by_dim else []:
            vpath[lab] = (lab,)
        for d in range(1, len(cells_by_dim)):
            for lab in cells_by_dim[d]:
                fs = faces[lab]
                s_last, f_last = fs[d]
                s_first, f_first = fs[0]
                head = tuple(vpath[f_last][s_last[j]] for j in range(d))
                tail = vpath[f_first][s_first[d - 1]]
                vpath[lab] = head + (tail,)
        order: dict = {}
        sorted_cells = []
        for d, labs in enumerate(cells_by_dim):
            if d == 0:
                labs = sorted(labs, key=label_key)
            else:
                def key(lab, d=d):
                    vs = tuple(order[v] for v in vpath[lab])
                    fs = tuple((s, order[f]) for s, f in faces[lab])
                    return (vs, fs, label_key(lab))
                labs = sorted(labs, key=key)
            for i, lab in enumerate(labs):
                order[lab] = i
            sorted_cells.append(labs)
        face_data = [
            [tuple((s, order[f]) for s, f in faces[lab]) if d else () for lab in labs]
            for d, labs in enumerate(sorted_cells)
        ]
        return cls(sorted_cells, face_data, cap=cap)

    @classmethod
    def from_degreewise(
        cls,
        simplices: Callable[[int], Iterable],
        act: Callable[[Op, Hashable], Hashable],
        top: int,
        cap: int | None = None,
    ) -> "SSet":
        """Build from a degreewise model up to degree ``top``.

        ``simplices(n)`` lists every n-simplex (degenerate ones included) as a
        hashable value and ``act(theta, x)`` is the simplicial action.  The
        nondegenerate cells are those outside the images of degeneracies.
        """
        decomp: list[dict] = []
        cells_by_dim: list[list] = []
        faces: dict = {}
        for n in range(top + 1):
            elems = list(simplices(n))
            d: dict = {}
            if n > 0:
                for j in range(n):
                    sj = codegeneracy(j, n - 1)
                    for y, (rho, lab) in decomp[n - 1].items():
                        x = act(sj, y)
                        if x not in d:
                            d[x] = (tuple(rho[t] for t in sj), lab)
            new = [x for x in elems if x not in d]
            idn = identity(n)
            for x in new:
                d[x] = (idn, x)
            decomp.append(d)
            cells_by_dim.append(new)
            if n > 0:
                for x in new:
                    faces[x] = tuple(d_prev for d_prev in (decomp[n - 1][act(coface(i, n), x)] for i in range(n + 1)))
        out = cls.assemble(cells_by_dim, faces, cap=cap)
        out._act = act
        out._locate = [
            {x: (s, out.index[lab][1]) for x, (s, lab) in dn.items()} for dn in decomp
        ]
        return out


def empty_sset() -> SSet:
    return SSet([], [])


class TruncatedSSet(SSet):
    """An SSet whose cells above ``cap`` are deliberately absent."""

    def __init__(self, cells, faces, cap: int = 3):
        super().__init__(cells, faces, cap=cap)


def truncate(x: SSet, cap: int) -> SSet:
    out = SSet(x.cells[: cap + 1], x.faces[: cap + 1], cap=cap)
    return out


# ----------------------------------------------------------------------------
# maps


class SMap:
    """A simplicial map given by the images of nondegenerate cells."""

    def __init__(self, source: SSet, target: SSet, images):
        self.source = source
        self.target = target
        self.images: tuple[tuple[Simplex, ...], ...] = tuple(tuple(i) for i in images)

    def __call__(self, x: Simplex) -> Simplex:
        surj, c = x
        return self.target.apply(surj, self.images[surj[-1]][c])

    @classmethod
    def from_function(cls, source: SSet, target: SSet, fn: Callable[[int, int], Simplex]) -> "SMap":
        return cls(source, target, [[fn(d, c) for c in range(len(cs))] for d, cs in enumerate(source.cells)])

    def check(self) -> None:
        for d in range(1, self.source.dim + 1):
            for c in range(self.source.ncells(d)):
                y = self.images[d][c]
                if len(y[0]) != d + 1:
                    raise ValueError("image has the wrong degree")
                for i in range(d + 1):
                    if self(self.source.faces[d][c][i]) != self.target.face(i, y):
                        raise ValueError(f"map does not commute with d_{i} on {self.source.cells[d][c]!r}")

    def is_valid(self) -> bool:
        try:
            self.check()
        except ValueError:
            return False
        return True

    def is_injective(self) -> bool:
        seen = set()
        for d, ims in enumerate(self.images):
            for y in ims:
                if y[0] != identity(d) or y in seen:
                    return False
                seen.add(y)
        return True

    def is_isomorphism(self) -> bool:
        return self.is_injective() and all(
            len(self.images[d]) == self.target.ncells(d) for d in range(self.target.dim + 1)
        ) and self.source.dim == self.target.dim

    def then(self, other: "SMap") -> "SMap":
        """``other`` after ``self``."""
        return SMap(self.source, other.target, [[other(y) for y in ims] for ims in self.images])

    def __eq__(self, other):
        return isinstance(other, SMap) and self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self):
        return hash(self.images)


def identity_map(x: SSet) -> SMap:
    return SMap.from_function(x, x, lambda d, c: (identity(d), c))


# ----------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class SimplicialComplex:
    """A vertex order plus a downward-closed family of nonempty simplices."""

    vertices: tuple
    simplices: frozenset

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable], vertices: Sequence | None = None) -> "SimplicialComplex":
        faces = set()
        for f in facets:
            f = tuple(f)
            for r in range(1, len(f) + 1):
                faces.update(frozenset(s) for s in itertools.combinations(f, r))
        if vertices is None:
            vertices = sorted({v for s in faces for v in s}, key=label_key)
        return cls(tuple(vertices), frozenset(faces))

    def __post_init__(self):
        object.__setattr__(self, "simplices", frozenset(frozenset(s) for s in self.simplices))

    def validate(self, strict: bool = True) -> list[str]:
        """Raise on closure violations; return warnings (e.g. unused vertices)."""
        pos = set(self.vertices)
        for s in self.simplices:
            if not s:
                raise ComplexError("the empty set is not a simplex", s)
            if not s <= pos:
                raise ComplexError("simplex uses unknown vertices", s)
            for v in s:
                if len(s) > 1 and (s - {v}) not in self.simplices:
                    raise ComplexError("not closed under taking faces", s - {v})
        warnings = []
        used = {v for s in self.simplices for v in s}
        for v in self.vertices:
            if v not in used:
                msg = f"vertex {v!r} lies in no simplex"
                if strict:
                    raise ComplexError(msg, frozenset([v]))
                warnings.append(msg)
        return warnings

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def maximal(self) -> list[frozenset]:
        out = [s for s in self.simplices if not any(s < t for t in self.simplices)]
        return sorted(out, key=self.simplex_key)

    def purity(self) -> int | None:
        """The dimension d if every simplex lies in a (d+1)-element simplex."""
        top = self.maximal()
        dims = {len(s) - 1 for s in top}
        return dims.pop() if len(dims) == 1 else None

    def is_maximal(self, s) -> bool:
        s = frozenset(s)
        return s in self.simplices and not any(s < t for t in self.simplices)

    def ordered(self, s) -> tuple:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return tuple(sorted(s, key=pos.__getitem__))

    def simplex_key(self, s):
        pos = {v: i for i, v in enumerate(self.vertices)}
        return (len(s), sorted(pos[v] for v in s))

    def sorted_simplices(self) -> list[frozenset]:
        return sorted(self.simplices, key=self.simplex_key)

    def to_json(self) -> dict:
        return {
            "vertices": [_jsonable(v) for v in self.vertices],
            "simplices": [[_jsonable(v) for v in self.ordered(s)] for s in self.sorted_simplices()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        verts = tuple(_from_jsonable(v) for v in data["vertices"])
        simp = frozenset(frozenset(_from_jsonable(v) for v in s) for s in data["simplices"])
        return cls(verts, simp)


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, frozenset):
        return sorted((_jsonable(y) for y in x), key=label_key)
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator] if x.denominator != 1 else x.numerator
    return x


def _from_jsonable(x):
    if isinstance(x, list):
        return tuple(_from_jsonable(y) for y in x)
    return x


# ----------------------------------------------------------------------------
# basic objects


@lru_cache(maxsize=None)
def standard_simplex(n: int) -> SSet:
    """The n-simplex; cells are labelled by their strictly increasing vertex tuples."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cells = [list(itertools.combinations(range(n + 1), d + 1)) for d in range(n + 1)]
    faces = {lab: tuple((identity(len(lab) - 2), lab[:i] + lab[i + 1:]) for i in range(len(lab))) for d in cells[1:] for lab in d}
    return SSet.assemble(cells, faces)


def simplex_vertices(m: int, x: Simplex) -> tuple[int, ...]:
    """Vertex tuple of a simplex of the standard m-simplex."""
    lab = standard_simplex(m).label(x)
    return tuple(lab[s] for s in x[0])


def simplex_from_vertices(m: int, w: Sequence[int]) -> Simplex:
    """The simplex of the standard m-simplex with the given weakly increasing vertices."""
    surj, image = factor(w)
    return surj, standard_simplex(m).index[image][1]


@lru_cache(maxsize=None)
def simplex_map(theta: Op, n: int) -> SMap:
    """The map between standard simplices induced by ``theta: [m] -> [n]``."""
    m = len(theta) - 1
    src, tgt = standard_simplex(m), standard_simplex(n)
    return SMap.from_function(
        src, tgt, lambda d, c: simplex_from_vertices(n, [theta[v] for v in src.cells[d][c]])
    )


def sub_sset(x: SSet, labels: Iterable) -> tuple[SSet, SMap]:
    """The simplicial subset on the given cells (must be closed under faces)."""
    keep = set(labels)
    cells = [[lab for lab in cs if lab in keep] for cs in x.cells]
    faces = {}
    for d in range(1, len(cells)):
        for lab in cells[d]:
            fs = []
            for s, f in x.faces[d][x.index[lab][1]]:
                flab = x.cells[s[-1]][f]
                if flab not in keep:
                    raise ValueError(f"{flab!r} is a face of {lab!r} but was not kept")
                fs.append((s, flab))
            faces[lab] = tuple(fs)
    sub = SSet.assemble(cells, faces)
    inc = SMap.from_function(sub, x, lambda d, c: (identity(d), x.index[sub.cells[d][c]][1]))
    return sub, inc


def boundary_or_horn(n: int, k: int | None = None) -> tuple[SSet, SMap]:
    """The boundary of the n-simplex, or the horn missing face ``k``, with its inclusion."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if k is not None and not 0 <= k <= n:
        raise ValueError(f"horn index {k} out of range 0..{n}")
    full = tuple(range(n + 1))
    drop = {full}
    if k is not None:
        drop.add(full[:k] + full[k + 1:])
    labels = [lab for cs in standard_simplex(n).cells for lab in cs if lab not in drop]
    return sub_sset(standard_simplex(n), labels)


def from_complex(c: SimplicialComplex, strict: bool = False) -> SSet:
    """The ordered simplicial set of a complex (one cell per simplex)."""
    c.validate(strict=strict)
    pos = {v: i for i, v in enumerate(c.vertices)}
    cells: list[list] = [[] for _ in range(c.dim + 1)]
    faces = {}
    for s in c.simplices:
        lab = tuple(sorted(s, key=pos.__getitem__))
        cells[len(lab) - 1].append(lab)
        if len(lab) > 1:
            faces[lab] = tuple((identity(len(lab) - 2), lab[:i] + lab[i + 1:]) for i in range(len(lab)))
    return SSet.assemble(cells, faces)


def complex_map(source: SimplicialComplex, target: SimplicialComplex, vertex_map) -> SMap:
    """The map of ordered simplicial sets induced by an order-preserving vertex map."""
    src, tgt = from_complex(source), from_complex(target)
    pos = {v: i for i, v in enumerate(target.vertices)}
    vm = vertex_map if callable(vertex_map) else vertex_map.__getitem__

    def img(d, c):
        w = [vm(v) for v in src.cells[d][c]]
        ranks = [pos[v] for v in w]
        if any(a > b for a, b in zip(ranks, ranks[1:])):
            raise ComplexError("vertex map does not preserve the vertex order", frozenset(src.cells[d][c]))
        surj, _ = factor(ranks)
        lab = tuple(dict.fromkeys(w))
        x = tgt.cell(lab)
        return tgt.apply(surj, x)

    return SMap.from_function(src, tgt, img)


def point() -> SSet:
    return standard_simplex(0)


def to_point(x: SSet) -> SMap:
    return SMap.from_function(x, point(), lambda d, c: ((0,) * (d + 1), 0))


# ----------------------------------------------------------------------------
# products, joins, colimits


def _pair_normal(x: Simplex, y: Simplex) -> tuple[Op, Simplex, Simplex]:
    """Split a pair of equal-degree simplices into (joint surjection, nondegenerate pair)."""
    sx, cx = x
    sy, cy = y
    keep = [t for t in range(len(sx)) if t == 0 or sx[t] != sx[t - 1] or sy[t] != sy[t - 1]]
    joint, r = [], -1
    kset = set(keep)
    for t in range(len(sx)):
        if t in kset:
            r += 1
        joint.append(r)
    return tuple(joint), (tuple(sx[t] for t in keep), cx), (tuple(sy[t] for t in keep), cy)


def product(a: SSet, b: SSet) -> SSet:
    """Cartesian product; cells are labelled by nondegenerate pairs of simplices."""
    if a.is_empty() or b.is_empty():
        return empty_sset()
    cells: list[list] = [[] for _ in range(a.dim + b.dim + 1)]
    faces = {}
    for p in range(a.dim + 1):
        for q in range(b.dim + 1):
            for n in range(max(p, q), p + q + 1):
                pairs = [
                    (s, t)
                    for s in surjections(n, p)
                    for t in surjections(n, q)
                    if all(s[j] != s[j + 1] or t[j] != t[j + 1] for j in range(n))
                ]
                for ca in range(a.ncells(p)):
                    for cb in range(b.ncells(q)):
                        for s, t in pairs:
                            cells[n].append(((s, ca), (t, cb)))
    for n in range(1, len(cells)):
        for lab in cells[n]:
            x, y = lab
            fs = []
            for i in range(n + 1):
                joint, fx, fy = _pair_normal(a.face(i, x), b.face(i, y))
                fs.append((joint, (fx, fy)))
            faces[lab] = tuple(fs)
    return SSet.assemble(cells, faces)


def product_locate(prod: SSet, x: Simplex, y: Simplex) -> Simplex:
    joint, nx, ny = _pair_normal(x, y)
    return joint, prod.index[(nx, ny)][1]


def product_map(f: SMap, g: SMap, source: SSet | None = None, target: SSet | None = None) -> SMap:
    source = source or product(f.source, g.source)
    target = target or product(f.target, g.target)

    def img(d, c):
        x, y = source.cells[d][c]
        return product_locate(target, f(x), g(y))

    return SMap.from_function(source, target, img)


def projection(prod: SSet, which: int, factor_set: SSet) -> SMap:
    """Projection of a product built by ``product`` onto factor 0 or 1."""
    return SMap.from_function(prod, factor_set, lambda d, c: prod.cells[d][c][which])


def product_degreewise(a: SSet, b: SSet) -> SSet:
    """The same product computed by brute force on all simplices."""
    if a.is_empty() or b.is_empty():
        return empty_sset()
    return SSet.from_degreewise(
        lambda n: [(x, y) for x in a.simplices(n) for y in b.simplices(n)],
        lambda th, xy: (a.apply(th, xy[0]), b.apply(th, xy[1])),
        a.dim + b.dim,
    )


def join(a: SSet, b: SSet) -> SSet:
    """Simplicial join.  Labels are ('L', x), ('R', y) and ('J', x, y)."""
    if a.is_empty():
        return _retag(b, "R")
    if b.is_empty():
        return _retag(a, "L")
    cells: list[list] = [[] for _ in range(a.dim + b.dim + 2)]
    faces = {}
    for side, x in (("L", a), ("R", b)):
        for d, labs in enumerate(x.cells):
            for c, lab in enumerate(labs):
                cells[d].append((side, lab))
                if d:
                    faces[(side, lab)] = tuple((s, (side, x.cells[s[-1]][f])) for s, f in x.faces[d][c])
    for p, la in enumerate(a.cells):
        for q, lb in enumerate(b.cells):
            for ca, xa in enumerate(la):
                for cb, yb in enumerate(lb):
                    lab = ("J", xa, yb)
                    cells[p + q + 1].append(lab)
                    fs = []
                    for i in range(p + 1):
                        if p == 0:
                            fs.append((identity(q), ("R", yb)))
                        else:
                            s, f = a.faces[p][ca][i]
                            k = s[-1]
                            fs.append((s + tuple(k + 1 + j for j in range(q + 1)), ("J", a.cells[k][f], yb)))
                    for i in range(q + 1):
                        if q == 0:
                            fs.append((identity(p), ("L", xa)))
                        else:
                            s, f = b.faces[q][cb][i]
                            fs.append((identity(p) + tuple(p + 1 + v for v in s), ("J", xa, b.cells[s[-1]][f])))
                    faces[lab] = tuple(fs)
    return SSet.assemble(cells, faces)


def _retag(x: SSet, tag: str) -> SSet:
    cells = [[(tag, lab) for lab in cs] for cs in x.cells]
    faces = {
        (tag, lab): tuple((s, (tag, x.cells[s[-1]][f])) for s, f in x.faces[d][c])
        for d in range(1, x.dim + 1)
        for c, lab in enumerate(x.cells[d])
    }
    return SSet.assemble(cells, faces)


def join_degreewise(a: SSet, b: SSet) -> SSet:
    """Brute-force join on all simplices, used as an oracle."""

    def simplices(n):
        out = [("L", x) for x in (a.simplices(n) if n <= max(a.dim, 0) and not a.is_empty() else [])]
        out += [("R", y) for y in (b.simplices(n) if n <= max(b.dim, 0) and not b.is_empty() else [])]
        for p in range(n):
            q = n - 1 - p
            if p <= a.dim and q <= b.dim:
                out += [("J", x, y) for x in a.simplices(p) for y in b.simplices(q)]
        return out

    def act(th, s):
        if s[0] == "L":
            return ("L", a.apply(th, s[1]))
        if s[0] == "R":
            return ("R", b.apply(th, s[1]))
        p = len(s[1][0]) - 1
        left = [v for v in th if v <= p]
        right = [v - p - 1 for v in th if v > p]
        if not right:
            return ("L", a.apply(tuple(left), s[1]))
        if not left:
            return ("R", b.apply(tuple(right), s[2]))
        return ("J", a.apply(tuple(left), s[1]), b.apply(tuple(right), s[2]))

    return SSet.from_degreewise(simplices, act, a.dim + b.dim + 1)


def disjoint_union(parts: Sequence[SSet]) -> SSet:
    """Coproduct; cells of part i are labelled (i, label)."""
    top = max((p.dim for p in parts), default=-1)
    cells: list[list] = [[] for _ in range(top + 1)]
    faces = {}
    for i, x in enumerate(parts):
        for d, labs in enumerate(x.cells):
            for c, lab in enumerate(labs):
                cells[d].append((i, lab))
                if d:
                    faces[(i, lab)] = tuple((s, (i, x.cells[s[-1]][f])) for s, f in x.faces[d][c])
    return SSet.assemble(cells, faces)


def coprojection(union: SSet, i: int, part: SSet) -> SMap:
    return SMap.from_function(part, union, lambda d, c: (identity(d), union.index[(i, part.cells[d][c])][1]))


def pushout(f: SMap, g: SMap) -> tuple[SSet, SMap, SMap]:
    """Pushout of ``B <-f- A -g-> C`` computed degreewise, with both coprojections.

    Simplices are equivalence classes in B_n + C_n, represented by their least
    member.  Quotients and coproducts are the special cases documented below.
    """
    a, b, c = f.source, f.target, g.target
    if f.source is not g.source and f.source != g.source:
        raise ValueError("the two maps must share a source")
    top = max(b.dim, c.dim)
    reps: dict[int, dict] = {}

    def classes(n):
        if n in reps:
            return reps[n]
        parent: dict = {}

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        elems = [("B", x) for x in b.simplices(n)] + [("C", y) for y in c.simplices(n)]
        for e in elems:
            parent[e] = e
        for s in a.simplices(n):
            u, v = find(("B", f(s))), find(("C", g(s)))
            if u != v:
                if label_key(u) < label_key(v):
                    parent[v] = u
                else:
                    parent[u] = v
        reps[n] = {e: find(e) for e in elems}
        return reps[n]

    def simplices(n):
        return sorted(set(classes(n).values()), key=label_key)

    def act(th, e):
        m = len(th) - 1
        side, x = e
        y = b.apply(th, x) if side == "B" else c.apply(th, x)
        return classes(m)[(side, y)]

    out = SSet.from_degreewise(simplices, act, top)
    jb = SMap.from_function(b, out, lambda d, k: out.locate(d, classes(d)[("B", (identity(d), k))]))
    jc = SMap.from_function(c, out, lambda d, k: out.locate(d, classes(d)[("C", (identity(d), k))]))
    return out, jb, jc


def empty_map(target: SSet) -> SMap:
    return SMap(empty_sset(), target, [])


def coproduct(x: SSet, y: SSet) -> tuple[SSet, SMap, SMap]:
    """Coproduct as the pushout over the empty simplicial set."""
    return pushout(empty_map(x), empty_map(y))


def quotient(inclusion: SMap) -> tuple[SSet, SMap]:
    """Collapse the image of ``inclusion`` to a point."""
    out, jb, _ = pushout(inclusion, to_point(inclusion.source))
    return out, jb


# ----------------------------------------------------------------------------
# maps out of a finite simplicial set


def flat_cells(x: SSet) -> list[tuple[int, int]]:
    return [(d, c) for d in range(x.dim + 1) for c in range(x.ncells(d))]


def iter_homs(x: SSet, y: SSet, over: tuple[SMap, SMap] | None = None) -> Iterator[tuple[Simplex, ...]]:
    """All simplicial maps ``x -> y`` as tuples of cell images (in ``flat_cells`` order).

    With ``over=(p, q)`` for ``p: y -> L`` and ``q: x -> L`` only maps with
    ``p . phi = q`` are produced.
    """
    cells = flat_cells(x)
    if x.is_empty():
        yield ()
        return
    if y.is_empty():
        return
    y.require(x.dim)
    pos = {cell: i for i, cell in enumerate(cells)}
    order = _search_order(x)
    indexes = [y.face_index(d) for d in range(x.dim + 1)]
    p, q = over if over is not None else (None, None)
    img: list = [None] * len(cells)

    def value(s: Simplex) -> Simplex:
        surj, c = s
        return y.apply(surj, img[pos[(surj[-1], c)]])

    def rec(t):
        if t == len(order):
            yield tuple(img)
            return
        d, c = order[t]
        i = pos[(d, c)]
        key = tuple(value(s) for s in x.faces[d][c]) if d else ()
        target = q.images[d][c] if q is not None else None
        for cand in indexes[d].get(key, ()):
            if target is not None and p(cand) != target:
                continue
            img[i] = cand
            yield from rec(t + 1)
        img[i] = None

    yield from rec(0)


def _search_order(x: SSet) -> list[tuple[int, int]]:
    """Cells ordered so that each cell follows its faces and constraints bite early.

    Vertices are taken in breadth-first order along edges; after each vertex every
    cell whose faces are all placed is placed too.
    """
    nondeg_faces = {}
    for d in range(1, x.dim + 1):
        for c in range(x.ncells(d)):
            nondeg_faces[(d, c)] = {(s[-1], f) for s, f in x.faces[d][c]}
    nbrs: dict[int, set[int]] = {v: set() for v in range(x.ncells(0))}
    for c in range(x.ncells(1)):
        ends = [f for s, f in x.faces[1][c]]
        for a in ends:
            nbrs[a].update(ends)
    placed: set = set()
    order: list = []
    pending = [(d, c) for d in range(1, x.dim + 1) for c in range(x.ncells(d))]
    seen_v: set[int] = set()
    queue: list[int] = []
    for start in range(x.ncells(0)):
        if start in seen_v:
            continue
        queue.append(start)
        seen_v.add(start)
        while queue:
            v = queue.pop(0)
            order.append((0, v))
            placed.add((0, v))
            progress = True
            while progress:
                progress = False
                rest = []
                for cell in pending:
                    if nondeg_faces[cell] <= placed:
                        order.append(cell)
                        placed.add(cell)
                        progress = True
                    else:
                        rest.append(cell)
                pending = rest
            for w in sorted(nbrs[v]):
                if w not in seen_v:
                    seen_v.add(w)
                    queue.append(w)
    return order


def hom_as_map(x: SSet, y: SSet, phi: Sequence[Simplex]) -> SMap:
    it = iter(phi)
    return SMap(x, y, [[next(it) for _ in range(x.ncells(d))] for d in range(x.dim + 1)])


def map_as_hom(f: SMap) -> tuple[Simplex, ...]:
    return tuple(y for ims in f.images for y in ims)


def precompose(phi: Sequence[Simplex], h: SMap, y: SSet) -> tuple[Simplex, ...]:
    """The tuple of ``phi . h`` where ``phi`` is a map out of ``h.target``."""
    src = h.target
    offs = _offsets(src)
    out = []
    for ims in h.images:
        for s, c in ims:
            out.append(y.apply(s, phi[offs[s[-1]] + c]))
    return tuple(out)


def _offsets(x: SSet) -> list[int]:
    offs, t = [], 0
    for d in range(x.dim + 1):
        offs.append(t)
        t += x.ncells(d)
    return offs


def relative_hom(sigma: SMap, f: SMap, cap: int = 3) -> SSet:
    """The relative mapping object of ``f: K -> L`` over ``sigma: Delta^n -> L``.

    Degree m consists of the maps ``Delta^m x Delta^n -> K`` lying over
    ``sigma`` composed with the projection; exact through ``cap``.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    n = sigma.source.dim
    k = f.source
    base = standard_simplex(n)
    prods = {m: product(standard_simplex(m), base) for m in range(cap + 1)}
    over = {}
    for m, pr in prods.items():
        over[m] = projection(pr, 1, base).then(sigma)
    cache: dict = {}

    def simplices(m):
        return list(iter_homs(prods[m], k, over=(f, over[m])))

    def act(th, phi):
        m_src = len(th) - 1
        m_tgt = _hom_degree(phi, prods)
        key = (th, m_tgt)
        if key not in cache:
            cache[key] = product_map(simplex_map(th, m_tgt), identity_map(base), prods[m_src], prods[m_tgt])
        return precompose(phi, cache[key], k)

    return TruncatedSSet.from_degreewise(simplices, act, cap, cap=cap)


def _hom_degree(phi, prods) -> int:
    for m, pr in prods.items():
        if len(phi) == sum(pr.counts()):
            return m
    raise ValueError("unrecognised map")


# ----------------------------------------------------------------------------
# lifting checks and horn attachment


@dataclass
class KanReport:
    passed: bool
    checked_through: int
    requested: int
    complete: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked_through": self.checked_through,
            "requested": self.requested,
            "complete": self.complete,
            "witness": self.witness,
        }


def check_acyclic_kan(x: SSet, dim: int) -> KanReport:
    """Search for fillers of every sphere ``boundary(Delta^m) -> x`` with m <= dim + 1.

    ``dim`` counts the dimension of the sphere, so ``dim = 0`` asks for pairs of
    vertices to be joined by an edge.  A truncated input is checked only through
    its cap and the report says so.
    """
    limit = dim + 1 if x.cap is None else min(dim + 1, x.cap)
    for m in range(limit + 1):
        if m == 0:
            if x.is_empty():
                return KanReport(False, 0, dim, x.cap is None or x.cap >= dim + 1, {"m": 0, "reason": "empty"})
            continue
        sphere, _ = boundary_or_horn(m)
        idx = x.face_index(m) if m <= x.dim else {}
        offs = _offsets(sphere)
        tops = [sphere.index[tuple(j for j in range(m + 1) if j != i)] for i in range(m + 1)]
        for phi in iter_homs(sphere, x):
            key = tuple(phi[offs[d] + c] for d, c in tops)
            if not idx.get(key):
                return KanReport(False, m, dim, True, {"m": m, "boundary": [[list(s), c] for s, c in key]})
    return KanReport(True, limit, dim, limit >= dim + 1)


def horn_fill_step(x: SSet, n: int, k: int) -> tuple[SSet, SMap]:
    """Attach one n-simplex along every map from the horn missing face k."""
    horn, inc = boundary_or_horn(n, k)
    maps = list(iter_homs(horn, x))
    if not maps:
        return x, identity_map(x)
    horns = disjoint_union([horn] * len(maps))
    cells = disjoint_union([standard_simplex(n)] * len(maps))
    offs = _offsets(horn)

    def to_x(d, c):
        i, lab = horns.cells[d][c]
        hd, hc = horn.index[lab]
        return maps[i][offs[hd] + hc]

    def to_cells(d, c):
        i, lab = horns.cells[d][c]
        return (identity(d), cells.index[(i, lab)][1])

    f = SMap.from_function(horns, x, to_x)
    g = SMap.from_function(horns, cells, to_cells)
    out, psi, _ = pushout(f, g)
    return out, psi


def glued_join(a: int, k: SSet, c: int) -> tuple[SSet, SMap]:
    """Glue ``Delta^a * (K x Delta^c)`` to ``Delta^c`` along the projection.

    Returns the colimit together with the map from ``Delta^a + Delta^c``.
    """
    dc = standard_simplex(c)
    da = standard_simplex(a)
    kc = product(k, dc)
    jn = join(da, kc)
    incl = SMap.from_function(kc, jn, lambda d, i: (identity(d), jn.index[("R", kc.cells[d][i])][1]))
    proj = projection(kc, 1, dc) if not kc.is_empty() else empty_map(dc)
    if kc.is_empty():
        incl = empty_map(jn)
    out, j_dc, j_join = pushout(proj, incl)
    ends = disjoint_union([da, dc])

    def img(d, i):
        part, lab = ends.cells[d][i]
        if part == 0:
            return j_join((identity(d), jn.index[("L", lab)][1]))
        return j_dc((identity(d), dc.index[lab][1]))

    return out, SMap.from_function(ends, out, img)


# ----------------------------------------------------------------------------
# canonical encodings


def canonical_form(x: SSet) -> tuple:
    """An isomorphism invariant that determines ``x`` up to isomorphism.

    Components are encoded separately by colour refinement with
    individualisation, and the sorted component codes are returned.
    """
    gid = {}
    cells = flat_cells(x)
    for i, dc in enumerate(cells):
        gid[dc] = i
    faces = [
        tuple((s, gid[(s[-1], f)]) for s, f in x.faces[d][c]) if d else () for d, c in cells
    ]
    cof: list[list] = [[] for _ in cells]
    for i, fs in enumerate(faces):
        for j, (s, f) in enumerate(fs):
            cof[f].append((j, s, i))
    parent = list(range(len(cells)))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for i, fs in enumerate(faces):
        for _, f in fs:
            parent[find(i)] = find(f)
    comps: dict = {}
    for i in range(len(cells)):
        comps.setdefault(find(i), []).append(i)
    dims = [d for d, _ in cells]
    codes = [_component_code(members, dims, faces, cof) for members in comps.values()]
    return tuple(sorted(codes))


def _component_code(members, dims, faces, cof):
    local = {g: i for i, g in enumerate(members)}
    fl = [tuple((s, local[f]) for s, f in faces[g]) for g in members]
    cl = [tuple((j, s, local[i]) for j, s, i in cof[g]) for g in members]
    dl = [dims[g] for g in members]

    def refine(col):
        ncls = len(set(col))
        while True:
            sig = [
                (col[i], tuple((s, col[f]) for s, f in fl[i]), tuple(sorted((j, s, col[k]) for j, s, k in cl[i])))
                for i in range(len(col))
            ]
            ranks = {v: r for r, v in enumerate(sorted(set(sig)))}
            col = [ranks[v] for v in sig]
            if len(ranks) == ncls:
                return col
            ncls = len(ranks)

    def encode(col):
        order = sorted(range(len(col)), key=col.__getitem__)
        pos = {i: p for p, i in enumerate(order)}
        return tuple((dl[i], tuple((s, pos[f]) for s, f in fl[i])) for i in order)

    def search(col):
        col = refine(col)
        if len(set(col)) == len(col):
            return encode(col)
        counts: dict = {}
        for v in col:
            counts[v] = counts.get(v, 0) + 1
        target = min(v for v, n in counts.items() if n > 1)
        best = None
        for i in range(len(col)):
            if col[i] == target:
                trial = [2 * v + (0 if j == i else 1) for j, v in enumerate(col)]
                code = search(trial)
                if best is None or code < best:
                    best = code
        return best

    return search(list(dl))


def isomorphic(x: SSet, y: SSet) -> bool:
    return x.counts() == y.counts() and canonical_form(x) == canonical_form(y)


# ----------------------------------------------------------------------------
# JSON


def sset_to_json(x: SSet) -> dict:
    out = {
        "cells": [[_jsonable(lab) for lab in cs] for cs in x.cells],
        "faces": [
            [[[list(DegeneracyWord.from_surjection(s).indices), s[-1], f] for s, f in fs] for fs in fd]
            for fd in x.faces
        ],
    }
    if x.cap is not None:
        out["cap"] = x.cap
    return out


def sset_from_json(data: dict) -> SSet:
    cells = [[_from_jsonable(lab) for lab in cs] for cs in data["cells"]]
    faces = {}
    for d, fd in enumerate(data.get("faces", [])):
        if d == 0:
            continue
        for c, fs in enumerate(fd):
            entry = []
            for word, k, f in fs:
                w = DegeneracyWord(tuple(word))
                if k + len(w) != d - 1:
                    raise ValueError(f"face of a {d}-cell has inconsistent degree")
                entry.append((w.surjection(k), cells[k][f]))
            faces[cells[d][c]] = tuple(entry)
    out = SSet.assemble(cells, faces, cap=data.get("cap"))
    out.check()
    return out
