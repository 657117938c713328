"""Exact integer homology of finite simplicial sets.

Boundary matrices are stored sparsely as one ``{row: value}`` dict per column.
Ranks and invariant factors come from a unit-pivot sparse elimination followed
by a dense Smith normal form on whatever is left.

>>> from combtopo.sset import boundary_or_horn
>>> sphere, _ = boundary_or_horn(3)
>>> c = normalized_chains(sphere, 3)
>>> [str(homology(c, k)) for k in range(3)]
['Z', '0', 'Z']
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .sset import SMap, SSet, TrustError, identity

INF = float("inf")

SparseColumns = list[dict[int, int]]


# ----------------------------------------------------------------------------
# Smith normal form


def _dense_invariants(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix."""
    a = [r[:] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                break
            # move the smallest leftover entry of row/column t into the corner
            best = (abs(p), None)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), ("r", i))
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), ("c", j))
            kind, idx = best[1]
            if kind == "r":
                a[t], a[idx] = a[idx], a[t]
            else:
                for r in a:
                    r[t], r[idx] = r[idx], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return _normalize_divisibility(diag)


def _normalize_divisibility(diag: Iterable[int]) -> list[int]:
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def smith_invariants(columns: SparseColumns, nrows: int | None = None) -> list[int]:
    """Nonzero invariant factors (ascending, each dividing the next) of a sparse matrix."""
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
                colrows.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(colrows, key=lambda c: len(colrows[c])):
            if j not in colrows:
                continue
            cands = [i for i in colrows[j] if abs(rows[i][j]) == 1]
            if not cands:
                continue
            p = min(cands, key=lambda i: (len(rows[i]), i))
            prow = rows.pop(p)
            pv = prow[j]
            for i in list(colrows[j]):
                if i == p:
                    continue
                row = rows[i]
                q = row[j] * pv  # pv is a unit, so row[j] / pv == row[j] * pv
                for c, v in prow.items():
                    nv = row.get(c, 0) - q * v
                    if nv:
                        row[c] = nv
                        colrows.setdefault(c, set()).add(i)
                    else:
                        row.pop(c, None)
                        colrows[c].discard(i)
                        if not colrows[c]:
                            del colrows[c]
                if not row:
                    del rows[i]
            for c in prow:
                if c in colrows:
                    colrows[c].discard(p)
                    if not colrows[c]:
                        del colrows[c]
            colrows.pop(j, None)
            units += 1
            progress = True
    rest = []
    if rows:
        cidx = {c: k for k, c in enumerate(sorted(colrows))}
        for i in sorted(rows):
            r = [0] * len(cidx)
            for c, v in rows[i].items():
                r[cidx[c]] = v
            rest.append(r)
    return [1] * units + _dense_invariants(rest)


def matrix_rank(columns: SparseColumns) -> int:
    return len(smith_invariants(columns))


# ----------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """Free chain complex with ``boundaries[k]`` the map from degree k to k-1.

    Modules in degrees above ``trusted_through`` are unknown.  A complex built
    from a finite, untruncated simplicial set is trusted in every degree.
    """

    ranks: list[int]
    boundaries: list[SparseColumns]
    trusted_through: float = INF
    _invariants: dict = field(default_factory=dict, repr=False)

    def rank(self, k: int) -> int:
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def boundary(self, k: int) -> SparseColumns:
        if 0 < k < len(self.boundaries):
            return self.boundaries[k]
        return [{} for _ in range(self.rank(k))]

    def invariants(self, k: int) -> list[int]:
        if k not in self._invariants:
            self._invariants[k] = smith_invariants(self.boundary(k))
        return self._invariants[k]

    def check(self) -> None:
        for k in range(2, len(self.ranks)):
            inner = self.boundary(k - 1)
            for col in self.boundary(k):
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for s, w in inner[r].items():
                        acc[s] = acc.get(s, 0) + v * w
                if any(acc.values()):
                    raise ValueError(f"boundary squares to a nonzero map in degree {k}")


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}


def normalized_chains(x: SSet, top: int) -> ChainComplex:
    """Chains on nondegenerate cells through degree ``top``; degenerate faces drop out."""
    x.require(top)
    stop = min(top, x.dim)
    ranks = [x.ncells(k) for k in range(stop + 1)]
    bds: list[SparseColumns] = [[]]
    for k in range(1, stop + 1):
        idk = identity(k - 1)
        cols = []
        for fs in x.faces[k]:
            col: dict[int, int] = {}
            for i, (s, f) in enumerate(fs):
                if s == idk:
                    v = col.get(f, 0) + (-1) ** i
                    if v:
                        col[f] = v
                    else:
                        col.pop(f)
            cols.append(col)
        bds.append(cols)
    complete = x.cap is None and top >= x.dim
    return ChainComplex(ranks, bds, INF if complete else top)


def homology(c: ChainComplex, k: int) -> HomologyGroup:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k + 1 > c.trusted_through:
        raise TrustError(f"H_{k} needs degree {k + 1}, but the complex is only known through {c.trusted_through}")
    out_rank = len(c.invariants(k))
    inv = c.invariants(k + 1)
    betti = c.rank(k) - out_rank - len(inv)
    return HomologyGroup(betti, tuple(t for t in inv if t > 1))


def reduced_homology(c: ChainComplex, k: int) -> HomologyGroup:
    """Homology of the augmented complex; the empty set has its class in degree -1."""
    if k < -1:
        raise ValueError("degree must be at least -1")
    if k == -1:
        return HomologyGroup(1 if c.rank(0) == 0 else 0)
    h = homology(c, k)
    if k == 0 and c.rank(0) > 0:
        return HomologyGroup(h.betti - 1, h.torsion)
    return h


def sset_homology(x: SSet, through: int) -> list[HomologyGroup]:
    c = normalized_chains(x, through + 1 if x.cap is None else min(through + 1, x.cap))
    return [homology(c, k) for k in range(through + 1)]


def naive_rational_betti(c: ChainComplex, k: int) -> int:
    """Betti number from Fraction-based Gaussian elimination; an independent oracle."""
    from fractions import Fraction

    def rank(cols, nrows):
        m = [[Fraction(col.get(i, 0)) for col in cols] for i in range(nrows)]
        r = 0
        ncols = len(cols)
        for j in range(ncols):
            piv = next((i for i in range(r, nrows) if m[i][j]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            for i in range(nrows):
                if i != r and m[i][j]:
                    q = m[i][j] / m[r][j]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
        return r

    return c.rank(k) - rank(c.boundary(k), c.rank(k - 1)) - rank(c.boundary(k + 1), c.rank(k))


# ----------------------------------------------------------------------------
# chain maps and cones


def chain_map(f: SMap, top: int) -> list[list[dict[int, int]]]:
    """Induced map on normalized chains: per degree, one column per source cell."""
    out = []
    for k in range(min(top, f.source.dim) + 1):
        idk = identity(k)
        cols = []
        for y in f.images[k]:
            cols.append({y[1]: 1} if y[0] == idk else {})
        out.append(cols)
    return out


def mapping_cone(f: SMap, top: int) -> ChainComplex:
    """Cone with degree k equal to target_k + source_{k-1} and d(t, s) = (dt + f s, -ds).

    Built through degree ``top + 1`` so that homology through ``top`` is exact.
    The source is needed through ``top`` and the target through ``top + 1``.
    """
    src = normalized_chains(f.source, top)
    tgt = normalized_chains(f.target, top + 1)
    fm = chain_map(f, top)
    n = top + 2
    ranks = [tgt.rank(k) + src.rank(k - 1) for k in range(n)]
    bds: list[SparseColumns] = [[]]
    for k in range(1, n):
        off = tgt.rank(k - 1)
        cols = [dict(col) for col in tgt.boundary(k)]
        fk = fm[k - 1] if k - 1 < len(fm) else [{} for _ in range(src.rank(k - 1))]
        dk = src.boundary(k - 1)
        for j in range(src.rank(k - 1)):
            col = dict(fk[j])
            for r, v in dk[j].items():
                col[off + r] = -v
            cols.append(col)
        bds.append(cols)
    src_ok = src.trusted_through >= top
    tgt_ok = tgt.trusted_through >= top + 1
    trusted = INF if (src.trusted_through == INF and tgt.trusted_through == INF) else top + 1
    if not (src_ok and tgt_ok):
        raise TrustError("mapping cone needs the source through top and the target through top+1")
    return ChainComplex(ranks, bds, trusted)


@dataclass
class ConeReport:
    acyclic: bool
    through: int
    cone_homology: list[HomologyGroup]

    @property
    def first_nonzero(self) -> int | None:
        return next((k for k, h in enumerate(self.cone_homology) if not h.is_zero), None)

    def to_json(self) -> dict:
        return {
            "acyclic": self.acyclic,
            "through": self.through,
            "cone_homology": [h.to_json() for h in self.cone_homology],
            "first_nonzero": self.first_nonzero,
        }


def cone_equivalence(f: SMap, top: int) -> ConeReport:
    """Whether the mapping cone of ``f`` has vanishing homology in degrees 0..top."""
    c = mapping_cone(f, top)
    hs = [homology(c, k) for k in range(top + 1)]
    return ConeReport(all(h.is_zero for h in hs), top, hs)


# ----------------------------------------------------------------------------
# filtered families


@dataclass
class StabilizationReport:
    degree: int
    levels: list[int]
    results: list[HomologyGroup]
    window: int
    stable_from: int | None
    trusted_through: float = INF
    heuristic: bool = True

    @property
    def stable(self) -> bool:
        return self.stable_from is not None

    @property
    def value(self) -> HomologyGroup | None:
        if self.stable_from is None:
            return None
        return self.results[self.levels.index(self.stable_from)]

    def to_json(self) -> dict:
        v = self.value
        return {
            "degree": self.degree,
            "betti": None if v is None else v.betti,
            "torsion": None if v is None else list(v.torsion),
            "trusted_through": None if self.trusted_through == INF else self.trusted_through,
            "heuristic": self.heuristic,
            "stable_from": self.stable_from,
            "window": self.window,
            "levels": [{"level": lv, **h.to_json()} for lv, h in zip(self.levels, self.results)],
        }


def stabilized_homology(
    family: Callable[[int], "SSet | ChainComplex"] | Sequence,
    k: int,
    window: int = 2,
    levels: Iterable[int] | None = None,
    reduced: bool = False,
    tail: bool = False,
) -> StabilizationReport:
    """Compute H_k along a nested family and report the first run of ``window`` equal values.

    ``family`` is either a sequence or a function of the level, returning
    simplicial sets or ready-made chain complexes.  Agreement over a window is
    evidence only; the report says so.  With ``tail`` every level is computed
    and only a constant run reaching the last level counts, so an early
    coincidence cannot pass for stability.
    """
    if window < 1:
        raise ValueError("window must be positive")
    if callable(family):
        lv = list(levels if levels is not None else range(4))
        get = family
    else:
        seq = list(family)
        lv = list(levels if levels is not None else range(len(seq)))
        get = seq.__getitem__
    results: list[HomologyGroup] = []
    trusted = INF
    stable_from = None
    run = 0
    for i, level in enumerate(lv):
        x = get(level)
        if isinstance(x, ChainComplex):
            c = x
        else:
            c = normalized_chains(x, k + 1 if x.cap is None else min(k + 1, x.cap))
        trusted = min(trusted, c.trusted_through)
        h = reduced_homology(c, k) if reduced else homology(c, k)
        results.append(h)
        run = run + 1 if i and results[i - 1] == h else 1
        if run >= window and not tail:
            stable_from = lv[i - window + 1]
            break
    if tail and run >= window:
        stable_from = lv[len(results) - run]
    return StabilizationReport(k, lv[: len(results)], results, window, stable_from, trusted)
