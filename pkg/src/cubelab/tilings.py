"""Shifted unit-cube tilings of the integer lattice with exact rational
parameters, their intersection combinatorics, and nerve complexes.

The tiling translates the unit cube at each integer vector a by mixing the
later coordinates into the earlier ones: u_i = a_i + sum_{j > i} a_j e_{j-1}
with small negative generic shifts e_1..e_{n-1}.  All geometry is exact
rational arithmetic, so degeneracy of intersection factors is a sharp test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cubecore import is_pivot_subsequence_set
from .errors import PreconditionError


def is_generic(eps) -> bool:
    """Whether no shift is an integer combination of 1 and the earlier shifts.

    Over the common denominator D the integer combinations of 1, e_1..e_{i-1}
    have numerators spanning gcd(D, E_1..E_{i-1}) * Z, so membership is a
    single exact divisibility test.
    """
    eps = [Fraction(e) for e in eps]
    d = math.lcm(*(e.denominator for e in eps)) if eps else 1
    nums = [int(e * d) for e in eps]
    g = d
    for e in nums:
        if e % g == 0:
            return False
        g = math.gcd(g, e)
    return True


@dataclass(frozen=True)
class TilingParams:
    """The n - 1 generic negative shifts of a tiling of Z^n."""

    eps: tuple

    def __post_init__(self):
        for e in self.eps:
            if not isinstance(e, Fraction):
                raise ValueError("shifts must be exact rationals")
            if not -1 < e < 0:
                raise ValueError(f"shift {e} outside (-1, 0)")
        if sum(-e for e in self.eps) >= 1:
            raise ValueError("shift magnitudes must sum below 1")
        if not is_generic(self.eps):
            raise ValueError("shifts are not generic")

    @property
    def n(self) -> int:
        return len(self.eps) + 1


def tiling_params(eps) -> TilingParams:
    return TilingParams(tuple(Fraction(e) for e in eps))


def default_params(n: int) -> TilingParams:
    """The shifts e_i = -2^-(i+1); generic since, over the denominator
    2^(i+1), the numerator is odd times the gcd of the earlier ones."""
    if n < 1:
        raise ValueError("dimension must be positive")
    return tiling_params([Fraction(-1, 2 ** (i + 1)) for i in range(1, n)])


@dataclass(frozen=True)
class Box:
    """A product of closed rational intervals; degenerate factors allowed."""

    intervals: tuple

    def __post_init__(self):
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] is empty")

    @property
    def n(self) -> int:
        return len(self.intervals)

    @property
    def dim(self) -> int:
        return sum(1 for lo, hi in self.intervals if lo < hi)

    def contains(self, point) -> bool:
        return all(lo <= x <= hi for (lo, hi), x in zip(self.intervals, point))

    def volume(self) -> Fraction:
        v = Fraction(1)
        for lo, hi in self.intervals:
            v *= hi - lo
        return v

    def degenerate_axes(self) -> tuple:
        return tuple(i for i, (lo, hi) in enumerate(self.intervals) if lo == hi)


def box(pairs) -> Box:
    return Box(tuple((Fraction(lo), Fraction(hi)) for lo, hi in pairs))


def boxes_intersection(boxes) -> Box | None:
    """The common rational box, or None when some axis comes out empty."""
    boxes = list(boxes)
    out = []
    for i in range(boxes[0].n):
        lo = max(b.intervals[i][0] for b in boxes)
        hi = min(b.intervals[i][1] for b in boxes)
        if lo > hi:
            return None
        out.append((lo, hi))
    return Box(tuple(out))


def tile(a, params: TilingParams) -> Box:
    """The translated unit cube at integer vector a."""
    a = tuple(a)
    n = params.n
    if len(a) != n:
        raise ValueError(f"index vector has length {len(a)}, expected {n}")
    us = []
    for i in range(n):
        u = Fraction(a[i])
        for j in range(i + 1, n):
            u += a[j] * params.eps[j - 1]
        us.append(u)
    return Box(tuple((u, u + 1) for u in us))


def tiles_intersection(avecs, params: TilingParams) -> Box | None:
    """Exact intersection of the tiles at the given integer vectors."""
    avecs = set(map(tuple, avecs))
    return boxes_intersection([tile(a, params) for a in avecs])


@dataclass(frozen=True)
class PivotReport:
    geometric: bool
    combinatorial: bool

    @property
    def agree(self) -> bool:
        return self.geometric == self.combinatorial


def intersects_iff_pivot(avecs, params: TilingParams) -> PivotReport:
    """Compare tile intersection with the pivot-subsequence predicate."""
    avecs = set(map(tuple, avecs))
    geometric = tiles_intersection(avecs, params) is not None
    return PivotReport(geometric, is_pivot_subsequence_set(avecs))


@dataclass(frozen=True)
class SimplicialComplex:
    """An abstract simplicial complex on integer-vector vertices."""

    vertices: frozenset
    simplices: frozenset

    def __contains__(self, simplex) -> bool:
        return frozenset(simplex) in self.simplices

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def f_vector(self) -> tuple:
        counts = [0] * (self.dim + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    def maximal_simplices(self) -> frozenset:
        return frozenset(
            s for s in self.simplices if not any(s < t for t in self.simplices)
        )


def window_points(window) -> list:
    """All integer points of a product of inclusive integer ranges."""
    return [
        p for p in itertools.product(*(range(lo, hi + 1) for lo, hi in window))
    ]


def nerve(window, params: TilingParams | None = None, check: bool = False) -> SimplicialComplex:
    """The nerve of the tiling over a window: simplices are exactly the
    pivot-subsequence term sets.  Independent of the generic shifts; with
    check=True this is re-verified against exact box intersections."""
    pts = set(window_points(window))
    simplices = set()
    for base in pts:
        cell = [p for p in itertools.product(*((b, b + 1) for b in base)) if p in pts]
        for r in range(1, len(cell) + 1):
            for sub in itertools.combinations(cell, r):
                if is_pivot_subsequence_set(sub):
                    simplices.add(frozenset(sub))
    out = SimplicialComplex(frozenset(pts), frozenset(simplices))
    if check:
        geo = geometric_nerve(window, params or default_params(len(window)))
        if geo != out:
            raise AssertionError("combinatorial nerve disagrees with geometry")
    return out


def geometric_nerve(window, params: TilingParams) -> SimplicialComplex:
    """The nerve computed from actual tile intersections (small windows)."""
    pts = window_points(window)
    n = len(window)
    simplices = set()
    for r in range(1, n + 2):
        for sub in itertools.combinations(pts, r):
            if r == 1 or tiles_intersection(sub, params) is not None:
                simplices.add(frozenset(sub))
    return SimplicialComplex(frozenset(pts), frozenset(simplices))


def _window_grid(point_sets):
    """Recover the discrete cube K = {0..k}^n from the union of the sets."""
    union = set().union(*point_sets)
    if not union:
        raise PreconditionError("covering", "no points given")
    n = len(next(iter(union)))
    k = max(max(p) for p in union)
    grid = set(itertools.product(range(k + 1), repeat=n))
    if union != grid:
        raise PreconditionError("covering", "union is not a full discrete cube")
    return n, k


def _check_window_faces(point_sets, n: int, k: int) -> None:
    """Set i must miss the high face of axis i and the low face of axis i-1."""
    if len(point_sets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(point_sets)}")
    for i, s in enumerate(point_sets):
        if i < n and any(p[i] == k for p in s):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
        if i >= 1 and any(p[i - 1] == 0 for p in s):
            raise PreconditionError(
                "previous low face disjointness",
                f"set {i} meets the low face of axis {i - 1}",
            )


def pivot_window_sequences(n: int, k: int):
    """All pivot sequences inside {0..k}^n, as (n+1)-tuples of points."""
    for base in itertools.product(range(k), repeat=n):
        for order in itertools.permutations(range(n)):
            seq = [base]
            p = list(base)
            for a in order:
                p[a] += 1
                seq.append(tuple(p))
            yield tuple(seq)


def wh_tilings_count(parts) -> int:
    """The number of pivot sequences meeting every part of an admissible
    partition of the window; the count is checked odd."""
    parts = [frozenset(map(tuple, s)) for s in parts]
    n, k = _window_grid(parts)
    total = sum(len(s) for s in parts)
    if total != (k + 1) ** n:
        raise PreconditionError("disjointness", "parts overlap")
    _check_window_faces(parts, n, k)
    owner = {}
    for i, s in enumerate(parts):
        for p in s:
            owner[p] = i
    count = 0
    for seq in pivot_window_sequences(n, k):
        if sorted(owner[p] for p in seq) == list(range(n + 1)):
            count += 1
    if count % 2 == 0:
        raise AssertionError("even count of spanning pivot sequences")
    return count


def strong_kuhn_nerve_witness(dsets) -> tuple:
    """A pivot sequence with a term in every covering set.

    The sets may overlap; the first sequence in lexicographic order of
    (base point, axis order) is returned.
    """
    dsets = [frozenset(map(tuple, s)) for s in dsets]
    n, k = _window_grid(dsets)
    _check_window_faces(dsets, n, k)
    for seq in pivot_window_sequences(n, k):
        if all(any(p in d for p in seq) for d in dsets):
            return seq
    raise AssertionError("no pivot sequence meets every set")
