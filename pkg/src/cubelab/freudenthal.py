"""Canonical triangulations of integer windows by permutation chains.

Every unit cube splits into vertex chains indexed by permutations of its
axes; glued over a window the chains reproduce the tiling nerve, and the
facet double count over them gives an independent simplicial oracle for
the strong labeling lemma.
"""

import itertools
from dataclasses import dataclass

from .products import ReducedLabeling, _check_kuhn_conditions
from .tilings import SimplicialComplex, pivot_window_sequences, window_points

__all__ = [
    "NonbranchingReport",
    "Permutation",
    "SimplicialComplex",
    "canonical_complex",
    "identity_permutation",
    "in_scaled_region",
    "nonbranching_report",
    "omega_restrict",
    "permutation",
    "shuffles",
    "simplex_of",
    "sperner_count",
]


@dataclass(frozen=True)
class Permutation:
    """A ranking of the axes 0..n-1, stored as the image tuple.

    Rank 0 marks the dominant axis: on the region the permutation carves
    out of a cube, coordinates decrease as the rank grows.
    """

    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(
                f"not a bijection of 0..{len(self.images) - 1}: {self.images}"
            )

    @property
    def n(self) -> int:
        return len(self.images)

    def rank(self, axis: int) -> int:
        return self.images[axis]

    def axis_order(self) -> tuple:
        """Axes sorted from dominant to least; the inverse image tuple."""
        return tuple(sorted(range(self.n), key=lambda a: self.images[a]))

    def inverse(self) -> "Permutation":
        return Permutation(self.axis_order())


def permutation(images) -> Permutation:
    return Permutation(tuple(int(x) for x in images))


def identity_permutation(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def simplex_of(omega: Permutation, a, size: int | None = None) -> tuple:
    """The increasing vertex chain of the unit simplex rooted at a.

    Steps follow the inverse permutation, so the dominant axis rises to
    one first.  With a size given the root must sit in {0..size-1}^n.
    """
    a = tuple(int(x) for x in a)
    if len(a) != omega.n:
        raise ValueError(f"root length {len(a)} does not match {omega.n} axes")
    if size is not None and any(x < 0 or x >= size for x in a):
        raise ValueError(f"root {a} out of range for window size {size}")
    out = [a]
    p = list(a)
    for axis in omega.axis_order():
        p[axis] += 1
        out.append(tuple(p))
    return tuple(out)


def omega_restrict(omega: Permutation, a) -> Permutation:
    """The permutation ranking axes by root height first, original rank
    second; its scaled region absorbs the whole translated simplex."""
    a = tuple(int(x) for x in a)
    if len(a) != omega.n:
        raise ValueError(f"root length {len(a)} does not match {omega.n} axes")
    order = sorted(range(omega.n), key=lambda i: (-a[i], omega.images[i]))
    images = [0] * omega.n
    for rank, axis in enumerate(order):
        images[axis] = rank
    return Permutation(tuple(images))


def in_scaled_region(omega: Permutation, size: int, point) -> bool:
    """Whether a point lies in the permutation's region scaled to size:
    coordinates bounded by [0, size] and ordered along the ranks."""
    point = tuple(point)
    if len(point) != omega.n:
        raise ValueError(f"point length {len(point)} does not match {omega.n} axes")
    if any(x < 0 or x > size for x in point):
        return False
    order = omega.axis_order()
    return all(point[order[t]] >= point[order[t + 1]] for t in range(omega.n - 1))


def shuffles(p: int, q: int) -> list:
    """All permutations of p+q axes increasing on the first q positions
    and on the last p, one for every q-subset of ranks."""
    if p < 0 or q < 0:
        raise ValueError("shuffle parts must be nonnegative")
    n = p + q
    out = []
    for chosen in itertools.combinations(range(n), q):
        rest = tuple(r for r in range(n) if r not in set(chosen))
        out.append(Permutation(chosen + rest))
    return out


def canonical_complex(window) -> SimplicialComplex:
    """The union of the chain triangulations of every cube in the window.

    The simplices come out as exactly the pivot-subsequence term sets,
    so the result coincides with the tiling nerve.
    """
    window = [(int(lo), int(hi)) for lo, hi in window]
    pts = frozenset(window_points(window))
    n = len(window)
    simplices = set(frozenset([p]) for p in pts)
    for base in pts:
        free = [i for i in range(n) if base[i] + 1 <= window[i][1]]
        for r in range(1, len(free) + 1):
            for sub in itertools.combinations(free, r):
                for order in itertools.permutations(sub):
                    verts = [base]
                    p = list(base)
                    for axis in order:
                        p[axis] += 1
                        verts.append(tuple(p))
                    for take in range(2, len(verts) + 1):
                        for face in itertools.combinations(verts, take):
                            simplices.add(frozenset(face))
    return SimplicialComplex(pts, frozenset(simplices))


@dataclass(frozen=True)
class NonbranchingReport:
    """Facet incidence census for the top simplices over a window."""

    ok: bool
    interior: int
    boundary: int
    counterexample: frozenset | None


def nonbranching_report(window) -> NonbranchingReport:
    """Counts the top simplices around every facet-sized simplex: interior
    facets must lie in exactly two, boundary facets in exactly one."""
    window = [(int(lo), int(hi)) for lo, hi in window]
    if not window:
        raise ValueError("window needs at least one axis")
    if any(hi <= lo for lo, hi in window):
        raise ValueError("window sides must be positive")
    n = len(window)
    comp = canonical_complex(window)
    incidence = {s: 0 for s in comp.simplices if len(s) == n}
    for top in comp.simplices:
        if len(top) != n + 1:
            continue
        for v in top:
            incidence[top - {v}] += 1
    interior = boundary = 0
    bad = None
    for tau in sorted(incidence, key=lambda s: tuple(sorted(s))):
        on_boundary = any(
            all(v[i] == window[i][0] for v in tau)
            or all(v[i] == window[i][1] for v in tau)
            for i in range(n)
        )
        if incidence[tau] != (1 if on_boundary else 2):
            bad = bad if bad is not None else tau
        elif on_boundary:
            boundary += 1
        else:
            interior += 1
    return NonbranchingReport(bad is None, interior, boundary, bad)


def sperner_count(r: ReducedLabeling) -> int:
    """The number of top simplices carrying every label exactly once.

    The value is rechecked level by level with the facet double count: a
    fully labeled simplex owns one door facet, a near miss owns two, and
    the boundary doors all sit on the high face of the first axis, which
    hosts the next level down.  The descent ends at a single door, which
    forces the count odd.
    """
    _check_kuhn_conditions(r.ambient, list(r.sets))
    k = r.ambient.size
    sets = r.sets
    m = r.ambient.n
    result = None
    expected = None
    while m >= 1:

        def label(v, sets=sets, m=m):
            for i, s in enumerate(sets):
                if v in s:
                    return i
            return m

        full = frozenset(range(m + 1))
        door = frozenset(range(1, m + 1))
        e = near = 0
        hits = {}
        for seq in pivot_window_sequences(m, k):
            labs = [label(v) for v in seq]
            labset = frozenset(labs)
            if labset == full:
                e += 1
            elif labset == door:
                near += 1
            if door <= labset:
                for drop in range(m + 1):
                    if frozenset(labs[:drop] + labs[drop + 1 :]) == door:
                        tau = frozenset(seq[:drop] + seq[drop + 1 :])
                        hits[tau] = hits.get(tau, 0) + 1
        if sum(hits.values()) != e + 2 * near:
            raise AssertionError("facet double count failed")
        h = 0
        for tau, deg in hits.items():
            on_boundary = any(
                all(v[i] == 0 for v in tau) or all(v[i] == k for v in tau)
                for i in range(m)
            )
            if on_boundary:
                if any(v[0] != k for v in tau):
                    raise AssertionError("boundary door off the first high face")
                if deg != 1:
                    raise AssertionError("boundary door in more than one simplex")
                h += 1
            elif deg != 2:
                raise AssertionError("interior door not shared by two simplices")
        if expected is not None and e != expected:
            raise AssertionError("full count does not match the doors above")
        if result is None:
            result = e
        expected = h
        sets = tuple(frozenset(v[1:] for v in s if v[0] == k) for s in sets[1:])
        m -= 1
    if expected != 1:
        raise AssertionError(f"descent ended at {expected} doors instead of one")
    if result % 2 == 0:
        raise AssertionError(f"even count {result} of fully labeled simplices")
    return result
