"""Box tilings of a rational n-interval, the segment structure of n-fold
intersections, parity counting, and a path follower for witness points.

A tiling is a partition into n-intervals where no point lies in more than
n + 1 tiles and every k-wise intersection is empty or an (n + 1 - k)-interval.
Unions of tiles then behave like the cubical sets of the solid cube: n + 1
admissible tiled sets meet in an odd number of points, each found by walking
a segment path from the boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .tilings import Box, TilingParams, boxes_intersection, tile


@dataclass(frozen=True)
class BoxTiling:
    """A partition of a rational interval into same-shape subintervals."""

    domain: Box
    tiles: tuple

    def __post_init__(self):
        dg = self.domain.degenerate_axes()
        for t in self.tiles:
            if t.n != self.domain.n:
                raise ValueError("tile axis count differs from the domain")
            if t.degenerate_axes() != dg:
                raise ValueError("tile is not a full-dimensional subinterval")
            if boxes_intersection([t, self.domain]) != t:
                raise ValueError("tile leaves the domain")

    @property
    def dim(self) -> int:
        return self.domain.dim


def trivial_tiling(domain: Box) -> BoxTiling:
    return BoxTiling(domain, (domain,))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    clause: str | None = None
    witness: tuple | None = None


def _intersecting_subsets(tiles, size: int):
    """All index subsets of the given size with non-empty intersection."""

    def extend(prefix, current, start):
        if len(prefix) == size:
            yield prefix, current
            return
        for j in range(start, len(tiles)):
            nxt = boxes_intersection([current, tiles[j]]) if current else tiles[j]
            if nxt is not None:
                yield from extend(prefix + (j,), nxt, j + 1)

    yield from extend((), None, 0)


def _relative_volume(b: Box, axes) -> Fraction:
    """Volume over the given axes only (a face is flat in the full space)."""
    v = Fraction(1)
    for a in axes:
        lo, hi = b.intervals[a]
        v *= hi - lo
    return v


def validate_tiling(t: BoxTiling) -> ValidationReport:
    """Check partition, the n + 1 point bound, and the interval shape of all
    k-wise intersections; subsets above size n + 2 are redundant."""
    n = t.dim
    axes = [a for a in range(t.domain.n) if a not in t.domain.degenerate_axes()]
    total = sum(_relative_volume(tile, axes) for tile in t.tiles)
    if total != _relative_volume(t.domain, axes):
        return ValidationReport(False, "covering", (str(total),))
    for i, j in itertools.combinations(range(len(t.tiles)), 2):
        both = boxes_intersection([t.tiles[i], t.tiles[j]])
        if both is not None and _relative_volume(both, axes) > 0:
            return ValidationReport(False, "interior overlap", (i, j))
    for subset, _ in _intersecting_subsets(t.tiles, n + 2):
        return ValidationReport(False, "point in too many tiles", subset)
    for k in range(2, n + 2):
        for subset, common in _intersecting_subsets(t.tiles, k):
            if common.dim != n + 1 - k:
                return ValidationReport(False, "intersection shape", subset)
    return ValidationReport(True)


def refine(t: BoxTiling, tile_index: int, axis: int, level, check: bool = True) -> BoxTiling:
    """Split one tile by the hyperplane at the given level of the axis.

    The level must be strictly inside the tile and must not carry a face of
    any existing tile; the result is then a tiling again, which check=True
    re-verifies with the full validator.
    """
    level = Fraction(level)
    target = t.tiles[tile_index]
    lo, hi = target.intervals[axis]
    if not lo < level < hi:
        raise ValueError(f"level {level} is not inside ({lo}, {hi})")
    for tile in t.tiles:
        if level in tile.intervals[axis]:
            raise ValueError(f"level {level} carries a face of an existing tile")
    first = list(target.intervals)
    second = list(target.intervals)
    first[axis] = (lo, level)
    second[axis] = (level, hi)
    tiles = list(t.tiles)
    tiles[tile_index : tile_index + 1] = [Box(tuple(first)), Box(tuple(second))]
    out = BoxTiling(t.domain, tuple(tiles))
    if check:
        report = validate_tiling(out)
        if not report.ok:
            raise AssertionError(f"refinement broke the tiling: {report.clause}")
    return out


def clipped_tiling(window: Box, params: TilingParams) -> BoxTiling:
    """The full-dimensional traces of the shifted lattice tiles on a window.

    Enumerates the lattice vectors whose tiles overlap the window in positive
    volume, last axis first since earlier axes are sheared by later entries.
    """
    n = params.n
    if window.n != n:
        raise ValueError("window axis count differs from the parameters")
    if window.degenerate_axes():
        raise ValueError("window must be full-dimensional")
    traces = []
    a = [0] * n

    def descend(i: int) -> None:
        if i < 0:
            trace = boxes_intersection([tile(tuple(a), params), window])
            if trace is not None and not trace.degenerate_axes():
                traces.append(trace)
            return
        shift = sum((a[j] * params.eps[j - 1] for j in range(i + 1, n)), Fraction(0))
        wlo, whi = window.intervals[i]
        for v in range(math.floor(wlo - 1 - shift) + 1, math.ceil(whi - shift)):
            a[i] = v
            descend(i - 1)

    descend(n - 1)
    return BoxTiling(window, tuple(sorted(traces, key=lambda b: b.intervals)))


def face_box(domain: Box, axis: int, side: str) -> Box:
    lo, hi = domain.intervals[axis]
    pin = lo if side == "low" else hi
    intervals = list(domain.intervals)
    intervals[axis] = (pin, pin)
    return Box(tuple(intervals))


def face_tiling(t: BoxTiling, axis: int, side: str) -> BoxTiling:
    """The traces of the tiles on one outer face form a tiling of the face."""
    face = face_box(t.domain, axis, side)
    traces = []
    for tile in t.tiles:
        trace = boxes_intersection([tile, face])
        if trace is not None and trace not in traces:
            traces.append(trace)
    return BoxTiling(face, tuple(traces))


@dataclass(frozen=True)
class TiledSet:
    """A union of tiles of a fixed tiling, tracked by tile indices."""

    tiling: BoxTiling
    indices: frozenset

    def __post_init__(self):
        for i in self.indices:
            if not 0 <= i < len(self.tiling.tiles):
                raise ValueError(f"tile index {i} out of range")

    def contains_point(self, p) -> bool:
        return any(self.tiling.tiles[i].contains(p) for i in self.indices)

    def meets_face(self, axis: int, side: str) -> bool:
        dlo, dhi = self.tiling.domain.intervals[axis]
        for i in self.indices:
            lo, hi = self.tiling.tiles[i].intervals[axis]
            if (side == "low" and lo == dlo) or (side == "high" and hi == dhi):
                return True
        return False


def tiled_set(tiling: BoxTiling, indices) -> TiledSet:
    return TiledSet(tiling, frozenset(indices))


@dataclass(frozen=True)
class Endpoint:
    point: tuple
    degree: int
    kind: str  # "boundary", "full", or "interior"


def _on_boundary(domain: Box, p) -> bool:
    return any(
        x == lo or x == hi
        for x, (lo, hi) in zip(p, domain.intervals)
        if lo < hi
    )


def _check_structure_preconditions(sets) -> None:
    tiling = sets[0].tiling
    n = tiling.dim
    if len(sets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(sets)}")
    if any(s.tiling != tiling for s in sets):
        raise PreconditionError("shared tiling", "sets use different tilings")
    for a, b in itertools.combinations(range(len(sets)), 2):
        if sets[a].indices & sets[b].indices:
            raise PreconditionError(
                "essential disjointness", f"sets {a} and {b} share a tile"
            )
    used = frozenset().union(*(s.indices for s in sets))
    if used != frozenset(range(len(tiling.tiles))):
        raise PreconditionError("covering", "some tile belongs to no set")


def intersection_structure(sets):
    """Segments of the intersection of the first n sets, with endpoints
    classified as boundary, full (in all n + 1 sets), or interior.

    Every endpoint bounds one segment when boundary or full, two otherwise.
    """
    _check_structure_preconditions(sets)
    tiling = sets[0].tiling
    n = tiling.dim
    segments = []
    for combo in itertools.product(*(sorted(s.indices) for s in sets[:n])):
        common = boxes_intersection([tiling.tiles[i] for i in combo])
        if common is None:
            continue
        if common.dim != 1:
            raise AssertionError(f"n-wise intersection has dimension {common.dim}")
        if common not in segments:
            segments.append(common)
    degree = {}
    for seg in segments:
        axis = [i for i, (lo, hi) in enumerate(seg.intervals) if lo < hi][0]
        for side in (0, 1):
            p = tuple(
                iv[side] if i == axis else iv[0] for i, iv in enumerate(seg.intervals)
            )
            degree[p] = degree.get(p, 0) + 1
    endpoints = {}
    for p, deg in degree.items():
        if _on_boundary(tiling.domain, p):
            kind = "boundary"
        elif all(s.contains_point(p) for s in sets):
            kind = "full"
        else:
            kind = "interior"
        expected = 2 if kind == "interior" else 1
        if deg != expected:
            raise AssertionError(f"{kind} endpoint {p} bounds {deg} segments")
        endpoints[p] = Endpoint(p, deg, kind)
    return tuple(segments), endpoints


def _check_face_conditions(sets) -> None:
    """Set i must miss the high face of axis i and the low face of axis i-1."""
    if sets[0].tiling.domain.degenerate_axes():
        raise ValueError("face conditions apply to full-dimensional domains")
    n = sets[0].tiling.dim
    for i, s in enumerate(sets):
        if i < n and s.meets_face(i, "high"):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
        if i >= 1 and s.meets_face(i - 1, "low"):
            raise PreconditionError(
                "previous low face disjointness",
                f"set {i} meets the low face of axis {i - 1}",
            )


def parity_count(sets) -> int:
    """The number of points common to all n + 1 sets; checked odd."""
    _check_face_conditions(sets)
    _, endpoints = intersection_structure(sets)
    count = sum(1 for e in endpoints.values() if e.kind == "full")
    if count % 2 == 0:
        raise AssertionError("even number of full intersection points")
    return count


def segment_endpoints(seg: Box):
    axis = [i for i, (lo, hi) in enumerate(seg.intervals) if lo < hi][0]
    a = tuple(iv[0] for iv in seg.intervals)
    b = tuple(iv[1] if i == axis else iv[0] for i, iv in enumerate(seg.intervals))
    return a, b


def _walk(segments, endpoints, start):
    at = {}
    for seg in segments:
        for p in segment_endpoints(seg):
            at.setdefault(p, []).append(seg)
    current = at[start][0]
    prev = start
    while True:
        a, b = segment_endpoints(current)
        nxt = b if a == prev else a
        kind = endpoints[nxt].kind
        if kind == "full":
            return nxt
        if kind == "boundary":
            return None
        first, second = at[nxt]
        current = second if first == current else first
        prev = nxt


def follow_path(sets, start) -> tuple | None:
    """Walk segments from a boundary endpoint until a full point appears.

    The start must lie on the distinguished face, the low face of the last
    axis; under the face conditions of parity_count every boundary endpoint
    does.  Returns the full point, or None when the walk exits through the
    boundary again (which the parity theorem allows for all but an odd
    number of starts).
    """
    start = tuple(Fraction(x) for x in start)
    segments, endpoints = intersection_structure(sets)
    info = endpoints.get(start)
    if info is None or info.degree != 1 or info.kind != "boundary":
        raise PreconditionError("start", f"{start} is not a boundary endpoint")
    domain = sets[0].tiling.domain
    last = max(i for i in range(domain.n) if i not in domain.degenerate_axes())
    if start[last] != domain.intervals[last][0]:
        raise PreconditionError(
            "start", f"{start} is off the low face of axis {last}"
        )
    return _walk(segments, endpoints, start)


def path_witness(sets):
    """The first boundary start, in lexicographic order, whose walk reaches a
    full point; returns (start, point)."""
    segments, endpoints = intersection_structure(sets)
    starts = sorted(p for p, e in endpoints.items() if e.kind == "boundary")
    for start in starts:
        point = _walk(segments, endpoints, start)
        if point is not None:
            return start, point
    raise AssertionError("no boundary walk reached a full point")


def hurewicz_lemma_witness(dsets) -> tuple:
    """A point common to n + 1 covering tiled sets (overlaps allowed).

    Makes the sets essentially disjoint by keeping, in each set, only the
    tiles absent from all earlier ones, then follows a boundary path.
    """
    tiling = dsets[0].tiling
    n = tiling.dim
    if len(dsets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(dsets)}")
    used = frozenset().union(*(d.indices for d in dsets))
    if used != frozenset(range(len(tiling.tiles))):
        raise PreconditionError("covering", "some tile belongs to no set")
    _check_face_conditions(dsets)
    seen = frozenset()
    parts = []
    for d in dsets:
        parts.append(TiledSet(tiling, d.indices - seen))
        seen |= d.indices
    _, point = path_witness(parts)
    for i, d in enumerate(dsets):
        if not d.contains_point(point):
            raise AssertionError(f"witness {point} escaped set {i}")
    return point


def collecting_tiled_sets_witness(dsets):
    """A common point of n + 1 sets of a covering by tiled sets, none of
    which meets two opposite faces; returns (point, indices)."""
    tiling = dsets[0].tiling
    n = tiling.dim
    axes = [i for i in range(tiling.domain.n) if i not in tiling.domain.degenerate_axes()]
    used_all = frozenset().union(*(d.indices for d in dsets))
    if used_all != frozenset(range(len(tiling.tiles))):
        raise PreconditionError("covering", "some tile belongs to no set")
    for j, d in enumerate(dsets):
        for axis in axes:
            if d.meets_face(axis, "low") and d.meets_face(axis, "high"):
                raise PreconditionError(
                    "opposite faces", f"set {j} meets both faces of axis {axis}"
                )
    used = set()
    groups = []
    assignment = []
    for axis in axes:
        picked = [
            j
            for j in range(len(dsets))
            if j not in used and dsets[j].meets_face(axis, "low")
        ]
        used.update(picked)
        idx = frozenset().union(*(dsets[j].indices for j in picked)) if picked else frozenset()
        groups.append(TiledSet(tiling, idx))
        assignment.append(picked)
    rest = [j for j in range(len(dsets)) if j not in used]
    idx = frozenset().union(*(dsets[j].indices for j in rest)) if rest else frozenset()
    groups.append(TiledSet(tiling, idx))
    assignment.append(rest)
    point = hurewicz_lemma_witness(groups)
    indices = []
    for member in assignment:
        hit = [j for j in member if dsets[j].contains_point(point)]
        if not hit:
            raise AssertionError(f"no assigned set of a group contains {point}")
        indices.append(hit[0])
    return point, tuple(indices)
