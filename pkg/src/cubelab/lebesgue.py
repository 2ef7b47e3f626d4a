"""Covering machinery on the solid cube: proper, special and essential chains,
the step construction splitting a chain along a cubical set, fusion of
coverings, and witness extraction for the covering theorems."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chains import (
    Chain,
    PlaneLevels,
    add,
    boundary,
    chain,
    full_chain,
    half_levels,
    intersect_plane,
    project,
    zero,
)
from .cubecore import SOLID, Ambient, Cube, all_cubes, faces, mask_of, solid_cube
from .errors import PreconditionError


@dataclass(frozen=True)
class CubicalSet:
    """A union of top-dimensional cells of the solid cube."""

    ambient: Ambient
    ncubes: frozenset

    def __post_init__(self):
        if self.ambient.kind != SOLID:
            raise ValueError("cubical sets live in the solid cube")
        n = self.ambient.n
        for c in self.ncubes:
            if c.ambient != self.ambient or c.dim != n:
                raise ValueError(f"{c} is not a top cell of the ambient")

    def __bool__(self):
        return bool(self.ncubes)

    def contains_cube(self, c: Cube) -> bool:
        """Whether the closed cell c lies inside the union."""
        return any(big.contains_cube(c) for big in self.ncubes)

    def contains_point(self, p) -> bool:
        return any(big.contains_point(p) for big in self.ncubes)

    def meets_face(self, axis: int, side: str) -> bool:
        """Whether the union touches the face pinning one coordinate."""
        l = self.ambient.size
        if side == "low":
            return any(c.root[axis] == 0 for c in self.ncubes)
        return any(c.root[axis] + 1 == l for c in self.ncubes)

    def union(self, other: "CubicalSet") -> "CubicalSet":
        return CubicalSet(self.ambient, self.ncubes | other.ncubes)


def cubical_set(ambient: Ambient, ncubes=()) -> CubicalSet:
    return CubicalSet(ambient, frozenset(ncubes))


def face_cells(ambient: Ambient, axis: int, side: str) -> frozenset:
    """The top cells of one outer face of the solid cube."""
    n, l = ambient.n, ambient.size
    root_axis = 0 if side == "low" else l
    mask = mask_of(a for a in range(n) if a != axis)
    cells = set()
    for rest in itertools.product(range(l), repeat=n - 1):
        root = list(rest)
        root.insert(axis, root_axis)
        cells.add(Cube(ambient, tuple(root), mask))
    return frozenset(cells)


def covers_face(sets, axis: int, side: str) -> bool:
    """Whether the union of the given cubical sets contains a whole outer face."""
    ambient = sets[0].ambient
    for cell in face_cells(ambient, axis, side):
        if not any(s.contains_cube(cell) for s in sets):
            return False
    return True


def support_cells(ch: Chain) -> frozenset:
    """Every face, of every dimension, of every cube of the chain."""
    out = set()
    for c in ch.cubes:
        for m in range(c.dim + 1):
            out |= faces(c, m)
    return frozenset(out)


def cell_in_boundary(c: Cube) -> bool:
    """Whether a cell lies in the boundary of the solid cube."""
    l = c.ambient.size
    return any(
        not c.direction >> i & 1 and (x == 0 or x == l) for i, x in enumerate(c.root)
    )


def is_proper(ch: Chain) -> bool:
    """Whether the support of the boundary equals the support on the cube boundary."""
    if ch.dim == 0:
        bd_cells = frozenset()
    else:
        bd_cells = support_cells(boundary(ch))
    own = support_cells(ch)
    return bd_cells == frozenset(c for c in own if cell_in_boundary(c))


def is_special(ch: Chain) -> bool:
    """Proper, and clear of both outer faces of the first n - m axes."""
    n, m, l = ch.ambient.n, ch.dim, ch.ambient.size
    for c in ch.cubes:
        for i in range(n - m):
            lo, hi = c.interval(i)
            if lo == 0 or hi == l:
                return False
    return is_proper(ch)


def is_essential(ch: Chain, method: str = "projection", levels: PlaneLevels | None = None) -> bool:
    """Whether a special chain carries the full face class.

    The projection method pushes the chain onto the face spanned by the last
    m axes and compares with the sum of all its m-cubes.  The plane method
    counts the points cut out by the plane pinning the last m coordinates at
    non-integer levels.  The two agree on special chains.
    """
    if method not in ("projection", "plane"):
        raise ValueError(f"unknown method {method!r}")
    if not is_special(ch):
        return False
    n, m = ch.ambient.n, ch.dim
    if method == "projection":
        image = project(ch, range(n - m, n))
        return image == full_chain(image.ambient, m)
    if levels is None:
        levels = half_levels(n)
    elif not isinstance(levels, PlaneLevels):
        levels = PlaneLevels(tuple(levels))
    points = intersect_plane(ch, levels, n - m)
    return len(points) % 2 == 1


def lebesgue_step(ch: Chain, e: CubicalSet):
    """Split a chain along a cubical set.

    Returns (ch_e, rest, delta, delta_e): the cubes inside e, the other
    cubes, the common boundary faces of the two parts, and the remaining
    boundary faces of the inside part.
    """
    if ch.dim == 0:
        raise ValueError("cannot split a 0-chain, its parts have no boundary")
    inside = frozenset(c for c in ch.cubes if e.contains_cube(c))
    ch_e = Chain(ch.ambient, ch.dim, inside)
    rest = Chain(ch.ambient, ch.dim, ch.cubes - inside)
    bd_in = boundary(ch_e)
    bd_out = boundary(rest)
    delta = Chain(ch.ambient, ch.dim - 1, bd_in.cubes & bd_out.cubes)
    delta_e = add(bd_in, delta)
    return ch_e, rest, delta, delta_e


def _check_e_conditions(sets) -> None:
    """Covering plus the two face conditions of the leveled covering theorem."""
    ambient = sets[0].ambient
    n = ambient.n
    if len(sets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(sets)}")
    for c in all_cubes(ambient, n):
        if not any(c in s.ncubes for s in sets):
            raise PreconditionError("covering", c.root)
    for i in range(n):
        if not covers_face(sets[: i + 1], i, "low"):
            raise PreconditionError(
                "low face containment", f"sets 0..{i} do not cover the low face of axis {i}"
            )
        if sets[i].meets_face(i, "high"):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
    for i in range(1, n + 1):
        for j in range(min(i, n)):
            if sets[i].meets_face(j, "low"):
                raise PreconditionError(
                    "later low face disjointness",
                    f"set {i} meets the low face of axis {j}",
                )


def e_coverings_witness(sets, check: bool = True, debug: bool = True):
    """A common point of n + 1 cubical sets satisfying the face conditions.

    Runs the recursion that starts with the sum of all top cells and splits
    along one set per level, descending one dimension each time.  In debug
    mode every intermediate chain is verified to be essential.
    """
    sets = list(sets)
    ambient = sets[0].ambient
    n = ambient.n
    if check:
        _check_e_conditions(sets)
    gamma = full_chain(ambient, n)
    for m in range(n):
        _, _, delta, _ = lebesgue_step(gamma, sets[m])
        if debug and not is_essential(delta):
            raise AssertionError(f"level {m + 1} chain lost essentiality")
        gamma = delta
    points = sorted(c.root for c in gamma.cubes)
    if len(points) % 2 == 0:
        raise AssertionError("final point count is even, construction broke")
    witness = points[0]
    for i, s in enumerate(sets):
        if not s.contains_point(witness):
            raise AssertionError(f"witness {witness} escaped set {i}")
    return witness


def fuse(dsets):
    """Group a covering into n + 1 unions satisfying the face conditions.

    Each output set collects, in axis order, the not-yet-used input sets
    meeting the low face of that axis; the last output takes the leftovers.
    Returns the groups and the index assignment.
    """
    dsets = list(dsets)
    ambient = dsets[0].ambient
    n = ambient.n
    for c in all_cubes(ambient, n):
        if not any(c in d.ncubes for d in dsets):
            raise PreconditionError("covering", c.root)
    for j, d in enumerate(dsets):
        for axis in range(n):
            if d.meets_face(axis, "low") and d.meets_face(axis, "high"):
                raise PreconditionError(
                    "opposite faces", f"set {j} meets both faces of axis {axis}"
                )
    used = set()
    groups = []
    assignment = []
    for i in range(n):
        picked = [
            j for j in range(len(dsets)) if j not in used and dsets[j].meets_face(i, "low")
        ]
        used.update(picked)
        cubes = frozenset().union(*(dsets[j].ncubes for j in picked)) if picked else frozenset()
        groups.append(CubicalSet(ambient, cubes))
        assignment.append(picked)
    rest = [j for j in range(len(dsets)) if j not in used]
    cubes = frozenset().union(*(dsets[j].ncubes for j in rest)) if rest else frozenset()
    groups.append(CubicalSet(ambient, cubes))
    assignment.append(rest)
    return groups, assignment


def collecting_sets_witness(dsets):
    """A point shared by n + 1 sets of a covering, with their indices."""
    dsets = list(dsets)
    groups, assignment = fuse(dsets)
    point = e_coverings_witness(groups)
    indices = []
    for member in assignment:
        hit = [j for j in member if dsets[j].contains_point(point)]
        if not hit:
            raise AssertionError(f"no assigned set of a group contains {point}")
        indices.append(hit[0])
    return point, tuple(indices)


def cubes_partitions_witness(dsets, mode: str = "standard"):
    """A common point of n + 1 covering sets under per-axis face conditions.

    In standard mode set i must avoid the high face of axis i while the
    first i + 1 sets cover the low face of axis i.  In early mode set i must
    instead avoid the low faces of all earlier axes (which implies the
    standard conditions for a covering).
    """
    if mode not in ("standard", "early"):
        raise ValueError(f"unknown mode {mode!r}")
    dsets = list(dsets)
    ambient = dsets[0].ambient
    n = ambient.n
    if len(dsets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(dsets)}")
    for c in all_cubes(ambient, n):
        if not any(c in d.ncubes for d in dsets):
            raise PreconditionError("covering", c.root)
    for i in range(n):
        if dsets[i].meets_face(i, "high"):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
    if mode == "early":
        for k in range(1, n + 1):
            for i in range(min(k, n)):
                if dsets[k].meets_face(i, "low"):
                    raise PreconditionError(
                        "early low face disjointness",
                        f"set {k} meets the low face of axis {i}",
                    )
    for i in range(n):
        if not covers_face(dsets[: i + 1], i, "low"):
            raise PreconditionError(
                "low face containment",
                f"sets 0..{i} do not cover the low face of axis {i}",
            )
    groups = []
    seen = set()
    for d in dsets:
        groups.append(CubicalSet(ambient, d.ncubes - frozenset(seen)))
        seen |= d.ncubes
    point = e_coverings_witness(groups)
    for i, d in enumerate(dsets):
        if not d.contains_point(point):
            raise AssertionError(f"witness {point} escaped set {i}")
    return point
