"""Ambient grids, combinatorial cubes, faces, roots/peaks, and pivot sequences.

A cube is stored as a root point plus a bitmask of extended axes.  On an
extended axis the cube spans one grid step starting at the root coordinate;
on the other axes it is frozen at the root coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Point = tuple

SOLID = "solid"          # grid [0, l]^n, cells are geometric unit cubes
DISCRETE = "discrete"    # grid {0..k}^n
SYMMETRIC = "symmetric"  # grid {-k..k}^(n+1)
SPHERE = "sphere"        # boundary of the symmetric grid: max |coord| = k
BIGSPHERE = "bigsphere"  # boundary of [-(l+1/2), l+1/2]^(n+1); coordinates
                         # are stored doubled, so vertices are odd integers
                         # in [-(2l+1), 2l+1]

_KINDS = (SOLID, DISCRETE, SYMMETRIC, SPHERE, BIGSPHERE)
_CENTRAL = (SYMMETRIC, SPHERE, BIGSPHERE)

MAX_DIM = 16


@dataclass(frozen=True)
class Ambient:
    """A finite integer grid: kind, dimension parameter n, and size.

    size is l for solid/bigsphere ambients and k for the others.  For
    symmetric, sphere and bigsphere kinds the points have n + 1 coordinates.
    """

    kind: str
    n: int
    size: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        # 0-dim solid cubes back plane slices, 0-dim big spheres equatorial ones
        least = 0 if self.kind in (SOLID, BIGSPHERE) else 1
        if not least <= self.n <= MAX_DIM:
            raise ValueError(f"dimension {self.n} out of range {least}..{MAX_DIM}")
        if self.size < 1:
            raise ValueError(f"size {self.size} must be >= 1")

    @property
    def coord_count(self) -> int:
        return self.n if self.kind in (SOLID, DISCRETE) else self.n + 1

    @property
    def step(self) -> int:
        return 2 if self.kind == BIGSPHERE else 1

    @property
    def lo(self) -> int:
        if self.kind in (SOLID, DISCRETE):
            return 0
        if self.kind == BIGSPHERE:
            return -(2 * self.size + 1)
        return -self.size

    @property
    def hi(self) -> int:
        if self.kind == SOLID:
            return self.size
        if self.kind == DISCRETE:
            return self.size
        if self.kind == BIGSPHERE:
            return 2 * self.size + 1
        return self.size

    @property
    def default_norm(self) -> str:
        return "l1" if self.kind in (SYMMETRIC, SPHERE) else "lex"

    def is_point(self, p: Point) -> bool:
        if len(p) != self.coord_count:
            return False
        if not all(self.lo <= c <= self.hi for c in p):
            return False
        if self.kind == BIGSPHERE:
            if not all(c % 2 != 0 for c in p):
                return False
            return max(abs(c) for c in p) == self.hi
        if self.kind == SPHERE:
            return max(abs(c) for c in p) == self.size
        return True


def solid_cube(n: int, l: int) -> Ambient:
    """The solid cube [0, l]^n with its grid of unit cells."""
    return Ambient(SOLID, n, l)


def discrete_cube(n: int, k: int) -> Ambient:
    """The discrete cube {0..k}^n."""
    return Ambient(DISCRETE, n, k)


def symmetric_cube(n: int, k: int) -> Ambient:
    """The symmetric cube {-k..k}^(n+1)."""
    return Ambient(SYMMETRIC, n, k)


def sphere_grid(n: int, k: int) -> Ambient:
    """The boundary sphere of the symmetric cube {-k..k}^(n+1)."""
    return Ambient(SPHERE, n, k)


def big_sphere(n: int, l: int) -> Ambient:
    """The boundary of [-(l+1/2), l+1/2]^(n+1), with doubled coordinates."""
    return Ambient(BIGSPHERE, n, l)


def axes_of(mask: int) -> tuple:
    """Axis indices set in a direction bitmask, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(axes) -> int:
    m = 0
    for a in axes:
        m |= 1 << a
    return m


@dataclass(frozen=True)
class Cube:
    """A combinatorial cube: root point plus bitmask of extended axes."""

    ambient: Ambient
    root: tuple
    direction: int

    def __post_init__(self):
        amb = self.ambient
        cc = amb.coord_count
        if len(self.root) != cc:
            raise ValueError(f"root {self.root} has wrong length for {amb}")
        if self.direction < 0 or self.direction >> cc:
            raise ValueError(f"direction {self.direction:b} exceeds axis count {cc}")
        step = amb.step
        for i, c in enumerate(self.root):
            top = c + step if self.direction >> i & 1 else c
            if not (amb.lo <= c and top <= amb.hi):
                raise ValueError(f"cube root {self.root} axis {i} leaves the grid")
            if amb.kind == BIGSPHERE and c % 2 == 0:
                raise ValueError(f"bigsphere root {self.root} must have odd coordinates")
        if amb.kind in (SPHERE, BIGSPHERE):
            if not any(
                self.direction >> i & 1 == 0 and abs(c) == amb.hi
                for i, c in enumerate(self.root)
            ):
                raise ValueError(
                    f"cube root={self.root} direction={axes_of(self.direction)} "
                    "does not touch the boundary sphere"
                )

    @property
    def dim(self) -> int:
        return bin(self.direction).count("1")

    @property
    def axes(self) -> tuple:
        return axes_of(self.direction)

    def interval(self, i: int) -> tuple:
        """Closed coordinate range (lo, hi) of the cube on axis i."""
        c = self.root[i]
        if self.direction >> i & 1:
            return (c, c + self.ambient.step)
        return (c, c)

    def vertices(self):
        """All grid vertices of the cube."""
        step = self.ambient.step
        ax = self.axes
        for bits in itertools.product((0, 1), repeat=len(ax)):
            p = list(self.root)
            for a, b in zip(ax, bits):
                p[a] += b * step
            yield tuple(p)

    def contains_point(self, p: Point) -> bool:
        """Whether the grid point p is a vertex of this cube."""
        if len(p) != len(self.root):
            return False
        step = self.ambient.step
        for i, c in enumerate(self.root):
            if self.direction >> i & 1:
                if p[i] != c and p[i] != c + step:
                    return False
            elif p[i] != c:
                return False
        return True

    def contains_cube(self, other: "Cube") -> bool:
        """Whether other is a face of this cube (coordinatewise containment)."""
        if other.ambient != self.ambient:
            return False
        for i in range(len(self.root)):
            lo, hi = self.interval(i)
            olo, ohi = other.interval(i)
            if olo < lo or ohi > hi:
                return False
        return True

    def meets_cube(self, other: "Cube") -> bool:
        """Whether the closed cubes share at least one point."""
        for i in range(len(self.root)):
            lo, hi = self.interval(i)
            olo, ohi = other.interval(i)
            if max(lo, olo) > min(hi, ohi):
                return False
        return True


def point_cube(ambient: Ambient, p: Point) -> Cube:
    """The 0-cube at a grid point."""
    return Cube(ambient, tuple(p), 0)


def face_set(ambient: Ambient, axis: int, side: str) -> frozenset:
    """Grid points of the face pinning one coordinate to its extreme value.

    side "low" pins to the minimum coordinate, "high" to the maximum.
    """
    if not 0 <= axis < ambient.coord_count:
        raise ValueError(f"axis {axis} out of range")
    if side not in ("low", "high"):
        raise ValueError(f"side must be 'low' or 'high', got {side!r}")
    value = ambient.lo if side == "low" else ambient.hi
    return frozenset(p for p in all_points(ambient) if p[axis] == value)


def faces(cube: Cube, m: int) -> frozenset:
    """All m-faces of a cube: keep m extended axes, freeze the rest."""
    if not 0 <= m <= cube.dim:
        raise ValueError(f"face dimension {m} out of range 0..{cube.dim}")
    step = cube.ambient.step
    ax = cube.axes
    out = set()
    for keep in itertools.combinations(ax, m):
        frozen = [a for a in ax if a not in keep]
        for bits in itertools.product((0, 1), repeat=len(frozen)):
            root = list(cube.root)
            for a, b in zip(frozen, bits):
                root[a] += b * step
            out.add(Cube(cube.ambient, tuple(root), mask_of(keep)))
    return frozenset(out)


def facets(cube: Cube) -> frozenset:
    """The codimension-one faces."""
    return faces(cube, cube.dim - 1)


def _frozen_value(cube: Cube, axis: int, eps: int, norm: str) -> int:
    lo, hi = cube.interval(axis)
    if norm == "lex":
        return lo if eps == 0 else hi
    if abs(lo) == abs(hi):
        raise ValueError(f"l1 tie on axis {axis}: endpoints {lo}, {hi}")
    near, far = (lo, hi) if abs(lo) < abs(hi) else (hi, lo)
    return near if eps == 0 else far


def lambda_face(cube: Cube, axes, eps: int, norm: str | None = None) -> Cube:
    """Freeze the given extended axes at their eps=0 (lower) or eps=1 (upper) end.

    Under the lex norm lower/upper is the coordinate order; under the l1 norm
    it is the order of coordinate absolute values.
    """
    if norm is None:
        norm = cube.ambient.default_norm
    if norm not in ("lex", "l1"):
        raise ValueError(f"norm must be 'lex' or 'l1', got {norm!r}")
    mask = axes if isinstance(axes, int) else mask_of(axes)
    if mask & ~cube.direction:
        raise ValueError(
            f"axes {axes_of(mask & ~cube.direction)} are not extended in the cube"
        )
    if eps not in (0, 1):
        raise ValueError(f"eps must be 0 or 1, got {eps!r}")
    root = list(cube.root)
    for a in axes_of(mask):
        root[a] = _frozen_value(cube, a, eps, norm)
    return Cube(cube.ambient, tuple(root), cube.direction & ~mask)


def root_point(cube: Cube, norm: str | None = None) -> Point:
    """The vertex at the eps=0 end of every extended axis."""
    return lambda_face(cube, cube.direction, 0, norm).root


def peak_point(cube: Cube, norm: str | None = None) -> Point:
    """The vertex at the eps=1 end of every extended axis."""
    return lambda_face(cube, cube.direction, 1, norm).root


def pivot_sequences(ncube: Cube, norm: str | None = None) -> list:
    """All n! vertex paths of an n-cube from its root to its peak.

    Each step moves exactly one extended axis from its eps=0 value to its
    eps=1 value; distinct steps move distinct axes.
    """
    if norm is None:
        norm = ncube.ambient.default_norm
    start = root_point(ncube, norm)
    out = []
    for order in itertools.permutations(ncube.axes):
        seq = [start]
        p = list(start)
        for a in order:
            p[a] = _frozen_value(ncube, a, 1, norm)
            seq.append(tuple(p))
        out.append(tuple(seq))
    return out


def free_pivot_sequences(ncube: Cube, start: Point) -> list:
    """All n! vertex paths from a given vertex to the opposite vertex.

    Each step moves one extended axis from its value at start to the other
    endpoint; every axis moves exactly once.
    """
    if not ncube.contains_point(tuple(start)):
        raise ValueError(f"start {start} is not a vertex of the cube")
    out = []
    for order in itertools.permutations(ncube.axes):
        seq = [tuple(start)]
        p = list(start)
        for a in order:
            lo, hi = ncube.interval(a)
            p[a] = hi if p[a] == lo else lo
            seq.append(tuple(p))
        out.append(tuple(seq))
    return out


def leq(p: Point, q: Point) -> bool:
    """Coordinatewise order on integer points."""
    if len(p) != len(q):
        raise ValueError("length mismatch")
    return all(a <= b for a, b in zip(p, q))


def is_pivot_subsequence_set(points) -> bool:
    """Whether a set of integer points is the term set of a pivot subsequence.

    Equivalent test: the points are pairwise comparable under leq and fit in
    one unit cube (coordinatewise span at most 1).
    """
    pts = sorted(set(map(tuple, points)))
    if not pts:
        return False
    for a, b in itertools.combinations(pts, 2):
        if not (leq(a, b) or leq(b, a)):
            return False
    for i in range(len(pts[0])):
        vals = [p[i] for p in pts]
        if max(vals) - min(vals) > 1:
            return False
    return True


def antipode_point(ambient: Ambient, p: Point) -> Point:
    if ambient.kind not in _CENTRAL:
        raise ValueError(f"ambient kind {ambient.kind!r} has no central symmetry")
    return tuple(-c for c in p)


def antipode_cube(cube: Cube) -> Cube:
    """The image of a cube under coordinatewise negation."""
    amb = cube.ambient
    if amb.kind not in _CENTRAL:
        raise ValueError(f"ambient kind {amb.kind!r} has no central symmetry")
    step = amb.step
    root = tuple(
        -(c + step) if cube.direction >> i & 1 else -c
        for i, c in enumerate(cube.root)
    )
    return Cube(amb, root, cube.direction)


def antipode(x):
    """Negate a cube, a point sequence, or a set of either."""
    if isinstance(x, Cube):
        return antipode_cube(x)
    if isinstance(x, frozenset) or isinstance(x, set):
        return frozenset(antipode(y) for y in x)
    if isinstance(x, tuple) and x and isinstance(x[0], tuple):
        return tuple(tuple(-c for c in p) for p in x)
    if isinstance(x, tuple):
        return tuple(-c for c in x)
    raise TypeError(f"cannot negate {type(x).__name__}")


def all_points(ambient: Ambient):
    """All grid points of the ambient."""
    step = ambient.step
    rng = range(ambient.lo, ambient.hi + 1, step)
    for p in itertools.product(rng, repeat=ambient.coord_count):
        if ambient.kind == SPHERE and max(abs(c) for c in p) != ambient.size:
            continue
        if ambient.kind == BIGSPHERE and max(abs(c) for c in p) != ambient.hi:
            continue
        yield p


def all_cubes(ambient: Ambient, m: int):
    """All m-cubes of the ambient."""
    cc = ambient.coord_count
    if not 0 <= m <= cc:
        return
    step = ambient.step
    boundary = ambient.kind in (SPHERE, BIGSPHERE)
    for ax in itertools.combinations(range(cc), m):
        mask = mask_of(ax)
        ranges = []
        for i in range(cc):
            if mask >> i & 1:
                ranges.append(range(ambient.lo, ambient.hi - step + 1, step))
            else:
                ranges.append(range(ambient.lo, ambient.hi + 1, step))
        for root in itertools.product(*ranges):
            if boundary and not any(
                mask >> i & 1 == 0 and abs(root[i]) == ambient.hi for i in range(cc)
            ):
                continue
            yield Cube(ambient, root, mask)
