"""F2 chains and cochains of one dimension with boundary and coboundary.

Chains and cochains share one representation: the support set of cubes.
Addition is symmetric difference, so duplicates cancel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cubecore import SOLID, Ambient, Cube, all_cubes, facets, solid_cube


@dataclass(frozen=True)
class Chain:
    """A finite F2 sum of m-cubes, stored as its support set."""

    ambient: Ambient
    dim: int
    cubes: frozenset

    def __post_init__(self):
        if not 0 <= self.dim <= self.ambient.coord_count:
            raise ValueError(f"chain dimension {self.dim} out of range")
        for c in self.cubes:
            if c.ambient != self.ambient:
                raise ValueError("cube from a different ambient")
            if c.dim != self.dim:
                raise ValueError(f"cube of dimension {c.dim} in a {self.dim}-chain")

    def __len__(self):
        return len(self.cubes)

    def __bool__(self):
        return bool(self.cubes)

    def __contains__(self, cube):
        return cube in self.cubes

    def value(self, cube: Cube) -> int:
        """The F2 coefficient of a cube (cochain evaluation)."""
        return 1 if cube in self.cubes else 0


Cochain = Chain


def chain(ambient: Ambient, dim: int, cubes=()) -> Chain:
    return Chain(ambient, dim, frozenset(cubes))


def zero(ambient: Ambient, dim: int) -> Chain:
    return Chain(ambient, dim, frozenset())


def full_chain(ambient: Ambient, dim: int) -> Chain:
    """The sum of all dim-cubes of the ambient."""
    return Chain(ambient, dim, frozenset(all_cubes(ambient, dim)))


def add(a: Chain, b: Chain) -> Chain:
    """F2 sum: symmetric difference of supports."""
    if a.ambient != b.ambient or a.dim != b.dim:
        raise ValueError("cannot add chains of different ambients or dimensions")
    return Chain(a.ambient, a.dim, a.cubes ^ b.cubes)


def pairing(a: Chain, b: Chain) -> int:
    """The F2 pairing: parity of the support overlap."""
    if a.ambient != b.ambient or a.dim != b.dim:
        raise ValueError("pairing needs matching ambient and dimension")
    small, large = (a.cubes, b.cubes) if len(a.cubes) < len(b.cubes) else (b.cubes, a.cubes)
    return sum(1 for c in small if c in large) % 2


def boundary(ch: Chain) -> Chain:
    """The F2 sum of the codimension-one faces of every cube of the chain."""
    if ch.dim == 0:
        raise ValueError("0-chains have no boundary")
    out = set()
    for c in ch.cubes:
        out ^= facets(c)
    return Chain(ch.ambient, ch.dim - 1, frozenset(out))


def cofaces(cube: Cube):
    """All valid cubes of one dimension higher having this cube as a face."""
    amb = cube.ambient
    step = amb.step
    for a in range(amb.coord_count):
        if cube.direction >> a & 1:
            continue
        for shift in (0, -step):
            root = list(cube.root)
            root[a] += shift
            try:
                yield Cube(amb, tuple(root), cube.direction | 1 << a)
            except ValueError:
                continue


def coboundary(co: Chain) -> Chain:
    """The dual operator: support is the cubes with oddly many support faces."""
    if co.dim >= co.ambient.coord_count:
        raise ValueError("top-dimensional cochains have no coboundary")
    count = {}
    for c in co.cubes:
        for big in cofaces(c):
            count[big] = count.get(big, 0) + 1
    return Chain(
        co.ambient, co.dim + 1, frozenset(c for c, k in count.items() if k % 2)
    )


@dataclass(frozen=True)
class PlaneLevels:
    """Non-integer hyperplane levels a_1..a_n, stored as doubled odd integers."""

    doubled: tuple

    def __post_init__(self):
        for d in self.doubled:
            if d % 2 == 0:
                raise ValueError(f"doubled level {d} is even, level would be an integer")

    def level_within(self, axis: int, lo: int, hi: int) -> bool:
        """Whether the level on an axis lies strictly inside (lo, hi)."""
        return 2 * lo < self.doubled[axis] < 2 * hi


def half_levels(n: int) -> PlaneLevels:
    """The default levels: 1/2 on every axis."""
    return PlaneLevels((1,) * n)


def project(ch: Chain, kept_axes) -> Chain:
    """Push a chain of the solid cube onto the face spanned by kept_axes.

    A cube survives exactly when all its extended axes are kept; the others
    are collapsed.  Surviving cubes keep only the kept coordinates, and the
    images accumulate mod 2.
    """
    if ch.ambient.kind != SOLID:
        raise ValueError("project is defined on the solid cube")
    kept = tuple(sorted(set(kept_axes)))
    if any(not 0 <= a < ch.ambient.n for a in kept):
        raise ValueError(f"kept axes {kept} out of range")
    target = solid_cube(len(kept), ch.ambient.size)
    if ch.dim > len(kept):
        # every cube degenerates; the zero chain in the top degree of the face
        return zero(target, len(kept))
    pos = {a: i for i, a in enumerate(kept)}
    out = set()
    for c in ch.cubes:
        if any(c.direction >> a & 1 and a not in pos for a in range(ch.ambient.n)):
            continue
        root = tuple(c.root[a] for a in kept)
        mask = 0
        for a in kept:
            if c.direction >> a & 1:
                mask |= 1 << pos[a]
        img = Cube(target, root, mask)
        out.symmetric_difference_update({img})
    return Chain(target, ch.dim, frozenset(out))


def intersect_plane(ch: Chain, levels: PlaneLevels, u: int) -> Chain:
    """Slice a chain of the solid cube with the plane fixing axes u..n-1.

    The plane pins coordinate i at the non-integer level i for every i >= u.
    A cube meets it exactly when all pinned axes are extended and contain
    their level; its trace keeps the first u coordinates.
    """
    if ch.ambient.kind != SOLID:
        raise ValueError("intersect_plane is defined on the solid cube")
    n = ch.ambient.n
    if len(levels.doubled) != n:
        raise ValueError("levels length must match the ambient dimension")
    if not 0 <= u <= n:
        raise ValueError(f"plane dimension u={u} out of range 0..{n}")
    if ch.dim < n - u:
        raise ValueError(f"a {ch.dim}-chain cannot meet a plane fixing {n - u} axes")
    if u == n:
        return ch
    target = solid_cube(u, ch.ambient.size)
    out = set()
    for c in ch.cubes:
        ok = True
        for a in range(u, n):
            if not c.direction >> a & 1:
                ok = False
                break
            if not levels.level_within(a, c.root[a], c.root[a] + 1):
                ok = False
                break
        if not ok:
            continue
        img = Cube(target, c.root[:u], c.direction & ((1 << u) - 1))
        out.symmetric_difference_update({img})
    return Chain(target, ch.dim - (n - u), frozenset(out))
