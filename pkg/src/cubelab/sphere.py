"""The boundary sphere under the antipodal involution.

Two ambients appear here.  On the discrete boundary sphere the l1 root and
peak convention makes the product of cochains commute with the involution,
which turns coboundaries of asymmetric 0-cochains into symmetric products
with an odd number of supporting antipodal pairs.  On the big sphere of
half-integer radius (stored with doubled coordinates) symmetric chains split
into antipodal halves, and repeatedly taking the boundary of a half descends
from the fundamental chain to a point avoiding given symmetric cubical sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .chains import Chain, add, boundary, chain, coboundary, full_chain
from .cubecore import (
    BIGSPHERE,
    SPHERE,
    Ambient,
    Cube,
    all_cubes,
    all_points,
    antipode_cube,
    antipode_point,
    big_sphere,
    point_cube,
)
from .errors import PreconditionError
from .products import multi_cup

SYMMETRIC_TAG = "symmetric"
ASYMMETRIC_TAG = "asymmetric"
NO_TAG = "none"


def _cube_key(cube: Cube) -> tuple:
    return (cube.root, cube.direction)


def iota_star(ch: Chain) -> Chain:
    """The image of a chain or cochain under coordinatewise negation.

    For an involution the pushforward on chains and the pullback on cochains
    act identically on supports, so one map serves both.
    """
    return chain(ch.ambient, ch.dim, [antipode_cube(c) for c in ch.cubes])


def classify(ch: Chain) -> str:
    """The symmetry tag of a chain: symmetric, asymmetric, or none.

    Symmetric means the support is invariant under negation.  Asymmetric
    means the support picks exactly one cube from every antipodal pair of
    the ambient, so the value flips on every negated cube.
    """
    mirror = frozenset(antipode_cube(c) for c in ch.cubes)
    if mirror == ch.cubes:
        return SYMMETRIC_TAG
    if not mirror & ch.cubes:
        total = sum(1 for _ in all_cubes(ch.ambient, ch.dim))
        if 2 * len(ch.cubes) == total:
            return ASYMMETRIC_TAG
    return NO_TAG


@dataclass(frozen=True)
class EquivariantCochain:
    """A cochain on the boundary sphere with its verified symmetry tag."""

    cochain: Chain
    tag: str

    def __post_init__(self):
        if self.cochain.ambient.kind != SPHERE:
            raise ValueError("equivariant cochains live on the boundary sphere")
        actual = classify(self.cochain)
        if self.tag != actual:
            raise ValueError(f"tag {self.tag!r} does not match, the cochain is {actual!r}")


def tagged(cochain: Chain) -> EquivariantCochain:
    return EquivariantCochain(cochain, classify(cochain))


def first_negative_indicator(ambient: Ambient) -> Chain:
    """The 0-cochain set on points whose first nonzero coordinate is negative.

    On the boundary sphere no point is all zero, so this support contains
    exactly one point of every antipodal pair and the cochain is asymmetric.
    """
    if ambient.kind != SPHERE:
        raise ValueError("the indicator is defined on the boundary sphere")
    support = []
    for p in all_points(ambient):
        lead = next(c for c in p if c != 0)
        if lead < 0:
            support.append(point_cube(ambient, p))
    return chain(ambient, 0, support)


def sphere_multi_cup(fs) -> Chain:
    """The top-dimensional product of cochains on the boundary sphere.

    The l1 convention for roots and peaks makes negation a homomorphism for
    this product, so products of symmetric cochains stay symmetric.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("empty product needs an ambient to live on")
    ambient = fs[0].ambient
    if ambient.kind != SPHERE:
        raise ValueError("sphere products live on the boundary sphere")
    total = sum(f.dim for f in fs)
    if total != ambient.n:
        raise ValueError(
            f"factor dimensions add to {total}, the top dimension is {ambient.n}"
        )
    return multi_cup(fs)


def sym_sum(f: Chain) -> int:
    """The sum of a symmetric top cochain over one cube per antipodal pair.

    The transversal picks the cube with the lexicographically smaller root
    from every pair; symmetry makes the result transversal-independent.
    """
    ambient = f.ambient
    if ambient.kind != SPHERE:
        raise ValueError("the pair transversal sum lives on the boundary sphere")
    if f.dim != ambient.n:
        raise ValueError(f"expected a {ambient.n}-cochain, got dimension {f.dim}")
    if classify(f) != SYMMETRIC_TAG:
        raise ValueError("the cochain is not symmetric")
    count = sum(1 for c in f.cubes if c.root < antipode_cube(c).root)
    return count % 2


def power_of_generator_pairs(hs) -> list:
    """The antipodal pairs supporting the product of coboundaries.

    Takes n asymmetric 0-cochains on the boundary sphere whose top cells are
    n-cubes, multiplies their coboundaries, and returns the support as a list
    of antipodal pairs, smaller root first.  The number of pairs is odd, and
    its parity does not depend on the choice of the asymmetric cochains.
    """
    hs = list(hs)
    if not hs:
        raise ValueError("empty product needs an ambient to live on")
    ambient = hs[0].ambient
    if ambient.kind != SPHERE:
        raise ValueError("the product lives on the boundary sphere")
    if len(hs) != ambient.n:
        raise ValueError(f"expected {ambient.n} cochains, got {len(hs)}")
    for i, h in enumerate(hs):
        if h.ambient != ambient:
            raise ValueError("cochains live on different ambients")
        if h.dim != 0:
            raise ValueError(f"cochain {i} has dimension {h.dim}, expected 0")
        if classify(h) != ASYMMETRIC_TAG:
            raise ValueError(f"cochain {i} is not asymmetric")
    product = multi_cup([coboundary(h) for h in hs])
    assert iota_star(product) == product
    pairs = []
    seen = set()
    for c in sorted(product.cubes, key=_cube_key):
        if c in seen:
            continue
        other = antipode_cube(c)
        seen.add(c)
        seen.add(other)
        pairs.append((c, other))
    assert len(pairs) % 2 == 1
    return pairs


def ls_witness(ambient: Ambient, cs) -> Cube:
    """An n-cube of the boundary sphere meeting every set and its complement.

    Each of the n point sets must be mapped onto its own complement by the
    antipodal map.  The witness is the lexicographically least cube in the
    product of the indicator coboundaries.
    """
    if ambient.kind != SPHERE:
        raise ValueError("the witness cube lives on the boundary sphere")
    cs = [frozenset(map(tuple, c)) for c in cs]
    if len(cs) != ambient.n:
        raise PreconditionError("count", f"{len(cs)} sets for {ambient.n} factors")
    for i, c in enumerate(cs):
        for p in c:
            if not ambient.is_point(p):
                raise ValueError(f"{p} is not a point of the sphere")
        for p in all_points(ambient):
            if (p in c) == (antipode_point(ambient, p) in c):
                raise PreconditionError("complement antipodality", (i, p))
    hs = [chain(ambient, 0, [point_cube(ambient, p) for p in c]) for c in cs]
    product = multi_cup([coboundary(h) for h in hs])
    assert product.cubes
    witness = min(product.cubes, key=_cube_key)
    vertices = set(witness.vertices())
    for c in cs:
        assert vertices & c and vertices - c
    return witness


def equatorial_slice(ch: Chain, k: int) -> Chain:
    """The intersection of a big-sphere chain with the k-th equatorial sphere.

    The equatorial sphere keeps the first k+1 coordinates and pins the rest
    at zero.  Vertices sit at odd doubled coordinates, so a cube meets the
    zero level of an axis exactly when that axis spans the interval around
    zero; the trace drops the pinned coordinates.  Slicing commutes with the
    boundary operator.
    """
    ambient = ch.ambient
    if ambient.kind != BIGSPHERE:
        raise ValueError("equatorial slicing is defined on the big sphere")
    n = ambient.n
    if not 0 <= k <= n:
        raise ValueError(f"equator dimension {k} out of range 0..{n}")
    if ch.dim < n - k:
        raise ValueError(f"a {ch.dim}-chain cannot meet a sphere of dimension {k}")
    target = big_sphere(k, ambient.size)
    out = set()
    for c in ch.cubes:
        if all(c.direction >> i & 1 and c.root[i] == -1 for i in range(k + 1, n + 1)):
            img = Cube(target, c.root[: k + 1], c.direction & ((1 << (k + 1)) - 1))
            out.symmetric_difference_update({img})
    return Chain(target, ch.dim - (n - k), frozenset(out))


def is_odd_zero_chain(ch: Chain) -> bool:
    """Whether a symmetric 0-chain consists of an odd number of point pairs."""
    if ch.dim != 0:
        raise ValueError(f"expected a 0-chain, got dimension {ch.dim}")
    if frozenset(antipode_cube(c) for c in ch.cubes) != ch.cubes:
        raise ValueError("the chain is not symmetric")
    return (len(ch.cubes) // 2) % 2 == 1


def symmetric_split(ch: Chain) -> Chain:
    """Half of a symmetric chain: the sum of one cube from every pair.

    The returned chain and its antipodal image share no cube and add back to
    the input.  From every pair the cube with the lexicographically smaller
    root is chosen.  If the input is a cycle, the boundary of the half is
    symmetric.
    """
    half = []
    for c in ch.cubes:
        other = antipode_cube(c)
        if other == c:
            raise ValueError(f"cube at {c.root} is its own antipode")
        if c.root < other.root:
            half.append(c)
    split = chain(ch.ambient, ch.dim, half)
    if add(split, iota_star(split)) != ch:
        raise ValueError("the chain is not symmetric")
    return split


def cube_covers(cube: Cube, point) -> bool:
    """Whether a closed grid cube contains a point with real coordinates.

    Grid coordinates are doubled on the big sphere, so a real coordinate x
    lies in the cube's axis interval (lo, hi) exactly when lo <= 2x <= hi.
    Exact fractions pass through unchanged.
    """
    if len(point) != len(cube.root):
        raise ValueError("coordinate count mismatch")
    scale = 2 if cube.ambient.kind == BIGSPHERE else 1
    for i, x in enumerate(point):
        lo, hi = cube.interval(i)
        if not lo <= scale * x <= hi:
            return False
    return True


def _check_cubical_sets(ambient: Ambient, sets) -> list:
    if ambient.kind != BIGSPHERE:
        raise ValueError("the descent is defined on the big sphere")
    n = ambient.n
    sets = [frozenset(s) for s in sets]
    if len(sets) != n:
        raise PreconditionError("count", f"{len(sets)} sets for dimension {n}")
    for idx, cubes in enumerate(sets):
        for c in cubes:
            if c.ambient != ambient:
                raise ValueError("cube from a different ambient")
            if c.dim != n:
                raise ValueError(f"cubical sets consist of {n}-cubes, got dimension {c.dim}")
        for c in cubes:
            mirror = antipode_cube(c)
            for d in cubes:
                if d.meets_cube(mirror):
                    raise PreconditionError(
                        "antipodal disjointness", (idx, d.root, mirror.root)
                    )
    return sets


def _dilated(cubes, target: Ambient) -> frozenset:
    """Triple every coordinate, splitting each extended axis into three cells."""
    out = set()
    for c in cubes:
        spans = [
            (3 * r, 3 * r + 2, 3 * r + 4)
            for i, r in enumerate(c.root)
            if c.direction >> i & 1
        ]
        for picks in itertools.product(*spans):
            root = [3 * r for r in c.root]
            it = iter(picks)
            for i in range(len(root)):
                if c.direction >> i & 1:
                    root[i] = next(it)
            out.add(Cube(target, tuple(root), c.direction))
    return frozenset(out)


def ls_descent_levels(ambient: Ambient, sets) -> tuple:
    """The avoidance point together with the chain at every descent level.

    Takes n cubical sets on the big sphere, each disjoint from its antipodal
    image.  Internally the sphere is dilated three times, so the unit gap
    between a set and its image grows enough to absorb a one-cube thickening.
    Starting from the sum of all top cubes, each level splits the current
    symmetric cycle into halves, keeping the thickened current set on one
    side, and passes to the boundary of the half.  Every level is checked to
    be a symmetric cycle whose equatorial slice is an odd pair count, and to
    avoid the sets already handled.  The final 0-chain is nonempty; its
    lexicographically least point, scaled back to real coordinates, avoids
    every input set and every antipodal image.
    """
    sets = _check_cubical_sets(ambient, sets)
    n = ambient.n
    target = big_sphere(n, 3 * ambient.size + 1)
    top = tuple(all_cubes(target, n))
    thick = []
    for cubes in sets:
        dilated = _dilated(cubes, target)
        grown = frozenset(s for s in top if any(s.meets_cube(d) for d in dilated))
        mirror = frozenset(antipode_cube(s) for s in grown)
        assert not any(a.meets_cube(s) for a in mirror for s in grown)
        thick.append((dilated, grown, mirror))

    gamma = full_chain(target, n)
    assert iota_star(gamma) == gamma
    assert not boundary(gamma)
    assert is_odd_zero_chain(equatorial_slice(gamma, 0))
    levels = [gamma]
    order = list(range(n))
    for m in range(n):
        for j in range(m, n):
            grown = thick[order[j]][1]
            if any(c.meets_cube(s) for c in gamma.cubes for s in grown):
                order[m], order[j] = order[j], order[m]
                break
        _, grown, mirror = thick[order[m]]
        inner = frozenset(
            c for c in gamma.cubes if any(s.contains_cube(c) for s in grown)
        )
        outer = frozenset(
            c for c in gamma.cubes if any(s.contains_cube(c) for s in mirror)
        )
        rest = gamma.cubes - inner - outer
        assert frozenset(antipode_cube(c) for c in rest) == rest
        half = set(inner)
        seen = set()
        for c in sorted(rest, key=_cube_key):
            if c in seen:
                continue
            other = antipode_cube(c)
            seen.add(c)
            seen.add(other)
            half.add(c)
        delta = chain(target, gamma.dim, half)
        mirror_half = iota_star(delta)
        assert add(delta, mirror_half) == gamma
        assert not delta.cubes & mirror_half.cubes
        gamma = boundary(delta)
        assert iota_star(gamma) == gamma
        if gamma.dim:
            assert not boundary(gamma)
        assert is_odd_zero_chain(equatorial_slice(gamma, m + 1))
        for i in range(m + 1):
            dilated = thick[order[i]][0]
            for c in gamma.cubes:
                assert not any(c.meets_cube(d) for d in dilated)
                assert not any(c.meets_cube(antipode_cube(d)) for d in dilated)
        levels.append(gamma)

    point = min(c.root for c in gamma.cubes)
    witness = tuple(Fraction(x, 6) for x in point)
    for cubes in sets:
        for c in cubes:
            assert not cube_covers(c, witness)
            assert not cube_covers(antipode_cube(c), witness)
    return witness, tuple(levels)


def ls_descent(ambient: Ambient, sets) -> tuple:
    """A real point of the big sphere outside every set and antipodal image."""
    return ls_descent_levels(ambient, sets)[0]
