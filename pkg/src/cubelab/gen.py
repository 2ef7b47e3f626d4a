"""Seeded random instance generators for coverings, labelings, and chains.

Randomness comes from a 64-bit linear congruential generator with the
constants state' = 6364136223846793005 * state + 1442695040888963407 mod 2^64,
so instances reproduce exactly across ports from a shared integer seed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .chains import Chain, boundary, chain
from .cubecore import (
    Ambient,
    Cube,
    all_cubes,
    all_points,
    antipode_cube,
    antipode_point,
    mask_of,
    point_cube,
)
from .hurewicz import BoxTiling, TiledSet, refine, trivial_tiling, validate_tiling
from .kyfan import GridMap
from .lebesgue import CubicalSet, is_special
from .tilings import box

_A = 6364136223846793005
_C = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg64:
    """Deterministic 64-bit linear congruential generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (_A * self.state + _C) & _MASK
        return self.state

    def randrange(self, n: int) -> int:
        """An integer in [0, n), by reduction of the top 32 bits."""
        if n <= 0:
            raise ValueError("empty range")
        return (self.next_u64() >> 32) % n

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def coin(self) -> int:
        return self.next_u64() >> 63


def _allowed_labels(root, n, l) -> list:
    """Set indices a top cell may join without breaking the face conditions."""
    out = []
    for i in range(n + 1):
        if i < n and root[i] + 1 == l:
            continue
        if any(root[j] == 0 for j in range(min(i, n))):
            continue
        out.append(i)
    return out


def random_cube_partition(ambient: Ambient, rng: Lcg64) -> list:
    """A random partition of the top cells into n + 1 admissible groups."""
    n, l = ambient.n, ambient.size
    groups = [set() for _ in range(n + 1)]
    for c in all_cubes(ambient, n):
        i = rng.choice(_allowed_labels(c.root, n, l))
        groups[i].add(c)
    return [CubicalSet(ambient, frozenset(g)) for g in groups]


def random_admissible_sets(ambient: Ambient, rng: Lcg64, mode: str = "standard") -> list:
    """Overlapping covering sets for the per-axis partition theorems.

    Starts from an admissible partition and adds extra top cells wherever the
    face conditions of the requested mode allow.
    """
    n, l = ambient.n, ambient.size
    groups = [set(g.ncubes) for g in random_cube_partition(ambient, rng)]
    for c in all_cubes(ambient, n):
        for i in range(n + 1):
            if i < n and c.root[i] + 1 == l:
                continue
            if mode == "early" and any(c.root[j] == 0 for j in range(min(i, n))):
                continue
            if c not in groups[i] and rng.randrange(4) == 0:
                groups[i].add(c)
    return [CubicalSet(ambient, frozenset(g)) for g in groups]


def random_box(ambient: Ambient, rng: Lcg64) -> CubicalSet:
    """A box of top cells that avoids at least one outer face per axis."""
    n, l = ambient.n, ambient.size
    ranges = []
    for _ in range(n):
        width = 1 + rng.randrange(max(1, l - 1))
        lo = rng.randrange(l - width + 1)
        if lo == 0 and lo + width == l:
            width -= 1
            if rng.coin():
                lo += 1
        ranges.append(range(lo, lo + width))
    cells = {
        Cube(ambient, root, mask_of(range(n)))
        for root in itertools.product(*ranges)
    }
    return CubicalSet(ambient, frozenset(cells))


def random_box_covering(ambient: Ambient, rng: Lcg64, extra: int = 4) -> list:
    """Boxes covering the solid cube, none touching two opposite faces."""
    n, l = ambient.n, ambient.size
    out = [random_box(ambient, rng) for _ in range(extra)]
    covered = set().union(*(b.ncubes for b in out))
    for c in all_cubes(ambient, n):
        if c not in covered:
            out.append(CubicalSet(ambient, frozenset({c})))
            covered.add(c)
    return out


def _window_labels(p, n, k) -> list:
    """Part indices a window point may take: part i must miss the high face
    of axis i and the low face of axis i - 1."""
    out = []
    for i in range(n + 1):
        if i < n and p[i] == k:
            continue
        if i >= 1 and p[i - 1] == 0:
            continue
        out.append(i)
    return out


def random_window_partition(n: int, k: int, rng: Lcg64) -> list:
    """An admissible partition of the discrete cube {0..k}^n into n + 1 parts."""
    parts = [set() for _ in range(n + 1)]
    for p in itertools.product(range(k + 1), repeat=n):
        parts[rng.choice(_window_labels(p, n, k))].add(p)
    return [frozenset(s) for s in parts]


def random_window_covering(n: int, k: int, rng: Lcg64) -> list:
    """An admissible covering of {0..k}^n by n + 1 possibly overlapping sets."""
    parts = [set(s) for s in random_window_partition(n, k, rng)]
    for p in itertools.product(range(k + 1), repeat=n):
        for i in _window_labels(p, n, k):
            if p not in parts[i] and rng.randrange(4) == 0:
                parts[i].add(p)
    return [frozenset(s) for s in parts]


def _pick_level(tiling: BoxTiling, axis: int, tile, rng: Lcg64) -> Fraction:
    """A level strictly inside the tile that carries no existing face."""
    lo, hi = tile.intervals[axis]
    while True:
        level = lo + (hi - lo) * Fraction(1 + rng.randrange(63), 64)
        if level == lo or level == hi:
            continue
        if all(level not in t.intervals[axis] for t in tiling.tiles):
            return level


def random_tiling(n: int, rng: Lcg64, extra: int = 5) -> BoxTiling:
    """A random refined tiling of the unit box with no tile spanning an axis."""
    t = trivial_tiling(box([(0, 1)] * n))
    changed = True
    while changed:
        changed = False
        for idx, tile in enumerate(t.tiles):
            for axis in range(n):
                if tile.intervals[axis] == t.domain.intervals[axis]:
                    t = refine(t, idx, axis, _pick_level(t, axis, tile, rng), check=False)
                    changed = True
                    break
            if changed:
                break
    for _ in range(extra):
        idx = rng.randrange(len(t.tiles))
        axis = rng.randrange(n)
        t = refine(t, idx, axis, _pick_level(t, axis, t.tiles[idx], rng), check=False)
    report = validate_tiling(t)
    if not report.ok:
        raise AssertionError(f"random refinement broke the tiling: {report.clause}")
    return t


def _tile_labels(tiling: BoxTiling, idx: int) -> list:
    """Set indices a tile may take under the window face conditions."""
    n = tiling.dim
    single = TiledSet(tiling, frozenset({idx}))
    out = []
    for i in range(n + 1):
        if i < n and single.meets_face(i, "high"):
            continue
        if i >= 1 and single.meets_face(i - 1, "low"):
            continue
        out.append(i)
    return out


def random_tiled_partition(tiling: BoxTiling, rng: Lcg64) -> list:
    """Essentially disjoint admissible tiled sets covering the domain."""
    n = tiling.dim
    parts = [set() for _ in range(n + 1)]
    for idx in range(len(tiling.tiles)):
        parts[rng.choice(_tile_labels(tiling, idx))].add(idx)
    return [TiledSet(tiling, frozenset(p)) for p in parts]


def random_tiled_covering(tiling: BoxTiling, rng: Lcg64) -> list:
    """Admissible covering by n + 1 tiled sets, overlaps allowed."""
    parts = [set(p.indices) for p in random_tiled_partition(tiling, rng)]
    for idx in range(len(tiling.tiles)):
        for i in _tile_labels(tiling, idx):
            if idx not in parts[i] and rng.randrange(4) == 0:
                parts[i].add(idx)
    return [TiledSet(tiling, frozenset(p)) for p in parts]


def random_subset_with_faces(ambient: Ambient, axis: int, rng: Lcg64) -> frozenset:
    """Points of the discrete cube containing the low face and missing the
    high face of the given axis; everything else is a coin flip."""
    k = ambient.size
    out = set()
    for p in all_points(ambient):
        if p[axis] == 0:
            out.add(p)
        elif p[axis] == k:
            continue
        elif rng.coin():
            out.add(p)
    return frozenset(out)


def random_kuhn_sets(ambient: Ambient, rng: Lcg64) -> list:
    """One admissible set per axis of the discrete cube."""
    return [random_subset_with_faces(ambient, a, rng) for a in range(ambient.n)]


def random_cochain(ambient: Ambient, m: int, rng: Lcg64, density: int = 2) -> Chain:
    """A random m-cochain keeping roughly 1/density of the cubes."""
    cubes = [c for c in all_cubes(ambient, m) if rng.randrange(density) == 0]
    return chain(ambient, m, cubes)


def random_special_chain(ambient: Ambient, m: int, rng: Lcg64) -> Chain:
    """A random special m-chain of the solid cube.

    Mixes full slices parallel to the face of the last m axes (each one
    carries the face class once) with boundaries of interior chains one
    dimension up, then rejects the rare non-special sums.
    """
    n, l = ambient.n, ambient.size
    last = mask_of(range(n - m, n))
    while True:
        total = set()
        for _ in range(1 + rng.randrange(3)):
            prefix = tuple(1 + rng.randrange(l - 1) for _ in range(n - m))
            slice_cubes = {
                Cube(ambient, prefix + rest, last)
                for rest in itertools.product(range(l), repeat=m)
            }
            total ^= slice_cubes
        if m < n:
            interior = [
                c
                for c in all_cubes(ambient, m + 1)
                if all(1 <= c.interval(i)[0] and c.interval(i)[1] <= l - 1 for i in range(n))
            ]
            picked = [c for c in interior if rng.randrange(3) == 0]
            if picked:
                total ^= boundary(chain(ambient, m + 1, picked)).cubes
        candidate = chain(ambient, m, total)
        if candidate and is_special(candidate):
            return candidate


def random_antipodal_complement_set(ambient: Ambient, rng: Lcg64) -> frozenset:
    """A random point set mapped onto its complement by negation.

    From every antipodal pair of grid points one member is kept at random.
    """
    out = set()
    for p in all_points(ambient):
        q = antipode_point(ambient, p)
        if p < q:
            out.add(p if rng.randrange(2) == 0 else q)
    return frozenset(out)


def random_asymmetric_cochain(ambient: Ambient, rng: Lcg64) -> Chain:
    """A random 0-cochain whose value flips on every negated point."""
    points = random_antipodal_complement_set(ambient, rng)
    return chain(ambient, 0, [point_cube(ambient, p) for p in points])


def random_symmetric_cochain(ambient: Ambient, m: int, rng: Lcg64, density: int = 2) -> Chain:
    """A random m-cochain whose support is closed under negation."""
    cubes = set()
    for c in all_cubes(ambient, m):
        if rng.randrange(density) == 0:
            cubes.add(c)
            cubes.add(antipode_cube(c))
    return chain(ambient, m, cubes)


def random_threshold_map(ambient, rng) -> GridMap:
    """A map whose components each compare one coordinate to a threshold
    in a random direction; such maps always preserve adjacency."""
    sets = []
    for i in range(ambient.n):
        t = rng.randrange(ambient.size + 2)
        if rng.randrange(2) == 0:
            sets.append(frozenset(p for p in all_points(ambient) if p[i] < t))
        else:
            sets.append(frozenset(p for p in all_points(ambient) if p[i] >= t))
    return GridMap(ambient, tuple(sets))
