"""Duality between the discrete cube and the solid cube one size larger.

A point v of the discrete cube of size k corresponds to the unit cell of
the solid cube of size k + 1 centered over v; the correspondence extends
to cubes of every dimension, swaps dimension m for n - m, exchanges the
face relation, and turns boundaries into coboundaries.  The maps carry
covering and separation theorems between the two worlds.
"""

import itertools
from dataclasses import dataclass

from .chains import Chain, boundary, coboundary, zero
from .cubecore import (
    DISCRETE,
    SOLID,
    Ambient,
    Cube,
    all_cubes,
    all_points,
    discrete_cube,
    facets,
    mask_of,
    solid_cube,
)
from .errors import PreconditionError
from .lebesgue import (
    CubicalSet,
    cell_in_boundary,
    covers_face,
    cubes_partitions_witness,
    e_coverings_witness,
)
from .products import _check_kuhn_conditions, kuhn_witnesses

__all__ = [
    "DualPair",
    "cubes_intersections_bridge",
    "dual_boundary_check",
    "dual_hypersurfaces",
    "dual_pair",
    "face_duality_check",
    "relative_boundary",
    "star_chain",
    "star_cube",
    "star_point",
    "star_set",
    "transported_witnesses",
    "transversality_check",
    "unstar",
    "unstar_chain",
]

MODES = ("discrete-coverings", "separation-weak", "separation-lebesgue")


@dataclass(frozen=True)
class DualPair:
    """A discrete cube of size k paired with the solid cube of size k + 1."""

    k_ambient: Ambient
    q_ambient: Ambient

    def __post_init__(self):
        if self.k_ambient.kind != DISCRETE:
            raise ValueError("the first ambient must be a discrete cube")
        if self.q_ambient.kind != SOLID:
            raise ValueError("the second ambient must be a solid cube")
        if self.k_ambient.n != self.q_ambient.n:
            raise ValueError("the two ambients have different dimensions")
        if self.q_ambient.size != self.k_ambient.size + 1:
            raise ValueError(
                f"solid size {self.q_ambient.size} is not discrete size "
                f"{self.k_ambient.size} plus one"
            )


def dual_pair(n: int, k: int) -> DualPair:
    return DualPair(discrete_cube(n, k), solid_cube(n, k + 1))


def _full_mask(pair: DualPair) -> int:
    return mask_of(range(pair.k_ambient.n))


def star_point(pair: DualPair, v) -> Cube:
    """The top cell of the solid cube centered over a discrete point."""
    v = tuple(v)
    if not pair.k_ambient.is_point(v):
        raise ValueError(f"{v} is out of range for the discrete cube")
    return Cube(pair.q_ambient, v, _full_mask(pair))


def star_set(pair: DualPair, s) -> CubicalSet:
    """The union of the top cells centered over the points of a subset."""
    return CubicalSet(pair.q_ambient, frozenset(star_point(pair, v) for v in s))


def star_cube(pair: DualPair, sigma: Cube) -> Cube:
    """The dual cube: extended axes freeze at the upper endpoint, frozen
    axes extend upward; dimensions m and n - m swap."""
    if sigma.ambient != pair.k_ambient:
        raise ValueError("cube does not live in the discrete cube of the pair")
    root = tuple(
        x + 1 if sigma.direction >> i & 1 else x for i, x in enumerate(sigma.root)
    )
    return Cube(pair.q_ambient, root, _full_mask(pair) ^ sigma.direction)


def unstar(pair: DualPair, c: Cube) -> Chain:
    """The dual of a solid cube as a one-term chain of the discrete cube,
    or the zero chain when the cube lies in the boundary of the solid cube."""
    if c.ambient != pair.q_ambient:
        raise ValueError("cube does not live in the solid cube of the pair")
    n = pair.k_ambient.n
    if cell_in_boundary(c):
        return zero(pair.k_ambient, n - c.dim)
    root = tuple(x if c.direction >> i & 1 else x - 1 for i, x in enumerate(c.root))
    sigma = Cube(pair.k_ambient, root, _full_mask(pair) ^ c.direction)
    return Chain(pair.k_ambient, n - c.dim, frozenset({sigma}))


def star_chain(pair: DualPair, ch: Chain) -> Chain:
    """A chain of the discrete cube as a relative cochain of the solid cube."""
    if ch.ambient != pair.k_ambient:
        raise ValueError("chain does not live in the discrete cube of the pair")
    n = pair.k_ambient.n
    return Chain(
        pair.q_ambient,
        n - ch.dim,
        frozenset(star_cube(pair, c) for c in ch.cubes),
    )


def unstar_chain(pair: DualPair, ch: Chain) -> Chain:
    """A chain of the solid cube as a chain of the discrete cube; terms in
    the boundary of the solid cube are dropped."""
    if ch.ambient != pair.q_ambient:
        raise ValueError("chain does not live in the solid cube of the pair")
    n = pair.k_ambient.n
    out = set()
    for c in ch.cubes:
        out |= unstar(pair, c).cubes
    return Chain(pair.k_ambient, n - ch.dim, frozenset(out))


def face_duality_check(pair: DualPair, sigma: Cube, tau: Cube) -> bool:
    """Whether sigma is a face of tau, verified to agree with the dual of
    tau being a face of the dual of sigma."""
    direct = tau.contains_cube(sigma)
    dual = star_cube(pair, sigma).contains_cube(star_cube(pair, tau))
    if direct != dual:
        raise AssertionError(
            f"face duality broke on {sigma} and {tau}: {direct} versus {dual}"
        )
    return direct


def relative_boundary(pair: DualPair, ch: Chain) -> Chain:
    """The boundary of a solid-cube chain with boundary-cube terms dropped."""
    if ch.ambient != pair.q_ambient:
        raise ValueError("chain does not live in the solid cube of the pair")
    bd = boundary(ch)
    return Chain(
        bd.ambient, bd.dim, frozenset(c for c in bd.cubes if not cell_in_boundary(c))
    )


def dual_boundary_check(pair: DualPair, gamma: Chain) -> bool:
    """Whether the dual of the boundary equals the coboundary of the dual."""
    return star_chain(pair, boundary(gamma)) == coboundary(star_chain(pair, gamma))


def cubes_intersections_bridge(pair: DualPair, sets) -> bool:
    """Whether some top cube of the discrete cube meets every given subset,
    computed again as the dual unions sharing a point of the solid grid;
    the two answers always agree and the shared verdict is returned."""
    sets = [frozenset(map(tuple, s)) for s in sets]
    n = pair.k_ambient.n
    k_side = any(
        all(any(v in s for v in c.vertices()) for s in sets)
        for c in all_cubes(pair.k_ambient, n)
    )
    unions = [star_set(pair, s) for s in sets]
    q_side = any(
        all(u.contains_point(p) for u in unions) for p in all_points(pair.q_ambient)
    )
    if k_side != q_side:
        raise AssertionError(
            f"intersection bridge broke: cube side {k_side}, union side {q_side}"
        )
    return k_side


def _low_face(ambient: Ambient, axis: int) -> frozenset:
    return frozenset(p for p in all_points(ambient) if p[axis] == 0)


def _high_face(ambient: Ambient, axis: int) -> frozenset:
    return frozenset(p for p in all_points(ambient) if p[axis] == ambient.size)


def _cube_from_point(pair: DualPair, p) -> Cube:
    """The top cube of the discrete cube spanned around a solid grid point;
    every cell containing the point is centered over one of its vertices."""
    k = pair.k_ambient.size
    root = tuple(min(max(x - 1, 0), k - 1) for x in p)
    return Cube(pair.k_ambient, root, _full_mask(pair))


def _check_discrete_covering_conditions(pair: DualPair, sets) -> None:
    ambient = pair.k_ambient
    n = ambient.n
    if len(sets) != n + 1:
        raise PreconditionError("count", f"expected {n + 1} sets, got {len(sets)}")
    for p in all_points(ambient):
        if not any(p in s for s in sets):
            raise PreconditionError("covering", p)
    for i in range(n):
        union = frozenset().union(*sets[: i + 1])
        if not _low_face(ambient, i) <= union:
            raise PreconditionError(
                "low face containment",
                f"sets 0..{i} do not cover the low face of axis {i}",
            )
        if sets[i] & _high_face(ambient, i):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
    for i in range(1, n + 1):
        for j in range(min(i, n)):
            if sets[i] & _low_face(ambient, j):
                raise PreconditionError(
                    "later low face disjointness",
                    f"set {i} meets the low face of axis {j}",
                )


def transported_witnesses(pair: DualPair, mode: str, sets):
    """A witness for one of the three theorems carried across the duality.

    In discrete-coverings mode the input is n + 1 subsets of the discrete
    cube covering it under the face conditions, and the output is a top
    cube meeting all of them.  In separation-weak mode the input is n
    subsets whose unions cover the low faces while each avoids its own
    high face, and the output is a top cube meeting every set and every
    complement.  In separation-lebesgue mode the input is n cubical sets
    of the solid cube containing the low faces, with complements covering
    the high faces, and the output is a solid grid point common to every
    set and every complement.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    ambient = pair.k_ambient
    n = ambient.n

    if mode == "discrete-coverings":
        sets = [frozenset(map(tuple, s)) for s in sets]
        _check_discrete_covering_conditions(pair, sets)
        point = e_coverings_witness([star_set(pair, s) for s in sets])
        cube = _cube_from_point(pair, point)
        verts = set(cube.vertices())
        for i, s in enumerate(sets):
            if not verts & s:
                raise AssertionError(f"witness cube misses set {i}")
        return cube

    if mode == "separation-weak":
        sets = [frozenset(map(tuple, s)) for s in sets]
        if len(sets) != n:
            raise PreconditionError("count", f"expected {n} sets, got {len(sets)}")
        for i in range(n):
            union = frozenset().union(*sets[: i + 1])
            if not _low_face(ambient, i) <= union:
                raise PreconditionError(
                    "low face containment",
                    f"sets 0..{i} do not cover the low face of axis {i}",
                )
            if sets[i] & _high_face(ambient, i):
                raise PreconditionError(
                    "high face disjointness",
                    f"set {i} meets the high face of axis {i}",
                )
        rest = frozenset(all_points(ambient)) - frozenset().union(*sets)
        dsets = [star_set(pair, s) for s in [*sets, rest]]
        point = cubes_partitions_witness(dsets, mode="standard")
        cube = _cube_from_point(pair, point)
        verts = set(cube.vertices())
        for i, s in enumerate(sets):
            if not verts & s:
                raise AssertionError(f"witness cube misses set {i}")
            if not verts - s:
                raise AssertionError(f"witness cube misses the complement of set {i}")
        return cube

    dsets = list(sets)
    if len(dsets) != n:
        raise PreconditionError("count", f"expected {n} sets, got {len(dsets)}")
    top = frozenset(all_cubes(pair.q_ambient, n))
    complements = [CubicalSet(pair.q_ambient, top - d.ncubes) for d in dsets]
    for i, d in enumerate(dsets):
        if d.ambient != pair.q_ambient:
            raise ValueError(f"set {i} does not live in the solid cube of the pair")
        if not covers_face([d], i, "low"):
            raise PreconditionError(
                "low face containment", f"set {i} does not contain the low face of axis {i}"
            )
        if d.meets_face(i, "high"):
            raise PreconditionError(
                "high face disjointness", f"set {i} meets the high face of axis {i}"
            )
    cs = [
        frozenset(v for v in all_points(ambient) if star_point(pair, v) in d.ncubes)
        for d in dsets
    ]
    _check_kuhn_conditions(ambient, cs)
    sequences = kuhn_witnesses(ambient, cs)
    point = sequences[0][-1]
    for i, d in enumerate(dsets):
        if not d.contains_point(point):
            raise AssertionError(f"witness point escaped set {i}")
        if not complements[i].contains_point(point):
            raise AssertionError(f"witness point escaped the complement of set {i}")
    return point


def dual_hypersurfaces(pair: DualPair, phi) -> list:
    """The internal boundaries separating each zero set from its complement.

    For every axis the result collects the codimension-one cells of the
    solid cube whose two top neighbors straddle the dual union of the zero
    set; its dual is the coboundary cochain of that component.
    """
    if phi.ambient != pair.k_ambient:
        raise ValueError("map does not live in the discrete cube of the pair")
    n = pair.k_ambient.n
    incidence = {}
    for cell in all_cubes(pair.q_ambient, n):
        for f in facets(cell):
            incidence.setdefault(f, []).append(cell)
    out = []
    for c in phi.sets:
        cells = frozenset(star_point(pair, v) for v in c)
        support = frozenset(
            tau
            for tau, tops in incidence.items()
            if len(tops) == 2 and (tops[0] in cells) != (tops[1] in cells)
        )
        out.append(Chain(pair.q_ambient, n - 1, support))
    return out


def transversality_check(pair: DualPair, phi) -> bool:
    """Whether the internal boundaries of the zero sets are pairwise free
    of common cells, which is exactly adjacency preservation of the map."""
    surfaces = dual_hypersurfaces(pair, phi)
    for a, b in itertools.combinations(surfaces, 2):
        if a.cubes & b.cubes:
            return False
    return True
