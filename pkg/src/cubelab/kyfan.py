"""Adjacency-preserving grid maps and the bijection-product equivalence.

A map from the grid to the corners of the unit cube preserves adjacency
when edge endpoints land on equal or adjacent corners.  On a top cube the
map is a bijection exactly when the product of its edge cochains is one,
and counting bijective cubes against boundary facets gives the parity
theorem for such maps.
"""

import itertools
from dataclasses import dataclass

from .chains import chain, coboundary
from .cubecore import DISCRETE, Ambient, all_cubes, all_points, faces, point_cube
from .errors import PreconditionError
from .products import _check_kuhn_conditions, kuhn_witnesses, multi_cup

__all__ = [
    "GridMap",
    "all_grid_maps",
    "bijection_iff_product",
    "grid_map",
    "is_adjacency_preserving",
    "kuhn_via_kyfan",
    "kyfan_counts",
    "threshold_map",
]


@dataclass(frozen=True)
class GridMap:
    """A map from grid points to unit-cube corners, one zero set per axis.

    Component i of the image is 0 on the points of sets[i] and 1 off it.
    """

    ambient: Ambient
    sets: tuple

    def __post_init__(self):
        if self.ambient.kind != DISCRETE:
            raise ValueError("grid maps are defined on the discrete cube")
        if len(self.sets) != self.ambient.n:
            raise ValueError(f"expected {self.ambient.n} sets, got {len(self.sets)}")
        for c in self.sets:
            for p in c:
                if not self.ambient.is_point(p):
                    raise ValueError(f"{p} is not a point of the ambient")

    def component(self, i: int, v) -> int:
        return 0 if tuple(v) in self.sets[i] else 1

    def image(self, v) -> tuple:
        v = tuple(v)
        return tuple(0 if v in c else 1 for c in self.sets)

    def component_cochain(self, i: int):
        """Component i as a 0-cochain, supported where the bit is one."""
        ones = [p for p in all_points(self.ambient) if p not in self.sets[i]]
        return chain(self.ambient, 0, [point_cube(self.ambient, p) for p in ones])

    def edge_cochains(self) -> list:
        """The coboundaries of all components, one 1-cochain per axis."""
        return [coboundary(self.component_cochain(i)) for i in range(self.ambient.n)]


def grid_map(ambient: Ambient, sets) -> GridMap:
    return GridMap(ambient, tuple(frozenset(map(tuple, c)) for c in sets))


def threshold_map(ambient: Ambient, thresholds) -> GridMap:
    """The map whose i-th bit records whether coordinate i clears its
    threshold; components depend on one coordinate each, so adjacency is
    automatic."""
    ts = tuple(int(t) for t in thresholds)
    if len(ts) != ambient.n:
        raise PreconditionError(
            "count", f"expected {ambient.n} thresholds, got {len(ts)}"
        )
    return GridMap(
        ambient,
        tuple(
            frozenset(p for p in all_points(ambient) if p[i] < ts[i])
            for i in range(ambient.n)
        ),
    )


def all_grid_maps(ambient: Ambient):
    """Every map from the grid to the corners, for exhaustive searches."""
    points = sorted(all_points(ambient))
    corners = list(itertools.product((0, 1), repeat=ambient.n))
    for images in itertools.product(corners, repeat=len(points)):
        yield GridMap(
            ambient,
            tuple(
                frozenset(p for p, w in zip(points, images) if w[i] == 0)
                for i in range(ambient.n)
            ),
        )


def is_adjacency_preserving(phi: GridMap) -> tuple:
    """Whether every edge maps to equal or adjacent corners; returns the
    verdict together with an offending edge, if any."""
    for edge in sorted(all_cubes(phi.ambient, 1), key=lambda c: (c.root, c.direction)):
        v, w = edge.vertices()
        if sum(x != y for x, y in zip(phi.image(v), phi.image(w))) > 1:
            return False, edge
    return True, None


def _require_adjacency(phi: GridMap, edges) -> None:
    for edge in edges:
        v, w = edge.vertices()
        if sum(x != y for x, y in zip(phi.image(v), phi.image(w))) > 1:
            raise PreconditionError(
                "adjacency preservation", (edge.root, edge.axes)
            )


def bijection_iff_product(phi: GridMap, sigma) -> tuple:
    """Decides bijectivity of the map on one top cube two ways: by image
    cardinality and by the product of the edge cochains on the cube."""
    if sigma.ambient != phi.ambient:
        raise ValueError("cube and map live in different ambients")
    if sigma.dim != phi.ambient.n:
        raise ValueError(f"expected a top cube, got dimension {sigma.dim}")
    _require_adjacency(phi, faces(sigma, 1))
    corners = sigma.vertices()
    is_bijection = len({phi.image(v) for v in corners}) == 1 << phi.ambient.n
    product = multi_cup(phi.edge_cochains()).value(sigma)
    if is_bijection != (product == 1):
        raise AssertionError(
            f"bijectivity {is_bijection} against product value {product}"
        )
    return is_bijection, product


def kyfan_counts(phi: GridMap, axis: int = 0, value: int = 1) -> tuple:
    """The number of top cubes mapped bijectively onto the corners and of
    boundary facet cubes mapped bijectively onto one corner face; the two
    counts always agree modulo two."""
    n = phi.ambient.n
    k = phi.ambient.size
    if not 0 <= axis < n:
        raise ValueError(f"axis {axis} out of range 0..{n - 1}")
    if value not in (0, 1):
        raise ValueError(f"face value must be 0 or 1, got {value}")
    ok, witness = is_adjacency_preserving(phi)
    if not ok:
        raise PreconditionError("adjacency preservation", (witness.root, witness.axes))
    s = sum(
        1
        for sigma in all_cubes(phi.ambient, n)
        if len({phi.image(v) for v in sigma.vertices()}) == 1 << n
    )
    target = frozenset(
        w for w in itertools.product((0, 1), repeat=n) if w[axis] == value
    )
    t = 0
    for tau in all_cubes(phi.ambient, n - 1):
        frozen = next(a for a in range(n) if a not in tau.axes)
        if tau.root[frozen] not in (0, k):
            continue
        img = {phi.image(v) for v in tau.vertices()}
        if len(img) == 1 << (n - 1) and img <= target:
            t += 1
    if (s - t) % 2:
        raise AssertionError(f"parity split: {s} bijective cubes, {t} facets")
    return s, t


def kuhn_via_kyfan(labeling) -> int:
    """The odd count of top cubes mapped bijectively onto the corners by
    an adjacency-preserving labeling under the face conditions.

    Every bijective cube carries exactly one pivot sequence whose i-th
    step crosses between the i-th zero set and its complement."""
    ambient = labeling.ambient
    sets = tuple(labeling.sets)
    _check_kuhn_conditions(ambient, list(sets))
    phi = GridMap(ambient, sets)
    ok, witness = is_adjacency_preserving(phi)
    if not ok:
        raise PreconditionError("adjacency preservation", (witness.root, witness.axes))
    crossing = kuhn_witnesses(ambient, list(sets))
    count = 0
    for sigma in all_cubes(ambient, ambient.n):
        corners = set(sigma.vertices())
        if len({phi.image(v) for v in corners}) != 1 << ambient.n:
            continue
        count += 1
        inside = [seq for seq in crossing if set(seq) <= corners]
        if len(inside) != 1:
            raise AssertionError(
                f"bijective cube with {len(inside)} crossing sequences"
            )
    if count % 2 == 0:
        raise AssertionError(f"even count {count} of bijective cubes")
    return count
