"""Cup products of cochains over F2 and the cubical Sperner lemma family.

Two independent implementations of the product are kept on purpose: cup uses
the disjoint-subset formula and cup_faces the root/peak chaining formula, so
each serves as an oracle for the other.  On the discrete cube the products
of coboundaries count crossing pivot sequences, which yields the classical
cubical labeling lemmas with odd witness counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chains import Chain, add, chain, coboundary
from .cubecore import (
    DISCRETE,
    Ambient,
    Cube,
    all_cubes,
    all_points,
    face_set,
    faces,
    lambda_face,
    mask_of,
    peak_point,
    pivot_sequences,
    point_cube,
    root_point,
)
from .errors import PreconditionError


def _product_checks(cochains) -> tuple:
    ambient = cochains[0].ambient
    for f in cochains:
        if f.ambient != ambient:
            raise ValueError("cochains live on different ambients")
    total = sum(f.dim for f in cochains)
    if total > ambient.n:
        raise ValueError(
            f"product dimension {total} exceeds the ambient dimension {ambient.n}"
        )
    return ambient, total


def cup(f: Chain, g: Chain) -> Chain:
    """The product cochain, by the sum over disjoint direction subsets."""
    ambient, m = _product_checks([f, g])
    support = []
    for sigma in all_cubes(ambient, m):
        value = 0
        for fset in itertools.combinations(sigma.axes, f.dim):
            fmask = mask_of(fset)
            gmask = sigma.direction & ~fmask
            if lambda_face(sigma, gmask, 0) in f and lambda_face(sigma, fmask, 1) in g:
                value ^= 1
        if value:
            support.append(sigma)
    return chain(ambient, m, support)


def cup_faces(f: Chain, g: Chain) -> Chain:
    """The same product by root/peak chaining over pairs of faces."""
    ambient, m = _product_checks([f, g])
    support = []
    for sigma in all_cubes(ambient, m):
        value = 0
        sigma_root = root_point(sigma)
        for tau in faces(sigma, f.dim):
            if root_point(tau) != sigma_root or tau not in f:
                continue
            hinge = peak_point(tau)
            for rho in faces(sigma, g.dim):
                if rho.direction & tau.direction:
                    continue
                if root_point(rho) == hinge and rho in g:
                    value ^= 1
        if value:
            support.append(sigma)
    return chain(ambient, m, support)


def multi_cup(fs) -> Chain:
    """The product of several cochains by chained root/peak face sequences."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty product needs an ambient to live on")
    ambient, m = _product_checks(fs)
    support = []
    for sigma in all_cubes(ambient, m):
        by_dim = {f.dim: tuple(faces(sigma, f.dim)) for f in fs}

        def count(i: int, point, used: int) -> int:
            if i == len(fs):
                return 1
            total = 0
            for tau in by_dim[fs[i].dim]:
                if tau.direction & used or tau not in fs[i]:
                    continue
                if root_point(tau) != point:
                    continue
                total ^= count(i + 1, peak_point(tau), used | tau.direction)
            return total

        if count(0, root_point(sigma), 0):
            support.append(sigma)
    return chain(ambient, m, support)


def leibniz_check(f: Chain, g: Chain) -> bool:
    """Whether the coboundary of the product equals the product rule sum."""
    if f.dim + g.dim + 1 > f.ambient.n:
        raise ValueError("the product leaves no room for the coboundary")
    lhs = coboundary(cup(f, g))
    rhs = add(cup(coboundary(f), g), cup(f, coboundary(g)))
    return lhs == rhs


def _in_boundary(cube: Cube) -> bool:
    amb = cube.ambient
    return any(
        not cube.direction >> i & 1 and c in (amb.lo, amb.hi)
        for i, c in enumerate(cube.root)
    )


def boundary_sum(f: Chain) -> tuple:
    """F2 sums of the coboundary over top cubes and of f over boundary cubes.

    The two parities agree: an interior codimension-one cube has two cofaces
    which cancel, a boundary one has a single coface.
    """
    amb = f.ambient
    if amb.kind != DISCRETE:
        raise ValueError("boundary sums are defined on the discrete cube")
    if f.dim != amb.n - 1:
        raise ValueError(f"expected an {amb.n - 1}-cochain, got dimension {f.dim}")
    df = coboundary(f)
    first = len(df.cubes) & 1
    second = sum(1 for tau in f.cubes if _in_boundary(tau)) & 1
    if first != second:
        raise AssertionError(f"parities differ: {first} vs {second}")
    return first, second


def _full_zero_cochain(ambient: Ambient) -> Chain:
    return chain(ambient, 0, all_cubes(ambient, 0))


def products_induction_counts(hs) -> tuple:
    """Counts (s, t) of product-supporting top cubes and boundary cubes.

    s counts n-cubes where the product of the coboundaries of the given
    0-cochains is 1; t counts boundary (n-1)-cubes where the first 0-cochain
    is 1 at the root and the product of the remaining coboundaries is 1.
    The parities agree.
    """
    hs = list(hs)
    amb = hs[0].ambient
    if amb.kind != DISCRETE:
        raise ValueError("induction counts are defined on the discrete cube")
    if len(hs) != amb.n or any(h.dim != 0 for h in hs):
        raise ValueError(f"expected {amb.n} cochains of dimension 0")
    fs = [coboundary(h) for h in hs]
    s = len(multi_cup(fs).cubes)
    rest = multi_cup(fs[1:]) if len(fs) > 1 else _full_zero_cochain(amb)
    t = 0
    for tau in all_cubes(amb, amb.n - 1):
        if not _in_boundary(tau):
            continue
        if lambda_face(tau, tau.direction, 0) in hs[0] and tau in rest:
            t += 1
    if (s - t) % 2 != 0:
        raise AssertionError(f"counts {s} and {t} differ modulo 2")
    return s, t


def _check_cochain_face_conditions(hs) -> None:
    amb = hs[0].ambient
    for i, h in enumerate(hs):
        for p in face_set(amb, i, "low"):
            if point_cube(amb, p) not in h:
                raise PreconditionError(
                    "low face values", f"cochain {i} is 0 at {p} on the low face of axis {i}"
                )
        for p in face_set(amb, i, "high"):
            if point_cube(amb, p) in h:
                raise PreconditionError(
                    "high face values", f"cochain {i} is 1 at {p} on the high face of axis {i}"
                )


def products_faces_count(hs) -> int:
    """The number of n-cubes supporting the product of the coboundaries.

    Requires each 0-cochain to be 1 on its low face and 0 on its high face;
    the count is then odd.
    """
    hs = list(hs)
    amb = hs[0].ambient
    if amb.kind != DISCRETE:
        raise ValueError("face counts are defined on the discrete cube")
    if len(hs) != amb.n or any(h.dim != 0 for h in hs):
        raise ValueError(f"expected {amb.n} cochains of dimension 0")
    _check_cochain_face_conditions(hs)
    s = len(multi_cup([coboundary(h) for h in hs]).cubes)
    if s % 2 == 0:
        raise AssertionError(f"even count {s} of product-supporting cubes")
    return s


def _check_kuhn_conditions(ambient: Ambient, cs) -> None:
    if ambient.kind != DISCRETE:
        raise ValueError("labeling lemmas are defined on the discrete cube")
    if len(cs) != ambient.n:
        raise PreconditionError("count", f"expected {ambient.n} sets, got {len(cs)}")
    for i, c in enumerate(cs):
        for p in face_set(ambient, i, "low"):
            if p not in c:
                raise PreconditionError(
                    "low face containment",
                    f"point {p} of the low face of axis {i} is outside set {i}",
                )
        for p in face_set(ambient, i, "high"):
            if p in c:
                raise PreconditionError(
                    "high face disjointness",
                    f"point {p} of the high face of axis {i} lies in set {i}",
                )


def kuhn_witnesses(ambient: Ambient, cs) -> list:
    """All pivot sequences whose i-th step crosses between set i and its
    complement; under the face conditions the list has odd length."""
    cs = list(cs)
    _check_kuhn_conditions(ambient, cs)
    n = ambient.n
    out = []
    for sigma in all_cubes(ambient, n):
        for seq in pivot_sequences(sigma):
            if all((seq[j] in cs[j]) != (seq[j + 1] in cs[j]) for j in range(n)):
                out.append(seq)
    if len(out) % 2 == 0:
        raise AssertionError(f"even number {len(out)} of crossing pivot sequences")
    return out


@dataclass(frozen=True)
class KuhnLabeling:
    """Per-axis binary labels on the discrete cube, stored as the zero-sets."""

    ambient: Ambient
    sets: tuple

    def __post_init__(self):
        if self.ambient.kind != DISCRETE:
            raise ValueError("labelings are defined on the discrete cube")
        if len(self.sets) != self.ambient.n:
            raise ValueError(f"expected {self.ambient.n} sets, got {len(self.sets)}")
        for c in self.sets:
            for p in c:
                if not self.ambient.is_point(p):
                    raise ValueError(f"{p} is not a point of the ambient")

    def bits(self, v) -> tuple:
        """The label vector of a point: 0 on axes whose set contains it."""
        return tuple(0 if v in c else 1 for c in self.sets)

    def check_faces(self) -> None:
        _check_kuhn_conditions(self.ambient, self.sets)


def kuhn_labeling(ambient: Ambient, sets) -> KuhnLabeling:
    return KuhnLabeling(ambient, tuple(frozenset(c) for c in sets))


@dataclass(frozen=True)
class ReducedLabeling:
    """The single label picking the first set containing a point.

    Labels run from 0 to n; label n marks the points outside every set.
    """

    ambient: Ambient
    sets: tuple

    def label(self, v) -> int:
        for i, c in enumerate(self.sets):
            if v in c:
                return i
        return len(self.sets)

    def parts(self) -> list:
        """The preimages of the labels 0..n; a partition of the points."""
        out = [set() for _ in range(len(self.sets) + 1)]
        for p in all_points(self.ambient):
            out[self.label(p)].add(p)
        return [frozenset(part) for part in out]


def reduced_labeling(ambient: Ambient, cs) -> ReducedLabeling:
    return ReducedLabeling(ambient, tuple(frozenset(c) for c in cs))


def kuhn_strong_count(ambient: Ambient, cs) -> int:
    """The number of pivot sequences carrying every reduced label once.

    Requires the face conditions; the count is then odd.
    """
    cs = list(cs)
    _check_kuhn_conditions(ambient, cs)
    r = reduced_labeling(ambient, cs)
    want = frozenset(range(len(cs) + 1))
    count = 0
    for sigma in all_cubes(ambient, ambient.n):
        for seq in pivot_sequences(sigma):
            if frozenset(r.label(v) for v in seq) == want:
                count += 1
    if count % 2 == 0:
        raise AssertionError(f"even number {count} of fully labeled pivot sequences")
    return count
