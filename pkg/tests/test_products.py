"""Cup products of cochains, the boundary parity lemma, and the cubical
labeling lemmas with odd witness counts."""

import itertools

import pytest

from cubelab.chains import chain, coboundary, zero
from cubelab.cubecore import Cube, all_cubes, all_points, discrete_cube, mask_of, pivot_sequences, point_cube
from cubelab.errors import PreconditionError
from cubelab.gen import Lcg64, random_cochain, random_kuhn_sets
from cubelab.products import (
    boundary_sum,
    cup,
    cup_faces,
    kuhn_labeling,
    kuhn_strong_count,
    kuhn_witnesses,
    leibniz_check,
    multi_cup,
    products_faces_count,
    products_induction_counts,
    reduced_labeling,
)
from cubelab.tilings import wh_tilings_count


def zero_cochain_from_points(ambient, points):
    return chain(ambient, 0, [point_cube(ambient, p) for p in points])


def low_face_indicator(ambient, axis):
    """The 0-cochain set to 1 exactly on the low face of the axis."""
    points = [p for p in all_points(ambient) if p[axis] == 0]
    return zero_cochain_from_points(ambient, points)


def edge_between(ambient, u, v):
    axis = [i for i in range(len(u)) if u[i] != v[i]]
    assert len(axis) == 1
    root = tuple(min(a, b) for a, b in zip(u, v))
    return Cube(ambient, root, mask_of(axis))


def test_cup_of_basis_coboundaries_hits_one_square():
    amb = discrete_cube(2, 1)
    f = coboundary(low_face_indicator(amb, 0))
    g = coboundary(low_face_indicator(amb, 1))
    fg = cup(f, g)
    assert len(fg.cubes) == 1
    square = next(iter(fg.cubes))
    assert square.dim == 2


def test_cup_with_zero_is_zero():
    amb = discrete_cube(2, 2)
    rng = Lcg64(11)
    f = random_cochain(amb, 1, rng)
    assert cup(f, zero(amb, 1)) == zero(amb, 2)
    assert cup(zero(amb, 0), f) == zero(amb, 1)


def test_cup_formulas_agree():
    rng = Lcg64(29)
    for n, k in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]:
        amb = discrete_cube(n, k)
        for _ in range(30):
            p = rng.randrange(n + 1)
            q = rng.randrange(n + 1 - p)
            f = random_cochain(amb, p, rng)
            g = random_cochain(amb, q, rng)
            assert cup(f, g) == cup_faces(f, g) == multi_cup([f, g])


def test_cup_dimension_and_ambient_errors():
    amb = discrete_cube(2, 1)
    rng = Lcg64(3)
    f = random_cochain(amb, 1, rng)
    with pytest.raises(ValueError, match="exceeds"):
        cup(f, random_cochain(amb, 2, rng))
    with pytest.raises(ValueError, match="different ambients"):
        cup(f, zero(discrete_cube(2, 2), 1))
    with pytest.raises(ValueError, match="empty product"):
        multi_cup([])


def test_multi_cup_associativity():
    rng = Lcg64(47)
    for _ in range(40):
        n = 3 + rng.randrange(2)
        amb = discrete_cube(n, 1)
        dims = [1, 1, rng.randrange(2)]
        f, g, h = (random_cochain(amb, d, rng) for d in dims)
        left = cup(cup(f, g), h)
        right = cup(f, cup(g, h))
        assert left == right == multi_cup([f, g, h])


def test_multi_cup_of_line_cochains_counts_pivot_sequences():
    """On n 1-cochains the product value is the parity of pivot sequences
    whose i-th step lies in the i-th cochain."""
    rng = Lcg64(83)
    for _ in range(20):
        n, k = 2 + rng.randrange(2), 1 + rng.randrange(2)
        amb = discrete_cube(n, k)
        fs = [random_cochain(amb, 1, rng) for _ in range(n)]
        prod = multi_cup(fs)
        for sigma in all_cubes(amb, n):
            count = 0
            for seq in pivot_sequences(sigma):
                if all(
                    edge_between(amb, seq[j], seq[j + 1]) in fs[j] for j in range(n)
                ):
                    count += 1
            assert (sigma in prod) == (count % 2 == 1)


def test_leibniz_exhaustive_small():
    amb = discrete_cube(2, 1)
    points = list(all_points(amb))
    for abits in range(16):
        f = zero_cochain_from_points(amb, [p for i, p in enumerate(points) if abits >> i & 1])
        for bbits in range(16):
            g = zero_cochain_from_points(amb, [p for i, p in enumerate(points) if bbits >> i & 1])
            assert leibniz_check(f, g)


def test_leibniz_random_and_cocycle_case():
    rng = Lcg64(61)
    for _ in range(60):
        n = 3 + rng.randrange(2)
        amb = discrete_cube(n, 1)
        p = rng.randrange(n - 1)
        q = rng.randrange(n - p)
        f = random_cochain(amb, p, rng)
        g = random_cochain(amb, q, rng)
        assert leibniz_check(f, g)

    amb = discrete_cube(3, 2)
    for _ in range(10):
        f = coboundary(random_cochain(amb, 0, rng))
        g = random_cochain(amb, 1, rng)
        assert coboundary(cup(f, g)) == cup(f, coboundary(g))


def test_boundary_sum_cases():
    amb = discrete_cube(2, 2)
    interior = chain(amb, 1, [Cube(amb, (1, 0), mask_of([1]))])
    assert boundary_sum(interior) == (0, 0)
    on_edge = chain(amb, 1, [Cube(amb, (0, 0), mask_of([1]))])
    assert boundary_sum(on_edge) == (1, 1)

    rng = Lcg64(121)
    amb = discrete_cube(3, 2)
    for _ in range(20):
        f = random_cochain(amb, 2, rng)
        first, second = boundary_sum(f)
        assert first == second

    with pytest.raises(ValueError, match="dimension"):
        boundary_sum(zero(amb, 1))


def test_products_induction_counts():
    amb = discrete_cube(1, 1)
    h = zero_cochain_from_points(amb, [(0,)])
    assert products_induction_counts([h]) == (1, 1)

    assert products_induction_counts([zero(amb, 0)]) == (0, 0)
    amb = discrete_cube(2, 2)
    assert products_induction_counts([zero(amb, 0), zero(amb, 0)]) == (0, 0)

    rng = Lcg64(2020)
    for _ in range(200):
        hs = [random_cochain(amb, 0, rng) for _ in range(2)]
        s, t = products_induction_counts(hs)
        assert (s - t) % 2 == 0


def test_products_faces_basis_instances():
    for n, k in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        amb = discrete_cube(n, k)
        hs = [low_face_indicator(amb, i) for i in range(n)]
        assert products_faces_count(hs) == 1


def test_products_faces_alternating_line():
    amb = discrete_cube(1, 3)
    h = zero_cochain_from_points(amb, [(0,), (2,)])
    assert products_faces_count([h]) == 3


def test_products_faces_random_odd():
    rng = Lcg64(404)
    amb = discrete_cube(3, 2)
    for _ in range(30):
        hs = [
            zero_cochain_from_points(amb, random_kuhn_sets(amb, rng)[i])
            for i in range(3)
        ]
        assert products_faces_count(hs) % 2 == 1


def test_products_faces_preconditions():
    amb = discrete_cube(2, 1)
    good = [low_face_indicator(amb, i) for i in range(2)]
    bad_low = [zero(amb, 0), good[1]]
    with pytest.raises(PreconditionError, match="low face values"):
        products_faces_count(bad_low)
    bad_high = [
        zero_cochain_from_points(amb, list(all_points(amb))),
        good[1],
    ]
    with pytest.raises(PreconditionError, match="high face values"):
        products_faces_count(bad_high)


def test_kuhn_witnesses_hand_cases():
    amb = discrete_cube(1, 2)
    assert kuhn_witnesses(amb, [frozenset({(0,), (1,)})]) == [((1,), (2,))]

    amb = discrete_cube(2, 1)
    cs = [
        frozenset({(0, 0), (0, 1)}),
        frozenset({(0, 0), (1, 0)}),
    ]
    assert kuhn_witnesses(amb, cs) == [((0, 0), (1, 0), (1, 1))]


def test_kuhn_witnesses_random_oddness_and_membership():
    rng = Lcg64(777)
    amb = discrete_cube(2, 2)
    for _ in range(50):
        cs = random_kuhn_sets(amb, rng)
        witnesses = kuhn_witnesses(amb, cs)
        assert len(witnesses) % 2 == 1
        for seq in witnesses:
            for j in range(2):
                assert (seq[j] in cs[j]) != (seq[j + 1] in cs[j])
            lo = tuple(min(x) for x in zip(*seq))
            vertices = [
                tuple(lo[i] + b[i] for i in range(2))
                for b in itertools.product((0, 1), repeat=2)
            ]
            for c in cs:
                assert any(v in c for v in vertices)
                assert any(v not in c for v in vertices)


def test_kuhn_precondition_errors():
    amb = discrete_cube(2, 1)
    good = [frozenset({(0, 0), (0, 1)}), frozenset({(0, 0), (1, 0)})]
    with pytest.raises(PreconditionError, match="count"):
        kuhn_witnesses(amb, good[:1])
    with pytest.raises(PreconditionError, match="low face containment"):
        kuhn_witnesses(amb, [frozenset(), good[1]])
    with pytest.raises(PreconditionError, match="high face disjointness"):
        kuhn_witnesses(amb, [frozenset({(0, 0), (0, 1), (1, 0)}), good[1]])


def test_kuhn_labeling_bits():
    amb = discrete_cube(2, 1)
    lab = kuhn_labeling(amb, [{(0, 0), (0, 1)}, {(0, 0), (1, 0)}])
    lab.check_faces()
    assert lab.bits((0, 0)) == (0, 0)
    assert lab.bits((1, 1)) == (1, 1)
    assert lab.bits((0, 1)) == (0, 1)
    with pytest.raises(ValueError, match="not a point"):
        kuhn_labeling(amb, [{(5, 5)}, set()])


def test_reduced_labeling_rules():
    amb = discrete_cube(2, 2)
    cs = [frozenset({(0, 0), (1, 1)}), frozenset({(1, 1), (2, 2)})]
    r = reduced_labeling(amb, cs)
    assert r.label((0, 0)) == 0
    assert r.label((1, 1)) == 0
    assert r.label((2, 2)) == 1
    assert r.label((2, 0)) == 2

    parts = r.parts()
    assert len(parts) == 3
    everything = set()
    for part in parts:
        assert not everything & part
        everything |= part
    assert everything == set(all_points(amb))


def test_kuhn_strong_count_hand_cases():
    amb = discrete_cube(1, 1)
    assert kuhn_strong_count(amb, [frozenset({(0,)})]) == 1

    amb = discrete_cube(2, 1)
    cs = [frozenset({(0, 0), (0, 1)}), frozenset({(0, 0), (1, 0)})]
    assert kuhn_strong_count(amb, cs) == 1


def test_kuhn_strong_count_matches_window_count():
    rng = Lcg64(366)
    for _ in range(50):
        amb = discrete_cube(2, 1 + rng.randrange(2))
        cs = random_kuhn_sets(amb, rng)
        count = kuhn_strong_count(amb, cs)
        assert count % 2 == 1
        assert count == wh_tilings_count(reduced_labeling(amb, cs).parts())
