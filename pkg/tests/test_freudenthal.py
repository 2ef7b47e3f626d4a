"""Permutation chains, window triangulations, and the simplicial door count."""

import itertools

import pytest

from cubelab.cubecore import discrete_cube, is_pivot_subsequence_set
from cubelab.errors import PreconditionError
from cubelab.freudenthal import (
    canonical_complex,
    identity_permutation,
    in_scaled_region,
    nonbranching_report,
    omega_restrict,
    permutation,
    shuffles,
    simplex_of,
    sperner_count,
)
from cubelab.gen import Lcg64, random_kuhn_sets
from cubelab.products import kuhn_strong_count, reduced_labeling
from cubelab.tilings import nerve


def all_permutations(n):
    return [permutation(images) for images in itertools.permutations(range(n))]


def test_permutation_basics():
    ident = identity_permutation(3)
    assert ident.images == (0, 1, 2)
    assert ident.axis_order() == (0, 1, 2)

    w = permutation((2, 0, 1))
    assert w.rank(0) == 2
    assert w.axis_order() == (1, 2, 0)
    assert w.inverse().images == (1, 2, 0)
    assert w.inverse().inverse() == w

    with pytest.raises(ValueError, match="bijection"):
        permutation((0, 0, 1))


def test_simplex_of_identity_is_prefix_chain():
    chain = simplex_of(identity_permutation(3), (0, 0, 0))
    assert chain == ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))
    assert is_pivot_subsequence_set(chain)


def test_simplex_of_transposition_steps_second_axis_first():
    chain = simplex_of(permutation((1, 0)), (0, 0))
    assert chain == ((0, 0), (0, 1), (1, 1))


def test_simplex_of_general_roots_and_chains():
    for w in all_permutations(3):
        chain = simplex_of(w, (2, 0, 1))
        assert chain[0] == (2, 0, 1)
        assert chain[-1] == (3, 1, 2)
        assert is_pivot_subsequence_set(chain)
        for prev, cur in zip(chain, chain[1:]):
            assert sum(c - p for p, c in zip(prev, cur)) == 1


def test_simplex_of_errors():
    with pytest.raises(ValueError, match="does not match"):
        simplex_of(identity_permutation(2), (0, 0, 0))
    with pytest.raises(ValueError, match="out of range"):
        simplex_of(identity_permutation(2), (0, 2), size=2)


def test_omega_restrict_constant_root_keeps_permutation():
    for w in all_permutations(3):
        for c in range(3):
            assert omega_restrict(w, (c, c, c)) == w


def test_omega_restrict_height_dominates():
    for w in all_permutations(2):
        assert omega_restrict(w, (1, 0)) == identity_permutation(2)
        assert omega_restrict(w, (0, 1)) == permutation((1, 0))


def test_restricted_region_absorbs_exactly_one_simplex():
    """Each translated chain lies in the region of its restricted
    permutation and in no other, partitioning all k^n * n! simplices."""
    for n in (1, 2, 3):
        perms = all_permutations(n)
        for k in (1, 2):
            per_region = {w: 0 for w in perms}
            for a in itertools.product(range(k), repeat=n):
                for w in perms:
                    verts = simplex_of(w, a, size=k)
                    home = omega_restrict(w, a)
                    assert all(in_scaled_region(home, k, v) for v in verts)
                    for other in perms:
                        if other != home:
                            assert not all(
                                in_scaled_region(other, k, v) for v in verts
                            )
                    per_region[home] += 1
            assert sum(per_region.values()) == k**n * len(perms)


def test_in_scaled_region_bounds():
    ident = identity_permutation(2)
    assert in_scaled_region(ident, 2, (2, 1))
    assert not in_scaled_region(ident, 2, (1, 2))
    assert not in_scaled_region(ident, 2, (3, 0))
    with pytest.raises(ValueError, match="does not match"):
        in_scaled_region(ident, 2, (1,))


def test_shuffles_counts_and_blocks():
    assert [w.images for w in shuffles(0, 3)] == [(0, 1, 2)]
    assert sorted(w.images for w in shuffles(1, 1)) == [(0, 1), (1, 0)]
    for n in range(1, 5):
        for q in range(n + 1):
            got = shuffles(n - q, q)
            assert len(got) == len(set(got))
            assert len(got) == len(list(itertools.combinations(range(n), q)))
            for w in got:
                assert list(w.images[:q]) == sorted(w.images[:q])
                assert list(w.images[q:]) == sorted(w.images[q:])
    with pytest.raises(ValueError, match="nonnegative"):
        shuffles(-1, 2)


def test_doubled_window_simplices_are_shuffles():
    """Over the side-2 window the chains restricting to the identity are
    counted by shuffles: 2^n of them, grouped by the ones-prefix root."""
    for n in range(1, 5):
        ident = identity_permutation(n)
        pairs = [
            (a, w)
            for a in itertools.product(range(2), repeat=n)
            for w in all_permutations(n)
            if omega_restrict(w, a) == ident
        ]
        assert len(pairs) == 2**n
        for q in range(n + 1):
            root = (1,) * q + (0,) * (n - q)
            got = sorted(w.images for a, w in pairs if a == root)
            assert got == sorted(w.images for w in shuffles(n - q, q))


def test_canonical_complex_matches_tiling_nerve():
    windows = [
        [(0, 2)],
        [(0, 1), (0, 1)],
        [(0, 2), (0, 2)],
        [(0, 1), (0, 1), (0, 1)],
        [(0, 2), (0, 1)],
        [(0, 0), (0, 2)],
    ]
    for window in windows:
        assert canonical_complex(window) == nerve(window)


def test_canonical_complex_counts():
    assert canonical_complex([(0, 2)]).f_vector() == (3, 2)
    assert canonical_complex([(0, 1), (0, 1)]).f_vector() == (4, 5, 2)
    for n, k in [(2, 2), (3, 1), (3, 2)]:
        comp = canonical_complex([(0, k)] * n)
        tops = [s for s in comp.simplices if len(s) == n + 1]
        assert len(tops) == k**n * len(list(itertools.permutations(range(n))))
        euler = sum((-1) ** (len(s) - 1) for s in comp.simplices)
        assert euler == 1


def test_canonical_complex_axis_swap_invariance():
    comp = canonical_complex([(0, 2), (0, 1)])
    swapped = canonical_complex([(0, 1), (0, 2)])
    mapped = frozenset(
        frozenset(v[::-1] for v in s) for s in comp.simplices
    )
    assert mapped == swapped.simplices


def test_top_simplices_intersect_in_common_faces():
    for window in ([(0, 1), (0, 1)], [(0, 2), (0, 2)], [(0, 1)] * 3):
        comp = canonical_complex(window)
        n = len(window)
        tops = [s for s in comp.simplices if len(s) == n + 1]
        for s, t in itertools.combinations(tops, 2):
            common = s & t
            if common:
                assert common in comp.simplices


def test_nonbranching_reports():
    path = nonbranching_report([(0, 2)])
    assert (path.ok, path.interior, path.boundary) == (True, 1, 2)
    assert path.counterexample is None

    square = nonbranching_report([(0, 1), (0, 1)])
    assert (square.ok, square.interior, square.boundary) == (True, 1, 4)

    assert nonbranching_report([(0, 2), (0, 2)]).ok
    assert nonbranching_report([(0, 1), (0, 1), (0, 1)]).ok

    with pytest.raises(ValueError, match="positive"):
        nonbranching_report([(0, 1), (0, 0)])
    with pytest.raises(ValueError, match="at least one axis"):
        nonbranching_report([])


def test_sperner_count_hand_cases():
    amb = discrete_cube(1, 1)
    assert sperner_count(reduced_labeling(amb, [{(0,)}])) == 1

    amb2 = discrete_cube(2, 1)
    cs = [frozenset({(0, 0), (0, 1)}), frozenset({(0, 0), (1, 0)})]
    assert sperner_count(reduced_labeling(amb2, cs)) == 1

    amb3 = discrete_cube(1, 2)
    assert sperner_count(reduced_labeling(amb3, [{(0,)}])) == 1
    assert sperner_count(reduced_labeling(amb3, [{(0,), (1,)}])) == 1


def test_sperner_count_matches_pivot_sequence_oracle():
    rng = Lcg64(11)
    for k in (1, 2):
        amb = discrete_cube(2, k)
        for _ in range(25):
            cs = random_kuhn_sets(amb, rng)
            count = sperner_count(reduced_labeling(amb, cs))
            assert count % 2 == 1
            assert count == kuhn_strong_count(amb, cs)
    amb = discrete_cube(3, 1)
    for _ in range(5):
        cs = random_kuhn_sets(amb, rng)
        assert sperner_count(reduced_labeling(amb, cs)) == kuhn_strong_count(amb, cs)


def test_sperner_count_preconditions():
    amb = discrete_cube(2, 1)
    with pytest.raises(PreconditionError, match="count"):
        sperner_count(reduced_labeling(amb, [{(0, 0), (0, 1)}]))
    with pytest.raises(PreconditionError, match="low face containment"):
        sperner_count(reduced_labeling(amb, [frozenset(), {(0, 0), (1, 0)}]))
