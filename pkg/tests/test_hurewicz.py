"""Box tilings, the segment structure of n-fold intersections of tiled sets,
parity counts, and the boundary path follower."""

from fractions import Fraction as F

import pytest

from cubelab.errors import PreconditionError
from cubelab.gen import Lcg64, random_tiled_covering, random_tiled_partition, random_tiling
from cubelab.hurewicz import (
    BoxTiling,
    TiledSet,
    clipped_tiling,
    collecting_tiled_sets_witness,
    face_box,
    face_tiling,
    follow_path,
    hurewicz_lemma_witness,
    intersection_structure,
    parity_count,
    path_witness,
    refine,
    segment_endpoints,
    tiled_set,
    trivial_tiling,
    validate_tiling,
)
from cubelab.tilings import box, default_params, tiling_params


def build(domain_pairs, tile_pairs):
    return BoxTiling(box(domain_pairs), tuple(box(p) for p in tile_pairs))


def quarters_line():
    """[0,1] cut into four quarter tiles."""
    return build(
        [(0, 1)],
        [[(0, F(1, 4))], [(F(1, 4), F(1, 2))], [(F(1, 2), F(3, 4))], [(F(3, 4), 1)]],
    )


def on_domain_boundary(domain, p):
    return any(
        x == lo or x == hi for x, (lo, hi) in zip(p, domain.intervals) if lo < hi
    )


def recount_endpoint_kinds(sets, segments):
    """Recompute (boundary, full, interior) endpoint counts from the raw
    segment list, independent of the classification in the structure map."""
    domain = sets[0].tiling.domain
    degree = {}
    for seg in segments:
        for p in segment_endpoints(seg):
            degree[p] = degree.get(p, 0) + 1
    e = h = r = 0
    for p in degree:
        if on_domain_boundary(domain, p):
            e += 1
        elif all(s.contains_point(p) for s in sets):
            h += 1
        else:
            r += 1
    return e, h, r


def test_trivial_and_split_tilings_validate():
    assert validate_tiling(trivial_tiling(box([(0, 1)]))).ok
    assert validate_tiling(trivial_tiling(box([(0, 1), (0, 1)]))).ok
    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    assert validate_tiling(t).ok


def test_grid_counterexample_rejected():
    half = F(1, 2)
    squares = [
        [(0, half), (0, half)],
        [(half, 1), (0, half)],
        [(0, half), (half, 1)],
        [(half, 1), (half, 1)],
    ]
    report = validate_tiling(build([(0, 1), (0, 1)], squares))
    assert not report.ok
    assert report.clause == "point in too many tiles"
    assert report.witness == (0, 1, 2, 3)


def test_validator_clause_order():
    short = build([(0, 1)], [[(0, F(1, 2))]])
    assert validate_tiling(short).clause == "covering"

    overlapping = build([(0, F(4, 3))], [[(0, F(2, 3))], [(F(1, 3), 1)]])
    assert validate_tiling(overlapping).clause == "interior overlap"

    half = F(1, 2)
    slabs = [
        [(0, half), (0, half), (0, 1)],
        [(half, 1), (0, half), (0, 1)],
        [(0, half), (half, 1), (0, 1)],
        [(half, 1), (half, 1), (0, 1)],
    ]
    report = validate_tiling(build([(0, 1)] * 3, slabs))
    assert not report.ok
    assert report.clause == "intersection shape"


def test_boxtiling_construction_errors():
    with pytest.raises(ValueError, match="leaves the domain"):
        build([(0, 1)], [[(0, 2)]])
    with pytest.raises(ValueError, match="full-dimensional"):
        build([(0, 1)], [[(F(1, 2), F(1, 2))]])
    with pytest.raises(ValueError, match="axis count"):
        build([(0, 1)], [[(0, 1), (0, 1)]])


def test_refine_hand_cases():
    t = refine(trivial_tiling(box([(0, 1)])), 0, 0, F(1, 2))
    assert sorted(b.intervals for b in t.tiles) == [
        ((0, F(1, 2)),),
        ((F(1, 2), 1),),
    ]
    t = refine(t, 0, 0, F(1, 4))
    assert len(t.tiles) == 3 and validate_tiling(t).ok

    with pytest.raises(ValueError, match="not inside"):
        refine(t, 0, 0, F(3, 4))
    with pytest.raises(ValueError, match="carries a face"):
        two = build([(0, 1), (0, 1)], [[(0, 1), (0, F(1, 2))], [(0, 1), (F(1, 2), 1)]])
        three = refine(two, 0, 0, F(1, 3))
        refine(three, 2, 0, F(1, 3))


def test_subdivision_halves_diameter():
    def diam(b):
        return max(hi - lo for lo, hi in b.intervals)

    t = trivial_tiling(box([(0, 1), (0, 1)]))
    for _ in range(64):
        if max(diam(b) for b in t.tiles) <= F(1, 2):
            break
        idx = max(range(len(t.tiles)), key=lambda i: diam(t.tiles[i]))
        axis = max(range(2), key=lambda a: t.tiles[idx].intervals[a][1] - t.tiles[idx].intervals[a][0])
        lo, hi = t.tiles[idx].intervals[axis]
        for num in (32, 31, 33, 29, 35, 27, 37):
            level = lo + (hi - lo) * F(num, 64)
            if all(level not in u.intervals[axis] for u in t.tiles):
                t = refine(t, idx, axis, level)
                break
        else:
            raise AssertionError("no admissible level near the midpoint")
    assert max(diam(b) for b in t.tiles) <= F(1, 2)
    assert validate_tiling(t).ok


def test_face_tiling_counts():
    square = box([(0, 1), (0, 1)])
    t = trivial_tiling(square)
    assert face_tiling(t, 0, "low").tiles == (face_box(square, 0, "low"),)

    split = refine(t, 0, 0, F(1, 2))
    assert len(face_tiling(split, 0, "low").tiles) == 1
    assert len(face_tiling(split, 0, "high").tiles) == 1
    assert len(face_tiling(split, 1, "low").tiles) == 2
    assert len(face_tiling(split, 1, "high").tiles) == 2


def test_face_tilings_validate_on_random_instances():
    rng = Lcg64(401)
    for _ in range(50):
        t = random_tiling(2, rng, extra=rng.randrange(5))
        for axis in range(2):
            for side in ("low", "high"):
                ft = face_tiling(t, axis, side)
                report = validate_tiling(ft)
                assert report.ok, report.clause
                assert ft.dim == 1


def test_clipped_lattice_tilings_validate():
    cases = [
        (box([(0, 2)]), default_params(1), 2),
        (box([(0, 2), (0, 2)]), default_params(2), 5),
        (box([(0, 2), (0, 2)]), tiling_params((F(-1, 3),)), 5),
        (box([(0, F(3, 2))] * 3), default_params(3), 8),
        (box([(0, 2)] * 3), default_params(3), 14),
    ]
    for window, params, count in cases:
        t = clipped_tiling(window, params)
        assert len(t.tiles) == count
        report = validate_tiling(t)
        assert report.ok, report.clause


def test_clipped_tiling_rejects_bad_windows():
    with pytest.raises(ValueError, match="axis count"):
        clipped_tiling(box([(0, 1)]), default_params(2))
    with pytest.raises(ValueError, match="full-dimensional"):
        clipped_tiling(box([(0, 1), (1, 1)]), default_params(2))


def test_intersection_structure_on_a_line():
    t = quarters_line()
    e1 = tiled_set(t, {0, 2})
    e2 = tiled_set(t, {1, 3})
    segments, endpoints = intersection_structure([e1, e2])
    assert sorted(s.intervals for s in segments) == [
        ((0, F(1, 4)),),
        ((F(1, 2), F(3, 4)),),
    ]
    kinds = {p: e.kind for p, e in endpoints.items()}
    assert kinds == {
        (0,): "boundary",
        (F(1, 4),): "full",
        (F(1, 2),): "full",
        (F(3, 4),): "full",
    }
    assert all(e.degree == 1 for e in endpoints.values())


def test_parity_count_hand_cases():
    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    assert parity_count([tiled_set(t, {0}), tiled_set(t, {1})]) == 1

    quarters = quarters_line()
    assert parity_count([tiled_set(quarters, {0, 2}), tiled_set(quarters, {1, 3})]) == 3


def test_parity_and_euler_identity_on_random_instances():
    rng = Lcg64(1009)
    for _ in range(100):
        t = random_tiling(2, rng, extra=rng.randrange(6))
        parts = random_tiled_partition(t, rng)
        count = parity_count(parts)
        assert count % 2 == 1

        segments, endpoints = intersection_structure(parts)
        e, h, r = recount_endpoint_kinds(parts, segments)
        assert h == count
        assert e + h + 2 * r == 2 * len(segments)
        by_kind = {"boundary": 0, "full": 0, "interior": 0}
        for info in endpoints.values():
            by_kind[info.kind] += 1
        assert (e, h, r) == (by_kind["boundary"], by_kind["full"], by_kind["interior"])


def test_full_endpoints_lie_in_three_tiles():
    rng = Lcg64(515)
    for _ in range(30):
        t = random_tiling(2, rng, extra=rng.randrange(5))
        parts = random_tiled_partition(t, rng)
        _, endpoints = intersection_structure(parts)
        for p, info in endpoints.items():
            if info.kind == "full":
                owners = [b for b in t.tiles if b.contains(p)]
                assert len(owners) == 3


def test_follow_path_on_a_line():
    quarters = quarters_line()
    parts = [tiled_set(quarters, {0, 2}), tiled_set(quarters, {1, 3})]
    assert follow_path(parts, (0,)) == (F(1, 4),)

    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    parts = [tiled_set(t, {0}), tiled_set(t, {1})]
    assert follow_path(parts, (0,)) == (F(1, 2),)


def test_follow_path_start_validation():
    quarters = quarters_line()
    parts = [tiled_set(quarters, {0, 2}), tiled_set(quarters, {1, 3})]
    with pytest.raises(PreconditionError, match="start"):
        follow_path(parts, (F(1, 8),))
    with pytest.raises(PreconditionError, match="start"):
        follow_path(parts, (F(1, 4),))

    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    backwards = [tiled_set(t, {1}), tiled_set(t, {0})]
    with pytest.raises(PreconditionError, match="start"):
        follow_path(backwards, (1,))


def test_follow_path_terminals_and_parity():
    rng = Lcg64(88)
    saw_unreachable = False
    for _ in range(60):
        n = 1 + rng.randrange(2)
        t = random_tiling(n, rng, extra=rng.randrange(5))
        parts = random_tiled_partition(t, rng)
        segments, endpoints = intersection_structure(parts)
        full = {p for p, info in endpoints.items() if info.kind == "full"}
        reached = set()
        for p, info in endpoints.items():
            if info.kind == "boundary":
                q = follow_path(parts, p)
                if q is not None:
                    reached.add(q)
        assert reached <= full
        assert len(reached) % 2 == 1
        for q in reached:
            assert all(s.contains_point(q) for s in parts)
        if reached < full:
            saw_unreachable = True
    assert saw_unreachable


def test_walk_never_revisits_a_segment():
    rng = Lcg64(313)
    for _ in range(40):
        n = 1 + rng.randrange(2)
        t = random_tiling(n, rng, extra=rng.randrange(5))
        parts = random_tiled_partition(t, rng)
        segments, endpoints = intersection_structure(parts)
        at = {}
        for i, seg in enumerate(segments):
            for p in segment_endpoints(seg):
                at.setdefault(p, []).append(i)
        for start, info in endpoints.items():
            if info.kind != "boundary":
                continue
            visited = set()
            prev, current = start, at[start][0]
            terminal = None
            while True:
                assert current not in visited
                visited.add(current)
                a, b = segment_endpoints(segments[current])
                nxt = b if a == prev else a
                if endpoints[nxt].kind == "full":
                    terminal = nxt
                    break
                if endpoints[nxt].kind == "boundary":
                    break
                first, second = at[nxt]
                current = second if first == current else first
                prev = nxt
            assert follow_path(parts, start) == terminal


def test_path_witness_lexicographic_start():
    quarters = quarters_line()
    parts = [tiled_set(quarters, {0, 2}), tiled_set(quarters, {1, 3})]
    start, point = path_witness(parts)
    assert start == (0,)
    assert point == (F(1, 4),)


def test_hurewicz_lemma_disjoint_matches_path():
    rng = Lcg64(222)
    for _ in range(20):
        t = random_tiling(2, rng, extra=rng.randrange(4))
        parts = random_tiled_partition(t, rng)
        assert hurewicz_lemma_witness(parts) == path_witness(parts)[1]


def test_hurewicz_lemma_overlapping_line():
    t = quarters_line()
    d1 = tiled_set(t, {0, 1, 2})
    d2 = tiled_set(t, {1, 2, 3})
    point = hurewicz_lemma_witness([d1, d2])
    assert d1.contains_point(point) and d2.contains_point(point)


def test_hurewicz_lemma_random_coverings():
    rng = Lcg64(606)
    for _ in range(100):
        t = random_tiling(2, rng, extra=rng.randrange(5))
        cover = random_tiled_covering(t, rng)
        point = hurewicz_lemma_witness(cover)
        assert all(d.contains_point(point) for d in cover)


def test_structure_and_lemma_preconditions():
    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    left, right = tiled_set(t, {0}), tiled_set(t, {1})

    with pytest.raises(PreconditionError, match="count"):
        intersection_structure([left, right, right])
    with pytest.raises(PreconditionError, match="essential disjointness"):
        intersection_structure([left, tiled_set(t, {0, 1})])
    wide = build([(0, 1)], [[(0, F(1, 3))], [(F(1, 3), F(2, 3))], [(F(2, 3), 1)]])
    with pytest.raises(PreconditionError, match="covering"):
        intersection_structure([tiled_set(wide, {0}), tiled_set(wide, {1})])
    other = build([(0, 1)], [[(0, F(1, 3))], [(F(1, 3), 1)]])
    with pytest.raises(PreconditionError, match="shared tiling"):
        intersection_structure([left, tiled_set(other, {1})])

    with pytest.raises(PreconditionError, match="high face disjointness"):
        parity_count([right, left])
    thirds = build([(0, 1)], [[(0, F(1, 3))], [(F(1, 3), F(2, 3))], [(F(2, 3), 1)]])
    with pytest.raises(PreconditionError, match="previous low face disjointness"):
        parity_count([tiled_set(thirds, {1}), tiled_set(thirds, {0, 2})])
    with pytest.raises(PreconditionError, match="count"):
        hurewicz_lemma_witness([left, right, right])
    with pytest.raises(PreconditionError, match="covering"):
        hurewicz_lemma_witness([left, left])


def test_collecting_tiled_sets_line():
    thirds = build([(0, 1)], [[(0, F(1, 3))], [(F(1, 3), F(2, 3))], [(F(2, 3), 1)]])
    dsets = [tiled_set(thirds, {i}) for i in range(3)]
    point, indices = collecting_tiled_sets_witness(dsets)
    assert point == (F(1, 3),)
    assert indices == (0, 1)
    assert all(dsets[j].contains_point(point) for j in indices)


def test_collecting_tiled_sets_random():
    rng = Lcg64(737)
    for _ in range(40):
        n = 1 + rng.randrange(2)
        t = random_tiling(n, rng, extra=rng.randrange(5))
        groups = [{i} for i in range(len(t.tiles))]
        for _ in range(len(groups)):
            i, j = rng.randrange(len(groups)), rng.randrange(len(groups))
            if i == j:
                continue
            merged = tiled_set(t, groups[i] | groups[j])
            if any(
                merged.meets_face(axis, "low") and merged.meets_face(axis, "high")
                for axis in range(n)
            ):
                continue
            groups[i] = groups[i] | groups[j]
            del groups[j]
        dsets = [tiled_set(t, g) for g in groups]
        point, indices = collecting_tiled_sets_witness(dsets)
        assert len(indices) == n + 1
        assert len(set(indices)) == n + 1
        assert all(dsets[j].contains_point(point) for j in indices)


def test_collecting_preconditions():
    thirds = build([(0, 1)], [[(0, F(1, 3))], [(F(1, 3), F(2, 3))], [(F(2, 3), 1)]])
    with pytest.raises(PreconditionError, match="covering"):
        collecting_tiled_sets_witness([tiled_set(thirds, {0}), tiled_set(thirds, {1})])
    with pytest.raises(PreconditionError, match="opposite faces"):
        collecting_tiled_sets_witness(
            [tiled_set(thirds, {0, 2}), tiled_set(thirds, {1})]
        )


def test_tiled_set_basics():
    t = build([(0, 1)], [[(0, F(1, 2))], [(F(1, 2), 1)]])
    s = tiled_set(t, {0})
    assert s.contains_point((F(1, 4),))
    assert not s.contains_point((F(3, 4),))
    assert s.meets_face(0, "low")
    assert not s.meets_face(0, "high")
    with pytest.raises(ValueError, match="out of range"):
        tiled_set(t, {5})
