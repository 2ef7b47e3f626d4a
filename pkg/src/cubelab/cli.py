"""Batch interface over the cube theorems: one JSON instance in, one record out.

Commands
--------
Sixteen subcommands cover the witness constructions, the parity counts, the
nerve exports, and a seeded self test.  Every run reads one instance (from
--input, --inline, or the --n/--k/--seed flags plus a seeded generator),
executes one operation, re-verifies any returned witness, and prints one
result record.

Instance files
--------------
A JSON object with up to four keys::

    {"schema": 1,
     "ambient": {"kind": "discrete", "n": 2, "size": 1},
     "payload": {"sets": [[[0, 0], [0, 1]], [[0, 0], [1, 0]]]},
     "seed": 7}

"n" counts coordinates; "size" also accepts the aliases "k" and "l".
Points are integer lists, cubes are {"root": [...], "axes": [...]} objects,
rationals are "p/q" strings (plain integers when the denominator is 1).
The payload keys each command reads are listed in its --help epilog.

Result records
--------------
A JSON object {"command", "verdict", "counts", "witnesses", "timing"}.  The
verdict is "ok" or "violation"; violations carry {"error": {"clause",
"witness"}} naming the failed precondition clause, malformed input gets
verdict "malformed" with a detail string.  Text format prints the same
record as "key: value" lines, except the nerve and complex exports, which
print one simplex per line: vertices comma-joined and separated by
semicolons, faces sorted by size then lexicographically.  Records are
deterministic for a fixed instance and seed; only the timing field varies.

Exit status
-----------
0 on success, 1 on a violated precondition or a failed internal identity,
2 on malformed input.

Randomness
----------
Seeded fallback instances and the self test draw from the 64-bit linear
congruential generator with multiplier 6364136223846793005 and increment
1442695040888963407, taking the top 32 bits per draw, so a fixed seed
reproduces the record byte for byte.  The CUBELAB_THREADS environment
variable caps the self test worker threads; the record does not depend on
the thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .chains import Chain, boundary, chain, coboundary, pairing
from .cubecore import (
    BIGSPHERE,
    DISCRETE,
    SOLID,
    SPHERE,
    SYMMETRIC,
    Ambient,
    Cube,
    all_cubes,
    all_points,
    antipode_cube,
    antipode_point,
    axes_of,
    big_sphere,
    discrete_cube,
    mask_of,
    point_cube,
    solid_cube,
    sphere_grid,
    symmetric_cube,
)
from .duality import (
    cubes_intersections_bridge,
    dual_boundary_check,
    dual_hypersurfaces,
    dual_pair,
    face_duality_check,
    star_cube,
    star_set,
    transported_witnesses,
    transversality_check,
    unstar_chain,
)
from .errors import PreconditionError
from .freudenthal import (
    canonical_complex,
    in_scaled_region,
    nonbranching_report,
    permutation,
    simplex_of,
    sperner_count,
)
from .gen import (
    Lcg64,
    random_admissible_sets,
    random_antipodal_complement_set,
    random_asymmetric_cochain,
    random_box_covering,
    random_cochain,
    random_kuhn_sets,
    random_threshold_map,
    random_tiled_covering,
    random_tiled_partition,
    random_tiling,
    random_window_covering,
    random_window_partition,
)
from .hurewicz import (
    BoxTiling,
    TiledSet,
    collecting_tiled_sets_witness,
    hurewicz_lemma_witness,
    parity_count,
    path_witness,
    refine,
    validate_tiling,
)
from .kyfan import GridMap, bijection_iff_product, grid_map, kuhn_via_kyfan, kyfan_counts, threshold_map
from .lebesgue import (
    CubicalSet,
    collecting_sets_witness,
    covers_face,
    cubes_partitions_witness,
    cubical_set,
    e_coverings_witness,
    fuse,
)
from .products import (
    kuhn_labeling,
    kuhn_strong_count,
    kuhn_witnesses,
    products_faces_count,
    products_induction_counts,
    reduced_labeling,
)
from .sphere import cube_covers, ls_descent_levels, ls_witness, power_of_generator_pairs
from .tilings import (
    SimplicialComplex,
    box,
    nerve,
    strong_kuhn_nerve_witness,
    wh_tilings_count,
)

SCHEMA = 1

AMBIENT_BUILDERS = {
    SOLID: solid_cube,
    DISCRETE: discrete_cube,
    SYMMETRIC: symmetric_cube,
    SPHERE: sphere_grid,
    BIGSPHERE: big_sphere,
}


class MalformedInput(ValueError):
    """Input that fails to parse or contradicts the declared ambient."""


# ---------------------------------------------------------------------------
# JSON value encoding and decoding


def encode_number(x):
    """Integers stay integers; other rationals become "p/q" strings."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    return int(x)


def decode_number(x):
    if isinstance(x, bool):
        raise MalformedInput(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad rational {x!r}") from exc
    raise MalformedInput(f"expected an integer or a 'p/q' string, got {x!r}")


def encode_point(p):
    return [encode_number(x) for x in p]


def decode_point(obj):
    if not isinstance(obj, (list, tuple)):
        raise MalformedInput(f"a point must be a list of integers, got {obj!r}")
    out = []
    for x in obj:
        if isinstance(x, bool) or not isinstance(x, int):
            raise MalformedInput(f"point coordinate {x!r} is not an integer")
        out.append(x)
    return tuple(out)


def decode_point_set(obj, ambient=None):
    if not isinstance(obj, (list, tuple)):
        raise MalformedInput(f"a point set must be a list of points, got {obj!r}")
    pts = frozenset(decode_point(p) for p in obj)
    if ambient is not None:
        for p in pts:
            if not ambient.is_point(p):
                raise MalformedInput(f"{p} is not a point of the declared ambient")
    return pts


def encode_cube(c: Cube):
    return {"root": encode_point(c.root), "axes": list(c.axes)}


def decode_cube(ambient: Ambient, obj):
    if not isinstance(obj, dict) or set(obj) != {"root", "axes"}:
        raise MalformedInput(f"a cube must be {{'root', 'axes'}}, got {obj!r}")
    root = decode_point(obj["root"])
    axes = obj["axes"]
    if not isinstance(axes, list) or any(isinstance(a, bool) or not isinstance(a, int) for a in axes):
        raise MalformedInput(f"cube axes must be a list of integers, got {axes!r}")
    try:
        return Cube(ambient, root, mask_of(axes))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def decode_cubical_set(ambient: Ambient, obj) -> CubicalSet:
    if not isinstance(obj, (list, tuple)):
        raise MalformedInput(f"a cubical set must be a list of cubes, got {obj!r}")
    return cubical_set(ambient, frozenset(decode_cube(ambient, c) for c in obj))


def encode_sequence(seq):
    return [encode_point(p) for p in seq]


def encode_box(b):
    return [[encode_number(lo), encode_number(hi)] for lo, hi in b.intervals]


def decode_box(obj):
    if not isinstance(obj, (list, tuple)):
        raise MalformedInput(f"a box must be a list of [lo, hi] pairs, got {obj!r}")
    pairs = []
    for pair in obj:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedInput(f"a box interval must be [lo, hi], got {pair!r}")
        pairs.append((decode_number(pair[0]), decode_number(pair[1])))
    try:
        return box(pairs)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def decode_window(obj):
    if not isinstance(obj, (list, tuple)) or not obj:
        raise MalformedInput(f"a window must be a non-empty list of [lo, hi] pairs, got {obj!r}")
    window = []
    for pair in obj:
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in pair)
        ):
            raise MalformedInput(f"a window range must be [lo, hi] integers, got {pair!r}")
        lo, hi = pair
        if lo >= hi:
            raise MalformedInput(f"window range [{lo}, {hi}] has no room for a cell")
        window.append((lo, hi))
    return tuple(window)


def encode_complex(sc: SimplicialComplex):
    rows = sorted((tuple(sorted(s)) for s in sc.simplices), key=lambda v: (len(v), v))
    return [[encode_point(p) for p in verts] for verts in rows]


def complex_lines(sc: SimplicialComplex):
    rows = sorted((tuple(sorted(s)) for s in sc.simplices), key=lambda v: (len(v), v))
    return [";".join(",".join(str(x) for x in p) for p in verts) for verts in rows]


def jsonable(value):
    """Best-effort encoding of arbitrary witness material."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return encode_number(value)
    if isinstance(value, Cube):
        return encode_cube(value)
    if isinstance(value, Chain):
        return {"dim": value.dim, "cubes": [encode_cube(c) for c in sorted(value.cubes, key=lambda c: (c.root, c.axes))]}
    if isinstance(value, (tuple, list, frozenset, set)):
        items = list(value)
        if isinstance(value, (frozenset, set)):
            items = sorted(items, key=repr)
        return [jsonable(v) for v in items]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    return str(value)


# ---------------------------------------------------------------------------
# Instances


def parse_ambient(spec) -> Ambient:
    if not isinstance(spec, dict):
        raise MalformedInput(f"ambient must be an object, got {spec!r}")
    unknown = set(spec) - {"kind", "n", "size", "k", "l"}
    if unknown:
        raise MalformedInput(f"unknown ambient key {sorted(unknown)[0]!r}")
    kind = spec.get("kind")
    if kind not in AMBIENT_BUILDERS:
        raise MalformedInput(f"unknown ambient kind {kind!r}")
    sizes = [spec[key] for key in ("size", "k", "l") if key in spec]
    if "n" not in spec or len(sizes) != 1:
        raise MalformedInput("ambient needs 'n' and exactly one of 'size', 'k', 'l'")
    n, size = spec["n"], sizes[0]
    for x in (n, size):
        if isinstance(x, bool) or not isinstance(x, int):
            raise MalformedInput(f"ambient parameter {x!r} is not an integer")
    try:
        return AMBIENT_BUILDERS[kind](n, size)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def serialize_ambient(ambient: Ambient):
    return {"kind": ambient.kind, "n": ambient.n, "size": ambient.size}


class Instance:
    """One parsed run: optional ambient, payload object, and seed."""

    def __init__(self, ambient, payload, seed):
        self.ambient = ambient
        self.payload = payload
        self.seed = seed

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.ambient == other.ambient
            and self.payload == other.payload
            and self.seed == other.seed
        )


def parse_instance(obj) -> Instance:
    if not isinstance(obj, dict):
        raise MalformedInput(f"an instance must be a JSON object, got {obj!r}")
    unknown = set(obj) - {"schema", "ambient", "payload", "seed"}
    if unknown:
        raise MalformedInput(f"unknown instance key {sorted(unknown)[0]!r}")
    schema = obj.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise MalformedInput(f"unsupported schema {schema!r}, expected {SCHEMA}")
    ambient = parse_ambient(obj["ambient"]) if "ambient" in obj else None
    payload = obj.get("payload", {})
    if not isinstance(payload, dict):
        raise MalformedInput(f"payload must be an object, got {payload!r}")
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise MalformedInput(f"seed must be an integer, got {seed!r}")
    return Instance(ambient, payload, seed)


def serialize_instance(inst: Instance):
    out = {"schema": SCHEMA}
    if inst.ambient is not None:
        out["ambient"] = serialize_ambient(inst.ambient)
    if inst.payload:
        out["payload"] = inst.payload
    if inst.seed is not None:
        out["seed"] = inst.seed
    return out


def load_instance(args) -> Instance:
    if args.input and args.inline:
        raise MalformedInput("give --input or --inline, not both")
    raw = None
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise MalformedInput(f"cannot read {args.input}: {exc}") from exc
    elif args.inline:
        raw = args.inline
    if raw is None:
        return Instance(None, {}, None)
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    return parse_instance(obj)


def effective_seed(inst: Instance, args) -> int:
    if args.seed is not None:
        return args.seed
    if inst.seed is not None:
        return inst.seed
    return 0


def resolve_ambient(inst: Instance, args, kind: str, size=None) -> Ambient:
    """The instance ambient when given (kind-checked), else one from flags."""
    if inst.ambient is not None:
        if inst.ambient.kind != kind:
            raise MalformedInput(
                f"this command runs on a {kind} ambient, got {inst.ambient.kind!r}"
            )
        return inst.ambient
    try:
        return AMBIENT_BUILDERS[kind](args.n, args.k if size is None else size)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def payload_mode(inst: Instance, args, choices, default):
    mode = args.mode if args.mode is not None else inst.payload.get("mode", default)
    if mode not in choices:
        raise MalformedInput(f"unknown mode {mode!r}, expected one of {', '.join(choices)}")
    return mode


# ---------------------------------------------------------------------------
# Payload readers with seeded fallbacks


def read_point_sets(inst, ambient, count, fallback):
    """The payload's "sets" as point sets, or a generated fallback."""
    if "sets" in inst.payload:
        sets = inst.payload["sets"]
        if not isinstance(sets, list):
            raise MalformedInput(f"'sets' must be a list, got {sets!r}")
        out = [decode_point_set(s, ambient) for s in sets]
        if count is not None and len(out) != count:
            raise MalformedInput(f"'sets' needs {count} entries, got {len(out)}")
        return out
    return fallback()


def read_grid_map(inst, ambient, rng) -> GridMap:
    """A map from "sets", "thresholds", or a dense "table"; seeded otherwise."""
    keys = [k for k in ("sets", "thresholds", "table") if k in inst.payload]
    if len(keys) > 1:
        raise MalformedInput(f"give only one of 'sets', 'thresholds', 'table', got {keys}")
    if not keys:
        return random_threshold_map(ambient, rng)
    key = keys[0]
    if key == "sets":
        sets = [decode_point_set(s, ambient) for s in inst.payload["sets"]]
        if len(sets) != ambient.n:
            raise MalformedInput(f"'sets' needs {ambient.n} entries, got {len(sets)}")
        return grid_map(ambient, sets)
    if key == "thresholds":
        ts = inst.payload["thresholds"]
        if (
            not isinstance(ts, list)
            or len(ts) != ambient.n
            or any(isinstance(t, bool) or not isinstance(t, int) for t in ts)
        ):
            raise MalformedInput(f"'thresholds' must be {ambient.n} integers, got {ts!r}")
        return threshold_map(ambient, ts)
    table = inst.payload["table"]
    grid = list(all_points(ambient))
    if not isinstance(table, list) or len(table) != len(grid):
        got = len(table) if isinstance(table, list) else table
        raise MalformedInput(f"'table' needs one row per point, expected {len(grid)}, got {got!r}")
    images = {}
    for row in table:
        if not isinstance(row, list) or len(row) != 2:
            raise MalformedInput(f"'table' rows are [point, bits], got {row!r}")
        p = decode_point(row[0])
        if not ambient.is_point(p):
            raise MalformedInput(f"'table' point {p} is outside the ambient")
        if p in images:
            raise MalformedInput(f"'table' repeats the point {p}")
        bits = row[1]
        if (
            not isinstance(bits, list)
            or len(bits) != ambient.n
            or any(b not in (0, 1) or isinstance(b, bool) for b in bits)
        ):
            raise MalformedInput(f"'table' bits for {p} must be {ambient.n} zeros or ones")
        images[p] = tuple(bits)
    sets = [frozenset(p for p, bits in images.items() if bits[i] == 0) for i in range(ambient.n)]
    return grid_map(ambient, sets)


def read_cubical_sets(inst, ambient, count, fallback):
    if "sets" in inst.payload:
        sets = inst.payload["sets"]
        if not isinstance(sets, list):
            raise MalformedInput(f"'sets' must be a list, got {sets!r}")
        out = [decode_cubical_set(ambient, s) for s in sets]
        if count is not None and len(out) != count:
            raise MalformedInput(f"'sets' needs {count} entries, got {len(out)}")
        return out
    return fallback()


def read_window(inst, args):
    if "window" in inst.payload:
        return decode_window(inst.payload["window"])
    if args.k < 1:
        raise MalformedInput("--k must be at least 1 for a window")
    return tuple((0, args.k) for _ in range(args.n))


def _split_spanning_tiles(tiling: BoxTiling) -> BoxTiling:
    """Refine until no tile runs between two opposite faces of the domain."""
    changed = True
    while changed:
        changed = False
        for idx, t in enumerate(tiling.tiles):
            for a in range(tiling.domain.n):
                dlo, dhi = tiling.domain.intervals[a]
                lo, hi = t.intervals[a]
                if lo == dlo and hi == dhi and lo < hi:
                    tiling = refine(tiling, idx, a, (lo + hi) / 2)
                    changed = True
                    break
            if changed:
                break
    return tiling


def read_tiled_sets(inst, args, rng, style: str):
    """A tiling plus index sets from the payload, or a seeded instance.

    The style picks the fallback: an admissible partition, an admissible
    covering, or one singleton set per tile of a non-spanning tiling.
    """
    payload = inst.payload
    if "tiles" in payload or "sets" in payload:
        for key in ("domain", "tiles", "sets"):
            if key not in payload:
                raise MalformedInput(f"a tiled instance needs '{key}'")
        domain = decode_box(payload["domain"])
        tiles = payload["tiles"]
        if not isinstance(tiles, list) or not tiles:
            raise MalformedInput(f"'tiles' must be a non-empty list of boxes, got {tiles!r}")
        try:
            tiling = BoxTiling(domain, tuple(decode_box(t) for t in tiles))
        except ValueError as exc:
            raise MalformedInput(str(exc)) from exc
        report = validate_tiling(tiling)
        if not report.ok:
            raise PreconditionError(report.clause, report.witness)
        sets = []
        for entry in payload["sets"]:
            if not isinstance(entry, list) or any(
                isinstance(i, bool) or not isinstance(i, int) for i in entry
            ):
                raise MalformedInput(f"a tiled set is a list of tile indices, got {entry!r}")
            try:
                sets.append(TiledSet(tiling, frozenset(entry)))
            except ValueError as exc:
                raise MalformedInput(str(exc)) from exc
        return tiling, sets
    tiling = random_tiling(args.n, rng)
    if style == "singletons":
        tiling = _split_spanning_tiles(tiling)
        return tiling, [TiledSet(tiling, frozenset({i})) for i in range(len(tiling.tiles))]
    maker = random_tiled_covering if style == "covering" else random_tiled_partition
    return tiling, maker(tiling, rng)


def fallback_covering_sets(pair, rng):
    """Deterministic admissible discrete covering: first-zero-axis parts."""
    amb = pair.k_ambient
    n = amb.n
    sets = [set() for _ in range(n + 1)]
    for p in all_points(amb):
        zero = next((i for i in range(n) if p[i] == 0), n)
        sets[zero].add(p)
    return [frozenset(s) for s in sets]


def fallback_threshold_sets(ambient, rng):
    ts = [1 + rng.randrange(ambient.size) for _ in range(ambient.n)]
    return [
        frozenset(p for p in all_points(ambient) if p[i] < ts[i])
        for i in range(ambient.n)
    ]


# ---------------------------------------------------------------------------
# Command runners: each returns {"counts", "witnesses", optional "text"}


def run_kuhn_check(inst, args, rng):
    ambient = resolve_ambient(inst, args, DISCRETE)
    sets = read_point_sets(inst, ambient, ambient.n, lambda: random_kuhn_sets(ambient, rng))
    labeling = kuhn_labeling(ambient, sets)
    labeling.check_faces()
    ws = kuhn_witnesses(ambient, sets)
    seq = ws[0]
    for j in range(ambient.n):
        assert (seq[j] in sets[j]) != (seq[j + 1] in sets[j]), "witness does not cross"
    return {
        "counts": {"sets": ambient.n, "crossing_sequences": len(ws)},
        "witnesses": {"sequence": encode_sequence(seq)},
    }


def run_kuhn_strong_count(inst, args, rng):
    ambient = resolve_ambient(inst, args, DISCRETE)
    sets = read_point_sets(inst, ambient, ambient.n, lambda: random_kuhn_sets(ambient, rng))
    count = kuhn_strong_count(ambient, sets)
    return {"counts": {"sets": ambient.n, "count": count}, "witnesses": {}}


def run_kyfan_count(inst, args, rng):
    ambient = resolve_ambient(inst, args, DISCRETE)
    phi = read_grid_map(inst, ambient, rng)
    axis = inst.payload.get("axis", 0)
    value = inst.payload.get("value", 1)
    for x in (axis, value):
        if isinstance(x, bool) or not isinstance(x, int):
            raise MalformedInput(f"'axis' and 'value' must be integers, got {x!r}")
    s, t = kyfan_counts(phi, axis=axis, value=value)
    return {
        "counts": {"bijective_cubes": s, "face_facets": t, "axis": axis, "value": value},
        "witnesses": {},
    }


def run_kyfan_equivalence(inst, args, rng):
    ambient = resolve_ambient(inst, args, DISCRETE)
    phi = read_grid_map(inst, ambient, rng)
    total = bijective = 0
    roots = []
    for sigma in all_cubes(ambient, ambient.n):
        ok, pieces = bijection_iff_product(phi, sigma)
        assert ok == (pieces == 1), "equivalence broke"
        total += 1
        if ok:
            bijective += 1
            roots.append(sigma.root)
    return {
        "counts": {"cubes": total, "bijective": bijective},
        "witnesses": {"bijective_roots": encode_sequence(sorted(roots))},
    }


def run_products_verify(inst, args, rng):
    mode = payload_mode(inst, args, ("induction", "faces"), "induction")
    ambient = resolve_ambient(inst, args, DISCRETE)
    sets = read_point_sets(inst, ambient, ambient.n, lambda: random_kuhn_sets(ambient, rng))
    hs = [chain(ambient, 0, [point_cube(ambient, p) for p in s]) for s in sets]
    if mode == "induction":
        s, t = products_induction_counts(hs)
        counts = {"mode": mode, "product_cubes": s, "telescope_cubes": t}
    else:
        counts = {"mode": mode, "product_cubes": products_faces_count(hs)}
    return {"counts": counts, "witnesses": {}}


def run_lebesgue_witness(inst, args, rng):
    mode = payload_mode(
        inst,
        args,
        ("e-coverings", "collecting-sets", "partitions-standard", "partitions-early"),
        "e-coverings",
    )
    ambient = resolve_ambient(inst, args, SOLID, size=args.k + 1)
    if mode == "collecting-sets":
        dsets = read_cubical_sets(inst, ambient, None, lambda: random_box_covering(ambient, rng))
        point, indices = collecting_sets_witness(dsets)
        for i in indices:
            assert dsets[i].contains_point(point), "witness escaped an assigned set"
        witnesses = {"point": encode_point(point), "set_indices": list(indices)}
        counts = {"mode": mode, "sets": len(dsets)}
    else:
        gen_mode = "early" if mode == "partitions-early" else "standard"
        fall_mode = "early" if mode == "e-coverings" else gen_mode
        dsets = read_cubical_sets(
            inst, ambient, ambient.n + 1, lambda: random_admissible_sets(ambient, rng, fall_mode)
        )
        if mode == "e-coverings":
            point = e_coverings_witness(dsets, debug=not args.fast)
        else:
            point = cubes_partitions_witness(dsets, mode=gen_mode)
        for i, d in enumerate(dsets):
            assert d.contains_point(point), f"witness escaped set {i}"
        witnesses = {"point": encode_point(point)}
        counts = {"mode": mode, "sets": len(dsets)}
    return {"counts": counts, "witnesses": witnesses}


def run_fuse(inst, args, rng):
    ambient = resolve_ambient(inst, args, SOLID, size=args.k + 1)
    dsets = read_cubical_sets(inst, ambient, None, lambda: random_box_covering(ambient, rng))
    groups, assignment = fuse(dsets)
    n = ambient.n
    for c in all_cubes(ambient, n):
        assert any(c in g.ncubes for g in groups), "fused groups lost the covering"
    for i in range(n):
        assert covers_face(groups[: i + 1], i, "low"), "fused groups lost a low face"
        assert not groups[i].meets_face(i, "high"), "fused group meets its high face"
    return {
        "counts": {"sets": len(dsets), "groups": len(groups), "group_sizes": [len(g.ncubes) for g in groups]},
        "witnesses": {"assignment": [list(a) for a in assignment]},
    }


def run_tiling_nerve(inst, args, rng):
    window = read_window(inst, args)
    sc = nerve(window, check=not args.fast)
    return {
        "counts": {
            "window": [list(pair) for pair in window],
            "points": len(sc.vertices),
            "simplices": len(sc.simplices),
            "f_vector": list(sc.f_vector()),
            "maximal": len(sc.maximal_simplices()),
        },
        "witnesses": {"simplices": encode_complex(sc)},
        "text": complex_lines(sc),
    }


def run_tiling_check(inst, args, rng):
    mode = payload_mode(inst, args, ("partition", "covering"), "partition")
    if "parts" in inst.payload:
        parts = inst.payload["parts"]
        if not isinstance(parts, list):
            raise MalformedInput(f"'parts' must be a list of point sets, got {parts!r}")
        parts = [decode_point_set(s) for s in parts]
    elif mode == "partition":
        parts = random_window_partition(args.n, args.k, rng)
    else:
        parts = random_window_covering(args.n, args.k, rng)
    if mode == "partition":
        count = wh_tilings_count(parts)
        return {
            "counts": {"mode": mode, "parts": len(parts), "spanning_sequences": count},
            "witnesses": {},
        }
    seq = strong_kuhn_nerve_witness(parts)
    for i, part in enumerate(parts):
        assert any(p in part for p in seq), f"witness misses part {i}"
    return {
        "counts": {"mode": mode, "parts": len(parts)},
        "witnesses": {"sequence": encode_sequence(seq)},
    }


def run_hurewicz_path(inst, args, rng):
    mode = payload_mode(inst, args, ("path", "lemma", "collecting"), "path")
    styles = {"path": "partition", "lemma": "covering", "collecting": "singletons"}
    tiling, sets = read_tiled_sets(inst, args, rng, styles[mode])
    if mode == "path":
        start, point = path_witness(sets)
        witnesses = {"start": encode_point(start), "point": encode_point(point)}
        checked = sets
    elif mode == "lemma":
        point = hurewicz_lemma_witness(sets)
        witnesses = {"point": encode_point(point)}
        checked = sets
    else:
        point, indices = collecting_tiled_sets_witness(sets)
        witnesses = {"point": encode_point(point), "set_indices": list(indices)}
        checked = [sets[i] for i in indices]
    for d in checked:
        assert d.contains_point(point), "witness point escaped a set"
    return {
        "counts": {"mode": mode, "tiles": len(tiling.tiles), "sets": len(sets)},
        "witnesses": witnesses,
    }


def run_hurewicz_parity(inst, args, rng):
    tiling, sets = read_tiled_sets(inst, args, rng, "partition")
    count = parity_count(sets)
    return {
        "counts": {"tiles": len(tiling.tiles), "sets": len(sets), "common_points": count},
        "witnesses": {},
    }


def run_sphere_ls(inst, args, rng):
    mode = payload_mode(inst, args, ("witness", "descent"), "witness")
    if mode == "witness":
        ambient = resolve_ambient(inst, args, SPHERE)
        cs = read_point_sets(
            inst, ambient, ambient.n,
            lambda: [random_antipodal_complement_set(ambient, rng) for _ in range(ambient.n)],
        )
        cube = ls_witness(ambient, cs)
        verts = set(cube.vertices())
        for c in cs:
            assert verts & c and verts - c, "witness cube misses a side"
        return {
            "counts": {"mode": mode, "sets": len(cs)},
            "witnesses": {"cube": encode_cube(cube)},
        }
    ambient = resolve_ambient(inst, args, BIGSPHERE)

    def fallback():
        top = sorted(all_cubes(ambient, ambient.n), key=lambda c: (c.root, c.axes))
        safe = next(c for c in top if not c.meets_cube(antipode_cube(c)))
        return [frozenset({safe}) for _ in range(ambient.n)]

    raw = read_cubical_sets(inst, ambient, ambient.n, None) if "sets" in inst.payload else None
    sets = [s.ncubes for s in raw] if raw is not None else fallback()
    point, levels = ls_descent_levels(ambient, sets)
    for cubes in sets:
        for c in cubes:
            assert not cube_covers(c, point), "witness point landed in a set"
            assert not cube_covers(c, tuple(-x for x in point)), "antipode landed in a set"
    return {
        "counts": {"mode": mode, "sets": len(sets), "levels": len(levels)},
        "witnesses": {"point": encode_point(point)},
    }


def run_sphere_power(inst, args, rng):
    ambient = resolve_ambient(inst, args, SPHERE)
    sets = read_point_sets(inst, ambient, ambient.n, None) if "sets" in inst.payload else None
    if sets is not None:
        hs = [chain(ambient, 0, [point_cube(ambient, p) for p in s]) for s in sets]
    else:
        hs = [random_asymmetric_cochain(ambient, rng) for _ in range(ambient.n)]
    pairs = power_of_generator_pairs(hs)
    first = pairs[0]
    assert first[1] == antipode_cube(first[0]), "pair is not antipodal"
    return {
        "counts": {"cochains": len(hs), "pairs": len(pairs)},
        "witnesses": {"pair": [encode_cube(first[0]), encode_cube(first[1])]},
    }


def run_freudenthal(inst, args, rng):
    mode = payload_mode(inst, args, ("simplex", "complex", "nonbranching", "sperner"), "complex")
    if mode == "simplex":
        if "omega" not in inst.payload or "root" not in inst.payload:
            raise MalformedInput("simplex mode needs 'omega' and 'root'")
        images = inst.payload["omega"]
        if not isinstance(images, list):
            raise MalformedInput(f"'omega' must be a permutation list, got {images!r}")
        try:
            omega = permutation(tuple(images))
        except ValueError as exc:
            raise MalformedInput(str(exc)) from exc
        root = decode_point(inst.payload["root"])
        size = inst.payload.get("size")
        if size is not None and (isinstance(size, bool) or not isinstance(size, int)):
            raise MalformedInput(f"'size' must be an integer, got {size!r}")
        verts = simplex_of(omega, root, size)
        for a, b in zip(verts, verts[1:]):
            step = tuple(y - x for x, y in zip(a, b))
            assert set(step) <= {0, 1} and sum(step) == 1, "simplex steps broke"
        if size is not None:
            for v in verts:
                assert in_scaled_region(omega, size, v), "vertex escaped the region"
        return {
            "counts": {"mode": mode, "vertices": len(verts)},
            "witnesses": {"simplex": encode_sequence(verts)},
        }
    if mode == "sperner":
        ambient = resolve_ambient(inst, args, DISCRETE)
        sets = read_point_sets(inst, ambient, ambient.n, lambda: random_kuhn_sets(ambient, rng))
        count = sperner_count(reduced_labeling(ambient, sets))
        return {
            "counts": {"mode": mode, "sets": len(sets), "full_simplices": count},
            "witnesses": {},
        }
    window = read_window(inst, args)
    if mode == "nonbranching":
        report = nonbranching_report(window)
        assert report.ok, f"branching facet {report.counterexample}"
        return {
            "counts": {
                "mode": mode,
                "window": [list(p) for p in window],
                "interior_facets": report.interior,
                "boundary_facets": report.boundary,
            },
            "witnesses": {},
        }
    sc = canonical_complex(window)
    return {
        "counts": {
            "mode": mode,
            "window": [list(p) for p in window],
            "points": len(sc.vertices),
            "simplices": len(sc.simplices),
            "f_vector": list(sc.f_vector()),
        },
        "witnesses": {"simplices": encode_complex(sc)},
        "text": complex_lines(sc),
    }


def run_duality_check(inst, args, rng):
    mode = payload_mode(
        inst,
        args,
        (
            "exhaustive",
            "bridge",
            "discrete-coverings",
            "separation-weak",
            "separation-lebesgue",
            "transversality",
        ),
        "exhaustive",
    )
    k_ambient = resolve_ambient(inst, args, DISCRETE)
    pair = dual_pair(k_ambient.n, k_ambient.size)
    n = k_ambient.n
    if mode == "exhaustive":
        cubes = [c for m in range(n + 1) for c in all_cubes(k_ambient, m)]
        incidences = checks = 0
        for sigma in cubes:
            for tau in cubes:
                if face_duality_check(pair, sigma, tau):
                    incidences += 1
        for c in cubes:
            if c.dim >= 1:
                assert dual_boundary_check(pair, chain(k_ambient, c.dim, [c]))
                checks += 1
            roundtrip = unstar_chain(pair, chain(pair.q_ambient, n - c.dim, [star_cube(pair, c)]))
            assert roundtrip.cubes == frozenset({c}), "star round trip broke"
        return {
            "counts": {
                "mode": mode,
                "cubes": len(cubes),
                "pairs": len(cubes) ** 2,
                "incidences": incidences,
                "boundary_checks": checks,
            },
            "witnesses": {},
        }
    if mode == "bridge":
        def fallback():
            return [
                frozenset(p for p in all_points(k_ambient) if rng.coin())
                for _ in range(3)
            ]

        sets = read_point_sets(inst, k_ambient, None, fallback)
        if not sets:
            raise MalformedInput("bridge mode needs at least one set")
        meets = cubes_intersections_bridge(pair, sets)
        return {
            "counts": {"mode": mode, "sets": len(sets), "intersects": int(meets)},
            "witnesses": {},
        }
    if mode == "transversality":
        phi = read_grid_map(inst, k_ambient, rng)
        gammas = dual_hypersurfaces(pair, phi)
        ok = transversality_check(pair, phi)
        for i, g in enumerate(gammas):
            assert unstar_chain(pair, g) == coboundary(
                chain(k_ambient, 0, [point_cube(k_ambient, p) for p in phi.sets[i]])
            ), "hypersurface does not star the zero-set coboundary"
        return {
            "counts": {
                "mode": mode,
                "hypersurface_sizes": [len(g.cubes) for g in gammas],
                "transversal": int(ok),
            },
            "witnesses": {},
        }
    if mode == "discrete-coverings":
        sets = read_point_sets(inst, k_ambient, n + 1, lambda: fallback_covering_sets(pair, rng))
        cube = transported_witnesses(pair, mode, sets)
        return {
            "counts": {"mode": mode, "sets": len(sets)},
            "witnesses": {"cube": encode_cube(cube)},
        }
    if mode == "separation-weak":
        sets = read_point_sets(inst, k_ambient, n, lambda: fallback_threshold_sets(k_ambient, rng))
        cube = transported_witnesses(pair, mode, sets)
        return {
            "counts": {"mode": mode, "sets": len(sets)},
            "witnesses": {"cube": encode_cube(cube)},
        }

    def fallback():
        return [star_set(pair, s) for s in fallback_threshold_sets(k_ambient, rng)]

    dsets = read_cubical_sets(inst, pair.q_ambient, n, None) if "sets" in inst.payload else fallback()
    point = transported_witnesses(pair, mode, dsets)
    return {
        "counts": {"mode": mode, "sets": len(dsets)},
        "witnesses": {"point": encode_point(point)},
    }


# ---------------------------------------------------------------------------
# Self test


def _suite_chains(n, k, iters, rng, fast):
    ambient = discrete_cube(n, k)
    checked = 0
    for _ in range(iters):
        for m in range(1, n + 1):
            ch = random_cochain(ambient, m, rng)
            f = random_cochain(ambient, m - 1, rng)
            assert pairing(boundary(ch), f) == pairing(ch, coboundary(f))
            if m >= 2:
                assert not boundary(boundary(ch)).cubes
            if m <= n - 1:
                assert not coboundary(coboundary(chain(ambient, m, ch.cubes))).cubes
            checked += 1
    return {"iterations": iters, "identities": checked}


def _suite_products(n, k, iters, rng, fast):
    ambient = discrete_cube(n, k)
    odd = 0
    for _ in range(iters):
        sets = random_kuhn_sets(ambient, rng)
        hs = [chain(ambient, 0, [point_cube(ambient, p) for p in s]) for s in sets]
        s, t = products_induction_counts(hs)
        assert products_faces_count(hs) % 2 == 1
        odd += s % 2
    assert odd == iters
    return {"iterations": iters, "odd_products": odd}


def _suite_strong_kuhn(n, k, iters, rng, fast):
    ambient = discrete_cube(n, k)
    for _ in range(iters):
        sets = random_kuhn_sets(ambient, rng)
        count = kuhn_strong_count(ambient, sets)
        reduced = reduced_labeling(ambient, sets)
        assert count == sperner_count(reduced)
        assert count == wh_tilings_count(reduced.parts())
        assert count % 2 == 1
    return {"iterations": iters}


def _suite_lebesgue(n, k, iters, rng, fast):
    ambient = solid_cube(n, k + 1)
    for _ in range(iters):
        dsets = random_admissible_sets(ambient, rng)
        point = e_coverings_witness(dsets, debug=not fast)
        assert all(d.contains_point(point) for d in dsets)
    return {"iterations": iters}


def _suite_collecting(n, k, iters, rng, fast):
    ambient = solid_cube(n, k + 1)
    for _ in range(iters):
        dsets = random_box_covering(ambient, rng)
        point, indices = collecting_sets_witness(dsets)
        assert all(dsets[i].contains_point(point) for i in indices)
        assert len(set(indices)) == n + 1
    return {"iterations": iters}


def _suite_tilings(n, k, iters, rng, fast):
    window = tuple((0, k) for _ in range(n))
    assert nerve(window, check=not fast) == canonical_complex(window)
    for _ in range(iters):
        parts = random_window_partition(n, k, rng)
        assert wh_tilings_count(parts) % 2 == 1
        covering = random_window_covering(n, k, rng)
        seq = strong_kuhn_nerve_witness(covering)
        assert all(any(p in d for p in seq) for d in covering)
    return {"iterations": iters}


def _suite_hurewicz(n, k, iters, rng, fast):
    for _ in range(iters):
        tiling = random_tiling(n, rng)
        parts = random_tiled_partition(tiling, rng)
        assert parity_count(parts) % 2 == 1
        start, point = path_witness(parts)
        assert all(d.contains_point(point) for d in parts)
    return {"iterations": iters}


def _suite_sphere(n, k, iters, rng, fast):
    ambient = sphere_grid(n, k)
    for _ in range(iters):
        hs = [random_asymmetric_cochain(ambient, rng) for _ in range(n)]
        assert len(power_of_generator_pairs(hs)) % 2 == 1
        cs = [random_antipodal_complement_set(ambient, rng) for _ in range(n)]
        cube = ls_witness(ambient, cs)
        verts = set(cube.vertices())
        assert all(verts & c and verts - c for c in cs)
    return {"iterations": iters}


def _suite_kyfan(n, k, iters, rng, fast):
    ambient = discrete_cube(n, k)
    for _ in range(iters):
        phi = random_threshold_map(ambient, rng)
        s, t = kyfan_counts(phi)
        assert (s - t) % 2 == 0
        sets = fallback_threshold_sets(ambient, rng)
        assert kuhn_via_kyfan(grid_map(ambient, sets)) % 2 == 1
    return {"iterations": iters}


def _suite_duality(n, k, iters, rng, fast):
    pair = dual_pair(n, k)
    ambient = pair.k_ambient
    for _ in range(iters):
        for m in range(1, n + 1):
            assert dual_boundary_check(pair, random_cochain(ambient, m, rng))
        sets = [frozenset(p for p in all_points(ambient) if rng.coin()) for _ in range(3)]
        cubes_intersections_bridge(pair, sets)
        assert transversality_check(pair, random_threshold_map(ambient, rng))
    return {"iterations": iters}


SELFTEST_SUITES = (
    ("chains", _suite_chains, None),
    ("products", _suite_products, 60),
    ("strong-kuhn", _suite_strong_kuhn, 20),
    ("lebesgue", _suite_lebesgue, 30),
    ("collecting", _suite_collecting, 30),
    ("tilings", _suite_tilings, 30),
    ("hurewicz", _suite_hurewicz, 12),
    ("sphere", _suite_sphere, 12),
    ("kyfan", _suite_kyfan, 40),
    ("duality", _suite_duality, 40),
)


def run_selftest(inst, args, rng):
    seed = effective_seed(inst, args)
    cases = args.cases
    if cases < 1:
        raise MalformedInput(f"--cases must be positive, got {cases}")
    jobs = []
    for index, (name, fn, cap) in enumerate(SELFTEST_SUITES):
        iters = cases if cap is None else min(cases, cap)
        suite_rng = Lcg64(seed * 1000003 + index)
        jobs.append((name, fn, iters, suite_rng))
    threads = int(os.environ.get("CUBELAB_THREADS", "1"))

    def run_one(job):
        name, fn, iters, suite_rng = job
        return fn(args.n, args.k, iters, suite_rng, args.fast)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, jobs))
    else:
        results = [run_one(job) for job in jobs]
    suites = {name: result for (name, _, _, _), result in zip(jobs, results)}
    return {
        "counts": {"suites": len(suites), "cases": cases, "seed": seed},
        "witnesses": {"results": suites},
    }


RUNNERS = {
    "kuhn-check": run_kuhn_check,
    "kuhn-strong-count": run_kuhn_strong_count,
    "kyfan-count": run_kyfan_count,
    "kyfan-equivalence": run_kyfan_equivalence,
    "products-verify": run_products_verify,
    "lebesgue-witness": run_lebesgue_witness,
    "fuse": run_fuse,
    "tiling-nerve": run_tiling_nerve,
    "tiling-check": run_tiling_check,
    "hurewicz-path": run_hurewicz_path,
    "hurewicz-parity": run_hurewicz_parity,
    "sphere-ls": run_sphere_ls,
    "sphere-power": run_sphere_power,
    "freudenthal": run_freudenthal,
    "duality-check": run_duality_check,
    "selftest": run_selftest,
}

COMMAND_HELP = {
    "kuhn-check": "count the crossing pivot sequences of per-axis zero sets (payload: sets)",
    "kuhn-strong-count": "count the pivot sequences carrying every reduced label (payload: sets)",
    "kyfan-count": "count bijective cubes against face facets (payload: sets|thresholds|table, axis, value)",
    "kyfan-equivalence": "check bijectivity against the product criterion on every top cube",
    "products-verify": "verify the product parity counts (modes: induction, faces)",
    "lebesgue-witness": "find a common point of admissible coverings (modes: e-coverings, collecting-sets, partitions-standard, partitions-early)",
    "fuse": "group a covering into admissible per-axis unions (payload: sets of cubes)",
    "tiling-nerve": "export the tiling nerve over a window (payload: window)",
    "tiling-check": "count spanning sequences of a window partition or find one for a covering",
    "hurewicz-path": "walk segment paths to a common point (modes: path, lemma, collecting)",
    "hurewicz-parity": "count the full intersection points of tiled sets",
    "sphere-ls": "find antipodal witnesses on spheres (modes: witness, descent)",
    "sphere-power": "list the antipodal pairs supporting a power of the generator",
    "freudenthal": "triangulation tools (modes: simplex, complex, nonbranching, sperner)",
    "duality-check": "run the discrete-solid duality checks (modes: exhaustive, bridge, discrete-coverings, separation-weak, separation-lebesgue, transversality)",
    "selftest": "run every seeded suite once and report the counts",
}


# ---------------------------------------------------------------------------
# Record assembly and rendering


def render_text(record):
    lines = []

    def walk(prefix, val):
        if isinstance(val, dict):
            if not val:
                lines.append(f"{prefix}: {{}}")
                return
            for key in val:
                walk(f"{prefix}.{key}" if prefix else str(key), val[key])
        else:
            lines.append(f"{prefix}: {json.dumps(val, sort_keys=True)}")

    for key in ("command", "verdict", "counts", "witnesses", "error", "timing"):
        if key in record:
            walk(key, record[key])
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cubelab",
        description="Witness constructions and parity checks on cubical grids.",
        epilog=__doc__.split("Instance files")[0],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in RUNNERS:
        p = sub.add_parser(name, help=COMMAND_HELP[name])
        p.add_argument("--input", help="path of a JSON instance file")
        p.add_argument("--inline", help="a JSON instance given directly")
        p.add_argument("--n", type=int, default=2, help="coordinate count for generated instances")
        p.add_argument("--k", type=int, default=1, help="grid size for generated instances")
        p.add_argument("--seed", type=int, default=None, help="seed overriding the instance seed")
        p.add_argument("--cases", type=int, default=25, help="iterations per self test suite")
        p.add_argument("--mode", default=None, help="sub-operation for commands that have modes")
        p.add_argument("--format", choices=("json", "text"), default="json", help="record format")
        p.add_argument("--fast", action="store_true", help="skip the redundant debug re-checks")
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    started = time.perf_counter()
    record = {"command": args.command}
    text_block = None
    try:
        inst = load_instance(args)
        rng = Lcg64(effective_seed(inst, args))
        result = RUNNERS[args.command](inst, args, rng)
        record["verdict"] = "ok"
        record["counts"] = result.get("counts", {})
        record["witnesses"] = result.get("witnesses", {})
        text_block = result.get("text")
        code = 0
    except PreconditionError as exc:
        record["verdict"] = "violation"
        record["error"] = {"clause": exc.clause, "witness": jsonable(exc.witness)}
        code = 1
    except AssertionError as exc:
        record["verdict"] = "violation"
        record["error"] = {"clause": "internal check", "witness": str(exc)}
        code = 1
    except MalformedInput as exc:
        record["verdict"] = "malformed"
        record["error"] = {"detail": str(exc)}
        code = 2
    except (ValueError, KeyError, TypeError) as exc:
        record["verdict"] = "malformed"
        record["error"] = {"detail": str(exc)}
        code = 2
    record["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    if args.format == "text" and text_block is not None:
        print("\n".join(text_block))
    elif args.format == "text":
        print(render_text(record))
    else:
        print(json.dumps(record, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
