"""Incidence structures: configurations, BIBDs and resolutions.

Constructions here are either algebraic (cyclic development of base
blocks) or search based (backtracking for configurations, exact cover for
resolutions).  Existence theorems that come without a construction are
exposed as parameter gates (:func:`rbibd_catalog`, :func:`symmetric_catalog`,
:func:`asymmetric_gates`).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    NotAConfiguration,
    NotHomogeneous,
    ParameterError,
    ParseError,
    RepeatedDifference,
    SearchTimeout,
    Unsat,
)
from .exact_cover import ExactCover
from .gf import is_prime, is_prime_power, prime_power
from .packing import PartialPacking

__all__ = [
    "IncidenceStructure",
    "ConfigurationProfile",
    "Classification",
    "Resolution",
    "classify",
    "dual",
    "difference_census",
    "cyclic_configuration",
    "search_configuration",
    "parallel_classes",
    "resolve",
    "CatalogVerdict",
    "rbibd_catalog",
    "symmetric_catalog",
    "asymmetric_gates",
    "packing_to_configuration",
    "export_incidence",
    "import_incidence",
]


@dataclass(frozen=True)
class IncidenceStructure:
    v: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(B)) for B in self.blocks)
        for B in blocks:
            if len(set(B)) != len(B):
                raise ParameterError(f"block {B} repeats a point")
            if B and not (0 <= B[0] and B[-1] < self.v):
                raise ParameterError(f"block {B} has a point outside [0, {self.v})")
        object.__setattr__(self, "blocks", blocks)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def replication(self) -> list[int]:
        r = [0] * self.v
        for B in self.blocks:
            for x in B:
                r[x] += 1
        return r

    @property
    def block_sizes(self) -> list[int]:
        return [len(B) for B in self.blocks]

    def blocks_through(self) -> list[list[int]]:
        through = [[] for _ in range(self.v)]
        for j, B in enumerate(self.blocks):
            for x in B:
                through[x].append(j)
        return through

    def sorted(self) -> "IncidenceStructure":
        return IncidenceStructure(self.v, tuple(sorted(self.blocks)))


@dataclass(frozen=True)
class ConfigurationProfile:
    v: int
    t: int
    b: int
    z: int
    bibd: bool = False

    @property
    def symmetric(self) -> bool:
        return self.v == self.b

    def __str__(self):
        if self.symmetric:
            return f"{self.v}_{self.z}"
        return f"({self.v}_{self.t}, {self.b}_{self.z})"


@dataclass
class Classification:
    profile: ConfigurationProfile | None
    violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.profile is not None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Resolution:
    classes: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.classes)


def classify(inc: IncidenceStructure) -> Classification:
    """Configuration profile of ``inc``, or the list of violated axioms.

    Violations are tuples ``(kind, detail...)`` with kinds
    ``repeated-block``, ``nonuniform-replication``, ``nonuniform-block-size``,
    ``pair-on-two-blocks`` and ``empty``.
    """
    violations = []
    if inc.v == 0 or inc.b == 0:
        return Classification(None, [("empty",)])
    seen = {}
    for j, B in enumerate(inc.blocks):
        if B in seen:
            violations.append(("repeated-block", seen[B], j))
        else:
            seen[B] = j
    reps = set(inc.replication)
    if len(reps) != 1:
        violations.append(("nonuniform-replication", sorted(reps)))
    sizes = set(inc.block_sizes)
    if len(sizes) != 1:
        violations.append(("nonuniform-block-size", sorted(sizes)))
    pair_block = {}
    covered = 0
    for j, B in enumerate(inc.blocks):
        for pair in combinations(B, 2):
            if pair in pair_block:
                violations.append(("pair-on-two-blocks", pair, pair_block[pair], j))
                break
            pair_block[pair] = j
            covered += 1
    if violations:
        return Classification(None, violations)
    t, z = reps.pop(), sizes.pop()
    bibd = covered == inc.v * (inc.v - 1) // 2
    return Classification(ConfigurationProfile(inc.v, t, inc.b, z, bibd))


def dual(inc: IncidenceStructure) -> IncidenceStructure:
    """Transpose points and blocks."""
    if not classify(inc):
        raise NotAConfiguration("dual is only defined here for configurations")
    return IncidenceStructure(inc.b, tuple(tuple(js) for js in inc.blocks_through()))


# ---------------------------------------------------------------- cyclic


def difference_census(v: int, base_blocks) -> dict[int, list[tuple[int, int, int]]]:
    """Map each nonzero difference mod v to its (block, a, b) witnesses."""
    census: dict[int, list] = {}
    for bi, B in enumerate(base_blocks):
        for a in B:
            for b in B:
                if a != b:
                    census.setdefault((a - b) % v, []).append((bi, a, b))
    return census


def cyclic_configuration(v: int, base_blocks) -> IncidenceStructure:
    """Develop base blocks through Z_v.

    Every nonzero difference may occur at most once across all base blocks;
    then no two developed blocks share two points.
    """
    bases = [tuple(sorted({x % v for x in B})) for B in base_blocks]
    if not bases or any(len(B) < 2 for B in bases):
        raise ParameterError("base blocks need at least two points")
    for d, wit in sorted(difference_census(v, bases).items()):
        if len(wit) > 1:
            raise RepeatedDifference(d, wit)
    blocks = sorted({tuple(sorted((x + i) % v for x in B)) for B in bases for i in range(v)})
    return IncidenceStructure(v, tuple(blocks))


# ---------------------------------------------------------------- search


def _orbit_search(v: int, t: int, b: int, z: int, n: int, max_nodes) -> IncidenceStructure:
    """Configurations invariant under Z_n acting on Z_n x {0..v/n-1}.

    Only deficiency v-1-t(z-1) in {0, 1} is handled: then the configuration
    covers every pair exactly once except those of a perfect matching, and
    the search is an exact cover of pair orbits by base-block orbits.  The
    matching is {(x, 2c), (x, 2c+1)}.
    """
    deficiency = v - 1 - t * (z - 1)
    if deficiency not in (0, 1):
        raise ParameterError("orbit search needs v - 1 - t(z-1) in {0, 1}")
    if n % 2 == 0 or v % n or b % n:
        raise ParameterError("orbit search needs odd n dividing both v and b")
    classes = v // n
    if deficiency == 1 and classes % 2:
        raise ParameterError("orbit search with a matching needs an even number of point classes")
    pts = [(x, i) for i in range(classes) for x in range(n)]

    def pair_orbit(a, c):
        (x, i), (y, j) = sorted((a, c), key=lambda p: (p[1], p[0]))
        if i == j:
            d = (y - x) % n
            return (i, i, min(d, n - d))
        return (i, j, (y - x) % n)

    excluded = {(2 * c, 2 * c + 1, 0) for c in range(classes // 2)} if deficiency else set()
    columns = {pair_orbit(a, c) for a, c in combinations(pts, 2)} - excluded
    options = {}
    for B in combinations(pts, z):
        if B[0][0] != 0:
            continue
        orbits = [pair_orbit(a, c) for a, c in combinations(B, 2)]
        if len(set(orbits)) < len(orbits) or excluded.intersection(orbits):
            continue
        options.setdefault(tuple(sorted(orbits)), B)
    solver = ExactCover(
        {B: [pair_orbit(a, c) for a, c in combinations(B, 2)] for B in options.values()},
        sorted(columns), max_nodes=max_nodes,
    )
    sol = next(solver.solve(), None)
    if sol is None:
        raise Unsat(f"no Z_{n}-invariant ({v}_{t}, {b}_{z}) configuration")
    blocks = {
        tuple(sorted(i * n + (x + g) % n for x, i in B))
        for B in sol for g in range(n)
    }
    inc = IncidenceStructure(v, tuple(sorted(blocks)))
    if classify(inc).profile != ConfigurationProfile(v, t, b, z, deficiency == 0):
        raise AssertionError("orbit search produced an invalid configuration")  # pragma: no cover
    return inc


def search_configuration(v: int, t: int, b: int, z: int, max_nodes: int = 2_000_000,
                         timeout: float | None = None,
                         group_order: int | None = None) -> IncidenceStructure:
    """Search for a (v_t, b_z) configuration.

    By default this is a backtracking search.  Blocks are generated so that
    each new block contains the least point with spare replication; blocks
    through the same least point appear in increasing order of their second
    point.  The t blocks through point 0 are fixed to {0, 1..z-1},
    {0, z..2z-2}, ... (any configuration can be relabelled this way).

    With ``group_order`` the search is restricted to configurations with a
    cyclic automorphism of that order (see ``_orbit_search``).

    Raises Unsat when the space is exhausted and SearchTimeout when the node
    budget or wall-clock timeout runs out.
    """
    if min(v, t, b, z) < 1 or z < 2:
        raise ParameterError("need v, t, b >= 1 and z >= 2")
    if v * t != b * z:
        raise ParameterError(f"v*t = {v * t} differs from b*z = {b * z}")
    if v < 1 + t * (z - 1):
        raise Unsat(f"a point would need {t * (z - 1)} distinct neighbours among {v - 1}")
    if group_order is not None:
        return _orbit_search(v, t, b, z, group_order, max_nodes)

    full = (1 << v) - 1
    adj = [1 << p for p in range(v)]
    cap = [t] * v
    capmask = full
    blocks: list[tuple[int, ...]] = []

    def place(B):
        nonlocal capmask
        bits = 0
        for x in B:
            bits |= 1 << x
        for x in B:
            adj[x] |= bits
            cap[x] -= 1
            if cap[x] == 0:
                capmask &= ~(1 << x)
        blocks.append(B)

    def unplace(B):
        nonlocal capmask
        bits = 0
        for x in B:
            bits |= 1 << x
        for x in B:
            adj[x] &= ~(bits & ~(1 << x))
            if cap[x] == 0:
                capmask |= 1 << x
            cap[x] += 1
        blocks.pop()

    for j in range(t):
        place((0,) + tuple(range(1 + j * (z - 1), 1 + (j + 1) * (z - 1))))

    need = z - 1
    nodes = 0
    best_depth = len(blocks)
    deadline = None if timeout is None else time.monotonic() + timeout

    def feasible(points) -> bool:
        for p in points:
            c = cap[p]
            if c and bin(capmask & ~adj[p]).count("1") < c * need:
                return False
        return True

    def combos(cand, k):
        if k == 0:
            yield ()
            return
        while cand:
            low = cand & -cand
            c = low.bit_length() - 1
            cand ^= low
            if bin(cand).count("1") < k - 1:
                return
            for rest in combos(cand & ~adj[c], k - 1):
                yield (c,) + rest

    def rec(last_second):
        nonlocal nodes, best_depth
        if capmask == 0:
            return len(blocks) == b
        nodes += 1
        if nodes > max_nodes or (deadline and nodes % 1024 == 0 and time.monotonic() > deadline):
            raise SearchTimeout(
                f"configuration search ({v}_{t}, {b}_{z}) exceeded its budget",
                depth=best_depth, nodes=nodes,
            )
        low = capmask & -capmask
        p0 = low.bit_length() - 1
        cand = capmask & ~adj[p0]
        if last_second is not None and last_second[0] == p0:
            cand &= ~((1 << (last_second[1] + 1)) - 1)
        for rest in combos(cand, need):
            B = (p0,) + rest
            place(B)
            best_depth = max(best_depth, len(blocks))
            if feasible(range(v)) and rec((p0, rest[0])):
                return True
            unplace(B)
        return False

    if not feasible(range(v)) or not rec(None):
        raise Unsat(f"no ({v}_{t}, {b}_{z}) configuration exists (exhaustive search)")
    return IncidenceStructure(v, tuple(sorted(blocks)))


def parallel_classes(inc: IncidenceStructure, max_nodes: int | None = None) -> list[tuple[int, ...]]:
    """All sets of blocks partitioning the point set, as sorted block-index tuples."""
    options = {j: B for j, B in enumerate(inc.blocks)}
    solver = ExactCover(options, range(inc.v), max_nodes=max_nodes)
    return sorted(tuple(sorted(sol)) for sol in solver.solve())


def resolve(inc: IncidenceStructure, max_nodes: int | None = 5_000_000) -> Resolution:
    """Partition the blocks into parallel classes by two-level exact cover.

    First every parallel class is enumerated (exact cover of points by
    blocks), then the block set is exactly covered by parallel classes.
    Classes are returned sorted by their least block index.  Raises Unsat
    when no resolution exists.
    """
    info = classify(inc)
    if not info:
        raise NotAConfiguration(f"cannot resolve a non-configuration: {info.violations[0]}")
    prof = info.profile
    if inc.v % prof.z:
        raise Unsat(f"block size {prof.z} does not divide v = {inc.v}: no parallel class")
    classes = parallel_classes(inc, max_nodes)
    if not classes:
        raise Unsat("the structure has no parallel class")
    solver = ExactCover(dict(enumerate(classes)), range(inc.b), max_nodes=max_nodes)
    sol = next(solver.solve(), None)
    if sol is None:
        raise Unsat("parallel classes do not partition the block set")
    chosen = sorted((classes[i] for i in sol), key=lambda c: c[0])
    if prof.bibd:
        expected = (inc.v - 1) // (prof.z - 1)
        if len(chosen) != expected:  # pragma: no cover - counting identity
            raise AssertionError(f"BIBD resolution with {len(chosen)} classes, expected {expected}")
    return Resolution(tuple(chosen))


# ---------------------------------------------------------------- catalogs


@dataclass(frozen=True)
class CatalogVerdict:
    status: str  # "exists", "excluded" or "unknown"
    rows: tuple[str, ...] = ()
    note: str = ""

    @property
    def exists(self) -> bool:
        return self.status == "exists"


RBIBD_EXCEPTIONS_Z5 = frozenset({45, 345, 465, 645})


def _same_prime_powers(v: int, z: int) -> bool:
    if not (is_prime_power(v) and is_prime_power(z)):
        return False
    return prime_power(v)[0] == prime_power(z)[0]


def rbibd_catalog(v: int, z: int) -> CatalogVerdict:
    """Known existence of a resolvable 2-(v, z, 1) design."""
    if v < 2 or z < 2:
        raise ParameterError("need v, z >= 2")
    rows, note, excluded = [], "", False
    if z == 3 and v % 6 == 3:
        rows.append("z=3, v = 3 (mod 6)")
    if z == 4 and v % 12 == 4:
        rows.append("z=4, v = 4 (mod 12)")
    if z == 5 and v % 20 == 5:
        if v in RBIBD_EXCEPTIONS_Z5:
            excluded = True
            note = f"v={v} is listed as an exception for z=5"
        else:
            rows.append("z=5, v = 5 (mod 20), v not in {45,345,465,645}")
    if z == 7 and v % 42 == 7:
        if v > 294427:
            rows.append("z=7, v = 7 (mod 42), v > 294427")
        else:
            note = "z=7 congruence holds but v <= 294427"
    if z == 8 and v % 56 == 8:
        if v > 24480:
            rows.append("z=8, v = 8 (mod 56), v > 24480")
        else:
            note = "z=8 congruence holds but v <= 24480"
    if _same_prime_powers(v, z) and (v - 1) % (z - 1) == 0:
        rows.append("v, z powers of the same prime, (z-1) | (v-1)")
    if rows:
        return CatalogVerdict("exists", tuple(rows), note)
    return CatalogVerdict("excluded" if excluded else "unknown", (), note)


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


SPORADIC_SYMMETRIC = {
    5: (21, 23, 24, 25, 26, 27, 28),
    6: (31, 34, 35, 36, 37, 38),
    7: (45, 48, 49, 50),
    8: (57, 63, 64),
    9: (73, 78, 80),
    10: (91, 98),
    12: (133, 135),
}


def symmetric_catalog(v: int, z: int) -> list[str]:
    """Names of every catalogued family of symmetric v_z configurations
    matching (v, z); an empty list when none applies."""
    hits = []
    qs = [q for q in range(2, 2 * v + 3) if is_prime_power(q)]
    if z == 4 and v >= 13:
        hits.append("v>=13, z=4")
    if any(v == q * q - 1 and z == q for q in qs):
        hits.append("v=q^2-1, z=q")
    if any(v == p * p - p and z == p - 1 for p in qs if is_prime(p)):
        hits.append("v=p^2-p, z=p-1")
    if any(v == q * q - q * (q - z) and 0 <= q - z < q for q in qs):
        hits.append("v=q^2-qs, z=q-s")
    if any(v == q * q - (q - 1) * (q - z) - 1 and 0 <= q - z < q for q in qs):
        hits.append("v=q^2-(q-1)s-1, z=q-s")
    for q in qs:
        r = _isqrt_exact(q)
        if r is None:
            continue
        c = z - r
        if 2 <= c <= q - r and v == c * (q + r + 1):
            hits.append("v=c(q+sqrt(q)+1), z=sqrt(q)+c")
            break
    for p in range(2, math.isqrt(max(v // 2, 0)) + 1):
        if not is_prime(p) or 2 * p * p != v:
            continue
        sp = z - p
        if any(sp <= q + 1 and q * q + q + 1 <= p for q in qs if sp > 0):
            hits.append("v=2p^2, z=p+s")
    for q in qs:
        if v % (q - 1):
            continue
        c = v // (q - 1)
        delta = c - z
        if delta < 0:
            continue
        bound = q if delta >= 1 else math.ceil(q / 2)
        if delta <= c <= bound:
            hits.append("v=c(q-1), z=c-delta")
            break
    if any(q % 2 and v == q * (q - 1) // 2 and z == (q + 1) // 2 for q in qs):
        hits.append("v=q(q-1)/2, z=(q+1)/2")
    if any(q % 2 and v == q * (q + 1) // 2 and z == (q - 1) // 2 for q in qs):
        hits.append("v=q(q+1)/2, z=(q-1)/2")
    for q in qs:
        r = _isqrt_exact(q)
        if r is not None and v == q * q + q - q * r and z == q - r:
            hits.append("v=q^2+q-q*sqrt(q), z=q-sqrt(q)")
            break
    if any(0 <= q - z <= q - 3 and v == q * q - (q - z) * q - 1 for q in qs):
        hits.append("v=q^2-rq-1, z=q-r")
    if any(q >= 3 and v == q * q - q - 2 and z == q - 1 for q in qs):
        hits.append("v=q^2-q-2, z=q-1")
    if z >= 3 and any(q > z and v == z * q - 1 for q in qs):
        hits.append("v=rq-1, z=r")
    if z >= 3 and any(q > z and v == z * q - 2 for q in qs):
        hits.append("v=rq-2, z=r")
    if v in SPORADIC_SYMMETRIC.get(z, ()):
        hits.append(f"sporadic z={z}")
    return hits


ASYM4_EXCLUDED = frozenset({84, 120, 132, 180, 216, 264, 312, 324, 372, 456, 552, 648, 660, 804, 852, 888})
ASYM5_EXCLUDED = frozenset({
    (1, 22), (2, 42), (2, 43), (3, 62), (3, 63), (4, 82), (5, 102), (7, 142), (9, 182), (9, 183),
    (9, 185), (9, 186), (9, 187), (9, 188), (9, 189), (9, 190), (9, 191), (9, 192),
})


def asymmetric_gates(v: int, t: int, b: int, z: int) -> list[str]:
    """Existence results for (v_t, b_z) configurations with z in {3, 4, 5}
    whose hypotheses (v, t, b, z) satisfy; empty list when none applies."""
    if v * t != b * z:
        return []
    hits = []
    if z == 3 and v >= 2 * t + 1:
        hits.append("z=3: vt=3b, v>=2t+1")
    if z == 4:
        if v % 12 == 4 and v > 3 * t + 1:
            hits.append("z=4: v=4 (mod 12), v>3t+1")
        if v % 12 == 0 and v >= 3 * t + 1 and v not in ASYM4_EXCLUDED:
            hits.append("z=4: v=0 (mod 12), v>=3t+1")
        if v % 12 == 0 and v == 3 * t + 3:
            hits.append("z=4: v=0 (mod 12), v=3t+3")
        if t % 4 == 0 and 1 <= t // 4 <= 15 and v >= 3 * t + 1 and not (t == 12 and v == 38):
            hits.append("z=4: t=4s, v>=3t+1")
        if t == 6 and v >= 20 and v % 2 == 0 and 2 * b == 3 * v:
            hits.append("z=4: t=6, v>=20 even")
    if z == 5:
        if v == 4 * t + 4 and v % 20 == 0:
            hits.append("z=5: v=4t+4, v=0 (mod 20)")
        if v % 20 == 5 and v >= 4 * t + 1 and v >= 7865:
            hits.append("z=5: v=5 (mod 20), v>=7865")
        if t % 5 == 0 and 1 <= t // 5 <= 10 and v >= 4 * t + 1 and (t // 5, v) not in ASYM5_EXCLUDED:
            hits.append("z=5: t=5s, v>=4t+1")
    return hits


# ---------------------------------------------------------------- packings


def packing_to_configuration(packing: PartialPacking) -> tuple[IncidenceStructure, Resolution]:
    """Points = ground set, blocks = parts, parallel classes = partitions."""
    if not packing.homogeneous:
        raise NotHomogeneous(f"part sizes {packing.part_sizes} are not all equal")
    blocks, classes = [], []
    for P in packing.partitions:
        start = len(blocks)
        blocks.extend(P.parts)
        classes.append(tuple(range(start, len(blocks))))
    return IncidenceStructure(packing.s, tuple(blocks)), Resolution(tuple(classes))


# ---------------------------------------------------------------- text format


def export_incidence(inc: IncidenceStructure, resolution: Resolution | None = None) -> str:
    out = [f"{inc.v} {inc.b}"]
    out += [" ".join(map(str, B)) for B in inc.blocks]
    if resolution is not None:
        for i, cls in enumerate(resolution.classes):
            out.append(f"#class {i}: " + " ".join(map(str, cls)))
    return "\n".join(out) + "\n"


def import_incidence(text: str) -> tuple[IncidenceStructure, Resolution | None]:
    rows = [r.strip() for r in text.splitlines() if r.strip()]
    classes = []
    data = []
    for r in rows:
        if r.startswith("#class"):
            _, _, body = r.partition(":")
            classes.append(tuple(int(x) for x in body.split()))
        elif not r.startswith("#"):
            data.append(r)
    try:
        v, b = map(int, data[0].split())
        blocks = tuple(tuple(int(x) for x in r.split()) for r in data[1:])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad incidence text: {exc}") from exc
    if len(blocks) != b:
        raise ParseError(f"header announces {b} blocks, found {len(blocks)}")
    inc = IncidenceStructure(v, blocks)
    return inc, (Resolution(tuple(classes)) if classes else None)
