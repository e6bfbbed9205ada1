"""k-partial packings: families of k-1 partitions of a ground set whose
parts have size at least two and whose parts from distinct partitions meet
in at most one element.

Every constructor returns a value that has been through
:func:`validate_packing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import geometry as geo
from .errors import (
    CrossIntersectionTooLarge,
    FactorTooSmall,
    HOutOfRange,
    KTooLarge,
    NoFactorization,
    NoParameterFound,
    NotAPartition,
    NotConstructedAtDeskScale,
    NoValidPencilLine,
    ParameterError,
    ParametersInadmissible,
    ParseError,
    PartSizeOne,
    QEvenOrTooSmall,
    SingletonTrace,
)
from .gf import is_prime_power, prime_power

__all__ = [
    "Partition",
    "PartialPacking",
    "CoverFamily",
    "validate_packing",
    "direct_product_packing",
    "best_factorization",
    "affine_packing",
    "affine_slab_packing",
    "projective_packing",
    "projective_packing_admissible",
    "arc_pencil_packing",
    "unital_pencil_packing",
    "conic_pencil_packing",
    "restrict_packing",
    "general_length_parameters",
    "general_length_packing",
    "subpacking",
    "export_packing",
    "import_packing",
]


@dataclass(frozen=True)
class Partition:
    s: int
    parts: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


@dataclass(frozen=True)
class PartialPacking:
    s: int
    partitions: tuple[Partition, ...]
    label: str = ""

    @property
    def k(self) -> int:
        return len(self.partitions) + 1

    @property
    def order(self) -> int:
        return sum(len(P) for P in self.partitions)

    @property
    def code_length(self) -> int:
        return self.s + self.order

    @cached_property
    def part_sizes(self) -> tuple[int, ...]:
        return tuple(sorted({len(part) for P in self.partitions for part in P}))

    @property
    def homogeneous(self) -> bool:
        """All parts across all partitions have the same size."""
        return len(self.part_sizes) == 1

    @property
    def homogeneous_per_partition(self) -> bool:
        return all(len({len(part) for part in P}) == 1 for P in self.partitions)

    def parts(self) -> list[tuple[int, ...]]:
        return [part for P in self.partitions for part in P]

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<PartialPacking{tag} s={self.s} k={self.k} r={self.order}>"


@dataclass(frozen=True)
class CoverFamily:
    """Subsets of [0, s) that pairwise meet in at most one element."""

    s: int
    subsets: tuple[tuple[int, ...], ...]

    @property
    def coverage(self) -> list[int]:
        cov = [0] * self.s
        for S in self.subsets:
            for x in S:
                cov[x] += 1
        return cov

    @property
    def k(self) -> int:
        return 1 + min(self.coverage, default=0)


def _canonical_partition(s: int, parts) -> Partition:
    parts = sorted(tuple(sorted(p)) for p in parts)
    return Partition(s, tuple(parts))


def validate_packing(s: int, partitions, label: str = "") -> PartialPacking:
    """Check both packing axioms and return the canonical packing value.

    Raises NotAPartition, PartSizeOne or CrossIntersectionTooLarge with the
    offending witnesses.
    """
    checked = []
    for idx, raw in enumerate(partitions):
        parts = [tuple(sorted(p)) for p in (raw.parts if isinstance(raw, Partition) else raw)]
        seen = set()
        for part in parts:
            if len(set(part)) != len(part):
                raise NotAPartition(idx, f"repeated element in {list(part)}")
            for x in part:
                if not 0 <= x < s:
                    raise NotAPartition(idx, f"element {x} outside [0, {s})")
                if x in seen:
                    raise NotAPartition(idx, f"element {x} in two parts")
                seen.add(x)
        if len(seen) != s:
            missing = min(set(range(s)) - seen)
            raise NotAPartition(idx, f"element {missing} not covered")
        for part in parts:
            if len(part) < 2:
                raise PartSizeOne(idx, part)
        checked.append(_canonical_partition(s, parts))

    # every pair of ground elements may lie in a common part of at most one partition
    owner: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for idx, P in enumerate(checked):
        for part in P:
            for a_pos, a in enumerate(part):
                for b in part[a_pos + 1:]:
                    prev = owner.get((a, b))
                    if prev is not None:
                        other_idx, other = prev
                        shared = set(other) & set(part)
                        raise CrossIntersectionTooLarge((other_idx, other), (idx, part), shared)
                    owner[(a, b)] = (idx, part)
    return PartialPacking(s, tuple(checked), label)


# ---------------------------------------------------------------- products


def direct_product_packing(factors, w: int | None = None) -> PartialPacking:
    """Coset partitions of C_{a_1} x ... x C_{a_c}, using the first w factors.

    Elements are indexed in mixed radix with the first factor most
    significant.  Partition i groups elements that differ only in
    coordinate i; its order is s / a_i.
    """
    factors = tuple(int(a) for a in factors)
    if not factors or any(a < 2 for a in factors):
        raise FactorTooSmall(f"all factors must be >= 2, got {factors}")
    w = len(factors) if w is None else w
    if not 1 <= w <= len(factors):
        raise HOutOfRange(f"w must be in [1, {len(factors)}], got {w}")
    s = 1
    for a in factors:
        s *= a
    strides = []
    acc = 1
    for a in reversed(factors):
        strides.append(acc)
        acc *= a
    strides.reverse()
    partitions = []
    for i in range(w):
        a, stride = factors[i], strides[i]
        parts = []
        for x in range(s):
            if (x // stride) % a == 0:
                parts.append(tuple(x + j * stride for j in range(a)))
        partitions.append(parts)
    return validate_packing(s, partitions, f"product{factors}w{w}")


def _factorizations(s: int, count: int, least: int = 2):
    """Nondecreasing factor tuples of length count with product s."""
    if count == 1:
        if s >= least:
            yield (s,)
        return
    a = least
    while a ** count <= s:
        if s % a == 0:
            for rest in _factorizations(s // a, count - 1, a):
                yield (a,) + rest
        a += 1


def best_factorization(s: int, k: int) -> tuple[int, ...]:
    """k-1 factors >= 2 with product s minimizing sum(s / a_i).

    Ties go to the lexicographically smallest sorted factor list.
    """
    if k < 3:
        raise ParameterError("best_factorization needs k >= 3")
    best = None
    for f in _factorizations(s, k - 1):
        key = (sum(s // a for a in f), f)
        if best is None or key < best:
            best = key
    if best is None:
        raise NoFactorization(f"{s} is not a product of {k - 1} factors >= 2")
    return best[1]


# ---------------------------------------------------------------- affine


def affine_packing(N: int, q: int, k: int) -> PartialPacking:
    """First k-1 parallel classes of AG(N, q)."""
    prime_power(q)
    if N < 2:
        raise ParameterError("affine_packing needs N >= 2")
    classes = geo.pg_size(N - 1, q)
    if not 3 <= k <= 1 + classes:
        raise KTooLarge(f"AG({N},{q}) has {classes} parallel classes; k must be in [3, {1 + classes}]")
    A = geo.affine_space(N, q)
    partitions = [[line.points for line in A.parallel_class(d)] for d in range(k - 1)]
    return validate_packing(A.size, partitions, f"AG({N},{q})")


def _transversal_directions(N: int, q: int) -> list[tuple[int, ...]]:
    """Directions with last coordinate 1, in canonical order."""
    from itertools import product

    return [tuple(v) + (1,) for v in product(range(q), repeat=N - 1)]


def _slab_packing(N: int, q: int, k: int):
    """Traces of k-1 transversal direction classes on AG(N, q) (unrestricted)."""
    A = geo.affine_space(N, q)
    partitions = []
    for d in _transversal_directions(N, q)[: k - 1]:
        seen = [False] * A.size
        parts = []
        for p in range(A.size):
            if not seen[p]:
                line = A.line(p, d)
                for x in line:
                    seen[x] = True
                parts.append(line)
        partitions.append(parts)
    return A, partitions


def affine_slab_packing(N: int, q: int, h: int, k: int) -> PartialPacking:
    """Packing on the union of h parallel hyperplanes of AG(N, q).

    The hyperplanes are x_N = c for the first h field elements c; each
    partition is cut out by lines of one direction with last coordinate 1.
    """
    prime_power(q)
    if N < 2:
        raise ParameterError("affine_slab_packing needs N >= 2")
    if not 2 <= h <= q:
        raise HOutOfRange(f"h must be in [2, {q}], got {h}")
    if not 3 <= k <= 1 + q ** (N - 1):
        raise KTooLarge(f"k must be in [3, {1 + q ** (N - 1)}], got {k}")
    A, partitions = _slab_packing(N, q, k)
    ground = [p for p, v in enumerate(A.coords) if v[-1] < h]
    relabel = {p: i for i, p in enumerate(ground)}
    traced = [
        [tuple(relabel[x] for x in line if x in relabel) for line in parts]
        for parts in partitions
    ]
    return validate_packing(len(ground), traced, f"slab AG({N},{q}) h={h}")


# ---------------------------------------------------------------- projective


def projective_packing_admissible(N: int, q: int) -> bool:
    """Whether PG(N, q) is known to have a line packing (Baker/Beutelspacher)."""
    if not is_prime_power(q) or N < 3:
        return False
    if q == 2 and N % 2 == 1:
        return True
    m = N + 1
    return m >= 4 and m & (m - 1) == 0


def projective_packing(N: int, q: int, k: int) -> PartialPacking:
    """k-1 spreads of a line packing of PG(N, q).

    Only PG(3, 2) is built explicitly; its packing into 7 spreads comes from
    the frozen search fixture.
    """
    if not projective_packing_admissible(N, q):
        raise ParametersInadmissible(f"no line packing of PG({N},{q}) is known to exist")
    spreads = (q**N - 1) // (q - 1)
    if not 3 <= k <= 1 + spreads:
        raise KTooLarge(f"k must be in [3, {1 + spreads}], got {k}")
    if (N, q) != (3, 2):
        raise NotConstructedAtDeskScale(f"PG({N},{q}) packings are formula-level only")
    from .fixtures import pg32_packing

    lines = geo.pg_lines(3, 2)
    classes = pg32_packing()
    partitions = [[lines[i].points for i in cls] for cls in classes[: k - 1]]
    return validate_packing(geo.pg_size(3, 2), partitions, "PG(3,2)")


# ---------------------------------------------------------------- pencils


def _pencil_partitions(P: geo.ProjectiveSpace, ground, centers, merge_tangent_feet=False):
    """For each center point, the traces on ``ground`` of lines through it.

    With ``merge_tangent_feet`` the single-point traces are collected into
    one part (the feet of the tangents, collinear on the polar line).
    """
    index = {p: i for i, p in enumerate(ground)}
    partitions = []
    for c in centers:
        parts, feet = [], []
        for li in P.lines_through[c]:
            trace = tuple(index[p] for p in P.lines[li].points if p in index)
            if not trace:
                continue
            if merge_tangent_feet and len(trace) == 1:
                feet.extend(trace)
            else:
                parts.append(trace)
        if feet:
            parts.append(tuple(sorted(feet)))
        partitions.append(parts)
    return partitions


def arc_pencil_packing(n: int, n_prime: int, k: int) -> PartialPacking:
    """Packing of a Denniston maximal arc in PG(2, 2^n).

    The centers are the points, in index order, of the lowest-index line
    disjoint from the arc.
    """
    if not 1 <= n_prime <= n:
        raise ParameterError("need 1 <= n' <= n")
    if not 3 <= k <= 2**n + 2:
        raise KTooLarge(f"k must be in [3, {2**n + 2}], got {k}")
    K = geo.denniston_arc(n, n_prime)
    P = geo.projective_space(2, 2**n)
    Kset = set(K)
    ext = next((line for line in P.lines if not Kset.intersection(line.points)), None)
    if ext is None or len(ext.points) < k - 1:
        raise NoValidPencilLine(f"no external line to the arc in PG(2,{2**n})")
    partitions = _pencil_partitions(P, K, ext.points[: k - 1])
    return validate_packing(len(K), partitions, f"arc(n={n},n'={n_prime})")


def unital_pencil_packing(q: int, k: int) -> PartialPacking:
    """Packing of the Hermitian unital in PG(2, q^2).

    Centers are the points other than the contact point on the lowest-index
    tangent line.  Each center gives the secant traces through it plus the
    set of feet of its q+1 tangents.
    """
    prime_power(q)
    if not 3 <= k <= q * q + 1:
        raise KTooLarge(f"k must be in [3, {q * q + 1}], got {k}")
    U = geo.hermitian_unital(q)
    P = geo.projective_space(2, q * q)
    Uset = set(U)
    tangent = next(line for line, c in zip(P.lines, P.meet_counts(U)) if c == 1)
    centers = [p for p in tangent.points if p not in Uset][: k - 1]
    partitions = _pencil_partitions(P, U, centers, merge_tangent_feet=True)
    return validate_packing(len(U), partitions, f"unital(q={q})")


def conic_pencil_packing(q: int, k: int) -> PartialPacking:
    """Non-homogeneous packing of the internal points of a conic in PG(2, q).

    Centers are the external points, in index order, of the lowest-index
    tangent line; each partition has q-1 parts of sizes (q-1)/2 and (q+1)/2.
    """
    p, _ = prime_power(q)
    if p == 2 or q <= 3:
        raise QEvenOrTooSmall(f"q must be an odd prime power > 3, got {q}")
    if not 3 <= k <= q + 1:
        raise KTooLarge(f"k must be in [3, {q + 1}], got {k}")
    C = geo.conic_interior(q)
    P = geo.projective_space(2, q)
    conic = set(C.conic)
    tangent = next(line for line, c in zip(P.lines, P.meet_counts(conic)) if c == 1)
    centers = [x for x in tangent.points if x not in conic][: k - 1]
    partitions = _pencil_partitions(P, C.interior, centers)
    return validate_packing(len(C.interior), partitions, f"conic(q={q})")


# ---------------------------------------------------------------- restriction


def restrict_packing(packing: PartialPacking, Y) -> PartialPacking:
    """Induced packing on Y (relabelled to 0..|Y|-1 in increasing order)."""
    Y = sorted(set(Y))
    if len(Y) < 2:
        raise ParameterError("restriction needs |Y| >= 2")
    if Y[0] < 0 or Y[-1] >= packing.s:
        raise ParameterError("Y must be a subset of the ground set")
    index = {y: i for i, y in enumerate(Y)}
    partitions = []
    for idx, P in enumerate(packing.partitions):
        parts = []
        for part in P:
            trace = tuple(index[x] for x in part if x in index)
            if len(trace) == 1:
                raise SingletonTrace(idx, part, Y[trace[0]])
            if trace:
                parts.append(trace)
        partitions.append(parts)
    label = f"{packing.label}|Y" if packing.label else ""
    return validate_packing(len(Y), partitions, label)


def general_length_parameters(s: int, k: int) -> tuple[int, int]:
    """(q, N) for the restricted affine construction at length s.

    Among prime powers q and N >= 2 with 2q^(N-1) <= s <= q^N and
    k <= 1 + q^(N-1), pick the least q^(N-1) (shortest code), then the
    least q^N.
    """
    if s < 4 or k < 3:
        raise ParameterError("general_length_packing needs s >= 4 and k >= 3")
    best = None
    for q in range(2, s // 2 + 1):
        if not is_prime_power(q):
            continue
        N = 2
        while 2 * q ** (N - 1) <= s:
            if s <= q**N and k <= 1 + q ** (N - 1):
                key = (q ** (N - 1), q**N, q, N)
                if best is None or key < best:
                    best = key
            N += 1
    if best is None:
        raise NoParameterFound(f"no admissible (q, N) for s={s}, k={k}")
    return best[2], best[3]


def general_length_packing(s: int, k: int) -> PartialPacking:
    """k-partial packing on s points with order (k-1) q^(N-1).

    Y consists of the hyperplanes x_N = 0 and x_N = 1 of AG(N, q) plus the
    first remaining points in index order; the transversal line classes
    meet it in at least two points each.
    """
    q, N = general_length_parameters(s, k)
    A, partitions = _slab_packing(N, q, k)
    base = validate_packing(A.size, partitions, f"AG({N},{q}) transversal")
    Y = [p for p, v in enumerate(A.coords) if v[-1] < 2]
    rest = [p for p, v in enumerate(A.coords) if v[-1] >= 2]
    Y += rest[: s - len(Y)]
    out = restrict_packing(base, Y)
    return PartialPacking(out.s, out.partitions, f"general AG({N},{q}) s={s}")


def subpacking(packing: PartialPacking, h: int) -> PartialPacking:
    """The h-partial packing formed by the first h-1 partitions."""
    if not 2 <= h <= packing.k:
        raise HOutOfRange(f"h must be in [2, {packing.k}], got {h}")
    label = f"{packing.label}[:{h - 1}]" if packing.label else ""
    return PartialPacking(packing.s, packing.partitions[: h - 1], label)


# ---------------------------------------------------------------- text format


def export_packing(packing: PartialPacking) -> str:
    out = [f"{packing.s} {packing.k} {packing.order}"]
    for i, P in enumerate(packing.partitions):
        for part in P:
            out.append(f"{i}: " + " ".join(map(str, part)))
    return "\n".join(out) + "\n"


def import_packing(text: str) -> PartialPacking:
    rows = [r.strip() for r in text.splitlines() if r.strip() and not r.startswith("#")]
    try:
        s, k, r = map(int, rows[0].split())
        partitions = [[] for _ in range(k - 1)]
        for row in rows[1:]:
            head, _, body = row.partition(":")
            partitions[int(head)].append(tuple(int(x) for x in body.split()))
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad packing text: {exc}") from exc
    packing = validate_packing(s, partitions)
    if packing.order != r:
        raise ParseError(f"header order {r} does not match {packing.order} parts")
    return packing
