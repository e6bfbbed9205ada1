"""Systematic binary PIR codes [I | A] with explicit recovery plans.

Columns are numbered 0..s-1 for the identity block and s+j for parity
column j.  A column is held as an int bitmask over the s rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .design import IncidenceStructure, classify, dual
from .errors import (
    DimensionMismatch,
    EmptySubset,
    HOutOfRange,
    IntersectionViolation,
    NotAConfiguration,
    Overlap,
    ParameterError,
    ParseError,
    ResourceGuard,
    SearchTimeout,
    VerificationFailed,
)
from .packing import CoverFamily, PartialPacking

__all__ = [
    "PirCode",
    "Verdict",
    "LrcParams",
    "code_from_subsets",
    "code_from_packing",
    "code_from_configuration",
    "verify_recovery_plan",
    "max_disjoint_recovery",
    "combine_codes",
    "combine_subpackings",
    "puncture",
    "shorten",
    "extend_odd",
    "lrc_params",
    "export_matrix",
    "import_matrix",
]

ORACLE_MAX_COLUMNS = 48


@dataclass(frozen=True)
class PirCode:
    s: int
    parity: tuple[tuple[int, ...], ...]
    k: int
    plan: tuple[tuple[tuple[int, ...], ...], ...]
    label: str = ""

    @property
    def m(self) -> int:
        return self.s + len(self.parity)

    @property
    def overhead(self) -> Fraction:
        return Fraction(self.m, self.s)

    def column(self, c: int) -> int:
        if c < self.s:
            return 1 << c
        mask = 0
        for row in self.parity[c - self.s]:
            mask |= 1 << row
        return mask

    def columns(self) -> list[int]:
        return [self.column(c) for c in range(self.m)]

    def rows(self) -> list[str]:
        """Generator matrix rows as 0/1 strings."""
        cols = self.columns()
        return ["".join("1" if col >> i & 1 else "0" for col in cols) for i in range(self.s)]

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<PirCode{tag} [{self.m},{self.s}] k={self.k}>"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    kind: str = "OK"
    bit: int | None = None
    detail: tuple = ()

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "OK"
        return f"{self.kind}(bit={self.bit}, {', '.join(map(str, self.detail))})"


@dataclass(frozen=True)
class LrcParams:
    locality: int
    availability: int


def _check_family(s: int, subsets) -> tuple[tuple[int, ...], ...]:
    fam = []
    for S in subsets:
        S = tuple(sorted(S))
        if not S:
            raise EmptySubset("empty subset in cover family")
        if len(set(S)) != len(S) or S[0] < 0 or S[-1] >= s:
            raise ParameterError(f"subset {S} is not a set over [0, {s})")
        fam.append(S)
    owner = {}
    for j, S in enumerate(fam):
        for pair in combinations(S, 2):
            if pair in owner:
                raise IntersectionViolation(
                    f"subsets {fam[owner[pair]]} and {S} share the pair {pair}"
                )
            owner[pair] = j
    return tuple(fam)


def code_from_subsets(s: int, subsets, label: str = "") -> PirCode:
    """One parity column per subset; bit i is recovered from {i} and from
    each subset through i together with the other members' identity columns."""
    if isinstance(subsets, CoverFamily):
        subsets = subsets.subsets
    fam = _check_family(s, subsets)
    plan = [[(i,)] for i in range(s)]
    for j, S in enumerate(fam):
        for i in S:
            plan[i].append(tuple(sorted([s + j, *(x for x in S if x != i)])))
    k = 1 + min((len(p) - 1 for p in plan), default=0)
    return PirCode(s, fam, k, tuple(tuple(p) for p in plan), label)


def code_from_packing(packing: PartialPacking) -> PirCode:
    code = code_from_subsets(packing.s, packing.parts(), packing.label)
    if code.k < packing.k:
        raise VerificationFailed(f"packing {packing!r} gave only k={code.k}")
    return code


def code_from_configuration(inc: IncidenceStructure, side: str = "primal") -> PirCode:
    cls = classify(inc)
    if not cls.ok:
        raise NotAConfiguration(f"not a configuration: {cls.violations[:3]}")
    if side == "dual":
        inc = dual(inc)
    elif side != "primal":
        raise ParameterError(f"side must be 'primal' or 'dual', got {side!r}")
    return code_from_subsets(inc.v, inc.blocks, f"{cls.profile} {side}")


def verify_recovery_plan(code: PirCode) -> Verdict:
    cols = code.columns()
    if len(code.plan) != code.s:
        return Verdict(False, "PlanShape", None, (len(code.plan), code.s))
    for i, sets in enumerate(code.plan):
        used = {}
        for R in sets:
            if not R or any(not 0 <= c < code.m for c in R):
                return Verdict(False, "BadColumn", i, (R,))
            acc = 0
            for c in R:
                acc ^= cols[c]
            if acc != 1 << i or len(set(R)) != len(R):
                return Verdict(False, "SumMismatch", i, (R,))
            for c in R:
                if c in used:
                    return Verdict(False, "DisjointnessViolation", i, (used[c], R))
                used[c] = R
        if len(sets) < code.k:
            return Verdict(False, "TooFewSets", i, (len(sets), code.k))
    return Verdict(True)


def _minimal_sets_through(cols, avail: int, start: int, target: int, max_size, budget):
    """Yield column bitmasks S with start in S, S within avail, columns of S
    linearly independent and summing to target.  Deduplicated."""
    seen = set()
    order = sorted(range(len(cols)), key=lambda c: (cols[c].bit_count() != 1, c))

    def extend(chosen: int, size: int, residual: int, basis: dict):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchTimeout("oracle node budget exhausted", nodes=budget[1])
        if residual == 0:
            if chosen not in seen:
                seen.add(chosen)
                yield chosen
            return
        if max_size is not None and size >= max_size:
            return
        low = residual & -residual
        for c in order:
            if not (avail >> c & 1) or chosen >> c & 1 or not cols[c] & low:
                continue
            v = cols[c]
            for piv in sorted(basis, reverse=True):
                if v & piv:
                    v ^= basis[piv]
            if v == 0:
                continue
            nb = dict(basis)
            nb[1 << (v.bit_length() - 1)] = v
            yield from extend(chosen | 1 << c, size + 1, residual ^ cols[c], nb)

    v0 = cols[start]
    yield from extend(1 << start, 1, target ^ v0, {1 << (v0.bit_length() - 1): v0})


def max_disjoint_recovery(code: PirCode, i: int, limit: int | None = None,
                          max_size: int | None = None, max_nodes: int = 5_000_000) -> int:
    """Largest number of pairwise disjoint column sets summing to e_i,
    found by exhaustive branch and bound (capped at ``limit``)."""
    if code.m > ORACLE_MAX_COLUMNS:
        raise ResourceGuard(f"oracle limited to m <= {ORACLE_MAX_COLUMNS}, got {code.m}")
    if not 0 <= i < code.s:
        raise ParameterError(f"bit {i} out of range")
    cols = code.columns()
    target = 1 << i
    row = sum(1 << c for c, v in enumerate(cols) if v & target)
    cap = row.bit_count() if limit is None else min(limit, row.bit_count())
    best = [0]
    budget = [max_nodes, max_nodes]

    class _Done(Exception):
        pass

    def search(avail: int, count: int):
        if count > best[0]:
            best[0] = count
            if best[0] >= cap:
                raise _Done
        live = avail & row
        if count + live.bit_count() <= best[0]:
            return
        c = (live & -live).bit_length() - 1
        for S in _minimal_sets_through(cols, avail, c, target, max_size, budget):
            search(avail & ~S, count + 1)
        search(avail & ~(1 << c), count)

    try:
        search((1 << code.m) - 1, 0)
    except _Done:
        pass
    return best[0]


def combine_codes(c1: PirCode, c2: PirCode) -> PirCode:
    """[I | A1 | I | A2]: the second identity block becomes s unit parity
    columns, so both plans survive intact and k = k1 + k2."""
    if c1.s != c2.s:
        raise DimensionMismatch(f"dimensions differ: {c1.s} vs {c2.s}")
    s = c1.s
    shift = c1.m
    parity = c1.parity + tuple((i,) for i in range(s)) + c2.parity
    plan = tuple(
        p1 + tuple(tuple(c + shift for c in R) for R in p2) for p1, p2 in zip(c1.plan, c2.plan)
    )
    return PirCode(s, parity, c1.k + c2.k, plan, f"{c1.label}+{c2.label}".strip("+"))


def combine_subpackings(packing: PartialPacking, h1: int, h2: int,
                        start2: int | None = None) -> PirCode:
    """Code of the (h1+h2-1)-partial packing made of partitions
    [0, h1-1) and [start2, start2+h2-1); its length is m1 + m2 - s."""
    if h1 < 2 or h2 < 2 or h1 + h2 > packing.k + 1:
        raise HOutOfRange(f"need h1, h2 >= 2 and h1+h2 <= {packing.k + 1}, got {h1}, {h2}")
    if start2 is None:
        start2 = h1 - 1
    if start2 < h1 - 1:
        raise Overlap(f"second range starts at {start2}, inside [0, {h1 - 1})")
    if start2 + h2 - 1 > len(packing.partitions):
        raise HOutOfRange("second range runs past the last partition")
    chosen = packing.partitions[: h1 - 1] + packing.partitions[start2 : start2 + h2 - 1]
    sub = PartialPacking(packing.s, chosen, f"{packing.label}<{h1},{h2}>")
    return code_from_packing(sub)


def puncture(code: PirCode, c: int | None = None) -> PirCode:
    """Delete parity column c (the last one by default).  Each bit loses at
    most one recovery set, so k drops by one."""
    if not code.parity:
        raise ParameterError("no parity column to delete")
    c = code.m - 1 if c is None else c
    if not code.s <= c < code.m:
        raise ParameterError(f"column {c} is not a parity column")
    parity = code.parity[: c - code.s] + code.parity[c - code.s + 1 :]
    plan = []
    for sets in code.plan:
        plan.append(tuple(tuple(x - (x > c) for x in R) for R in sets if c not in R))
    return PirCode(code.s, parity, code.k - 1, tuple(plan), code.label)


def shorten(code: PirCode, j: int | None = None) -> PirCode:
    """Delete information bit j (the last one by default): row j and
    identity column j go, the other plans lose column j."""
    if code.s < 2:
        raise ParameterError("cannot shorten a code of dimension 1")
    j = code.s - 1 if j is None else j
    if not 0 <= j < code.s:
        raise ParameterError(f"bit {j} out of range")

    def row(i):
        return i - (i > j)

    parity = tuple(tuple(row(i) for i in P if i != j) for P in code.parity)
    plan = [
        tuple(tuple(x - (x > j) for x in R if x != j) for R in sets)
        for i, sets in enumerate(code.plan)
        if i != j
    ]
    return PirCode(code.s - 1, parity, code.k, tuple(plan), code.label)


def extend_odd(code: PirCode) -> PirCode:
    """For odd k, append the sum of all columns.  The first k sets for bit i
    cover e_i an odd number of times, so the new column together with every
    column outside those sets also sums to e_i."""
    if code.k % 2 == 0:
        raise ParameterError(f"extend_odd needs odd k, got {code.k}")
    total = 0
    for col in code.columns():
        total ^= col
    new = code.m
    parity = code.parity + (tuple(i for i in range(code.s) if total >> i & 1),)
    plan = []
    for sets in code.plan:
        first = sets[: code.k]
        used = {c for R in first for c in R}
        plan.append(tuple(first) + (tuple(c for c in range(code.m) if c not in used) + (new,),))
    return PirCode(code.s, parity, code.k + 1, tuple(plan), code.label)


def lrc_params(code: PirCode) -> LrcParams:
    sizes = [len(R) for sets in code.plan for R in sets if len(R) > 1]
    return LrcParams(max(sizes, default=1), code.k - 1)


def export_matrix(code: PirCode) -> str:
    out = [f"{code.s} {code.m}", *code.rows()]
    for i, sets in enumerate(code.plan):
        out.append(f"{i}: " + " ".join("{" + ",".join(map(str, R)) + "}" for R in sets))
    return "\n".join(out) + "\n"


def _parse_plan_line(line: str, s: int):
    head, _, rest = line.partition(":")
    try:
        i = int(head)
        sets = []
        for tok in rest.split():
            if not (tok.startswith("{") and tok.endswith("}")):
                raise ValueError(tok)
            sets.append(tuple(int(c) for c in tok[1:-1].split(",") if c))
    except ValueError as exc:
        raise ParseError(f"bad plan line {line!r}") from exc
    if not 0 <= i < s:
        raise ParseError(f"plan line for bit {i} out of range")
    return i, tuple(sets)


def import_matrix(text: str, k: int | None = None) -> PirCode:
    """Parse a matrix file; a supplied plan is verified, a missing one is
    rebuilt from the parity columns."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        s, m = map(int, lines[0].split())
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    if s < 1 or m < s or len(lines) < 1 + s:
        raise ParseError(f"header says {s} rows, file has {len(lines) - 1} lines")
    rows = lines[1 : 1 + s]
    for r in rows:
        if len(r) != m or set(r) - {"0", "1"}:
            raise ParseError(f"row {r!r} is not {m} binary digits")
    for i in range(s):
        for c in range(s):
            if rows[i][c] != ("1" if i == c else "0"):
                raise ParseError("first s columns are not the identity")
    parity = tuple(tuple(i for i in range(s) if rows[i][c] == "1") for c in range(s, m))
    plan_lines = lines[1 + s :]
    if plan_lines:
        plan = [None] * s
        for ln in plan_lines:
            i, sets = _parse_plan_line(ln, s)
            plan[i] = sets
        if any(p is None for p in plan):
            raise ParseError("plan lines do not cover every bit")
        declared = min(len(p) for p in plan) if k is None else k
        code = PirCode(s, parity, declared, tuple(plan))
    else:
        if any(not P for P in parity):
            raise VerificationFailed("zero parity column")
        try:
            code = code_from_subsets(s, parity)
        except IntersectionViolation as exc:
            raise VerificationFailed(f"no canonical plan: {exc}") from exc
        if k is not None:
            code = PirCode(s, code.parity, k, code.plan)
    verdict = verify_recovery_plan(code)
    if not verdict:
        raise VerificationFailed(f"recovery plan fails: {verdict}")
    return code
