"""Points, lines and special point sets of PG(N, q) and AG(N, q).

Coordinates are tuples of field elements (ints in canonical order, see
:mod:`pircodes.gf`).  Projective points are normalized so that the first
nonzero coordinate is 1; point indices follow lexicographic order of the
normalized coordinate tuples.  Affine points are indexed in lexicographic
order of their coordinate vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import ConstructionFailed, ParameterError, QEven, ResourceGuard
from .gf import Field, gf

__all__ = [
    "PgPoint",
    "AgPoint",
    "GeomLine",
    "ProjectiveSpace",
    "AffineSpace",
    "projective_space",
    "affine_space",
    "pg_size",
    "pg_line_count",
    "pg_points",
    "pg_lines",
    "ag_points",
    "ag_lines",
    "denniston_arc",
    "hermitian_unital",
    "conic_interior",
    "export_point_set",
    "import_point_set",
]

MAX_POINTS = 200_000
MAX_LINES = 1_000_000


def pg_size(N: int, q: int) -> int:
    """Number of points of PG(N, q)."""
    return (q ** (N + 1) - 1) // (q - 1)


def pg_line_count(N: int, q: int) -> int:
    return (q ** (N + 1) - 1) * (q**N - 1) // ((q * q - 1) * (q - 1))


@dataclass(frozen=True)
class PgPoint:
    coords: tuple[int, ...]
    index: int


@dataclass(frozen=True)
class AgPoint:
    coords: tuple[int, ...]
    index: int


@dataclass(frozen=True)
class GeomLine:
    points: tuple[int, ...]
    direction: int | None = None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def normalize(F: Field, v) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in v)
    raise ValueError("the zero vector is not a projective point")


class ProjectiveSpace:
    """PG(N, q) with canonical point enumeration and lazily built lines."""

    def __init__(self, N: int, q: int):
        if N < 1:
            raise ParameterError("projective dimension must be at least 1")
        self.F = gf(q)
        self.N, self.q = N, q
        if pg_size(N, q) > MAX_POINTS:
            raise ResourceGuard(f"PG({N},{q}) has more than {MAX_POINTS} points")
        pts = []
        for v in product(range(q), repeat=N + 1):
            first = next((x for x in v if x), 0)
            if first == 1:
                pts.append(v)
        self.coords: list[tuple[int, ...]] = pts
        self.index = {v: i for i, v in enumerate(pts)}

    def __repr__(self):
        return f"PG({self.N},{self.q})"

    @property
    def size(self) -> int:
        return len(self.coords)

    def points(self) -> list[PgPoint]:
        return [PgPoint(v, i) for i, v in enumerate(self.coords)]

    def point_index(self, v) -> int:
        return self.index[normalize(self.F, v)]

    def line_through(self, i: int, j: int) -> tuple[int, ...]:
        """Sorted indices of the q+1 points on the line joining points i, j."""
        F = self.F
        a, b = self.coords[i], self.coords[j]
        pts = {i}
        for t in range(self.q):
            v = tuple(F.add(F.mul(t, x), y) for x, y in zip(a, b))
            pts.add(self.index[normalize(F, v)])
        return tuple(sorted(pts))

    @property
    def lines(self) -> list[GeomLine]:
        try:
            return self._lines
        except AttributeError:
            pass
        if pg_line_count(self.N, self.q) > MAX_LINES:
            raise ResourceGuard(f"PG({self.N},{self.q}) has more than {MAX_LINES} lines")
        n = self.size
        covered = [set() for _ in range(n)]
        found = []
        for i in range(n):
            for j in range(i + 1, n):
                if j in covered[i]:
                    continue
                line = self.line_through(i, j)
                for a in line:
                    covered[a].update(line)
                found.append(line)
        found.sort()
        self._lines = [GeomLine(pts) for pts in found]
        return self._lines

    @property
    def lines_through(self) -> list[list[int]]:
        """For each point, the indices of the lines through it."""
        try:
            return self._lines_through
        except AttributeError:
            pass
        through = [[] for _ in range(self.size)]
        for li, line in enumerate(self.lines):
            for p in line.points:
                through[p].append(li)
        self._lines_through = through
        return through

    def meet_counts(self, point_set) -> list[int]:
        """|line ∩ point_set| for every line, in line order."""
        s = set(point_set)
        return [sum(1 for p in line.points if p in s) for line in self.lines]


class AffineSpace:
    """AG(N, q) with parallel classes indexed by the points of PG(N-1, q)."""

    def __init__(self, N: int, q: int):
        if N < 1:
            raise ParameterError("affine dimension must be at least 1")
        if q**N > MAX_POINTS:
            raise ResourceGuard(f"AG({N},{q}) has more than {MAX_POINTS} points")
        self.F = gf(q)
        self.N, self.q = N, q
        self.coords = list(product(range(q), repeat=N))
        self.index = {v: i for i, v in enumerate(self.coords)}

    def __repr__(self):
        return f"AG({self.N},{self.q})"

    @property
    def size(self) -> int:
        return len(self.coords)

    def points(self) -> list[AgPoint]:
        return [AgPoint(v, i) for i, v in enumerate(self.coords)]

    @property
    def directions(self) -> list[tuple[int, ...]]:
        """Direction vectors, one per parallel class, in canonical order."""
        if self.N == 1:
            return [(1,)]
        return projective_space(self.N - 1, self.q).coords

    def line(self, point: int, direction) -> tuple[int, ...]:
        F = self.F
        base = self.coords[point]
        return tuple(
            sorted(
                self.index[tuple(F.add(x, F.mul(t, d)) for x, d in zip(base, direction))]
                for t in range(self.q)
            )
        )

    def parallel_class(self, direction_id: int) -> list[GeomLine]:
        d = self.directions[direction_id]
        seen = [False] * self.size
        lines = []
        for p in range(self.size):
            if not seen[p]:
                pts = self.line(p, d)
                for x in pts:
                    seen[x] = True
                lines.append(GeomLine(pts, direction_id))
        return lines


@lru_cache(maxsize=64)
def projective_space(N: int, q: int) -> ProjectiveSpace:
    return ProjectiveSpace(N, q)


@lru_cache(maxsize=64)
def affine_space(N: int, q: int) -> AffineSpace:
    return AffineSpace(N, q)


def pg_points(N: int, q: int) -> list[PgPoint]:
    return projective_space(N, q).points()


def pg_lines(N: int, q: int) -> list[GeomLine]:
    return projective_space(N, q).lines


def ag_points(N: int, q: int) -> list[AgPoint]:
    return affine_space(N, q).points()


def ag_lines(N: int, q: int) -> list[list[GeomLine]]:
    """All lines of AG(N, q), grouped into parallel classes."""
    if N < 2:
        raise ParameterError("ag_lines needs N >= 2")
    if pg_size(N - 1, q) * q ** (N - 1) > MAX_LINES:
        raise ResourceGuard(f"AG({N},{q}) has more than {MAX_LINES} lines")
    A = affine_space(N, q)
    return [A.parallel_class(d) for d in range(len(A.directions))]


def _check_arc(P: ProjectiveSpace, K, z: int):
    bad = [c for c in P.meet_counts(K) if c not in (0, z)]
    if bad:
        raise ConstructionFailed(f"point set is not a maximal arc of degree {z}: line meets {bad[0]}")


@lru_cache(maxsize=None)
def denniston_arc(n: int, n_prime: int) -> tuple[int, ...]:
    """Maximal arc of degree 2^n' in PG(2, 2^n), as sorted point indices.

    n' = 1 gives the regular hyperoval: the conic x0*x2 = x1^2 plus its
    nucleus (0,1,0).  Larger n' use Denniston's pencil: the affine points
    (1, x, y) with x^2 + b*x*y + y^2 in the additive subgroup
    {0, ..., 2^n' - 1}, for the least b making the quadratic form
    irreducible.  Every line of the plane is checked before returning.
    """
    if not 1 <= n_prime <= n:
        raise ParameterError("need 1 <= n' <= n")
    q, z = 2**n, 2**n_prime
    P = projective_space(2, q)
    F = P.F
    if n_prime == 1:
        pts = {P.index[(1, t, F.mul(t, t))] for t in F.elements()}
        pts.add(P.index[(0, 0, 1)])
        pts.add(P.index[(0, 1, 0)])
    else:
        beta = next(
            b for b in F.elements()
            if all(F.add(F.add(F.mul(x, x), F.mul(b, x)), 1) for x in F.elements())
        )
        subgroup = set(range(z))
        pts = set()
        for x in F.elements():
            for y in F.elements():
                val = F.add(F.add(F.mul(x, x), F.mul(beta, F.mul(x, y))), F.mul(y, y))
                if val in subgroup:
                    pts.add(P.index[(1, x, y)])
    if len(pts) != z * q - q + z:
        raise ConstructionFailed(f"arc has {len(pts)} points, expected {z * q - q + z}")
    _check_arc(P, pts, z)
    return tuple(sorted(pts))


@lru_cache(maxsize=None)
def hermitian_unital(q: int) -> tuple[int, ...]:
    """Points of PG(2, q^2) with x0^(q+1) + x1^(q+1) + x2^(q+1) = 0."""
    P = projective_space(2, q * q)
    F = P.F
    norm = [F.pow(x, q + 1) for x in F.elements()]
    pts = [
        i for i, (a, b, c) in enumerate(P.coords)
        if F.add(F.add(norm[a], norm[b]), norm[c]) == 0
    ]
    if len(pts) != q**3 + 1:
        raise ConstructionFailed(f"unital has {len(pts)} points, expected {q**3 + 1}")
    return tuple(pts)


@dataclass(frozen=True)
class ConicPoints:
    interior: tuple[int, ...]
    exterior: tuple[int, ...]
    conic: tuple[int, ...]


@lru_cache(maxsize=None)
def conic_interior(q: int) -> ConicPoints:
    """Internal, external and conic points of x0*x2 = x1^2 in PG(2, q), q odd.

    The conic is {(1, t, t^2)} together with (0, 0, 1).  A point off the
    conic is external when it lies on a tangent line (a line meeting the
    conic in exactly one point), internal otherwise.
    """
    P = projective_space(2, q)
    if P.F.p == 2:
        raise QEven(f"conic interior points need odd q, got {q}")
    F = P.F
    conic = {P.index[(1, t, F.mul(t, t))] for t in F.elements()}
    conic.add(P.index[(0, 0, 1)])
    exterior = set()
    for line, c in zip(P.lines, P.meet_counts(conic)):
        if c == 1:
            exterior.update(p for p in line.points if p not in conic)
    interior = [p for p in range(P.size) if p not in conic and p not in exterior]
    return ConicPoints(tuple(interior), tuple(sorted(exterior)), tuple(sorted(conic)))


def export_point_set(space, point_set) -> str:
    """First line v, then one line of space-separated coordinates per point."""
    lines = [str(len(point_set))]
    lines += [" ".join(map(str, space.coords[p])) for p in point_set]
    return "\n".join(lines) + "\n"


def import_point_set(space, text: str) -> tuple[int, ...]:
    from .errors import ParseError

    rows = [r for r in text.strip().splitlines() if r.strip()]
    try:
        v = int(rows[0])
        pts = [space.index[tuple(int(x) for x in r.split())] for r in rows[1:]]
    except (ValueError, KeyError, IndexError) as exc:
        raise ParseError(f"bad point-set text: {exc}") from exc
    if len(pts) != v:
        raise ParseError(f"header announces {v} points, found {len(pts)}")
    return tuple(pts)
