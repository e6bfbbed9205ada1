"""Finite fields GF(p^n) in polynomial representation.

Elements are stored as integers ``sum(c_i * p**i)`` where ``c_i`` are the
coefficients of the residue polynomial (low to high).  Integer order is
therefore lexicographic order on the coefficient vector read from the top
degree down, and it is the canonical element order used by every other
module (``0`` and ``1`` always come first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from .errors import DivisionByZero, FieldMismatch, NotPrimePower

__all__ = [
    "FieldSpec",
    "Field",
    "FieldElement",
    "make_field",
    "field_arith",
    "is_prime",
    "prime_power",
    "is_prime_power",
    "is_irreducible",
    "least_irreducible",
]

# Least monic irreducible of degree n over GF(p) (integer order), p^n <= 256.
# Prime fields use the modulus x.
MODULUS_TABLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 1, 0, 1, 1, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (7, 2): (1, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
}

# Arithmetic tables are q*q; refuse anything that would not fit comfortably.
MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, n)`` with ``p**n == q``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power (divisible by {p} and {r})")
    return p, n


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


def _poly_divides(g: list[int], f: list[int], p: int) -> bool:
    """True if monic ``g`` divides ``f`` over GF(p)."""
    a = list(f)
    while len(a) >= len(g):
        c = a[-1]
        if c:
            shift = len(a) - len(g)
            for i, gc in enumerate(g):
                a[shift + i] = (a[shift + i] - c * gc) % p
        a.pop()
    return not any(a)


def is_irreducible(coeffs, p: int) -> bool:
    """Exhaustive irreducibility test by trial division with every monic
    polynomial of degree at most n/2.  Intended for desk-scale degrees."""
    f = [c % p for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    n = len(f) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for low in product(range(p), repeat=d):
            if _poly_divides(list(low) + [1], f, p):
                return False
    return True


def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for v in range(p**n):
        low = [(v // p**i) % p for i in range(n)]
        if is_irreducible(low + [1], p):
            return tuple(low) + (1,)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    q: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p) or self.n < 1 or self.p**self.n != self.q:
            raise NotPrimePower(f"inconsistent field spec p={self.p} n={self.n} q={self.q}")
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")

    def __str__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    p, n = prime_power(q)
    modulus = MODULUS_TABLE.get((p, n)) or least_irreducible(p, n)
    return FieldSpec(p, n, q, modulus)


class Field:
    """Arithmetic tables for one FieldSpec.  Elements are plain ints."""

    def __init__(self, spec: FieldSpec):
        if spec.q > MAX_TABLE_ORDER:
            raise NotPrimePower(f"GF({spec.q}) exceeds the table size guard")
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        self.n = spec.n

    def __repr__(self):
        return f"Field({self.spec})"

    # coefficient vectors
    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p**i) % p for i in range(self.n))

    def from_coeffs(self, coeffs) -> int:
        p = self.p
        return sum((c % p) * p**i for i, c in enumerate(coeffs))

    def _mul_slow(self, a: int, b: int) -> int:
        p, n, mod = self.p, self.n, self.spec.modulus
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(len(prod) - 1, n - 1, -1):
            c = prod[d]
            if c:
                for i in range(n + 1):
                    prod[d - n + i] = (prod[d - n + i] - c * mod[i]) % p
        return self.from_coeffs(prod[:n])

    @cached_property
    def add_table(self) -> list[list[int]]:
        q = self.q
        vecs = [self.coeffs(a) for a in range(q)]
        p = self.p
        return [
            [self.from_coeffs([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)]
            for a in range(q)
        ]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        q = self.q
        if self.n == 1:
            return [[(a * b) % q for b in range(q)] for a in range(q)]
        return [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.add_table[a].index(0) for a in range(self.q)]

    @cached_property
    def inv_table(self) -> list[int]:
        inv = [0] * self.q
        for a in range(1, self.q):
            inv[a] = self.mul_table[a].index(1)
        return inv

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self.spec}")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_table[result][base]
            base = self.mul_table[base][base]
            e >>= 1
        return result

    def elements(self) -> range:
        """All elements in canonical order."""
        return range(self.q)

    def element(self, value) -> "FieldElement":
        if isinstance(value, (tuple, list)):
            value = self.from_coeffs(value)
        return FieldElement(self, value % self.q if self.n == 1 else value)


@lru_cache(maxsize=None)
def field_arith(spec: FieldSpec) -> Field:
    return Field(spec)


def gf(q: int) -> Field:
    """Shorthand for ``field_arith(make_field(q))``."""
    return field_arith(make_field(q))


@dataclass(frozen=True)
class FieldElement:
    """Operator-overloading wrapper around an element of a Field."""

    field: Field = field(repr=False, compare=False)
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element of {self.field.spec}")

    @property
    def spec(self) -> FieldSpec:
        return self.field.spec

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch(f"cannot mix {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, int) and 0 <= other < self.field.q:
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.sub(self.value, b))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.spec}({self.value})"
