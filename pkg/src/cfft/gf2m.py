"""Arithmetic in GF(2^m) and small GF(2) linear algebra on int bitmasks.

Field elements are plain ints in the polynomial basis: bit ``i`` is the
coefficient of ``x^i``.  :class:`FieldElement` wraps an int together with its
field for callers who want operator syntax and mixing checks; the hot paths
in this package work on bare ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

M_MIN = 2
M_MAX = 20

# x^m + ... ; every entry is re-verified when a field is built.
DEFAULT_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
}


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


# ---------- polynomials over GF(2)

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, p: int) -> int:
    dp = poly_degree(p)
    while a and poly_degree(a) >= dp:
        a ^= p << (poly_degree(a) - dp)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a: int, b: int, p: int) -> int:
    return poly_mod(clmul(a, b), p)


def poly_powmod(a: int, e: int, p: int) -> int:
    result = 1
    a = poly_mod(a, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, a, p)
        a = poly_mulmod(a, a, p)
        e >>= 1
    return result


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(p: int) -> bool:
    """Rabin's irreducibility test over GF(2)."""
    m = poly_degree(p)
    if m < 1:
        return False
    x = 0b10
    # x^(2^m) == x mod p
    t = x
    for _ in range(m):
        t = poly_mulmod(t, t, p)
    if t != poly_mod(x, p):
        return False
    for q in prime_factors(m):
        t = x
        for _ in range(m // q):
            t = poly_mulmod(t, t, p)
        if poly_gcd(t ^ x, p) != 1:
            return False
    return True


def is_primitive(p: int) -> bool:
    """True when ``x`` has multiplicative order exactly ``2^m - 1`` mod ``p``."""
    m = poly_degree(p)
    n = (1 << m) - 1
    if not p & 1 or poly_powmod(0b10, n, p) != 1:
        return False
    return all(poly_powmod(0b10, n // q, p) != 1 for q in prime_factors(n))


# ---------- the field

@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) defined by a primitive polynomial ``poly``.

    The primitive element ``alpha`` is the residue class of ``x``.  Use
    :func:`make_field` rather than calling the constructor directly; both
    verify the polynomial.
    """

    m: int
    poly: int
    n: int = field(init=False)

    def __post_init__(self):
        if not M_MIN <= self.m <= M_MAX:
            raise FieldError(f"m must be in [{M_MIN}, {M_MAX}], got {self.m}")
        if poly_degree(self.poly) != self.m:
            raise FieldError(f"poly {self.poly:#x} does not have degree {self.m}")
        if not is_irreducible(self.poly):
            raise FieldError(f"poly {self.poly:#x} is reducible over GF(2)")
        if not is_primitive(self.poly):
            raise FieldError(f"poly {self.poly:#x} is irreducible but not primitive")
        object.__setattr__(self, "n", (1 << self.m) - 1)

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def alpha(self) -> int:
        return 0b10

    # log/antilog accelerator; the bitmask form stays canonical
    @cached_property
    def _exp(self) -> list[int]:
        n, top, poly = self.n, 1 << self.m, self.poly
        table = [0] * (2 * n)
        a = 1
        for i in range(n):
            table[i] = table[i + n] = a
            a <<= 1
            if a & top:
                a ^= poly
        return table

    @cached_property
    def _log(self) -> list[int]:
        table = [-1] * self.size
        exp = self._exp
        for i in range(self.n):
            table[exp[i]] = i
        return table

    def check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise FieldError(f"{a!r} is not an element of GF(2^{self.m})")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul_reference(self, a: int, b: int) -> int:
        """Carry-less multiply followed by reduction modulo ``poly``."""
        return poly_mod(clmul(a, b), self.poly)

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        log = self._log
        return self._exp[log[a] + log[b]]

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; negative exponents go through the inverse."""
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative inverse")
        return self.pow(a, self.n - 1)

    def alpha_pow(self, e: int) -> int:
        """``alpha ** e`` for any integer ``e``."""
        return self._exp[e % self.n]

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldError("log of zero")
        return self._log[a]

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(self, bits)

    def random_vector(self, rng, length: int) -> list[int]:
        return [rng.randrange(self.size) for _ in range(length)]

    def __repr__(self):
        return f"FieldSpec(m={self.m}, poly={self.poly:#x})"


def make_field(m: int, poly: Optional[int] = None) -> FieldSpec:
    """Build GF(2^m), falling back to the shipped primitive polynomial for ``m``.

    Raises
    ------
    FieldError
        If ``m`` is out of range or ``poly`` is not a primitive polynomial of
        degree ``m``.
    """
    if not isinstance(m, int) or not M_MIN <= m <= M_MAX:
        raise FieldError(f"m must be an integer in [{M_MIN}, {M_MAX}], got {m!r}")
    if poly is None:
        poly = DEFAULT_POLYS[m]
    return FieldSpec(m, poly)


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific :class:`FieldSpec`; arithmetic refuses to mix fields."""

    field: FieldSpec
    bits: int

    def __post_init__(self):
        self.field.check(self.bits)

    def _same(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"cannot mix elements of {self.field} and {other.field}")

    def __add__(self, other):
        self._same(other)
        return FieldElement(self.field, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other):
        self._same(other)
        return FieldElement(self.field, self.field.mul(self.bits, other.bits))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.bits, e))

    def __truediv__(self, other):
        self._same(other)
        return self * other.inverse()

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.bits))

    def __int__(self):
        return self.bits

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"FieldElement({self.bits:#0{self.field.m + 2}b})"


# ---------- GF(2) linear algebra

def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix; bit ``j`` of ``row_masks[i]`` is entry ``(i, j)``."""

    rows: int
    cols: int
    row_masks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_masks", tuple(self.row_masks))
        if len(self.row_masks) != self.rows:
            raise ValueError(f"expected {self.rows} row masks, got {len(self.row_masks)}")
        limit = 1 << self.cols
        for r in self.row_masks:
            if not 0 <= r < limit:
                raise ValueError(f"row mask {r:#x} wider than {self.cols} columns")

    @classmethod
    def from_rows(cls, masks: Sequence[int], cols: int) -> "BitMatrix":
        return cls(len(masks), cols, tuple(masks))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        cols = len(entries[0]) if entries else 0
        masks = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            masks.append(sum((b & 1) << j for j, b in enumerate(row)))
        return cls(len(masks), cols, tuple(masks))

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(size, size, tuple(1 << i for i in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.row_masks[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.row_masks]

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.row_masks):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(self.cols, self.rows, tuple(out))

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for r in self.row_masks:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.row_masks[j]
                r >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def mul_bits(self, x: int) -> int:
        """GF(2) product with a column vector given as a bitmask."""
        out = 0
        for i, r in enumerate(self.row_masks):
            out |= parity(r & x) << i
        return out

    def xor(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.rows, self.cols,
                         tuple(a ^ b for a, b in zip(self.row_masks, other.row_masks)))

    def is_zero(self) -> bool:
        return not any(self.row_masks)

    def weight(self) -> int:
        return sum(popcount(r) for r in self.row_masks)

    def hex_rows(self) -> list[str]:
        return [format(r, "x") for r in self.row_masks]


def xor_accumulate(mask: int, values: Sequence[int]) -> tuple[int, int]:
    """XOR the ``values`` selected by ``mask``; returns ``(result, additions)``."""
    acc = 0
    terms = 0
    j = 0
    while mask:
        if mask & 1:
            acc ^= values[j]
            terms += 1
        mask >>= 1
        j += 1
    return acc, max(terms - 1, 0)


def gf2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def gf2_solve(M: BitMatrix, rhs: int) -> Optional[int]:
    """Solve ``M x = rhs`` over GF(2) by Gaussian elimination.

    Returns one solution as a bitmask over the columns, or ``None`` when
    ``rhs`` lies outside the column space.  Free variables are set to zero,
    so for rank-deficient but consistent systems the returned solution is
    the one with no free columns selected.
    """
    if rhs >> M.rows:
        raise ValueError("rhs wider than the number of rows")
    # augmented rows: column bits, rhs bit stored at position M.cols
    aug = [r | (((rhs >> i) & 1) << M.cols) for i, r in enumerate(M.row_masks)]
    pivots: list[int] = []
    row = 0
    for col in range(M.cols):
        bit = 1 << col
        piv = next((i for i in range(row, len(aug)) if aug[i] & bit), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        for i in range(len(aug)):
            if i != row and aug[i] & bit:
                aug[i] ^= aug[row]
        pivots.append(col)
        row += 1
        if row == len(aug):
            break
    rhs_bit = 1 << M.cols
    if any(a == rhs_bit for a in aug[row:]):
        return None
    x = 0
    for i, col in enumerate(pivots):
        if aug[i] & rhs_bit:
            x |= 1 << col
    return x


def gf2_inverse(M: BitMatrix) -> BitMatrix:
    """Inverse of a square GF(2) matrix; raises ``ValueError`` if singular."""
    if M.rows != M.cols:
        raise ValueError("matrix is not square")
    size = M.rows
    aug = [r | (1 << (size + i)) for i, r in enumerate(M.row_masks)]
    for col in range(size):
        bit = 1 << col
        piv = next((i for i in range(col, size) if aug[i] & bit), None)
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(size):
            if i != col and aug[i] & bit:
                aug[i] ^= aug[col]
    return BitMatrix(size, size, tuple(a >> size for a in aug))
