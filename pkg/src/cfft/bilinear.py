"""Bilinear convolution algorithms with binary pre/post matrices.

An algorithm computes ``post @ ((pre_left @ x) * (pre_right @ y))`` where the
two pre products and the post product only XOR field elements together, and
``*`` is the entrywise field product.  The r entrywise products are therefore
the only field multiplications.

Values flowing through :func:`apply_bilinear` and friends may be any ints
that support ``^``; only the entrywise products need a field.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

from .gf2m import BitMatrix, FieldSpec, popcount, xor_accumulate

MAX_LENGTH = 64


def xor_cost(mask: int) -> int:
    """Two-input XORs needed to sum the terms selected by ``mask``."""
    return max(popcount(mask) - 1, 0)


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


@dataclass(frozen=True)
class BilinearAlgorithm:
    length: int
    out_len: int
    pre_left: BitMatrix
    pre_right: BitMatrix
    post: BitMatrix
    mode: str  # "linear" or "cyclic"

    def __post_init__(self):
        if self.mode not in ("linear", "cyclic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        r = self.pre_left.rows
        if (self.pre_right.rows, self.post.cols) != (r, r):
            raise ValueError("pre/post matrices disagree on the product count")
        if self.pre_left.cols != self.length or self.pre_right.cols != self.length:
            raise ValueError("pre matrices must have `length` columns")
        if self.post.rows != self.out_len:
            raise ValueError("post matrix must have `out_len` rows")

    @property
    def r(self) -> int:
        return self.pre_left.rows

    def static_additions(self) -> Counter:
        return Counter(
            pre=sum(xor_cost(r) for r in self.pre_left.row_masks)
            + sum(xor_cost(r) for r in self.pre_right.row_masks),
            post=sum(xor_cost(r) for r in self.post.row_masks),
        )


def _karatsuba(size: int) -> tuple[list[int], list[int]]:
    """Pre rows (shared by both operands) and post rows for a power-of-two size."""
    if size == 1:
        return [1], [1]
    h = size // 2
    pre_h, post_h = _karatsuba(h)
    rh = len(pre_h)
    pre = pre_h + [p << h for p in pre_h] + [p | (p << h) for p in pre_h]
    s0 = post_h
    s1 = [q << rh for q in post_h]
    s2 = [q << (2 * rh) for q in post_h]
    sub = 2 * h - 1
    post = []
    for i in range(2 * size - 1):
        acc = 0
        if i < sub:
            acc ^= s0[i]
        if 0 <= i - 2 * h < sub:
            acc ^= s1[i - 2 * h]
        if 0 <= i - h < sub:
            acc ^= s0[i - h] ^ s1[i - h] ^ s2[i - h]
        post.append(acc)
    return pre, post


def gen_linear(length: int) -> BilinearAlgorithm:
    """Karatsuba linear convolution of two length-``length`` sequences.

    The length is zero-padded up to a power of two ``L``, so the product
    count is ``3 ** ceil(log2(length))``; columns and output rows belonging
    to padded positions are dropped afterwards.
    """
    if not 1 <= length <= MAX_LENGTH:
        raise ValueError(f"length must be in [1, {MAX_LENGTH}], got {length}")
    size = 1 << ceil_log2(length)
    pre, post = _karatsuba(size)
    keep = (1 << length) - 1
    pre = [p & keep for p in pre]
    out_len = 2 * length - 1
    r = len(pre)
    pm = BitMatrix(r, length, tuple(pre))
    return BilinearAlgorithm(length, out_len, pm, pm, BitMatrix(out_len, r, tuple(post[:out_len])), "linear")


def wrap_cyclic(alg: BilinearAlgorithm, m: int) -> BilinearAlgorithm:
    """Fold a linear algorithm into an ``m``-point cyclic one (same products)."""
    if alg.mode != "linear":
        raise ValueError("wrap_cyclic needs a linear algorithm")
    if alg.length != m:
        raise ValueError(f"algorithm length {alg.length} != {m}")
    rows = [0] * m
    for i, row in enumerate(alg.post.row_masks):
        rows[i % m] ^= row
    return BilinearAlgorithm(m, m, alg.pre_left, alg.pre_right, BitMatrix(m, alg.r, tuple(rows)), "cyclic")


def gen_cyclic(m: int) -> BilinearAlgorithm:
    return wrap_cyclic(gen_linear(m), m)


def apply_bilinear(alg: BilinearAlgorithm, x: Sequence[int], y: Sequence[int],
                   field: FieldSpec) -> tuple[list[int], Counter]:
    """Evaluate the bilinear form; returns the output and an operation tally."""
    if len(x) != alg.length or len(y) != alg.length:
        raise ValueError(f"expected inputs of length {alg.length}, got {len(x)} and {len(y)}")
    tally: Counter = Counter(pre=0, mult=0, post=0)
    products = []
    for lrow, rrow in zip(alg.pre_left.row_masks, alg.pre_right.row_masks):
        a, ca = xor_accumulate(lrow, x)
        b, cb = xor_accumulate(rrow, y)
        tally["pre"] += ca + cb
        products.append(field.mul(a, b))
        tally["mult"] += 1
    out = []
    for row in alg.post.row_masks:
        v, c = xor_accumulate(row, products)
        tally["post"] += c
        out.append(v)
    return out, tally


def merge_products(keys: Sequence[Optional[Hashable]], post_rows: Sequence[int]
                   ) -> tuple[list[int], dict[int, int], list[int]]:
    """Drop dead products and fold duplicates into their first occurrence.

    ``keys[t]`` is ``None`` when product ``t`` is identically zero; products
    with equal keys are equal.  Returns the indices that must be computed,
    the duplicate map, and post rows rewritten over the kept indices (two
    copies of the same product cancel under XOR).
    """
    live: list[int] = []
    alias: dict[int, int] = {}
    first: dict[Hashable, int] = {}
    for t, key in enumerate(keys):
        if key is None:
            continue
        if key in first:
            alias[t] = first[key]
        else:
            first[key] = t
            live.append(t)
    rows = []
    used = 0
    for row in post_rows:
        acc = 0
        t = 0
        while row:
            if row & 1 and keys[t] is not None:
                acc ^= 1 << alias.get(t, t)
            row >>= 1
            t += 1
        rows.append(acc)
        used |= acc
    # products whose copies all cancel in the post matrix are never needed
    live = [t for t in live if used >> t & 1]
    return live, alias, rows


@dataclass(frozen=True)
class SpecializedConv:
    """A cyclic algorithm with its left operand fixed and folded into constants."""

    base: BilinearAlgorithm
    constants: tuple[int, ...]
    elided: frozenset[int]  # constant 0 (product skipped) or 1 (no multiply)
    live: tuple[int, ...]
    duplicates: dict[int, int] = field(hash=False, compare=False)
    post_rows: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return self.base.length

    @property
    def multiplications(self) -> int:
        return sum(1 for t in self.live if self.constants[t] != 1)

    def static_tally(self) -> Counter:
        pre = self.base.pre_right.row_masks
        return Counter(
            pre=sum(xor_cost(pre[t]) for t in self.live),
            mult=self.multiplications,
            post=sum(xor_cost(r) for r in self.post_rows),
        )


def specialize_left(alg: BilinearAlgorithm, fixed: Sequence[int], field: FieldSpec) -> SpecializedConv:
    if len(fixed) != alg.length:
        raise ValueError(f"fixed operand has length {len(fixed)}, expected {alg.length}")
    constants = tuple(xor_accumulate(row, fixed)[0] for row in alg.pre_left.row_masks)
    for c in constants:
        field.check(c)
    elided = frozenset(t for t, c in enumerate(constants) if c in (0, 1))
    keys = [
        None if c == 0 or rrow == 0 else (c, rrow)
        for c, rrow in zip(constants, alg.pre_right.row_masks)
    ]
    live, alias, rows = merge_products(keys, alg.post.row_masks)
    return SpecializedConv(alg, constants, elided, tuple(live), alias, tuple(rows))


def apply_specialized(sc: SpecializedConv, y: Sequence[int], field: FieldSpec) -> tuple[list[int], Counter]:
    if len(y) != sc.length:
        raise ValueError(f"expected input of length {sc.length}, got {len(y)}")
    tally: Counter = Counter(pre=0, mult=0, post=0)
    pre = sc.base.pre_right.row_masks
    products = [0] * sc.base.r
    for t in sc.live:
        b, c = xor_accumulate(pre[t], y)
        tally["pre"] += c
        const = sc.constants[t]
        if const == 1:
            products[t] = b
        else:
            products[t] = field.mul(const, b)
            tally["mult"] += 1
    out = []
    for row in sc.post_rows:
        v, c = xor_accumulate(row, products)
        tally["post"] += c
        out.append(v)
    return out, tally
