"""Cyclotomic cosets modulo ``n`` with respect to 2, and the two coset-count lemmas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Coset:
    representative: int
    elements: tuple[int, ...]  # doubling order starting at the representative

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class CosetPartition:
    n: int
    cosets: tuple[Coset, ...]

    @property
    def k(self) -> int:
        return len(self.cosets)

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.cosets]

    @property
    def offsets(self) -> list[int]:
        """Start of each coset's block in the coset-ordered index space."""
        out, acc = [], 0
        for c in self.cosets:
            out.append(acc)
            acc += c.size
        return out

    @property
    def size_groups(self) -> dict[int, list[Coset]]:
        groups: dict[int, list[Coset]] = {}
        for c in self.cosets:
            groups.setdefault(c.size, []).append(c)
        return dict(sorted(groups.items()))

    def order(self) -> list[int]:
        """All of ``0..n-1`` listed coset by coset."""
        return [e for c in self.cosets for e in c.elements]


def partition_cosets(n: int) -> CosetPartition:
    """Partition ``{0, ..., n-1}`` into cyclotomic cosets mod ``n``.

    Cosets come out in ascending order of their representative (the smallest
    member), each listed as ``s, 2s, 4s, ...`` mod ``n``.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be odd and positive, got {n}")
    seen = bytearray(n)
    cosets = []
    for s in range(n):
        if seen[s]:
            continue
        elems = []
        e = s
        while not seen[e]:
            seen[e] = 1
            elems.append(e)
            e = (2 * e) % n
        cosets.append(Coset(s, tuple(elems)))
    return CosetPartition(n, tuple(cosets))


def multiplicative_order_of_two(n: int) -> int:
    if n == 1:
        return 1
    e, t = 1, 2 % n
    while t != 1:
        t = (2 * t) % n
        e += 1
    return e


@dataclass(frozen=True)
class Lemma1Row:
    size: int
    count: int
    bound: int
    passed: bool


def check_lemma1(p: CosetPartition, m: int) -> list[Lemma1Row]:
    """At most ``(2^s - 1) / s`` cosets of each size ``s`` when ``n = 2^m - 1``."""
    if p.n != (1 << m) - 1:
        raise ValueError(f"partition modulus {p.n} is not 2^{m} - 1")
    rows = []
    for size, group in p.size_groups.items():
        bound = ((1 << size) - 1) // size
        # count <= (2^s-1)/s  <=>  count * s <= 2^s - 1 for integers
        rows.append(Lemma1Row(size, len(group), bound, len(group) * size <= (1 << size) - 1))
    return rows


@dataclass(frozen=True)
class Lemma2Result:
    m: int
    k: int
    km: int
    passed: bool


def check_lemma2(m: int, partition: Optional[CosetPartition] = None) -> Lemma2Result:
    """Evaluate ``2^m - 1 < k*m < 2(2^m - 1)`` for the cosets mod ``2^m - 1``.

    The lower inequality is false at ``m = 1`` (one coset, ``k*m = 1``), so
    only ``m >= 2`` is accepted.
    """
    if m < 2:
        raise ValueError("the coset-count bound is only checked for m >= 2")
    n = (1 << m) - 1
    if partition is None:
        partition = partition_cosets(n)
    km = partition.k * m
    return Lemma2Result(m, partition.k, km, n < km < 2 * n)
