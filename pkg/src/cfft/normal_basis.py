"""Normal bases of subfields GF(2^d) inside GF(2^m).

Coordinate convention: an element ``e`` of the subfield is written
``e = sum_s a_s * gamma^(2^s)`` and its coordinate mask has bit ``s`` equal
to ``a_s``.  Squaring sends ``a_s`` to position ``(s + 1) mod d``, i.e. it
rotates the mask left by one within ``d`` bits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2m import BitMatrix, FieldError, FieldSpec, gf2_inverse, gf2_rank, parity


class NotInSubfieldError(FieldError):
    pass


@dataclass(frozen=True)
class NormalBasis:
    field: FieldSpec
    degree: int
    gamma: int
    conjugates: tuple[int, ...]
    # m-bit positions where the conjugates restrict to an invertible d x d block
    pivot_bits: tuple[int, ...]
    # inverse of that restricted block; rows indexed by coordinate s
    solver: BitMatrix

    def expand(self, coords: int) -> int:
        """Field element with the given coordinate mask."""
        e = 0
        for s, g in enumerate(self.conjugates):
            if coords >> s & 1:
                e ^= g
        return e

    def in_subfield(self, e: int) -> bool:
        t = e
        for _ in range(self.degree):
            t = self.field.sqr(t)
        return t == e


def rotate_left(mask: int, width: int, by: int = 1) -> int:
    by %= width
    full = (1 << width) - 1
    return ((mask << by) | (mask >> (width - by))) & full


def rotate_right(mask: int, width: int, by: int = 1) -> int:
    return rotate_left(mask, width, width - by % width)


def conjugates_of(field: FieldSpec, gamma: int, degree: int) -> tuple[int, ...]:
    out = [gamma]
    for _ in range(degree - 1):
        out.append(field.sqr(out[-1]))
    return tuple(out)


def _restriction(conj: tuple[int, ...], m: int) -> tuple[int, ...]:
    """Pick ``len(conj)`` bit positions on which the conjugates stay independent."""
    basis: list[tuple[int, int]] = []  # (reduced vector, its leading bit)
    for v in conj:
        for b, lead in basis:
            if v >> lead & 1:
                v ^= b
        if not v:
            raise ValueError("conjugates are linearly dependent")
        lead = v.bit_length() - 1
        basis = [(b ^ v if b >> lead & 1 else b, lb) for b, lb in basis]
        basis.append((v, lead))
    return tuple(sorted(lead for _, lead in basis))


def find_normal_basis(field: FieldSpec, degree: int) -> NormalBasis:
    """First normal basis of GF(2^degree) found by scanning subfield elements.

    Candidates are ``alpha^(j * (2^m - 1) / (2^degree - 1))`` for ascending
    ``j >= 1``; the first one whose conjugates are GF(2)-independent wins.
    """
    m = field.m
    if degree < 1 or m % degree:
        raise ValueError(f"subfield degree {degree} does not divide m={m}")
    step = field.n // ((1 << degree) - 1)
    for j in range(1, 1 << degree):
        gamma = field.alpha_pow(j * step)
        conj = conjugates_of(field, gamma, degree)
        if gf2_rank(conj) != degree:
            continue
        pivots = _restriction(conj, m)
        # column s of the restricted block is conjugate s
        block = BitMatrix.from_rows(
            [sum(((conj[s] >> p) & 1) << s for s in range(degree)) for p in pivots],
            degree,
        )
        return NormalBasis(field, degree, gamma, conj, pivots, gf2_inverse(block))
    raise AssertionError(f"no normal basis of GF(2^{degree}) found in {field}")


def coordinates(e: int, basis: NormalBasis) -> int:
    """Coordinate mask of subfield element ``e`` in ``basis``."""
    if not basis.in_subfield(e):
        raise NotInSubfieldError(f"{e:#x} is not in GF(2^{basis.degree})")
    restricted = 0
    for i, p in enumerate(basis.pivot_bits):
        restricted |= ((e >> p) & 1) << i
    coords = 0
    for s, row in enumerate(basis.solver.row_masks):
        coords |= parity(row & restricted) << s
    return coords
