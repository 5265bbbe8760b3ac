"""Construction of the cyclotomic FFT plan ``F = A (L f')`` and its block-cyclic form.

Index conventions used throughout:

* ``f'`` and ``v`` live in coset order: coset ``i`` occupies positions
  ``offsets[i] .. offsets[i] + m_i - 1``, position ``t`` of the block holding
  ``f[2^t s_i mod n]``.
* Column ``offsets[i] + s`` of ``A`` carries the coefficient of the normal
  basis element ``gamma^(2^s)`` of size ``m_i``.
* A row mask over ``w`` columns "steps" cyclically when entry ``s`` moves to
  ``s + 1 (mod w)``, which is a left rotation of the bitmask.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .bilinear import SpecializedConv, apply_specialized, gen_cyclic, specialize_left
from .cyclotomic import CosetPartition, partition_cosets
from .gf2m import BitMatrix, FieldSpec, make_field
from .normal_basis import NormalBasis, coordinates, find_normal_basis, rotate_left

PLAN_FORMAT_VERSION = "cfft-plan/1"

ORIENTATIONS = ("direct", "negated")


class PlanError(ValueError):
    """A plan could not be built or failed one of its structural checks."""


class ExperimentalLengthWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CfftPlan:
    field: FieldSpec
    n: int
    alpha_step: int  # the order-n root is alpha_prim ** alpha_step
    partition: CosetPartition
    bases: dict[int, NormalBasis]  # keyed by coset size
    perm_in: tuple[int, ...]  # f' = [f[p] for p in perm_in]
    b: tuple[tuple[int, ...], ...]
    conv: tuple[SpecializedConv, ...]
    orientation: str  # how a convolution output maps onto v, see _orient
    A: BitMatrix

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def block_widths(self) -> list[int]:
        return self.partition.sizes

    def root(self) -> int:
        return self.field.alpha_pow(self.alpha_step)

    def L_block(self, i: int) -> list[list[int]]:
        """The circulant block ``L_i``: entry ``(s, t) = gamma^(2^((s+t) mod m_i))``."""
        conj = self.bases[self.partition.cosets[i].size].conjugates
        size = len(conj)
        return [[conj[(s + t) % size] for t in range(size)] for s in range(size)]

    def static_conv_tally(self) -> Counter:
        total: Counter = Counter(pre=0, mult=0, post=0)
        for sc in self.conv:
            total.update(sc.static_tally())
        return total


def _orient(w: Sequence[int], orientation: str) -> list[int]:
    if orientation == "direct":
        return list(w)
    size = len(w)
    return [w[(-s) % size] for s in range(size)]


def convolve_block(plan: CfftPlan, i: int, block: Sequence[int]) -> tuple[list[int], Counter]:
    """``L_i @ block`` through the specialized convolution of coset ``i``."""
    w, tally = apply_specialized(plan.conv[i], block, plan.field)
    return _orient(w, plan.orientation), tally


def _pick_orientation(field, sizes, bases, convs) -> str:
    # L_i is linear over the field, so unit inputs pin it down exactly.
    for orientation in ORIENTATIONS:
        ok = True
        for size, sc in zip(sizes, convs):
            conj = bases[size].conjugates
            for t in range(size):
                unit = [0] * size
                unit[t] = 1
                got = _orient(apply_specialized(sc, unit, field)[0], orientation)
                if got != [conj[(s + t) % size] for s in range(size)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return orientation
    raise PlanError("no convolution orientation reproduces the L_i blocks")


def build_plan(field: FieldSpec, n: Optional[int] = None) -> CfftPlan:
    """Plan an ``n``-point DFT over ``field`` (default ``n = 2^m - 1``)."""
    full = field.n
    if n is None:
        n = full
    if n < 1 or full % n:
        raise PlanError(f"n={n} does not divide 2^{field.m} - 1 = {full}")
    step = full // n
    partition = partition_cosets(n)
    bases = {size: find_normal_basis(field, size) for size in sorted(set(partition.sizes))}

    b = []
    convs = []
    algs = {}
    for coset in partition.cosets:
        size = coset.size
        conj = bases[size].conjugates
        bi = tuple(conj[(-u) % size] for u in range(size))
        if size not in algs:
            algs[size] = gen_cyclic(size)
        b.append(bi)
        convs.append(specialize_left(algs[size], bi, field))
    orientation = _pick_orientation(field, partition.sizes, bases, convs)

    offsets = partition.offsets
    cache: dict[tuple[int, int], int] = {}
    rows = [0] * n
    for coset, off in zip(partition.cosets, offsets):
        basis = bases[coset.size]
        for j in range(n):
            e = (step * j * coset.representative) % full
            key = (coset.size, e)
            coords = cache.get(key)
            if coords is None:
                coords = cache[key] = coordinates(field.alpha_pow(e), basis)
            rows[j] |= coords << off
    A = BitMatrix(n, n, tuple(rows))
    return CfftPlan(field, n, step, partition, bases, tuple(partition.order()),
                    tuple(b), tuple(convs), orientation, A)


def coset_group_profile(plan_or_partition) -> dict[int, int]:
    """Number of cosets of each size, ascending by size."""
    partition = getattr(plan_or_partition, "partition", plan_or_partition)
    return {size: len(group) for size, group in partition.size_groups.items()}


# ---------- block-cyclic rearrangement of A

def cyclic_step(mask: int, width: int) -> int:
    """Move entry ``s`` of a row to ``s + 1`` (mod ``width``)."""
    return rotate_left(mask, width, 1)


def tile_row(mask: int, width: int, m: int) -> int:
    out = 0
    for rep in range(m // width):
        out |= mask << (rep * width)
    return out


@dataclass(frozen=True)
class BlockCyclicForm:
    k: int
    m: int
    sizes: tuple[int, ...]
    row_perm: tuple[int, ...]  # row r of A' is row row_perm[r] of A
    a_prime: tuple[tuple[BitMatrix, ...], ...]  # a_prime[i][j] is m_i x m_j
    blocks: tuple[BitMatrix, ...]  # c_0 .. c_{m-1}, each k x k: first block-row of B
    u_map: tuple[int, ...]  # u[q] = v[u_map[q]], or zero padding when -1
    out_map: tuple[tuple[int, int], ...]  # (row of B u, row of A v)

    def padding_positions(self) -> list[int]:
        return [q for q, src in enumerate(self.u_map) if src < 0]

    def tiled_block(self, i: int, j: int) -> BitMatrix:
        """``m x m`` extension of ``A'_{ij}`` by tiling."""
        blk = self.a_prime[i][j]
        mi, mj = self.sizes[i], self.sizes[j]
        return BitMatrix(self.m, self.m,
                         tuple(tile_row(blk.row_masks[t % mi], mj, self.m) for t in range(self.m)))

    def a_double_prime(self) -> BitMatrix:
        k, m = self.k, self.m
        rows = []
        for i1 in range(k):
            tiles = [self.tiled_block(i1, j1) for j1 in range(k)]
            for i2 in range(m):
                r = 0
                for j1, tile in enumerate(tiles):
                    r |= tile.row_masks[i2] << (j1 * m)
                rows.append(r)
        return BitMatrix(k * m, k * m, tuple(rows))

    def B(self) -> BitMatrix:
        """``B`` assembled entry by entry from ``A''`` via the reorder rule."""
        k, m = self.k, self.m
        app = self.a_double_prime()
        rows = [0] * (k * m)
        for ar in range(k * m):
            mask = app.row_masks[ar]
            br, _ = reorder_index(ar, 0, k, m)
            acc = 0
            ac = 0
            while mask:
                if mask & 1:
                    acc |= 1 << reorder_index(ar, ac, k, m)[1]
                mask >>= 1
                ac += 1
            rows[br] = acc
        return BitMatrix(k * m, k * m, tuple(rows))

    def block_of(self, B: BitMatrix, i2: int, j2: int) -> BitMatrix:
        k = self.k
        rows = [(B.row_masks[i2 * k + i1] >> (j2 * k)) & ((1 << k) - 1) for i1 in range(k)]
        return BitMatrix(k, k, tuple(rows))

    def u_from_v(self, v: Sequence[int]) -> list[int]:
        return [v[src] if src >= 0 else 0 for src in self.u_map]

    def extract(self, bu: Sequence[int]) -> list[int]:
        out = [0] * len(self.row_perm)
        for b_row, a_row in self.out_map:
            out[a_row] = bu[b_row]
        return out


def reorder_index(a_row: int, a_col: int, k: int, m: int) -> tuple[int, int]:
    """Position in ``B`` of entry ``(a_row, a_col)`` of ``A''``."""
    i1, i2 = divmod(a_row, m)
    j1, j2 = divmod(a_col, m)
    return i2 * k + i1, j2 * k + j1


def _is_cyclic(rows: Sequence[int], width: int, wrap: bool) -> bool:
    for t in range(len(rows) - 1):
        if rows[t + 1] != cyclic_step(rows[t], width):
            return False
    return not wrap or rows[0] == cyclic_step(rows[-1], width)


def build_block_form(plan: CfftPlan, experimental: bool = False) -> BlockCyclicForm:
    """Rearrange ``A`` into ``k x k`` cyclic blocks and the block-cyclic ``B``.

    Every block of ``A'`` and of its ``m x m`` extension is checked for
    cyclicity; a failure means the basis and shift conventions disagree.
    """
    m, n, k = plan.m, plan.n, plan.k
    if n != plan.field.n:
        if not experimental:
            raise PlanError(f"block form needs n = 2^m - 1 (got n={n}); pass experimental=True")
        warnings.warn(f"block form for n={n} < 2^{m} - 1 is experimental", ExperimentalLengthWarning)
    part = plan.partition
    sizes = tuple(part.sizes)
    offsets = part.offsets
    row_perm = tuple(part.order())

    a_prime = []
    for ci, coset in enumerate(part.cosets):
        row_blocks = []
        for cj, off in enumerate(offsets):
            mj = sizes[cj]
            rows = tuple((plan.A.row_masks[e] >> off) & ((1 << mj) - 1) for e in coset.elements)
            if not _is_cyclic(rows, mj, wrap=False):
                raise PlanError(f"block A'[{ci},{cj}] is not cyclic")
            tiled = [tile_row(rows[t % sizes[ci]], mj, m) for t in range(m)]
            if not _is_cyclic(tiled, m, wrap=True):
                raise PlanError(f"extension of block A'[{ci},{cj}] is not cyclic")
            row_blocks.append(BitMatrix(sizes[ci], mj, rows))
        a_prime.append(tuple(row_blocks))

    blocks = []
    for d in range(m):
        rows = []
        for i1 in range(k):
            r = 0
            for j1 in range(k):
                r |= ((a_prime[i1][j1].row_masks[0] >> (d % sizes[j1])) & 1) << j1
            rows.append(r)
        blocks.append(BitMatrix(k, k, tuple(rows)))

    u_map = []
    for i2 in range(m):
        for i1 in range(k):
            u_map.append(offsets[i1] + i2 if i2 < sizes[i1] else -1)
    out_map = tuple(
        (i2 * k + i1, part.cosets[i1].elements[i2])
        for i1 in range(k) for i2 in range(sizes[i1])
    )
    return BlockCyclicForm(k, m, sizes, row_perm, tuple(a_prime), tuple(blocks), tuple(u_map), out_map)


# ---------- plan documents

def plan_to_document(plan: CfftPlan, block_form: bool = False) -> dict:
    return {
        "version": PLAN_FORMAT_VERSION,
        "field": {"m": plan.m, "poly": format(plan.field.poly, "x")},
        "n": plan.n,
        "cosets": [list(c.elements) for c in plan.partition.cosets],
        "gamma": {str(size): format(basis.gamma, "x") for size, basis in plan.bases.items()},
        "orientation": plan.orientation,
        "A": plan.A.hex_rows(),
        "block_form": block_form,
    }


def plan_from_document(doc: dict) -> CfftPlan:
    """Rebuild a plan from its document and check it matches what was stored."""
    if doc.get("version") != PLAN_FORMAT_VERSION:
        raise PlanError(f"unsupported plan version {doc.get('version')!r}")
    field = make_field(int(doc["field"]["m"]), int(doc["field"]["poly"], 16))
    plan = build_plan(field, int(doc["n"]))
    if [list(c.elements) for c in plan.partition.cosets] != doc["cosets"]:
        raise PlanError("stored cosets disagree with the rebuilt plan")
    gammas = {str(s): format(b.gamma, "x") for s, b in plan.bases.items()}
    if gammas != doc["gamma"]:
        raise PlanError("stored normal bases disagree with the rebuilt plan")
    if plan.A.hex_rows() != doc["A"]:
        raise PlanError("stored A disagrees with the rebuilt plan")
    return plan


def save_plan(plan: CfftPlan, path, block_form: bool = False) -> None:
    with open(path, "w") as fh:
        json.dump(plan_to_document(plan, block_form), fh, indent=1)
        fh.write("\n")


def load_plan(path) -> CfftPlan:
    with open(path) as fh:
        return plan_from_document(json.load(fh))
