"""Structured addition network computing ``A v`` for a CFFT plan.

Pipeline: pad + reorder (wiring only), pre-addition, one ``k x k`` binary
matrix-vector product per product of an ``m``-point cyclic bilinear
algorithm (Four-Russians), post-addition, and reorder back.  The direct
row-by-row XOR evaluation in :func:`direct_av` is the reference for all of it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bilinear import BilinearAlgorithm, ceil_log2, gen_cyclic, merge_products, xor_cost
from .gf2m import BitMatrix, popcount, xor_accumulate
from .planner import BlockCyclicForm, CfftPlan, PlanError

NETLIST_FORMAT_VERSION = "cfft-netlist/1"


def direct_av(A: BitMatrix, v: Sequence[int]) -> tuple[list[int], int]:
    """Row-by-row XOR evaluation; returns ``(A v, additions)``."""
    if len(v) != A.cols:
        raise ValueError(f"vector length {len(v)} != {A.cols} columns")
    out = []
    adds = 0
    for row in A.row_masks:
        x, c = xor_accumulate(row, v)
        out.append(x)
        adds += c
    return out, adds


def direct_av_cost(A: BitMatrix) -> int:
    return sum(xor_cost(r) for r in A.row_masks)


# ---------- Four-Russians k x k products

def _gray_order(width: int):
    """Yield ``(code, previous code)`` for every nonzero code of a Gray sequence."""
    prev = 0
    for i in range(1, 1 << width):
        g = i ^ (i >> 1)
        yield g, prev
        prev = g


@dataclass(frozen=True)
class FourRussiansTableau:
    k: int  # rows
    cols: int
    s: int  # nominal chunk width, ceil(log2 k)
    groups: tuple[tuple[int, int], ...]  # (first column, width)
    # tables[g][c]: rows whose columns in group g select combination c
    tables: tuple[tuple[int, ...], ...]
    table_adds: int
    sum_adds: int

    @property
    def add_count(self) -> int:
        return self.table_adds + self.sum_adds


def build_four_russians(M: BitMatrix) -> FourRussiansTableau:
    k, cols = M.rows, M.cols
    if not 1 <= k <= 4096:
        raise ValueError(f"matrix size {k} outside [1, 4096]")
    s = ceil_log2(k)
    width = max(s, 1)  # k = 1 gives s = 0; use single columns
    groups = tuple((c, min(width, cols - c)) for c in range(0, cols, width))
    tables = []
    selections = [0] * k  # number of nonzero selections per row
    for start, w in groups:
        table = [0] * (1 << w)
        low = (1 << w) - 1
        for i, row in enumerate(M.row_masks):
            c = (row >> start) & low
            if c:
                table[c] |= 1 << i
                selections[i] += 1
        tables.append(tuple(table))
    table_adds = sum((1 << w) - w - 1 for _, w in groups)
    sum_adds = sum(max(c - 1, 0) for c in selections)
    return FourRussiansTableau(k, cols, s, groups, tuple(tables), table_adds, sum_adds)


def eval_four_russians(t: FourRussiansTableau, x: Sequence[int]) -> tuple[list[int], int]:
    """Three-stage evaluation: combination tables, lookup, and row sums."""
    if len(x) != t.cols:
        raise ValueError(f"vector length {len(x)} != {t.cols}")
    adds = 0
    out = [0] * t.k
    terms = [0] * t.k
    for (start, w), rowsets in zip(t.groups, t.tables):
        table = [0] * (1 << w)
        for code, prev in _gray_order(w):
            if code & (code - 1) == 0:
                table[code] = x[start + code.bit_length() - 1]
            else:
                flipped = (code ^ prev).bit_length() - 1
                table[code] = table[prev] ^ x[start + flipped]
                adds += 1
        for code in range(1, 1 << w):
            rows = rowsets[code]
            val = table[code]
            i = 0
            while rows:
                if rows & 1:
                    out[i] ^= val
                    terms[i] += 1
                rows >>= 1
                i += 1
    adds += sum(max(c - 1, 0) for c in terms)
    return out, adds


# ---------- the structured network

class AddnetError(PlanError):
    pass


@dataclass(frozen=True)
class AdditionNetworkPlan:
    form: BlockCyclicForm
    conv: BilinearAlgorithm
    G: tuple[BitMatrix, ...]
    live: tuple[int, ...]
    duplicates: dict[int, int] = field(hash=False, compare=False)
    mvps: dict[int, FourRussiansTableau] = field(hash=False, compare=False)
    # pre_sets[t][i1]: which reordered sub-vectors u_d feed entry i1 of module t
    pre_sets: dict[int, tuple[int, ...]] = field(hash=False, compare=False)
    post_rows: tuple[int, ...] = ()
    static_counts: Counter = field(default_factory=Counter, hash=False, compare=False)

    @property
    def r(self) -> int:
        return self.conv.r

    @property
    def n(self) -> int:
        return len(self.form.row_perm)

    def status(self, t: int) -> str:
        if t in self.mvps:
            return "live"
        if t in self.duplicates:
            return "duplicate"
        return "elided"


def build_addnet(form: BlockCyclicForm, A: Optional[BitMatrix] = None) -> AdditionNetworkPlan:
    """Build the network for ``form``; checked against ``A`` when given.

    The circulant block product ``y_i = sum_j c_{j-i} u_j`` is a cyclic
    correlation, so the fixed sequence is index-reversed (``c_{-d}``) to run
    it through a cyclic convolution algorithm.
    """
    k, m, sizes = form.k, form.m, form.sizes
    conv = gen_cyclic(m)
    zero = BitMatrix.zeros(k, k)
    G = []
    for row in conv.pre_left.row_masks:
        g = zero
        for d in range(m):
            if row >> d & 1:
                g = g.xor(form.blocks[(-d) % m])
        G.append(g)
    keys = [
        None if g.is_zero() or rrow == 0 else (g.row_masks, rrow)
        for g, rrow in zip(G, conv.pre_right.row_masks)
    ]
    live, alias, post_rows = merge_products(keys, conv.post.row_masks)
    mvps = {t: build_four_russians(G[t]) for t in live}
    pre_sets = {
        t: tuple(conv.pre_right.row_masks[t] & ((1 << sizes[i1]) - 1) for i1 in range(k))
        for t in live
    }
    counts = Counter(
        pre=sum(xor_cost(mask) for t in live for mask in pre_sets[t]),
        mvp=sum(tab.add_count for tab in mvps.values()),
        post=sum(xor_cost(post_rows[i2]) for i1 in range(k) for i2 in range(sizes[i1])),
    )
    net = AdditionNetworkPlan(form, conv, tuple(G), tuple(live), alias, mvps, pre_sets,
                              tuple(post_rows), counts)
    if A is not None:
        _self_check(net, A)
    return net


def _self_check(net: AdditionNetworkPlan, A: BitMatrix) -> None:
    # The network only XORs, so feeding v_j = 2^j returns each output's
    # row of the implemented matrix; comparing against A covers every input.
    n = net.n
    if A.rows != n or A.cols != n:
        raise AddnetError("matrix does not match the block form")
    out, _ = _run(net, [1 << j for j in range(n)])
    if tuple(out) != A.row_masks:
        raise AddnetError("addition network does not reproduce A (orientation check failed)")


def _run(net: AdditionNetworkPlan, v: Sequence[int]) -> tuple[list[int], Counter]:
    form = net.form
    k, m, sizes = form.k, form.m, form.sizes
    u = form.u_from_v(v)
    tally = Counter(pre=0, mvp=0, post=0)
    products = {}
    for t in net.live:
        w = []
        for i1, mask in enumerate(net.pre_sets[t]):
            acc = 0
            terms = 0
            d = 0
            while mask:
                if mask & 1:
                    acc ^= u[d * k + i1]
                    terms += 1
                mask >>= 1
                d += 1
            tally["pre"] += max(terms - 1, 0)
            w.append(acc)
        p, adds = eval_four_russians(net.mvps[t], w)
        tally["mvp"] += adds
        products[t] = p
    bu = [0] * (k * m)
    for i1 in range(k):
        for i2 in range(sizes[i1]):
            row = net.post_rows[i2]
            acc = 0
            terms = 0
            t = 0
            while row:
                if row & 1:
                    acc ^= products[t][i1]
                    terms += 1
                row >>= 1
                t += 1
            tally["post"] += max(terms - 1, 0)
            bu[i2 * k + i1] = acc
    return form.extract(bu), tally


def eval_addnet(net: AdditionNetworkPlan, v: Sequence[int]) -> tuple[list[int], Counter]:
    """``A v`` through the network, with additions tallied per stage."""
    if len(v) != net.n:
        raise ValueError(f"vector length {len(v)} != {net.n}")
    return _run(net, v)


# ---------- netlist documents

def _mvp_entry(net: AdditionNetworkPlan, t: int) -> dict:
    entry: dict = {"index": t, "status": net.status(t)}
    if t in net.duplicates:
        entry["duplicate_of"] = net.duplicates[t]
    if t not in net.mvps:
        return entry
    tab = net.mvps[t]
    entry.update(k=tab.k, s=tab.s)
    nodes = []
    groups = []
    refs: list[dict[int, str]] = []
    for g, ((start, w), rowsets) in enumerate(zip(tab.groups, tab.tables)):
        groups.append({"columns": list(range(start, start + w)),
                       "tables": [format(x, "x") for x in rowsets]})
        ref = {}
        for code, prev in _gray_order(w):
            if code & (code - 1) == 0:
                ref[code] = f"w{t}_{start + code.bit_length() - 1}"
            else:
                flipped = (code ^ prev).bit_length() - 1
                nid = f"m{t}.g{g}.{code:x}"
                nodes.append({"id": nid, "inputs": [ref[prev], f"w{t}_{start + flipped}"]})
                ref[code] = nid
        refs.append(ref)
    for i in range(tab.k):
        inputs = []
        for g, rowsets in enumerate(tab.tables):
            for code in range(1, len(rowsets)):
                if rowsets[code] >> i & 1:
                    inputs.append(refs[g][code])
        nodes.append({"id": f"p{t}_{i}", "inputs": inputs})
    entry["groups"] = groups
    entry["nodes"] = nodes
    entry["additions"] = tab.add_count
    return entry


def export_netlist(net: AdditionNetworkPlan) -> dict:
    """Network description with explicit fan-in for every node.

    Node cost is ``max(len(inputs) - 1, 0)``; zero-input nodes are constant
    zero.  The per-stage sums of node costs equal ``static_counts``.
    """
    form = net.form
    k, m, sizes = form.k, form.m, form.sizes
    pad = [{"id": f"u{q}", "source": (f"v{src}" if src >= 0 else "zero")}
           for q, src in enumerate(form.u_map)]
    pre_nodes = []
    for t in net.live:
        for i1, mask in enumerate(net.pre_sets[t]):
            pre_nodes.append({"id": f"w{t}_{i1}",
                              "inputs": [f"u{d * k + i1}" for d in range(m) if mask >> d & 1]})
    post_nodes = []
    for i1 in range(k):
        for i2 in range(sizes[i1]):
            row = net.post_rows[i2]
            post_nodes.append({"id": f"y{i2 * k + i1}",
                               "inputs": [f"p{t}_{i1}" for t in range(net.r) if row >> t & 1]})
    outputs = [""] * net.n
    for b_row, a_row in form.out_map:
        outputs[a_row] = f"y{b_row}"
    counts = dict(net.static_counts)
    counts["total"] = sum(net.static_counts.values())
    return {
        "version": NETLIST_FORMAT_VERSION,
        "n": net.n,
        "m": m,
        "k": k,
        "r": net.r,
        "stages": [
            {"name": "pad_reorder", "nodes": pad},
            {"name": "pre_addition", "nodes": pre_nodes},
            {"name": "mvp", "modules": [_mvp_entry(net, t) for t in range(net.r)]},
            {"name": "post_addition", "nodes": post_nodes},
            {"name": "extract", "outputs": outputs},
        ],
        "counts": counts,
    }


def netlist_counts(doc: dict) -> dict[str, int]:
    """Recount additions from the node fan-ins of a netlist document."""
    stages = {s["name"]: s for s in doc["stages"]}

    def cost(nodes):
        return sum(max(len(nd["inputs"]) - 1, 0) for nd in nodes)

    out = {
        "pre": cost(stages["pre_addition"]["nodes"]),
        "mvp": sum(cost(mod.get("nodes", [])) for mod in stages["mvp"]["modules"]),
        "post": cost(stages["post_addition"]["nodes"]),
    }
    out["total"] = sum(out.values())
    return out


def padding_reaches_outputs(doc: dict) -> bool:
    """True if any zero-padding position feeds, transitively, an extracted output."""
    stages = {s["name"]: s for s in doc["stages"]}
    tainted = {nd["id"] for nd in stages["pad_reorder"]["nodes"] if nd["source"] == "zero"}
    ordered = list(stages["pre_addition"]["nodes"])
    for mod in stages["mvp"]["modules"]:
        ordered.extend(mod.get("nodes", []))
    ordered.extend(stages["post_addition"]["nodes"])
    for nd in ordered:
        if any(i in tainted for i in nd["inputs"]):
            tainted.add(nd["id"])
    return any(o in tainted for o in stages["extract"]["outputs"])
