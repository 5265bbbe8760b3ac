"""Static complexity accounting and scaled asymptotic bound curves."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .addnet import AdditionNetworkPlan, direct_av_cost
from .bilinear import xor_cost
from .gf2m import make_field
from .planner import CfftPlan, build_plan

MULT_EXPONENT = math.log2(3 / 2)
ADD_EXPONENT = math.log2(8 / 3)

CSV_COLUMNS = ("m", "n", "k", "mults", "adds_conv", "adds_addnet", "adds_direct",
               "total_weighted", "bound_mult", "bound_add", "ratio_mult", "ratio_add")


def mult_weight(m: int) -> int:
    """Cost of one GF(2^m) multiplication in additions."""
    return 2 * m - 1


@dataclass(frozen=True)
class ComplexityReport:
    n: int
    m: int
    k: int
    mults: int
    mults_raw: int
    adds_conv_pre: int
    adds_conv_post: int
    adds_direct: int
    adds_addnet: Optional[dict] = field(default=None, compare=False)

    @property
    def adds_conv(self) -> int:
        return self.adds_conv_pre + self.adds_conv_post

    @property
    def adds_addnet_total(self) -> Optional[int]:
        return None if self.adds_addnet is None else sum(self.adds_addnet.values())

    @property
    def adds(self) -> int:
        """Additions of the whole transform, using the network when it was counted."""
        av = self.adds_direct if self.adds_addnet is None else self.adds_addnet_total
        return self.adds_conv + av

    @property
    def total_weighted(self) -> int:
        return mult_weight(self.m) * self.mults + self.adds


def count(plan: CfftPlan, netplan: Optional[AdditionNetworkPlan] = None) -> ComplexityReport:
    """Operation counts read off the plan structures; nothing is executed."""
    pre = post = mults = raw = 0
    for sc in plan.conv:
        raw += sc.base.r
        mults += sc.multiplications
        rows = sc.base.pre_right.row_masks
        pre += sum(xor_cost(rows[t]) for t in sc.live)
        post += sum(xor_cost(r) for r in sc.post_rows)
    addnet = None
    if netplan is not None:
        addnet = {key: int(netplan.static_counts[key]) for key in ("pre", "mvp", "post")}
    return ComplexityReport(plan.n, plan.m, plan.k, mults, raw, pre, post,
                            direct_av_cost(plan.A), addnet)


def mult_shape(n: int) -> float:
    return n * math.log2(n) ** MULT_EXPONENT


def add_shape(n: int) -> float:
    return n * n / math.log2(n) ** ADD_EXPONENT


@dataclass(frozen=True)
class BoundCurve:
    kind: str  # "multiplicative" or "additive"
    anchor_m: int
    anchor_value: int

    def shape(self, n: int) -> float:
        return mult_shape(n) if self.kind == "multiplicative" else add_shape(n)

    @property
    def scale(self) -> float:
        return self.anchor_value / self.shape((1 << self.anchor_m) - 1)

    def bound(self, m: int) -> float:
        return self.scale * self.shape((1 << m) - 1)


@dataclass(frozen=True)
class BoundRow:
    report: ComplexityReport
    bound_mult: float
    bound_add: float

    @property
    def ratio_mult(self) -> float:
        return self.report.mults / self.bound_mult

    @property
    def ratio_add(self) -> float:
        return self.report.adds_addnet_total / self.bound_add

    def as_dict(self) -> dict:
        r = self.report
        return {
            "m": r.m, "n": r.n, "k": r.k, "mults": r.mults, "adds_conv": r.adds_conv,
            "adds_addnet": r.adds_addnet_total, "adds_direct": r.adds_direct,
            "total_weighted": r.total_weighted,
            "bound_mult": f"{self.bound_mult:.4f}", "bound_add": f"{self.bound_add:.4f}",
            "ratio_mult": f"{self.ratio_mult:.4f}", "ratio_add": f"{self.ratio_add:.4f}",
        }


def report_for(m: int, poly: Optional[int] = None) -> ComplexityReport:
    from .engine import make_netplan

    plan = build_plan(make_field(m, poly))
    return count(plan, make_netplan(plan))


def bound_table(m_values: Iterable[int], anchor_m: int = 4,
                reports: Optional[dict] = None) -> tuple[list[BoundRow], BoundCurve, BoundCurve]:
    """Measured counts against both bound shapes scaled to agree at ``anchor_m``.

    ``reports`` may carry precomputed :class:`ComplexityReport` objects keyed
    by ``m``; missing ones are built (``n = 2^m - 1``, default polynomial).
    """
    reports = dict(reports or {})
    m_values = list(m_values)
    for m in [anchor_m, *m_values]:
        if m not in reports:
            reports[m] = report_for(m)
    anchor = reports[anchor_m]
    mult_curve = BoundCurve("multiplicative", anchor_m, anchor.mults)
    add_curve = BoundCurve("additive", anchor_m, anchor.adds_addnet_total)
    rows = [BoundRow(reports[m], mult_curve.bound(m), add_curve.bound(m)) for m in m_values]
    return rows, mult_curve, add_curve


# ---------- tables

def report_row(report: ComplexityReport) -> dict:
    return {
        "m": report.m, "n": report.n, "k": report.k, "mults": report.mults,
        "adds_conv": report.adds_conv,
        "adds_addnet": "" if report.adds_addnet is None else report.adds_addnet_total,
        "adds_direct": report.adds_direct, "total_weighted": report.total_weighted,
        "bound_mult": "", "bound_add": "", "ratio_mult": "", "ratio_add": "",
    }


def to_csv(rows: Sequence[dict], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()


def to_text(rows: Sequence[dict], columns: Optional[Sequence[str]] = None) -> str:
    if columns is None:
        columns = list(rows[0]) if rows else []
    cells = [[str(c) for c in columns]] + [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells) + "\n"
