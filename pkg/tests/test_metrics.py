import math
import random

import pytest

from cfft.engine import cfft, make_netplan
from cfft.gf2m import make_field
from cfft.metrics import (
    ADD_EXPONENT,
    CSV_COLUMNS,
    MULT_EXPONENT,
    BoundCurve,
    add_shape,
    bound_table,
    count,
    mult_shape,
    mult_weight,
    report_row,
    to_csv,
    to_text,
)
from cfft.planner import build_plan


@pytest.fixture(scope="module")
def table():
    return bound_table(range(4, 11), anchor_m=4)


def test_raw_mults_n7_n15():
    r7 = count(build_plan(make_field(3)))
    assert r7.mults_raw == 1 + 9 + 9
    assert r7.mults <= r7.mults_raw - 1
    r15 = count(build_plan(make_field(4)))
    assert r15.mults_raw == 1 + 3 + 9 + 9 + 9


def test_weights():
    assert mult_weight(4) == 7 and mult_weight(8) == 15


def test_total_weighted_formula():
    plan = build_plan(make_field(6))
    rep = count(plan, make_netplan(plan))
    assert rep.total_weighted == 11 * rep.mults + rep.adds_conv + rep.adds_addnet_total
    direct = count(plan)
    assert direct.adds_addnet is None
    assert direct.total_weighted == 11 * direct.mults + direct.adds_conv + direct.adds_direct


@pytest.mark.parametrize("m", range(3, 9))
def test_static_equals_dynamic(m):
    plan = build_plan(make_field(m))
    net = make_netplan(plan)
    rep = count(plan, net)
    x = plan.field.random_vector(random.Random(m), plan.n)
    t = cfft(plan, x, net).tallies
    assert t["conv-mult"] == rep.mults
    assert t["conv-pre"] == rep.adds_conv_pre and t["conv-post"] == rep.adds_conv_post
    assert {k: t[f"addnet-{k}"] for k in ("pre", "mvp", "post")} == rep.adds_addnet
    assert cfft(plan, x).tallies["direct"] == rep.adds_direct


def test_shape_closed_forms():
    assert MULT_EXPONENT == pytest.approx(math.log2(1.5))
    assert ADD_EXPONENT == pytest.approx(math.log2(8 / 3))
    want = (1023 * math.log2(1023) ** 0.5849625) / (15 * math.log2(15) ** 0.5849625)
    assert mult_shape(1023) / mult_shape(15) == pytest.approx(want, rel=1e-6)
    assert add_shape(255) == pytest.approx(255 ** 2 / math.log2(255) ** ADD_EXPONENT)


def test_curve_scale():
    c = BoundCurve("multiplicative", 4, 26)
    assert c.bound(4) == pytest.approx(26)
    assert c.bound(6) / c.bound(4) == pytest.approx(mult_shape(63) / mult_shape(15))


def test_anchor_ratio_is_one(table):
    rows, mult_curve, add_curve = table
    assert rows[0].report.m == 4
    assert rows[0].ratio_mult == pytest.approx(1.0)
    assert rows[0].ratio_add == pytest.approx(1.0)


def test_additive_ratios_in_band(table):
    rows, _, _ = table
    for row in rows:
        assert 0.3 <= row.ratio_add <= 2.0


def test_bound_table_is_deterministic(table):
    rows, _, _ = table
    again, _, _ = bound_table([4, 5, 6], anchor_m=4)
    assert [r.as_dict() for r in again] == [r.as_dict() for r in rows[:3]]


def test_csv_format(table):
    rows, _, _ = table
    text = to_csv([r.as_dict() for r in rows[:2]])
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    first = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert first["m"] == "4" and first["n"] == "15"
    assert first["ratio_mult"] == "1.0000" and first["ratio_add"] == "1.0000"
    for key in ("bound_mult", "bound_add", "ratio_mult", "ratio_add"):
        assert len(first[key].split(".")[1]) == 4


def test_report_row_without_network():
    row = report_row(count(build_plan(make_field(4), 5)))
    assert row["adds_addnet"] == "" and row["ratio_mult"] == ""
    assert set(row) == set(CSV_COLUMNS)


def test_text_table_alignment():
    text = to_text([{"a": 1, "bb": 22}, {"a": 333, "bb": 4}])
    lines = text.splitlines()
    assert len({len(line) for line in lines}) == 1
    assert lines[0].split() == ["a", "bb"]
