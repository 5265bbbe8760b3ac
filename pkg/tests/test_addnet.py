import random

import pytest

from cfft.addnet import (
    build_addnet,
    build_four_russians,
    direct_av,
    direct_av_cost,
    eval_addnet,
    eval_four_russians,
    export_netlist,
    netlist_counts,
    padding_reaches_outputs,
)
from cfft.gf2m import BitMatrix, make_field
from cfft.planner import build_block_form, build_plan
from oracles import binary_mvp


@pytest.fixture(scope="module")
def nets():
    out = {}
    for m in range(3, 9):
        plan = build_plan(make_field(m))
        out[m] = (plan, build_addnet(build_block_form(plan), plan.A))
    return out


def test_direct_av_example():
    A = BitMatrix.from_lists([[1, 1, 0], [0, 1, 1], [0, 0, 0]])
    assert direct_av(A, [1, 2, 4]) == ([3, 6, 0], 2)
    assert direct_av_cost(A) == 2
    with pytest.raises(ValueError):
        direct_av(A, [1, 2])


def test_four_russians_identity():
    tab = build_four_russians(BitMatrix.identity(4))
    assert tab.s == 2
    assert tab.groups == ((0, 2), (2, 2))
    assert tab.table_adds == 2 and tab.sum_adds == 0
    out, adds = eval_four_russians(tab, [5, 6, 7, 8])
    assert out == [5, 6, 7, 8] and adds == 2


def test_four_russians_all_ones():
    tab = build_four_russians(BitMatrix.from_rows([0b111] * 3, 3))
    # s = 2: groups {0,1} and {2}; each row picks one entry from each group
    assert tab.groups == ((0, 2), (2, 1))
    out, adds = eval_four_russians(tab, [1, 2, 4])
    assert out == [7, 7, 7]
    assert adds == tab.add_count == 1 + 3


@pytest.mark.parametrize("w", [1, 2, 3, 4, 5])
def test_gray_table_cost(w):
    k = 1 << w  # so that s = w and a single group covers all columns
    tab = build_four_russians(BitMatrix.zeros(k, w))
    assert tab.groups == ((0, w),)
    _, adds = eval_four_russians(tab, list(range(1, w + 1)))
    assert adds == tab.table_adds == (1 << w) - w - 1


@pytest.mark.parametrize("k", [1, 2, 3, 5, 7, 13, 35])
def test_four_russians_random(k):
    rng = random.Random(k)
    for _ in range(5):
        rows = [rng.randrange(1 << k) for _ in range(k)]
        M = BitMatrix.from_rows(rows, k)
        tab = build_four_russians(M)
        x = [rng.randrange(1 << 16) for _ in range(k)]
        out, adds = eval_four_russians(tab, x)
        assert out == binary_mvp(M.to_lists(), k, x)
        assert adds == tab.add_count
        s = max(tab.s, 1)
        ngroups = -(-k // s)
        assert adds <= ngroups * ((1 << s) - s - 1) + k * (ngroups - 1)


def test_module_counts(nets):
    plan3, net3 = nets[3]
    assert net3.r == 9 and len(net3.G) == 9
    plan4, net4 = nets[4]
    assert (net4.r, plan4.k) == (9, 5)
    assert all(tab.s == 3 for tab in net4.mvps.values())
    assert all(g.rows == g.cols == plan4.k for g in net4.G)


@pytest.mark.parametrize("m", range(3, 9))
def test_network_matches_A(nets, m):
    plan, net = nets[m]
    rng = random.Random(m)
    A = plan.A.to_lists()
    for _ in range(10):
        v = [rng.randrange(plan.field.size) for _ in range(plan.n)]
        out, tally = eval_addnet(net, v)
        assert out == binary_mvp(A, plan.n, v)
        assert tally == net.static_counts


@pytest.mark.parametrize("m", range(3, 9))
def test_netlist_document(nets, m):
    _, net = nets[m]
    doc = export_netlist(net)
    assert doc["version"] == "cfft-netlist/1"
    assert [s["name"] for s in doc["stages"]] == [
        "pad_reorder", "pre_addition", "mvp", "post_addition", "extract"]
    counts = netlist_counts(doc)
    assert counts == doc["counts"]
    assert counts["total"] == sum(net.static_counts.values())
    assert padding_reaches_outputs(doc) is False
    modules = doc["stages"][2]["modules"]
    assert len(modules) == net.r
    for mod in modules:
        if mod["status"] == "live":
            assert mod["nodes"]
        else:
            assert "nodes" not in mod and "groups" not in mod
        if mod["status"] == "duplicate":
            assert modules[mod["duplicate_of"]]["status"] == "live"


def test_padding_taint_is_detected(nets):
    _, net = nets[4]
    doc = export_netlist(net)
    pre = doc["stages"][1]["nodes"]
    pad = next(nd["id"] for nd in doc["stages"][0]["nodes"] if nd["source"] == "zero")
    pre[0]["inputs"].append(pad)
    # only matters if that pre node is consumed; check the scan follows the edge
    users = [nd for mod in doc["stages"][2]["modules"] for nd in mod.get("nodes", [])
             if pre[0]["id"] in nd["inputs"]]
    assert users
    assert padding_reaches_outputs(doc) is True


def test_self_check_rejects_wrong_matrix(nets):
    from cfft.addnet import AddnetError

    plan, _ = nets[4]
    rows = list(plan.A.row_masks)
    rows[0] ^= 1
    with pytest.raises(AddnetError):
        build_addnet(build_block_form(plan), BitMatrix(plan.n, plan.n, tuple(rows)))


def test_network_beats_direct_at_m8(nets):
    plan, net = nets[8]
    assert sum(net.static_counts.values()) < direct_av_cost(plan.A)
