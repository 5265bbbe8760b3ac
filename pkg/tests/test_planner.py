import dataclasses
import json
import random

import pytest

from cfft.gf2m import BitMatrix, make_field
from cfft.planner import (
    ExperimentalLengthWarning,
    PlanError,
    build_block_form,
    build_plan,
    coset_group_profile,
    reorder_index,
    load_plan,
    plan_from_document,
    plan_to_document,
    save_plan,
)
from oracles import binary_mvp, gf_mul, naive_dft, power_table

FULL_M = range(2, 11)


@pytest.fixture(scope="module")
def plans():
    return {m: build_plan(make_field(m)) for m in FULL_M}


def test_n7_plan():
    plan = build_plan(make_field(3, 0b1011))
    assert plan.k == 3
    assert plan.block_widths == [1, 3, 3]
    assert plan.perm_in == (0, 1, 2, 4, 3, 6, 5)


def test_n15_plan():
    plan = build_plan(make_field(4, 0b10011))
    assert plan.block_widths == [1, 4, 4, 2, 4]
    assert coset_group_profile(plan) == {1: 1, 2: 1, 4: 3}


def test_plan_rejects_non_divisor():
    with pytest.raises(PlanError):
        build_plan(make_field(4), 7)


def _L_times(plan, fp):
    """L f' computed entrywise from the conjugates."""
    f = plan.field
    out = []
    for coset, off in zip(plan.partition.cosets, plan.partition.offsets):
        conj = plan.bases[coset.size].conjugates
        size = coset.size
        for s in range(size):
            acc = 0
            for t in range(size):
                acc ^= gf_mul(conj[(s + t) % size], fp[off + t], f.poly, f.m)
            out.append(acc)
    return out


@pytest.mark.parametrize("m", FULL_M)
def test_A_entries_expand_to_powers(plans, m):
    plan = plans[m]
    pw = power_table(plan.field.poly, m)
    A = plan.A.to_lists()
    for coset, off in zip(plan.partition.cosets, plan.partition.offsets):
        conj = plan.bases[coset.size].conjugates
        for j in range(plan.n):
            e = 0
            for s in range(coset.size):
                if A[j][off + s]:
                    e ^= conj[s]
            assert e == pw[j * coset.representative % plan.n]


@pytest.mark.parametrize("m", FULL_M)
def test_reconstruction_identity(plans, m):
    plan = plans[m]
    f = plan.field
    rng = random.Random(m)
    for _ in range(3 if m < 9 else 1):
        x = [rng.randrange(f.size) for _ in range(plan.n)]
        fp = [x[p] for p in plan.perm_in]
        got = binary_mvp(plan.A.to_lists(), plan.n, _L_times(plan, fp))
        assert got == naive_dft(x, 2, f.poly, m)


@pytest.mark.parametrize("m", [4, 6, 8])
def test_convolution_reproduces_L(plans, m):
    from cfft.planner import convolve_block

    plan = plans[m]
    rng = random.Random(m)
    for i, coset in enumerate(plan.partition.cosets):
        L = plan.L_block(i)
        y = [rng.randrange(plan.field.size) for _ in range(coset.size)]
        want = [0] * coset.size
        for s in range(coset.size):
            for t in range(coset.size):
                want[s] ^= gf_mul(L[s][t], y[t], plan.field.poly, m)
        assert convolve_block(plan, i, y)[0] == want


@pytest.mark.parametrize("m, n", [(4, 5), (4, 3), (6, 9), (6, 21), (8, 17), (8, 51), (9, 73)])
def test_reconstruction_identity_subgroups(m, n):
    field = make_field(m)
    plan = build_plan(field, n)
    root = field.alpha_pow(field.n // n)
    x = [random.Random(n + i).randrange(field.size) for i in range(n)]
    fp = [x[p] for p in plan.perm_in]
    got = binary_mvp(plan.A.to_lists(), n, _L_times(plan, fp))
    assert got == naive_dft(x, root, field.poly, m)


def test_reorder_index_example():
    assert reorder_index(5, 7, 3, 3) == (7, 5)


@pytest.mark.parametrize("m", FULL_M)
def test_coset_profile_sizes_bounded(plans, m):
    profile = coset_group_profile(plans[m])
    assert sum(profile.values()) == plans[m].k
    assert all(1 <= d <= m and m % d == 0 for d in profile)
    assert list(profile) == sorted(profile)


@pytest.mark.parametrize("m", FULL_M)
def test_block_form(plans, m):
    plan = plans[m]
    form = build_block_form(plan)
    k = plan.k
    # A' blocks are cyclic: each row is the previous one shifted by one
    for i, row_blocks in enumerate(form.a_prime):
        for blk in row_blocks:
            w = blk.cols
            for t in range(blk.rows - 1):
                nxt = blk.row_masks[t]
                nxt = ((nxt << 1) | (nxt >> (w - 1))) & ((1 << w) - 1)
                assert blk.row_masks[t + 1] == nxt
    # B entries follow the reorder rule from A''
    B = form.B()
    App = form.a_double_prime().to_lists()
    Bl = B.to_lists()
    rng = random.Random(m)
    for _ in range(200):
        r, c = rng.randrange(k * m), rng.randrange(k * m)
        br, bc = reorder_index(r, c, k, m)
        assert Bl[br][bc] == App[r][c]
    # B is block-circulant in its k x k blocks
    for i2 in range(m):
        for j2 in range(m):
            assert form.block_of(B, i2, j2) == form.blocks[(j2 - i2) % m]
    assert form.blocks[0] == form.block_of(B, 0, 0)


@pytest.mark.parametrize("m", FULL_M)
def test_extraction_matches_A(plans, m):
    plan = plans[m]
    form = build_block_form(plan)
    B = form.B().to_lists()
    rng = random.Random(m + 50)
    v = [rng.randrange(plan.field.size) for _ in range(plan.n)]
    u = form.u_from_v(v)
    assert all(u[q] == 0 for q in form.padding_positions())
    assert len(form.padding_positions()) == plan.k * m - plan.n
    bu = binary_mvp(B, plan.k * m, u)
    assert form.extract(bu) == binary_mvp(plan.A.to_lists(), plan.n, v)


def test_block_form_gated_for_short_lengths():
    plan = build_plan(make_field(4), 5)
    with pytest.raises(PlanError, match="experimental"):
        build_block_form(plan)
    with pytest.warns(ExperimentalLengthWarning):
        build_block_form(plan, experimental=True)


def test_block_form_detects_broken_A(plans):
    plan = plans[4]
    rows = list(plan.A.row_masks)
    rows[3] ^= 1 << 2
    bad = dataclasses.replace(plan, A=BitMatrix(plan.n, plan.n, tuple(rows)))
    with pytest.raises(PlanError, match="not cyclic"):
        build_block_form(bad)


def test_plan_document_roundtrip(tmp_path, plans):
    plan = plans[5]
    doc = plan_to_document(plan, block_form=True)
    assert json.loads(json.dumps(doc)) == doc
    again = plan_from_document(doc)
    assert again.A == plan.A and again.perm_in == plan.perm_in
    path = tmp_path / "plan.json"
    save_plan(plan, path)
    assert load_plan(path).A == plan.A


@pytest.mark.parametrize("key, value", [("version", "cfft-plan/0"), ("A", ["0"]), ("gamma", {"1": "2"})])
def test_plan_document_tampering_rejected(plans, key, value):
    doc = plan_to_document(plans[4])
    doc[key] = value
    with pytest.raises(PlanError):
        plan_from_document(doc)
