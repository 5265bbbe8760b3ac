"""Forward DFT over GF(2^m): naive evaluation and the cyclotomic FFT."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .addnet import AdditionNetworkPlan, build_addnet, direct_av, eval_addnet
from .gf2m import FieldSpec
from .planner import CfftPlan, build_block_form, convolve_block

STAGES = ("conv-pre", "conv-mult", "conv-post", "addnet-pre", "addnet-mvp", "addnet-post", "direct")


@dataclass
class TransformResult:
    F: list[int]
    tallies: Counter = field(default_factory=Counter)

    @property
    def multiplications(self) -> int:
        return self.tallies["conv-mult"]

    @property
    def additions(self) -> int:
        return sum(v for s, v in self.tallies.items() if s != "conv-mult")


def naive_dft(field: FieldSpec, n: int, f: Sequence[int], root: Optional[int] = None) -> list[int]:
    """``F_j = f(alpha^j)`` by Horner's rule, with ``alpha`` of order ``n``."""
    if field.n % n:
        raise ValueError(f"n={n} does not divide 2^{field.m} - 1")
    if len(f) != n:
        raise ValueError(f"expected {n} coefficients, got {len(f)}")
    if root is None:
        root = field.alpha_pow(field.n // n)
    mul = field.mul
    out = []
    x = 1
    coeffs = list(reversed(f))
    for _ in range(n):
        acc = 0
        for c in coeffs:
            acc = mul(acc, x) ^ c
        out.append(acc)
        x = mul(x, root)
    return out


def compute_v(plan: CfftPlan, f: Sequence[int]) -> tuple[list[int], Counter]:
    """``v = L f'``: permute into coset order and run each block's convolution."""
    fp = [f[p] for p in plan.perm_in]
    v: list[int] = []
    tally: Counter = Counter()
    for i, off in enumerate(plan.partition.offsets):
        size = plan.partition.cosets[i].size
        block, t = convolve_block(plan, i, fp[off:off + size])
        v.extend(block)
        tally.update({f"conv-{key}": val for key, val in t.items()})
    return v, tally


def cfft(plan: CfftPlan, f: Sequence[int], netplan: Optional[AdditionNetworkPlan] = None) -> TransformResult:
    """DFT of ``f`` via ``A (L f')``.

    With ``netplan`` the product ``A v`` goes through the structured
    addition network, otherwise through direct row XORs.
    """
    if len(f) != plan.n:
        raise ValueError(f"expected a vector of length {plan.n}, got {len(f)}")
    for x in f:
        plan.field.check(x)
    v, tally = compute_v(plan, f)
    if netplan is not None:
        F, t = eval_addnet(netplan, v)
        tally.update({f"addnet-{key}": val for key, val in t.items()})
    else:
        F, adds = direct_av(plan.A, v)
        tally["direct"] += adds
    return TransformResult(F, tally)


def make_netplan(plan: CfftPlan, experimental: bool = False) -> AdditionNetworkPlan:
    return build_addnet(build_block_form(plan, experimental=experimental), plan.A)


def cfft_batch(plan: CfftPlan, rows: Iterable[Sequence[int]],
               netplan: Optional[AdditionNetworkPlan] = None) -> list[TransformResult]:
    return [cfft(plan, f, netplan) for f in rows]


@dataclass
class VerifyReport:
    n: int
    seed: int
    trials: int
    passed: int = 0
    failures: list[str] = field(default_factory=list)
    tallies_consistent: bool = True
    addnet_checked: bool = False

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and not self.failures and self.tallies_consistent

    def summary(self) -> str:
        return f"{self.passed}/{self.trials} pass"


def verify(plan: CfftPlan, trials: int = 100, seed: int = 0,
           netplan: Optional[AdditionNetworkPlan] = None, use_addnet: bool = True,
           vectors: Optional[Sequence[Sequence[int]]] = None) -> VerifyReport:
    """Compare both CFFT paths with the naive DFT on seeded random inputs.

    Failures are recorded in the report, never raised.  When the addition
    network cannot be built from ``plan`` that is itself a failure and only
    the direct path is exercised.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    from .metrics import count  # metrics imports engine types

    report = VerifyReport(plan.n, seed, trials)
    if use_addnet and netplan is None:
        try:
            netplan = make_netplan(plan)
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            report.failures.append(f"addition network: {exc}")
    report.addnet_checked = netplan is not None
    expected = count(plan, netplan)
    rng = random.Random(seed)
    root = plan.root()
    for trial in range(trials):
        if vectors is not None and trial < len(vectors):
            f = list(vectors[trial])
        else:
            f = plan.field.random_vector(rng, plan.n)
        want = naive_dft(plan.field, plan.n, f, root)
        direct = cfft(plan, f)
        ok = direct.F == want
        if not _tallies_match(direct.tallies, expected, addnet=False):
            report.tallies_consistent = False
        if netplan is not None:
            net = cfft(plan, f, netplan)
            ok = ok and net.F == want and net.F == direct.F
            if not _tallies_match(net.tallies, expected, addnet=True):
                report.tallies_consistent = False
        if ok:
            report.passed += 1
        else:
            report.failures.append(f"trial {trial}: mismatch against the naive DFT")
    return report


def _tallies_match(t: Counter, rep, addnet: bool) -> bool:
    want = {
        "conv-pre": rep.adds_conv_pre,
        "conv-mult": rep.mults,
        "conv-post": rep.adds_conv_post,
    }
    if addnet:
        want.update({"addnet-" + key: rep.adds_addnet[key] for key in ("pre", "mvp", "post")})
    else:
        want["direct"] = rep.adds_direct
    return all(t.get(key, 0) == val for key, val in want.items())


# ---------- vector files

def read_vector(path, field: Optional[FieldSpec] = None) -> list[int]:
    """One element per line as lowercase hex; blank lines are ignored."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                x = int(text, 16)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a hexadecimal element: {text!r}") from None
            if field is not None:
                field.check(x)
            out.append(x)
    return out


def write_vector(path, values: Iterable[int]) -> None:
    with open(path, "w") as fh:
        for x in values:
            fh.write(f"{x:x}\n")
