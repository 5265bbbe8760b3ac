"""Cyclotomic fast Fourier transforms over GF(2^m)."""

from .addnet import (
    AdditionNetworkPlan,
    FourRussiansTableau,
    build_addnet,
    build_four_russians,
    direct_av,
    eval_addnet,
    eval_four_russians,
    export_netlist,
)
from .bilinear import (
    BilinearAlgorithm,
    SpecializedConv,
    apply_bilinear,
    apply_specialized,
    gen_cyclic,
    gen_linear,
    specialize_left,
    wrap_cyclic,
)
from .cyclotomic import CosetPartition, check_lemma1, check_lemma2, partition_cosets
from .engine import TransformResult, cfft, make_netplan, naive_dft, verify
from .estimator import CyclotomicFFT, NaiveDFT, check_vectors
from .gf2m import BitMatrix, FieldElement, FieldError, FieldSpec, gf2_solve, make_field
from .metrics import ComplexityReport, bound_table, count
from .normal_basis import NormalBasis, coordinates, find_normal_basis
from .planner import (
    BlockCyclicForm,
    CfftPlan,
    PlanError,
    build_block_form,
    build_plan,
    coset_group_profile,
)

__version__ = "0.1.0"

__all__ = [
    "AdditionNetworkPlan", "BilinearAlgorithm", "BitMatrix", "BlockCyclicForm", "CfftPlan",
    "ComplexityReport", "CosetPartition", "CyclotomicFFT", "FieldElement", "FieldError",
    "FieldSpec", "FourRussiansTableau", "NaiveDFT", "NormalBasis", "PlanError",
    "SpecializedConv", "TransformResult", "apply_bilinear", "apply_specialized",
    "bound_table", "build_addnet", "build_block_form", "build_four_russians", "build_plan",
    "cfft", "check_lemma1", "check_lemma2", "check_vectors", "coordinates", "count",
    "coset_group_profile", "direct_av", "eval_addnet", "eval_four_russians",
    "export_netlist", "find_normal_basis", "gen_cyclic", "gen_linear", "gf2_solve",
    "make_field", "make_netplan", "naive_dft", "partition_cosets", "specialize_left",
    "verify", "wrap_cyclic",
]
