"""scikit-learn style transformers wrapping the DFT engines.

Samples are rows of an integer array whose entries are GF(2^m) elements in
their bitmask form, so a batch of received words goes through ``transform``
in one call and the transformers drop into a :class:`sklearn.pipeline.Pipeline`.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .engine import cfft, make_netplan, naive_dft
from .gf2m import FieldSpec, make_field
from .metrics import count
from .planner import build_plan


def check_field_params(m, n=None, poly=None) -> tuple[FieldSpec, int]:
    """Validate constructor parameters; returns the field and the length."""
    if isinstance(m, (bool, np.bool_)) or not isinstance(m, (int, np.integer)):
        raise ValueError(f"m must be an integer, got {m!r}")
    field = make_field(int(m), None if poly is None else int(poly))
    if n is None:
        n = field.n
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if field.n % int(n):
        raise ValueError(f"n={n} does not divide 2^{field.m} - 1 = {field.n}")
    return field, int(n)


def check_vectors(X, field: FieldSpec, n: Optional[int] = None) -> np.ndarray:
    """Coerce ``X`` to a 2-D int64 array of field elements.

    A 1-D input is read as a single sample.  Entries must be integers in
    ``[0, 2^m)``; floats are accepted only when they hold whole numbers.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
            raise ValueError("field elements must be whole numbers")
    elif arr.dtype.kind not in "iub":
        raise ValueError(f"field elements must be integers, got dtype {arr.dtype}")
    arr = check_array(arr, dtype=np.int64, ensure_2d=True, ensure_min_samples=1)
    if n is not None and arr.shape[1] != n:
        raise ValueError(f"expected {n} features per sample, got {arr.shape[1]}")
    if arr.size and (arr.min() < 0 or arr.max() >= field.size):
        raise ValueError(f"entries must lie in [0, {field.size}) for GF(2^{field.m})")
    return arr


class CyclotomicFFT(TransformerMixin, BaseEstimator):
    """Cyclotomic fast Fourier transform over GF(2^m).

    Parameters
    ----------
    m : int, default=8
        Extension degree of the field.
    n : int or None, default=None
        Transform length, a divisor of ``2^m - 1``.  ``None`` means ``2^m - 1``.
    poly : int or None, default=None
        Primitive polynomial as a bitmask; ``None`` picks the built-in one.
    use_addnet : bool, default=True
        Compute ``A v`` with the structured addition network instead of
        direct row XORs.  Only available for ``n = 2^m - 1`` unless
        ``experimental`` is set.
    experimental : bool, default=False
        Allow the addition network for ``n < 2^m - 1``.

    Attributes
    ----------
    field_ : FieldSpec
    plan_ : CfftPlan
    netplan_ : AdditionNetworkPlan or None
    complexity_ : ComplexityReport
    n_features_in_ : int
    last_tallies_ : collections.Counter
        Operation counts summed over the samples of the last ``transform``.
    """

    def __init__(self, m=8, n=None, poly=None, use_addnet=True, experimental=False):
        self.m = m
        self.n = n
        self.poly = poly
        self.use_addnet = use_addnet
        self.experimental = experimental

    def fit(self, X=None, y=None):
        """Build the plan.  ``X`` is only checked for shape; the plan depends on parameters alone."""
        field, n = check_field_params(self.m, self.n, self.poly)
        if X is not None:
            check_vectors(X, field, n)
        self.field_ = field
        self.plan_ = build_plan(field, n)
        self.netplan_ = make_netplan(self.plan_, self.experimental) if self.use_addnet else None
        self.complexity_ = count(self.plan_, self.netplan_)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "plan_")
        arr = check_vectors(X, self.field_, self.n_features_in_)
        out = np.empty_like(arr)
        tallies: Counter = Counter()
        for i, row in enumerate(arr):
            res = cfft(self.plan_, row.tolist(), self.netplan_)
            out[i] = res.F
            tallies.update(res.tallies)
        self.last_tallies_ = tallies
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "plan_")
        return np.asarray([f"F{j}" for j in range(self.n_features_in_)], dtype=object)


class NaiveDFT(TransformerMixin, BaseEstimator):
    """Direct ``F_j = f(alpha^j)`` evaluation; the reference for :class:`CyclotomicFFT`."""

    def __init__(self, m=8, n=None, poly=None):
        self.m = m
        self.n = n
        self.poly = poly

    def fit(self, X=None, y=None):
        field, n = check_field_params(self.m, self.n, self.poly)
        if X is not None:
            check_vectors(X, field, n)
        self.field_ = field
        self.root_ = field.alpha_pow(field.n // n)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "root_")
        arr = check_vectors(X, self.field_, self.n_features_in_)
        out = np.empty_like(arr)
        for i, row in enumerate(arr):
            out[i] = naive_dft(self.field_, self.n_features_in_, row.tolist(), self.root_)
        return out
