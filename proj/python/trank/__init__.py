"""Exact tensor rank tools over GF(p) and Q."""

from ._core import (
    DimensionError,
    FieldMismatch,
    PreconditionError,
    Tensor,
    UnsupportedField,
    additivity_check,
    certifies,
    classify,
    direct_sum,
    flattening_ranks,
    matmul_tensor,
    random_tensor,
    rank_oracle,
    substitution_lower_bound,
    upper_bound,
    verify_strassen,
)

__all__ = [
    "DimensionError",
    "FieldMismatch",
    "PreconditionError",
    "Tensor",
    "UnsupportedField",
    "additivity_check",
    "certifies",
    "classify",
    "direct_sum",
    "flattening_ranks",
    "matmul_tensor",
    "random_tensor",
    "rank_oracle",
    "substitution_lower_bound",
    "upper_bound",
    "verify_strassen",
]
