"""Exact surreal arithmetic and a transfinite expected-utility engine."""

from surreal_dt.literal import evaluate, format_surreal, parse
from surreal_dt.surreal import (
    OMEGA,
    ONE,
    ZERO,
    Classification,
    Surreal,
    classify,
    omega_k,
    omega_power,
    standard_part,
)

__version__ = "0.1.0"

__all__ = [
    "OMEGA",
    "ONE",
    "ZERO",
    "Classification",
    "Surreal",
    "classify",
    "evaluate",
    "format_surreal",
    "omega_k",
    "omega_power",
    "parse",
    "standard_part",
]
