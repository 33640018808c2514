"""Multiplicative complements: constructions, exhaustive verification and
the analytic quantities (Buchstab, rough numbers, Mertens) around them."""

from .arith import (
    FactorTable,
    build_factor_table,
    factorize,
    mertens_product,
    prime_reciprocal_sum,
    primes_in,
    squarefree_part,
    valuation,
)
from .errors import (
    EmptyResultError,
    InvalidArgumentError,
    MulcompError,
    OutOfRangeError,
    ParseError,
    ResourceLimitError,
)

__version__ = "0.1.0"
