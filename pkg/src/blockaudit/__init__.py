"""Block-invariant auditing: exact character counts, defect-group class
counts, and mechanical verification of the two product inequalities that
relate them.

The package is organized bottom-up:

* :mod:`blockaudit.counts` — partition / multipartition combinatorics.
* :mod:`blockaudit.oracle` — brute-force finite-group engine (the slow,
  independent route used to validate every formula that admits one).
* :mod:`blockaudit.wreath` — wreath-tower class counts and defect-group
  models with certified exact/lower/upper bound kinds.
* :mod:`blockaudit.reductive` — block invariants for linear, unitary and
  classical groups.
* :mod:`blockaudit.symmetric` — symmetric, alternating and double-cover
  blocks, plus the small-prime weight table.
* :mod:`blockaudit.exceptional` — exceptional families, closed forms and
  root-system height counts.
* :mod:`blockaudit.certify` — certified inequality checks with explicit
  error control (integer and dyadic interval arithmetic only).
* :mod:`blockaudit.audit` — the inequality audit engine and sweep driver.
* :mod:`blockaudit.cli` — command-line front end (``blockaudit``).
"""

from .counts import (
    block_character_count,
    multipartition_count,
    partition_count,
    strict_partition_count,
    weight_decomposition_count,
    weight_decompositions,
)
from .wreath import CountBound, WreathTower, wreath_class_count

__version__ = "0.1.0"

__all__ = [
    "block_character_count",
    "multipartition_count",
    "partition_count",
    "strict_partition_count",
    "weight_decompositions",
    "weight_decomposition_count",
    "CountBound",
    "WreathTower",
    "wreath_class_count",
    "__version__",
]
