"""Exact integer combinatorics: partitions, multipartitions, weight digits.

The quantities here drive everything else in the package.  All of them are
plain nonnegative integers computed exactly (no floats anywhere):

* ``partition_count(n)`` — number of partitions of n.
* ``strict_partition_count(n)`` — partitions of n into distinct parts.
* ``multipartition_count(b, w)`` — b-tuples of partitions with total size w;
  equivalently the coefficient of x^w in prod_{j>=1} (1-x^j)^(-b).
* ``weight_decompositions(w, ell)`` — tuples (w_0, w_1, ...) of nonnegative
  integers with sum w_i * ell^i == w, the "base-ell expansions with carries".
* ``block_character_count(ell, a, d, w)`` — the character count of a block
  with cyclotomic parameters (ell, a, d) and weight w, assembled as a sum of
  multipartition-count products over weight decompositions.

Memo tables are shared module-wide and grown under a lock so the sweep code
can hammer these from worker threads.
"""

from __future__ import annotations

import threading

__all__ = [
    "partition_count",
    "strict_partition_count",
    "multipartition_count",
    "base_digits",
    "weight_decompositions",
    "weight_decomposition_count",
    "block_character_count",
    "block_slot_sizes",
    "is_prime",
]

_lock = threading.RLock()

# p(0), p(1), ... grown on demand by the pentagonal-number recurrence.
_partitions: list[int] = [1]

# q(0), q(1), ... (distinct parts), grown by 0/1 knapsack over part sizes.
_strict: list[int] = [1]

# b -> [k(b,0), k(b,1), ...].  Rows appear for every b touched by the
# split-in-half convolution, so the dict stays O(log b) per top-level b.
_rows: dict[int, list[int]] = {}

# (w, ell) -> number of weight decompositions.
_decomp_counts: dict[tuple[int, int], int] = {}


def partition_count(n: int) -> int:
    """Number of partitions of n (1, 1, 2, 3, 5, 7, 11, ... for n = 0, 1, ...)."""
    if n < 0:
        raise ValueError(f"partition_count: need n >= 0, got {n}")
    with _lock:
        while len(_partitions) <= n:
            m = len(_partitions)
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                g2 = k * (3 * k + 1) // 2
                if g1 > m:
                    break
                sign = 1 if k % 2 == 1 else -1
                total += sign * _partitions[m - g1]
                if g2 <= m:
                    total += sign * _partitions[m - g2]
                k += 1
            _partitions.append(total)
        return _partitions[n]


def strict_partition_count(n: int) -> int:
    """Number of partitions of n into distinct parts (q(3) = 2, q(6) = 4)."""
    if n < 0:
        raise ValueError(f"strict_partition_count: need n >= 0, got {n}")
    with _lock:
        if len(_strict) <= n:
            dp = [0] * (n + 1)
            dp[0] = 1
            for part in range(1, n + 1):
                for total in range(n, part - 1, -1):
                    dp[total] += dp[total - part]
            _strict[:] = dp
        return _strict[n]


def _row(b: int, w: int) -> list[int]:
    """Row [k(b,0..w)], computing by convolution of the two half rows.

    Splitting b in half keeps the recursion depth logarithmic, which matters
    because height-zero products push b into the tens of thousands.
    Must be called with the lock held.
    """
    row = _rows.get(b)
    if row is not None and len(row) > w:
        return row
    if b == 1:
        partition_count(w)
        row = _partitions[: w + 1]
    else:
        h = b // 2
        left = _row(h, w)
        right = _row(b - h, w)
        row = [
            sum(left[i] * right[n - i] for i in range(n + 1)) for n in range(w + 1)
        ]
    _rows[b] = row
    return row


def multipartition_count(b: int, w: int) -> int:
    """Number of b-tuples of partitions whose sizes sum to w.

    k(1, w) = p(w); k(b, 0) = 1; and the defining convolution
    k(b1 + b2, w) = sum_i k(b1, i) * k(b2, w - i).
    """
    if b < 0 or w < 0:
        raise ValueError(f"multipartition_count: need b, w >= 0, got b={b} w={w}")
    if b == 0:
        return 1 if w == 0 else 0
    with _lock:
        return _row(b, w)[w]


def base_digits(n: int, base: int) -> tuple[int, ...]:
    """Little-endian digits of n in the given base, without trailing zeros.

    base_digits(0, b) == () by convention.
    """
    if base < 2:
        raise ValueError(f"base_digits: need base >= 2, got {base}")
    if n < 0:
        raise ValueError(f"base_digits: need n >= 0, got {n}")
    digits = []
    while n:
        n, r = divmod(n, base)
        digits.append(r)
    return tuple(digits)


def weight_decompositions(w: int, ell: int) -> list[tuple[int, ...]]:
    """All tuples (w_0, w_1, ..., w_r) of nonnegatives with sum w_i*ell^i == w.

    Trailing zeros are trimmed, so each decomposition has a unique canonical
    form; w == 0 yields just the empty tuple.  The list comes back sorted
    lexicographically, e.g. weight_decompositions(5, 5) == [(0, 1), (5,)].
    """
    if ell < 2:
        raise ValueError(f"weight_decompositions: need ell >= 2, got {ell}")
    if w < 0:
        raise ValueError(f"weight_decompositions: need w >= 0, got {w}")
    if w == 0:
        return [()]
    out: list[tuple[int, ...]] = []
    # w_0 must agree with w mod ell; each choice hands (w - w_0)/ell to the
    # higher positions.  Ascending w_0 gives lexicographic output order.
    for w0 in range(w % ell, w + 1, ell):
        for rest in weight_decompositions((w - w0) // ell, ell):
            out.append((w0,) + rest)
    return out


def weight_decomposition_count(w: int, ell: int) -> int:
    """len(weight_decompositions(w, ell)) without building the list."""
    if ell < 2:
        raise ValueError(f"weight_decomposition_count: need ell >= 2, got {ell}")
    if w < 0:
        raise ValueError(f"weight_decomposition_count: need w >= 0, got {w}")
    with _lock:
        return _decomp_count(w, ell)


def _decomp_count(w: int, ell: int) -> int:
    if w == 0:
        return 1
    cached = _decomp_counts.get((w, ell))
    if cached is not None:
        return cached
    total = sum(
        _decomp_count((w - w0) // ell, ell) for w0 in range(w % ell, w + 1, ell)
    )
    _decomp_counts[(w, ell)] = total
    return total


def is_prime(n: int) -> bool:
    """Trial-division primality check; all inputs here are tiny."""
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def block_slot_sizes(ell: int, a: int, d: int) -> tuple[int, int]:
    """The multipartition slot sizes (b, b1) for parameters (ell, a, d).

    b = d + (ell^a - 1)/d governs the lowest weight digit, and
    b1 = ell^(a-1) * (ell - 1) / d every higher digit.  d must divide
    ell - 1, which makes both quotients exact.
    """
    _validate_block_params(ell, a, d)
    b = d + (ell**a - 1) // d
    b1 = ell ** (a - 1) * (ell - 1) // d
    return b, b1


def block_character_count(ell: int, a: int, d: int, w: int) -> int:
    """Character count of the block with parameters (ell, a, d) and weight w.

    Sums over all weight decompositions (w_0, w_1, ...) of w in base ell the
    product k(b, w_0) * k(b1, w_1) * k(b1, w_2) * ..., with (b, b1) from
    block_slot_sizes.  For w < ell this is just k(b, w).
    """
    _validate_block_params(ell, a, d)
    if w < 0:
        raise ValueError(f"block_character_count: need w >= 0, got {w}")
    b, b1 = block_slot_sizes(ell, a, d)
    total = 0
    for decomp in weight_decompositions(w, ell):
        term = 1
        for i, wi in enumerate(decomp):
            term *= multipartition_count(b if i == 0 else b1, wi)
        total += term
    return total


def _validate_block_params(ell: int, a: int, d: int) -> None:
    if not is_prime(ell):
        raise ValueError(f"block parameters: ell must be prime, got {ell}")
    if a < 1:
        raise ValueError(f"block parameters: need a >= 1, got {a}")
    if d < 1 or (ell - 1) % d != 0:
        raise ValueError(
            f"block parameters: d must be a positive divisor of ell-1, got d={d} ell={ell}"
        )
