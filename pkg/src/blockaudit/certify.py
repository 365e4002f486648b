"""Certified verification of the auxiliary inequalities behind the audit.

Every check in this module decides an inequality with *certainty* or reports
that it cannot: floating point never enters a verdict.  Comparisons between
pure integers are exact; comparisons involving the constant e are settled
against rational enclosures lo < e < hi obtained from the truncated
exponential series with a proven tail bound, escalating through a precision
ladder (128 -> 256 -> 512 -> 1024 fractional bits) until one side is
certified or the ladder is exhausted, in which case the point is reported as
undecided rather than guessed.

Each check id covers a fixed parameter grid together with an exception set:
points where the inequality is *allowed* to fail.  The contract enforced by
the test suite is one-sided — every certified failure must lie inside the
exception set — so an exceptional point that happens to hold is fine.
Exactly one failure is expected to be reproduced (check L5.4 at the smallest
admissible parameter point); everything else on the grids holds.

The check ids are opaque interface tokens used by the command line and the
acceptance tests; each checker's docstring states the inequality it decides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

from .counts import block_character_count, multipartition_count, weight_decomposition_count
from .oracle import oracle_report
from .wreath import WreathTower, p_group_class_lower

__all__ = [
    "PRECISION_LADDER",
    "LEMMA_IDS",
    "BoundCheckResult",
    "euler_enclosure",
    "scaled_exp_le",
    "sc_center_order",
    "verify_bounds",
    "failures_outside_exceptions",
    "bounds_ok",
]

PRECISION_LADDER = (128, 256, 512, 1024)

_EULER_CACHE: dict[int, tuple[Fraction, Fraction]] = {}


def euler_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    """A certified rational enclosure lo < e < hi with hi - lo <= 2**-bits.

    lo is the exponential series truncated after 1/N!; the discarded tail is
    strictly between 0 and 2/(N+1)!, so adding that to lo gives a strict
    upper bound.  N is the smallest index with (N+1)! >= 2**(bits+1), which
    pins the width.  Enclosures are memoized per bit count.
    """
    if bits < 1:
        raise ValueError(f"euler_enclosure: need bits >= 1, got {bits}")
    cached = _EULER_CACHE.get(bits)
    if cached is not None:
        return cached
    n_plus_1, factorial = 1, 1
    while factorial < (1 << (bits + 1)):
        n_plus_1 += 1
        factorial *= n_plus_1
    big_n = n_plus_1 - 1
    # sum_{k=0..N} N!/k!, accumulated from the k = N end downward.
    term, total = 1, 1
    for k in range(big_n, 0, -1):
        term *= k
        total += term
    lo = Fraction(total, factorial // n_plus_1)
    hi = lo + Fraction(2, factorial)
    assert hi - lo <= Fraction(1, 1 << bits), f"enclosure width overshoot at {bits} bits"
    _EULER_CACHE[bits] = (lo, hi)
    return lo, hi


def scaled_exp_le(lhs: int, exponent: int, rhs: int, ladder: tuple[int, ...] = PRECISION_LADDER) -> bool | None:
    """Decide lhs * e**exponent <= rhs with certainty, or return None.

    True requires lhs * hi**exponent <= rhs for a certified upper bound hi of
    e; False requires lhs * lo**exponent > rhs for a certified lower bound.
    Anything the final ladder rung cannot separate stays undecided.
    """
    if lhs < 0 or rhs < 0 or exponent < 0:
        raise ValueError(f"scaled_exp_le: need nonnegative arguments, got ({lhs}, {exponent}, {rhs})")
    if exponent == 0:
        return lhs <= rhs
    for bits in ladder:
        lo, hi = euler_enclosure(bits)
        if lhs * hi.numerator**exponent <= rhs * hi.denominator**exponent:
            return True
        if lhs * lo.numerator**exponent > rhs * lo.denominator**exponent:
            return False
    return None


@dataclass(frozen=True)
class BoundCheckResult:
    """Outcome of one grid point of one check.

    holds is True/False only when certified; None means the precision ladder
    could not separate the two sides.  exception marks points where failure
    is part of the check's contract.
    """

    lemma: str
    point: tuple[tuple[str, int | str], ...]
    holds: bool | None
    exception: bool
    detail: str = ""


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# Multipartition growth checks.


def _check_l51a() -> list[BoundCheckResult]:
    """k(b, w) <= b**w for every b >= 3 (b = 2 already fails at w = 2)."""
    out = []
    for b in range(3, 31):
        for w in range(1, 31):
            k = multipartition_count(b, w)
            out.append(
                BoundCheckResult(
                    lemma="L5.1a",
                    point=(("b", b), ("w", w)),
                    holds=k <= b**w,
                    exception=False,
                    detail=f"k={k}",
                )
            )
    return out


def _check_l51b() -> list[BoundCheckResult]:
    """Submultiplicativity k(b, u+v) <= k(b, u) * k(b, v) for b >= 3.

    The floor on b matters: k(2, 2) = 5 > 4 = k(2, 1)**2, so the two-counter
    case genuinely breaks this and is kept off the grid.
    """
    out = []
    for b in range(3, 11):
        for total in range(2, 31):
            whole = multipartition_count(b, total)
            for u in range(1, total // 2 + 1):
                v = total - u
                split = multipartition_count(b, u) * multipartition_count(b, v)
                out.append(
                    BoundCheckResult(
                        lemma="L5.1b",
                        point=(("b", b), ("u", u), ("v", v)),
                        holds=whole <= split,
                        exception=False,
                        detail=f"k={whole} product={split}",
                    )
                )
    return out


def _check_l52a() -> list[BoundCheckResult]:
    """k(bx, w) <= (bx)**w * x**(-0.73 w / ln x) for b >= 4, x >= 5, w >= 5.

    Since x**(1/ln x) = e the right factor is e**(-0.73 w) independently of
    x, so the comparison scales to integers as k**100 * e**(73 w) <=
    (bx)**(100 w) and is settled against the e-enclosure ladder.  No
    exceptions: the claim is clean over its whole range.
    """
    out = []
    for b in range(4, 8):
        for x in range(5, 9):
            base = b * x
            for w in range(5, 17):
                k = multipartition_count(base, w)
                holds = scaled_exp_le(k**100, 73 * w, base ** (100 * w))
                out.append(
                    BoundCheckResult(
                        lemma="L5.2a",
                        point=(("b", b), ("x", x), ("w", w)),
                        holds=holds,
                        exception=False,
                        detail=f"base={base} k={k}",
                    )
                )
    return out


def _l52b_exception(b: int, w: int) -> bool:
    return (b == 4 and w <= 10) or (b == 5 and w <= 7)


def _check_l52b() -> list[BoundCheckResult]:
    """k(b, w) <= b**w * e**(-0.47 w) for b >= 4, outside a small-b band.

    The decay constant only wins once b**w dominates: for b = 4 the bound is
    allowed to fail up to w = 10 and for b = 5 up to w = 7.  The boundary is
    sharp — k(5, 7) = 2990 exceeds the bound while k(5, 8) is back inside.
    """
    out = []
    for b in range(4, 11):
        for w in range(5, 21):
            k = multipartition_count(b, w)
            holds = scaled_exp_le(k**100, 47 * w, b ** (100 * w))
            out.append(
                BoundCheckResult(
                    lemma="L5.2b",
                    point=(("b", b), ("w", w)),
                    holds=holds,
                    exception=_l52b_exception(b, w),
                    detail=f"k={k}",
                )
            )
    return out


# ---------------------------------------------------------------------------
# Block-count decay checks.


def _check_l53() -> list[BoundCheckResult]:
    """Slot-size multipartition counts decay against the defect order.

    The subject is k(b, w) at the principal slot size b = d + (ell**a - 1)/d.
    Three regimes:

      d > 1:          k <= ell**(a w) / d**(0.83 w)
      d = 1, a >= 2:  k <= ell**(a w) * e**(-0.9 w)
      d = a = 1:      k <= ell**(a w) * e**(-0.57 w)

    The d > 1 case clears denominators to the pure integer comparison
    k**100 * d**(83 w) <= ell**(100 a w); the d = 1 cases scale by 10 or 100
    and go through the e-enclosure ladder.  Grid: ell in {5, 7, 11, 13},
    a <= 2, d | ell - 1 with d <= sqrt(ell**a - 1), w in {ell, 2 ell} (the
    claim needs ell | w).  Failures are allowed only at the smallest defect:
    d <= 2 with ell**a = w = 5, plus (ell**a, d, w) = (25, 1, 5).
    """
    out = []
    for ell in (5, 7, 11, 13):
        for a in (1, 2):
            cap = isqrt(ell**a - 1)
            for d in _divisors(ell - 1):
                if d > cap:
                    continue
                for w in (ell, 2 * ell):
                    b = d + (ell**a - 1) // d
                    assert (ell**a - 1) % d == 0, f"L5.3: {d} must divide {ell}**{a}-1"
                    k = multipartition_count(b, w)
                    if d > 1:
                        holds = k**100 * d ** (83 * w) <= ell ** (100 * a * w)
                    elif a >= 2:
                        holds = scaled_exp_le(k**10, 9 * w, ell ** (10 * a * w))
                    else:
                        holds = scaled_exp_le(k**100, 57 * w, ell ** (100 * a * w))
                    exception = (d <= 2 and ell**a == 5 and w == 5) or (
                        (ell**a, d, w) == (25, 1, 5)
                    )
                    out.append(
                        BoundCheckResult(
                            lemma="L5.3",
                            point=(("ell", ell), ("a", a), ("d", d), ("w", w)),
                            holds=holds,
                            exception=exception,
                            detail=f"b={b} k={k}",
                        )
                    )
    return out


def _check_l54() -> list[BoundCheckResult]:
    """Block character counts decay like L5.3 with one decomposition factor.

    Subject: k(ell, a, d, w) for a divisor d of ell - 1 and any multiple w
    of ell.  The bound is the matching L5.3 right-hand side multiplied by
    p_ell(w), the number of weight decompositions:

      d > 1:          k <= p_ell(w) * ell**(a w) / d**(0.83 w)
      d = 1, a >= 2:  k <= p_ell(w) * ell**(a w) * e**(-0.9 w)
      d = a = 1:      k <= p_ell(w) * ell**(a w) * e**(-0.57 w)

    The grid keeps d <= sqrt(ell**a - 1), the range the slot-size route of
    L5.3 actually supports.  Past it the bound form itself turns false: the
    block count is nearly symmetric under d <-> (ell-1)/d while the
    right-hand side keeps shrinking in d, and the first mirror point
    (ell, a, d, w) = (7, 1, 3, 7) already exceeds its bound (2992 against
    about 2782).

    The single point inside the grid where the bound genuinely fails is
    ell**a = w = 5 at d = 1 (k = 510 against a bound just above 361); it is
    the one failure the suite must reproduce.  The tightest holding points
    are d = 1 at (25, 1, 5), within four percent, and the directly checked
    k(5, 1, 2, 5) = 254.
    """
    out = []
    for ell in (5, 7, 11, 13):
        for a in (1, 2):
            cap = isqrt(ell**a - 1)
            for d in _divisors(ell - 1):
                if d > cap:
                    continue
                for w in (ell, 2 * ell):
                    k = block_character_count(ell, a, d, w)
                    decomps = weight_decomposition_count(w, ell)
                    if d > 1:
                        rhs = decomps**100 * ell ** (100 * a * w)
                        holds = k**100 * d ** (83 * w) <= rhs
                    elif a >= 2:
                        holds = scaled_exp_le(k**10, 9 * w, decomps**10 * ell ** (10 * a * w))
                    else:
                        holds = scaled_exp_le(k**100, 57 * w, decomps**100 * ell ** (100 * a * w))
                    out.append(
                        BoundCheckResult(
                            lemma="L5.4",
                            point=(("ell", ell), ("a", a), ("d", d), ("w", w)),
                            holds=holds,
                            exception=(ell**a, d, w) == (5, 1, 5),
                            detail=f"k={k} decomps={decomps}",
                        )
                    )
    return out


def _check_l55() -> list[BoundCheckResult]:
    """Lower bound k(b, w) >= C(c, w) * (b // c)**w for any c <= b.

    Splitting the b counters into c groups of size at least b // c, choosing
    w distinct groups and one counter in each produces that many distinct
    multipartitions.  Checked at c in {w, 2w, b}.
    """
    out = []
    for b in range(5, 31):
        for w in range(1, 9):
            k = multipartition_count(b, w)
            for c in sorted({w, 2 * w, b}):
                if c > b:
                    continue
                bound = comb(c, w) * (b // c) ** w
                out.append(
                    BoundCheckResult(
                        lemma="L5.5",
                        point=(("b", b), ("w", w), ("c", c)),
                        holds=k >= bound,
                        exception=False,
                        detail=f"k={k} bound={bound}",
                    )
                )
    return out


# ---------------------------------------------------------------------------
# Group-theoretic floor checks.

# (group spec, p, n) with |G| = p**n; orders small enough for the oracle.
_P23_ORACLE_ROWS = (
    ("tower:2,2,1", 2, 3),
    ("tower:2,2,2", 2, 7),
    ("tower:3,3,1", 3, 4),
    ("detkernel:3,3,1", 3, 3),
    ("detkernel:9,3,2", 3, 5),
    ("detkernel:5,5,1", 5, 5),
    ("tower:5,5,1", 5, 6),
)

# (base, ell, levels, p, n) handled by the exact closed-form recursion.
_P23_FORMULA_ROWS = (
    (2, 2, 3, 2, 15),
    (9, 3, 1, 3, 7),
    (27, 3, 1, 3, 10),
    (5, 5, 1, 5, 6),
)


def _check_p23() -> list[BoundCheckResult]:
    """Class-count floor p**2 + (n - 2)(p - 1) for groups of order p**n, n >= 2.

    Verified against brute-force class counts for small towers and
    determinant-one kernels, and against the exact recursive count for
    larger towers.  The extraspecial group of order 27 meets the floor
    exactly (11 classes).
    """
    out = []
    for spec, p, n in _P23_ORACLE_ROWS:
        report = oracle_report(spec, with_derived=False)
        classes = report["class_count"]
        bound = p_group_class_lower(p, n)
        assert report["order"] == p**n, (
            f"P2.3 row {spec}: order {report['order']} is not {p}**{n}"
        )
        out.append(
            BoundCheckResult(
                lemma="P2.3",
                point=(("group", spec), ("p", p), ("n", n)),
                holds=classes >= bound,
                exception=False,
                detail=f"classes={classes} floor={bound}",
            )
        )
    for base, ell, levels, p, n in _P23_FORMULA_ROWS:
        tower = WreathTower(base, ell, levels)
        classes = tower.class_count()
        bound = p_group_class_lower(p, n)
        assert tower.order == p**n, f"P2.3 tower({base},{ell},{levels}): order mismatch"
        out.append(
            BoundCheckResult(
                lemma="P2.3",
                point=(("group", f"tower:{base},{ell},{levels}"), ("p", p), ("n", n)),
                holds=classes >= bound,
                exception=False,
                detail=f"classes={classes} floor={bound} (closed form)",
            )
        )
    return out


_L41_RANKS = {
    "A": range(2, 13),
    "B": range(2, 13),
    "C": range(2, 13),
    "D": range(3, 13),
    "E": range(6, 9),
    "F": (4,),
    "G": (2,),
}


def _check_l41() -> list[BoundCheckResult]:
    """At least 2 r - 3 positive roots of height 2 or 3 in rank r."""
    from .exceptional import root_height_count

    out = []
    for series, ranks in _L41_RANKS.items():
        for rank in ranks:
            count = root_height_count(series, rank)
            floor = 2 * rank - 3
            out.append(
                BoundCheckResult(
                    lemma="L4.1",
                    point=(("series", series), ("rank", rank)),
                    holds=count >= floor,
                    exception=False,
                    detail=f"count={count} floor={floor}",
                )
            )
    return out


# ---------------------------------------------------------------------------
# Center-order arithmetic check.

_Q_GRID = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32)

_T42_RANKS = {
    "A": range(1, 13),
    "2A": range(1, 13),
    "B": range(2, 13),
    "C": range(2, 13),
    "D": range(4, 13),
    "2D": range(4, 13),
    "3D4": (4,),
    "E6": (6,),
    "2E6": (6,),
    "E7": (7,),
    "E8": (8,),
    "F4": (4,),
    "G2": (2,),
}


def sc_center_order(series: str, rank: int, q: int) -> int:
    """Order of the fixed-point center of the simply connected group."""
    if series == "A":
        return gcd(rank + 1, q - 1)
    if series == "2A":
        return gcd(rank + 1, q + 1)
    if series in ("B", "C"):
        return gcd(2, q - 1)
    if series == "D":
        return gcd(2, q - 1) ** 2 if rank % 2 == 0 else gcd(4, q**rank - 1)
    if series == "2D":
        return gcd(4, q**rank + 1)
    if series == "E6":
        return gcd(3, q - 1)
    if series == "2E6":
        return gcd(3, q + 1)
    if series == "E7":
        return gcd(2, q - 1)
    if series in ("E8", "F4", "G2", "3D4"):
        return 1
    raise ValueError(f"sc_center_order: unknown series {series!r}")


def _check_t42() -> list[BoundCheckResult]:
    """Center order versus 27.2 = 136/5 times two q-power margins.

    ineq 1: 136 d <= 5 (q**r - 1) q**(r-3), claimed for r >= 4 and for r = 3
    once q > 3.  ineq 2: 136 d <= 5 (q**r - 1), claimed for r >= 7 and for
    3 <= r <= 6 once q >= 8 - r.  Rank means the rank of the ambient root
    system.  The single allowed failure is ineq 2 for the rank-6 twisted
    family at q = 2, where the center order 3 pushes 408 past 315.
    """
    out = []
    for series, ranks in _T42_RANKS.items():
        for r in ranks:
            for q in _Q_GRID:
                d = sc_center_order(series, r, q)
                if r >= 4 or (r == 3 and q > 3):
                    rhs = 5 * (q**r - 1) * q ** (r - 3)
                    out.append(
                        BoundCheckResult(
                            lemma="T4.2-arith",
                            point=(("series", series), ("rank", r), ("q", q), ("ineq", 1)),
                            holds=136 * d <= rhs,
                            exception=False,
                            detail=f"d={d} lhs={136 * d} rhs={rhs}",
                        )
                    )
                if r >= 7 or (3 <= r <= 6 and q >= 8 - r):
                    rhs = 5 * (q**r - 1)
                    out.append(
                        BoundCheckResult(
                            lemma="T4.2-arith",
                            point=(("series", series), ("rank", r), ("q", q), ("ineq", 2)),
                            holds=136 * d <= rhs,
                            exception=(series == "2E6" and q == 2),
                            detail=f"d={d} lhs={136 * d} rhs={rhs}",
                        )
                    )
    return out


# ---------------------------------------------------------------------------
# Dispatch.

_CHECKERS = {
    "L5.1a": _check_l51a,
    "L5.1b": _check_l51b,
    "L5.2a": _check_l52a,
    "L5.2b": _check_l52b,
    "L5.3": _check_l53,
    "L5.4": _check_l54,
    "L5.5": _check_l55,
    "P2.3": _check_p23,
    "L4.1": _check_l41,
    "T4.2-arith": _check_t42,
}

LEMMA_IDS = tuple(_CHECKERS)


def verify_bounds(lemma: str) -> list[BoundCheckResult]:
    """Run one check id over its whole grid and return every point's result."""
    try:
        checker = _CHECKERS[lemma]
    except KeyError:
        raise ValueError(f"unknown check id {lemma!r}; known: {', '.join(LEMMA_IDS)}") from None
    return checker()


def failures_outside_exceptions(results: list[BoundCheckResult]) -> list[BoundCheckResult]:
    """Certified failures that the check's contract does not allow."""
    return [r for r in results if r.holds is False and not r.exception]


def bounds_ok(results: list[BoundCheckResult]) -> bool:
    return not failures_outside_exceptions(results)
