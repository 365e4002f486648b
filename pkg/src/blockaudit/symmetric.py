"""Block invariants for symmetric groups, their alternating subgroups, and
the 2-fold covers, parametrised by the prime and the block weight.

The symmetric-group case is exact and purely combinatorial.  The alternating
and double-cover cases inherit bounds from the covering relations: an exact
halving where one is available (odd-weight 2-blocks), otherwise one-sided
bounds that the audit engine keeps tagged as such.

The small-weight table for p = 3 — the cases where the total count exceeds
the class count of the derived defect subgroup — is recomputed from scratch
by :func:`reproduce_table_p3` and compared against the published reference
rows; any cell disagreement is surfaced rather than patched over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .counts import base_digits, is_prime, multipartition_count, partition_count, strict_partition_count
from .reductive import BlockInvariants
from .wreath import (
    AbelianDefect,
    ClosedFormDefect,
    CountBound,
    DefectModel,
    TowerProduct,
    WreathTower,
    defect_class_count,
    defect_derived_class_count,
    defect_tower_product,
)

__all__ = [
    "sym_defect",
    "sym_invariants",
    "alt_invariants",
    "spin_k",
    "spin_invariants",
    "TableRowP3",
    "TABLE_P3_WEIGHTS",
    "TABLE_P3_REFERENCE",
    "reproduce_table_p3",
    "table_p3_csv",
    "table_p3_mismatches",
]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def sym_defect(p: int, w: int) -> TowerProduct:
    """Defect group of the weight-w block: one (i+1)-fold iterated wreath
    power of C_p per base-p digit a_i of w, with multiplicity a_i."""
    return defect_tower_product(p, p, w)


def _digit_k0(p: int, w: int) -> int:
    return prod(
        multipartition_count(p ** (i + 1), a_i)
        for i, a_i in enumerate(base_digits(w, p))
        if a_i > 0
    )


def sym_invariants(p: int, w: int) -> BlockInvariants:
    """Exact invariants of the weight-w block of a symmetric group.

    k is the p-multipartition count, k0 the digit product of multipartition
    counts k(p^(i+1), a_i), and l the (p-1)-multipartition count for odd p.
    No modular count is available in closed form at p = 2; it is reported as
    the trivial lower bound and the audit leans on k(B) <= k(D) instead.
    """
    if not is_prime(p):
        raise ValueError(f"sym_invariants: p must be prime, got {p}")
    if w < 0:
        raise ValueError(f"sym_invariants: need w >= 0, got {w}")
    k = multipartition_count(p, w)
    k0 = _digit_k0(p, w)
    if p == 2:
        l = CountBound.exact(1) if w == 0 else CountBound.lower(1)
    else:
        l = CountBound.exact(multipartition_count(p - 1, w))
    notes: tuple[str, ...] = ()
    if p > 3:
        notes = ("digit-product height-zero count extrapolated beyond p in {2,3}",)
    return BlockInvariants(
        family="Sym",
        params=(("p", p), ("w", w)),
        k=CountBound.exact(k),
        k0=CountBound.exact(k0),
        l=l,
        defect=sym_defect(p, w),
        notes=notes,
    )


def alt_invariants(p: int, w: int) -> BlockInvariants:
    """Invariants of an alternating-group block under the weight-w cover.

    Odd p keeps the covering defect group and gives one-sided bounds: the
    total count is at most the covering count, height-zero and modular counts
    are at least half of it.  For p = 2 the defect group has index 2 and the
    parity of w decides how much is exact: odd weight halves k and k0 on the
    nose and keeps the derived subgroup of the covering defect group; even
    weight w >= 4 keeps only inequalities.  The height-zero halving at p = 2
    is sound for every weight: a height-zero character of the covering block
    must restrict irreducibly (a split half would have negative height since
    the defect drops by exactly one), the restriction again has height zero,
    and at most two characters share a restriction.
    """
    cover = sym_invariants(p, w)
    params = (("p", p), ("w", w))
    if w == 0:
        return BlockInvariants("Alt", params, cover.k, cover.k0, cover.l, cover.defect)
    if p != 2:
        return BlockInvariants(
            family="Alt",
            params=params,
            k=CountBound.upper(cover.k.value),
            k0=CountBound.lower(_ceil_div(cover.k0.value, 2)),
            l=CountBound.lower(_ceil_div(cover.l.value, 2)),
            defect=cover.defect,
            notes=("covering-group defect; halved lower bounds",),
        )

    # p = 2: the covering defect group contains odd permutations for every
    # w >= 1, so the defect group here has exactly half its order.
    assert cover.defect is not None
    cover_order = cover.defect.order
    k0_half = _ceil_div(cover.k0.value, 2)
    if w == 1:
        # The whole covering defect group is generated by one transposition:
        # the intersection is trivial and the block has defect zero.
        one = CountBound.exact(1)
        return BlockInvariants("Alt", params, one, one, one, AbelianDefect(1))
    if w == 2:
        return BlockInvariants(
            family="Alt",
            params=params,
            k=CountBound.upper(cover.k.value),
            k0=CountBound.lower(k0_half),
            l=CountBound.lower(1),
            defect=AbelianDefect(cover_order // 2),
            notes=("abelian index-2 defect group",),
        )
    cover_classes = defect_class_count(cover.defect)
    cover_derived = defect_derived_class_count(cover.defect)
    assert cover_classes.kind == "exact"
    if w % 2:
        if cover.k.value % 2 or cover.k0.value % 2:
            raise ValueError(
                f"alt_invariants(2,{w}): odd-weight counts {cover.k.value}, "
                f"{cover.k0.value} must be even"
            )
        defect = ClosedFormDefect(
            label="index-2 subgroup sharing the covering derived subgroup",
            classes=CountBound.lower(_ceil_div(cover_classes.value, 2)),
            derived_classes=cover_derived,
            order=cover_order // 2,
        )
        return BlockInvariants(
            family="Alt",
            params=params,
            k=CountBound.exact(cover.k.value // 2),
            k0=CountBound.exact(cover.k0.value // 2),
            l=CountBound.lower(1),
            defect=defect,
            notes=("odd weight: exact halving; derived subgroup unchanged",),
        )
    defect = ClosedFormDefect(
        label="index-2 subgroup of the covering defect group",
        classes=CountBound.lower(_ceil_div(cover_classes.value, 2)),
        derived_classes=CountBound.lower(_ceil_div(cover_derived.value, 2)),
        order=cover_order // 2,
    )
    return BlockInvariants(
        family="Alt",
        params=params,
        k=CountBound.upper(cover.k.value),
        k0=CountBound.lower(max(8, k0_half)),
        l=CountBound.lower(2),
        defect=defect,
        notes=("even weight: nonabelian defect forces at least two modular characters",),
    )


def spin_k(w: int) -> int:
    """Exact faithful-block count at p = 3: (3/2) * sum q(i) p(w-i).

    The sum pairs strict-partition counts with partition counts; its
    3/2-multiple is integral for every w >= 1, and we insist on that rather
    than round.
    """
    if w < 1:
        raise ValueError(f"spin_k: need w >= 1, got {w}")
    total = Fraction(3, 2) * sum(
        strict_partition_count(i) * partition_count(w - i) for i in range(w + 1)
    )
    assert total.denominator == 1, f"spin_k({w}): non-integral value {total}"
    return int(total)


def spin_invariants(p: int, w: int) -> BlockInvariants:
    """Faithful double-cover block invariants at p in {2, 3}.

    p = 3: the count is the exact closed form, the defect group is the same
    tower product as for the weight-w symmetric block (the center has order
    prime to 3), and the modular count is bounded below by the partition
    count.  No height-zero formula is available, so k0 falls back to the
    floor of 2 that any block of positive defect satisfies.

    p = 2: everything is inherited from the alternating block through the
    central extension: k at most doubles, class counts of defect groups only
    grow, the modular count agrees (at least 4 for w >= 4), and the
    height-zero count is at least 16 once w >= 6.  The weight-3 block is
    pinned exactly: k = 9, l = 3.
    """
    if p == 3:
        if w < 0:
            raise ValueError(f"spin_invariants: need w >= 0, got {w}")
        if w == 0:
            one = CountBound.exact(1)
            return BlockInvariants("Spin", (("p", p), ("w", w)), one, one, one, TowerProduct(()))
        k = spin_k(w)
        assert k <= multipartition_count(3, w), (
            f"spin_invariants(3,{w}): count {k} exceeds the covering block's"
        )
        return BlockInvariants(
            family="Spin",
            params=(("p", p), ("w", w)),
            k=CountBound.exact(k),
            k0=CountBound.exact(1) if w == 0 else CountBound.lower(2),
            l=CountBound.lower(partition_count(w)),
            defect=sym_defect(3, w),
        )
    if p != 2:
        raise ValueError(f"spin_invariants: only p in {{2, 3}} is supported, got {p}")

    alt = alt_invariants(2, w)
    params = (("p", p), ("w", w))
    if w == 0:
        return BlockInvariants("Spin", params, alt.k, alt.k0, alt.l, alt.defect)
    assert alt.defect is not None
    alt_order = alt.defect.order
    alt_classes = defect_class_count(alt.defect)
    alt_derived = defect_derived_class_count(alt.defect)
    if w == 1:
        # Defect zero downstairs, so only the central involution survives
        # upstairs: the defect group is the order-2 center, exactly known.
        return BlockInvariants(
            family="Spin",
            params=params,
            k=CountBound.upper(2),
            k0=CountBound.lower(2),
            l=CountBound.exact(1),
            defect=AbelianDefect(2),
            notes=("central defect group of order 2",),
        )
    if w == 2:
        # The Klein four-group generated by two disjoint double
        # transpositions pulls back to the quaternion group of order 8:
        # five classes, derived subgroup of order 2.
        defect = ClosedFormDefect(
            label="quaternion preimage of the Klein four-group",
            classes=CountBound.exact(5),
            derived_classes=CountBound.exact(2),
            order=8,
        )
    else:
        defect = ClosedFormDefect(
            label="central double cover of the alternating defect group",
            classes=CountBound.lower(alt_classes.value),
            derived_classes=CountBound.lower(alt_derived.value),
            order=2 * alt_order,
        )
    if w == 3:
        return BlockInvariants(
            family="Spin",
            params=params,
            k=CountBound.exact(9),
            k0=CountBound.lower(2),
            l=CountBound.exact(3),
            defect=defect,
            notes=("weight-3 double-cover block pinned exactly",),
        )
    k = CountBound.upper(2 * alt.k.value)
    k0 = CountBound.lower(16) if w >= 6 else CountBound.lower(2)
    if w >= 4:
        l = CountBound.lower(4)
    else:
        l = CountBound.lower(1)
    return BlockInvariants(
        family="Spin",
        params=params,
        k=k,
        k0=k0,
        l=l,
        defect=defect,
        notes=("bounds inherited through the central extension",),
    )


TABLE_P3_WEIGHTS = (3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 17)

# Published reference rows for the p = 3 small-weight table, in the order
# (total/derived ratio, height-zero count, cover/derived ratio); None renders
# as "-" (ratio at most 1).
TABLE_P3_REFERENCE = {
    "k_ratio": (3, 6, 12, 3, 6, 10, 2, 3, 5, 2, 3, 2),
    "k0": (9, 27, 81, 54, 162, 486, 27, 81, 243, 648, 2187, 13122),
    "spin_ratio": (2, 3, 4, None, 2, 2, None, None, None, None, None, None),
}


@dataclass(frozen=True)
class TableRowP3:
    """One recomputed column of the p = 3 small-weight table."""

    w: int
    k: int
    k0: int
    k_defect: int
    k_derived: int
    k_ratio: int | None
    spin: int
    spin_ratio: int | None


def _ratio_ceiling(numerator: int, denominator: int) -> int | None:
    """Ceiling of the ratio, or None when the quotient is at most 1."""
    if numerator <= denominator:
        return None
    return _ceil_div(numerator, denominator)


def reproduce_table_p3() -> tuple[TableRowP3, ...]:
    """Recompute every cell of the p = 3 small-weight table from scratch.

    The derived class counts are exact for all twelve weights (abelian at one
    wreathing level, brute-forced at two), so the ratio columns are honest
    ceilings of exact rationals.
    """
    rows = []
    for w in TABLE_P3_WEIGHTS:
        inv = sym_invariants(3, w)
        assert inv.defect is not None
        k_defect = defect_class_count(inv.defect)
        k_derived = defect_derived_class_count(inv.defect)
        assert k_defect.kind == "exact" and k_derived.kind == "exact", (
            f"table weight {w}: expected exact defect counts, got "
            f"{k_defect.kind}/{k_derived.kind}"
        )
        s = spin_k(w)
        rows.append(
            TableRowP3(
                w=w,
                k=inv.k.value,
                k0=inv.k0.value,
                k_defect=k_defect.value,
                k_derived=k_derived.value,
                k_ratio=_ratio_ceiling(inv.k.value, k_derived.value),
                spin=s,
                spin_ratio=_ratio_ceiling(s, k_derived.value),
            )
        )
    return tuple(rows)


def table_p3_mismatches(rows: tuple[TableRowP3, ...] | None = None) -> list[tuple[str, int, int | None, int | None]]:
    """Cells where recomputation disagrees with the reference rows.

    Returns (row name, weight, computed, reference) tuples; empty means the
    reproduction is bit-exact.
    """
    if rows is None:
        rows = reproduce_table_p3()
    computed = {
        "k_ratio": tuple(r.k_ratio for r in rows),
        "k0": tuple(r.k0 for r in rows),
        "spin_ratio": tuple(r.spin_ratio for r in rows),
    }
    out = []
    for name, reference in TABLE_P3_REFERENCE.items():
        for w, got, want in zip(TABLE_P3_WEIGHTS, computed[name], reference):
            if got != want:
                out.append((name, w, got, want))
    return out


def table_p3_csv(rows: tuple[TableRowP3, ...] | None = None) -> str:
    """Render the recomputed table in the published layout (weights as
    columns, one line per quantity, '-' for ratios at most 1)."""
    if rows is None:
        rows = reproduce_table_p3()

    def fmt(value: int | None) -> str:
        return "-" if value is None else str(value)

    lines = [
        "w," + ",".join(str(r.w) for r in rows),
        "k_ratio," + ",".join(fmt(r.k_ratio) for r in rows),
        "k0," + ",".join(str(r.k0) for r in rows),
        "spin_ratio," + ",".join(fmt(r.spin_ratio) for r in rows),
    ]
    return "\n".join(lines) + "\n"
