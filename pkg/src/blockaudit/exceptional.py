"""Principal blocks of the exceptional series, plus root-system counting.

Three kinds of content live here:

* closed-form invariants for the five small-rank families (rank-2 and
  triality/twisted rank-4 cases at ell = 2, 3), keyed by the family ids
  "G2-l2", "G2-l3", "3D4-l2", "3D4-l3", "2F4-l3";
* the E-series columns, where k(B0) is only known up to a rational multiple
  c of k(D); their audit runs on exact fractions, never floats;
* the simple-root reflection closure used to count positive roots of small
  height, with the classical totals as a cross-check.

Every defect group in the E-series maps onto the wreath-tower machinery, so
k(D) and k(D') come out exact; the interesting part of the audit is whether
the height-zero lower bounds beat c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .audit import (
    HOLDS_CONSERVATIVE,
    INCONCLUSIVE,
    AuditCase,
    AuditVerdict,
    audit_case,
    brauer_ok,
    make_case,
)
from .counts import block_character_count, multipartition_count
from .reductive import BlockInvariants
from .wreath import (
    ClosedFormDefect,
    CountBound,
    DefectModel,
    DetKernelDefect,
    TowerProduct,
    WreathTower,
    defect_class_count,
    defect_derived_class_count,
    defect_tower_product,
)

__all__ = [
    "SMALL_RANK_FAMILIES",
    "small_rank_min_a",
    "small_rank_invariants",
    "small_rank_cases",
    "E_SERIES_FAMILIES",
    "ESeriesData",
    "RATIO_CLAIMS",
    "e_series_data",
    "e_series_verdict",
    "e_series_verdicts",
    "e8_isolated_case",
    "e8_isolated_verdicts",
    "cartan_matrix",
    "positive_roots",
    "root_height_count",
    "expected_positive_total",
]

SMALL_RANK_FAMILIES = ("G2-l2", "G2-l3", "3D4-l2", "3D4-l3", "2F4-l3")


def small_rank_min_a(family: str) -> int:
    # The ell = 2 families force 4 | q - eps, so the tower exponent starts
    # at 2; the ell = 3 families are defined from a = 1 on.
    return 2 if family.endswith("-l2") else 1


def small_rank_invariants(
    family: str, a: int
) -> tuple[BlockInvariants, CountBound, CountBound]:
    """Closed-form (k, k0, l) and defect class data for one small-rank case.

    `a` is the exponent of the relevant cyclotomic part of q: 2^a or 3^a
    divides the ambient torus order exactly.  Returns the invariants plus
    (k(D), k(D')) so callers never re-derive them from the model.
    """
    if family not in SMALL_RANK_FAMILIES:
        raise ValueError(f"unknown small-rank family {family!r}")
    if a < small_rank_min_a(family):
        raise ValueError(
            f"{family}: need a >= {small_rank_min_a(family)}, got {a}"
        )

    notes: tuple[str, ...] = ()
    if family in ("G2-l2", "3D4-l2"):
        # The two families share every invariant: a Klein-four extension of
        # a homocyclic 2-group of rank two.
        third = (4 ** (a - 1) - 1) // 3
        assert third * 3 == 4 ** (a - 1) - 1, f"4^{a - 1} - 1 not divisible by 3"
        k = 9 + 2 ** (a + 1) + third
        k0 = CountBound.exact(8)
        l = CountBound.exact(7)
        defect: DefectModel = ClosedFormDefect(
            label=f"(C{2**a} x C{2**a}).(C2 x C2)",
            classes=CountBound.lower(2 ** (2 * a - 2)),
            derived_classes=CountBound.exact(2 ** (2 * a - 1)),
            order=2 ** (2 * a + 2),
        )
    elif family == "G2-l3":
        square = (3**a - 3) ** 2
        assert square % 12 == 0, f"(3^{a} - 3)^2 not divisible by 12"
        k = 8 + 2 * 3**a + square // 12
        k0 = CountBound.exact(9)
        l = CountBound.exact(7)
        # The defect group lies inside a degree-3 determinant-one linear
        # group and has the same order as its Sylow ell-subgroup, so the
        # det-kernel model applies verbatim and the class count is exact.
        defect = DetKernelDefect(WreathTower(3**a, 3, 1), a)
        notes = ("defect group identified with the full det-kernel model",)
    elif family == "3D4-l3":
        quarter = (9**a - 1) // 4
        assert quarter * 4 == 9**a - 1, f"9^{a} - 1 not divisible by 4"
        k = 7 + 3 ** (a + 1) + quarter
        k0 = CountBound.exact(9)
        l = CountBound.exact(7)
        defect = ClosedFormDefect(
            label=f"(C{3**a} x C{3 ** (a + 1)}).C3",
            classes=CountBound.lower(3 ** (2 * a)),
            derived_classes=CountBound.lower(3 ** (2 * a - 1)),
            order=3 ** (2 * a + 2),
        )
    else:  # 2F4-l3
        total = 3 ** (2 * a) + 36 * 3**a + 555
        assert total % 48 == 0, f"2F4 numerator {total} not divisible by 48"
        k = total // 48
        k0 = CountBound.exact(9)
        l = CountBound.lower(2)
        # Only the extension shape (homocyclic rank two by C3) is known, not
        # the extension itself, so the class count stays a lower bound away
        # from the one case where it is stated outright.
        classes = CountBound.exact(11) if a == 1 else CountBound.lower(3 ** (2 * a - 1))
        defect = ClosedFormDefect(
            label=f"(C{3**a} x C{3**a}).C3",
            classes=classes,
            derived_classes=CountBound.exact(3 ** (2 * a - 1)),
            order=3 ** (2 * a + 1),
        )
        if a > 1:
            notes = ("defect class count kept as a lower bound: extension not pinned",)

    invariants = BlockInvariants(
        family=family,
        params=(("a", a),),
        k=CountBound.exact(k),
        k0=k0,
        l=l,
        defect=defect,
        notes=notes,
    )
    return invariants, defect_class_count(defect), defect_derived_class_count(defect)


def small_rank_cases(a_max: int = 8) -> Iterator[AuditCase]:
    for family in SMALL_RANK_FAMILIES:
        for a in range(small_rank_min_a(family), a_max + 1):
            invariants, k_defect, k_derived = small_rank_invariants(family, a)
            yield make_case(invariants, k_defect, k_derived)


# ---------------------------------------------------------------------------
# E-series principal blocks.  k(B0) is controlled only through k(B0) <= c*k(D)
# for an explicit rational c, so the audit compares c*k(D) against both
# l(B0)*k(D) and k0(B0)*k(D') by exact cross-multiplication.

E_SERIES_FAMILIES = (
    "E6-l5",
    "2E6-l5",
    "E7-l5",
    "E7-l7",
    "E8-l5-split",
    "E8-l5-twisted",
    "E8-l7",
)

# Claimed minimum of k0(B0)*k(D')/k(D) per family; the tests check the
# computed ratio never drops below these for any tower exponent.
RATIO_CLAIMS = {
    "E6-l5": Fraction(25, 2),
    "2E6-l5": Fraction(25, 2),
    "E7-l5": Fraction(25, 12),
    "E7-l7": Fraction(24),
    "E8-l5-split": Fraction(28),
    "E8-l5-twisted": Fraction(16),
    "E8-l7": Fraction(12),
}


@dataclass(frozen=True)
class ESeriesData:
    """Everything the audit needs for one E-series column at one exponent."""

    family: str
    a: int
    ell: int
    c: Fraction  # k(B0) <= c * k(D)
    modular_count: int  # l(B0), exact
    k0_table: int | None  # coarse closed-form lower bound, when printed
    k0_proof: Fraction  # sharper proof-route lower bound
    k0: CountBound  # the bound used downstream
    defect: DefectModel
    k_defect: CountBound
    k_derived: CountBound


def _ceil_frac(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def e_series_data(family: str, a: int) -> ESeriesData:
    if family not in E_SERIES_FAMILIES:
        raise ValueError(f"unknown E-series family {family!r}")
    if a < 1:
        raise ValueError(f"{family}: need a >= 1, got {a}")

    if family in ("E6-l5", "2E6-l5"):
        ell, c, modular = 5, Fraction(6), 25
        k0_table = 5 + 5 ** (a + 1)
        k0_proof = Fraction(10 + 5 * (5 ** (2 * a) - 1) // 2)
        defect: DefectModel = defect_tower_product(5**a, 5, 6)
    elif family == "E7-l5":
        ell, c, modular = 5, Fraction(1), 60
        k0_table = 14
        k0_proof = Fraction(30) + Fraction(5 * (5 ** (3 * a) - 1), 12)
        defect = defect_tower_product(5**a, 5, 7)
    elif family == "E7-l7":
        ell, c, modular = 7, Fraction(15, 4), 60
        k0_table = None
        k0_proof = Fraction(14 + 7 * (7**a - 1) // 2)
        defect = defect_tower_product(7**a, 7, 7)
    elif family == "E8-l5-split":
        ell, c, modular = 5, Fraction(25, 4), 112
        k0_table = 40
        k0_proof = Fraction(40)
        half = 5 ** (4 * a - 1) + 24  # det-kernel closed form, one factor
        defect = ClosedFormDefect(
            label=f"det-kernel(C{5**a} wr C5, e={a})^2",
            classes=CountBound.exact(half * half),
            derived_classes=CountBound.exact(5 ** (8 * a - 2)),
            order=5 ** (8 * a + 2),
        )
    elif family == "E8-l5-twisted":
        ell, c, modular = 5, Fraction(3, 4), 59
        k0_table = 20
        k0_proof = Fraction(20)
        defect = DetKernelDefect(WreathTower(5**a, 5, 1), a)
    else:  # E8-l7
        ell, c, modular = 7, Fraction(38, 17), 112
        k0_table = None
        k0_proof = Fraction(28 + 7 * (7 ** (2 * a) - 1) // 4)
        defect = defect_tower_product(7**a, 7, 8)

    if family in ("E8-l5-split", "E8-l5-twisted"):
        k0 = CountBound.exact(k0_table)
    else:
        best = max(k0_table or 0, _ceil_frac(k0_proof))
        k0 = CountBound.lower(best)

    return ESeriesData(
        family=family,
        a=a,
        ell=ell,
        c=c,
        modular_count=modular,
        k0_table=k0_table,
        k0_proof=k0_proof,
        k0=k0,
        defect=defect,
        k_defect=defect_class_count(defect),
        k_derived=defect_derived_class_count(defect),
    )


def e_series_verdict(family: str, a: int) -> AuditVerdict:
    """Audit one E-series column at one exponent on exact fractions.

    Both inequalities route through the k(B0) <= c*k(D) envelope, so the
    left side is an upper bound by construction and a passing check is
    holds-conservative at best.  Scaled witnesses keep everything integral:
    each side carries the factor denominator(c).
    """
    data = e_series_data(family, a)
    kD = data.k_defect
    kDp = data.k_derived
    c = data.c
    k_upper = _ceil_frac(c * kD.value)
    notes = (
        "k bounded by c*k(D) with c = "
        f"{c.numerator}/{c.denominator}",
        f"height-zero lower bounds: table {data.k0_table}, proof {data.k0_proof}",
    )
    invariants = BlockInvariants(
        family=family,
        params=(("a", a),),
        k=CountBound.upper(k_upper),
        k0=data.k0,
        l=CountBound.exact(data.modular_count),
        defect=data.defect,
        notes=notes,
    )
    case = make_case(invariants, kD, kDp)

    left1 = c.numerator * kD.value
    right1 = c.denominator * data.k0.value * kDp.value
    c1 = HOLDS_CONSERVATIVE if left1 <= right1 else INCONCLUSIVE
    witness1 = {
        "left": left1,
        "right": right1,
        "left-kind": "upper",
        "right-kinds": [data.k0.kind, kDp.kind],
        "scale": c.denominator,
    }

    left2 = c.numerator * kD.value
    right2 = c.denominator * data.modular_count * kD.value
    c2 = HOLDS_CONSERVATIVE if left2 <= right2 else INCONCLUSIVE
    witness2 = {
        "left": left2,
        "right": right2,
        "left-kind": "upper",
        "right-kinds": ["exact", kD.kind],
        "scale": c.denominator,
    }

    witness = {"c1": witness1, "c2": witness2, "brauer-ok": brauer_ok(case)}
    return AuditVerdict(case=case, c1=c1, c2=c2, witness=witness)


def e_series_verdicts(a_max: int = 8) -> list[AuditVerdict]:
    return [
        e_series_verdict(family, a)
        for family in E_SERIES_FAMILIES
        for a in range(1, a_max + 1)
    ]


def e8_isolated_case(a: int) -> AuditCase:
    """The isolated rank-8 block over the D8 subsystem at ell = 5.

    Its character count is bounded by the sum of the degree-8 and degree-4
    unipotent block counts at d = 1, its defect group is the weight-8 shape
    C_(5^a)^3 x (C_(5^a) wr C_5), and the height-zero count is bounded below
    by the product of a degree-3 multipartition count with the top cyclic
    layer.  Only k(D) and k(D') are exact here.
    """
    if a < 1:
        raise ValueError(f"E8-D8-isolated: need a >= 1, got {a}")
    k_upper = block_character_count(5, a, 1, 8) + block_character_count(5, a, 1, 4)
    k0 = CountBound.lower(5 ** (a + 1) * multipartition_count(5**a, 3))
    defect = TowerProduct(
        ((WreathTower(5**a, 5, 0), 3), (WreathTower(5**a, 5, 1), 1))
    )
    invariants = BlockInvariants(
        family="E8-D8-isolated",
        params=(("a", a),),
        k=CountBound.upper(k_upper),
        k0=k0,
        l=CountBound.lower(1),
        defect=defect,
        notes=("k bounded by the sum of two unipotent block counts",),
    )
    return make_case(invariants)


def e8_isolated_verdicts(a_max: int = 4) -> list[AuditVerdict]:
    return [audit_case(e8_isolated_case(a)) for a in range(1, a_max + 1)]


# ---------------------------------------------------------------------------
# Root systems: simple-root coordinates, reflection closure, height counts.

_RANK_RANGE = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


@lru_cache(maxsize=None)
def cartan_matrix(series: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with the convention A[i][j] = 2(a_i, a_j)/(a_i, a_i),
    so the i-th simple reflection acts on coordinates as
    beta |-> beta - (sum_j A[i][j] beta_j) e_i."""
    series = series.upper()
    if series not in _RANK_RANGE:
        raise ValueError(f"unknown series {series!r}")
    low, high = _RANK_RANGE[series]
    if rank < low or (high is not None and rank > high):
        raise ValueError(f"series {series} has no rank-{rank} system")

    entries = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def bond(i: int, j: int, a_ij: int = -1, a_ji: int = -1) -> None:
        entries[i][j] = a_ij
        entries[j][i] = a_ji

    if series == "A":
        for i in range(rank - 1):
            bond(i, i + 1)
    elif series == "B":  # last simple root short
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -1, -2)
    elif series == "C":  # last simple root long
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -2, -1)
    elif series == "D":
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 3, rank - 1)
    elif series == "E":
        for i, j in ((0, 2), (2, 3), (3, 4), (4, 5)):
            bond(i, j)
        for i in range(5, rank - 1):
            bond(i, i + 1)
        bond(1, 3)
    elif series == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    else:  # G
        bond(0, 1, -1, -3)
    return tuple(tuple(row) for row in entries)


@lru_cache(maxsize=None)
def positive_roots(series: str, rank: int) -> frozenset[tuple[int, ...]]:
    """All positive roots in simple-root coordinates, via the reflection
    closure of the simple roots."""
    matrix = cartan_matrix(series, rank)
    simples = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    seen: set[tuple[int, ...]] = set(simples)
    frontier = list(simples)
    while frontier:
        next_frontier = []
        for beta in frontier:
            for i in range(rank):
                pairing = sum(matrix[i][j] * beta[j] for j in range(rank))
                image = beta[:i] + (beta[i] - pairing,) + beta[i + 1 :]
                if image not in seen:
                    seen.add(image)
                    next_frontier.append(image)
        frontier = next_frontier
    return frozenset(b for b in seen if all(coord >= 0 for coord in b))


def root_height_count(series: str, rank: int, low: int = 2, high: int = 3) -> int:
    """Number of positive roots whose height lies in [low, high]."""
    return sum(1 for b in positive_roots(series, rank) if low <= sum(b) <= high)


def expected_positive_total(series: str, rank: int) -> int:
    """Classical count of positive roots, used to cross-check the closure."""
    series = series.upper()
    if series == "A":
        return rank * (rank + 1) // 2
    if series in ("B", "C"):
        return rank * rank
    if series == "D":
        return rank * (rank - 1)
    return {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}[
        (series, rank)
    ]
