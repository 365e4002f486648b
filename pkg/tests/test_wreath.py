"""Wreath towers, defect models, and the brute-force oracle cross-checks.

The oracle tests are the load-bearing ones: every closed form and every lower
bound in wreath.py gets compared against explicit conjugacy-class enumeration
on groups small enough to enumerate (order <= 200000).
"""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockaudit.oracle import oracle_report
from blockaudit.wreath import (
    AbelianDefect,
    ClosedFormDefect,
    CountBound,
    DetKernelDefect,
    TowerProduct,
    WreathTower,
    defect_class_count,
    defect_derived_class_count,
    defect_is_abelian,
    defect_order,
    defect_tower_product,
    p_group_class_lower,
    sl_derived_index,
    wreath_class_count,
)

# (spec string, expected order, expected class count, expected derived order,
#  expected derived class count).  Nine instances, all enumerated from scratch.
ORACLE_TABLE = [
    ("cyclic:12", 12, 12, 1, 1),
    ("tower:2,2,1", 8, 5, 2, 2),
    ("tower:2,2,2", 128, 20, 16, 10),
    ("tower:3,3,1", 81, 17, 9, 9),
    ("tower:5,5,1", 15625, 649, 625, 625),
    ("detkernel:3,3,1", 27, 11, 3, 3),
    ("detkernel:9,3,2", 243, 35, 27, 27),
    ("detkernel:5,5,1", 3125, 149, 125, 125),
    ("product:cyclic:9;tower:3,3,1", 729, 153, 9, 9),
]


@pytest.mark.parametrize("spec,order,classes,d_order,d_classes", ORACLE_TABLE)
def test_oracle_enumeration(spec, order, classes, d_order, d_classes):
    report = oracle_report(spec)
    assert report["order"] == order, f"{spec}: order {report['order']} != {order}"
    assert report["class_count"] == classes, (
        f"{spec}: {report['class_count']} classes, expected {classes}"
    )
    assert report["derived_order"] == d_order
    if d_classes is not None:
        assert report["derived_class_count"] == d_classes


def test_wreath_class_count_formula():
    # (k^ell - k)/ell + ell*k, checked against the enumerated towers above.
    assert wreath_class_count(2, 2) == 5
    assert wreath_class_count(3, 3) == 17
    assert wreath_class_count(5, 5) == 649
    assert wreath_class_count(7, 7) == 117697
    assert wreath_class_count(5, 2) == 20


@given(st.integers(1, 50), st.sampled_from([2, 3, 5, 7, 11]))
def test_wreath_class_count_integrality(k, ell):
    value = wreath_class_count(k, ell)
    assert value == (k**ell - k) // ell + ell * k
    assert (k**ell - k) % ell == 0, f"Fermat quotient not integral at k={k} ell={ell}"


def test_tower_class_count_matches_oracle():
    for m, ell, levels, spec in [
        (2, 2, 1, "tower:2,2,1"),
        (2, 2, 2, "tower:2,2,2"),
        (3, 3, 1, "tower:3,3,1"),
        (5, 5, 1, "tower:5,5,1"),
    ]:
        tower = WreathTower(m, ell, levels)
        report = oracle_report(spec, with_derived=False)
        assert tower.order == report["order"]
        assert tower.class_count() == report["class_count"], (
            f"tower({m},{ell},{levels}): recursion disagrees with enumeration"
        )


def test_tower_class_chain_p2():
    # Iterated wreathing by C2: class counts grow 2, 5, 20, 230, 26795.
    values = [WreathTower(2, 2, levels).class_count() for levels in range(5)]
    assert values == [2, 5, 20, 230, 26795]


def test_derived_class_count_bounds():
    # Derived subgroup class counts: exact via oracle when small, else a floor.
    tower = WreathTower(5, 5, 1)
    bound = tower.derived_class_count(cap=200000)
    report = oracle_report("tower:5,5,1")
    assert bound.value <= report["derived_class_count"]
    assert bound.kind in ("exact", "lower")
    if bound.kind == "exact":
        assert bound.value == report["derived_class_count"]


def test_det_kernel_closed_form_matches_oracle():
    model = DetKernelDefect(WreathTower(5, 5, 1), 1)
    assert defect_order(model) == 3125
    count = defect_class_count(model, cap=None)
    assert count.kind == "exact" and count.value == 149
    derived = defect_derived_class_count(model, cap=None)
    assert derived.value <= 125
    small = DetKernelDefect(WreathTower(3, 3, 1), 1)
    assert defect_class_count(small, cap=None).value == 11


def test_class_count_floor_against_oracle():
    # p^2 + (n-2)(p-1) is a floor for class counts of groups of order p^n,
    # with equality at the extraspecial examples in the oracle table.
    assert p_group_class_lower(2, 3) == 5  # == k(D8), the 2,2 tower
    assert p_group_class_lower(3, 3) == 11  # == the det-kernel at 3,3
    assert p_group_class_lower(5, 5) <= 149
    assert p_group_class_lower(3, 5) <= 35
    for spec, n, p in [("tower:2,2,1", 3, 2), ("tower:3,3,1", 4, 3), ("detkernel:9,3,2", 5, 3)]:
        report = oracle_report(spec, with_derived=False)
        assert report["class_count"] >= p_group_class_lower(p, n)


def test_defect_tower_product_from_digits():
    # Weight 7 at ell = 5 splits as 7 = 2 + 1*5: two bare cyclic factors and
    # one single-level tower.
    model = defect_tower_product(5, 5, 7)
    assert isinstance(model, TowerProduct)
    orders = sorted(tower.order**mult for tower, mult in model.factors)
    assert defect_order(model) == 5**8  # matches the 5-part of (5*7)!
    assert orders == [25, 15625]
    assert defect_class_count(model).value == 25 * 649


def test_defect_class_count_multiplicative():
    model = defect_tower_product(3, 3, 4)  # digits (1, 1): C3 x (C3 wr C3)
    count = defect_class_count(model)
    assert count.kind == "exact"
    assert count.value == 3 * 17
    report = oracle_report("product:cyclic:3;tower:3,3,1", with_derived=False)
    assert report["class_count"] == count.value


def test_abelian_defect_model():
    model = AbelianDefect(625)
    assert defect_order(model) == 625
    assert defect_class_count(model) == CountBound.exact(625)
    assert defect_derived_class_count(model) == CountBound.exact(1)


def test_defect_is_abelian():
    assert defect_is_abelian(AbelianDefect(8)) is True
    assert defect_is_abelian(defect_tower_product(5, 5, 3)) is True  # w < ell
    assert defect_is_abelian(defect_tower_product(5, 5, 7)) is False
    assert defect_is_abelian(DetKernelDefect(WreathTower(5, 5, 1), 1)) is False
    closed = ClosedFormDefect("mystery", CountBound.lower(5), CountBound.lower(1))
    assert defect_is_abelian(closed) is None


def test_closed_form_defect_passthrough():
    model = ClosedFormDefect("pinned", CountBound.exact(11), CountBound.lower(2), order=27)
    assert defect_class_count(model) == CountBound.exact(11)
    assert defect_derived_class_count(model) == CountBound.lower(2)
    assert defect_order(model) == 27


def test_count_bound_constructors():
    assert CountBound.exact(7).kind == "exact"
    assert CountBound.lower(7).kind == "lower"
    assert CountBound.upper(7).kind == "upper"
    with pytest.raises(ValueError):
        CountBound(7, "approx")


def test_sl_derived_index():
    # ell exactly when n is a pure power of ell, and 1 everywhere else.
    assert sl_derived_index(5, 5) == 5
    assert sl_derived_index(25, 5) == 5
    assert sl_derived_index(9, 3) == 3
    assert sl_derived_index(10, 5) == 1
    assert sl_derived_index(7, 5) == 1
    assert sl_derived_index(1, 3) == 1


@given(st.integers(2, 6), st.sampled_from([2, 3, 5]))
def test_tower_orders(levels, ell):
    tower = WreathTower(ell, ell, levels - 1)
    assert tower.order == ell ** sum(ell**i for i in range(levels))
    # Derived order is a genuine divisor of the group order.
    assert tower.order % tower.derived_order == 0
