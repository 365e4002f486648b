"""Brute-force finite-group engine.

This is the package's independent verification route: groups are enumerated
element by element, multiplication is defined directly from the group
construction, conjugacy classes are found by orbit search, and derived
subgroups by commutator closure.  Nothing in here knows any counting
formula, which is the point — the fast formulas elsewhere are tested against
these enumerations wherever an instance fits under the order cap.

Supported constructions:

* cyclic groups,
* iterated wreath products  C_m wr C_ell wr ... wr C_ell  ("towers"),
* the coordinate-sum-zero subgroup of a one-level tower (the determinant
  kernel that appears inside special linear groups),
* derived subgroups of towers, built structurally without enumerating the
  parent (the commutator subgroup of G wr C_ell consists of the base tuples
  whose coordinate product lies in [G, G]),
* finite direct products of the above.

Elements are nested tuples of ints, so they hash fast and compare
deterministically.  A wreath element is a pair (f, s): f the tuple of base
components, s the shift.  Multiplication follows
(f, s) * (g, t) = (j -> f(j) * g(j - s), s + t).
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass, field
from itertools import product as iter_product
from typing import Any, Callable

__all__ = [
    "FiniteGroup",
    "OracleCapError",
    "cyclic_group",
    "tower_group",
    "det_kernel_group",
    "derived_tower_group",
    "product_group",
    "class_count",
    "derived_subgroup",
    "parse_group_spec",
    "oracle_report",
    "oracle_cap",
    "tower_order",
]

DEFAULT_CAP = 200_000


def oracle_cap() -> int:
    """Element cap for brute-force enumeration (env BLOCKAUDIT_ORACLE_CAP)."""
    raw = os.environ.get("BLOCKAUDIT_ORACLE_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise OracleCapError(f"BLOCKAUDIT_ORACLE_CAP is not an integer: {raw!r}")


class OracleCapError(Exception):
    """Raised when a requested enumeration would exceed the element cap."""


@dataclass
class FiniteGroup:
    """A finite group given by an explicit element list and operations."""

    name: str
    elements: list[Any]
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any
    generators: list[Any] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)


def _check_cap(order: int, cap: int | None, what: str) -> None:
    limit = oracle_cap() if cap is None else cap
    if order > limit:
        raise OracleCapError(
            f"{what} has order {order}, above the brute-force cap {limit}"
        )


def cyclic_group(m: int, cap: int | None = None) -> FiniteGroup:
    if m < 1:
        raise ValueError(f"cyclic_group: need m >= 1, got {m}")
    _check_cap(m, cap, f"C_{m}")
    mul = lambda x, y: (x + y) % m  # noqa: E731
    inv = lambda x: (-x) % m  # noqa: E731
    gens = [1] if m > 1 else []
    return FiniteGroup(f"cyclic:{m}", list(range(m)), mul, inv, 0, gens)


def tower_order(m: int, ell: int, levels: int) -> int:
    """Order of C_m wr C_ell wr ... wr C_ell with `levels` wreathings."""
    return m ** (ell**levels) * ell ** ((ell**levels - 1) // (ell - 1))


def _wreath_ops(base_mul, base_inv, ell: int):
    # (f, s) * (g, t) multiplies f coordinatewise with g rotated by s; doing
    # the rotation as one slice before a C-level map is what keeps the
    # brute-force enumerations fast enough for the larger towers.
    def mul(x, y):
        f, s = x
        g, t = y
        if s:
            g = g[ell - s :] + g[: ell - s]
        return tuple(map(base_mul, f, g)), (s + t) % ell

    def inv(x):
        f, s = x
        if s:
            f = f[s:] + f[:s]
        return tuple(map(base_inv, f)), (-s) % ell

    return mul, inv


def _tabled(group: FiniteGroup, threshold: int = 512) -> FiniteGroup:
    """The same group with elements renamed to 0..n-1 and table-driven ops.

    Purely a speed device for groups that become the base of a wreath
    construction: nested-tuple arithmetic is replaced by two list lookups.
    Groups above the threshold are returned unchanged (the table is
    quadratic in the order).
    """
    n = group.order
    if n > threshold:
        return group
    index = {e: i for i, e in enumerate(group.elements)}
    mul_table = [
        [index[group.mul(a, b)] for b in group.elements] for a in group.elements
    ]
    inv_table = [index[group.inv(a)] for a in group.elements]
    mul = lambda x, y: mul_table[x][y]  # noqa: E731
    inv = lambda x: inv_table[x]  # noqa: E731
    return FiniteGroup(
        group.name,
        list(range(n)),
        mul,
        inv,
        index[group.identity],
        [index[g] for g in group.generators],
    )


def tower_group(m: int, ell: int, levels: int, cap: int | None = None) -> FiniteGroup:
    """The iterated wreath product C_m wr C_ell wr ... wr C_ell, enumerated."""
    if levels < 0:
        raise ValueError(f"tower_group: need levels >= 0, got {levels}")
    if ell < 2:
        raise ValueError(f"tower_group: need ell >= 2, got {ell}")
    _check_cap(tower_order(m, ell, levels), cap, f"tower({m},{ell},{levels})")
    group = cyclic_group(m, cap=tower_order(m, ell, levels))
    for level in range(levels):
        group = _tabled(group)
        mul, inv = _wreath_ops(group.mul, group.inv, ell)
        identity = (tuple(group.identity for _ in range(ell)), 0)
        elements = [
            (f, s)
            for f in iter_product(group.elements, repeat=ell)
            for s in range(ell)
        ]
        # generators: the base generators planted in coordinate 0, plus the shift
        gens = [
            (tuple(g if j == 0 else group.identity for j in range(ell)), 0)
            for g in group.generators
        ]
        gens.append((tuple(group.identity for _ in range(ell)), 1))
        group = FiniteGroup(
            f"tower({m},{ell},{level + 1})", elements, mul, inv, identity, gens
        )
    return group


def det_kernel_group(m: int, ell: int, kernel_exponent: int, cap: int | None = None) -> FiniteGroup:
    """Elements of C_m wr C_ell whose coordinate sum vanishes mod ell^e.

    Models the intersection of a one-level defect tower with a determinant
    kernel: the base C_m is written additively, and membership requires
    sum(f) == 0 mod ell**kernel_exponent.  The shift part is unrestricted
    (an ell-cycle is an even permutation for odd ell), so ell must be odd.
    """
    e = kernel_exponent
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"det_kernel_group: need odd ell >= 3, got {ell}")
    if e < 0 or m % ell**e != 0:
        raise ValueError(
            f"det_kernel_group: need ell^e | m, got m={m} ell={ell} e={e}"
        )
    modulus = ell**e
    order = m ** (ell - 1) * (m // modulus) * ell
    _check_cap(order, cap, f"detkernel({m},{ell},{e})")
    base = cyclic_group(m, cap=order)
    mul, inv = _wreath_ops(base.mul, base.inv, ell)
    elements = []
    for head in iter_product(range(m), repeat=ell - 1):
        residue = (-sum(head)) % modulus
        for last in range(residue, m, modulus):
            f = head + (last,)
            for s in range(ell):
                elements.append((f, s))
    assert len(elements) == order, (len(elements), order)
    identity = (tuple(0 for _ in range(ell)), 0)
    gens = _find_generators(elements, mul, identity)
    return FiniteGroup(f"detkernel({m},{ell},{e})", elements, mul, inv, identity, gens)


def derived_tower_group(m: int, ell: int, levels: int, cap: int | None = None) -> FiniteGroup:
    """Derived subgroup of tower(m, ell, levels), built structurally.

    For G wr C_ell the commutator subgroup sits inside the base G^ell and
    consists exactly of the tuples whose coordinate product lies in [G, G].
    That lets us enumerate the derived subgroup of a tower whose own order
    is far beyond the cap, as long as |G|^(ell-1) * |[G,G]| fits.
    """
    if levels < 1:
        raise ValueError(f"derived_tower_group: need levels >= 1, got {levels}")
    base = _tabled(tower_group(m, ell, levels - 1, cap=cap))
    base_derived = derived_subgroup(base) if levels > 1 else None
    if levels == 1:
        # [C_m wr C_ell]' = base tuples summing to 0 mod m: enumerate directly.
        order = m ** (ell - 1)
        _check_cap(order, cap, f"derived tower({m},{ell},1)")
        mul, inv = _wreath_ops(base.mul, base.inv, ell)
        elements = []
        for head in iter_product(range(m), repeat=ell - 1):
            f = head + ((-sum(head)) % m,)
            elements.append((f, 0))
        identity = (tuple(0 for _ in range(ell)), 0)
    else:
        order = base.order ** (ell - 1) * base_derived.order
        _check_cap(order, cap, f"derived tower({m},{ell},{levels})")
        mul, inv = _wreath_ops(base.mul, base.inv, ell)
        elements = []
        for head in iter_product(base.elements, repeat=ell - 1):
            prefix = base.identity
            for x in head:
                prefix = base.mul(prefix, x)
            anchor = base.inv(prefix)
            for c in base_derived.elements:
                elements.append((head + (base.mul(anchor, c),), 0))
        identity = (tuple(base.identity for _ in range(ell)), 0)
    assert len(elements) == order, (len(elements), order)
    gens = _find_generators(elements, mul, identity)
    return FiniteGroup(
        f"derived-tower({m},{ell},{levels})", elements, mul, inv, identity, gens
    )


def product_group(left: FiniteGroup, right: FiniteGroup, cap: int | None = None) -> FiniteGroup:
    """Direct product; elements are pairs, operations act componentwise."""
    order = left.order * right.order
    _check_cap(order, cap, f"{left.name} x {right.name}")
    lmul, rmul = left.mul, right.mul
    linv, rinv = left.inv, right.inv

    def mul(x, y):
        return (lmul(x[0], y[0]), rmul(x[1], y[1]))

    def inv(x):
        return (linv(x[0]), rinv(x[1]))

    elements = [(a, b) for a in left.elements for b in right.elements]
    identity = (left.identity, right.identity)
    gens = [(g, right.identity) for g in left.generators]
    gens += [(left.identity, g) for g in right.generators]
    return FiniteGroup(
        f"product:{left.name};{right.name}", elements, mul, inv, identity, gens
    )


def _bfs_closure(gens: list[Any], mul, identity) -> set[Any]:
    """Subgroup generated by gens (finite, so closure under * suffices)."""
    elems = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def _find_generators(elements: list[Any], mul, identity, seed: int = 0) -> list[Any]:
    """Small generating set for the subgroup formed by `elements`.

    Greedy: keep adjoining an element outside the current closure.  The
    candidate order is shuffled deterministically — scanning elements in
    sorted order tends to crawl through a chain of small subgroups, while a
    shuffled scan almost always finishes with a handful of generators.
    """
    want = len(elements)
    candidates = list(elements)
    random.Random(seed).shuffle(candidates)
    gens: list[Any] = []
    closure = {identity}
    for x in candidates:
        if len(closure) == want:
            break
        if x in closure:
            continue
        gens.append(x)
        closure = _bfs_closure(gens, mul, identity)
    assert len(closure) == want, "generator search did not exhaust the subgroup"
    return gens


def class_count(group: FiniteGroup) -> int:
    """Number of conjugacy classes, by orbit search under generator conjugation."""
    elems = group.elements
    gens = group.generators or _find_generators(elems, group.mul, group.identity)
    index = {e: i for i, e in enumerate(elems)}
    mul, inv = group.mul, group.inv
    # Conjugation by each generator as a permutation of element indices;
    # orbits of the generated permutation group are exactly the classes.
    perms = []
    for s in gens:
        s_inv = inv(s)
        perms.append([index[mul(mul(s_inv, x), s)] for x in elems])
    seen = bytearray(len(elems))
    count = 0
    for start in range(len(elems)):
        if seen[start]:
            continue
        count += 1
        seen[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for perm in perms:
                j = perm[i]
                if not seen[j]:
                    seen[j] = 1
                    stack.append(j)
    return count


def derived_subgroup(group: FiniteGroup) -> FiniteGroup:
    """Commutator subgroup, from scratch.

    Uses the standard fact that the commutators [x, s] with x in G and s
    running over a generating set already generate [G, G] (their normal
    closure is visible: modulo that subgroup every generator is central).
    """
    mul, inv = group.mul, group.inv
    gens = group.generators or _find_generators(
        group.elements, mul, group.identity
    )
    commutators = set()
    for x in group.elements:
        x_inv = inv(x)
        for s in gens:
            commutators.add(mul(mul(inv(s), mul(x_inv, s)), x))
    small = _find_generators_from_seed(commutators, mul, group.identity)
    elements = sorted(_bfs_closure(small, mul, group.identity))
    return FiniteGroup(
        f"derived:{group.name}", elements, mul, inv, group.identity, small
    )


def _find_generators_from_seed(seed_elems: set[Any], mul, identity) -> list[Any]:
    """Greedy generating subset of a seed set (closure target unknown)."""
    gens: list[Any] = []
    closure = {identity}
    for x in sorted(seed_elems):
        if x not in closure:
            gens.append(x)
            closure = _bfs_closure(gens, mul, identity)
    return gens


# ---------------------------------------------------------------------------
# spec strings and memoized reports

_report_lock = threading.Lock()
_report_memo: dict[str, dict] = {}


def parse_group_spec(spec: str, cap: int | None = None) -> FiniteGroup:
    """Build a group from a compact spec string.

    Grammar (integers throughout):

    * ``cyclic:M``
    * ``tower:M,ELL,LEVELS``        — C_M wr C_ELL wr ... wr C_ELL
    * ``detkernel:M,ELL,E``         — sum-zero-mod-ELL^E subgroup of a tower
    * ``derived:M,ELL,LEVELS``      — derived subgroup of the tower
    * ``product:SPEC;SPEC[;...]``   — direct product of the above
    """
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    try:
        if kind == "cyclic":
            return cyclic_group(int(rest), cap=cap)
        if kind == "tower":
            m, ell, levels = (int(x) for x in rest.split(","))
            return tower_group(m, ell, levels, cap=cap)
        if kind == "detkernel":
            m, ell, e = (int(x) for x in rest.split(","))
            return det_kernel_group(m, ell, e, cap=cap)
        if kind == "derived":
            m, ell, levels = (int(x) for x in rest.split(","))
            return derived_tower_group(m, ell, levels, cap=cap)
        if kind == "product":
            parts = rest.split(";")
            if len(parts) < 2:
                raise ValueError("product spec needs at least two factors")
            group = parse_group_spec(parts[0], cap=cap)
            for part in parts[1:]:
                group = product_group(group, parse_group_spec(part, cap=cap), cap=cap)
            return group
    except OracleCapError:
        raise
    except ValueError as exc:
        raise ValueError(f"bad group spec {spec!r}: {exc}") from exc
    raise ValueError(f"bad group spec {spec!r}: unknown kind {kind!r}")


def oracle_report(spec: str, cap: int | None = None, with_derived: bool = True) -> dict:
    """Enumerate the group behind `spec` and report its brute-force counts.

    Returns {"model", "order", "class_count", "derived_order",
    "derived_class_count"}.  Reports are memoized per spec string, so sweep
    and table code can share the expensive enumerations.
    """
    key = f"{spec}|derived={with_derived}"
    with _report_lock:
        if key in _report_memo:
            return dict(_report_memo[key])
    group = parse_group_spec(spec, cap=cap)
    report = {
        "model": spec.strip(),
        "order": group.order,
        "class_count": class_count(group),
    }
    if with_derived:
        derived = derived_subgroup(group)
        report["derived_order"] = derived.order
        report["derived_class_count"] = class_count(derived)
    with _report_lock:
        _report_memo[key] = dict(report)
    return dict(report)
