"""Unipotent block invariants for linear, unitary and classical groups.

Everything here factors through the four integers (ell, a, d, w): the prime,
the exponent with ell^a the full ell-part of q^d - 1, the order d of q modulo
ell, and the weight w.  q itself never appears: distinct q with the same
parameters share every invariant we track, which turns an infinite family
into a finite sweep.

Unitary versions are the same code path with d read as the order of -q
(the callers pick the label); special linear and classical groups delegate to
the linear computation and then apply the quotient/doubling corrections.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

from .counts import (
    base_digits,
    block_character_count,
    block_slot_sizes,
    is_prime,
    multipartition_count,
    weight_decomposition_count,
)
from .wreath import (
    ClosedFormDefect,
    CountBound,
    DefectModel,
    DetKernelDefect,
    WreathTower,
    defect_class_count,
    defect_tower_product,
)

__all__ = [
    "BlockInvariants",
    "gl_invariants",
    "sl_invariants",
    "pgl_k0",
    "classical_invariants",
    "CLASSICAL_FAMILIES",
]


@dataclass(frozen=True)
class BlockInvariants:
    """The triple (k, k0, l) for one block, plus its defect-group model.

    `params` keeps the defining parameters as ordered (name, value) pairs so
    reports serialize deterministically.  `notes` records any correction the
    family applied on top of the plain linear-group computation.
    """

    family: str
    params: tuple[tuple[str, int], ...]
    k: CountBound
    k0: CountBound
    l: CountBound
    defect: DefectModel | None
    notes: tuple[str, ...] = ()

    def param_dict(self) -> dict[str, int]:
        return dict(self.params)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _height_zero_product(ell: int, a: int, d: int, w: int) -> int:
    """Digit-by-digit product for the height-zero count: one multipartition
    factor k(b*ell^i, a_i) per base-ell digit a_i of the weight."""
    b, _ = block_slot_sizes(ell, a, d)
    return prod(
        multipartition_count(b * ell**i, a_i)
        for i, a_i in enumerate(base_digits(w, ell))
        if a_i > 0
    )


def gl_invariants(ell: int, a: int, d: int, w: int, family: str = "GL") -> BlockInvariants:
    """Invariants of the weight-w unipotent block with parameters (ell,a,d).

    All three counts are exact multipartition expressions:

    * k    — total count, summed over weight decompositions;
    * k0   — product of one multipartition count per base-ell digit of w;
    * l    — modular count k(d, w).

    The defect group is the product of iterated wreath towers over C_(ell^a),
    one depth-i factor per nonzero digit a_i.
    """
    k = block_character_count(ell, a, d, w)
    k0 = _height_zero_product(ell, a, d, w)
    l = multipartition_count(d, w)
    assert k >= k0 and k >= l, (
        f"gl_invariants({ell},{a},{d},{w}): impossible triple k={k}, k0={k0}, l={l}"
    )
    return BlockInvariants(
        family=family,
        params=(("ell", ell), ("a", a), ("d", d), ("w", w)),
        k=CountBound.exact(k),
        k0=CountBound.exact(k0),
        l=CountBound.exact(l),
        defect=defect_tower_product(ell**a, ell, w),
    )


def _ell_power_exponent(n: int, ell: int) -> int | None:
    """f with n = ell^f when n is a pure power of ell (f >= 1), else None."""
    if n < ell or n % ell:
        return None
    f = 0
    while n % ell == 0:
        n //= ell
        f += 1
    return f if n == 1 else None


def _valuation(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def sl_invariants(n: int, ell: int, a: int, g: int) -> BlockInvariants:
    """Principal-block invariants for determinant-restricted subgroups of a
    degree-n linear (or unitary) group: ell^g is the ell-part of the index of
    the subgroup, so g = a is the determinant-one group itself.

    The ambient block has d = 1 and weight w = n.  The height-zero count
    divides by ell^g, with an extra ell^(a+f-g) term exactly when n = ell^f
    and g > 0; the modular count replaces k(1, n) by a telescoping sum over
    u = min(g, v_ell(n)) quotient weights.  The total count is exact when
    ell does not divide n (it matches the ambient block) and when n = ell;
    for larger multiples of ell only an upper bound is available, and the
    result is tagged accordingly.
    """
    if not is_prime(ell) or ell < 3:
        raise ValueError(f"sl_invariants: ell must be an odd prime, got {ell}")
    if n < 1:
        raise ValueError(f"sl_invariants: need n >= 1, got {n}")
    if a < 1:
        raise ValueError(f"sl_invariants: need a >= 1, got {a}")
    if not 0 <= g <= a:
        raise ValueError(f"sl_invariants: need 0 <= g <= a, got g={g}, a={a}")

    ambient = gl_invariants(ell, a, 1, n)
    v = _valuation(n, ell)
    u = min(g, v)
    f = _ell_power_exponent(n, ell)
    notes: list[str] = []

    # Height-zero characters: exact quotient, plus the pure-power correction.
    k0_ambient = ambient.k0.value
    if k0_ambient % ell**g:
        raise ValueError(
            f"sl_invariants({n},{ell},{a},{g}): height-zero count {k0_ambient} "
            f"is not divisible by ell^g={ell**g}"
        )
    k0 = k0_ambient // ell**g
    if f is not None and g > 0:
        k0 += ell ** (a + f - g)

    # Modular characters: telescoping replacement of k(1, n).
    l = multipartition_count(1, n) + sum(
        (ell**i - ell ** (i - 1)) * multipartition_count(1, n // ell**i)
        for i in range(1, u + 1)
    )

    if v == 0:
        k = ambient.k
        defect: DefectModel | None
        if g == 0:
            defect = ambient.defect
        else:
            defect = _quotient_defect(ambient, ell, g)
            notes.append(f"defect bounds via index-ell^{g} subgroup of the ambient Sylow")
    elif n == ell:
        total = block_character_count(ell, a, 1, ell) + (ell * ell - 1) * block_character_count(
            ell, a, 1, 1
        )
        if total % ell**a:
            raise ValueError(
                f"sl_invariants({n},{ell},{a},{g}): character total {total} "
                f"is not divisible by ell^a={ell**a}"
            )
        k = CountBound.exact(total // ell**a)
        if g == 0:
            defect = ambient.defect
        else:
            defect = DetKernelDefect(WreathTower(ell**a, ell, 1), g)
        if g < a:
            notes.append("total count uses the determinant-one formula")
    else:
        m = min(v, a)
        numerator = block_character_count(ell, a, 1, n) + sum(
            weight_decomposition_count(n // ell**j, ell) * ell ** (2 * j + a * (n // ell**j))
            for j in range(1, m + 1)
        )
        k = CountBound.upper(numerator // ell**a)
        notes.append("total count is the quotient upper bound for composite weights")
        defect = _quotient_defect(ambient, ell, g)
        if g > 0:
            notes.append(f"defect bounds via index-ell^{g} subgroup of the ambient Sylow")

    return BlockInvariants(
        family="SL",
        params=(("n", n), ("ell", ell), ("a", a), ("g", g)),
        k=k,
        k0=CountBound.exact(k0),
        l=CountBound.exact(l),
        defect=defect,
        notes=tuple(notes),
    )


def _quotient_defect(ambient: BlockInvariants, ell: int, g: int) -> DefectModel:
    """Sound class-count bounds for the index-ell^g determinant kernel inside
    the ambient Sylow tower product: a normal subgroup N of G satisfies
    k(N) >= k(G) / [G : N]."""
    assert ambient.defect is not None
    if g == 0:
        return ambient.defect
    ambient_order = ambient.defect.order
    ambient_classes = defect_class_count(ambient.defect)
    assert ambient_classes.kind == "exact"
    return ClosedFormDefect(
        label=f"index-{ell}^{g} kernel in ambient Sylow",
        classes=CountBound.lower(_ceil_div(ambient_classes.value, ell**g)),
        derived_classes=CountBound.lower(1),
        order=ambient_order // ell**g,
    )


def pgl_k0(ell: int, a: int, m: int, gl_k0: int) -> int:
    """Height-zero count for the central quotient: divide the ambient count
    by ell^(a-m), where ell^m is the ell-part shared by weight and center.
    A non-exact division means the parameters were inconsistent, so it is an
    error rather than a rounding."""
    if not 0 <= m <= a:
        raise ValueError(f"pgl_k0: need 0 <= m <= a, got m={m}, a={a}")
    divisor = ell ** (a - m)
    if gl_k0 % divisor:
        raise ValueError(
            f"pgl_k0: {gl_k0} is not divisible by ell^(a-m)={divisor}; "
            f"inconsistent parameters"
        )
    return gl_k0 // divisor


CLASSICAL_FAMILIES = ("Sp", "SO-odd", "GO-even", "SO-even")


def classical_invariants(family: str, ell: int, a: int, d: int, w: int) -> BlockInvariants:
    """Unipotent block invariants for symplectic and orthogonal groups.

    With d' = d / gcd(d, 2), every invariant coincides with the linear-group
    block at effective parameter 2d': same total count, the height-zero and
    modular counts read off the same digit formulas, and the defect group is
    the same tower product.  For the special orthogonal group inside an even
    full orthogonal group the counts degrade: the total becomes an upper
    bound and the height-zero/modular counts are only known to be at least
    half the covering group's values.
    """
    if family not in CLASSICAL_FAMILIES:
        raise ValueError(
            f"classical_invariants: family must be one of {CLASSICAL_FAMILIES}, got {family!r}"
        )
    if not is_prime(ell) or ell < 3:
        raise ValueError(f"classical_invariants: ell must be an odd prime, got {ell}")
    if d < 1 or (ell - 1) % d:
        raise ValueError(f"classical_invariants: need d | ell-1, got d={d}, ell={ell}")
    d_eff = 2 * (d // gcd(d, 2))
    assert (ell - 1) % d_eff == 0, (
        f"classical_invariants: effective parameter {d_eff} does not divide {ell - 1}"
    )
    base = gl_invariants(ell, a, d_eff, w, family=family)
    params = (("ell", ell), ("a", a), ("d", d), ("w", w))
    if family != "SO-even":
        return BlockInvariants(
            family=family,
            params=params,
            k=base.k,
            k0=base.k0,
            l=base.l,
            defect=base.defect,
        )
    return BlockInvariants(
        family=family,
        params=params,
        k=CountBound.upper(base.k.value),
        k0=CountBound.lower(_ceil_div(base.k0.value, 2)),
        l=CountBound.lower(_ceil_div(base.l.value, 2)),
        defect=base.defect,
        notes=("index-2 subgroup of the even orthogonal group: halved bounds",),
    )
