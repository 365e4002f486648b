"""Wreath towers, defect-group models, and certified class-count bounds.

Defect groups in this package are always one of four shapes:

* a direct product of iterated wreath towers C_m wr C_ell wr ... wr C_ell
  (possibly a single factor, possibly trivial),
* an abelian group of known order,
* the determinant kernel inside a one-level tower (special linear cases),
* a closed-form description where a family hands us the class counts
  directly.

Class counts carry a :class:`CountBound` tag saying whether the number is
exact, a lower bound, or an upper bound; the audit engine refuses to treat a
bound as better than it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from . import oracle
from .counts import is_prime

__all__ = [
    "EXACT",
    "LOWER",
    "UPPER",
    "CountBound",
    "WreathTower",
    "wreath_class_count",
    "TowerProduct",
    "AbelianDefect",
    "DetKernelDefect",
    "ClosedFormDefect",
    "DefectModel",
    "defect_tower_product",
    "defect_order",
    "defect_class_count",
    "defect_derived_class_count",
    "describe_defect",
    "sl_derived_index",
    "p_group_class_lower",
]

EXACT = "exact"
LOWER = "lower"
UPPER = "upper"

_KINDS = (EXACT, LOWER, UPPER)


@dataclass(frozen=True)
class CountBound:
    """A nonnegative count together with how much of it we actually know."""

    value: int
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"CountBound kind must be one of {_KINDS}, got {self.kind!r}")
        if self.value < 0:
            raise ValueError(f"CountBound value must be >= 0, got {self.value}")

    @staticmethod
    def exact(value: int) -> "CountBound":
        return CountBound(value, EXACT)

    @staticmethod
    def lower(value: int) -> "CountBound":
        return CountBound(value, LOWER)

    @staticmethod
    def upper(value: int) -> "CountBound":
        return CountBound(value, UPPER)

    def __str__(self) -> str:
        prefix = {EXACT: "", LOWER: ">=", UPPER: "<="}[self.kind]
        return f"{prefix}{self.value}"


def combine_product(bounds: list[CountBound]) -> CountBound:
    """Product of counts; exactness survives only if every factor is exact.

    Mixing lower and upper bounds in one product has no sound single-sided
    reading, so that's an error rather than a guess.
    """
    kinds = {b.kind for b in bounds}
    value = prod(b.value for b in bounds) if bounds else 1
    if kinds <= {EXACT}:
        return CountBound.exact(value)
    if kinds <= {EXACT, LOWER}:
        return CountBound.lower(value)
    if kinds <= {EXACT, UPPER}:
        return CountBound.upper(value)
    raise ValueError(f"cannot combine lower and upper bounds in one product: {bounds}")


def wreath_class_count(k: int, ell: int) -> int:
    """Class count of G wr C_ell given the class count k of G, ell prime.

    Counting by the shift of an element: shift-zero classes are rotation
    orbits of ell-tuples of G-classes, (k^ell + (ell-1)k)/ell of them; each
    of the ell-1 nonzero shifts contributes k classes.  The total telescopes
    to (k^ell - k)/ell + ell*k, an integer by Fermat.
    """
    if k < 1:
        raise ValueError(f"wreath_class_count: need k >= 1, got {k}")
    if not is_prime(ell):
        raise ValueError(f"wreath_class_count: ell must be prime, got {ell}")
    return (k**ell - k) // ell + ell * k


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class WreathTower:
    """C_base_order wr C_ell wr ... wr C_ell with `levels` wreathings."""

    base_order: int
    ell: int
    levels: int

    def __post_init__(self) -> None:
        if self.base_order < 1:
            raise ValueError(f"WreathTower: need base_order >= 1, got {self.base_order}")
        if not is_prime(self.ell):
            raise ValueError(f"WreathTower: ell must be prime, got {self.ell}")
        if self.levels < 0:
            raise ValueError(f"WreathTower: need levels >= 0, got {self.levels}")

    @property
    def order(self) -> int:
        return oracle.tower_order(self.base_order, self.ell, self.levels)

    @property
    def abelianization_order(self) -> int:
        """|G : G'| for the tower: the base C_m survives, plus one C_ell per level."""
        return self.base_order * self.ell**self.levels

    @property
    def derived_order(self) -> int:
        return self.order // self.abelianization_order

    def class_count(self) -> int:
        """Exact class count, lifting through the levels."""
        k = self.base_order
        for _ in range(self.levels):
            k = wreath_class_count(k, self.ell)
        return k

    def class_count_lower(self) -> int:
        """Cheap closed-form lower bound m^(ell^i) / ell^((ell^i-1)/(ell-1)).

        (The exact count is available from class_count(); this is the bound
        the asymptotic arguments lean on, kept for the record and for tests.)
        """
        m, ell, i = self.base_order, self.ell, self.levels
        return _ceil_div(m ** (ell**i), ell ** ((ell**i - 1) // (ell - 1)))

    def derived_class_count_lower(self) -> int:
        """Closed-form lower bound for the class count of the derived subgroup."""
        if self.levels == 0:
            return 1
        m, ell, i = self.base_order, self.ell, self.levels
        return _ceil_div(
            m ** (ell**i - 1), ell ** ((ell**i - 1) // (ell - 1) + i - 1)
        )

    def derived_class_count(self, cap: int | None = None) -> CountBound:
        """Class count of the derived subgroup, exact whenever attainable.

        levels 0 and 1 are exact outright (trivial, respectively abelian of
        order m^(ell-1)).  Deeper derived subgroups are enumerated by the
        brute-force oracle when they fit under the cap; otherwise we return
        the best of the closed-form bound and the class-quotient bound
        k(N) >= k(G) / [G : N] (each class of G meets at most [G : N]
        classes of a normal N).
        """
        if self.levels == 0:
            return CountBound.exact(1)
        if self.levels == 1:
            return CountBound.exact(self.base_order ** (self.ell - 1))
        cap_value = oracle.oracle_cap() if cap is None else cap
        if self.derived_order <= cap_value:
            report = oracle.oracle_report(
                f"derived:{self.base_order},{self.ell},{self.levels}",
                cap=cap_value,
                with_derived=False,
            )
            return CountBound.exact(report["class_count"])
        quotient = _ceil_div(self.class_count(), self.abelianization_order)
        return CountBound.lower(max(self.derived_class_count_lower(), quotient))

    def describe(self) -> str:
        core = f"C{self.base_order}"
        return core + f" wr C{self.ell}" * self.levels


@dataclass(frozen=True)
class TowerProduct:
    """Direct product of wreath towers with multiplicities."""

    factors: tuple[tuple[WreathTower, int], ...]

    @property
    def order(self) -> int:
        return prod(t.order**mult for t, mult in self.factors)


@dataclass(frozen=True)
class AbelianDefect:
    order: int


@dataclass(frozen=True)
class DetKernelDefect:
    """Sum-zero-mod-ell^e subgroup of a one-level tower over C_(ell^a)."""

    tower: WreathTower
    kernel_exponent: int

    def __post_init__(self) -> None:
        t = self.tower
        if t.levels != 1:
            raise ValueError("DetKernelDefect: only one-level towers are supported")
        e = self.kernel_exponent
        if e < 1 or t.base_order % t.ell**e != 0:
            raise ValueError(
                f"DetKernelDefect: need 1 <= e with ell^e | base order, got e={e}"
            )
        if t.ell == 2:
            raise ValueError("DetKernelDefect: ell must be odd")

    @property
    def order(self) -> int:
        t = self.tower
        return t.order // t.ell**self.kernel_exponent

    @property
    def derived_order(self) -> int:
        # The commutator subgroup is the image of (1 - rotation) on the base
        # part: order m^(ell-1) / ell, independent of the kernel exponent.
        t = self.tower
        return t.base_order ** (t.ell - 1) // t.ell

    def closed_form_class_count(self) -> int | None:
        """Exact class count when the base is C_(ell^a) and e = a.

        Write G for the sum-zero-mod-m subgroup of C_m wr C_ell, m = ell^a.
        Shift-zero classes are the rotation orbits on the sum-zero base,
        ell^(a(ell-1)-1) + ell - 1 of them (the diagonal fixed points number
        ell).  For each of the ell-1 nonzero shifts, the available
        translations (1 - shift) applied to sum-zero vectors form a subgroup
        of index ell in the sum-zero base, giving ell classes per shift with
        no further fusion.  Total: ell^(a(ell-1)-1) + ell^2 - 1.  Returns
        None when the base order is not a pure power of ell or e < a.
        """
        t = self.tower
        a, m = 0, t.base_order
        while m % t.ell == 0:
            m //= t.ell
            a += 1
        if m != 1 or self.kernel_exponent != a:
            return None
        return t.ell ** (a * (t.ell - 1) - 1) + t.ell * t.ell - 1


@dataclass(frozen=True)
class ClosedFormDefect:
    """A defect group known only through its (bounded) class data."""

    label: str
    classes: CountBound
    derived_classes: CountBound
    order: int | None = None


DefectModel = TowerProduct | AbelianDefect | DetKernelDefect | ClosedFormDefect


def defect_tower_product(m: int, ell: int, w: int) -> TowerProduct:
    """The standard weight-w defect shape: one tower of depth i per base-ell
    digit a_i of w, with multiplicity a_i."""
    from .counts import base_digits

    digits = base_digits(w, ell)
    factors = tuple(
        (WreathTower(m, ell, i), a_i) for i, a_i in enumerate(digits) if a_i > 0
    )
    return TowerProduct(factors)


def defect_order(model: DefectModel) -> int | None:
    if isinstance(model, (TowerProduct, AbelianDefect, DetKernelDefect)):
        return model.order
    return model.order


def defect_is_abelian(model: DefectModel) -> bool | None:
    """Whether the modeled group is abelian, or None if the model can't say.

    Abelian defect groups are special: every irreducible character of the
    block has height zero and the block's character count is at most the
    group order, so audits can settle comparisons that the numeric bounds
    alone leave open.
    """
    if isinstance(model, AbelianDefect):
        return True
    if isinstance(model, TowerProduct):
        return all(tower.derived_order == 1 for tower, _ in model.factors)
    if isinstance(model, DetKernelDefect):
        return model.derived_order == 1
    return None


def defect_class_count(model: DefectModel, cap: int | None = None) -> CountBound:
    """Class count of the defect group itself."""
    if isinstance(model, TowerProduct):
        return CountBound.exact(
            prod(t.class_count() ** mult for t, mult in model.factors)
        )
    if isinstance(model, AbelianDefect):
        return CountBound.exact(model.order)
    if isinstance(model, DetKernelDefect):
        closed = model.closed_form_class_count()
        if closed is not None:
            return CountBound.exact(closed)
        t = model.tower
        cap_value = oracle.oracle_cap() if cap is None else cap
        if model.order <= cap_value:
            report = oracle.oracle_report(
                f"detkernel:{t.base_order},{t.ell},{model.kernel_exponent}",
                cap=cap_value,
                with_derived=False,
            )
            return CountBound.exact(report["class_count"])
        quotient = _ceil_div(t.class_count(), t.ell**model.kernel_exponent)
        return CountBound.lower(quotient)
    return model.classes


def defect_derived_class_count(model: DefectModel, cap: int | None = None) -> CountBound:
    """Class count of the derived subgroup of the defect group."""
    if isinstance(model, TowerProduct):
        return combine_product(
            [t.derived_class_count(cap=cap) for t, mult in model.factors for _ in range(mult)]
        )
    if isinstance(model, AbelianDefect):
        return CountBound.exact(1)
    if isinstance(model, DetKernelDefect):
        # Abelian: it sits inside the abelian base of the ambient tower.
        return CountBound.exact(model.derived_order)
    return model.derived_classes


def describe_defect(model: DefectModel) -> str:
    if isinstance(model, TowerProduct):
        if not model.factors:
            return "trivial"
        parts = []
        for tower, mult in model.factors:
            text = tower.describe()
            parts.append(f"({text})^{mult}" if mult > 1 else text)
        return " x ".join(parts)
    if isinstance(model, AbelianDefect):
        return f"abelian of order {model.order}"
    if isinstance(model, DetKernelDefect):
        t = model.tower
        return (
            f"det-kernel (e={model.kernel_exponent}) in {t.describe()}"
        )
    return model.label


def sl_derived_index(n: int, ell: int) -> int:
    """Index of the derived subgroup of a determinant-one Sylow inside the
    derived subgroup of the ambient full Sylow ell-subgroup of GL_n: ell when
    n is a positive power of ell, and 1 otherwise (including n = 1)."""
    if not is_prime(ell):
        raise ValueError(f"sl_derived_index: ell must be prime, got {ell}")
    if n < 1:
        raise ValueError(f"sl_derived_index: need n >= 1, got {n}")
    if n == 1:
        return 1
    while n % ell == 0:
        n //= ell
    return ell if n == 1 else 1


def p_group_class_lower(p: int, n: int) -> int:
    """Lower bound for the class count of any group of order p^n.

    For n >= 2 at least p^2 + (n-2)(p-1) classes; below that the group is
    abelian and the count is the order itself.
    """
    if not is_prime(p):
        raise ValueError(f"p_group_class_lower: p must be prime, got {p}")
    if n < 0:
        raise ValueError(f"p_group_class_lower: need n >= 0, got {n}")
    if n < 2:
        return p**n
    return p * p + (n - 2) * (p - 1)
