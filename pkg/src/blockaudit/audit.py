"""Block-versus-defect inequality auditor.

Drives the two counting inequalities

    (C1)  k(B) <= k0(B) * k(D')          (C2)  k(B) <= l(B) * k(D)

over every implemented family.  Each operand arrives as a CountBound (exact,
lower, or upper), and the verdict logic certifies only what those kinds
support:

holds-exact
    the inequality holds and every operand is exact;
holds-conservative
    it holds with an upper bound on the left and lower bounds on the right,
    so the true values satisfy it a fortiori;
violated
    it fails with every operand exact;
inconclusive
    anything else -- typically a bound too weak to decide either way.

All comparisons are integer products; nothing here divides, rounds, or
touches floating point.  Reports serialize to JSON and CSV with stable key
and row ordering, so identical configurations produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .reductive import (
    CLASSICAL_FAMILIES,
    BlockInvariants,
    classical_invariants,
    gl_invariants,
    sl_invariants,
)
from .symmetric import alt_invariants, spin_invariants, sym_invariants
from .wreath import (
    CountBound,
    defect_class_count,
    defect_derived_class_count,
    defect_is_abelian,
    defect_order,
)

__all__ = [
    "HOLDS_EXACT",
    "HOLDS_CONSERVATIVE",
    "VIOLATED",
    "INCONCLUSIVE",
    "VERDICT_KINDS",
    "AuditCase",
    "AuditVerdict",
    "make_case",
    "product_verdict",
    "check_c1",
    "check_c2",
    "brauer_ok",
    "audit_case",
    "DEFAULT_CONFIG_TEXT",
    "SweepConfig",
    "gl_cases",
    "sl_cases",
    "classical_cases",
    "symalt_cases",
    "iter_cases",
    "collect_verdicts",
    "sweep",
    "verdict_row",
    "report_json",
    "report_csv",
    "report_ok",
]

HOLDS_EXACT = "holds-exact"
HOLDS_CONSERVATIVE = "holds-conservative"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"
VERDICT_KINDS = (HOLDS_EXACT, HOLDS_CONSERVATIVE, VIOLATED, INCONCLUSIVE)


@dataclass(frozen=True)
class AuditCase:
    """One block with its defect-group class data, ready to be checked."""

    label: str
    family: str
    params: tuple[tuple[str, int], ...]
    invariants: BlockInvariants
    k_defect: CountBound
    k_derived: CountBound
    order: int | None = None

    def __post_init__(self) -> None:
        inv = self.invariants
        for name, bound in (
            ("k", inv.k),
            ("k0", inv.k0),
            ("l", inv.l),
            ("k(D)", self.k_defect),
            ("k(D')", self.k_derived),
        ):
            if bound.value < 1:
                raise ValueError(f"{self.label}: {name} must be >= 1, got {bound}")


def make_case(
    invariants: BlockInvariants,
    k_defect: CountBound | None = None,
    k_derived: CountBound | None = None,
    cap: int | None = None,
    label: str | None = None,
) -> AuditCase:
    """Wrap a BlockInvariants bundle into an AuditCase, deriving the defect
    class counts from the attached model unless explicit bounds are given."""
    model = invariants.defect
    if k_defect is None:
        if model is None:
            raise ValueError(f"{invariants.family}: no defect model and no k(D) given")
        k_defect = defect_class_count(model, cap)
    if k_derived is None:
        if model is None:
            raise ValueError(f"{invariants.family}: no defect model and no k(D') given")
        k_derived = defect_derived_class_count(model, cap)
    order = defect_order(model) if model is not None else None
    if label is None:
        label = "/".join(
            [invariants.family] + [f"{name}={value}" for name, value in invariants.params]
        )
    return AuditCase(
        label=label,
        family=invariants.family,
        params=invariants.params,
        invariants=invariants,
        k_defect=k_defect,
        k_derived=k_derived,
        order=order,
    )


def product_verdict(
    left: CountBound, right_a: CountBound, right_b: CountBound
) -> tuple[str, dict]:
    """Decide left <= right_a * right_b as far as the bound kinds allow.

    The comparison itself is plain integer arithmetic; the verdict kind
    records whether that comparison proves anything about the true values.
    A 'lower' bound on the left or an 'upper' bound on the right can never
    certify the inequality, and a failure certifies a violation only when
    every operand is exact.
    """
    lhs = left.value
    rhs = right_a.value * right_b.value
    all_exact = (
        left.kind == "exact" and right_a.kind == "exact" and right_b.kind == "exact"
    )
    sound = left.kind != "lower" and right_a.kind != "upper" and right_b.kind != "upper"
    if lhs <= rhs:
        kind = HOLDS_EXACT if all_exact else (HOLDS_CONSERVATIVE if sound else INCONCLUSIVE)
    else:
        kind = VIOLATED if all_exact else INCONCLUSIVE
    witness = {
        "left": lhs,
        "right": rhs,
        "left-kind": left.kind,
        "right-kinds": [right_a.kind, right_b.kind],
    }
    return kind, witness


def _abelian_defect(case: AuditCase) -> bool:
    model = case.invariants.defect
    return model is not None and defect_is_abelian(model) is True


def check_c1(case: AuditCase) -> tuple[str, dict]:
    """k(B) <= k0(B) * k(D').

    When the defect group is known to be abelian the inequality is a theorem
    regardless of how loose the numeric bounds are: every character then has
    height zero (k = k0) and the derived subgroup is trivial (k(D') = 1).  An
    inconclusive comparison therefore upgrades to holds-conservative, with the
    route recorded in the witness.  A violated verdict is never rescued — it
    can only arise from all-exact operands, and an all-exact contradiction
    with the theorem means the model itself is wrong and must surface.
    """
    kind, witness = product_verdict(case.invariants.k, case.invariants.k0, case.k_derived)
    if kind == INCONCLUSIVE and _abelian_defect(case):
        kind = HOLDS_CONSERVATIVE
        witness["route"] = "abelian-defect"
    return kind, witness


def check_c2(case: AuditCase) -> tuple[str, dict]:
    """k(B) <= l(B) * k(D).

    For an abelian defect group, k(B) never exceeds the group order, which
    equals k(D); with l(B) >= 1 the inequality follows, so an inconclusive
    comparison upgrades exactly as in check_c1.
    """
    kind, witness = product_verdict(case.invariants.k, case.invariants.l, case.k_defect)
    if kind == INCONCLUSIVE and _abelian_defect(case):
        kind = HOLDS_CONSERVATIVE
        witness["route"] = "abelian-defect"
    return kind, witness


def brauer_ok(case: AuditCase) -> bool | None:
    """k(B) can never exceed the defect group order; flag any model where
    even the known part of k does.  None when the order is unknown."""
    if case.order is None:
        return None
    k = case.invariants.k
    if k.kind in ("exact", "lower") and k.value > case.order:
        return False
    return True


@dataclass(frozen=True)
class AuditVerdict:
    case: AuditCase
    c1: str
    c2: str
    witness: dict


def audit_case(case: AuditCase) -> AuditVerdict:
    c1, w1 = check_c1(case)
    c2, w2 = check_c2(case)
    witness = {"c1": w1, "c2": w2, "brauer-ok": brauer_ok(case)}
    return AuditVerdict(case=case, c1=c1, c2=c2, witness=witness)


# ---------------------------------------------------------------------------
# Case generators, one per family group.  Enumeration order is part of the
# report contract: never reorder these loops casually.


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def gl_cases(
    ells: tuple[int, ...] = (5, 7, 11, 13),
    a_max: int = 3,
    w_max: int = 25,
    families: tuple[str, ...] = ("GL", "GU"),
) -> Iterator[AuditCase]:
    """Unipotent blocks of the linear and unitary series, all d | ell - 1."""
    for family in families:
        for ell in ells:
            for a in range(1, a_max + 1):
                for d in _divisors(ell - 1):
                    for w in range(0, w_max + 1):
                        yield make_case(gl_invariants(ell, a, d, w, family=family))


def sl_cases(
    ells: tuple[int, ...] = (5, 7, 11, 13), a_max: int = 3
) -> Iterator[AuditCase]:
    """Determinant-restricted subgroups at the delicate degree n = ell,
    over every index level g (g = a is the determinant-one group)."""
    for ell in ells:
        for a in range(1, a_max + 1):
            for g in range(0, a + 1):
                yield make_case(sl_invariants(ell, ell, a, g))


def classical_cases(
    ells: tuple[int, ...] = (5, 7, 11, 13), a_max: int = 3, w_max: int = 25
) -> Iterator[AuditCase]:
    for family in CLASSICAL_FAMILIES:
        for ell in ells:
            for a in range(1, a_max + 1):
                for d in _divisors(ell - 1):
                    for w in range(0, w_max + 1):
                        yield make_case(classical_invariants(family, ell, a, d, w))


def symalt_cases(
    ps: tuple[int, ...] = (2, 3), w_max: int = 17
) -> Iterator[AuditCase]:
    """Weight-w blocks of symmetric groups, their index-two subgroups, and
    the double covers."""
    for p in ps:
        for w in range(0, w_max + 1):
            yield make_case(sym_invariants(p, w))
        for w in range(0, w_max + 1):
            yield make_case(alt_invariants(p, w))
        for w in range(1, w_max + 1):
            yield make_case(spin_invariants(p, w))


# ---------------------------------------------------------------------------
# Sweep configuration.

DEFAULT_CONFIG_TEXT = """\
# default audit grid
sections = gl sl classical symalt exceptional
gl.ell = 5 7 11 13
gl.a-max = 3
gl.w-max = 25
sl.ell = 5 7 11 13
sl.a-max = 3
classical.ell = 5 7 11 13
classical.a-max = 3
classical.w-max = 25
symalt.p = 2 3
symalt.w-max = 17
exceptional.a-max = 8
e8d8.a-max = 4
workers = 1
"""

_KNOWN_SECTIONS = ("gl", "sl", "classical", "symalt", "exceptional")


@dataclass(frozen=True)
class SweepConfig:
    sections: tuple[str, ...] = _KNOWN_SECTIONS
    gl_ells: tuple[int, ...] = (5, 7, 11, 13)
    gl_a_max: int = 3
    gl_w_max: int = 25
    sl_ells: tuple[int, ...] = (5, 7, 11, 13)
    sl_a_max: int = 3
    classical_ells: tuple[int, ...] = (5, 7, 11, 13)
    classical_a_max: int = 3
    classical_w_max: int = 25
    symalt_ps: tuple[int, ...] = (2, 3)
    symalt_w_max: int = 17
    exceptional_a_max: int = 8
    e8d8_a_max: int = 4
    workers: int = 1

    @staticmethod
    def default() -> "SweepConfig":
        return SweepConfig.from_text(DEFAULT_CONFIG_TEXT)

    @staticmethod
    def from_text(text: str) -> "SweepConfig":
        """Parse the plain `key = value ...` grid format (# starts a comment)."""
        table: dict[str, list[str]] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, rest = line.partition("=")
            if not eq:
                raise ValueError(
                    f"config line {lineno}: expected 'key = values', got {raw!r}"
                )
            table[key.strip()] = rest.split()

        def take_ints(key: str, fallback: tuple[int, ...]) -> tuple[int, ...]:
            if key not in table:
                return fallback
            return tuple(int(tok) for tok in table.pop(key))

        def take_int(key: str, fallback: int) -> int:
            if key not in table:
                return fallback
            tokens = table.pop(key)
            if len(tokens) != 1:
                raise ValueError(f"config key {key!r} expects one value, got {tokens}")
            return int(tokens[0])

        sections = tuple(table.pop("sections")) if "sections" in table else _KNOWN_SECTIONS
        bad = [s for s in sections if s not in _KNOWN_SECTIONS]
        if bad:
            raise ValueError(f"unknown sweep sections: {bad}")
        config = SweepConfig(
            sections=sections,
            gl_ells=take_ints("gl.ell", (5, 7, 11, 13)),
            gl_a_max=take_int("gl.a-max", 3),
            gl_w_max=take_int("gl.w-max", 25),
            sl_ells=take_ints("sl.ell", (5, 7, 11, 13)),
            sl_a_max=take_int("sl.a-max", 3),
            classical_ells=take_ints("classical.ell", (5, 7, 11, 13)),
            classical_a_max=take_int("classical.a-max", 3),
            classical_w_max=take_int("classical.w-max", 25),
            symalt_ps=take_ints("symalt.p", (2, 3)),
            symalt_w_max=take_int("symalt.w-max", 17),
            exceptional_a_max=take_int("exceptional.a-max", 8),
            e8d8_a_max=take_int("e8d8.a-max", 4),
            workers=take_int("workers", 1),
        )
        if table:
            raise ValueError(f"unknown config keys: {sorted(table)}")
        return config

    def as_dict(self) -> dict:
        return {
            "sections": list(self.sections),
            "gl": {"ell": list(self.gl_ells), "a-max": self.gl_a_max, "w-max": self.gl_w_max},
            "sl": {"ell": list(self.sl_ells), "a-max": self.sl_a_max},
            "classical": {
                "ell": list(self.classical_ells),
                "a-max": self.classical_a_max,
                "w-max": self.classical_w_max,
            },
            "symalt": {"p": list(self.symalt_ps), "w-max": self.symalt_w_max},
            "exceptional": {"a-max": self.exceptional_a_max},
            "e8d8": {"a-max": self.e8d8_a_max},
            "workers": self.workers,
        }


def iter_cases(config: SweepConfig) -> Iterator[AuditCase]:
    if "gl" in config.sections:
        yield from gl_cases(config.gl_ells, config.gl_a_max, config.gl_w_max)
    if "sl" in config.sections:
        yield from sl_cases(config.sl_ells, config.sl_a_max)
    if "classical" in config.sections:
        yield from classical_cases(
            config.classical_ells, config.classical_a_max, config.classical_w_max
        )
    if "symalt" in config.sections:
        yield from symalt_cases(config.symalt_ps, config.symalt_w_max)
    if "exceptional" in config.sections:
        # Imported here, not at module top: the exceptional-family module
        # itself imports the verdict primitives from this one.
        from . import exceptional

        yield from exceptional.small_rank_cases(config.exceptional_a_max)


def collect_verdicts(
    config: SweepConfig | None = None, workers: int | None = None
) -> list[AuditVerdict]:
    """Audit every case in the grid.  Worker count only affects wall time:
    cases are independent and assembled back in enumeration order."""
    config = config or SweepConfig.default()
    count = config.workers if workers is None else workers
    cases = list(iter_cases(config))
    if count > 1:
        with ThreadPoolExecutor(max_workers=count) as pool:
            verdicts = list(pool.map(audit_case, cases))
    else:
        verdicts = [audit_case(case) for case in cases]
    if "exceptional" in config.sections:
        from . import exceptional

        verdicts.extend(exceptional.e_series_verdicts(config.exceptional_a_max))
        verdicts.extend(exceptional.e8_isolated_verdicts(config.e8d8_a_max))
    return verdicts


def verdict_row(verdict: AuditVerdict) -> dict:
    case = verdict.case
    inv = case.invariants
    return {
        "case": case.label,
        "family": case.family,
        "params": dict(case.params),
        "k": inv.k.value,
        "k0": inv.k0.value,
        "l": inv.l.value,
        "kD": case.k_defect.value,
        "kDprime": case.k_derived.value,
        "bound-kinds": {
            "k": inv.k.kind,
            "k0": inv.k0.kind,
            "l": inv.l.kind,
            "kD": case.k_defect.kind,
            "kDprime": case.k_derived.kind,
        },
        "c1": verdict.c1,
        "c2": verdict.c2,
        "witness": verdict.witness,
    }


def _summarize(verdicts: list[AuditVerdict]) -> dict:
    c1 = {kind: 0 for kind in VERDICT_KINDS}
    c2 = {kind: 0 for kind in VERDICT_KINDS}
    flags = 0
    for verdict in verdicts:
        c1[verdict.c1] += 1
        c2[verdict.c2] += 1
        if verdict.witness.get("brauer-ok") is False:
            flags += 1
    return {
        "cases": len(verdicts),
        "c1": c1,
        "c2": c2,
        "violations": c1[VIOLATED] + c2[VIOLATED],
        "brauer-flags": flags,
    }


def sweep(config: SweepConfig | None = None, workers: int | None = None) -> dict:
    """Run the whole grid and assemble the report dict (JSON-ready)."""
    config = config or SweepConfig.default()
    verdicts = collect_verdicts(config, workers)
    return {
        "config": config.as_dict(),
        "summary": _summarize(verdicts),
        "rows": [verdict_row(verdict) for verdict in verdicts],
    }


def report_ok(report: dict) -> bool:
    summary = report["summary"]
    return summary["violations"] == 0 and summary["brauer-flags"] == 0


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


_CSV_HEADER = [
    "case",
    "family",
    "params",
    "k",
    "k0",
    "l",
    "kD",
    "kDprime",
    "kind-k",
    "kind-k0",
    "kind-l",
    "kind-kD",
    "kind-kDprime",
    "c1",
    "c2",
    "c1-left",
    "c1-right",
    "c2-left",
    "c2-right",
    "brauer-ok",
]


def report_csv(report: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for row in report["rows"]:
        kinds = row["bound-kinds"]
        witness = row["witness"]
        brauer = witness.get("brauer-ok")
        writer.writerow(
            [
                row["case"],
                row["family"],
                " ".join(f"{k}={v}" for k, v in row["params"].items()),
                row["k"],
                row["k0"],
                row["l"],
                row["kD"],
                row["kDprime"],
                kinds["k"],
                kinds["k0"],
                kinds["l"],
                kinds["kD"],
                kinds["kDprime"],
                row["c1"],
                row["c2"],
                witness["c1"]["left"],
                witness["c1"]["right"],
                witness["c2"]["left"],
                witness["c2"]["right"],
                "" if brauer is None else ("yes" if brauer else "NO"),
            ]
        )
    return out.getvalue()
