"""The audit engine: verdict lattice, abelian fast path, sweeps, config."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockaudit.audit import (
    DEFAULT_CONFIG_TEXT,
    HOLDS_CONSERVATIVE,
    HOLDS_EXACT,
    INCONCLUSIVE,
    VIOLATED,
    AuditCase,
    SweepConfig,
    audit_case,
    brauer_ok,
    check_c1,
    check_c2,
    collect_verdicts,
    gl_cases,
    iter_cases,
    make_case,
    product_verdict,
    report_csv,
    report_json,
    report_ok,
    sl_cases,
    sweep,
    symalt_cases,
    verdict_row,
)
from blockaudit.reductive import BlockInvariants, gl_invariants
from blockaudit.symmetric import spin_invariants
from blockaudit.wreath import AbelianDefect, CountBound

KINDS = st.sampled_from(["exact", "lower", "upper"])


def _bound(value: int, kind: str) -> CountBound:
    return CountBound(value, kind)


def test_product_verdict_all_exact():
    kind, witness = product_verdict(_bound(10, "exact"), _bound(5, "exact"), _bound(2, "exact"))
    assert kind == HOLDS_EXACT
    assert witness["left"] == 10 and witness["right"] == 10
    kind, _ = product_verdict(_bound(11, "exact"), _bound(5, "exact"), _bound(2, "exact"))
    assert kind == VIOLATED


def test_product_verdict_sound_directions():
    # Upper bound on the left and lower bounds on the right still certify.
    kind, _ = product_verdict(_bound(10, "upper"), _bound(5, "lower"), _bound(2, "exact"))
    assert kind == HOLDS_CONSERVATIVE
    # A lower bound on the left proves nothing even if the numbers pass.
    kind, _ = product_verdict(_bound(10, "lower"), _bound(5, "exact"), _bound(2, "exact"))
    assert kind == INCONCLUSIVE
    # An upper bound on the right likewise.
    kind, _ = product_verdict(_bound(10, "exact"), _bound(5, "upper"), _bound(2, "exact"))
    assert kind == INCONCLUSIVE


def test_product_verdict_failures_never_conservative():
    # A numeric failure with any non-exact operand stays inconclusive: it
    # neither certifies a violation nor gets rescued.
    kind, _ = product_verdict(_bound(11, "upper"), _bound(5, "exact"), _bound(2, "exact"))
    assert kind == INCONCLUSIVE
    kind, _ = product_verdict(_bound(11, "exact"), _bound(5, "lower"), _bound(2, "exact"))
    assert kind == INCONCLUSIVE


@given(
    st.integers(1, 40), KINDS,
    st.integers(1, 8), KINDS,
    st.integers(1, 8), KINDS,
)
@settings(max_examples=200)
def test_product_verdict_lattice_laws(lv, lk, av, ak, bv, bk):
    kind, witness = product_verdict(_bound(lv, lk), _bound(av, ak), _bound(bv, bk))
    numeric = lv <= av * bv
    if kind == HOLDS_EXACT:
        assert numeric and lk == ak == bk == "exact"
    elif kind == VIOLATED:
        assert not numeric and lk == ak == bk == "exact"
    elif kind == HOLDS_CONSERVATIVE:
        assert numeric
        assert lk != "lower" and ak != "upper" and bk != "upper"
    assert witness["left"] == lv and witness["right"] == av * bv


def test_degrading_an_operand_never_upgrades_the_verdict():
    # Downgrading exact to one-sided can only move a verdict toward
    # inconclusive, never toward a stronger claim.
    strength = {HOLDS_EXACT: 2, HOLDS_CONSERVATIVE: 1, INCONCLUSIVE: 0, VIOLATED: 0}
    base = (_bound(10, "exact"), _bound(5, "exact"), _bound(3, "exact"))
    base_kind, _ = product_verdict(*base)
    for slot, weaker in [(0, "lower"), (0, "upper"), (1, "lower"), (1, "upper"),
                         (2, "lower"), (2, "upper")]:
        bounds = list(base)
        bounds[slot] = _bound(bounds[slot].value, weaker)
        kind, _ = product_verdict(*bounds)
        assert strength[kind] <= strength[base_kind]


def _case_with(k, k0, l, k_defect, k_derived, defect=None):
    invariants = BlockInvariants(
        family="T", params=(("x", 1),), k=k, k0=k0, l=l, defect=defect
    )
    return make_case(invariants, k_defect=k_defect, k_derived=k_derived)


def test_abelian_defect_rescues_inconclusive():
    # Upper-bounded right factor would stall the check; an abelian defect
    # model settles it regardless.
    case = _case_with(
        k=_bound(4, "exact"),
        k0=_bound(2, "exact"),
        l=_bound(1, "exact"),
        k_defect=_bound(4, "exact"),
        k_derived=_bound(1, "upper"),
        defect=AbelianDefect(4),
    )
    kind, witness = check_c1(case)
    assert kind == HOLDS_CONSERVATIVE
    assert witness["route"] == "abelian-defect"


def test_abelian_defect_never_rescues_violations():
    # All-exact numeric failures must surface even with an abelian model:
    # such a case would contradict the model, and hiding it would be worse.
    case = _case_with(
        k=_bound(9, "exact"),
        k0=_bound(2, "exact"),
        l=_bound(1, "exact"),
        k_defect=_bound(4, "exact"),
        k_derived=_bound(1, "exact"),
        defect=AbelianDefect(4),
    )
    assert check_c1(case)[0] == VIOLATED
    assert check_c2(case)[0] == VIOLATED


def test_case_rejects_degenerate_counts():
    with pytest.raises(ValueError):
        _case_with(
            k=_bound(1, "exact"),
            k0=_bound(0, "exact"),
            l=_bound(1, "exact"),
            k_defect=_bound(1, "exact"),
            k_derived=_bound(1, "exact"),
        )


def test_make_case_label_and_order():
    case = make_case(gl_invariants(5, 1, 2, 5))
    assert case.label == "GL/ell=5/a=1/d=2/w=5"
    assert case.order == 5**6
    assert brauer_ok(case) is True


def test_brauer_flag_catches_impossible_counts():
    case = _case_with(
        k=_bound(10, "exact"),
        k0=_bound(1, "exact"),
        l=_bound(1, "exact"),
        k_defect=_bound(4, "exact"),
        k_derived=_bound(1, "exact"),
        defect=AbelianDefect(4),
    )
    assert brauer_ok(case) is False
    assert audit_case(case).witness["brauer-ok"] is False


def test_spin_p2_weight2_is_the_hard_case():
    # Both sides are one-sided in the wrong direction and the quaternion
    # defect group is not abelian, so neither check can settle it.
    verdict = audit_case(make_case(spin_invariants(2, 2)))
    assert verdict.c1 == INCONCLUSIVE
    assert verdict.c2 == INCONCLUSIVE


def test_default_sweep_inconclusive_rows_are_exactly_the_known_ones():
    verdicts = collect_verdicts(SweepConfig.default())
    c1_open = sorted(v.case.label for v in verdicts if v.c1 == INCONCLUSIVE)
    c2_open = sorted(v.case.label for v in verdicts if v.c2 == INCONCLUSIVE)
    assert c1_open == [
        "Spin/p=2/w=16",
        "Spin/p=2/w=2",
        "Spin/p=2/w=3",
        "Spin/p=2/w=4",
        "Spin/p=2/w=5",
        "Spin/p=3/w=4",
        "Spin/p=3/w=5",
    ]
    assert c2_open == ["Spin/p=2/w=2"]
    assert sum(1 for v in verdicts if VIOLATED in (v.c1, v.c2)) == 0


def test_abelian_rescue_rows_in_default_sweep():
    verdicts = collect_verdicts(SweepConfig.default())
    rescued = [
        v
        for v in verdicts
        if v.witness["c1"].get("route") == "abelian-defect"
        or v.witness["c2"].get("route") == "abelian-defect"
    ]
    assert len(rescued) == 449
    families = {v.case.family for v in rescued}
    assert families == {"SO-even", "Alt", "Spin"}
    # Every small-weight SO-even case (w < ell) is settled this way.
    so_even = [v for v in rescued if v.case.family == "SO-even"]
    assert all(dict(v.case.params)["w"] < dict(v.case.params)["ell"] for v in so_even)
    assert len(so_even) == 444


def test_gl_sl_generators_shape():
    cases = list(gl_cases(ells=(5,), a_max=1, w_max=2, families=("GL",)))
    assert [c.label for c in cases] == [
        "GL/ell=5/a=1/d=1/w=0",
        "GL/ell=5/a=1/d=1/w=1",
        "GL/ell=5/a=1/d=1/w=2",
        "GL/ell=5/a=1/d=2/w=0",
        "GL/ell=5/a=1/d=2/w=1",
        "GL/ell=5/a=1/d=2/w=2",
        "GL/ell=5/a=1/d=4/w=0",
        "GL/ell=5/a=1/d=4/w=1",
        "GL/ell=5/a=1/d=4/w=2",
    ]
    sl = list(sl_cases(ells=(5,), a_max=2))
    assert [dict(c.params)["g"] for c in sl] == [0, 1, 0, 1, 2]


def test_symalt_generator_covers_three_families():
    labels = [c.label for c in symalt_cases(ps=(3,), w_max=2)]
    assert labels == [
        "Sym/p=3/w=0",
        "Sym/p=3/w=1",
        "Sym/p=3/w=2",
        "Alt/p=3/w=0",
        "Alt/p=3/w=1",
        "Alt/p=3/w=2",
        "Spin/p=3/w=1",
        "Spin/p=3/w=2",
    ]


def test_small_sweep_report_structure():
    config = SweepConfig.from_text(
        "sections = gl symalt\n"
        "gl.ell = 5\ngl.a-max = 1\ngl.w-max = 6\n"
        "symalt.p = 3\nsymalt.w-max = 4\n"
    )
    report = sweep(config)
    assert report["summary"]["violations"] == 0
    assert report["summary"]["cases"] == len(report["rows"])
    assert report_ok(report)
    row = report["rows"][0]
    assert set(row) >= {"case", "family", "params", "k", "k0", "l", "kD", "kDprime",
                        "bound-kinds", "c1", "c2", "witness"}
    csv_text = report_csv(report)
    assert csv_text.splitlines()[0].startswith("case,family,params,k,k0,l,kD,kDprime")
    assert len(csv_text.splitlines()) == 1 + len(report["rows"])


def test_sweep_is_deterministic():
    config = SweepConfig.from_text(
        "sections = gl sl\ngl.ell = 5 7\ngl.a-max = 1\ngl.w-max = 8\nsl.ell = 5\nsl.a-max = 2\n"
    )
    first = report_json(sweep(config))
    second = report_json(sweep(config))
    assert first == second


def test_parallel_sweep_matches_serial():
    config = SweepConfig.from_text(
        "sections = gl\ngl.ell = 5\ngl.a-max = 2\ngl.w-max = 10\nworkers = 4\n"
    )
    serial = report_json(sweep(config, workers=1))
    parallel = report_json(sweep(config))
    # Worker count shows up in the echoed config, nothing else may differ.
    assert serial.replace('"workers": 1', '"workers": 4') == parallel


def test_config_defaults_round_trip():
    config = SweepConfig.default()
    assert config == SweepConfig.from_text(DEFAULT_CONFIG_TEXT)
    assert config.gl_ells == (5, 7, 11, 13)
    assert config.symalt_w_max == 17
    assert config.as_dict()["exceptional"]["a-max"] == 8


def test_config_rejects_unknown_keys_and_sections():
    with pytest.raises(ValueError, match="unknown config keys"):
        SweepConfig.from_text("gl.elll = 5\n")
    with pytest.raises(ValueError, match="unknown sweep sections"):
        SweepConfig.from_text("sections = gl torus\n")
    with pytest.raises(ValueError, match="expected 'key = values'"):
        SweepConfig.from_text("gl.ell 5\n")
    with pytest.raises(ValueError, match="expects one value"):
        SweepConfig.from_text("gl.a-max = 1 2\n")


def test_iter_cases_respects_sections():
    config = SweepConfig.from_text("sections = symalt\nsymalt.p = 2\nsymalt.w-max = 3\n")
    families = {case.family for case in iter_cases(config)}
    assert families == {"Sym", "Alt", "Spin"}


def test_verdict_row_shape():
    verdict = audit_case(make_case(gl_invariants(5, 1, 2, 5)))
    row = verdict_row(verdict)
    assert row["case"] == "GL/ell=5/a=1/d=2/w=5"
    assert row["k"] == 254 and row["kD"] == 649
    assert row["bound-kinds"]["k"] == "exact"
    assert row["c1"] == HOLDS_EXACT and row["c2"] == HOLDS_EXACT
