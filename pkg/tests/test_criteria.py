import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mecsbp.criteria import (EXTINCTION, NON_EXTINCTION, classify, eval_condition_c1, eval_condition_c2,
                             eval_eq_1_6, verdict)
from mecsbp.model import ModelParams, derive_exponents, validate

from conftest import FIXTURES, P, random_rows

MIRROR_NAMES = {
    "Thm 1.1a(i)": "Thm 1.1a(ii)", "Thm 1.1a(ii)": "Thm 1.1a(i)",
    "Thm 1.2a(i)": "Thm 1.2a(ii)", "Thm 1.2a(ii)": "Thm 1.2a(i)",
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_verdicts(name):
    p, want, thm = FIXTURES[name]
    rep = classify(p)
    assert rep.verdict == want
    assert thm in rep.matched
    assert rep.checklists[thm]["matched"]


def test_fixture_coverage():
    covered = {thm for _, _, thm in FIXTURES.values()}
    assert covered == set(NON_EXTINCTION) | set(EXTINCTION)
    assert len(FIXTURES) >= 12


def test_undetermined_case():
    # band, critical surface, no C1 (no drift), so neither Thm 1.4 entry applies
    p = P(kappa1=0.7, kappa2=0.7, r11=1.7, r21=1.7)
    rep = classify(p)
    assert rep.verdict == "Undetermined" and rep.matched == []


def test_checklist_values_recorded():
    rep = classify(FIXTURES["thm11"][0])
    checks = rep.checklists["Thm 1.1"]["checks"]
    prod = [c for c in checks if c["op"] == ">"][0]
    assert prod["lhs"] == pytest.approx(0.49) and prod["rhs"] == pytest.approx(0.25)
    assert set(rep.checklists) == set(NON_EXTINCTION) | set(EXTINCTION)
    json.loads(rep.to_json())
    assert "verdict: NonExtinctionAS" in rep.table()


def test_extinction_note():
    rep = classify(FIXTURES["thm12a_i"][0])
    assert any("almost-sure" in n for n in rep.notes)


def test_c1_no_drift_is_false():
    ci, cii, ciii, _ = eval_condition_c1(P(b10=0, b20=0, r11=1.7, r21=1.7))
    assert not ci


def test_c1_drift_dominant():
    ci, _, _, det = eval_condition_c1(P(b10=1, b20=1, r10=0.3, r20=0.3, r11=2, r21=2))
    assert ci
    dom = [c for c in det["checks"] if c["name"].startswith("drift dominance")]
    assert [c["lhs"] for c in dom] == pytest.approx([-0.7, -0.7])


def test_c1_ii_one_sided_drift():
    # b20 = 0 and b10 != 0, drift dominance for X, guard (r1+1-θ1)/κ1 < r1/r2:
    # r1 = -0.3, r2 = -0.1: 0.7/2 = 0.35 < 3
    p = P(b10=1, r10=0.7, r11=2, b20=0, r21=1.9, kappa1=2.0)
    dp = derive_exponents(p)
    assert dp.r1 == pytest.approx(-0.3) and dp.r2 == pytest.approx(-0.1)
    ci, cii, ciii, _ = eval_condition_c1(p)
    assert cii and not ci and not ciii


def test_c2_symmetric_implied():
    # r1 = r2 = -0.3, θ = 0: with κ = 0.8 the subcritical product condition holds (0.49 < 0.64) and C2(i) follows;
    # with κ = 0.6 it fails (0.49 > 0.36) and so does C2(i)
    c2i, _, _ = eval_condition_c2(P(kappa1=0.8, kappa2=0.8, r11=1.7, r21=1.7))
    assert c2i
    c2i, _, _ = eval_condition_c2(P(kappa1=0.6, kappa2=0.6, r11=1.7, r21=1.7))
    assert not c2i


@given(st.floats(-0.95, -0.05), st.floats(0.05, 1.0))
@settings(max_examples=200, deadline=None)
def test_c2_symmetric_follows_from_subcriticality(r, theta):
    # equal r and θ on both sides: strict subcriticality implies C2(i)
    kappa = (r + 1 - theta) * 1.01 + 1e-6
    if not theta - 1 < r:
        return
    p = P(theta1=theta, theta2=theta, kappa1=kappa, kappa2=kappa, r11=2 + r, r21=2 + r)
    assert eval_condition_c2(p)[0]


def test_c2_outside_band_false_with_note():
    c2i, c2ii, det = eval_condition_c2(P(r11=2.5, r21=2.5))
    assert not c2i and not c2ii and det["notes"]


def test_c2_ii_theta_at_least_one():
    # θ1 ≥ 1 empties θ1-1 < r1 < 0, so C2 is false before the 1-θ1 term is reached
    p = P(theta1=1.0, r11=1.8, kappa1=0.6, kappa2=0.6, r21=1.7)
    c2i, c2ii, det = eval_condition_c2(p)
    assert not c2ii and not c2i and det["notes"]


def test_eq16_examples():
    assert eval_eq_1_6(P(b10=0)) == (False, False)
    assert eval_eq_1_6(P(b10=1, r10=1.5, r11=2))[0]
    assert not eval_eq_1_6(P(b10=1, r10=0.3, r11=2))[0]


def test_near_critical_note():
    # a 1e-14 nudge off the critical surface is read as equality and noted
    p = P(r11=1.7 + 1e-14, r21=1.7, kappa1=0.7, kappa2=0.7)
    rep = classify(p)
    assert not rep.checklists["Thm 1.1"]["matched"]
    assert any(n.startswith("near-critical") for n in rep.notes)
    eq = [c for c in rep.checklists["Thm 1.4(i)"]["checks"] if c["op"] == "="][0]
    assert eq["holds"]


def test_criticality_flip():
    base = FIXTURES["thm14_i"][0]
    # b1 = b2 = 1, κ2 = 0.7, e1 = 0.7: product (a1)^(1/0.7) a2^(1/0.7) crosses 1 at a1 a2 = 1
    up = classify(base.with_(a1=1.05, a2=1.0))
    down = classify(base.with_(a1=0.95, a2=1.0))
    assert up.verdict == "NonExtinctionAS" and "Thm 1.4(i)" in up.matched
    assert down.verdict == "ExtinctionPositiveProb" and "Thm 1.4bb" in down.matched


def test_pure_function():
    p = FIXTURES["thm12_ii"][0]
    assert classify(p).to_json() == classify(p).to_json()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_swap_mirrors_matches(name):
    p = FIXTURES[name][0]
    a, b = classify(p), classify(p.swapped())
    assert a.verdict == b.verdict
    mirrored = {MIRROR_NAMES.get(t, t) for t in a.matched}
    # the asymmetric critical-power expression is not swap invariant, so only
    # the symmetric-by-construction theorems are compared exactly
    sym = {t for t in mirrored if not t.startswith("Thm 1.4")}
    assert sym <= set(b.matched)


def test_swap_mirrors_c2_parts():
    p = P(kappa1=0.9, kappa2=0.6, r11=1.75, r21=1.6, b10=1, r10=1, b20=1, r20=1)
    _, _, d = eval_condition_c2(p)
    _, _, ds = eval_condition_c2(p.swapped())
    by = {c["name"]: c["holds"] for c in d["checks"]}
    bys = {c["name"]: c["holds"] for c in ds["checks"]}
    assert by["C2 first ratio inequality"] == bys["C2 second ratio inequality"]
    assert by["C2 first min inequality"] == bys["C2 second min inequality"]


def test_exclusivity_random_draws_small():
    rng = np.random.default_rng(2)
    counts = {}
    for row in random_rows(rng, 5000):
        v = verdict(ModelParams(*row))
        counts[v] = counts.get(v, 0) + 1
    # every verdict class occurs in the coarse grid
    assert set(counts) == {"NonExtinctionAS", "ExtinctionPositiveProb", "Undetermined"}


@st.composite
def band_params(draw):
    r = draw(st.floats(-0.9, -0.05))
    k1, k2 = draw(st.floats(0.1, 2)), draw(st.floats(0.1, 2))
    a1, a2 = draw(st.floats(0.1, 5)), draw(st.floats(0.1, 5))
    r2 = draw(st.floats(-0.9, -0.05))
    return validate(ModelParams(a1=a1, a2=a2, theta1=0.0, theta2=0.0, kappa1=k1, kappa2=k2,
                                b10=1.0, b11=1.0, b12=0.0, b20=1.0, b21=1.0, b22=0.0,
                                r10=1 + r, r11=2.5, r12=0.0, r20=1 + r2, r21=2.5, r22=0.0,
                                alpha1=1.5, alpha2=1.5))


@given(band_params())
@settings(max_examples=300, deadline=None)
def test_no_double_match_property(p):
    rep = classify(p, record=False)
    non = [t for t in rep.matched if t in NON_EXTINCTION]
    ext = [t for t in rep.matched if t in EXTINCTION]
    assert not (non and ext)


@given(band_params())
@settings(max_examples=100, deadline=None)
def test_record_flag_same_verdict(p):
    assert classify(p, record=True).verdict == classify(p, record=False).verdict
