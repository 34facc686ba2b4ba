import numpy as np
import pytest

from mecsbp.model import ModelParams, validate

BASE = dict(a1=1.0, a2=1.0, theta1=0.0, theta2=0.0, kappa1=0.5, kappa2=0.5,
            b10=0.0, b11=1.0, b12=0.0, b20=0.0, b21=1.0, b22=0.0,
            r10=0.0, r11=2.0, r12=0.0, r20=0.0, r21=2.0, r22=0.0,
            alpha1=1.5, alpha2=1.5)


def P(**kw):
    d = dict(BASE)
    d.update(kw)
    return validate(ModelParams(**{k: float(v) for k, v in d.items()}))


# hand-built classifier fixtures: name -> (params, expected verdict, theorem that must match)
FIXTURES = {
    "prop12": (P(r11=2.5, r21=2.5), "NonExtinctionAS", "Prop 1.2"),
    "thm11a_i": (P(r11=2.5, r21=1.7), "NonExtinctionAS", "Thm 1.1a(i)"),
    "thm11a_ii": (P(r11=1.7, r21=2.5), "NonExtinctionAS", "Thm 1.1a(ii)"),
    "thm11": (P(r11=1.7, r21=1.7), "NonExtinctionAS", "Thm 1.1"),
    # critical surface (r+1)^2 = 0.49 = kappa^2, C1(i) by drift dominance
    "thm14_i": (P(a1=2, a2=2, kappa1=0.7, kappa2=0.7, b10=1, b20=1, r10=0.7, r20=0.7, r11=2, r21=2),
                "NonExtinctionAS", "Thm 1.4(i)"),
    "thm14_ii": (P(a1=3, a2=2, kappa1=0.7, kappa2=0.7, b10=1, b20=1, r10=0.7, r20=0.7, r11=1.7, r21=1.7),
                 "NonExtinctionAS", "Thm 1.4(ii)"),
    "thm14_ii_eq": (P(a1=2, a2=2, kappa1=0.7, kappa2=0.7, b10=1, b20=1, r10=0.7, r20=0.7,
                      r11=1.7, r21=1.7), "NonExtinctionAS", "Thm 1.4(ii) equality"),
    "thm12a_i": (P(theta1=0.8, r11=1.5), "ExtinctionPositiveProb", "Thm 1.2a(i)"),
    "thm12a_ii": (P(theta2=0.8, r21=1.5), "ExtinctionPositiveProb", "Thm 1.2a(ii)"),
    # subcritical 0.49 < 0.64 with C1(i) from drift dominance
    "thm12_i": (P(kappa1=0.8, kappa2=0.8, b10=1, b20=1, r10=0.7, r20=0.7, r11=2, r21=2),
                "ExtinctionPositiveProb", "Thm 1.2(i)"),
    "thm12_ii": (P(kappa1=0.8, kappa2=0.8, b10=1, b20=1, r10=1, r20=1, r11=1.7, r21=1.7),
                 "ExtinctionPositiveProb", "Thm 1.2(ii)"),
    "thm12_iii": (P(kappa1=0.8, kappa2=0.8, b10=1, b20=1, r10=1, r20=1, r11=1.7, r21=1.7),
                  "ExtinctionPositiveProb", "Thm 1.2(iii)"),
    "thm14bb": (P(a1=0.5, a2=0.5, kappa1=0.7, kappa2=0.7, b10=1, b20=1, r10=0.7, r20=0.7, r11=2, r21=2),
                "ExtinctionPositiveProb", "Thm 1.4bb"),
}
# Monte Carlo fixtures: drift and diffusion tie at r_i = 0 (Prop 1.2), and a
# strongly subcritical X with weak interaction near 0 (Thm 1.2a(i))
MC_PROP12 = P(b10=0.2, r10=1, b11=0.5, r11=2, b20=0.2, r20=1, b21=0.5, r21=2)
MC_EXT = P(a1=0.1, theta1=0.5, kappa1=2, b10=2, b11=0.5, r10=0.3, r11=2,
           kappa2=1, b20=0.5, b21=0.5, b22=0.3, r20=1, r21=2, r22=1.5)
# cluster fixtures: b1 = b2 = 2 (drift and diffusion tie), so a1 a2 = 4 is the equality case


def random_rows(rng, n):
    """Coarse-grid parameter rows in field order; coarse values hit ties and equalities often."""
    cols = {
        "a1": rng.choice([0.25, 0.5, 1, 2, 4], n), "a2": rng.choice([0.25, 0.5, 1, 2, 4], n),
        "theta1": rng.choice([0, 0.3, 0.5, 0.8, 1, 1.5], n), "theta2": rng.choice([0, 0.3, 0.5, 0.8, 1, 1.5], n),
        "kappa1": rng.choice([0.2, 0.5, 0.7, 0.8, 1, 2], n), "kappa2": rng.choice([0.2, 0.5, 0.7, 0.8, 1, 2], n),
    }
    for i in (1, 2):
        cols[f"b{i}0"] = rng.choice([0, 0.5, 1], n)
        cols[f"b{i}1"] = rng.choice([0, 0.5, 1], n)
        cols[f"b{i}2"] = rng.choice([0, 0.5, 1], n)
        cols[f"r{i}0"] = rng.choice([0, 0.3, 0.7, 1, 1.5], n)
        cols[f"r{i}1"] = rng.choice([1.2, 1.5, 1.7, 2, 2.5], n)
        cols[f"r{i}2"] = rng.choice([1, 1.2, 1.5, 2], n)
        cols[f"alpha{i}"] = rng.choice([1.2, 1.5, 1.7], n)
        dead = (cols[f"b{i}1"] + cols[f"b{i}2"]) == 0
        cols[f"b{i}1"] = np.where(dead, 1.0, cols[f"b{i}1"])
    keys = list(ModelParams.__dataclass_fields__)
    return np.column_stack([cols[k] for k in keys]).astype(float).tolist()


def continuous_rows(rng, n):
    """Log-uniform coefficients and uniform exponents; channels switched off at random."""
    keys = list(ModelParams.__dataclass_fields__)
    cols = {k: np.exp(rng.uniform(np.log(0.05), np.log(5), n)) for k in ("a1", "a2", "kappa1", "kappa2")}
    for i in (1, 2):
        cols[f"theta{i}"] = rng.uniform(0, 1.5, n)
        for j in range(3):
            on = rng.random(n) < 0.7
            cols[f"b{i}{j}"] = np.where(on, np.exp(rng.uniform(np.log(0.05), np.log(5), n)), 0.0)
        cols[f"r{i}0"] = rng.uniform(0, 2, n)
        cols[f"r{i}1"] = rng.uniform(0.5, 3, n)
        cols[f"r{i}2"] = rng.uniform(0.5, 2.5, n)
        cols[f"alpha{i}"] = rng.uniform(1.05, 1.95, n)
        dead = (cols[f"b{i}1"] + cols[f"b{i}2"]) == 0
        cols[f"b{i}1"] = np.where(dead, 1.0, cols[f"b{i}1"])
    return np.column_stack([cols[k] for k in keys]).astype(float).tolist()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance lines, filled by test_acceptance and echoed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
