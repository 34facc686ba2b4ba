import math

import numpy as np
import pytest

from mecsbp.errors import ConfigError
from mecsbp.model import State
from mecsbp.simulator import STATUSES, SimConfig, frozen_noise, frozen_path, simulate_path, step
from mecsbp.stablejump import CutoffScheme

from conftest import P

DET = P(b11=1e-300, b21=1e-300, kappa1=1, kappa2=1)  # negligible noise


@pytest.mark.parametrize("kw", [dict(dt=0.0), dict(t_max=-1.0), dict(dt=1.0, t_max=0.5),
                                dict(eps_extinct=0.0), dict(cap_explode=0.5), dict(diffusion_form="ito"),
                                dict(seed=-1)])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SimConfig(**kw)


def test_deterministic_step_matches_euler():
    # with zero noise one step is x + (a1 x^θ1 y^κ1 - b10 x^r10) h
    p = DET.with_(b10=0.5, r10=1.0)
    cfg = SimConfig(dt=0.01)
    s = step(State(1.0, 2.0), p, None, cfg, np.random.default_rng(0))
    assert s.x == pytest.approx(1.0 + (2.0 - 0.5) * 0.01, rel=1e-12)
    assert s.y == pytest.approx(2.0 + 1.0 * 0.01, rel=1e-12)


def test_drift_clamp_never_negative():
    # huge linear death: the loss is clamped at x
    p = DET.with_(b10=1e6, r10=1.0, a1=1e-9)
    s = step(State(0.5, 1.0), p, None, SimConfig(dt=0.1), np.random.default_rng(0))
    assert s.x >= 0.0


def test_zero_is_absorbing():
    p = P(b12=1.0, r12=1.0)
    rng = np.random.default_rng(1)
    s = State(0.0, 1.0)
    for _ in range(50):
        s = step(s, p, None, SimConfig(dt=0.01), rng)
        assert s.x == 0.0


def test_extinction_detected_with_left_endpoint_time():
    p = DET.with_(b10=1.0, r10=0.0, a1=1e-12)  # constant death rate 1, x0 = 0.5
    out = simulate_path(0.5, 1.0, p, SimConfig(dt=0.01, t_max=5.0), np.random.default_rng(0))
    assert out.status == "ExtinctX"
    assert out.t_end == pytest.approx(0.49, abs=1e-9)


def test_explosion_detected():
    p = DET.with_(a1=10.0, theta1=2.0, kappa1=0.0)
    out = simulate_path(1.0, 1.0, p, SimConfig(dt=1e-3, t_max=5.0, cap_explode=1e6), np.random.default_rng(0))
    assert out.status == "Exploded"
    # ẋ = 10 x² blows up at t = 0.1
    assert 0.05 < out.t_end < 0.11


def test_survival_ends_at_t_max():
    out = simulate_path(1.0, 1.0, DET, SimConfig(dt=0.03, t_max=1.0), np.random.default_rng(0))
    assert out.status == "Survived" and out.t_end == 1.0
    # last step is shortened: ceil(1/0.03) steps
    assert out.steps == math.ceil(1.0 / 0.03)


def test_initial_state_guard():
    with pytest.raises(ConfigError):
        simulate_path(0.0, 1.0, DET, SimConfig(), np.random.default_rng(0))


def test_reproducible_path():
    p = P(b12=0.5, r12=1.2, b22=0.5, r22=1.2, theta1=0.8, r11=1.5)
    a = simulate_path(1.0, 1.0, p, SimConfig(), np.random.default_rng(3))
    b = simulate_path(1.0, 1.0, p, SimConfig(), np.random.default_rng(3))
    assert a == b and a.status in STATUSES


def test_diffusion_forms_differ_only_when_b11_not_one():
    p = P(b11=1.0, b21=1.0)
    cfg_s, cfg_g = SimConfig(diffusion_form="sde"), SimConfig(diffusion_form="generator")
    a = step(State(1.0, 1.0), p, None, cfg_s, np.random.default_rng(0))
    b = step(State(1.0, 1.0), p, None, cfg_g, np.random.default_rng(0))
    assert a == b
    q = P(b11=0.25, b21=0.25)
    a = step(State(1.0, 1.0), q, None, cfg_s, np.random.default_rng(0))
    b = step(State(1.0, 1.0), q, None, cfg_g, np.random.default_rng(0))
    assert a != b


def test_sde_variance_one_step():
    # Var of one Euler step = 2 b11² x^r11 h under the sde form
    p = P(b11=0.5, r11=1.0, a1=1e-12, kappa1=1)
    cfg = SimConfig(dt=1e-4)
    rng = np.random.default_rng(8)
    xs = np.array([step(State(2.0, 1.0), p, None, cfg, rng).x for _ in range(20000)])
    want = 2 * 0.25 * 2.0 * 1e-4
    assert xs.var() == pytest.approx(want, rel=0.05)


def test_monotone_coupling_in_initial_state():
    # same noise, larger start: X stays above (checked up to the first absorption)
    p = P(b12=0.5, r12=1.0, b22=0.5, r22=1.0, b11=0.3, r11=1.0, b21=0.3, r21=1.0, kappa1=1, kappa2=1)
    cfg = SimConfig(dt=1e-3, cutoff=CutoffScheme(1e-3, True))
    noise = frozen_noise(cfg, 2000, np.random.default_rng(5))
    lo = frozen_path(0.5, 0.5, p, cfg, noise)
    hi = frozen_path(0.5 + 1e-6, 0.5, p, cfg, noise)
    alive = (lo[:, 0] > 0) & (lo[:, 1] > 0)
    # over the first steps the perturbation stays ordered
    k = min(200, int(np.argmin(alive)) if not alive.all() else 200)
    assert np.all(hi[:k, 0] >= lo[:k, 0])
