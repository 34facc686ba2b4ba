"""Euler scheme for the two-type system with absorbing 0 and an explosion proxy.

Each step applies the drift with its negative part clamped to the current
value, a Brownian increment with the left-endpoint diffusion coefficient,
and a compensated stable jump increment whose intensity b·x^r is frozen at
the left endpoint. Coordinates pushed below 0 are set to 0.
"""

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ConfigError
from .model import PARAM_KEYS, State
from .stablejump import CutoffScheme, c_norm, compensated_increment_kernel

STATUSES = ("ExtinctX", "ExtinctY", "Survived", "Exploded")
_EXT_X, _EXT_Y, _SURV, _EXPL = range(4)


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    t_max: float = 5.0
    eps_extinct: float = 1e-8
    cap_explode: float = 1e12
    cutoff: CutoffScheme = field(default_factory=CutoffScheme)
    seed: int = 0
    # "sde": sigma = b11 sqrt(2 x^r11); "generator": sigma = sqrt(2 b11 x^r11),
    # the form whose generator has b11 x^r11 g_xx
    diffusion_form: str = "sde"

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError("dt must be > 0")
        if not self.t_max > 0:
            raise ConfigError("t_max must be > 0")
        if not self.dt < self.t_max:
            raise ConfigError("dt must be < t_max")
        if not 0 < self.eps_extinct < 1 < self.cap_explode:
            raise ConfigError("need 0 < eps_extinct < 1 < cap_explode")
        if self.diffusion_form not in ("sde", "generator"):
            raise ConfigError("diffusion_form must be 'sde' or 'generator'")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be a 64-bit nonnegative integer")


@dataclass(frozen=True)
class PathOutcome:
    status: str
    t_end: float
    x_end: float
    y_end: float
    steps: int = 0


def _pvec(p):
    return np.array([getattr(p, k) for k in PARAM_KEYS], dtype=np.float64)


@numba.njit(cache=True, nogil=True)
def _pow(x, e):
    # 0^0 = 1 convention
    if e == 0.0:
        return 1.0
    return x ** e


@numba.njit(cache=True, nogil=True)
def _coord_step(x, other, a, th, ka, b0, b1, b2, r0, r1, r2, al, cn, h, eps_j, gauss, gen_form, z, rng):
    gain = a * _pow(x, th) * _pow(other, ka) * h
    loss = b0 * _pow(x, r0) * h
    if loss > x:
        loss = x
    if gen_form:
        sig = math.sqrt(2.0 * b1 * _pow(x, r1))
    else:
        sig = b1 * math.sqrt(2.0 * _pow(x, r1))
    dj = 0.0
    if b2 != 0.0:
        lam = b2 * _pow(x, r2)
        dj = compensated_increment_kernel(al, cn, lam * h, eps_j, gauss, rng)
    xn = x + gain - loss + sig * math.sqrt(h) * z + dj
    return xn if xn > 0.0 else 0.0


@numba.njit(cache=True, nogil=True)
def _step(x, y, pv, cn1, cn2, h, eps_j, gauss, gen_form, rng):
    # pv follows PARAM_KEYS order
    z1 = rng.standard_normal()
    z2 = rng.standard_normal()
    xn = x
    if x > 0.0:
        xn = _coord_step(x, y, pv[0], pv[2], pv[4], pv[6], pv[7], pv[8], pv[12], pv[13], pv[14],
                         pv[18], cn1, h, eps_j, gauss, gen_form, z1, rng)
    yn = y
    if y > 0.0:
        yn = _coord_step(y, x, pv[1], pv[3], pv[5], pv[9], pv[10], pv[11], pv[15], pv[16], pv[17],
                         pv[19], cn2, h, eps_j, gauss, gen_form, z2, rng)
    return xn, yn


@numba.njit(cache=True, nogil=True)
def _path(x, y, pv, cn1, cn2, dt, t_max, eps_x, cap, eps_j, gauss, gen_form, rng):
    t = 0.0
    n = 0
    while True:
        h = dt
        if t + h > t_max:
            h = t_max - t
        if h <= 1e-12 * t_max:
            return _SURV, t_max, x, y, n
        xn, yn = _step(x, y, pv, cn1, cn2, h, eps_j, gauss, gen_form, rng)
        n += 1
        # extinction before explosion; X before Y on ties
        if xn <= eps_x:
            return _EXT_X, t, xn, yn, n
        if yn <= eps_x:
            return _EXT_Y, t, xn, yn, n
        if xn >= cap or yn >= cap or not (xn == xn and yn == yn):
            return _EXPL, t, xn, yn, n
        x, y = xn, yn
        t += h


def _args(p, cfg):
    return (_pvec(p), c_norm(p.alpha1), c_norm(p.alpha2))


def step(s, p, dp, cfg, rng):
    """One Euler step of length cfg.dt from state s; dp is accepted for interface symmetry."""
    if not (s.x < cfg.cap_explode and s.y < cfg.cap_explode):
        raise ConfigError("state at or above the explosion cap")
    pv, cn1, cn2 = _args(p, cfg)
    xn, yn = _step(float(s.x), float(s.y), pv, cn1, cn2, cfg.dt, cfg.cutoff.eps_jump,
                   cfg.cutoff.gaussian_smalljump, cfg.diffusion_form == "generator", rng)
    return State(xn, yn)


def simulate_path(x0, y0, p, cfg, rng):
    """Run until a coordinate falls to eps_extinct, one reaches cap_explode, or t_max."""
    if not (cfg.eps_extinct < x0 < cfg.cap_explode and cfg.eps_extinct < y0 < cfg.cap_explode):
        raise ConfigError("initial state must lie in (eps_extinct, cap_explode)")
    pv, cn1, cn2 = _args(p, cfg)
    code, t, x, y, n = _path(float(x0), float(y0), pv, cn1, cn2, cfg.dt, cfg.t_max, cfg.eps_extinct,
                             cfg.cap_explode, cfg.cutoff.eps_jump, cfg.cutoff.gaussian_smalljump,
                             cfg.diffusion_form == "generator", rng)
    return PathOutcome(STATUSES[code], float(t), float(x), float(y), int(n))


# ---------------------------------------------------------- frozen noise

def frozen_noise(cfg, n_steps, rng, alphas=(1.5, 1.5)):
    """Pre-drawn normals and unit-intensity compensated jump increments.

    Row k holds (Z1, Z2, J1, J2) for step k; J is drawn at intensity 1 over dt,
    and a step with intensity λ uses λ^(1/α)·J (stable self-similarity).
    """
    out = np.empty((n_steps, 4))
    out[:, :2] = rng.standard_normal((n_steps, 2))
    for j, al in enumerate(alphas):
        for k in range(n_steps):
            out[k, 2 + j] = compensated_increment_kernel(al, c_norm(al), cfg.dt, cfg.cutoff.eps_jump,
                                                         cfg.cutoff.gaussian_smalljump, rng)
    return out


def frozen_path(x0, y0, p, cfg, noise):
    """Trajectory array (n+1, 2) driven by a fixed noise table from `frozen_noise`.

    Same drift clamp and absorption rules as `step`; no stopping rule.
    """
    gen = cfg.diffusion_form == "generator"
    traj = np.empty((noise.shape[0] + 1, 2))
    x, y = float(x0), float(y0)
    traj[0] = x, y
    h = cfg.dt
    for k, (z1, z2, j1, j2) in enumerate(noise):
        xn, yn = x, y
        if x > 0:
            xn = _frozen_coord(x, y, p.coord(1), h, gen, z1, j1)
        if y > 0:
            yn = _frozen_coord(y, x, p.coord(2), h, gen, z2, j2)
        x, y = xn, yn
        traj[k + 1] = x, y
    return traj


def _frozen_coord(x, other, c, h, gen, z, j):
    gain = c["a"] * x ** c["theta"] * other ** c["kappa"] * h
    loss = min(c["b0"] * x ** c["r0"] * h, x)
    sig = math.sqrt(2 * c["b1"] * x ** c["r1"]) if gen else c["b1"] * math.sqrt(2 * x ** c["r1"])
    lam = c["b2"] * x ** c["r2"]
    xn = x + gain - loss + sig * math.sqrt(h) * z + lam ** (1 / c["alpha"]) * j
    return max(xn, 0.0)


__all__ = ["SimConfig", "PathOutcome", "STATUSES", "step", "simulate_path", "frozen_noise", "frozen_path"]
