"""Model coefficients, their validation, and the derived boundary exponents.

The system is

    dX = (a1 X^θ1 Y^κ1 - b10 X^r10) dt + b11 sqrt(2 X^r11) dB1 + jumps of rate b12 X^r12 μ1
    dY = (a2 Y^θ2 X^κ2 - b20 Y^r20) dt + b21 sqrt(2 Y^r21) dB2 + jumps of rate b22 Y^r22 μ2

with μi the spectrally positive αi-stable Lévy measure. Powers follow the
convention 0^0 = 1.
"""

import json
import math
from dataclasses import dataclass, fields, replace

from .errors import ConstraintViolation, ParamsLoadError

PARAM_KEYS = (
    "a1", "a2", "theta1", "theta2", "kappa1", "kappa2",
    "b10", "b11", "b12", "b20", "b21", "b22",
    "r10", "r11", "r12", "r20", "r21", "r22",
    "alpha1", "alpha2",
)

# coordinate-1 key <-> coordinate-2 key
_MIRROR = {
    "a1": "a2", "theta1": "theta2", "kappa1": "kappa2",
    "b10": "b20", "b11": "b21", "b12": "b22",
    "r10": "r20", "r11": "r21", "r12": "r22", "alpha1": "alpha2",
}
_MIRROR.update({v: k for k, v in list(_MIRROR.items())})


@dataclass(frozen=True)
class ModelParams:
    a1: float
    a2: float
    theta1: float
    theta2: float
    kappa1: float
    kappa2: float
    b10: float
    b11: float
    b12: float
    b20: float
    b21: float
    b22: float
    r10: float
    r11: float
    r12: float
    r20: float
    r21: float
    r22: float
    alpha1: float
    alpha2: float

    def to_dict(self):
        return {k: float(getattr(self, k)) for k in PARAM_KEYS}

    def with_(self, **changes):
        return replace(self, **changes)

    def swapped(self):
        """Exchange the roles of the two coordinates."""
        return ModelParams(**{k: getattr(self, _MIRROR[k]) for k in PARAM_KEYS})

    def coord(self, i):
        """Coefficients of coordinate i as a dict with neutral names."""
        if i == 1:
            keys = ("a1", "theta1", "kappa1", "b10", "b11", "b12", "r10", "r11", "r12", "alpha1")
        elif i == 2:
            keys = ("a2", "theta2", "kappa2", "b20", "b21", "b22", "r20", "r21", "r22", "alpha2")
        else:
            raise ValueError("coordinate must be 1 or 2")
        names = ("a", "theta", "kappa", "b0", "b1", "b2", "r0", "r1", "r2", "alpha")
        return {n: getattr(self, k) for n, k in zip(names, keys)}


@dataclass(frozen=True)
class DerivedParams:
    r1: float
    r2: float
    b1: float
    b2: float
    varrho: tuple  # ((1, 2, alpha1), (1, 2, alpha2))
    # indices j of the channels attaining the minimum, per coordinate
    argmin1: tuple = ()
    argmin2: tuple = ()


@dataclass(frozen=True)
class State:
    x: float
    y: float

    def __post_init__(self):
        if not (self.x >= 0 and self.y >= 0):
            raise ValueError("state coordinates must be nonnegative")


def validate(raw):
    """Return `raw` unchanged if every admissibility constraint holds."""
    for f in fields(raw):
        v = getattr(raw, f.name)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise ConstraintViolation(f"{f.name} finite real")
    for k in ("a1", "a2", "kappa1", "kappa2"):
        if not getattr(raw, k) > 0:
            raise ConstraintViolation(f"{k}>0")
    for k in ("theta1", "theta2", "b10", "b11", "b12", "b20", "b21", "b22",
              "r10", "r11", "r12", "r20", "r21", "r22"):
        if not getattr(raw, k) >= 0:
            raise ConstraintViolation(f"{k}>=0")
    if not raw.b11 + raw.b12 > 0:
        raise ConstraintViolation("b11+b12>0")
    if not raw.b21 + raw.b22 > 0:
        raise ConstraintViolation("b21+b22>0")
    for k in ("alpha1", "alpha2"):
        if not 1.0 < getattr(raw, k) < 2.0:
            raise ConstraintViolation(f"{k} in (1,2)")
    return raw


def make_params(**kw):
    """Build and validate params; unspecified keys are an error."""
    return validate(ModelParams(**{k: float(v) for k, v in kw.items()}))


def _dominant(b, r, rho, tie_tol):
    cands = [(r[j] - rho[j], j) for j in range(3) if b[j] != 0]
    m = min(c for c, _ in cands)
    hit = tuple(j for c, j in cands if c - m <= tie_tol)
    return m, sum(b[j] for j in hit), hit


def derive_exponents(p, tie_tol=0.0):
    """Dominant near-zero exponents r_i and the aggregated coefficients b_i.

    r_i is the minimum of r_ij - varrho_ij over channels with b_ij != 0,
    varrho = (1, 2, alpha_i); b_i sums b_ij over the channels attaining it.
    """
    rho1 = (1.0, 2.0, p.alpha1)
    rho2 = (1.0, 2.0, p.alpha2)
    r1, b1, h1 = _dominant((p.b10, p.b11, p.b12), (p.r10, p.r11, p.r12), rho1, tie_tol)
    r2, b2, h2 = _dominant((p.b20, p.b21, p.b22), (p.r20, p.r21, p.r22), rho2, tie_tol)
    return DerivedParams(r1=r1, r2=r2, b1=b1, b2=b2, varrho=(rho1, rho2), argmin1=h1, argmin2=h2)


def drift(s, p):
    x, y = s.x, s.y
    dx = p.a1 * x ** p.theta1 * y ** p.kappa1 - p.b10 * x ** p.r10
    dy = p.a2 * y ** p.theta2 * x ** p.kappa2 - p.b20 * y ** p.r20
    return dx, dy


def diffusion_coeff(s, p):
    return p.b11 * math.sqrt(2.0 * s.x ** p.r11), p.b21 * math.sqrt(2.0 * s.y ** p.r21)


def jump_scale(s, p):
    return p.b12 * s.x ** p.r12, p.b22 * s.y ** p.r22


# ---------------------------------------------------------------- file I/O

def params_from_dict(d):
    if not isinstance(d, dict):
        raise ParamsLoadError("parameter file must hold a JSON object")
    for k in PARAM_KEYS:
        if k not in d:
            raise ParamsLoadError(f"missing key: {k}")
    extra = sorted(set(d) - set(PARAM_KEYS))
    if extra:
        raise ParamsLoadError(f"unknown key: {extra[0]}")
    vals = {}
    for k in PARAM_KEYS:
        v = d[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParamsLoadError(f"key {k} must be a number")
        vals[k] = float(v)
    return validate(ModelParams(**vals))


def load_params(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParamsLoadError(f"{path}: invalid JSON ({exc})") from None
    return params_from_dict(d)


def params_to_json(p):
    # repr-level float formatting round-trips exactly
    return json.dumps(p.to_dict(), indent=2)


__all__ = [
    "PARAM_KEYS", "ModelParams", "DerivedParams", "State", "validate", "make_params",
    "derive_exponents", "drift", "diffusion_coeff", "jump_scale", "params_from_dict",
    "load_params", "params_to_json",
]
