"""Infinitesimal generator of the two-type system applied to test functions.

    𝓛g = a1 x^θ1 y^κ1 g_x + a2 y^θ2 x^κ2 g_y - b10 x^r10 g_x - b20 y^r20 g_y
         + b11 x^r11 g_xx + b21 y^r21 g_yy
         + b12 x^r12 ∫ K_z^1 g μ1(dz) + b22 y^r22 ∫ K_z^2 g μ2(dz)

Jump integrals come either from closed forms (pure power and log pieces)
or from quadrature; drift inequalities 𝓛g ≤ C g and 𝓛g ≥ d g are
certified on log-spaced grids.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, HypothesisError
from .model import derive_exponents
from .stablejump import StableMeasure, c_rho, mu_integral
from .testfunctions import (ClosedFormUnavailable, LinearCap, LogType, htilde,  # noqa: F401
                            k_integral_closed_power)

TERM_NAMES = ("interaction_x", "interaction_y", "drift_x", "drift_y",
              "diffusion_x", "diffusion_y", "jump_x", "jump_y")


def eval(tf, x, y):  # noqa: A001 - mirrors the operation name
    """Value and first/second partials (g, g_x, g_y, g_xx, g_yy)."""
    return tf.eval(x, y)


def k_integral_numeric(tf, x, y, coord, m, rtol=1e-9):
    """∫_0^∞ K_z g μ(dz) in coordinate `coord` by quadrature.

    The jump is rescaled by the current coordinate, z = s·w with s = x (or
    y), so that ∫ K_z g μ(dz) = s^-α ∫ K_{sw} g μ(dw).
    """
    if isinstance(tf, LogType) or isinstance(getattr(tf, "inner", None), LogType):
        raise DomainError("LogType lives on a bounded box; jumps leave its domain")
    x, y = tf.check_domain(float(x), float(y))
    x, y = float(x), float(y)
    gam = max(1.0, tf.growth(coord))
    if gam >= m.alpha:
        raise DomainError(f"jump integral diverges: growth {gam} >= alpha {m.alpha}")
    g0, gx, gy, gxx, gyy = tf._eval(x, y)
    if coord == 1:
        s, slope = x, gx

        def shifted(w):
            return tf._eval(x + s * w, y)
    elif coord == 2:
        s, slope = y, gy

        def shifted(w):
            return tf._eval(x, y + s * w)
    else:
        raise DomainError("coord must be 1 or 2")
    idx = 3 if coord == 1 else 4

    def f(w):
        return float(shifted(w)[0] - g0 - slope * s * w)

    def d2f(w):
        return s * s * shifted(w)[idx]

    curv = gxx if coord == 1 else gyy
    scale = abs(g0) + abs(slope * s) + abs(curv * s * s)
    return s ** (-m.alpha) * mu_integral(f, d2f, m.alpha, growth=gam, rtol=rtol, scale=scale)


def _jump(tf, coord, x, y, m, mode):
    if mode == "closed":
        return tf.closed_jump(coord, x, y, m)
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return k_integral_numeric(tf, x, y, coord, m)
    xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(xb.shape)
    for i in np.ndindex(xb.shape):
        out[i] = k_integral_numeric(tf, xb[i], yb[i], coord, m)
    return out


def apply_generator(tf, x, y, p, mode="closed", terms=False):
    """𝓛g at (x, y); with terms=True returns the dict of the eight summands.

    Channels with a zero coefficient contribute exactly 0 and their jump
    integral is never evaluated.
    """
    if mode not in ("closed", "numeric"):
        raise DomainError(f"mode must be closed or numeric, not {mode!r}")
    g, gx, gy, gxx, gyy = tf.eval(x, y)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    zero = 0.0 * (x + y)
    t = {
        "interaction_x": p.a1 * x ** p.theta1 * y ** p.kappa1 * gx,
        "interaction_y": p.a2 * y ** p.theta2 * x ** p.kappa2 * gy,
        "drift_x": -p.b10 * x ** p.r10 * gx if p.b10 else zero,
        "drift_y": -p.b20 * y ** p.r20 * gy if p.b20 else zero,
        "diffusion_x": p.b11 * x ** p.r11 * gxx if p.b11 else zero,
        "diffusion_y": p.b21 * y ** p.r21 * gyy if p.b21 else zero,
        "jump_x": zero,
        "jump_y": zero,
    }
    if p.b12:
        t["jump_x"] = p.b12 * x ** p.r12 * _jump(tf, 1, x, y, StableMeasure(p.alpha1), mode)
    if p.b22:
        t["jump_y"] = p.b22 * y ** p.r22 * _jump(tf, 2, x, y, StableMeasure(p.alpha2), mode)
    if terms:
        return {k: (float(v) if np.ndim(v) == 0 else np.asarray(v)) for k, v in t.items()}
    total = zero
    for k in TERM_NAMES:
        total = total + t[k]
    return float(total) if np.ndim(total) == 0 else total


def supports_closed(tf, p):
    try:
        apply_generator(tf, 0.5, 0.5, p, mode="closed")
    except ClosedFormUnavailable:
        return False
    return True


# --------------------------------------------------------- bound certification

@dataclass
class BoundReport:
    satisfied: bool
    constant: float
    witness: dict
    grid: dict
    notes: list = field(default_factory=list)

    def to_dict(self):
        d = asdict(self)
        d["grid"] = dict(d["grid"], notes=d.pop("notes"))
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


def _grid(c, n, decades):
    return c * np.logspace(-decades, 0.0, n)


def _evaluate(tf, p, xs, mode):
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    L = np.asarray(apply_generator(tf, X, Y, p, mode=mode), float)
    G = np.asarray(tf.eval(X, Y)[0], float)
    return X, Y, L, G


def verify_drift_bound(tf, p, c, direction="upper", n=64, decades=6.0, mode="auto",
                       constant=None, edge_rtol=1e-9):
    """Certify 𝓛g ≤ C g (upper) or 𝓛g ≥ d g (lower) on the grid of (0, c]².

    upper: C is the maximum of 𝓛g/g over the nodes (g must be positive).
    lower: d is the minimum of 𝓛g/g over nodes with g > 0; the nodes with
    g ≤ 0 must still satisfy 𝓛g ≥ d g and d must be positive.
    The grid is n×n log-spaced over [c·10^-decades, c]². A second pass adds
    one more decade towards 0; if the ratio on the added strip exceeds the
    extreme found on the main grid, the bound is not uniform up to the
    boundary and the report is unsatisfied.
    If `constant` is given it is the target C (upper) or d (lower).
    """
    if direction not in ("upper", "lower"):
        raise DomainError("direction must be upper or lower")
    if mode == "auto":
        mode = "closed" if supports_closed(tf, p) else "numeric"
    xs = _grid(c, n, decades)
    X, Y, L, G = _evaluate(tf, p, xs, mode)
    grid = {"lo": float(xs[0]), "hi": float(xs[-1]), "n": int(n), "spacing": "log",
            "direction": direction, "mode": mode}
    notes = []

    def node(i, rhs):
        return {"x": float(X[i]), "y": float(Y[i]), "lhs": float(L[i]), "rhs": float(rhs)}

    if not np.all(np.isfinite(L)) or not np.all(np.isfinite(G)):
        i = np.unravel_index(np.argmax(~np.isfinite(L) | ~np.isfinite(G)), L.shape)
        return BoundReport(False, math.nan, node(i, G[i]), grid, ["non-finite generator value"])

    xs2 = _grid(c, n + int(round(n / decades)), decades + 1.0)
    X2, Y2, L2, G2 = _evaluate(tf, p, xs2, mode)
    strip = (X2 < xs[0]) | (Y2 < xs[0])
    L2, G2 = L2[strip], G2[strip]

    if direction == "upper":
        if np.any(G <= 0):
            i = np.unravel_index(np.argmin(G), G.shape)
            return BoundReport(False, math.nan, node(i, 0.0), grid, ["g not positive on the box"])
        R = L / G
        i = np.unravel_index(np.argmax(R), R.shape)
        C = float(R[i])
        C2 = float(np.max(L2 / G2)) if np.all(G2 > 0) else math.inf
        edge_ok = C2 <= C + edge_rtol * max(1.0, abs(C))
        grid["extended_constant"] = C2
        ok = edge_ok and (constant is None or C <= constant)
        if not edge_ok:
            notes.append("ratio keeps growing towards the boundary")
        return BoundReport(bool(ok), C, node(i, C * G[i]), grid, notes)

    pos = G > 0
    if not np.any(pos):
        return BoundReport(False, math.nan, node((0, 0), 0.0), grid, ["g never positive on the box"])
    R = np.where(pos, L / np.where(pos, G, 1.0), np.inf)
    i = np.unravel_index(np.argmin(R), R.shape)
    d = float(R[i])
    witness = node(i, d * G[i])
    bad = ~pos & (L < d * G)
    pos2 = G2 > 0
    d2 = float(np.min(L2[pos2] / G2[pos2])) if np.any(pos2) else math.inf
    edge_ok = d2 >= d - edge_rtol * max(1.0, abs(d))
    grid["extended_constant"] = d2
    if np.any(bad):
        j = np.unravel_index(np.argmax(bad), bad.shape)
        witness = node(j, d * G[j])
        notes.append("inequality fails where g <= 0")
    if not edge_ok:
        notes.append("ratio keeps decreasing towards the boundary")
    if d <= 0:
        notes.append("no positive d")
    ok = d > 0 and not np.any(bad) and edge_ok and (constant is None or d >= constant)
    return BoundReport(bool(ok), d, witness, grid, notes)


# ------------------------------------------------ LinearCap (v, d) scan

@dataclass(frozen=True)
class CapScan:
    rho: float
    v: float
    d: float
    c1: float
    k: float  # ½ b1 (1-ρ) min(1, c1(ρ))


def linearcap_scan(p, rho=None, n=400):
    """Find ρ, v, d for g = v - x^ρ - y in the regime r1 ≤ θ1-1, r1 < 0.

    With K = ½ b1 (1-ρ) min(1, c1(ρ)) the requirements on 0 < x, y ≤ v are
        K x^(r1+1-θ1) - a1 y^κ1 ≥ 0   and   K ρ x^(ρ+r1) - a2 ≥ d v.
    Both are worst at x = y = v. We scan v over a log grid below 1 and
    take the largest v with K ρ v^(ρ+r1) ≥ 2 a2 (so d ≥ a2/v), falling back
    to the largest v with a positive second expression.
    """
    dp = derive_exponents(p)
    r1, b1 = dp.r1, dp.b1
    if not (r1 <= p.theta1 - 1 and r1 < 0):
        raise HypothesisError("linearcap_scan needs r1 <= theta1-1 and r1 < 0")
    cap = min(1.0, -r1)
    if rho is None:
        rho = 0.5 * cap
    if not 0 < rho < cap:
        raise HypothesisError(f"rho must lie in (0, {cap})")
    c1 = c_rho(StableMeasure(p.alpha1), rho)
    k = 0.5 * b1 * (1 - rho) * min(1.0, c1)
    e = r1 + 1 - p.theta1
    vs = np.logspace(-12, 0, n)[:-1][::-1]

    def first(v):
        return k * v ** e - p.a1 * v ** p.kappa1

    def second(v):
        return k * rho * v ** (rho + r1) - p.a2

    pick = None
    for want in (p.a2, 0.0):
        for v in vs:
            if first(v) >= 0 and second(v) > want:
                pick = float(v)
                break
        if pick is not None:
            break
    if pick is None:
        raise HypothesisError("no v in [1e-12, 1) satisfies the scan inequalities")
    v = pick
    d = second(v) / v
    # grid confirmation over (0, v]²
    xs = v * np.logspace(-6, 0, 64)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    if np.any(k * X ** e - p.a1 * Y ** p.kappa1 < 0) or np.any(second(xs) < d * v * (1 - 1e-12)):
        raise HypothesisError("scan inequalities fail on the confirmation grid")
    return CapScan(rho=float(rho), v=v, d=float(d), c1=float(c1), k=float(k))


def linearcap_for(p, rho=None):
    s = linearcap_scan(p, rho)
    return LinearCap(v=s.v, rho=s.rho), s
