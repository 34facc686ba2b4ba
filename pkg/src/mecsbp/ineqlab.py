"""Numerical laboratory for the auxiliary inequalities behind the drift estimates.

Covers Young-type inequalities, power-sum comparisons, "there is a box
(0,c]² on which ..." statements (operationalised as bounded bisection on
a verification grid), explicit δ0 sandwiches for the weighted-sum
inequalities, and the lower bounds for the integral of

    K(v, z) = -(v[(1+z)^ρ1 - 1] + 1)^ρ + 1 + z v ρ ρ1.

Grids and random clouds certify finitely many points only.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from .errors import HypothesisError, PreconditionError
from .model import derive_exponents
from .stablejump import c_rho, mu_integral

SLACK = 1e-12
BISECT_ITERS = 60
CLOUD_LO, CLOUD_HI = 1e-6, 1e2


@dataclass
class IneqReport:
    lemma: str
    trials: int
    satisfied: bool
    worst_margin: float
    witness: dict
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, default=float)


def _loguniform(rng, n, lo=CLOUD_LO, hi=CLOUD_HI):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), n))


def _report(lemma, margins, points, details=None):
    """Build a report from relative margins (>= -SLACK means the inequality held)."""
    margins = np.asarray(margins, float)
    i = int(np.argmin(margins))
    w = {k: float(np.asarray(v).ravel()[i]) for k, v in points.items()}
    worst = float(margins[i])
    return IneqReport(lemma, int(margins.size), bool(worst >= -SLACK), worst, w, details or {})


def _rel(lhs, rhs):
    lhs = np.asarray(lhs, float)
    rhs = np.asarray(rhs, float)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
    return (lhs - rhs) / scale


# ----------------------------------------------------------------- Young & co

def young_i(u, v, p):
    """Both Young margins (u+v - p^(1/p) q^(1/q) u^(1/p) v^(1/q), u/p+v/q - u^(1/p) v^(1/q))."""
    q = p / (p - 1.0)
    prod = u ** (1.0 / p) * v ** (1.0 / q)
    return (u + v) - p ** (1.0 / p) * q ** (1.0 / q) * prod, u / p + v / q - prod


def box_holds(c1, p1, c2, p2, c3, p3, p4, c, n=64, decades=6.0):
    """c1 x^p1 + c2 y^p2 ≥ c3 x^p3 y^p4 at every node of the log grid of (0,c)²."""
    xs = c * (1 - 1e-12) * np.logspace(-decades, 0, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    return bool(np.all(c1 * X ** p1 + c2 * Y ** p2 >= c3 * X ** p3 * Y ** p4))


def largest_box(pred, c_max=1.0):
    """Largest c ≤ c_max with pred(c), by decade descent then log bisection.

    Returns (c, iterations) or (None, iterations) when no c ≥ 10^-60 c_max works.
    """
    if pred(c_max):
        return c_max, 0
    good = None
    lo_exp = hi_exp = 0.0
    it = 0
    for k in range(1, BISECT_ITERS + 1):
        it = k
        if pred(c_max * 10.0 ** (-k)):
            good, lo_exp, hi_exp = c_max * 10.0 ** (-k), -float(k), -float(k - 1)
            break
    if good is None:
        return None, it
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo_exp + hi_exp)
        if pred(c_max * 10.0 ** mid):
            lo_exp = mid
        else:
            hi_exp = mid
        if hi_exp - lo_exp < 1e-10:
            break
    return c_max * 10.0 ** lo_exp, it


def _iii_box(c1, p1, c2, p2, c3, p3, p4):
    if min(p1, p2, p3, p4, c1, c2, c3) <= 0:
        raise PreconditionError("variant iii needs p1..p4 > 0 and c1..c3 > 0")
    if not p3 / p1 + p4 / p2 > 1:
        raise PreconditionError("variant iii needs p3/p1 + p4/p2 > 1")
    c, _ = largest_box(lambda c: box_holds(c1, p1, c2, p2, c3, p3, p4, c), 1.0 - 1e-12)
    return c


def young_check(variant, inputs=None, trials=10_000, rng=None):
    """Check one of the elementary inequalities on given inputs or random trials.

    variant i:      u+v ≥ p^(1/p) q^(1/q) u^(1/p) v^(1/q) and u/p+v/q ≥ u^(1/p) v^(1/q)
    variant ii_le1: x^p + y^p ≥ (x+y)^p, 0 < p ≤ 1
    variant ii_gt1: x^p + y^p ≥ 2^(1-p) (x+y)^p, p > 1
    variant iii:    c1 x^p1 + c2 y^p2 ≥ c3 x^p3 y^p4 on (0,c)² when p3/p1 + p4/p2 > 1;
                    reports the largest c found and re-checks it at random points.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    if variant == "i":
        if inputs is not None:
            u, v, p = (np.atleast_1d(float(inputs[k])) for k in ("u", "v", "p"))
        else:
            p = np.exp(rng.uniform(0.0, math.log(20.0), trials)) + 1e-9
            u, v = _loguniform(rng, trials), _loguniform(rng, trials)
            zeros = rng.random(trials) < 0.02
            u = np.where(zeros, 0.0, u)
        if np.any(p <= 1):
            raise PreconditionError("variant i needs p > 1")
        q = p / (p - 1.0)
        prod = u ** (1.0 / p) * v ** (1.0 / q)
        m1 = _rel(u + v, p ** (1.0 / p) * q ** (1.0 / q) * prod)
        m2 = _rel(u / p + v / q, prod)
        return _report("young_i", np.minimum(m1, m2), {"u": u, "v": v, "p": p})
    if variant in ("ii_le1", "ii_gt1"):
        if inputs is not None:
            x, y, p = (np.atleast_1d(float(inputs[k])) for k in ("x", "y", "p"))
        else:
            x, y = _loguniform(rng, trials), _loguniform(rng, trials)
            p = rng.uniform(1e-3, 1.0, trials) if variant == "ii_le1" else 1.0 + np.exp(rng.uniform(-6, 2, trials))
        if variant == "ii_le1":
            if np.any((p <= 0) | (p > 1)):
                raise PreconditionError("ii_le1 needs 0 < p <= 1")
            m = _rel(x ** p + y ** p, (x + y) ** p)
        else:
            if np.any(p <= 1):
                raise PreconditionError("ii_gt1 needs p > 1")
            m = _rel(x ** p + y ** p, 2.0 ** (1.0 - p) * (x + y) ** p)
        return _report("young_" + variant, m, {"x": x, "y": y, "p": p})
    if variant == "iii":
        if inputs is not None:
            inst = [tuple(float(inputs[k]) for k in ("c1", "p1", "c2", "p2", "c3", "p3", "p4"))]
        else:
            inst = []
            while len(inst) < max(1, trials // 100):
                p1, p2 = np.exp(rng.uniform(-1.5, 1.5, 2))
                p3, p4 = np.exp(rng.uniform(-1.5, 1.5, 2))
                if p3 / p1 + p4 / p2 <= 1.05:
                    continue
                c1, c2, c3 = np.exp(rng.uniform(-2, 2, 3))
                inst.append((c1, p1, c2, p2, c3, p3, p4))
        per = max(1, trials // len(inst))
        margins, pts, cs = [], {"x": [], "y": [], "c": []}, []
        for c1, p1, c2, p2, c3, p3, p4 in inst:
            c = _iii_box(c1, p1, c2, p2, c3, p3, p4)
            if c is None:
                return IneqReport("young_iii", len(inst), False, -math.inf, {"instance": [c1, p1, c2, p2, c3, p3, p4]},
                                  {"reason": "no box found within the iteration budget"})
            cs.append(c)
            x = c * (1 - 1e-12) * np.exp(rng.uniform(math.log(1e-6), 0.0, per))
            y = c * (1 - 1e-12) * np.exp(rng.uniform(math.log(1e-6), 0.0, per))
            margins.append(_rel(c1 * x ** p1 + c2 * y ** p2, c3 * x ** p3 * y ** p4))
            pts["x"].append(x)
            pts["y"].append(y)
            pts["c"].append(np.full(per, c))
        rep = _report("young_iii", np.concatenate(margins), {k: np.concatenate(v) for k, v in pts.items()},
                      {"c_min": float(min(cs)), "instances": len(inst)})
        if inputs is not None:
            rep.details["c"] = cs[0]
        return rep
    raise PreconditionError(f"unknown variant {variant!r}")


# --------------------------------------------------------------- box lemmas

def _lemma71_form(e, co):
    def F(X, Y):
        lhs = co["c1"] * X ** (e["r1"] + e["rho1"]) + co["c2"] * Y ** (e["r2"] + e["rho2"])
        rhs = (co["c3"] * X ** (e["theta1"] - 1 + e["rho1"]) * Y ** e["kappa1"]
               + co["c4"] * Y ** (e["theta2"] - 1 + e["rho2"]) * X ** e["kappa2"])
        return lhs, rhs
    return F


def _lemma32_form(e, co):
    def F(X, Y):
        lhs = (co["c1"] * X ** (e["theta1"] - 1 - e["rho1"]) * Y ** e["kappa1"]
               + co["c2"] * Y ** (e["theta2"] - 1 - e["rho2"]) * X ** e["kappa2"])
        rhs = co["c3"] * Y ** (e["r2"] - e["rho2"])
        return lhs, rhs
    return F


def check_hypotheses_71(e):
    r1, r2, t1, t2, k1, k2 = (e[k] for k in ("r1", "r2", "theta1", "theta2", "kappa1", "kappa2"))
    rho1, rho2 = e["rho1"], e["rho2"]
    if not (t1 - 1 < r1 < 0 and t2 - 1 < r2 < 0):
        raise HypothesisError("need theta_i - 1 < r_i < 0")
    if not (rho1 >= 1 and rho2 >= 1):
        raise HypothesisError("need rho1, rho2 >= 1")
    left, mid, right = (r1 + 1 - t1) / k1, (r1 + rho1) / (r2 + rho2), k2 / (r2 + 1 - t2)
    if not (left < mid < right):
        raise HypothesisError(f"ratio chain fails: {left} < {mid} < {right}")
    return {"left": left, "mid": mid, "right": right}


def check_hypotheses_32(e):
    r2, t1, t2, k1, k2 = (e[k] for k in ("r2", "theta1", "theta2", "kappa1", "kappa2"))
    rho1, rho2 = e["rho1"], e["rho2"]
    if not r2 > t2 - 1:
        raise HypothesisError("need r2 > theta2 - 1")
    if not (rho1 > max(t1, t2) and rho2 > max(t1, t2)):
        raise HypothesisError("need rho1, rho2 > max(theta1, theta2)")
    lhs = (r2 + 1 - t2) / k2
    rhs = (1 + rho2 + k1 - t2) / (1 + rho1 + k2 - t1)
    if not lhs > rhs:
        raise HypothesisError(f"ratio inequality fails: {lhs} <= {rhs}")
    q = (1 + rho1 + k2 - t1) / k2
    p = q / (q - 1)
    delta = (r2 + 1 - t2) - (1 + rho2 + k1 - t2) / q
    return {"lhs": lhs, "rhs": rhs, "p": p, "q": q, "delta": delta,
            "young_const": p ** (1 / p) * q ** (1 / q)}


def find_box_constant(lemma, exponents, coefficients, n=64, decades=6.0, rng=None):
    """Largest c ≤ 1 such that the lemma's conclusion holds on the grid of (0, c]².

    lemma "7.1": c1 x^(r1+ρ1) + c2 y^(r2+ρ2) - c3 x^(θ1-1+ρ1) y^κ1 - c4 y^(θ2-1+ρ2) x^κ2 ≥ 0
    lemma "3.2": c1 x^(θ1-1-ρ1) y^κ1 + c2 y^(θ2-1-ρ2) x^κ2 - c3 y^(r2-ρ2) ≥ 0
    The hypotheses are checked first (HypothesisError if they fail).
    """
    e = {k: float(v) for k, v in exponents.items()}
    co = {k: float(v) for k, v in coefficients.items()}
    if any(v <= 0 for v in co.values()):
        raise PreconditionError("coefficients must be positive")
    if lemma == "7.1":
        hyp = check_hypotheses_71(e)
        F = _lemma71_form(e, co)
    elif lemma == "3.2":
        hyp = check_hypotheses_32(e)
        F = _lemma32_form(e, co)
    else:
        raise PreconditionError(f"unknown lemma {lemma!r}")

    def pred(c):
        xs = c * np.logspace(-decades, 0, n)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        lhs, rhs = F(X, Y)
        return bool(np.all(lhs >= rhs))

    c, iters = largest_box(pred)
    if c is None:
        return IneqReport(f"box_{lemma}", n * n, False, -math.inf, {},
                          {"hypotheses": hyp, "reason": "bisection budget exhausted", "iterations": iters})
    xs = c * np.logspace(-decades, 0, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    lhs, rhs = F(X, Y)
    rep = _report(f"box_{lemma}", _rel(lhs, rhs).ravel(), {"x": X.ravel(), "y": Y.ravel()},
                  {"c": c, "hypotheses": hyp, "grid": {"n": n, "decades": decades}})
    return rep


# ---------------------------------------------------------- δ0 sandwiches

def _close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def delta0_interval(lemma, p, **aux):
    """Admissible δ0 interval (lo, hi, strict, info) for lemmas 5.1, 5.2, 5.3."""
    dp = derive_exponents(p)
    a1, a2, b1, b2 = p.a1, p.a2, dp.b1, dp.b2
    r1, r2 = dp.r1, dp.r2
    t1, t2, k1, k2 = p.theta1, p.theta2, p.kappa1, p.kappa2
    if lemma == "5.3":
        if not (r1 > t1 - 1 and r2 > t2 - 1):
            raise HypothesisError("need r_i > theta_i - 1")
        crit = (a1 / b1) ** (1 / (r1 + 1 - t1)) * (a2 / b2) ** (1 / k2)
        if not crit >= 1:
            raise HypothesisError(f"(a1/b1)^(1/(r1+1-θ1)) (a2/b2)^(1/κ2) = {crit} < 1")
        R = (r1 + 1 - t1) / k1
        if not _close(R, k2 / (r2 + 1 - t2)):
            raise HypothesisError("needs the critical equality (r1+1-θ1)(r2+1-θ2) = κ1κ2")
        rho2 = float(aux.get("rho2", 1.0 + max(t1, t2)))
        rho1 = aux.get("rho1")
        rho1 = R * (1 + rho2 + k1 - t2) - 1 - k2 + t1 if rho1 is None else float(rho1)
        if not _close((1 + rho1 + k2 - t1) / (1 + rho2 + k1 - t2), R):
            raise HypothesisError("rho1, rho2 do not satisfy the critical ratio equality")
        if not (rho1 > max(t1, t2) and rho2 > max(t1, t2)):
            raise HypothesisError("need rho1, rho2 > max(theta1, theta2)")
        p1 = (1 + rho2 + k1 - t2) / (1 + rho2 - t2)
        q1 = (1 + rho2 + k1 - t2) / k1
        p2 = (1 + rho1 + k2 - t1) / k2
        q2 = (1 + rho1 + k2 - t1) / (1 + rho1 - t1)
        lo = (b2 * rho2) ** p2 / ((a2 * rho2) ** (p2 / q2) * a1 * rho1 * p2 / q1)
        hi = (a1 * rho1) ** (q1 / p1) * a2 * rho2 * (q1 / p2) / (b1 * rho1) ** q1
        return lo, hi, False, {"rho1": rho1, "rho2": rho2, "p1": p1, "q1": q1, "p2": p2, "q2": q2}
    if lemma == "5.2":
        eps0 = float(aux.get("eps0", 0.1))
        rho2 = float(aux.get("rho2", 2.0))
        rho = aux.get("rho")
        if not 0 < eps0 < 1:
            raise HypothesisError("need eps0 in (0,1)")
        if not (t1 - 1 < r1 < 0 and t2 - 1 < r2 < 0):
            raise HypothesisError("need theta_i - 1 < r_i < 0")
        R = (r1 + 1 - t1) / k1
        if not _close(R, k2 / (r2 + 1 - t2)):
            raise HypothesisError("needs the critical equality (r1+1-θ1)(r2+1-θ2) = κ1κ2")
        rho1 = aux.get("rho1")
        rho1 = R * (r2 + rho2) - r1 if rho1 is None else float(rho1)
        if not _close((r1 + rho1) / (r2 + rho2), R):
            raise HypothesisError("rho1, rho2 do not satisfy the ratio equality")
        if not (rho1 > 1 and rho2 > 1):
            raise HypothesisError("need rho1, rho2 > 1")
        rho = 0.5 * min(1 / rho1, 1 / rho2) if rho is None else float(rho)
        if not 0 < rho < min(1 / rho1, 1 / rho2):
            raise HypothesisError("need 0 < rho < min(1/rho1, 1/rho2)")
        e1 = 1 / (r1 + 1 - t1)
        pre = (a1 / ((1 - eps0) * b1)) ** e1 * (a2 / ((1 - eps0) * b2)) ** (1 / k2)
        bt1 = (1 - eps0) * (1 - rho1 * rho) * b1
        bt2 = (1 - eps0) * (1 - rho2 * rho) * b2
        crit = (a1 / bt1) ** e1 * (a2 / bt2) ** (1 / k2)
        if not (pre < 1 and crit < 1):
            raise HypothesisError(f"subcriticality fails: {pre} and {crit} must be < 1")
        p1 = (r1 + rho1) / (t1 - 1 + rho1)
        q1 = (r2 + rho2) / k1
        p2 = (r1 + rho1) / k2
        q2 = (r2 + rho2) / (t2 - 1 + rho2)
        lo = (a2 * rho2) ** p2 / ((bt2 * rho2) ** (p2 / q2) * bt1 * rho1 * p2 / q1)
        hi = (bt1 * rho1) ** (q1 / p1) * bt2 * rho2 * (q1 / p2) / (a1 * rho1) ** q1
        return lo, hi, True, {"rho1": rho1, "rho2": rho2, "rho": rho, "eps0": eps0,
                              "b1_tilde": bt1, "b2_tilde": bt2, "p1": p1, "q1": q1, "p2": p2, "q2": q2}
    if lemma == "5.1":
        if not (p.b12 == 0 and p.b22 == 0):
            raise HypothesisError("needs b12 = b22 = 0")
        e = (p.r10 - 1, p.r11 - 2, p.r20 - 1, p.r21 - 2)
        if not all(_close(v, e[0]) for v in e):
            raise HypothesisError("needs r10-1 = r11-2 = r20-1 = r21-2")
        if not (_close(t1, t2) and _close(k1, k2)):
            raise HypothesisError("needs theta1 = theta2 and kappa1 = kappa2")
        r, th, ka = e[0], t1, k1
        if not r > th - 1:
            raise HypothesisError("needs r > theta - 1")
        if not _close((r + 1 - th) ** 2, ka * ka):
            raise HypothesisError("needs the critical equality r+1-θ = κ")
        if not a1 * a2 >= b1 * b2:
            raise HypothesisError("needs a1 a2 >= b1 b2")
        pp = (1 + ka - th) / (1 - th)
        qq = pp / (pp - 1)
        lo = b2 ** qq / (a1 * a2 ** (qq / pp))
        hi = a1 ** (qq / pp) * a2 / b1 ** qq
        return lo, hi, False, {"p": pp, "q": qq, "r": r, "theta": th, "kappa": ka}
    raise PreconditionError(f"unknown lemma {lemma!r}")


def delta0_conclusion(lemma, p, d0, info, x, y):
    """(lhs, rhs) of the lemma's conclusion at points (x, y)."""
    dp = derive_exponents(p)
    a1, a2, b1, b2 = p.a1, p.a2, dp.b1, dp.b2
    r1, r2 = dp.r1, dp.r2
    t1, t2, k1, k2 = p.theta1, p.theta2, p.kappa1, p.kappa2
    if lemma == "5.3":
        rho1, rho2 = info["rho1"], info["rho2"]
        lhs = a1 * rho1 * d0 * x ** (t1 - 1 - rho1) * y ** k1 + a2 * rho2 * x ** k2 * y ** (t2 - 1 - rho2)
        rhs = b1 * rho1 * d0 * x ** (r1 - rho1) + b2 * rho2 * y ** (r2 - rho2)
        return lhs, rhs
    if lemma == "5.2":
        rho1, rho2, bt1, bt2 = info["rho1"], info["rho2"], info["b1_tilde"], info["b2_tilde"]
        lhs = d0 * bt1 * rho1 * x ** (r1 + rho1) + bt2 * rho2 * y ** (r2 + rho2)
        rhs = d0 * a1 * rho1 * x ** (t1 + rho1 - 1) * y ** k1 + a2 * rho2 * y ** (t2 + rho2 - 1) * x ** k2
        return lhs, rhs
    if lemma == "5.1":
        th, ka = info["theta"], info["kappa"]
        lhs = d0 * a1 * y ** (1 + ka - th) + a2 * x ** (1 + ka - th)
        rhs = d0 * b1 * x ** ka * y ** (1 - th) + b2 * y ** ka * x ** (1 - th)
        return lhs, rhs
    raise PreconditionError(f"unknown lemma {lemma!r}")


def find_delta0(lemma, p, trials=10_000, rng=None, **aux):
    """δ0 at the log-midpoint of the admissible interval, checked on a random cloud.

    Points are log-uniform on [1e-6, 1e2]²; the three conclusions are
    global statements on (0, ∞)².
    """
    rng = np.random.default_rng(0) if rng is None else rng
    lo, hi, strict, info = delta0_interval(lemma, p, **aux)
    empty = lo >= hi if strict else lo > hi * (1 + 1e-12)
    if empty:
        raise HypothesisError(f"empty delta0 interval [{lo}, {hi}]")
    d0 = math.sqrt(lo * hi)
    x, y = _loguniform(rng, trials), _loguniform(rng, trials)
    lhs, rhs = delta0_conclusion(lemma, p, d0, info, x, y)
    rep = _report(f"delta0_{lemma}", _rel(lhs, rhs), {"x": x, "y": y},
                  dict(info, delta0=d0, interval=[lo, hi], strict=strict))
    return rep


# ------------------------------------------------------------ K(v,z) bounds

def _log_inner(v, z, rho1):
    # log(v[(1+z)^ρ1 - 1] + 1) = log(v (1+z)^ρ1 + (1-v)), overflow-free
    with np.errstate(divide="ignore"):
        return np.logaddexp(np.log(v) + rho1 * np.log1p(z), np.log(1.0 - v))


def kvz(v, z, rho1, rho):
    return -np.exp(rho * _log_inner(v, z, rho1)) + 1 + z * v * rho * rho1


def kvz_d2(v, z, rho1, rho):
    la, lz = _log_inner(v, z, rho1), np.log1p(z)
    return (rho * (1 - rho) * rho1 ** 2 * v * v * np.exp((2 * rho1 - 2) * lz + (rho - 2) * la)
            - rho * rho1 * (rho1 - 1) * v * np.exp((rho1 - 2) * lz + (rho - 1) * la))


def kvz_integral(m, v, rho1, rho):
    """∫_0^∞ K(v, z) μ(dz) by quadrature."""
    if v == 0:
        return 0.0
    return mu_integral(lambda z: kvz(v, z, rho1, rho), lambda z: kvz_d2(v, z, rho1, rho),
                       m.alpha, growth=1.0, scale=v * rho * rho1)


def d1_delta(m, rho1, delta, proof_exponent=False):
    """∫_0^δ z² (1+z)^(ρ1-2) μ(dz) ((1+z)^(ρ1-1) with proof_exponent=True)."""
    e = rho1 - 1 if proof_exponent else rho1 - 2
    val, _ = integrate.quad(lambda z: m.c_norm * z ** (1 - m.alpha) * (1 + z) ** e, 0, delta,
                            epsabs=0, epsrel=1e-11, limit=200)
    return val


_GL30 = np.polynomial.legendre.leggauss(30)


def d2_delta(m, rho, rho1, delta):
    """∫_δ^∞ z² μ(dz) ∫_0^1 (1+uz)^(ρρ1-2) du, both integrals by quadrature."""
    s = rho * rho1 - 2
    u = 0.5 * (_GL30[0] + 1)
    w = 0.5 * _GL30[1]

    def inner(z):
        return float(np.dot(w, (1 + u * z) ** s))

    # z = δ/t maps [δ, ∞) to (0, 1]; z² μ(dz) = c δ^(2-α) t^(α-3) dt
    val, _ = integrate.quad(lambda t: inner(delta / max(t, 1e-300)) * t ** (m.alpha - 3) * delta ** (2 - m.alpha),
                            0, 1, epsabs=0, epsrel=1e-10, limit=400)
    return m.c_norm * val


def kvz_bounds_check(m, rho1, rho, v_grid, mode="lemma_ii", delta=8.0, proof_exponent=False):
    """Compare ∫K(v,·)dμ with the lower bounds of the K(v,z) lemma.

    lemma_ii: ρρ1(1-ρρ1) c(ρρ1) v² - ρρ1(ρ1-1)[v(1-v) d1δ + d2δ v^ρ]
    lemma_i:  ρ(1-ρ) ρ1² v² d1 - ρρ1(ρ1-1) v d̃1, with d1 the (0,1] part of
              c(ρρ1) and d̃1 the smallest constant that works on the grid;
              passes when that constant is not driven by the smallest v.
    """
    v_grid = np.asarray(v_grid, float)
    if np.any((v_grid < 0) | (v_grid > 1)):
        raise PreconditionError("v must lie in [0, 1]")
    rr = rho * rho1
    if not 0 < rr < 1:
        raise PreconditionError("need 0 < rho*rho1 < 1")
    vals = np.array([kvz_integral(m, float(v), rho1, rho) for v in v_grid])
    if mode == "lemma_ii":
        if not rho1 > 1:
            raise PreconditionError("lemma_ii needs rho1 > 1")
        d1 = d1_delta(m, rho1, delta, proof_exponent)
        d2 = d2_delta(m, rho, rho1, delta)
        c = c_rho(m, rr)
        rhs = rr * (1 - rr) * c * v_grid ** 2 - rr * (rho1 - 1) * (v_grid * (1 - v_grid) * d1 + d2 * v_grid ** rho)
        margin = (vals - rhs) / np.maximum(np.abs(vals) + np.abs(rhs), 1e-300)
        return _report("kvz_ii", margin, {"v": v_grid, "lhs": vals, "rhs": rhs},
                       {"delta": delta, "d1": d1, "d2": d2, "c": c, "rho1": rho1, "rho": rho})
    if mode == "lemma_i":
        if not rho1 >= 2:
            raise PreconditionError("lemma_i needs rho1 >= 2")
        d1 = _d1_small(m, rr)
        pos = v_grid > 0
        need = np.full(v_grid.shape, -np.inf)
        need[pos] = (rho * (1 - rho) * rho1 ** 2 * v_grid[pos] ** 2 * d1 - vals[pos]) / (rr * (rho1 - 1) * v_grid[pos])
        dt1 = max(float(np.max(need)), 0.0) + 1e-15
        rhs = rho * (1 - rho) * rho1 ** 2 * v_grid ** 2 * d1 - rr * (rho1 - 1) * v_grid * dt1
        order = np.argsort(v_grid[pos])
        vs, nd = v_grid[pos][order], need[pos][order]
        k = max(1, len(vs) // 10)
        edge_ok = bool(np.max(nd[:k]) <= np.max(nd[k:]) + 1e-12 * max(1.0, abs(np.max(nd[k:])))) if len(vs) > k else True
        margin = (vals - rhs) / np.maximum(np.abs(vals) + np.abs(rhs), 1e-300)
        rep = _report("kvz_i", margin, {"v": v_grid, "lhs": vals, "rhs": rhs},
                      {"d1": d1, "d1_tilde": dt1, "edge_ok": edge_ok, "rho1": rho1, "rho": rho})
        rep.satisfied = rep.satisfied and edge_ok
        return rep
    raise PreconditionError(f"unknown mode {mode!r}")


def _d1_small(m, rr):
    """∫_0^1 z² μ(dz) ∫_0^1 (1+zu)^(ρρ1-2)(1-u) du."""
    u = 0.5 * (_GL30[0] + 1)
    w = 0.5 * _GL30[1] * (1 - u)
    val, _ = integrate.quad(lambda z: z ** (1 - m.alpha) * float(np.dot(w, (1 + z * u) ** (rr - 2))),
                            0, 1, epsabs=0, epsrel=1e-11, limit=200)
    return m.c_norm * val


def rho0_scan(m, rho_tilde, rho1_values=(4, 8, 16, 32), v_grid=None):
    """Smallest ρ1 in the list for which the lemma_i check passes (or None)."""
    v_grid = np.logspace(-6, 0, 25) if v_grid is None else v_grid
    results = {}
    for r1 in rho1_values:
        rep = kvz_bounds_check(m, float(r1), rho_tilde / r1, v_grid, mode="lemma_i")
        results[float(r1)] = rep
        if rep.satisfied:
            return float(r1), results
    return None, results


def default_kvz_grid(n=10):
    return np.linspace(0.1, 1.0, n)


__all__ = [
    "IneqReport", "young_check", "find_box_constant", "find_delta0", "delta0_interval",
    "kvz_bounds_check", "kvz_integral", "d1_delta", "d2_delta", "rho0_scan", "largest_box",
    "young_i",
]
