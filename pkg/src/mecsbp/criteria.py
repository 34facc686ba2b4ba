"""Hypothesis checklists for the extinction / non-extinction results and a verdict.

Every comparison goes through one three-way comparator with relative
tolerance TOL, so a strict inequality and its non-strict complement can
never both hold. A comparison falling inside the tolerance band is read
as equality and leaves a "near-critical" note.
"""

import json
from dataclasses import dataclass, field

from .errors import ConsistencyError
from .model import derive_exponents

TOL = 1e-12
TIE_TOL = 1e-12

NON_EXTINCTION = ("Prop 1.2", "Thm 1.1a(i)", "Thm 1.1a(ii)", "Thm 1.1", "Thm 1.4(i)", "Thm 1.4(ii)",
                  "Thm 1.4(ii) equality")
EXTINCTION = ("Thm 1.2a(i)", "Thm 1.2a(ii)", "Thm 1.2(i)", "Thm 1.2(ii)", "Thm 1.2(iii)", "Thm 1.4bb")
VERDICTS = ("NonExtinctionAS", "ExtinctionPositiveProb", "Undetermined")


class _Cmp:
    """Comparator that records each comparison and near-critical notes."""

    __slots__ = ("notes", "log")

    def __init__(self):
        self.notes = []
        self.log = None

    def sign(self, a, b, label):
        d = a - b
        if d != d:  # nan: undefined comparison
            self.notes.append(f"{label}: undefined (nan)")
            return None
        m = abs(a)
        if abs(b) > m:
            m = abs(b)
        tol = TOL * m if m > 1.0 else TOL
        if d > tol:
            return 1
        if d < -tol:
            return -1
        if d != 0:
            self.notes.append(f"near-critical: {label} ({a!r} vs {b!r})")
        return 0

    def _rec(self, label, a, op, b, ok):
        self.log.append({"name": label, "lhs": a, "op": op, "rhs": b, "holds": ok})
        return ok

    def lt(self, a, b, label):
        ok = self.sign(a, b, label) == -1
        return ok if self.log is None else self._rec(label, a, "<", b, ok)

    def le(self, a, b, label):
        s = self.sign(a, b, label)
        ok = s is not None and s <= 0
        return ok if self.log is None else self._rec(label, a, "<=", b, ok)

    def gt(self, a, b, label):
        ok = self.sign(a, b, label) == 1
        return ok if self.log is None else self._rec(label, a, ">", b, ok)

    def ge(self, a, b, label):
        s = self.sign(a, b, label)
        ok = s is not None and s >= 0
        return ok if self.log is None else self._rec(label, a, ">=", b, ok)

    def eq(self, a, b, label):
        ok = self.sign(a, b, label) == 0
        return ok if self.log is None else self._rec(label, a, "=", b, ok)

    def flag(self, label, ok):
        ok = bool(ok)
        return ok if self.log is None else self._rec(label, None, "holds", None, ok)


def _div(a, b):
    if b == 0:
        return float("inf") if a > 0 else float("-inf") if a < 0 else float("nan")
    return a / b


def _chan_min(p, i):
    """min of r_ij - ϱ_ij over active j ∈ {1, 2}, +inf when none is active."""
    if i == 1:
        c = [(p.b11, p.r11 - 2.0), (p.b12, p.r12 - p.alpha1)]
    else:
        c = [(p.b21, p.r21 - 2.0), (p.b22, p.r22 - p.alpha2)]
    vals = [v for b, v in c if b != 0]
    return min(vals) if vals else float("inf")


def _dominance(p, i, cmp):
    """Drift dominance r_i0 - 1 < min over active channels."""
    r0 = p.r10 if i == 1 else p.r20
    return cmp.lt(r0 - 1.0, _chan_min(p, i), f"drift dominance coord {i}")


def _c1(p, dp, cmp):
    b10, b20 = p.b10, p.b20
    d1 = _dominance(p, 1, cmp)
    d2 = _dominance(p, 2, cmp)
    both = b10 * b20 != 0
    ci = cmp.flag("C1(i): b10*b20 != 0 and both dominance", both and d1 and d2)
    g1 = cmp.lt(_div(dp.r1 + 1 - p.theta1, p.kappa1), _div(dp.r1, dp.r2), "C1(ii) ratio guard")
    cii = cmp.flag("C1(ii)", g1 and ((both and d1 and not d2) or (b20 == 0 and b10 != 0 and d1)))
    g2 = cmp.lt(_div(dp.r2 + 1 - p.theta2, p.kappa2), _div(dp.r2, dp.r1), "C1(iii) ratio guard")
    ciii = cmp.flag("C1(iii)", g2 and ((both and d2 and not d1) or (b10 == 0 and b20 != 0 and d2)))
    return ci, cii, ciii


def _in_band(p, dp, cmp):
    """θ_i - 1 < r_i < 0 for both coordinates."""
    ok = True
    for i, r, th in ((1, dp.r1, p.theta1), (2, dp.r2, p.theta2)):
        ok &= cmp.lt(th - 1.0, r, f"theta{i}-1 < r{i}")
        ok &= cmp.lt(r, 0.0, f"r{i} < 0")
    return ok


def _c2(p, dp, cmp):
    r1, r2, t1, t2, k1, k2 = dp.r1, dp.r2, p.theta1, p.theta2, p.kappa1, p.kappa2
    if not (t1 - 1 < r1 < 0 and t2 - 1 < r2 < 0):
        cmp.notes.append("C2 evaluated outside theta_i-1 < r_i < 0: both parts false")
        cmp.flag("C2(i)", False)
        cmp.flag("C2(ii)", False)
        return False, False
    a = cmp.lt(max((r1 + 1) / (r2 + 1), r1 / r2), k2 / (r2 + 1 - t2), "C2 first ratio inequality")
    b = cmp.lt(max((r2 + 1) / (r1 + 1), r2 / r1), k1 / (r1 + 1 - t1), "C2 second ratio inequality")
    c = cmp.lt((1 - t1) / (k1 - r2),
               min(k2 / (r2 + 1 - t2), (k2 - r1) / (1 - t2), 1 - t1, 2 - k2), "C2 first min inequality")
    d = cmp.lt((1 - t2) / (k2 - r1),
               min(k1 / (r1 + 1 - t1), (k1 - r2) / (1 - t1), 1 - t2, 2 - k1), "C2 second min inequality")
    return cmp.flag("C2(i)", a or b), cmp.flag("C2(ii)", c or d)


def _eq16(p, i, cmp):
    b0, r0 = (p.b10, p.r10) if i == 1 else (p.b20, p.r20)
    m = _chan_min(p, i)
    ok = cmp.ge(r0 - 1.0, m, f"diffusion dominance coord {i}")
    return cmp.flag(f"b{i}0 != 0 and diffusion dominance coord {i}", b0 != 0 and ok)


def _derive(p):
    return derive_exponents(p, tie_tol=TIE_TOL)


def eval_condition_c1(p, dp=None):
    """(c1_i, c1_ii, c1_iii, details)."""
    dp = _derive(p) if dp is None else dp
    cmp = _Cmp()
    cmp.log = []
    ci, cii, ciii = _c1(p, dp, cmp)
    return ci, cii, ciii, {"checks": cmp.log, "notes": cmp.notes}


def eval_condition_c2(p, dp=None):
    """(c2_i, c2_ii, details); both false outside θ_i-1 < r_i < 0."""
    dp = _derive(p) if dp is None else dp
    cmp = _Cmp()
    cmp.log = []
    a, b = _c2(p, dp, cmp)
    return a, b, {"checks": cmp.log, "notes": cmp.notes}


def eval_eq_1_6(p, dp=None):
    """Per-coordinate diffusion-dominance flags: b_i0 != 0 and r_i0 - 1 >= min over channels."""
    cmp = _Cmp()
    return _eq16(p, 1, cmp), _eq16(p, 2, cmp)


@dataclass
class RegimeReport:
    verdict: str
    matched: list
    checklists: dict
    notes: list = field(default_factory=list)
    derived: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "matched": list(self.matched), "derived": self.derived,
                "checklists": self.checklists, "notes": list(self.notes)}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def table(self):
        lines = [f"verdict: {self.verdict}", f"matched: {', '.join(self.matched) or '-'}"]
        w = max(len(k) for k in self.checklists)
        for thm, cl in self.checklists.items():
            lines.append(f"{thm:<{w}}  {'MATCH' if cl['matched'] else 'no'}")
            for c in cl["checks"]:
                if c["lhs"] is None:
                    lines.append(f"{'':<{w}}    [{'x' if c['holds'] else ' '}] {c['name']}")
                else:
                    lines.append(f"{'':<{w}}    [{'x' if c['holds'] else ' '}] {c['name']}: "
                                 f"{c['lhs']:.9g} {c['op']} {c['rhs']:.9g}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def _theorems(p, dp, cmp, record):
    """Evaluate every hypothesis; returns ({theorem: matched}, {theorem: checklist})."""
    out, lists = {}, {}
    r1, r2, b1, b2 = dp.r1, dp.r2, dp.b1, dp.b2
    t1, t2, k1, k2 = p.theta1, p.theta2, p.kappa1, p.kappa2
    e1, e2 = r1 + 1 - t1, r2 + 1 - t2
    prod, kk = e1 * e2, k1 * k2
    cache = {}

    def memo(key, fn):
        # shared sub-conditions are logged under every theorem when recording,
        # otherwise evaluated once
        if record:
            return fn()
        if key not in cache:
            cache[key] = fn()
        return cache[key]

    def band():
        return memo("band", lambda: _in_band(p, dp, cmp))

    def c1():
        return memo("c1", lambda: _c1(p, dp, cmp))

    def run(name, *checks):
        # record: evaluate every check so the checklist is complete;
        # otherwise stop at the first failure
        if record:
            cmp.log = []
            ok = True
            for c in checks:
                ok = bool(c()) and ok
            lists[name] = {"matched": ok, "checks": cmp.log}
            cmp.log = None
        else:
            ok = all(c() for c in checks)
        out[name] = ok

    def critical_power(op):
        # only defined for r1+1-theta1 > 0
        label = f"(a1/b1)^(1/(r1+1-theta1)) (a2/b2)^(1/kappa2) {op} 1"
        if e1 <= 0:
            return cmp.flag(label + " (undefined for r1+1-theta1 <= 0)", False)
        v = (p.a1 / b1) ** (1 / e1) * (p.a2 / b2) ** (1 / k2)
        return cmp.gt(v, 1.0, label) if op == ">" else cmp.lt(v, 1.0, label)

    def c1_any():
        ci, cii, ciii = c1()
        return cmp.flag("Condition C1", ci or cii or ciii)

    def c2_any():
        c2i, c2ii = memo("c2", lambda: _c2(p, dp, cmp))
        return cmp.flag("Condition C2", c2i or c2ii)

    def critical():
        return cmp.eq(prod, kk, "(r1+1-theta1)(r2+1-theta2) = kappa1 kappa2")

    def subcritical():
        return cmp.lt(prod, kk, "(r1+1-theta1)(r2+1-theta2) < kappa1 kappa2")

    def cluster():
        return memo("cluster", _cluster)

    def _cluster():
        checks = (
            band, critical,
            lambda: cmp.flag("b12 = b22 = 0", p.b12 == 0 and p.b22 == 0),
            lambda: cmp.eq(p.r10 - 1, p.r11 - 2, "r10-1 = r11-2"),
            lambda: cmp.eq(p.r10 - 1, p.r20 - 1, "r10-1 = r20-1"),
            lambda: cmp.eq(p.r10 - 1, p.r21 - 2, "r10-1 = r21-2"),
            lambda: cmp.eq(t1, t2, "theta1 = theta2"),
            lambda: cmp.eq(k1, k2, "kappa1 = kappa2"),
        )
        if record:
            return all([c() for c in checks])
        return all(c() for c in checks)

    def both16():
        return memo("16", lambda: _eq16(p, 1, cmp) & _eq16(p, 2, cmp))

    run("Prop 1.2", lambda: cmp.ge(r1, 0.0, "r1 >= 0"), lambda: cmp.ge(r2, 0.0, "r2 >= 0"))
    run("Thm 1.1a(i)", lambda: cmp.ge(r1, 0.0, "r1 >= 0"),
        lambda: cmp.lt(t2 - 1, r2, "theta2-1 < r2"), lambda: cmp.lt(r2, 0.0, "r2 < 0"))
    run("Thm 1.1a(ii)", lambda: cmp.ge(r2, 0.0, "r2 >= 0"),
        lambda: cmp.lt(t1 - 1, r1, "theta1-1 < r1"), lambda: cmp.lt(r1, 0.0, "r1 < 0"))
    run("Thm 1.1", band, lambda: cmp.gt(prod, kk, "(r1+1-theta1)(r2+1-theta2) > kappa1 kappa2"))
    run("Thm 1.4(i)", band, critical, lambda: cmp.flag("Condition C1(i)", c1()[0]),
        lambda: critical_power(">"))
    run("Thm 1.4(ii)", cluster, lambda: cmp.ge(p.a1 * p.a2, b1 * b2, "a1 a2 >= b1 b2"))
    run("Thm 1.4(ii) equality", cluster, lambda: cmp.eq(p.a1 * p.a2, b1 * b2, "a1 a2 = b1 b2"))
    run("Thm 1.2a(i)", lambda: cmp.le(r1, t1 - 1, "r1 <= theta1-1"), lambda: cmp.lt(r1, 0.0, "r1 < 0"))
    run("Thm 1.2a(ii)", lambda: cmp.le(r2, t2 - 1, "r2 <= theta2-1"), lambda: cmp.lt(r2, 0.0, "r2 < 0"))
    run("Thm 1.2(i)", band, c1_any, subcritical)
    run("Thm 1.2(ii)", band, both16, subcritical, c2_any)
    run("Thm 1.2(iii)", band, both16, lambda: cmp.lt(e1, k2, "r1+1-theta1 < kappa2"),
        lambda: cmp.lt(e2, k1, "r2+1-theta2 < kappa1"))
    run("Thm 1.4bb", band, critical, c1_any, lambda: critical_power("<"))
    return out, lists


def classify(p, record=True):
    """RegimeReport with every checklist; record=False skips the per-check log (faster)."""
    dp = _derive(p)
    cmp = _Cmp()
    res, lists = _theorems(p, dp, cmp, record)
    non = [k for k in NON_EXTINCTION if res[k]]
    ext = [k for k in EXTINCTION if res[k]]
    if non and ext:
        raise ConsistencyError(f"both regimes matched: {non} and {ext}")
    verdict = "NonExtinctionAS" if non else "ExtinctionPositiveProb" if ext else "Undetermined"
    notes = list(dict.fromkeys(cmp.notes))
    if ext:
        notes.append("positive extinction probability only; almost-sure extinction is not asserted")
    derived = {"r1": dp.r1, "r2": dp.r2, "b1": dp.b1, "b2": dp.b2,
               "dominant1": list(dp.argmin1), "dominant2": list(dp.argmin2)}
    if not record:
        lists = {k: {"matched": v, "checks": []} for k, v in res.items()}
    return RegimeReport(verdict, non + ext, lists, notes, derived)


def verdict(p):
    return classify(p, record=False).verdict


__all__ = ["RegimeReport", "classify", "verdict", "eval_condition_c1", "eval_condition_c2", "eval_eq_1_6",
           "NON_EXTINCTION", "EXTINCTION", "TOL"]
