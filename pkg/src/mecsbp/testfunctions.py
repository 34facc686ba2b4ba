"""Lyapunov test-function families with analytic first and second partials.

Every family exposes `eval(x, y) -> (g, gx, gy, gxx, gyy)` (broadcasting
over numpy arrays), a domain check, the growth exponent of g in each
coordinate (needed for the tail of the jump integral) and, where one
exists, a closed form for ∫ K_z g μ(dz) with

    K_z^1 g(x, y) = g(x+z, y) - g(x, y) - g_x(x, y) z.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .stablejump import c_rho


class ClosedFormUnavailable(DomainError):
    """The family has no closed-form jump term for the requested coordinate."""


def htilde(y, eps):
    """h̃(y) = y - y^(1+ε)(1+y)^(-ε)/(1+ε) with its first two derivatives."""
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0,1)")
    y = np.asarray(y, dtype=float)
    r = y / (1.0 + y)
    v = y - y * r ** eps / (1.0 + eps)
    d1 = 1.0 - r ** eps + eps / (1.0 + eps) * r ** (1.0 + eps)
    d2 = -eps * y ** (eps - 1.0) * (1.0 + y) ** (-2.0 - eps)
    return v, d1, d2


def htilde_at(y, eps):
    """h̃ value only, defined also at y = 0."""
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(y > 0, y / (1.0 + y), 0.0)
    return y - y * r ** eps / (1.0 + eps)


def _pos(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("test functions are defined for x, y > 0")
    return x, y


def _out(*vals):
    vals = tuple(np.asarray(v, dtype=float) for v in vals)
    if all(v.ndim == 0 for v in vals):
        return tuple(float(v) for v in vals)
    return np.broadcast_arrays(*vals)


class TestFunction:
    """Base class. Subclasses implement `_eval` on validated arrays."""

    __test__ = False  # keep pytest from collecting this class

    def check_domain(self, x, y):
        return _pos(x, y)

    def eval(self, x, y):
        x, y = self.check_domain(x, y)
        return _out(*self._eval(x, y))

    def value(self, x, y):
        return self.eval(x, y)[0]

    def growth(self, coord):
        """Exponent γ with |g| = O(z^γ) as the coord-th argument z → ∞."""
        return 1.0

    def closed_jump(self, coord, x, y, m):
        raise ClosedFormUnavailable(f"{type(self).__name__} has no closed jump term")


@dataclass(frozen=True)
class PowerInverse(TestFunction):
    """g = x^-ρ1 + y^-ρ2."""
    rho1: float
    rho2: float

    def __post_init__(self):
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise DomainError("PowerInverse needs rho1, rho2 > 0")

    def _eval(self, x, y):
        a, b = self.rho1, self.rho2
        return (x ** -a + y ** -b, -a * x ** (-a - 1), -b * y ** (-b - 1),
                a * (a + 1) * x ** (-a - 2), b * (b + 1) * y ** (-b - 2))

    def closed_jump(self, coord, x, y, m):
        x, y = self.check_domain(x, y)
        if coord == 1:
            return k_integral_closed_power(m, self.rho1, x, "neg_power")
        return k_integral_closed_power(m, self.rho2, y, "neg_power")


@dataclass(frozen=True)
class PowerInverseWeighted(TestFunction):
    """g = δ0 x^-ρ1 + y^-ρ2."""
    delta0: float
    rho1: float
    rho2: float

    def __post_init__(self):
        if not (self.delta0 > 0 and self.rho1 > 0 and self.rho2 > 0):
            raise DomainError("PowerInverseWeighted needs delta0, rho1, rho2 > 0")

    def _eval(self, x, y):
        d, a, b = self.delta0, self.rho1, self.rho2
        return (d * x ** -a + y ** -b, -d * a * x ** (-a - 1), -b * y ** (-b - 1),
                d * a * (a + 1) * x ** (-a - 2), b * (b + 1) * y ** (-b - 2))

    def closed_jump(self, coord, x, y, m):
        x, y = self.check_domain(x, y)
        if coord == 1:
            return self.delta0 * k_integral_closed_power(m, self.rho1, x, "neg_power")
        return k_integral_closed_power(m, self.rho2, y, "neg_power")


@dataclass(frozen=True)
class LogType(TestFunction):
    """g = (δ0+1) ln n + δ0 ln(1/x) + ln(1/y), defined on (0, n)² only."""
    delta0: float
    n: float

    def __post_init__(self):
        if not (self.delta0 > 0 and self.n > 0):
            raise DomainError("LogType needs delta0 > 0 and n > 0")

    def check_domain(self, x, y):
        x, y = _pos(x, y)
        if np.any(x >= self.n) or np.any(y >= self.n):
            raise DomainError(f"LogType is defined on (0,{self.n})^2 only")
        return x, y

    def _eval(self, x, y):
        d = self.delta0
        g = (d + 1) * np.log(self.n) - d * np.log(x) - np.log(y)
        return g, -d / x, -1.0 / y, d / x ** 2, 1.0 / y ** 2

    def closed_jump(self, coord, x, y, m):
        # ∫(w - ln(1+w)) μ(dw) = 1 for every α, so the jump term of -ln x is x^-α
        x, y = self.check_domain(x, y)
        if coord == 1:
            return self.delta0 * x ** -m.alpha
        return y ** -m.alpha


@dataclass(frozen=True)
class LinearCap(TestFunction):
    """g = v - x^ρ - y."""
    v: float
    rho: float

    def __post_init__(self):
        if not (self.v > 0 and 0 < self.rho < 1):
            raise DomainError("LinearCap needs v > 0 and rho in (0,1)")

    def _eval(self, x, y):
        r = self.rho
        zero = np.zeros(np.broadcast(x, y).shape)
        return (self.v - x ** r - y, -r * x ** (r - 1) + zero, -1.0 + zero,
                r * (1 - r) * x ** (r - 2) + zero, zero)

    def closed_jump(self, coord, x, y, m):
        x, y = self.check_domain(x, y)
        if coord == 1:
            return -k_integral_closed_power(m, self.rho, x, "pos_power") + 0.0 * y
        return 0.0 * x + 0.0 * y


class PowerOfInner(TestFunction):
    """h = -φ^ρ for a positive inner function φ; subclasses define `_phi`."""

    def phi_at(self, x, y):
        """φ evaluated where coordinates may be zero (for boundary values)."""
        raise NotImplementedError

    def value_at(self, x, y):
        return -np.asarray(self.phi_at(x, y), dtype=float) ** self.rho

    def _eval(self, x, y):
        f, fx, fy, fxx, fyy = self._phi(x, y)
        r = self.rho
        p1 = f ** (r - 1.0)
        p2 = f ** (r - 2.0)
        g = -f ** r
        gx = -r * p1 * fx
        gy = -r * p1 * fy
        gxx = -r * (r - 1.0) * p2 * fx * fx - r * p1 * fxx
        gyy = -r * (r - 1.0) * p2 * fy * fy - r * p1 * fyy
        return g, gx, gy, gxx, gyy


@dataclass(frozen=True)
class NegPowerSum(PowerOfInner):
    """h = -(δ0 x^ρ1 + y^ρ2)^ρ."""
    rho1: float
    rho2: float
    rho: float
    delta0: float = 1.0

    def __post_init__(self):
        if not (self.rho1 >= 1 and self.rho2 >= 1 and 0 < self.rho < 1 and self.delta0 > 0):
            raise DomainError("NegPowerSum needs rho1, rho2 >= 1, rho in (0,1), delta0 > 0")

    def phi_at(self, x, y):
        return self.delta0 * np.asarray(x, float) ** self.rho1 + np.asarray(y, float) ** self.rho2

    def _phi(self, x, y):
        a, b, d = self.rho1, self.rho2, self.delta0
        return (d * x ** a + y ** b, d * a * x ** (a - 1), b * y ** (b - 1),
                d * a * (a - 1) * x ** (a - 2), b * (b - 1) * y ** (b - 2))

    def growth(self, coord):
        return max(1.0, self.rho * (self.rho1 if coord == 1 else self.rho2))


@dataclass(frozen=True)
class SmoothedY(PowerOfInner):
    """h = -(x^ρ1 + h̃(y))^ρ."""
    rho1: float
    rho: float
    eps: float

    def __post_init__(self):
        if not (self.rho1 > 1 and 0 < self.rho < 1 and 0 < self.eps < 1):
            raise DomainError("SmoothedY needs rho1 > 1, rho in (0,1), eps in (0,1)")

    def phi_at(self, x, y):
        return np.asarray(x, float) ** self.rho1 + htilde_at(y, self.eps)

    def _phi(self, x, y):
        a = self.rho1
        hv, h1, h2 = htilde(y, self.eps)
        return x ** a + hv, a * x ** (a - 1), h1, a * (a - 1) * x ** (a - 2), h2

    def growth(self, coord):
        return max(1.0, self.rho * self.rho1) if coord == 1 else 1.0


@dataclass(frozen=True)
class SmoothedXY(PowerOfInner):
    """h = -((x + y^δ)^ρ1 + h̃(y))^ρ."""
    rho1: float
    rho: float
    eps: float
    delta: float

    def __post_init__(self):
        if not (0 < self.rho1 < 1 and 0 < self.rho < 1 and 0 < self.eps < 1 and self.delta > 1):
            raise DomainError("SmoothedXY needs rho1, rho, eps in (0,1) and delta > 1")

    def phi_at(self, x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        return (x + y ** self.delta) ** self.rho1 + htilde_at(y, self.eps)

    def _phi(self, x, y):
        a, d = self.rho1, self.delta
        s = x + y ** d
        s1 = s ** (a - 1)
        s2 = s ** (a - 2)
        dy = d * y ** (d - 1)
        dyy = d * (d - 1) * y ** (d - 2)
        hv, h1, h2 = htilde(y, self.eps)
        return (s ** a + hv, a * s1, a * s1 * dy + h1, a * (a - 1) * s2,
                a * (a - 1) * s2 * dy * dy + a * s1 * dyy + h2)

    def growth(self, coord):
        return 1.0


@dataclass(frozen=True)
class ThetaFamily(PowerOfInner):
    """h = -ĥ^ρ with ĥ = A1(x) + A2(y), Ai(u) = u^(1-θi) if θi > 0 else h̃(u)."""
    theta1: float
    theta2: float
    rho: float
    eps: float

    def __post_init__(self):
        if not (0 <= self.theta1 < 1 and 0 <= self.theta2 < 1):
            raise DomainError("ThetaFamily needs theta1, theta2 in [0,1)")
        if not (0 < self.rho < 1 and 0 < self.eps < 1):
            raise DomainError("ThetaFamily needs rho, eps in (0,1)")

    def _part(self, u, th):
        if th > 0:
            e = 1.0 - th
            return u ** e, e * u ** (e - 1), e * (e - 1) * u ** (e - 2)
        return htilde(u, self.eps)

    def _part_at(self, u, th):
        u = np.asarray(u, float)
        return u ** (1.0 - th) if th > 0 else htilde_at(u, self.eps)

    def phi_at(self, x, y):
        return self._part_at(x, self.theta1) + self._part_at(y, self.theta2)

    def _phi(self, x, y):
        a, a1, a2 = self._part(x, self.theta1)
        b, b1, b2 = self._part(y, self.theta2)
        return a + b, a1, b1, a2, b2


@dataclass(frozen=True)
class ShiftedCap(TestFunction):
    """g = min(|h(c,0)|, |h(0,c)|) + h(x, y) for an inner h = -φ^ρ."""
    c: float
    inner: PowerOfInner

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError("ShiftedCap needs c > 0")
        if not isinstance(self.inner, PowerOfInner):
            raise DomainError("ShiftedCap inner must be a -φ^ρ family")

    @property
    def shift(self):
        return float(min(abs(self.inner.value_at(self.c, 0.0)), abs(self.inner.value_at(0.0, self.c))))

    def check_domain(self, x, y):
        return self.inner.check_domain(x, y)

    def _eval(self, x, y):
        g, gx, gy, gxx, gyy = self.inner._eval(x, y)
        return g + self.shift, gx, gy, gxx, gyy

    def growth(self, coord):
        return self.inner.growth(coord)

    def closed_jump(self, coord, x, y, m):
        return self.inner.closed_jump(coord, x, y, m)


@dataclass(frozen=True)
class Constant(TestFunction):
    """g ≡ value (a trivial positive test function)."""
    value_: float = 1.0

    def _eval(self, x, y):
        z = np.zeros(np.broadcast(x, y).shape)
        return self.value_ + z, z, z, z, z

    def growth(self, coord):
        return 0.0

    def closed_jump(self, coord, x, y, m):
        return 0.0 * np.asarray(x, float) * np.asarray(y, float)


@dataclass(frozen=True)
class LinearCombination(TestFunction):
    """g = Σ w_k g_k; closed jump terms exist when they exist for every part."""
    weights: tuple
    parts: tuple

    def check_domain(self, x, y):
        for f in self.parts:
            x, y = f.check_domain(x, y)
        return x, y

    def _eval(self, x, y):
        acc = [0.0] * 5
        for w, f in zip(self.weights, self.parts):
            vals = f._eval(x, y)
            acc = [a + w * v for a, v in zip(acc, vals)]
        return tuple(acc)

    def growth(self, coord):
        return max(f.growth(coord) for f in self.parts)

    def closed_jump(self, coord, x, y, m):
        return sum(w * f.closed_jump(coord, x, y, m) for w, f in zip(self.weights, self.parts))


def k_integral_closed_power(m, rho, x, sign):
    """∫ K_z f μ(dz) for f = x^-ρ (neg_power) or f = x^ρ (pos_power).

    neg_power: c(-ρ) ρ(ρ+1) x^(-α-ρ);  pos_power: ρ(ρ-1) c(ρ) x^(ρ-α).
    """
    x = np.asarray(x, dtype=float)
    if sign == "neg_power":
        if not rho > 0:
            raise DomainError("neg_power needs rho > 0")
        out = c_rho(m, -rho) * rho * (rho + 1.0) * x ** (-m.alpha - rho)
    elif sign == "pos_power":
        if not (0 < rho < m.alpha) or rho == 1:
            raise DomainError("pos_power needs 0 < rho < alpha, rho != 1")
        out = rho * (rho - 1.0) * c_rho(m, rho) * x ** (rho - m.alpha)
    else:
        raise DomainError(f"unknown sign {sign!r}")
    return float(out) if out.ndim == 0 else out


FAMILIES = {
    "PowerInverse": PowerInverse,
    "PowerInverseWeighted": PowerInverseWeighted,
    "LogType": LogType,
    "LinearCap": LinearCap,
    "NegPowerSum": NegPowerSum,
    "SmoothedY": SmoothedY,
    "SmoothedXY": SmoothedXY,
    "ThetaFamily": ThetaFamily,
}


def make_test_function(family, **kw):
    """Build a family by name; ShiftedCap takes `inner` as a dict {family: ..., **params}."""
    if family == "ShiftedCap":
        inner = dict(kw.pop("inner"))
        return ShiftedCap(c=float(kw.pop("c")), inner=make_test_function(inner.pop("family"), **inner))
    if family not in FAMILIES:
        raise DomainError(f"unknown test-function family {family!r}")
    return FAMILIES[family](**{k: float(v) for k, v in kw.items()})
