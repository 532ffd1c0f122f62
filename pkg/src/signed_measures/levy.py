"""Parametric Lévy intensity measures and characteristic pairs.

A weight measure rho(dw) lives on the nonzero reals; combined with a
homogeneous base rate on [0, T) it forms the product-form intensity of the
jump part of a completely random signed measure.  Built-in density families
declare their activity class analytically; integrability values fall back to
adaptive quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy import special

from .errors import InvalidAlpha, QuadratureFailure, SupportViolation
from .measure import DEFAULT_T, BorelSet, StepDensity
from .quadrature import quad, quad_full


class WeightMeasure:
    """Base interface for jump-size measures."""

    def one_wedge_abs(self) -> float:
        """Integral of 1 ∧ |w| against the measure (may be inf)."""
        raise NotImplementedError

    def mass(self) -> float:
        """Total mass (activity); inf for infinite-activity families."""
        raise NotImplementedError

    def abs_moment(self) -> float:
        """Integral of |w| against the measure (may be inf)."""
        raise NotImplementedError

    def split(self):
        """(positive part, reflected negative part), both on (0, inf)."""
        raise NotImplementedError

    def cf_integral(self, t: float) -> complex:
        """Integral of (e^{itw} - 1) against the measure."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # --- one-sided sampling hooks (measures supported on (0, inf)) ---

    def finite_activity(self) -> bool:
        m = self.mass()
        return math.isfinite(m)

    def sample_iid(self, n: int, rng) -> np.ndarray:
        """n i.i.d. draws from rho/mass (finite activity only)."""
        raise NotImplementedError

    def tail(self, x: float) -> float:
        """rho([x, inf)) for x > 0."""
        raise NotImplementedError

    def tail_inverse(self, u: float) -> float:
        """Smallest x with tail(x) <= u, i.e. the inverse-tail transform."""
        raise NotImplementedError

    def remainder(self, eps: float) -> float:
        """Integral of w over (0, eps): dropped mean mass under truncation."""
        raise NotImplementedError


class ZeroWeight(WeightMeasure):
    def one_wedge_abs(self):
        return 0.0

    def mass(self):
        return 0.0

    def abs_moment(self):
        return 0.0

    def split(self):
        return ZeroWeight(), ZeroWeight()

    def cf_integral(self, t):
        return 0j

    def sample_iid(self, n, rng):
        return np.zeros(0)

    def remainder(self, eps):
        return 0.0

    def tail(self, x):
        return 0.0

    def to_json(self):
        return {"kind": "finite_discrete", "points": []}


@dataclass(frozen=True)
class FiniteDiscrete(WeightMeasure):
    """Finitely many weighted points: rho = sum of mass_i * delta_{w_i}."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(w), float(m)) for w, m in self.points)
        if any(w == 0 for w, _ in pts):
            raise ValueError("weight values must be nonzero")
        if any(m <= 0 for _, m in pts):
            raise ValueError("masses must be positive")
        object.__setattr__(self, "points", pts)

    def one_wedge_abs(self):
        return sum(m * min(1.0, abs(w)) for w, m in self.points)

    def mass(self):
        return sum(m for _, m in self.points)

    def abs_moment(self):
        return sum(m * abs(w) for w, m in self.points)

    def split(self):
        pos = [(w, m) for w, m in self.points if w > 0]
        neg = [(-w, m) for w, m in self.points if w < 0]
        return (
            FiniteDiscrete(tuple(pos)) if pos else ZeroWeight(),
            FiniteDiscrete(tuple(neg)) if neg else ZeroWeight(),
        )

    def cf_integral(self, t):
        return sum(m * (cmath.exp(1j * t * w) - 1.0) for w, m in self.points)

    def sample_iid(self, n, rng):
        if n == 0 or not self.points:
            return np.zeros(0)
        ws = np.array([w for w, _ in self.points])
        ms = np.array([m for _, m in self.points])
        idx = rng.gen.choice(len(ws), size=n, p=ms / ms.sum())
        return ws[idx]

    def tail(self, x):
        return sum(m for w, m in self.points if w >= x)

    def remainder(self, eps):
        return sum(m * w for w, m in self.points if 0 < w < eps)

    def to_json(self):
        return {"kind": "finite_discrete", "points": [[w, m] for w, m in self.points]}


@dataclass(frozen=True)
class GammaWeight(WeightMeasure):
    """rho(w) = a w^{-1} e^{-b w} on (0, inf); infinite activity."""

    a: float = 1.0
    b: float = 1.0

    def density(self, w):
        return self.a * np.exp(-self.b * w) / w

    def one_wedge_abs(self):
        return quad_full(lambda w: min(1.0, w) * self.density(w), 0.0, math.inf)

    def mass(self):
        return math.inf

    def abs_moment(self):
        return self.a / self.b

    def split(self):
        return self, ZeroWeight()

    def cf_integral(self, t):
        # closed form: integral of (e^{itw}-1) a w^{-1} e^{-bw} = -a log(1 - it/b)
        return -self.a * cmath.log(1.0 - 1j * t / self.b)

    def tail(self, x):
        return self.a * special.exp1(self.b * x)

    def tail_inverse(self, u):
        if np.ndim(u) != 0:
            raise TypeError("tail_inverse is scalar-only; vectorized callers loop")
        u = float(u)
        if u <= 0:
            return math.inf
        fn = lambda lx: self.tail(math.exp(lx)) - u
        lo, hi = math.log(1e-300), math.log(700.0 / self.b)
        return math.exp(optimize.brentq(fn, lo, hi, xtol=1e-14, rtol=1e-14))

    def remainder(self, eps):
        return self.a * (1.0 - math.exp(-self.b * eps)) / self.b

    def to_json(self):
        return {"kind": "density", "family": "gamma", "params": {"a": self.a, "b": self.b}}


@dataclass(frozen=True)
class StableWeight(WeightMeasure):
    """rho(w) = a w^{-1-sigma} on (0, w_max]; sigma in (0,1); infinite activity."""

    a: float = 1.0
    sigma: float = 0.5
    w_max: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.sigma < 1.0):
            raise ValueError("sigma must lie in (0, 1)")

    def density(self, w):
        d = self.a * np.asarray(w, dtype=float) ** (-1.0 - self.sigma)
        return np.where(np.asarray(w) <= self.w_max, d, 0.0)

    def one_wedge_abs(self):
        s, wm = self.sigma, self.w_max
        if wm <= 1.0:
            return self.a * wm ** (1.0 - s) / (1.0 - s)
        head = self.a / (1.0 - s)
        tail = self.a * (1.0 - (0.0 if math.isinf(wm) else wm ** (-s))) / s
        return head + tail

    def mass(self):
        return math.inf

    def abs_moment(self):
        if math.isinf(self.w_max):
            return math.inf
        return self.a * self.w_max ** (1.0 - self.sigma) / (1.0 - self.sigma)

    def split(self):
        return self, ZeroWeight()

    def cf_integral(self, t):
        hi = self.w_max if math.isfinite(self.w_max) else math.inf
        re = quad_full(lambda w: (math.cos(t * w) - 1.0) * float(self.density(w)), 0.0, hi)
        im = quad_full(lambda w: math.sin(t * w) * float(self.density(w)), 0.0, hi)
        return complex(re, im)

    def tail(self, x):
        if x >= self.w_max:
            return 0.0
        edge = 0.0 if math.isinf(self.w_max) else self.w_max ** (-self.sigma)
        return self.a * (x ** (-self.sigma) - edge) / self.sigma

    def tail_inverse(self, u):
        # closed form, valid elementwise on arrays
        edge = 0.0 if math.isinf(self.w_max) else self.w_max ** (-self.sigma)
        u = np.asarray(u, dtype=float)
        out = (self.sigma * np.maximum(u, 0.0) / self.a + edge) ** (-1.0 / self.sigma)
        out = np.where(u <= 0, self.w_max, out)
        return float(out) if out.ndim == 0 else out

    def remainder(self, eps):
        eps = min(eps, self.w_max)
        return self.a * eps ** (1.0 - self.sigma) / (1.0 - self.sigma)

    def to_json(self):
        return {
            "kind": "density",
            "family": "stable",
            "params": {"a": self.a, "sigma": self.sigma, "w_max": self.w_max},
        }


@dataclass(frozen=True)
class ExponentialWeight(WeightMeasure):
    """rho(w) = a e^{-b w} on (0, inf); finite activity a/b."""

    a: float = 1.0
    b: float = 1.0

    def density(self, w):
        return self.a * np.exp(-self.b * np.asarray(w, dtype=float))

    def one_wedge_abs(self):
        return quad_full(lambda w: min(1.0, w) * float(self.density(w)), 0.0, math.inf)

    def mass(self):
        return self.a / self.b

    def abs_moment(self):
        return self.a / self.b**2

    def split(self):
        return self, ZeroWeight()

    def cf_integral(self, t):
        # closed form: (a/b) * (b/(b - it) - 1) = (a/b) * it/(b - it)
        return (self.a / self.b) * (1j * t / (self.b - 1j * t))

    def sample_iid(self, n, rng):
        return rng.gen.exponential(scale=1.0 / self.b, size=n)

    def tail(self, x):
        return (self.a / self.b) * math.exp(-self.b * x)

    def remainder(self, eps):
        return (self.a / self.b**2) * (1.0 - math.exp(-self.b * eps) * (1.0 + self.b * eps))

    def to_json(self):
        return {"kind": "density", "family": "exponential", "params": {"a": self.a, "b": self.b}}


class GenericDensity(WeightMeasure):
    """Arbitrary density on an interval of the real line minus {0}.

    Used for derived measures (e.g. posterior ordinary components).  All
    integrals go through adaptive quadrature with divergence detection near
    zero; sampling is not supported.
    """

    def __init__(self, fn, lo: float, hi: float, activity: str | None = None):
        self.fn = fn
        self.lo = float(lo)
        self.hi = float(hi)
        # activity: "finite" | "infinite" | None (decide by quadrature)
        self.declared_activity = activity

    def _integrate(self, integrand) -> float:
        total = 0.0
        if self.hi > 0:
            total += quad_full(integrand, 0.0, self.hi)
        if self.lo < 0:
            total += quad_full(lambda u: integrand(-u), 0.0, -self.lo)
        return total

    def one_wedge_abs(self):
        return self._integrate(lambda w: min(1.0, abs(w)) * self.fn(w))

    def mass(self):
        if self.declared_activity == "infinite":
            return math.inf
        if self.declared_activity == "finite" or self.declared_activity is None:
            return self._integrate(self.fn)
        raise QuadratureFailure(f"unknown activity class {self.declared_activity}")

    def abs_moment(self):
        return self._integrate(lambda w: abs(w) * self.fn(w))

    def split(self):
        pos = GenericDensity(self.fn, 0.0, max(self.hi, 0.0), self.declared_activity)
        neg = GenericDensity(lambda u: self.fn(-u), 0.0, max(-self.lo, 0.0), self.declared_activity)
        return pos, neg

    def cf_integral(self, t):
        re = self._integrate(lambda w: (math.cos(t * w) - 1.0) * self.fn(w))
        im = 0.0
        if self.hi > 0:
            im += quad_full(lambda w: math.sin(t * w) * self.fn(w), 0.0, self.hi)
        if self.lo < 0:
            im -= quad_full(lambda u: math.sin(t * u) * self.fn(-u), 0.0, -self.lo)
        return complex(re, im)

    def tail(self, x):
        if x >= self.hi:
            return 0.0
        return quad(self.fn, x, self.hi)

    def to_json(self):
        return {
            "kind": "density",
            "family": "generic",
            "params": {"lo": self.lo, "hi": self.hi, "activity": self.declared_activity},
        }


@dataclass(frozen=True)
class TwoSided(WeightMeasure):
    """Composite measure: pos on positive weights, neg reflected to negatives."""

    pos: WeightMeasure
    neg: WeightMeasure

    def one_wedge_abs(self):
        return self.pos.one_wedge_abs() + self.neg.one_wedge_abs()

    def mass(self):
        return self.pos.mass() + self.neg.mass()

    def abs_moment(self):
        return self.pos.abs_moment() + self.neg.abs_moment()

    def split(self):
        return self.pos, self.neg

    def cf_integral(self, t):
        return self.pos.cf_integral(t) + self.neg.cf_integral(-t)

    def to_json(self):
        return {"kind": "two_sided", "pos": self.pos.to_json(), "neg": self.neg.to_json()}


def bnp_alpha_weight(alpha: float, theta_max: float = math.inf) -> TwoSided:
    """The weight measure |theta|^{alpha-2} d theta, alpha in (0,1).

    Symmetric two-sided composite of one-sided power laws w^{-1-(1-alpha)}.
    """
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0,1), got {alpha}")
    one_side = StableWeight(a=1.0, sigma=1.0 - alpha, w_max=theta_max)
    return TwoSided(one_side, one_side)


def _check_positive_support(wm: WeightMeasure, name: str):
    if isinstance(wm, ZeroWeight):
        return
    if isinstance(wm, FiniteDiscrete):
        if any(w <= 0 for w, _ in wm.points):
            raise SupportViolation(f"{name} carries mass outside (0, inf)")
        return
    if isinstance(wm, (GammaWeight, StableWeight, ExponentialWeight)):
        return
    if isinstance(wm, GenericDensity):
        if wm.lo < 0:
            raise SupportViolation(f"{name} support extends below 0")
        return
    raise SupportViolation(f"{name} is not a one-sided weight measure")


def compose_two_sided(f1: WeightMeasure, f2: WeightMeasure) -> WeightMeasure:
    """Combine two measures on (0, inf) into one two-sided Lévy weight: f1
    drives positive jumps, f2 (reflected) drives negative jumps."""
    _check_positive_support(f1, "F1")
    _check_positive_support(f2, "F2")
    if isinstance(f2, ZeroWeight):
        return f1
    if isinstance(f1, FiniteDiscrete) and isinstance(f2, FiniteDiscrete):
        return FiniteDiscrete(f1.points + tuple((-w, m) for w, m in f2.points))
    return TwoSided(f1, f2)


def interval_mass(wm: WeightMeasure, lo: float, hi: float) -> float:
    """Measure of the weight interval (lo, hi); supports discrete and
    composite specs (used by the two-sided composition contract)."""
    if isinstance(wm, ZeroWeight):
        return 0.0
    if isinstance(wm, FiniteDiscrete):
        return sum(m for w, m in wm.points if lo < w < hi)
    if isinstance(wm, TwoSided):
        total = 0.0
        if hi > 0:
            total += interval_mass(wm.pos, max(lo, 0.0), hi)
        if lo < 0:
            total += interval_mass(wm.neg, max(-hi, 0.0), -lo)
        return total
    # density families: tail differences on the positive axis
    if lo >= 0:
        return wm.tail(max(lo, 1e-300)) - wm.tail(hi)
    raise SupportViolation("one-sided family queried on negative weights")


@dataclass(frozen=True)
class LevySpec:
    """Product-form intensity: weight measure times base_rate * Lebesgue on [0, T)."""

    weight: WeightMeasure
    base_rate: float = 1.0
    T: float = DEFAULT_T

    def to_json(self):
        return {"weight": self.weight.to_json(), "base_rate": self.base_rate, "T": self.T}


def check_levy_integrability(spec: LevySpec) -> dict:
    """Value of base_rate * T * integral(1 ∧ |w|); ok iff finite."""
    val = spec.weight.one_wedge_abs()
    value = spec.base_rate * spec.T * val if math.isfinite(val) else math.inf
    return {"ok": math.isfinite(value), "value": value}


def activity(spec: LevySpec) -> dict:
    m = spec.weight.mass()
    return {"finite": math.isfinite(m), "mass": m}


@dataclass(frozen=True)
class CharacteristicPair:
    """Lévy spec plus deterministic piecewise-constant signed drift density."""

    levy: LevySpec
    drift: StepDensity = StepDensity.zero()

    def drift_mass(self, B: BorelSet) -> float:
        return sum(self.drift.integral(iv) for iv in B.intervals)


def char_fn(pair: CharacteristicPair, t: float, B: BorelSet) -> complex:
    """Closed-form characteristic function of xi(B) (no fixed atoms)."""
    if not check_levy_integrability(pair.levy)["ok"]:
        raise QuadratureFailure("Lévy integrability condition fails")
    alpha_b = pair.drift_mass(B)
    levy_term = pair.levy.base_rate * B.length * pair.levy.weight.cf_integral(t)
    return cmath.exp(1j * t * alpha_b + levy_term)


# --- JSON loading -----------------------------------------------------------

_FAMILIES = {
    "gamma": GammaWeight,
    "stable": StableWeight,
    "exponential": ExponentialWeight,
}


def weight_from_json(data: dict) -> WeightMeasure:
    kind = data["kind"]
    if kind == "finite_discrete":
        pts = tuple((w, m) for w, m in data["points"])
        return FiniteDiscrete(pts) if pts else ZeroWeight()
    if kind == "density":
        family = data["family"]
        if family == "bnp_alpha":
            p = data.get("params", {})
            return bnp_alpha_weight(p["alpha"], p.get("theta_max", math.inf))
        if family not in _FAMILIES:
            raise ValueError(f"unknown density family {family!r}")
        return _FAMILIES[family](**data.get("params", {}))
    if kind == "two_sided":
        return TwoSided(weight_from_json(data["pos"]), weight_from_json(data["neg"]))
    raise ValueError(f"unknown weight measure kind {kind!r}")


def spec_from_json(data: dict) -> LevySpec:
    return LevySpec(
        weight=weight_from_json(data["weight"]),
        base_rate=float(data.get("base_rate", 1.0)),
        T=float(data.get("T", DEFAULT_T)),
    )
