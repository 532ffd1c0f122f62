"""Conjugate posterior updates for CRSM-based trait priors.

The prior is a purely atomic CRSM: finitely many fixed atoms with parametric
weight distributions, plus an ordinary component with weight measure nu and
atomless base distribution G.  Observations are atomic measures; a location
present in one observation but absent in another contributes the likelihood
factor at x = 0 for the absent one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AssumptionViolated, UnmatchedLikelihood
from .levy import (
    CharacteristicPair,
    FiniteDiscrete,
    GenericDensity,
    LevySpec,
    StableWeight,
    TwoSided,
    WeightMeasure,
    ZeroWeight,
    bnp_alpha_weight,
)
from .measure import Atom, SignedAtomicMeasure
from .quadrature import quad, quad_full
from .rng import RngStream
from .samplers import DEFAULT_EPS, sample_crsm


def _norm_pdf(x, mu, sigma):
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class NormalDist:
    """1-D Gaussian weight distribution; sigma = 0 gives a point mass."""

    mu: float
    sigma: float

    def pdf(self, x):
        if self.sigma == 0.0:
            return math.inf if x == self.mu else 0.0
        return _norm_pdf(x, self.mu, self.sigma)

    def sample(self, rng: RngStream) -> float:
        if self.sigma == 0.0:
            return self.mu
        return float(rng.gen.normal(self.mu, self.sigma))

    def to_json(self):
        return {"name": "normal", "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class UniformBase:
    """Atomless base distribution G on [lo, hi)."""

    lo: float = 0.0
    hi: float = 1.0

    def sample(self, n: int, rng: RngStream) -> np.ndarray:
        return rng.gen.uniform(self.lo, self.hi, size=n)

    def cdf(self, x):
        return np.clip((np.asarray(x) - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def to_json(self):
        return {"name": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class FixedAtom:
    psi: float
    weight_dist: NormalDist


@dataclass(frozen=True)
class TraitPrior:
    fixed_atoms: tuple[FixedAtom, ...]
    weight_measure: WeightMeasure
    base: UniformBase = UniformBase()

    @property
    def fixed_locations(self):
        return tuple(a.psi for a in self.fixed_atoms)


@dataclass(frozen=True)
class Observation:
    """Atomic data measure: (location, nonzero value) pairs."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        locs = [a[0] for a in self.atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("observation locations must be distinct")

    def value_at(self, loc: float) -> float:
        for l, v in self.atoms:
            if l == loc:
                return v
        return 0.0

    def locations(self):
        return [a[0] for a in self.atoms]


class DiscreteLikelihood:
    """pmf h(x | theta) on the integers."""

    def __init__(self, pmf, name: str = "discrete"):
        self.pmf = pmf
        self.name = name
        self.zero_factor = lambda theta: pmf(0, theta)


class ContinuousLikelihood:
    """Continuous H_fix (density h_fix) and H_ord with a point mass at zero."""

    def __init__(self, h_fix, h_ord, h0, name: str = "continuous"):
        self.h_fix = h_fix
        self.h_ord = h_ord
        self.h0 = h0
        self.name = name
        self.zero_factor = h0


def signed_poisson_likelihood() -> DiscreteLikelihood:
    """Built-in discrete family: x | theta ~ sign(theta) * Poisson(|theta|)."""

    def pmf(x, theta):
        lam = abs(theta)
        s = 1.0 if theta > 0 else -1.0
        k = s * x
        if k != int(k) or k < 0:
            return 0.0
        k = int(k)
        return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1)) if lam > 0 else float(k == 0)

    return DiscreteLikelihood(pmf, name="signed_poisson")


# --- weight-measure densities and tilting ----------------------------------


class TiltedDensity(GenericDensity):
    """nu(d theta) * zero_factor(theta)^m, kept in symbolic (base, m) form so
    sequential updates compose exactly."""

    def __init__(self, base_fn, lo, hi, zero_factor, m, activity="infinite"):
        self.base_fn = base_fn
        self.zero_factor = zero_factor
        self.m = m
        super().__init__(
            lambda th: base_fn(th) * zero_factor(th) ** m, lo, hi, activity=activity
        )


def weight_density(wm: WeightMeasure):
    """(density g, lo, hi) of a weight measure, or None when it is discrete."""
    if isinstance(wm, GenericDensity):
        return wm.fn, wm.lo, wm.hi
    if isinstance(wm, TwoSided):
        pos = weight_density(wm.pos)
        neg = weight_density(wm.neg)
        if pos is None or neg is None:
            return None
        gp, _, hp = pos
        gn, _, hn = neg
        return (lambda th: gp(th) if th > 0 else gn(-th)), -hn, hp
    if isinstance(wm, StableWeight):
        return (lambda th: float(wm.density(th))), 0.0, wm.w_max
    if hasattr(wm, "density"):
        return (lambda th: float(wm.density(th))), 0.0, math.inf
    return None


def tilt_weight_measure(wm: WeightMeasure, zero_factor, m: int) -> WeightMeasure:
    if m == 0:
        return wm
    if isinstance(wm, TiltedDensity) and wm.zero_factor is zero_factor:
        return TiltedDensity(wm.base_fn, wm.lo, wm.hi, zero_factor, wm.m + m)
    if isinstance(wm, (FiniteDiscrete, ZeroWeight)):
        if isinstance(wm, ZeroWeight):
            return wm
        pts = tuple((w, mass * zero_factor(w) ** m) for w, mass in wm.points)
        return FiniteDiscrete(tuple(p for p in pts if p[1] > 0))
    dens = weight_density(wm)
    if dens is None:
        raise AssumptionViolated("A00", "weight measure has no density to tilt")
    g, lo, hi = dens
    act = "finite" if wm.finite_activity() else "infinite"
    return TiltedDensity(g, lo, hi, zero_factor, m, activity=act)


# --- posterior result ------------------------------------------------------


class PosteriorDensity:
    """Unnormalized weight density at one posterior atom location."""

    def __init__(self, psi, unnorm, lo=-math.inf, hi=math.inf, singular_at_zero=False, label=""):
        self.psi = psi
        self.unnorm = unnorm
        self.lo = lo
        self.hi = hi
        self.singular_at_zero = singular_at_zero
        self.label = label
        self._normalizer = None

    def normalizer(self) -> float:
        if self._normalizer is None:
            if self.singular_at_zero:
                total = 0.0
                if self.hi > 0:
                    total += quad_full(self.unnorm, 0.0, self.hi)
                if self.lo < 0:
                    total += quad_full(lambda u: self.unnorm(-u), 0.0, -self.lo)
                self._normalizer = total
            else:
                self._normalizer = quad(self.unnorm, self.lo, self.hi)
        return self._normalizer

    def density(self, theta) -> float:
        return self.unnorm(theta) / self.normalizer()


class PosteriorPmf:
    """Unnormalized weight pmf over finitely many support points."""

    def __init__(self, psi, points, label=""):
        self.psi = psi
        self.points = tuple(points)  # (theta, unnormalized mass)
        self.label = label

    def normalizer(self) -> float:
        return sum(m for _, m in self.points)

    def pmf(self):
        z = self.normalizer()
        return tuple((th, m / z) for th, m in self.points)


@dataclass
class PosteriorResult:
    fixed_updates: list
    new_atoms: list
    ordinary_weight_measure: WeightMeasure
    m: int


# --- assumption checks ------------------------------------------------------


def check_assumptions(prior: TraitPrior, lik) -> dict:
    report = {
        "A0": len(prior.fixed_atoms) < math.inf,
        "n_fixed": len(prior.fixed_atoms),
    }
    mass = prior.weight_measure.mass()
    report["A1"] = math.isinf(mass)
    report["nu_mass"] = mass

    one_minus_zero = lambda th: 1.0 - lik.zero_factor(th)
    key = "A2" if isinstance(lik, DiscreteLikelihood) else "A2'"
    if isinstance(prior.weight_measure, (FiniteDiscrete, ZeroWeight)):
        pts = getattr(prior.weight_measure, "points", ())
        val = sum(mass_i * one_minus_zero(w) for w, mass_i in pts)
    else:
        dens = weight_density(prior.weight_measure)
        if dens is None:
            val = math.inf
        else:
            g, lo, hi = dens
            val = 0.0
            if hi > 0:
                val += quad_full(lambda th: one_minus_zero(th) * g(th), 0.0, hi)
            if lo < 0:
                val += quad_full(lambda u: one_minus_zero(-u) * g(-u), 0.0, -lo)
    report[key] = math.isfinite(val)
    report[key + "_value"] = val
    return report


def _require_assumptions(prior, lik):
    report = check_assumptions(prior, lik)
    for key in ("A0", "A1"):
        if not report[key]:
            raise AssumptionViolated(key)
    key = "A2" if isinstance(lik, DiscreteLikelihood) else "A2'"
    if not report[key]:
        raise AssumptionViolated(key, f"integral value {report[key + '_value']}")
    return report


# --- posterior updates ------------------------------------------------------


def _gather(obs, loc):
    """Per-observation values at loc, absent entries read as 0."""
    return [o.value_at(loc) for o in obs]


def _check_finite(v, where):
    if isinstance(v, float) and math.isnan(v):
        raise UnmatchedLikelihood(f"likelihood evaluated to NaN at {where}")
    return v


def _new_locations(prior, obs):
    seen = []
    fixed = set(prior.fixed_locations)
    for o in obs:
        for loc in o.locations():
            if loc not in fixed and loc not in seen:
                seen.append(loc)
    return seen


def posterior_update_discrete(
    prior: TraitPrior, lik: DiscreteLikelihood, obs, enforce_assumptions: bool = True
) -> PosteriorResult:
    obs = list(obs)
    m = len(obs)
    if enforce_assumptions:
        _require_assumptions(prior, lik)
    fixed_updates = []
    for atom in prior.fixed_atoms:
        xs = _gather(obs, atom.psi)
        fd = atom.weight_dist

        def unnorm(th, xs=xs, fd=fd):
            v = fd.pdf(th)
            for x in xs:
                v *= _check_finite(lik.pmf(x, th), (atom.psi, x))
            return v

        fixed_updates.append(PosteriorDensity(atom.psi, unnorm, label="fixed"))

    new_atoms = []
    for loc in _new_locations(prior, obs):
        xs = _gather(obs, loc)
        if isinstance(prior.weight_measure, FiniteDiscrete):
            pts = []
            for w, mass in prior.weight_measure.points:
                v = mass
                for x in xs:
                    v *= _check_finite(lik.pmf(x, w), (loc, x))
                pts.append((w, v))
            new_atoms.append(PosteriorPmf(loc, pts, label="new"))
        else:
            dens = weight_density(prior.weight_measure)
            if dens is None:
                raise AssumptionViolated("A00", "nu has neither density nor finite support")
            g, lo, hi = dens

            def unnorm(th, xs=xs, g=g):
                v = g(th)
                for x in xs:
                    v *= _check_finite(lik.pmf(x, th), (loc, x))
                return v

            new_atoms.append(
                PosteriorDensity(loc, unnorm, lo, hi, singular_at_zero=True, label="new")
            )

    ordinary = tilt_weight_measure(prior.weight_measure, lik.zero_factor, m)
    return PosteriorResult(fixed_updates, new_atoms, ordinary, m)


def posterior_update_continuous(
    prior: TraitPrior, lik: ContinuousLikelihood, obs, enforce_assumptions: bool = True
) -> PosteriorResult:
    obs = list(obs)
    m = len(obs)
    if enforce_assumptions:
        _require_assumptions(prior, lik)
    dens = weight_density(prior.weight_measure)
    if dens is None and not isinstance(prior.weight_measure, (FiniteDiscrete, ZeroWeight)):
        raise AssumptionViolated("A00", "nu must have a density g")

    fixed_updates = []
    for atom in prior.fixed_atoms:
        xs = _gather(obs, atom.psi)
        fd = atom.weight_dist

        def unnorm(th, xs=xs, fd=fd):
            v = fd.pdf(th)
            for x in xs:
                if x == 0.0:
                    v *= _check_finite(lik.h0(th), (atom.psi, x))
                else:
                    v *= _check_finite(lik.h_fix(x, th), (atom.psi, x))
            return v

        fixed_updates.append(PosteriorDensity(atom.psi, unnorm, label="fixed"))

    new_atoms = []
    for loc in _new_locations(prior, obs):
        xs = _gather(obs, loc)
        if isinstance(prior.weight_measure, FiniteDiscrete):
            pts = []
            for w, mass in prior.weight_measure.points:
                v = mass
                for x in xs:
                    v *= _check_finite(
                        lik.h0(w) if x == 0.0 else lik.h_ord(x, w), (loc, x)
                    )
                pts.append((w, v))
            new_atoms.append(PosteriorPmf(loc, pts, label="new"))
        else:
            g, lo, hi = dens

            def unnorm(th, xs=xs, g=g):
                v = g(th)
                for x in xs:
                    if x == 0.0:
                        v *= _check_finite(lik.h0(th), (loc, x))
                    else:
                        v *= _check_finite(lik.h_ord(x, th), (loc, x))
                return v

            new_atoms.append(
                PosteriorDensity(loc, unnorm, lo, hi, singular_at_zero=True, label="new")
            )

    ordinary = tilt_weight_measure(prior.weight_measure, lik.zero_factor, m)
    return PosteriorResult(fixed_updates, new_atoms, ordinary, m)


# --- the worked Gaussian example -------------------------------------------


def gaussian_example_prior(alpha: float, sigma: float, fixed=()):
    """Prior with nu(d theta) = |theta|^{alpha-2} d theta and Gaussian kernels.

    fixed: iterable of (psi, mu_fix, sigma_fix) triples.
    Returns (TraitPrior, ContinuousLikelihood).
    """
    nu = bnp_alpha_weight(alpha)
    fixed_atoms = tuple(FixedAtom(psi, NormalDist(mu, sd)) for psi, mu, sd in fixed)
    prior = TraitPrior(fixed_atoms, nu)

    def h0(theta):
        return 1.0 - abs(theta) ** (2.0 - alpha) * math.exp(-theta * theta)

    def h_ord(x, theta):
        # the ordinary-observation factor |theta|^{2-alpha} e^{-theta^2} is
        # formed directly: computing it as 1 - h0(theta) cancels in the tails
        return abs(theta) ** (2.0 - alpha) * math.exp(-theta * theta) * _norm_pdf(x, theta, sigma)

    def h_fix(x, theta):
        return _norm_pdf(x, theta, sigma)

    lik = ContinuousLikelihood(h_fix, h_ord, h0, name="gaussian_example")
    return prior, lik


# --- prior sampling and mean functions -------------------------------------


def sample_prior_draw(
    prior: TraitPrior, eps: float = DEFAULT_EPS, rng: RngStream | None = None
) -> SignedAtomicMeasure:
    """One draw of the prior CRSM: fixed atoms plus the ordinary component
    with weights from nu and locations i.i.d. from G."""
    pair = CharacteristicPair(LevySpec(prior.weight_measure, base_rate=1.0, T=1.0))
    fixed = [(a.psi, a.weight_dist.sample) for a in prior.fixed_atoms]
    mu, _ = sample_crsm(
        pair,
        fixed_atoms=[(psi, lambda r, s=s: s(r)) for psi, s in fixed],
        eps=eps,
        rng=rng,
        location_sampler=lambda n, r: prior.base.sample(n, r),
    )
    return mu


def eval_mean_function(kernel, xi: SignedAtomicMeasure, grid) -> list:
    """f(t) = integral of K(x, t) against xi, for each t in grid."""
    out = []
    for t in grid:
        val = sum(kernel(a.location, t) * a.weight for a in xi.atoms)
        d = xi.diffuse
        for (lo, hi), lvl in zip(zip(d.breaks, d.breaks[1:]), d.levels):
            if lvl != 0.0:
                val += lvl * quad(lambda x: kernel(x, t), lo, hi)
        out.append(val)
    return out
