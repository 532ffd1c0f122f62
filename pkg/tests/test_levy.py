"""Weight measures, integrability checks, composition, characteristic function."""

import cmath
import math

import numpy as np
import pytest

from signed_measures import (
    BorelSet,
    CharacteristicPair,
    ExponentialWeight,
    FiniteDiscrete,
    GammaWeight,
    GenericDensity,
    LevySpec,
    StableWeight,
    StepDensity,
    TwoSided,
    activity,
    bnp_alpha_weight,
    char_fn,
    check_levy_integrability,
    compose_two_sided,
)
from signed_measures.errors import InvalidAlpha, SupportViolation
from signed_measures.levy import interval_mass
from signed_measures.samplers import skellam_pmf

UNIT = BorelSet.interval(0.0, 1.0)


class TestIntegrability:
    def test_single_point_mass(self):
        chk = check_levy_integrability(LevySpec(FiniteDiscrete(((1.0, 2.0),))))
        assert chk["ok"] and chk["value"] == pytest.approx(2.0)

    def test_inverse_square_diverges(self):
        wm = GenericDensity(lambda w: w**-2.0, 0.0, 1.0, activity="infinite")
        assert not check_levy_integrability(LevySpec(wm))["ok"]

    def test_alpha_density_truncated_value(self):
        # two-sided |w|^{alpha-2} on (-1,1)\{0}: integral of |w|^{alpha-1}
        # over each side is 1/alpha, so 1 wedge |w| integrates to 2/alpha
        wm = bnp_alpha_weight(0.5, theta_max=1.0)
        chk = check_levy_integrability(LevySpec(wm))
        assert chk["ok"]
        assert chk["value"] == pytest.approx(4.0, rel=1e-7)

    def test_scaling_with_rate_and_window(self):
        spec = LevySpec(FiniteDiscrete(((0.5, 1.0),)), base_rate=2.0, T=3.0)
        assert check_levy_integrability(spec)["value"] == pytest.approx(3.0)


class TestActivity:
    def test_discrete_mass(self):
        act = activity(LevySpec(FiniteDiscrete(((1.0, 2.0), (-1.0, 3.0)))))
        assert act["finite"] and act["mass"] == pytest.approx(5.0)

    def test_power_divergence(self):
        assert not activity(LevySpec(bnp_alpha_weight(0.5, theta_max=1.0)))["finite"]

    def test_two_sided_exponential(self):
        wm = TwoSided(ExponentialWeight(1.0, 1.0), ExponentialWeight(1.0, 1.0))
        act = activity(LevySpec(wm))
        assert act["finite"] and act["mass"] == pytest.approx(2.0, rel=1e-8)


class TestCompose:
    def test_zero_negative_part(self):
        f1 = FiniteDiscrete(((1.0, 2.0), (2.0, 0.5)))
        composite = compose_two_sided(f1, FiniteDiscrete(()))
        assert interval_mass(composite, 0.5, 3.0) == pytest.approx(2.5)
        assert interval_mass(composite, -3.0, -0.5) == 0.0

    def test_reflection_of_negative_component(self):
        f1 = FiniteDiscrete(((2.0, 1.0),))
        f2 = FiniteDiscrete(((3.0, 4.0),))
        composite = compose_two_sided(f1, f2)
        assert interval_mass(composite, 1.0, 4.0) == pytest.approx(1.0)
        assert interval_mass(composite, -4.0, -1.0) == pytest.approx(4.0)

    def test_support_violation(self):
        with pytest.raises(SupportViolation):
            compose_two_sided(FiniteDiscrete(((-1.0, 1.0),)), FiniteDiscrete(()))


class TestTailInverse:
    def test_gamma_tail_round_trip(self):
        wm = GammaWeight(1.0, 1.0)
        for x in (1e-5, 1e-3, 0.1, 1.0, 3.0):
            u = wm.tail(x)
            assert wm.tail_inverse(u) == pytest.approx(x, rel=1e-9)

    def test_stable_tail_closed_form(self):
        wm = StableWeight(a=1.0, sigma=0.5, w_max=1.0)
        # tail(x) = a/sigma (x^-sigma - w_max^-sigma)
        assert wm.tail(0.25) == pytest.approx(2.0 * (2.0 - 1.0))
        u = np.array([0.5, 1.0, 2.0])
        x = wm.tail_inverse(u)
        back = np.array([wm.tail(float(v)) for v in x])
        assert np.allclose(back, u, rtol=1e-12)

    def test_monotone(self):
        wm = GammaWeight(2.0, 0.5)
        xs = np.logspace(-6, 1, 40)
        tails = np.array([wm.tail(float(x)) for x in xs])
        assert np.all(np.diff(tails) < 0)


class TestCharFn:
    def test_t_zero_is_one(self):
        pair = CharacteristicPair(LevySpec(GammaWeight(1.0, 1.0)))
        assert char_fn(pair, 0.0, UNIT) == pytest.approx(1.0 + 0.0j)

    def test_pure_drift(self):
        pair = CharacteristicPair(
            LevySpec(FiniteDiscrete(())), StepDensity.constant(2.0, 0.0, 1.0)
        )
        B = BorelSet.interval(0.0, 0.5)
        for t in (0.3, 1.1, 2.0):
            assert char_fn(pair, t, B) == pytest.approx(cmath.exp(1j * t * 1.0))

    def test_skellam_closed_form(self):
        mu1, mu2 = 3.0, 2.0
        pair = CharacteristicPair(LevySpec(FiniteDiscrete(((1.0, mu1), (-1.0, mu2)))))
        for t in (0.5, 1.0, 2.0):
            expected = cmath.exp(mu1 * (cmath.exp(1j * t) - 1) + mu2 * (cmath.exp(-1j * t) - 1))
            assert char_fn(pair, t, UNIT) == pytest.approx(expected, abs=1e-9)

    def test_skellam_vs_pmf_fourier_sum(self):
        # cross-check against the discrete Fourier sum of the convolution pmf
        mu1, mu2 = 3.0, 2.0
        pair = CharacteristicPair(LevySpec(FiniteDiscrete(((1.0, mu1), (-1.0, mu2)))))
        K = 60
        for t in np.arange(0.1, 3.01, 0.1):
            fourier = sum(
                skellam_pmf(k, mu1, mu2) * cmath.exp(1j * t * k) for k in range(-K, K + 1)
            )
            assert abs(char_fn(pair, float(t), UNIT) - fourier) < 1e-9

    def test_gamma_closed_form_vs_quadrature(self):
        a, b = 1.5, 2.0
        closed = CharacteristicPair(LevySpec(GammaWeight(a, b)))
        generic = CharacteristicPair(
            LevySpec(
                GenericDensity(
                    lambda w: a * w**-1.0 * math.exp(-b * w), 0.0, math.inf,
                    activity="infinite",
                )
            )
        )
        for t in (0.5, 1.0, 2.0):
            assert char_fn(closed, t, UNIT) == pytest.approx(
                char_fn(generic, t, UNIT), rel=1e-6
            )


class TestBnpAlphaWeight:
    def test_alpha_out_of_range(self):
        for alpha in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(InvalidAlpha):
                bnp_alpha_weight(alpha)

    def test_two_sided_symmetry(self):
        wm = bnp_alpha_weight(0.5, theta_max=1.0)
        assert interval_mass(wm, 0.1, 0.9) == pytest.approx(
            interval_mass(wm, -0.9, -0.1), rel=1e-10
        )


class TestJsonSpecs:
    def test_round_trip_families(self):
        from signed_measures import spec_from_json

        data = {
            "weight": {
                "kind": "two_sided",
                "pos": {"kind": "density", "family": "gamma", "params": {"a": 1.0, "b": 2.0}},
                "neg": {"kind": "finite_discrete", "points": [[1.0, 0.5]]},
            },
            "base_rate": 2.0,
            "T": 1.5,
        }
        spec = spec_from_json(data)
        assert spec.base_rate == 2.0 and spec.T == 1.5
        assert check_levy_integrability(spec)["ok"]
