import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from fracvolt.specfun import (
    AccuracyWarning,
    mittag_leffler,
    mittag_leffler_growth_constant,
    recip_gamma,
    subordination_density,
    wright_phi,
    wright_tail_cutoff,
)

from oracles import grid_cases_ml, grid_cases_wright, ml_oracle, rgamma_oracle, wright_oracle

# Frozen oracle values (mpmath, 40 digits):
#   1/Gamma(1/2) = 1/sqrt(pi)
RECIP_GAMMA_HALF = 0.5641895835477562869480794515607725858441
#   e * erfc(1)  = E_{1/2}(-1)
E_HALF_AT_MINUS_1 = 0.4275835761558070044260435952191556380572
#   cos(1)       = E_2(-1)
E_2_AT_MINUS_1 = 0.5403023058681397174009366074429766037323
#   exp(-1/4)/sqrt(pi) = Phi_{1/2}(1)
PHI_HALF_AT_1 = 0.4393912894677224399338941463929152850937


class TestRecipGamma:
    def test_one(self):
        assert recip_gamma(1.0) == 1.0

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0, -33.0])
    def test_poles_are_exact_zeros(self, x):
        assert recip_gamma(x) == 0.0

    def test_half(self):
        assert_allclose(recip_gamma(0.5), RECIP_GAMMA_HALF, rtol=1e-14)

    def test_against_oracle_band(self):
        xs = np.concatenate([np.linspace(-49.7, 49.7, 113), [0.25, -0.25, 12.5]])
        for x in xs:
            if x <= 0 and abs(x - round(x)) < 1e-9:
                continue
            assert_allclose(recip_gamma(x), rgamma_oracle(float(x)), rtol=1e-13)


class TestMittagLeffler:
    def test_rejects_bad_alpha(self):
        for bad in (0.0, -0.5, 2.5, 3.0):
            with pytest.raises(ValueError):
                mittag_leffler(bad, 1.0)

    def test_alpha_one_is_exp(self):
        z = np.linspace(-30, 5, 41)
        assert_allclose(mittag_leffler(1.0, z), np.exp(z), rtol=1e-13)

    def test_at_zero(self):
        for alpha in (0.2, 0.7, 1.0, 1.5, 2.0):
            assert mittag_leffler(alpha, 0.0) == 1.0

    def test_closed_form_anchors(self):
        assert_allclose(mittag_leffler(0.5, -1.0), E_HALF_AT_MINUS_1, rtol=1e-11)
        assert_allclose(mittag_leffler(2.0, -1.0), E_2_AT_MINUS_1, rtol=1e-13)

    def test_alpha_2_cos_identity(self):
        x = np.linspace(0.1, 6.0, 25)
        assert_allclose(mittag_leffler(2.0, -(x ** 2)), np.cos(x), rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("alpha,z", grid_cases_ml())
    def test_against_oracle(self, alpha, z):
        got = mittag_leffler(alpha, z)
        want = ml_oracle(alpha, z)
        # relative where the value is not near a zero crossing, absolute there
        assert abs(got - want) <= 1e-10 * max(abs(want), 1e-4)

    def test_strictly_increasing_in_z(self):
        for alpha in (0.3, 0.5, 0.9, 1.5):
            z = np.linspace(-40.0, 3.0, 200)
            v = mittag_leffler(alpha, z)
            if alpha <= 1.0:
                assert np.all(np.diff(v) > 0)
            else:  # oscillates on the far negative axis; check the monotone tail
                sel = z > -2.0
                assert np.all(np.diff(v[sel]) > 0)

    def test_full_output_estimate(self):
        v, e = mittag_leffler(0.5, -7.0, full_output=True)
        assert e < 1e-10 * abs(v)

    def test_overflow_is_flagged(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            with pytest.raises(AccuracyWarning):
                mittag_leffler(0.5, 1.0e6)

    def test_scalar_and_array_paths_agree(self):
        # the negative-axis rule adapts its innermost panel to the batch
        # maximum, so agreement is to rule accuracy rather than bitwise
        zs = [-80.0, -3.0, -1.0, 0.0, 2.0]
        batch = mittag_leffler(0.4, np.array(zs))
        single = [mittag_leffler(0.4, z) for z in zs]
        assert_allclose(batch, single, rtol=5e-14, atol=1e-300)


class TestWright:
    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            wright_phi(1.0, 1.0)
        with pytest.raises(ValueError):
            wright_phi(0.5, -0.1)

    def test_at_zero(self):
        assert_allclose(wright_phi(0.5, 0.0), RECIP_GAMMA_HALF, rtol=1e-14)
        assert_allclose(wright_phi(0.3, 0.0), recip_gamma(0.7), rtol=1e-14)

    def test_half_closed_form(self):
        assert_allclose(wright_phi(0.5, 1.0), PHI_HALF_AT_1, rtol=1e-11)
        z = np.linspace(0.0, 8.0, 33)
        assert_allclose(
            wright_phi(0.5, z), np.exp(-z ** 2 / 4.0) / math.sqrt(math.pi), rtol=5e-11
        )

    @pytest.mark.parametrize("gamma,z", grid_cases_wright())
    def test_against_oracle(self, gamma, z):
        got = wright_phi(gamma, z)
        want = wright_oracle(gamma, z)
        assert abs(got - want) <= 1e-9 * max(abs(want), 1e-250)

    @pytest.mark.parametrize("gamma", [0.3, 0.5, 0.8])
    def test_nonnegative_on_log_grid(self, gamma):
        zmax = wright_tail_cutoff(gamma, 1e-12)
        z = np.concatenate([[0.0], np.geomspace(1e-6, zmax, 160)])
        assert np.all(wright_phi(gamma, z) >= 0.0)

    @pytest.mark.parametrize("gamma", [0.3, 0.5, 0.8])
    def test_integrates_to_one(self, gamma):
        zc = wright_tail_cutoff(gamma, 1e-14)
        val = 0.0
        for a, b in [(0.0, 1.0), (1.0, zc)]:
            v, _ = quad(lambda s: wright_phi(gamma, s), a, b, epsabs=1e-11, epsrel=1e-11, limit=300)
            val += v
        assert abs(val - 1.0) <= 1e-6

    @pytest.mark.parametrize("gamma", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("z", [0.5, 1.0, 5.0])
    def test_laplace_transform_is_mittag_leffler(self, gamma, z):
        zc = wright_tail_cutoff(gamma, 1e-14)
        val = 0.0
        for a, b in [(0.0, 1.0), (1.0, zc)]:
            v, _ = quad(
                lambda s: wright_phi(gamma, s) * math.exp(-z * s),
                a, b, epsabs=1e-11, epsrel=1e-11, limit=300,
            )
            val += v
        assert abs(val - mittag_leffler(gamma, -z)) <= 1e-6


class TestSubordinationDensity:
    def test_t_one_reduces_to_wright(self):
        s = np.linspace(0.0, 4.0, 17)
        assert_allclose(subordination_density(1.0, 0.4, s), wright_phi(0.4, s), rtol=0)

    def test_scaling_at_t_4(self):
        s = np.linspace(0.0, 4.0, 17)
        assert_allclose(
            subordination_density(4.0, 0.5, s), 0.5 * wright_phi(0.5, 0.5 * s), rtol=1e-14
        )

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            subordination_density(0.0, 0.5, 1.0)
        with pytest.raises(ValueError):
            subordination_density(-1.0, 0.5, 1.0)

    @pytest.mark.parametrize("t,alpha", [(0.5, 0.3), (2.0, 0.7)])
    def test_integrates_to_one(self, t, alpha):
        zc = wright_tail_cutoff(alpha, 1e-14) * t ** alpha
        val = 0.0
        pieces = [(0.0, min(1.0, zc)), (min(1.0, zc), zc)]
        for a, b in pieces:
            if b <= a:
                continue
            v, _ = quad(
                lambda s: subordination_density(t, alpha, s),
                a, b, epsabs=1e-11, epsrel=1e-11, limit=300,
            )
            val += v
        assert abs(val - 1.0) <= 1e-6


class TestGrowthBound:
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9])
    @pytest.mark.parametrize("omega", [1.0, 2.0])
    def test_fitted_constant_is_finite_and_modest(self, alpha, omega):
        c = mittag_leffler_growth_constant(alpha, omega, t_end=10.0)
        assert np.isfinite(c)
        assert 1.0 <= c <= 10.0 / alpha
