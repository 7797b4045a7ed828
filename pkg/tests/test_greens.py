import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimirnl.dispersion import LorentzMedium, LorentzOscillator, VACUUM
from casimirnl.errors import NegativeDelta, PoleProximity
from casimirnl.greens import (GreenValue, Momentum3, correlation_3pt,
                              correlation_em_p, dyson_series, free_green,
                              linear_green, nonlinear_green, slab_kernel)

from conftest import narrow_line
from casimirnl.coupling import NonlinearKernel


class TestFreeGreen:
    def test_transverse(self):
        assert free_green(2.0, 1.0, "transverse").amplitude == pytest.approx(
            1.0 / 3.0, rel=1e-15)

    def test_longitudinal(self):
        assert free_green(1.0, 2.0, "longitudinal").amplitude == pytest.approx(
            -0.25, rel=1e-15)

    def test_oscillator(self):
        g = free_green(2.0, 1.0, "oscillator")
        assert g.amplitude.real == pytest.approx(-1.0 / 3.0, rel=1e-15)

    def test_pole_proximity(self):
        with pytest.raises(PoleProximity):
            free_green(1.0, 1.0 + 1e-12, "transverse")


class TestLinearGreen:
    def test_vacuum(self):
        assert linear_green(VACUUM, 1.0, 1.0).amplitude == pytest.approx(0.5)

    def test_constant_eps(self):
        med = LorentzMedium((), background=3.0)
        assert linear_green(med, 1.0, 1.0).amplitude == pytest.approx(0.25)

    def test_defining_equation_residual(self):
        med = LorentzMedium((LorentzOscillator(1.0, 1.0, 0.1),))
        for k, xi in ((0.5, 0.2), (1.0, 1.0), (3.0, 7.0)):
            g = linear_green(med, k, xi).amplitude
            eps = 1.0 + 1.0 / (1.0 + xi * xi + 0.1 * xi)
            assert abs((k * k + xi * xi * eps) * g - 1.0) < 1e-14

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.0, 10.0), st.floats(1e-3, 10.0))
    def test_positivity(self, k, xi):
        med = LorentzMedium((LorentzOscillator(2.0, 1.0, 0.3),))
        assert linear_green(med, k, xi).amplitude > 0.0


class TestNonlinearGreen:
    def test_zero_correction_is_bit_identical(self):
        med = LorentzMedium((LorentzOscillator(1.0, 1.0, 0.1),))
        a = linear_green(med, 1.3, 0.7).amplitude
        b = nonlinear_green(med, 0.0, 1.3, 0.7).amplitude
        assert a == b

    def test_unit_correction(self):
        assert nonlinear_green(VACUUM, 1.0, 1.0, 1.0).amplitude == \
            pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_negative_delta(self):
        with pytest.raises(NegativeDelta):
            nonlinear_green(VACUUM, -0.5, 1.0, 1.0)

    def test_reduction_chain(self):
        # nonlinear(0) == linear; linear(vacuum) == free transverse
        k, xi = 2.0, 1.0
        g_nl = nonlinear_green(VACUUM, 0.0, k, xi).amplitude
        g_lin = linear_green(VACUUM, k, xi).amplitude
        g_free = 1.0 / (k * k + xi * xi)
        assert g_nl == g_lin == g_free


class TestSlabKernel:
    def test_contact(self):
        assert slab_kernel(1.0, 0.0) == 0.5

    def test_log_four(self):
        assert slab_kernel(1.0, np.log(4.0)) == pytest.approx(0.125, rel=1e-15)

    def test_generic(self):
        assert slab_kernel(2.0, 1.0) == pytest.approx(np.exp(-2.0) / 4.0,
                                                      rel=1e-15)
        assert slab_kernel(2.0, 1.0) == pytest.approx(0.0338338, rel=1e-5)

    def test_monotone_in_both_arguments(self):
        qs = np.linspace(0.5, 5.0, 9)
        hs = np.linspace(0.0, 4.0, 9)
        for h in hs:
            vals = [slab_kernel(q, h) for q in qs]
            assert all(a > b for a, b in zip(vals, vals[1:]))
        for q in qs:
            vals = [slab_kernel(q, h) for h in hs]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_log_affine_in_h(self):
        q = 1.7
        hs = np.linspace(0.5, 3.0, 11)
        logs = np.log([slab_kernel(q, h) for h in hs])
        slopes = np.diff(logs) / np.diff(hs)
        np.testing.assert_allclose(slopes, -q, rtol=1e-12)

    def test_invalid(self):
        with pytest.raises(ValueError):
            slab_kernel(0.0, 1.0)
        with pytest.raises(ValueError):
            slab_kernel(1.0, -1.0)


class TestDyson:
    def test_forty_term_series(self):
        """Truncated propagator-correction series vs the closed form at
        contraction 0.5."""
        g1 = 0.5
        xi2_delta = 1.0  # xi^2 Delta with xi^2 Delta g1 = 0.5
        closed = g1 / (1.0 - xi2_delta * g1)
        partial = dyson_series(g1, xi2_delta, 40)
        assert abs(partial - closed) < 1e-10

    def test_physical_sign_variant(self):
        # on the imaginary axis the correction enters with -xi^2 Delta
        k, xi, eps, delta = 1.0, 1.0, 1.0, 0.5
        g1 = 1.0 / (k * k + xi * xi * eps)
        closed = 1.0 / (k * k + xi * xi * (eps + delta))
        partial = dyson_series(g1, -xi * xi * delta, 40)
        assert abs(partial - closed) < 1e-10


class TestCorrelators:
    def test_em_p_vacuum(self):
        assert correlation_em_p(VACUUM, 2.0, 1.0) == 0.0 + 0.0j

    def test_em_p_structure(self):
        med = LorentzMedium((LorentzOscillator(1.0, 2.0, 0.5),))
        k, w = 2.0, 1.0
        chi = 1.0 / (4.0 - 1.0 - 0.5j)
        g = 1.0 / (k * k - w * w * (1.0 + chi))
        assert correlation_em_p(med, k, w) == pytest.approx(1j * w * chi * g,
                                                            rel=1e-13)

    def test_em_p_linearity_in_chi(self):
        m1 = LorentzMedium((LorentzOscillator(0.5, 2.0, 0.5),))
        m2 = LorentzMedium((LorentzOscillator(1.0, 2.0, 0.5),))
        k, w = 5.0, 1.0
        # at k^2 >> w^2 eps the propagator factor is nearly medium blind
        c1 = correlation_em_p(m1, k, w)
        c2 = correlation_em_p(m2, k, w)
        assert abs(c2 / c1) == pytest.approx(2.0, rel=2e-2)

    def test_3pt_zero_kernel(self, narrow_nu1):
        grid = np.geomspace(0.1, 10.0, 21)
        from casimirnl.spectral import SpectralFunction
        zero = NonlinearKernel.separable(
            (SpectralFunction(grid, np.zeros(21)),) * 2)
        val = correlation_3pt(zero, narrow_nu1, VACUUM, 2.0, 2.0, 1.0, 1.0)
        assert val == 0.0 + 0.0j

    def test_3pt_zero_frequency(self, narrow_nu1, narrow_nu2):
        assert correlation_3pt(narrow_nu2, narrow_nu1, VACUUM,
                               0.0, 2.0, 1.0, 1.0) == 0.0 + 0.0j

    def test_3pt_factorized_oracle(self, narrow_nu1, narrow_nu2):
        """The correlator equals the product of independently computed
        factors."""
        from casimirnl.coupling import chi2
        w1, w2, k1, k2 = 2.0, 2.5, 3.0, 4.0
        val = correlation_3pt(narrow_nu2, narrow_nu1, VACUUM, w1, w2, k1, k2)
        c2 = chi2(narrow_nu2, narrow_nu1, w1, w2)
        g1 = 1.0 / (k1 * k1 - w1 * w1)
        g2 = 1.0 / (k2 * k2 - w2 * w2)
        assert val == pytest.approx(-w1 * w2 * c2 * g1 * g2, rel=1e-12)


def test_momentum_validation():
    with pytest.raises(ValueError):
        Momentum3(1.0, -0.5)
    with pytest.raises(ValueError):
        GreenValue(1.0, "bogus")
