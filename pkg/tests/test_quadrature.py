import numpy as np
import pytest

from casimirnl.errors import DimensionTooHigh
from casimirnl.quadrature import (Axis, IntegralEstimate, IntegrationSpec,
                                  integrate_1d, integrate_mc, integrate_nd)

ZETA3 = 1.2020569031595942854


def bose3(x):
    # x^3/(e^x - 1), overflow-safe
    return x ** 3 * np.exp(-x) / (-np.expm1(-x))


def bose2(x):
    return x ** 2 * np.exp(-x) / (-np.expm1(-x))


class TestIntegrate1D:
    def test_bose_cubed_zeta(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=3.0),),
                               rel_tol=1e-10)
        est = integrate_1d(bose3, spec)
        assert est.converged
        assert abs(est.value - np.pi ** 4 / 15) < 1e-8

    def test_exponential(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=1.0),),
                               rel_tol=1e-12)
        est = integrate_1d(lambda x: np.exp(-x), spec)
        assert abs(est.value - 1.0) < 1e-10

    def test_bose_squared_zeta(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=3.0),),
                               rel_tol=1e-10)
        est = integrate_1d(bose2, spec)
        assert abs(est.value - 2 * ZETA3) < 1e-8

    def test_not_converged_flag(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),),
                               rel_tol=1e-14, max_evaluations=60)
        est = integrate_1d(lambda x: np.sin(37.0 * x) ** 2 + x ** 9, spec)
        assert not est.converged

    def test_finite_log_axis(self):
        spec = IntegrationSpec(axes=(Axis("finite-log", a=1e-4, b=1e4),),
                               rel_tol=1e-11)
        est = integrate_1d(lambda x: 1.0 / x, spec)
        assert abs(est.value - np.log(1e8)) < 1e-9

    def test_real_line_axis(self):
        spec = IntegrationSpec(axes=(Axis("real-line", scale=2.0),),
                               rel_tol=1e-11)
        est = integrate_1d(lambda x: 1.0 / (1.0 + x * x), spec)
        assert abs(est.value - np.pi) < 1e-9


class TestIntegrateND:
    def test_product_exponential(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=1.0),) * 2,
                               rel_tol=1e-9, max_evaluations=500_000)
        est = integrate_nd(lambda p: np.exp(-p[:, 0] - p[:, 1]), spec)
        assert abs(est.value - 1.0) < 1e-8

    def test_arctan_product(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=1.0),) * 2,
                               rel_tol=1e-9, max_evaluations=500_000)
        est = integrate_nd(
            lambda p: 1.0 / ((1 + p[:, 0] ** 2) * (1 + p[:, 1] ** 2)), spec)
        assert abs(est.value - (np.pi / 2) ** 2) < 1e-7

    def test_three_axes(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),) * 3,
                               rel_tol=1e-9, max_evaluations=500_000)
        est = integrate_nd(lambda p: p.prod(axis=1), spec)
        assert abs(est.value - 0.125) < 1e-9

    def test_dimension_cap(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),) * 6)
        with pytest.raises(DimensionTooHigh):
            integrate_nd(lambda p: np.ones(p.shape[0]), spec)


class TestMonteCarlo:
    def test_constant_exact(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),) * 3,
                               rel_tol=1e-3, max_evaluations=50_000, seed=3)
        est = integrate_mc(lambda p: np.ones(p.shape[0]), spec)
        assert est.value == pytest.approx(1.0, abs=1e-12)
        assert est.error_estimate == pytest.approx(0.0, abs=1e-12)

    def test_exponential_half_plane(self):
        spec = IntegrationSpec(axes=(Axis("semi-infinite", scale=1.0),) * 2,
                               rel_tol=1e-3, max_evaluations=1_000_000, seed=11)
        est = integrate_mc(lambda p: np.exp(-p[:, 0] - p[:, 1]), spec)
        assert abs(est.value - 1.0) < 3.0 * est.error_estimate

    def test_seed_determinism(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),) * 2,
                               rel_tol=1e-3, max_evaluations=40_000, seed=99)
        f = lambda p: np.cos(p[:, 0]) * p[:, 1]
        a = integrate_mc(f, spec)
        b = integrate_mc(f, spec)
        assert a.value == b.value
        assert a.error_estimate == b.error_estimate

    def test_seed_required(self):
        spec = IntegrationSpec(axes=(Axis("finite", a=0.0, b=1.0),))
        with pytest.raises(ValueError):
            integrate_mc(lambda p: np.ones(p.shape[0]), spec)


# closed-form fixture library for the estimator-quality properties
FIXTURES = [
    (lambda x: np.exp(-x), Axis("semi-infinite", scale=1.0), 1.0),
    (lambda x: x * np.exp(-x), Axis("semi-infinite", scale=1.0), 1.0),
    (bose3, Axis("semi-infinite", scale=3.0), np.pi ** 4 / 15),
    (bose2, Axis("semi-infinite", scale=3.0), 2 * ZETA3),
    (lambda x: np.exp(-x * x), Axis("semi-infinite", scale=1.0),
     np.sqrt(np.pi) / 2),
    (lambda x: 1.0 / (1.0 + x * x), Axis("semi-infinite", scale=1.0),
     np.pi / 2),
    (lambda x: np.sin(x) ** 2, Axis("finite", a=0.0, b=np.pi), np.pi / 2),
    # int_a^1 ln x dx = -1 - (a ln a - a), a = 1e-6
    (lambda x: np.log(x), Axis("finite-log", a=1e-6, b=1.0),
     -0.9999851844894421),
    (lambda x: np.exp(-np.abs(x)) * np.cos(x), Axis("real-line", scale=1.0),
     1.0),
]


def test_error_honesty():
    """True error exceeds the reported estimate in under 5% of fixtures."""
    violations = 0
    total = 0
    for f, axis, exact in FIXTURES:
        for rel_tol in (1e-6, 1e-8, 1e-10):
            spec = IntegrationSpec(axes=(axis,), rel_tol=rel_tol,
                                   max_evaluations=200_000)
            est = integrate_1d(f, spec)
            total += 1
            if abs(est.value - exact) > max(est.error_estimate, 1e-15):
                violations += 1
    assert violations / total < 0.05


def test_refinement_monotonicity():
    """Halving rel_tol never increases the true error (beyond noise floor)."""
    for f, axis, exact in FIXTURES:
        errs = []
        for rel_tol in (1e-4, 1e-6, 1e-8, 1e-10):
            spec = IntegrationSpec(axes=(axis,), rel_tol=rel_tol,
                                   max_evaluations=200_000)
            est = integrate_1d(f, spec)
            errs.append(abs(est.value - exact))
        floor = 1e-13 * max(abs(exact), 1.0)
        for coarse, fine in zip(errs, errs[1:]):
            assert fine <= coarse + floor


def test_estimate_validation():
    with pytest.raises(ValueError):
        IntegralEstimate(np.nan, 0.0, 10, True)
    with pytest.raises(ValueError):
        IntegrationSpec(rel_tol=-1.0)
    with pytest.raises(ValueError):
        Axis("finite", a=1.0, b=0.0)
