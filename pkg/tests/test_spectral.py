import numpy as np
import pytest
from scipy.integrate import quad

from casimirnl.errors import GridTooCoarse
from casimirnl.spectral import (SpectralFunction, interp_weights, pv_transform,
                                pv_transform_with_error, pv_weights,
                                sine_weights)


def test_validation():
    with pytest.raises(ValueError):
        SpectralFunction(np.array([1.0, 0.5]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SpectralFunction(np.array([-1.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SpectralFunction(np.array([1.0, 2.0]), np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        SpectralFunction(np.array([1.0, 2.0]), np.array([1.0, 1.0]),
                         extrapolation="bogus")


def test_log_linear_interpolation():
    grid = np.array([1.0, 10.0])
    sf = SpectralFunction(grid, np.array([0.0, 1.0]))
    # halfway in log x
    assert sf(np.sqrt(10.0)) == pytest.approx(0.5, abs=1e-14)
    assert sf(0.5) == 0.0
    assert sf(20.0) == 0.0


def test_power_tail():
    grid = np.geomspace(1.0, 100.0, 40)
    sf = SpectralFunction(grid, grid ** -2.0, extrapolation="power")
    assert sf(1000.0) == pytest.approx(1e-6, rel=1e-10)


def test_csv_round_trip(tmp_path):
    grid = np.geomspace(0.1, 10.0, 17)
    sf = SpectralFunction(grid, np.sin(grid) ** 2)
    path = tmp_path / "sf.csv"
    sf.to_csv(path)
    back = SpectralFunction.from_csv(path)
    np.testing.assert_allclose(back.grid, sf.grid, rtol=1e-15)
    np.testing.assert_allclose(back.values, sf.values, rtol=1e-15)


class TestPVTransform:
    def test_against_quad_oracle(self):
        """Per-segment adaptive quadrature of the subtracted integrand plus
        the exact log term, vs the closed form."""
        grid = np.geomspace(0.05, 50.0, 25)
        f = np.exp(-grid) * grid
        w = 1.3

        def interp(x):
            return np.interp(x, grid, f)

        fw = interp(w)
        reg = 0.0
        for a, b in zip(grid[:-1], grid[1:]):
            pts = [w] if a < w < b else None
            reg += quad(lambda x: (interp(x) - fw) / (x * x - w * w),
                        a, b, points=pts, limit=200, epsabs=1e-13,
                        epsrel=1e-12)[0]
        log_term = fw / (2 * w) * np.log(
            abs((grid[-1] - w) * (grid[0] + w) / ((grid[-1] + w) * (grid[0] - w))))
        oracle = reg + log_term
        assert pv_transform(grid, f, w) == pytest.approx(oracle, rel=1e-9)

    def test_weights_match_transform(self):
        grid = np.geomspace(0.1, 10.0, 101)
        f = np.cos(grid) ** 2
        for w in (0.3, 1.0, 5.0):
            direct = pv_transform(grid, f, w)
            via_weights = float(pv_weights(grid, w) @ f)
            assert via_weights == pytest.approx(direct, rel=1e-12, abs=1e-14)

    def test_node_hit_is_finite(self):
        grid = np.geomspace(0.1, 10.0, 101)
        f = np.exp(-grid)
        val = pv_transform(grid, f, float(grid[50]))
        assert np.isfinite(val)

    def test_grid_too_coarse(self):
        grid = np.geomspace(0.1, 10.0, 9)
        f = 1.0 / (1.0 + (grid - 3.0) ** 2)
        with pytest.raises(GridTooCoarse):
            pv_transform_with_error(grid, f, 3.0, tol=1e-12)

    def test_complex_values(self):
        grid = np.geomspace(0.1, 10.0, 101)
        f = np.exp(-grid) * (1.0 + 2.0j)
        val = pv_transform(grid, f, 1.0)
        real = pv_transform(grid, np.exp(-grid), 1.0)
        assert val == pytest.approx(real * (1.0 + 2.0j), rel=1e-13)


class TestSineWeights:
    def test_against_quad_oracle(self):
        grid = np.geomspace(0.05, 20.0, 60)
        f = np.exp(-0.5 * grid) * grid
        t = 2.7

        def interp(x):
            return np.interp(x, grid, f)

        oracle = sum(
            quad(lambda x: interp(x) * np.sin(x * t) / x, a, b,
                 epsabs=1e-14, epsrel=1e-12)[0]
            for a, b in zip(grid[:-1], grid[1:]))
        val = float(sine_weights(grid, t) @ f)
        assert val == pytest.approx(oracle, rel=1e-9)

    def test_large_t_stable(self):
        grid = np.geomspace(0.05, 20.0, 300)
        f = np.exp(-0.5 * grid)
        val = float(sine_weights(grid, 400.0) @ f)
        assert np.isfinite(val)
        # Riemann-Lebesgue: decays with t
        small = float(sine_weights(grid, 4000.0) @ f)
        assert abs(small) < abs(val) + 1e-3


def test_interp_weights():
    grid = np.geomspace(0.1, 10.0, 50)
    sf = SpectralFunction(grid, np.tanh(grid))
    for w in (0.17, 1.0, 9.9):
        assert float(interp_weights(grid, w) @ sf.values) == pytest.approx(
            float(sf(w)), rel=1e-13)
    assert np.all(interp_weights(grid, 20.0) == 0.0)
