"""Shared fixtures: narrow-line spectra and kernels used as delta-function
stand-ins (an exact delta is not representable on a grid)."""

import numpy as np
import pytest

from casimirnl.coupling import NonlinearKernel
from casimirnl.spectral import SpectralFunction


def narrow_line(center=1.0, width=0.01, weight=1.0, n_cluster=801, span=60.0,
                backbone=(1e-3, 1e3, 201)):
    """sqrt of a normalized Lorentzian line: nu with nu^2 -> weight * delta
    as width -> 0, sampled densely across the line."""
    base = np.geomspace(*backbone)
    u = np.linspace(-1.0, 1.0, n_cluster)
    cluster = center + span * width * np.sinh(4 * u) / np.sinh(4)
    grid = np.unique(np.concatenate([base, cluster[cluster > 0]]))
    density = weight * (width / np.pi) / ((grid - center) ** 2 + width ** 2)
    return SpectralFunction(grid, np.sqrt(density))


def exponential_spectrum(lo=1e-3, hi=30.0, n=161, rate=1.0):
    grid = np.geomspace(lo, hi, n)
    return SpectralFunction(grid, np.exp(-rate * grid))


@pytest.fixture
def narrow_nu1():
    return narrow_line(1.0, 0.01)


@pytest.fixture
def narrow_nu2():
    f = narrow_line(1.0, 0.01)
    return NonlinearKernel.separable((f, f), gain=1.0, symmetric=True)


@pytest.fixture
def exp_nu2():
    f = exponential_spectrum()
    return NonlinearKernel.separable((f, f), gain=1.0, symmetric=True)


@pytest.fixture
def exp_nu3():
    f = exponential_spectrum(n=121)
    return NonlinearKernel.separable((f, f, f), gain=1.0, symmetric=True)
