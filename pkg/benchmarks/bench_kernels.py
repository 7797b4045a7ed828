"""Compare the compiled kernel core against the numpy fallback.

Times the individual hot kernels on panel-sized arrays (the shape adaptive
quadrature actually feeds them) and two end-to-end workloads.  Run:

    python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np


def best_of(fn, repeat=7, number=200):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn()
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def kernel_benchmarks():
    from casimirnl import _kernels_py as py
    try:
        from casimirnl import _fast as cy
    except ImportError:
        print("compiled core not built; nothing to compare")
        return

    rng = np.random.default_rng(1)
    y_panel = rng.uniform(0.0, 12.0, 30)          # one GK panel pair
    xi_block = np.geomspace(1e-3, 1e3, 64)
    grid = np.geomspace(1e-3, 1e3, 2500)
    vals = np.exp(-grid) * grid
    log_grid = np.log(grid)
    x_query = rng.uniform(1e-2, 1e2, 30)
    osc = ([1.0, 0.5, 2.0], [1.0, 0.0, 3.0], [0.1, 0.2, 0.0])

    cases = [
        ("bose_tail_force [30]",
         lambda m: m.bose_tail_force(y_panel)),
        ("bose_tail_energy [30]",
         lambda m: m.bose_tail_energy(y_panel)),
        ("eps_imag_axis [64, 3 osc]",
         lambda m: m.eps_imag_axis(xi_block, 1.0, *osc)),
        ("xi2_eps_imag_axis [64, 3 osc]",
         lambda m: m.xi2_eps_imag_axis(xi_block, 1.0, *osc)),
        ("interp_semilogx [2500 -> 30]",
         lambda m: m.interp_semilogx(log_grid, vals, x_query)),
        ("pv_grid_transform [2500]",
         lambda m: m.pv_grid_transform(grid, vals, 1.7)),
    ]
    print(f"{'kernel':35s} {'numpy':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, call in cases:
        t_py = best_of(lambda: call(py))
        t_cy = best_of(lambda: call(cy))
        print(f"{name:35s} {t_py * 1e6:9.1f} us {t_cy * 1e6:9.1f} us "
              f"{t_py / t_cy:7.1f}x")


def end_to_end(label):
    """Force sweep plus one correction evaluation under the current backend."""
    from casimirnl._backend import BACKEND
    from casimirnl.coupling import NonlinearKernel
    from casimirnl.dispersion import LorentzMedium, LorentzOscillator
    from casimirnl.force import PlateSystem, casimir_force_T0, \
        casimir_force_finite_T
    from casimirnl.nonlinear import delta2_imag_axis
    from casimirnl.spectral import SpectralFunction

    med = LorentzMedium((LorentzOscillator(1.0, 1.0, 0.1),
                         LorentzOscillator(0.5, 3.0, 0.2)))
    t0 = time.perf_counter()
    for h in np.geomspace(0.3, 3.0, 12):
        casimir_force_T0(PlateSystem(h, medium=med), rel_tol=1e-9)
        casimir_force_finite_T(
            PlateSystem(h, medium=med, temperature=0.8), rel_tol=1e-9)
    t_force = time.perf_counter() - t0

    g = np.geomspace(1e-3, 30.0, 161)
    f = SpectralFunction(g, np.exp(-g))
    nu2 = NonlinearKernel.separable((f, f), gain=1.0)
    t0 = time.perf_counter()
    delta2_imag_axis(nu2, 1.0, rel_tol=1e-6)
    t_delta = time.perf_counter() - t0
    print(f"{label:>10s} backend={BACKEND:9s} force sweep {t_force:.3f}s, "
          f"delta2 point {t_delta:.3f}s", flush=True)


if __name__ == "__main__":
    if os.environ.get("_BENCH_CHILD"):
        end_to_end("fallback")
        sys.exit(0)
    kernel_benchmarks()
    print(flush=True)
    end_to_end("selected")
    env = dict(os.environ, CASIMIRNL_PURE_PYTHON="1", _BENCH_CHILD="1")
    subprocess.run([sys.executable, __file__], env=env, check=False)
