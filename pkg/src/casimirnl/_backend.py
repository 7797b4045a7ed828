"""Select the compiled kernel core when available, numpy fallback otherwise.

Set CASIMIRNL_PURE_PYTHON=1 to force the fallback (the benchmark and the
backend-equivalence tests import both modules explicitly).
"""

import os

from . import _kernels_py

_REQUIRED = (
    "polylog2_exp", "polylog3_exp", "bose_tail_force", "bose_tail_energy",
    "eps_imag_axis", "xi2_eps_imag_axis", "interp_semilogx",
    "pv_grid_transform",
)

if os.environ.get("CASIMIRNL_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
        if not all(hasattr(_impl, name) for name in _REQUIRED):
            raise ImportError("incomplete compiled core")
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

ZETA2 = _kernels_py.ZETA2
ZETA3 = _kernels_py.ZETA3

polylog2_exp = _impl.polylog2_exp
polylog3_exp = _impl.polylog3_exp
bose_tail_force = _impl.bose_tail_force
bose_tail_energy = _impl.bose_tail_energy
eps_imag_axis = _impl.eps_imag_axis
xi2_eps_imag_axis = _impl.xi2_eps_imag_axis
interp_semilogx = _impl.interp_semilogx
pv_grid_transform = _impl.pv_grid_transform
