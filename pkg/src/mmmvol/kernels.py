"""Backend selection for the numerical kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module with identical functions is used.  Setting ``MMMVOL_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("MMMVOL_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

log_poisson = _impl.log_poisson
log_gamma_p = _impl.log_gamma_p
log_gamma_q = _impl.log_gamma_q
log_ncx2_tail = _impl.log_ncx2_tail
log_bessel_i_scaled = _impl.log_bessel_i_scaled
bessel_i_scaled = _impl.bessel_i_scaled


def available_backends():
    """Map backend name to module, for tests and benchmarks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["compiled"] = _kernels
    return out
