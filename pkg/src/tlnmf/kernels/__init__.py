"""Backend dispatch for the hot elementwise kernels.

The active backend is chosen once at import time from the TLNMF_BACKEND
environment variable:

* ``auto`` (default): numba if importable, else numpy
* ``numba``: require the jitted kernels, fail if numba is missing
* ``numpy``: force the pure-numpy fallback

Both backend modules expose the same five functions; everything above
this package calls them through the names re-exported here.
"""

import os

from ..errors import ConfigError

_CHOICE = os.environ.get("TLNMF_BACKEND", "auto").strip().lower()

if _CHOICE not in ("auto", "numba", "numpy"):
    raise ConfigError(
        f"TLNMF_BACKEND must be 'auto', 'numba' or 'numpy', got {_CHOICE!r}"
    )

if _CHOICE == "numpy":
    from . import numpy_backend as _impl
else:
    try:
        from . import numba_backend as _impl
    except ImportError:
        if _CHOICE == "numba":
            raise
        from . import numpy_backend as _impl

is_div_sum = _impl.is_div_sum
fit_loss = _impl.fit_loss
fit_loss_and_slope = _impl.fit_loss_and_slope
gradient_weights = _impl.gradient_weights
hessian_weights = _impl.hessian_weights


def backend_name():
    """Name of the kernel backend selected at import time."""
    return _impl.NAME
