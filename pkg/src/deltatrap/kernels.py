"""Backend selection for the hot loops.

The compiled extension ``deltatrap._kernels`` is used when it imports; setting
``DELTATRAP_PURE_PYTHON=1`` forces the pure-Python fallback.  ``BACKEND``
records which one is active.
"""

import os

from . import _fallback

if os.environ.get("DELTATRAP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

numerov = _impl.numerov
tridiag_ql = _impl.tridiag_ql
householder_tridiag = _impl.householder_tridiag
jacobi_hermitian = _impl.jacobi_hermitian

fallback = _fallback
