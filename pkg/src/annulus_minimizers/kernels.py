"""Backend selection for the Euler-Lagrange integrator.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``ANNULUS_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python reference implementation is used. Both
expose ``integrate`` with the same signature and status codes.
"""

import os

from . import _kernel_py

OK = _kernel_py.OK
STOPPED = _kernel_py.STOPPED
STEP_FAILURE = _kernel_py.STEP_FAILURE
NEGATIVE_SLOPE = _kernel_py.NEGATIVE_SLOPE
MAX_STEPS = _kernel_py.MAX_STEPS


def _load():
    if os.environ.get("ANNULUS_PURE_PYTHON", "") not in ("", "0"):
        return _kernel_py, "python"
    try:
        from . import _kernel
    except ImportError:
        return _kernel_py, "python"
    return _kernel, "compiled"


backend, BACKEND = _load()
integrate = backend.integrate
