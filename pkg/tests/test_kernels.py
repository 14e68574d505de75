import math
import os
import subprocess
import sys

import numpy as np
import pytest

from annulus_minimizers import _kernel_py


def backend_in_subprocess(value):
    env = dict(os.environ)
    env["ANNULUS_PURE_PYTHON"] = value
    out = subprocess.run(
        [sys.executable, "-c", "from annulus_minimizers import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_env_forces_python():
    assert backend_in_subprocess("1") == "python"


def test_env_zero_keeps_default():
    try:
        import annulus_minimizers._kernel  # noqa: F401  (availability probe)
    except ImportError:
        expected = "python"
    else:
        expected = "compiled"
    assert backend_in_subprocess("0") == expected


def test_stationary_solution():
    out = np.array([0.25, 0.5, math.log(2.0)])
    u, phi, tau, *_ , status, n, kmin, kmax = _kernel_py.integrate(2.0, 0.5, 1.0, math.log(2.0), out)
    assert status == _kernel_py.OK
    assert np.allclose(u, 2 * out, rtol=1e-13)
    assert np.allclose(phi, 2.0, rtol=1e-13)


def test_stop_event():
    out = _kernel_py.integrate(3.0, 0.5, 1.0, 10.0, (), s_stop=5.0)
    tau, u, status = out[2], out[3], out[5]
    assert status == _kernel_py.STOPPED
    assert math.exp(u - tau) == pytest.approx(5.0, rel=1e-9)


def test_max_steps():
    out = _kernel_py.integrate(3.0, 0.5, 1.0, 10.0, (), max_steps=3)
    assert out[5] == _kernel_py.MAX_STEPS
