import os
import subprocess
import sys

import numpy as np
import pytest

from salagean import _kernels

from .conftest import random_series

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def batch(rng):
    # small coefficients keep reciprocals and powers bounded
    rows = np.array([random_series(rng, 40, size=0.3) for _ in range(6)])
    rows[:, 0] = 1.0
    return rows


@needs_numba
def test_cauchy_backends_agree(batch):
    np.testing.assert_allclose(_kernels.nb_cauchy(batch, batch[::-1].copy()), _kernels.np_cauchy(batch, batch[::-1]), atol=1e-13)


@needs_numba
@pytest.mark.parametrize("alpha", [-1.5, 0.25, 1.0, 2.7])
def test_power_backends_agree(batch, alpha):
    np.testing.assert_allclose(_kernels.nb_power(batch, alpha), _kernels.np_power(batch, alpha), rtol=1e-12, atol=1e-12)


@needs_numba
def test_reciprocal_backends_agree(batch):
    np.testing.assert_allclose(_kernels.nb_reciprocal(batch), _kernels.np_reciprocal(batch), rtol=1e-12, atol=1e-12)


@needs_numba
def test_polyval_backends_agree(batch, rng):
    z = 0.9 * np.exp(2j * np.pi * rng.random(17))
    np.testing.assert_allclose(_kernels.nb_polyval(batch, z), _kernels.np_polyval(batch, z), atol=1e-12)


def test_reciprocal_times_series_is_one(batch):
    prod = _kernels.cauchy(batch, _kernels.reciprocal(batch))
    expected = np.zeros_like(prod)
    expected[:, 0] = 1
    np.testing.assert_allclose(prod, expected, atol=1e-10)


def test_kernels_accept_one_dimensional_input():
    out = _kernels.power(np.array([1.0, 1.0, 0.0]), 2.0)
    assert out.shape == (1, 3)


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("", "numba" if _kernels.HAVE_NUMBA else "numpy")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, SALAGEAN_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "import salagean; print(salagean.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected


def test_numpy_backend_runs_the_pipeline():
    code = (
        "from salagean import *\n"
        "p = ClassParams(0.5, 0.25, 2)\n"
        "f = member_from_schwarz(Constant(-1), p, 16)\n"
        "import numpy as np\n"
        "print(abs(f.a(2)) - bound_a2(p))\n"
    )
    env = dict(os.environ, SALAGEAN_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert abs(float(out.stdout)) < 1e-12
