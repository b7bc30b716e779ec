"""Batched coefficient kernels.

Every kernel takes 2-D complex arrays of shape ``(batch, order + 1)`` and
works row by row.  When numba is importable the loops are compiled with
``@njit``; setting ``SALAGEAN_DISABLE_NUMBA=1`` (or lacking numba) selects the
pure-numpy path, which vectorizes over the batch axis instead.
"""

import os

import numpy as np

_FLAG = os.environ.get("SALAGEAN_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV
BACKEND = "numba" if USE_NUMBA else "numpy"


# --- pure numpy ------------------------------------------------------------


def np_cauchy(a, b):
    n = min(a.shape[1], b.shape[1])
    out = np.zeros((a.shape[0], n), dtype=np.complex128)
    for k in range(n):
        out[:, k] = np.sum(a[:, : k + 1] * b[:, k::-1], axis=1)
    return out


def np_power(g, alpha):
    h = np.zeros_like(g, dtype=np.complex128)
    h[:, 0] = 1.0
    for k in range(1, g.shape[1]):
        j = np.arange(1, k + 1)
        w = (alpha + 1.0) * j - k
        h[:, k] = np.sum(w * g[:, 1 : k + 1] * h[:, k - 1 :: -1], axis=1) / k
    return h


def np_reciprocal(g):
    r = np.zeros_like(g, dtype=np.complex128)
    inv0 = 1.0 / g[:, 0]
    r[:, 0] = inv0
    for k in range(1, g.shape[1]):
        r[:, k] = -inv0 * np.sum(g[:, 1 : k + 1] * r[:, k - 1 :: -1], axis=1)
    return r


def np_polyval(c, z):
    powers = z[None, :] ** np.arange(c.shape[1])[:, None]
    return c @ powers


# --- numba -----------------------------------------------------------------

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def nb_cauchy(a, b):
        n = min(a.shape[1], b.shape[1])
        out = np.zeros((a.shape[0], n), dtype=np.complex128)
        for row in range(a.shape[0]):
            for k in range(n):
                acc = 0j
                for j in range(k + 1):
                    acc += a[row, j] * b[row, k - j]
                out[row, k] = acc
        return out

    @_jit
    def nb_power(g, alpha):
        h = np.zeros(g.shape, dtype=np.complex128)
        for row in range(g.shape[0]):
            h[row, 0] = 1.0
            for k in range(1, g.shape[1]):
                acc = 0j
                for j in range(1, k + 1):
                    acc += ((alpha + 1.0) * j - k) * g[row, j] * h[row, k - j]
                h[row, k] = acc / k
        return h

    @_jit
    def nb_reciprocal(g):
        r = np.zeros(g.shape, dtype=np.complex128)
        for row in range(g.shape[0]):
            inv0 = 1.0 / g[row, 0]
            r[row, 0] = inv0
            for k in range(1, g.shape[1]):
                acc = 0j
                for j in range(1, k + 1):
                    acc += g[row, j] * r[row, k - j]
                r[row, k] = -inv0 * acc
        return r

    @_jit
    def nb_polyval(c, z):
        out = np.empty((c.shape[0], z.shape[0]), dtype=np.complex128)
        top = c.shape[1] - 1
        for row in range(c.shape[0]):
            for m in range(z.shape[0]):
                acc = c[row, top]
                for k in range(top - 1, -1, -1):
                    acc = acc * z[m] + c[row, k]
                out[row, m] = acc
        return out


def _prep(x):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    return x.reshape(1, -1) if x.ndim == 1 else x


def cauchy(a, b):
    a, b = _prep(a), _prep(b)
    return nb_cauchy(a, b) if USE_NUMBA else np_cauchy(a, b)


def power(g, alpha):
    g = _prep(g)
    return nb_power(g, float(alpha)) if USE_NUMBA else np_power(g, float(alpha))


def reciprocal(g):
    g = _prep(g)
    return nb_reciprocal(g) if USE_NUMBA else np_reciprocal(g)


def polyval(c, z):
    c = _prep(c)
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    # Evaluation is a dense matmul; BLAS beats the jitted Horner loop (see
    # benchmarks/bench_kernels.py), so both backends take the numpy path.
    return np_polyval(c, z)
