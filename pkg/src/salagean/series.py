"""Truncated power series over the complex numbers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels
from .errors import NonUnitConstantTerm

if TYPE_CHECKING:
    from .classes import ClassParams

__all__ = [
    "TruncatedSeries",
    "NormalizedFunction",
    "mul",
    "pow_real",
    "reciprocal",
    "salagean_normalized",
    "salagean_weights",
    "eval_series",
    "tail_bound",
    "derivative",
    "integral_coeffwise",
]


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """``sum(c_k z**k for k in 0..order)`` with the higher terms unknown.

    The coefficient array is copied and made read-only on construction.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if c.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def geometric(cls, order: int, ratio: complex = 1.0) -> TruncatedSeries:
        """Truncation of ``1 / (1 - ratio*z)``."""
        return cls(np.asarray(ratio, dtype=np.complex128) ** np.arange(order + 1))

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError(f"cannot raise order {self.order} to {order} without padding")
        return TruncatedSeries(self.coeffs[: order + 1])

    def pad(self, order: int) -> TruncatedSeries:
        """Extend with exact zeros; only meaningful when the series is a polynomial."""
        if order <= self.order:
            return self.truncate(order)
        c = np.zeros(order + 1, dtype=np.complex128)
        c[: self.coeffs.size] = self.coeffs
        return TruncatedSeries(c)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.coeffs.size

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order) + 1
            return TruncatedSeries(self.coeffs[:n] + other.coeffs[:n])
        c = self.coeffs.copy()
        c[0] += other
        return TruncatedSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return TruncatedSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __call__(self, z):
        return eval_series(self, z)

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={np.array2string(self.coeffs[:6], precision=4)}...)"


@dataclass(frozen=True, eq=False)
class NormalizedFunction:
    """``f(z) = z + a_2 z^2 + ...`` stored as its truncated series.

    ``polynomial`` marks functions whose stored coefficients are the whole
    function (higher coefficients are exactly zero), as opposed to a
    truncation of an infinite expansion.  Membership checks pad polynomials.
    """

    series: TruncatedSeries
    polynomial: bool = False

    def __post_init__(self):
        c = self.series.coeffs
        if self.series.order < 1 or c[0] != 0 or c[1] != 1:
            raise ValueError("normalized functions need f(0) = 0 and f'(0) = 1 exactly")

    @classmethod
    def from_coeffs(cls, tail, polynomial: bool = True) -> NormalizedFunction:
        """Build ``z + tail[0] z^2 + tail[1] z^3 + ...``."""
        c = np.concatenate([[0.0, 1.0], np.asarray(tail, dtype=np.complex128).reshape(-1)])
        return cls(TruncatedSeries(c), polynomial=polynomial)

    @classmethod
    def identity(cls, order: int = 1) -> NormalizedFunction:
        c = np.zeros(max(order, 1) + 1, dtype=np.complex128)
        c[1] = 1.0
        return cls(TruncatedSeries(c), polynomial=True)

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    def a(self, k: int) -> complex:
        return complex(self.series.coeffs[k])

    def over_z(self) -> TruncatedSeries:
        """``f(z)/z``, one order lower."""
        return TruncatedSeries(self.series.coeffs[1:])

    def __call__(self, z):
        return eval_series(self.series, z)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller order."""
    return TruncatedSeries(_kernels.cauchy(a.coeffs, b.coeffs)[0])


def pow_real(g: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """Principal branch of ``g**alpha`` for ``g(0) = 1``.

    Uses the recurrence obtained from ``g h' = alpha g' h``::

        k h_k = sum_{j=1..k} ((alpha + 1) j - k) g_j h_{k-j},   h_0 = 1
    """
    if g.coeffs[0] != 1:
        raise NonUnitConstantTerm(f"constant term must be exactly 1, got {g.coeffs[0]!r}")
    return TruncatedSeries(_kernels.power(g.coeffs, alpha)[0])


def reciprocal(g: TruncatedSeries) -> TruncatedSeries:
    if g.coeffs[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    return TruncatedSeries(_kernels.reciprocal(g.coeffs)[0])


def salagean_weights(alpha: float, n: int, order: int) -> np.ndarray:
    """Multipliers ``((alpha + k)/alpha)**n`` for k = 0..order."""
    k = np.arange(order + 1, dtype=float)
    return ((alpha + k) / alpha) ** n


def salagean_normalized(f: NormalizedFunction, params: ClassParams) -> TruncatedSeries:
    """``D^n[f^alpha] / (alpha^n z^alpha)`` as a series in z.

    On ``h = (f/z)**alpha`` the operator multiplies coefficient k by
    ``((alpha + k)/alpha)**n``, so the constant term is exactly 1.
    """
    h = pow_real(f.over_z(), params.alpha)
    return integral_coeffwise(h, salagean_weights(params.alpha, params.n, h.order))


def eval_series(s: TruncatedSeries, z):
    """Horner evaluation of the truncated polynomial at scalar or array ``z``."""
    z_arr = np.asarray(z, dtype=np.complex128)
    out = _kernels.polyval(s.coeffs, z_arr.reshape(-1))[0]
    if z_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(z_arr.shape)


def tail_bound(s: TruncatedSeries, r: float) -> float:
    """Heuristic size of the neglected tail on ``|z| = r``.

    Assumes the next coefficients are no larger than the last three kept.
    """
    if not 0 <= r < 1:
        raise ValueError("tail_bound needs 0 <= r < 1")
    last = np.abs(s.coeffs[-3:]).max()
    return float(last * r ** (s.order + 1) / (1.0 - r))


def derivative(s: TruncatedSeries) -> TruncatedSeries:
    if s.order == 0:
        return TruncatedSeries(np.zeros(1))
    k = np.arange(1, s.order + 1)
    return TruncatedSeries(k * s.coeffs[1:])


def integral_coeffwise(s: TruncatedSeries, weights) -> TruncatedSeries:
    """Scale coefficient k by ``weights[k]``; the order is kept."""
    w = np.asarray(weights)
    if w.shape != s.coeffs.shape:
        raise ValueError(f"need {s.coeffs.size} weights, got {w.size}")
    return TruncatedSeries(s.coeffs * w)
