"""Members of the class T_n^alpha(beta) and numerical membership checks.

A function belongs to the class when the normalized operator value
``L_n(f) = D^n[f^alpha] / (alpha^n z^alpha)`` has real part above ``beta`` in
the unit disk.  Members are built backwards from the representation

    L_n(f) = (2 beta - 1) + 2 (1 - beta) / (1 + z phi(z)),   |phi| <= 1,

or equivalently ``L_n(f) = beta + (1 - beta) p`` with ``p`` of positive real
part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Union

import numpy as np

from . import _kernels
from .errors import BadMeasure, DomainError, InversionDivergence
from .series import (
    NormalizedFunction,
    TruncatedSeries,
    pow_real,
    salagean_normalized,
    salagean_weights,
    tail_bound,
)

DEFAULT_ORDER = 32
GRID_ORDER = 64
DEFAULT_RADII = (0.3, 0.6, 0.9)
DEFAULT_ANGLES = 256
BOUNDARY_SAMPLES = 720
SUP_TOL = 1e-9
# coefficients of 1/(1 + w) with |w| < 1 are bounded by 1
RECIPROCAL_TOL = 1e-6


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    beta: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (0.0 <= self.beta < 1.0):
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be a nonnegative integer, got {self.n}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "n", int(self.n))

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "n": self.n}


# --- Schwarz functions -----------------------------------------------------


def _boundary_sup(coeffs: np.ndarray) -> float:
    z = np.exp(2j * np.pi * np.arange(BOUNDARY_SAMPLES) / BOUNDARY_SAMPLES)
    return float(np.abs(_kernels.polyval(coeffs, z)[0]).max())


@dataclass(frozen=True)
class Constant:
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1 + SUP_TOL:
            raise DomainError(f"|c| must be <= 1, got {abs(self.c)}")

    def coefficients(self) -> np.ndarray:
        return np.array([self.c])

    def to_dict(self) -> dict:
        return {"kind": "constant", "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class Monomial:
    c: complex
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1 + SUP_TOL:
            raise DomainError(f"|c| must be <= 1, got {abs(self.c)}")
        if self.degree < 0:
            raise DomainError("monomial degree must be >= 0")

    def coefficients(self) -> np.ndarray:
        out = np.zeros(self.degree + 1, dtype=np.complex128)
        out[-1] = self.c
        return out

    def to_dict(self) -> dict:
        return {"kind": "monomial", "c": [self.c.real, self.c.imag], "degree": self.degree}


@dataclass(frozen=True)
class NormalizedPolynomial:
    """``scale * sum(raw[k] z**k)`` with the scale chosen so that sup|phi| <= 1."""

    raw: tuple
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "raw", tuple(complex(x) for x in self.raw))
        if not self.raw:
            raise DomainError("polynomial needs at least one coefficient")
        if _boundary_sup(self.coefficients()) > 1 + SUP_TOL:
            raise DomainError("polynomial exceeds 1 on the unit circle")

    @classmethod
    def from_raw(cls, raw) -> NormalizedPolynomial:
        """Scale ``raw`` so that its true sup-norm on the disk is at most 1.

        The sampled maximum ``M`` underestimates the sup-norm by at most a
        factor ``1 - d*pi/720`` (Bernstein), so dividing by ``M`` and
        multiplying by that factor is safe.
        """
        raw = np.asarray(raw, dtype=np.complex128)
        m = _boundary_sup(raw)
        if m == 0:
            return cls(tuple(raw), 1.0)
        degree = raw.size - 1
        factor = 1.0 - degree * np.pi / BOUNDARY_SAMPLES
        return cls(tuple(raw), float(factor / m))

    def coefficients(self) -> np.ndarray:
        return self.scale * np.asarray(self.raw, dtype=np.complex128)

    def to_dict(self) -> dict:
        return {
            "kind": "polynomial",
            "raw": [[x.real, x.imag] for x in self.raw],
            "scale": self.scale,
        }


SchwarzSpec = Union[Constant, Monomial, NormalizedPolynomial]


@dataclass(frozen=True)
class AtomMeasure:
    """Probability measure on the circle: point masses ``weights`` at ``angles``."""

    weights: tuple
    angles: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        t = tuple(float(x) for x in self.angles)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "angles", t)
        if len(w) != len(t) or not w:
            raise BadMeasure("weights and angles must be nonempty and of equal length")
        if min(w) < 0 or abs(math.fsum(w) - 1.0) > 1e-12:
            raise BadMeasure(f"weights must be nonnegative and sum to 1, got {w}")

    def to_dict(self) -> dict:
        return {"kind": "atoms", "weights": list(self.weights), "angles": list(self.angles)}


def spec_from_dict(d: dict):
    kind = d["kind"]
    if kind == "constant":
        return Constant(complex(*d["c"]))
    if kind == "monomial":
        return Monomial(complex(*d["c"]), int(d["degree"]))
    if kind == "polynomial":
        return NormalizedPolynomial(tuple(complex(*x) for x in d["raw"]), float(d["scale"]))
    if kind == "atoms":
        return AtomMeasure(tuple(d["weights"]), tuple(d["angles"]))
    raise ValueError(f"unknown spec kind {kind!r}")


# --- batch construction ----------------------------------------------------


def schwarz_to_s(phi_coeffs: np.ndarray, beta: float, terms: int) -> np.ndarray:
    """Rows of ``(2b - 1) + 2(1 - b)/(1 + z phi)`` from rows of phi coefficients."""
    phi_coeffs = np.atleast_2d(phi_coeffs)
    zphi = np.zeros((phi_coeffs.shape[0], terms), dtype=np.complex128)
    width = min(phi_coeffs.shape[1], terms - 1)
    zphi[:, 1 : width + 1] = phi_coeffs[:, :width]
    zphi[:, 0] = 1.0
    r = _kernels.reciprocal(zphi)
    worst = np.abs(r).max()
    if not np.isfinite(worst) or worst > 1.0 + RECIPROCAL_TOL:
        raise InversionDivergence(
            f"1/(1 + z phi) has a coefficient of size {worst:.3g}; |z phi| is not bounded by |z|"
        )
    s = 2.0 * (1.0 - beta) * r
    s[:, 0] = 1.0
    return s


def caratheodory_to_s(p: np.ndarray, beta: float) -> np.ndarray:
    s = (1.0 - beta) * np.atleast_2d(p).astype(np.complex128)
    s[:, 0] = 1.0
    return s


def atoms_to_p(weights: np.ndarray, angles: np.ndarray, terms: int) -> np.ndarray:
    """Rows ``c_k = 2 sum_j w_j exp(-i k t_j)`` with ``c_0 = 1``."""
    weights, angles = np.atleast_2d(weights), np.atleast_2d(angles)
    k = np.arange(terms)
    phases = np.exp(-1j * k[None, None, :] * angles[:, :, None])
    p = 2.0 * np.einsum("bj,bjk->bk", weights, phases)
    p[:, 0] = 1.0
    return p


def members_from_s(s: np.ndarray, params: ClassParams) -> np.ndarray:
    """Rows of f coefficients (order = terms) whose L_n equals the rows of ``s``."""
    s = np.atleast_2d(s)
    h = s / salagean_weights(params.alpha, params.n, s.shape[1] - 1)
    h[:, 0] = 1.0
    g = _kernels.power(h, 1.0 / params.alpha)
    f = np.zeros((s.shape[0], s.shape[1] + 1), dtype=np.complex128)
    f[:, 1:] = g
    f[:, 1] = 1.0
    return f


def salagean_rows(f: np.ndarray, params: ClassParams) -> np.ndarray:
    """Batch version of :func:`salagean_normalized` on rows of f coefficients."""
    g = np.ascontiguousarray(np.atleast_2d(f)[:, 1:])
    h = _kernels.power(g, params.alpha)
    return h * salagean_weights(params.alpha, params.n, h.shape[1] - 1)


def circle_points(radii, angles_count: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(angles_count) / angles_count
    return (np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)


@lru_cache(maxsize=64)
def _power_table(radii: tuple, angles_count: int, terms: int):
    points = circle_points(radii, angles_count)
    powers = points[None, :] ** np.arange(terms)[:, None]
    return np.ascontiguousarray(powers.real), np.ascontiguousarray(powers.imag)


def grid_real_parts(l_rows: np.ndarray, radii, angles_count: int) -> np.ndarray:
    """``Re`` of each row of coefficients on every point of a polar grid.

    The grid is shared by all rows, so two real matrix products against a
    cached table of powers replace per-point Horner loops.
    """
    l_rows = np.atleast_2d(l_rows)
    pr, pi = _power_table(tuple(float(r) for r in radii), int(angles_count), l_rows.shape[1])
    return np.ascontiguousarray(l_rows.real) @ pr - np.ascontiguousarray(l_rows.imag) @ pi


# --- public constructors ---------------------------------------------------


def _wrap(f_row: np.ndarray) -> NormalizedFunction:
    f_row = f_row.copy()
    f_row[0], f_row[1] = 0.0, 1.0
    return NormalizedFunction(TruncatedSeries(f_row))


def member_from_schwarz(phi: SchwarzSpec, params: ClassParams, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """Class member with ``L_n(f) = (2b - 1) + 2(1 - b)/(1 + z phi)``, truncated at z**order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    s = schwarz_to_s(phi.coefficients(), params.beta, order)
    return _wrap(members_from_s(s, params)[0])


def member_from_caratheodory(p: TruncatedSeries, params: ClassParams, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """Class member with ``L_n(f) = beta + (1 - beta) p``."""
    if p.coeffs[0] != 1:
        raise ValueError("Caratheodory function must satisfy p(0) = 1")
    terms = min(order, p.order + 1)
    s = caratheodory_to_s(p.coeffs[:terms], params.beta)
    return _wrap(members_from_s(s, params)[0])


def caratheodory_from_atoms(weights, angles, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """``sum_j w_j (1 + z e^{-i t_j}) / (1 - z e^{-i t_j})`` truncated at z**order."""
    m = AtomMeasure(tuple(weights), tuple(angles))
    p = atoms_to_p(np.array([m.weights]), np.array([m.angles]), order + 1)
    return TruncatedSeries(p[0])


def member_from_spec(spec, params: ClassParams, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    if isinstance(spec, AtomMeasure):
        return member_from_caratheodory(caratheodory_from_atoms(spec.weights, spec.angles, order), params, order)
    return member_from_schwarz(spec, params, order)


def koebe(order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``z / (1 - z)**2 = z + 2 z^2 + 3 z^3 + ...``"""
    return NormalizedFunction(TruncatedSeries(np.arange(order + 1, dtype=float)))


def rotated_koebe(xi: float, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``exp(-i xi) K(exp(i xi) z)``, i.e. ``a_k = k exp(i (k - 1) xi)``."""
    k = np.arange(order + 1)
    c = k * np.exp(1j * (k - 1) * xi)
    c[0], c[1] = 0.0, 1.0
    return NormalizedFunction(TruncatedSeries(c))


def bernardi_transform(f: NormalizedFunction, c: float, params: ClassParams) -> NormalizedFunction:
    """``F^alpha = (alpha + c) z^{-c} * integral_0^z t^{c-1} f(t)^alpha dt``.

    On ``h = (f/z)**alpha`` this multiplies coefficient k by
    ``(alpha + c)/(alpha + c + k)``.
    """
    gamma = params.alpha + c
    if gamma <= 0:
        raise DomainError(f"need alpha + c > 0, got {gamma}")
    h = pow_real(f.over_z(), params.alpha)
    k = np.arange(h.order + 1)
    big_h = h.coeffs * (gamma / (gamma + k))
    big_h[0] = 1.0
    g = pow_real(TruncatedSeries(big_h), 1.0 / params.alpha)
    out = np.concatenate([[0.0], g.coeffs])
    out[1] = 1.0
    return NormalizedFunction(TruncatedSeries(out), polynomial=f.polynomial and params.alpha == 1)


# --- membership ------------------------------------------------------------

Verdict = Literal["member", "boundary", "violation"]


@dataclass(frozen=True)
class MembershipReport:
    params: ClassParams
    radii: tuple
    angles_count: int
    min_real_part: float
    margin: float
    tail_estimate: float
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "radii": list(self.radii),
            "angles": self.angles_count,
            "min_real_part": self.min_real_part,
            "margin": self.margin,
            "tail_estimate": self.tail_estimate,
            "verdict": self.verdict,
        }


def classify(margin: float, tail: float) -> Verdict:
    if margin > tail:
        return "member"
    if margin < -tail:
        return "violation"
    return "boundary"


def _check_radii(radii) -> tuple:
    radii = tuple(float(r) for r in radii)
    if not radii or min(radii) <= 0 or max(radii) > 0.95:
        raise DomainError("membership radii must lie in (0, 0.95]")
    return radii


def check_membership(
    f: NormalizedFunction,
    params: ClassParams,
    radii=DEFAULT_RADII,
    angles_count: int = DEFAULT_ANGLES,
) -> MembershipReport:
    """Sample ``Re L_n(f)`` on circles and compare the minimum with beta.

    Polynomial inputs are padded to the grid order first, so the tail estimate
    then only reflects the expansion of ``(f/z)**alpha``.
    """
    radii = _check_radii(radii)
    if f.polynomial and f.order < GRID_ORDER:
        f = NormalizedFunction(f.series.pad(GRID_ORDER), polynomial=True)
    lser = salagean_normalized(f, params)
    values = grid_real_parts(lser.coeffs, radii, angles_count)[0]
    low = float(values.min())
    margin = low - params.beta
    tail = tail_bound(lser, max(radii))
    return MembershipReport(params, radii, angles_count, low, margin, tail, classify(margin, tail))


def membership_rows(f_rows: np.ndarray, params: ClassParams, radii=DEFAULT_RADII, angles_count: int = DEFAULT_ANGLES):
    """Vectorized membership verdicts for rows of truncated member coefficients."""
    radii = _check_radii(radii)
    l_rows = salagean_rows(f_rows, params)
    low = grid_real_parts(l_rows, radii, angles_count).min(axis=1)
    r = max(radii)
    top = l_rows.shape[1] - 1
    tails = np.abs(l_rows[:, -3:]).max(axis=1) * r ** (top + 1) / (1.0 - r)
    margins = low - params.beta
    verdicts = np.where(margins > tails, "member", np.where(margins < -tails, "violation", "boundary"))
    return low, margins, tails, verdicts
