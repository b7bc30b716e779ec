"""Closed-form coefficient, Fekete-Szego and distortion bounds.

Each bound comes in two provenances.  ``printed`` evaluates the stated
formula verbatim, misprints included.  ``derived`` is recomputed from the
coefficient identities

    a2 = D1 c1
    a3 = D2 c2 - (alpha - 1)/2 D1^2 c1^2
    a4 = D3 c3 - (alpha - 1) D1 D2 c1 c2 + (alpha - 1)(2 alpha - 1)/6 D1^3 c1^3

with ``Dk = (1 - beta) alpha^(n-1) / (alpha + k)^n`` and ``|ck| <= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .classes import ClassParams
from .errors import DomainError

Provenance = Literal["printed", "derived"]
PROVENANCES: tuple = ("printed", "derived")
BOUND_NAMES = ("a2", "a3", "a4", "fekete_szego", "distortion_lower", "distortion_upper")


def coefficient_scale(params: ClassParams, k: int) -> float:
    """``(1 - beta) alpha^(n-1) / (alpha + k)^n``: the factor tying a-coefficients to c_k."""
    a, b, n = params.alpha, params.beta, params.n
    return (1.0 - b) * a ** (n - 1) / (a + k) ** n


def _check(provenance: str):
    if provenance not in PROVENANCES:
        raise ValueError(f"provenance must be 'printed' or 'derived', got {provenance!r}")


def bound_a2(params: ClassParams, provenance: Provenance = "derived") -> float:
    _check(provenance)
    a, b, n = params.alpha, params.beta, params.n
    return 2.0 * (1.0 - b) * a ** (n - 1) / (a + 1) ** n


def bound_a3(params: ClassParams, provenance: Provenance = "derived") -> float:
    _check(provenance)
    a, b, n = params.alpha, params.beta, params.n
    if a >= 1:
        return 2.0 * (1.0 - b) * a ** (n - 1) / (a + 2) ** n
    if provenance == "printed":
        num = (a + 1) ** (2 * n) - (a - 1) * a ** (n - 1) * (1 - b) * (a - 2)
        return 2.0 * (1 - b) * a ** (n - 1) * num / ((a + 2) ** 2 * (a + 1) ** (2 * n))
    num = (a + 1) ** (2 * n) - (a - 1) * a ** (n - 1) * (1 - b) * (a + 2) ** n
    return 2.0 * a ** (n - 1) * (1 - b) * num / ((a + 2) ** n * (a + 1) ** (2 * n))


def printed_a4_terms(params: ClassParams) -> tuple:
    """The four numerator terms A1..A4 in the printed form."""
    a, b, n = params.alpha, params.beta, params.n
    a1 = 6 * a ** (n - 1) * (1 - b) * (a + 2) ** n * (a + 1) ** (3 * n)
    a2 = 12 * (a - 1) * a ** (2 * n - 2) * (1 - b) * (a + 1) ** (2 * n) * (a + 3) ** n
    a3 = 12 * (a - 1) ** 2 * a ** (3 * n - 3) * (1 - b) * (a + 2) ** n * (a + 3) ** n
    a4 = 2 * (a - 1) * (a - 2) * a ** (2 * n - 2) * (1 - b) * (a + 2) ** 3 * (a + 3) ** n
    return a1, a2, a3, a4


def bound_a4(params: ClassParams, provenance: Provenance = "derived") -> float:
    _check(provenance)
    a, n = params.alpha, params.n
    if provenance == "printed":
        if a >= 1:
            return 2.0 * (1 - params.beta) * a ** (n - 1) / (a + 3) ** n
        a1, a2, a3, a4 = printed_a4_terms(params)
        return (a1 - a2 + a3 - a4) / (3 * (a + 3) ** n * (a + 2) ** n * (a + 1) ** (3 * n))
    d1, d2, d3 = (coefficient_scale(params, k) for k in (1, 2, 3))
    return (
        2.0 * d3
        + 4.0 * abs(a - 1) * d1 * d2
        + (4.0 / 3.0) * abs((a - 1) * (2 * a - 1)) * d1**3
    )


def fekete_szego_bound(params: ClassParams, mu: float, provenance: Provenance = "derived") -> float:
    """Bound on ``|a3 - mu a2^2|``."""
    _check(provenance)
    a, b, n = params.alpha, params.beta, params.n
    two_a = 2.0 * a ** (n - 1) * (1 - b) / (a + 2) ** n
    big_b = a ** (2 * n - 2) * (1 - b) ** 2 / (a + 1) ** (2 * n)
    if provenance == "derived":
        return two_a + 2.0 * big_b * abs(2.0 * mu + (a - 1))
    if mu <= (a - 1) / 2:
        return two_a
    return two_a + 2.0 * (a - 1) * big_b * (2.0 * mu - (a - 1))


def distortion_bounds(
    params: ClassParams, r: float, provenance: Provenance = "derived", form: str = "display"
) -> tuple:
    """Bounds on ``Re`` of the operator value on ``|z| = r``.

    ``derived`` returns bounds on the normalized ``L_n``; ``printed`` returns
    the stated pair for the unnormalized ``alpha^n L_n``.  ``form="proof"``
    swaps in the lower bound with ``(1 + r)`` in place of ``(1 + r)^2``.
    """
    _check(provenance)
    if not 0 < r < 1:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    a, b, n = params.alpha, params.beta, params.n
    if provenance == "derived":
        lower = (2 * b - 1) + 2 * (1 - b) / (1 + r)
        upper = b + (1 - b) * (1 + r) / (1 - r)
        return lower, upper
    if form not in ("display", "proof"):
        raise ValueError("form must be 'display' or 'proof'")
    power = 2 if form == "display" else 1
    lower = ((r - 1) ** 2 - a**n * (1 + r) ** power) / (2 * r * (1 + r))
    upper = a**n * (1 + r) / (1 - r)
    return lower, upper


@dataclass(frozen=True)
class BoundVariant:
    """One named bound at fixed parameters.

    ``extra`` carries mu for ``fekete_szego`` and r for the distortion bounds.
    Distortion values are reported in normalized ``L_n`` units for both
    provenances (printed values are divided by ``alpha^n``).
    """

    name: str
    provenance: Provenance
    params: ClassParams
    extra: Optional[float] = None
    form: str = "display"

    def __post_init__(self):
        if self.name not in BOUND_NAMES:
            raise ValueError(f"unknown bound {self.name!r}")
        _check(self.provenance)
        if self.name.startswith("distortion") or self.name == "fekete_szego":
            if self.extra is None:
                raise ValueError(f"{self.name} needs an extra parameter")

    @property
    def label(self) -> str:
        if self.name == "distortion_lower" and self.provenance == "printed" and self.form == "proof":
            return "printed:proof"
        return self.provenance

    @property
    def kind(self) -> str:
        """``upper`` when the bound caps the functional from above."""
        return "lower" if self.name == "distortion_lower" else "upper"

    def value(self) -> float:
        p = self.params
        if self.name == "a2":
            return bound_a2(p, self.provenance)
        if self.name == "a3":
            return bound_a3(p, self.provenance)
        if self.name == "a4":
            return bound_a4(p, self.provenance)
        if self.name == "fekete_szego":
            return fekete_szego_bound(p, self.extra, self.provenance)
        lower, upper = distortion_bounds(p, self.extra, self.provenance, self.form)
        v = lower if self.name == "distortion_lower" else upper
        if self.provenance == "printed":
            v /= p.alpha**p.n
        return v

    def to_dict(self) -> dict:
        d = {"name": self.name, "variant": self.label, "params": self.params.to_dict(), "value": self.value()}
        if self.extra is not None:
            d["extra"] = self.extra
        return d


def variants_for(name: str, params: ClassParams, extra: Optional[float] = None, which: str = "both") -> list:
    """All bound variants of ``name`` selected by ``which`` (printed|derived|both)."""
    provs = PROVENANCES if which == "both" else (which,)
    out = []
    for prov in provs:
        out.append(BoundVariant(name, prov, params, extra))
        if name == "distortion_lower" and prov == "printed":
            out.append(BoundVariant(name, prov, params, extra, form="proof"))
    return out
