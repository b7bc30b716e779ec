"""Bound oracles that do not share code with the package."""

from functools import lru_cache

import numpy as np
import sympy as sp

_alpha, _z = sp.symbols("alpha z", positive=True)
_a = sp.symbols("a2 a3 a4")
_c = sp.symbols("c1 c2 c3")


@lru_cache(maxsize=None)
def coefficient_polynomials(alpha, beta, n):
    """a2, a3, a4 as polynomials in c1, c2, c3 by symbolic series inversion.

    Solves  ((alpha + k)/alpha)^n [ (f/z)^alpha ]_k = (1 - beta) c_k  for k = 1..3.
    """
    alpha, beta = sp.nsimplify(alpha), sp.nsimplify(beta)
    g = 1 + _a[0] * _z + _a[1] * _z**2 + _a[2] * _z**3
    h = sp.series(g**alpha, _z, 0, 4).removeO()
    eqs = [
        sp.Eq(((alpha + k) / alpha) ** n * sp.expand(h).coeff(_z, k), (1 - beta) * _c[k - 1])
        for k in (1, 2, 3)
    ]
    sol = sp.solve(eqs, _a, dict=True)[0]
    return tuple(sp.Poly(sp.expand(sol[x]), *_c) for x in _a)


def worst_case(poly):
    """Triangle inequality with |c_i| <= 2 applied monomial by monomial."""
    return float(sum(abs(complex(coef)) * 2 ** sum(mon) for mon, coef in poly.terms()))


def triangle_a4(alpha, beta, n):
    return worst_case(coefficient_polynomials(alpha, beta, n)[2])


def triangle_fekete(alpha, beta, n, mu):
    a2, a3, _ = coefficient_polynomials(alpha, beta, n)
    return worst_case(a3 - sp.nsimplify(mu) * a2 * a2)


def region_a3(alpha, beta, n, samples=20001):
    """max |a3| over the exact (c1, c2) region of positive-real-part functions.

    That region is c2 = c1^2/2 + (2 - |c1|^2/2) zeta with |c1| <= 2, |zeta| <= 1;
    with a3 = A c2 - (alpha - 1)/2 B c1^2 the worst phase aligns both terms,
    leaving a one-dimensional maximization over x = |c1|.
    """
    A = (1 - beta) * alpha ** (n - 1) / (alpha + 2) ** n
    B = alpha ** (2 * n - 2) * (1 - beta) ** 2 / (alpha + 1) ** (2 * n)
    x = np.linspace(0.0, 2.0, samples)
    return float(np.max(x**2 * abs(A - (alpha - 1) * B) / 2 + A * (2 - x**2 / 2)))
