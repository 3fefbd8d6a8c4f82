"""One-dimensional orthogonal polynomial families with exact coefficients.

Conventions: Legendre ``l_n(1) = 1``; Jacobi ``P_n^(a,b)(1) = C(n+a, n)``.
The integrated Legendre polynomial is ``L_n(x) = int_{-1}^x l_{n-1}``, which
vanishes at both endpoints for ``n >= 2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .polyalgebra import MPoly

X = MPoly.variable(1, 0)


def _check_order(n: int, minimum: int) -> None:
    if not isinstance(n, int) or n < minimum:
        raise ValueError(f"order must be an integer >= {minimum}, got {n!r}")


@lru_cache(maxsize=None)
def legendre(n: int) -> MPoly:
    _check_order(n, 0)
    if n == 0:
        return MPoly.constant(1, 1)
    if n == 1:
        return X
    # (k+1) l_{k+1} = (2k+1) x l_k - k l_{k-1}
    k = n - 1
    return (X * legendre(k) * (2 * k + 1) - legendre(k - 1) * k) / (k + 1)


def antiderivative(p: MPoly) -> MPoly:
    return MPoly(1, {(e + 1,): c / (e + 1) for (e,), c in p.terms.items()})


@lru_cache(maxsize=None)
def integrated_legendre(n: int) -> MPoly:
    _check_order(n, 2)
    prim = antiderivative(legendre(n - 1))
    return prim - prim(Fraction(-1))


def homogenize(p: MPoly, degree: int, x_form: MPoly, t: MPoly) -> MPoly:
    """``t^degree * p(x_form / t)`` expanded without division.

    ``x_form`` and ``t`` are polynomials in the target variables; requires
    ``degree >= p.degree``.
    """
    if p.dim != 1:
        raise ValueError("homogenize expects a univariate polynomial")
    if p.degree > degree:
        raise ValueError("degree below polynomial degree")
    out = MPoly.zero(t.dim)
    for (e,), c in p.terms.items():
        out = out + (x_form**e) * (t ** (degree - e)) * c
    return out


@lru_cache(maxsize=None)
def scaled_integrated_legendre(n: int) -> MPoly:
    """``L^s_n(x, t) = t^n L_n(x / t)`` as a polynomial in ``(x, t)``."""
    _check_order(n, 2)
    x, t = MPoly.variables(2)
    return homogenize(integrated_legendre(n), n, x, t)


def _check_jacobi(n: int, alpha: int, beta: int) -> None:
    _check_order(n, 0)
    if not (isinstance(alpha, int) and isinstance(beta, int)) or alpha <= -1 or beta <= -1:
        raise ValueError(f"Jacobi parameters must be integers > -1, got ({alpha}, {beta})")


def _jacobi_coefficients(k: int, alpha: int, beta: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients of ``a1 P_k = (a2 + a3 x) P_{k-1} - a4 P_{k-2}`` for ``k >= 2``."""
    s = 2 * k + alpha + beta
    a1 = Fraction(2 * k * (k + alpha + beta) * (s - 2))
    a2 = Fraction((s - 1) * (alpha * alpha - beta * beta))
    a3 = Fraction((s - 1) * s * (s - 2))
    a4 = Fraction(2 * (k + alpha - 1) * (k + beta - 1) * s)
    return a1, a2, a3, a4


@lru_cache(maxsize=None)
def jacobi(n: int, alpha: int, beta: int) -> MPoly:
    _check_jacobi(n, alpha, beta)
    if n == 0:
        return MPoly.constant(1, 1)
    if n == 1:
        return (X * (alpha + beta + 2) + (alpha - beta)) / 2
    a1, a2, a3, a4 = _jacobi_coefficients(n, alpha, beta)
    return ((X * a3 + a2) * jacobi(n - 1, alpha, beta) - jacobi(n - 2, alpha, beta) * a4) / a1


@lru_cache(maxsize=None)
def homogenized_jacobi(n: int, alpha: int, beta: int) -> MPoly:
    """``b^n P_n^(alpha,beta)(2a/b - 1)`` in variables ``(a, b)``.

    Built with the three-term recurrence in homogeneous form: the argument
    ``x`` becomes ``2a - b`` and each lower order picks up a factor ``b``.
    """
    _check_jacobi(n, alpha, beta)
    a, b = MPoly.variables(2)
    if n == 0:
        return MPoly.constant(2, 1)
    if n == 1:
        return ((2 * a - b) * (alpha + beta + 2) + b * (alpha - beta)) / 2
    a1, a2, a3, a4 = _jacobi_coefficients(n, alpha, beta)
    prev = homogenized_jacobi(n - 1, alpha, beta)
    prev2 = homogenized_jacobi(n - 2, alpha, beta)
    return (((2 * a - b) * a3 + b * a2) * prev - b * b * prev2 * a4) / a1
