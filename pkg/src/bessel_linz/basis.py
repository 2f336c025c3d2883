"""Bessel polynomials ``q_n`` and exact change of basis to and from monomials.

``q_n(u) = sum_k alpha(n, k) u**k`` with ``q_n(0) = 1``; ``e**-u q_n(u)`` is the
characteristic function of the Student-t law with ``2n + 1`` degrees of freedom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from bessel_linz.ratcore import (
    APoly,
    ContractViolation,
    Scalar,
    UPoly,
    as_rational,
    binomial,
    pochhammer,
)

Coefficient = Union[Fraction, APoly]

HALF = Fraction(1, 2)


def _check_index(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, int) or value < lo or value > hi:
        raise ContractViolation(f"{name}={value!r} outside [{lo}, {hi}]")


def _check_nonneg(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ContractViolation(f"n={n!r} must be a nonnegative integer")


def alpha(n: int, k: int) -> Fraction:
    """Coefficient of ``u**k`` in ``q_n``: ``n! (2n-k)! 2**k / ((2n)! (n-k)! k!)``."""
    _check_nonneg(n)
    _check_index("k", k, 0, n)
    f = math.factorial
    return Fraction(f(n) * f(2 * n - k) * 2**k, f(2 * n) * f(n - k) * f(k))


@lru_cache(maxsize=None)
def q_poly(n: int) -> UPoly:
    """The Bessel polynomial ``q_n`` built from its explicit coefficients."""
    if not isinstance(n, int) or n < 0:
        raise ContractViolation(f"q_poly needs n >= 0, got {n!r}")
    return UPoly(alpha(n, k) for k in range(n + 1))


def q_rec(n: int, q_n: UPoly, q_prev: UPoly) -> UPoly:
    """Three-term step ``q_{n+1} = q_n + u**2 / (4n**2 - 1) * q_{n-1}``, valid for n >= 1."""
    if not isinstance(n, int) or n < 1:
        raise ContractViolation(f"three-term recursion is stated for n >= 1, got {n!r}")
    return q_n + q_prev.shift(2) * Fraction(1, 4 * n * n - 1)


def q_chain(n_max: int) -> list[UPoly]:
    """``[q_0, ..., q_{n_max}]`` generated by the three-term recursion only."""
    out = [UPoly.one(), UPoly((1, 1))][: n_max + 1]
    for n in range(1, n_max):
        out.append(q_rec(n, out[n], out[n - 1]))
    return out


def q_derivative_identity_check(n: int) -> bool:
    """``q_n' = q_n - u/(2n-1) q_{n-1}`` as an exact polynomial identity."""
    if n < 1:
        raise ContractViolation("derivative identity is stated for n >= 1")
    rhs = q_poly(n) - q_poly(n - 1).shift(1) * Fraction(1, 2 * n - 1)
    return q_poly(n).derivative() == rhs


def carlitz_delta(n: int, i: int) -> Fraction:
    """Coefficient of ``q_i`` in the expansion of ``u**n`` (Carlitz)."""
    _check_nonneg(n)
    _check_index("i", i, 0, n)
    # (2i + 1 - n)! is undefined below the cut, where the coefficient is zero
    if 2 * i < n - 1:
        return Fraction(0)
    f = math.factorial
    sign = -1 if (n - i) % 2 else 1
    return Fraction(sign * f(n + 1) * f(2 * i), 2**n * f(n - i) * f(i) * f(2 * i + 1 - n))


@dataclass(frozen=True)
class BesselExpansion:
    """Coefficients of a polynomial in the basis ``q_0, ..., q_max_degree``.

    Entries are :class:`~fractions.Fraction` (numeric mode) or
    :class:`~bessel_linz.ratcore.APoly` (symbolic in ``a``).
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def max_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def symbolic(self) -> bool:
        return any(isinstance(c, APoly) for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def evaluate(self, a: Scalar) -> "BesselExpansion":
        """Numeric expansion obtained by substituting a rational ``a``."""
        return BesselExpansion(
            c.eval(a) if isinstance(c, APoly) else as_rational(c) for c in self.coeffs
        )

    def reconstruct(self) -> UPoly:
        """``sum_k coeffs[k] q_k(u)``; numeric mode only."""
        if self.symbolic:
            raise ContractViolation("evaluate the expansion at a rational a first")
        total = UPoly.zero()
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + q_poly(k) * c
        return total


def _back_substitute(residual: list, zero) -> list:
    """Triangular solve against the leading coefficients of ``q_k``.

    ``residual[j]`` is the coefficient of ``u**j``; entries may be rationals or
    APoly, since only addition and scaling by rationals is needed.
    """
    residual = list(residual)
    d = len(residual) - 1
    out = [zero] * (d + 1)
    for k in range(d, -1, -1):
        c = residual[k]
        if not c:
            continue
        q = q_poly(k)
        c = c * (1 / q.coeffs[k])
        out[k] = c
        for j in range(k + 1):
            residual[j] = residual[j] - c * q.coeffs[j]
    return out


def poly_to_bessel(p: UPoly | Sequence[Coefficient]) -> BesselExpansion:
    """Express a polynomial in ``u`` in the Bessel basis.

    ``p`` is a :class:`UPoly`, or a dense sequence indexed by power of ``u``
    whose entries are APoly (this is how products with an ``a``-dependent
    argument are expanded without a bivariate ring).
    """
    if isinstance(p, UPoly):
        return BesselExpansion(_back_substitute(list(p.coeffs), Fraction(0)))
    coeffs = list(p)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    zero = APoly.zero() if any(isinstance(c, APoly) for c in coeffs) else Fraction(0)
    return BesselExpansion(_back_substitute(coeffs, zero))


def monomial_to_bessel(n: int) -> BesselExpansion:
    """``u**n = sum_i carlitz_delta(n, i) q_i(u)``."""
    return BesselExpansion(carlitz_delta(n, i) for i in range(n + 1))


def gamma_coeff(n: int, k: int, i: int) -> Fraction:
    """Coefficient of ``q_{n+i}`` in ``u**(2k) q_{n-k}(u)``.

    ``2**(2k) C(k, i) (n - k + 1/2)_{k+i} (-n - 1/2)_{k-i}``.
    """
    _check_nonneg(n)
    _check_index("k", k, 0, n)
    _check_index("i", i, 0, k)
    return (
        4**k
        * binomial(k, i)
        * pochhammer(n - k + HALF, k + i)
        * pochhammer(-n - HALF, k - i)
    )


def lemma31_check(n: int, k: int) -> bool:
    """``u**(2k) q_{n-k} == sum_i gamma_coeff(n, k, i) q_{n+i}`` exactly."""
    lhs = q_poly(n - k).shift(2 * k)
    rhs = UPoly.zero()
    for i in range(k + 1):
        rhs = rhs + q_poly(n + i) * gamma_coeff(n, k, i)
    return lhs == rhs


def bessel_recursion_coeffs(n: int, j: int) -> list[Fraction]:
    """Weights of ``k_{nu+i}`` in the expansion of ``u**(2j) k_{nu-j}``, ``nu = n + 1/2``.

    The Gamma ratios are reduced to rising factorials, which is exact at
    half-integer orders.
    """
    _check_index("j", j, 0, n)
    nu = n + HALF
    out = []
    for i in range(j + 1):
        d = j - i
        ratio1 = pochhammer(nu + 1 - d, d)  # Gamma(nu+1) / Gamma(nu+1-d)
        ratio2 = pochhammer(nu - j, i + j)  # Gamma(nu+i) / Gamma(nu-j)
        out.append((-1) ** d * 4**j * binomial(j, i) * ratio1 * ratio2)
    return out


def half_integer_bessel_recursion_check(n: int, j: int) -> bool:
    """Bessel-function recursion at order ``n + 1/2`` as a polynomial identity.

    With ``k_{m+1/2}(u) = e**-u q_m(u)`` the common factor ``e**-u`` cancels,
    leaving ``u**(2j) q_{n-j} == sum_i w_i q_{n+i}``.
    """
    weights = bessel_recursion_coeffs(n, j)
    lhs = q_poly(n - j).shift(2 * j)
    rhs = UPoly.zero()
    for i, w in enumerate(weights):
        rhs = rhs + q_poly(n + i) * w
    return lhs == rhs
