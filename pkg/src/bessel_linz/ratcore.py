"""Exact rational scalars and dense univariate polynomial rings.

Scalars are :class:`fractions.Fraction` (always reduced, denominator > 0).
Two polynomial rings are provided, one in ``u`` (:class:`UPoly`) and one in
``a`` (:class:`APoly`).  They share the implementation but refuse to mix, so a
coefficient of a connection table can never be added to a Bessel polynomial by
accident.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class ContractViolation(ValueError):
    """An argument is outside the documented domain of an operation."""


def as_rational(x: Scalar | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(x: Scalar) -> str:
    """Canonical ``"num/den"`` string, or ``"num"`` when the denominator is 1."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; also accepts decimal literals like ``0.25``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def rat_arith(x: Scalar, y: Scalar, op: str) -> Fraction:
    x, y = as_rational(x), as_rational(y)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        return x / y  # ZeroDivisionError on y == 0
    raise ValueError(f"unknown operator {op!r}")


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside ``0 <= k <= n``."""
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


def pochhammer(z: Scalar, n: int) -> Fraction:
    """Rising factorial ``z (z+1) ... (z+n-1)``; empty product for ``n = 0``."""
    if n < 0:
        raise ContractViolation(f"pochhammer length must be >= 0, got {n}")
    z = as_rational(z)
    result = Fraction(1)
    for j in range(n):
        result *= z + j
    return result


def _trim(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    out = [as_rational(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class _Poly:
    """Dense polynomial over Q; index i holds the coefficient of x**i."""

    __slots__ = ("coeffs", "_hash")
    var = "x"

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self.coeffs = _trim(coeffs)
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar):
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1):
        if k < 0:
            raise ContractViolation("monomial degree must be >= 0")
        return cls([0] * k + [c])

    @classmethod
    def from_strings(cls, items: Sequence[str]):
        return cls(parse_rational(s) for s in items)

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, _Poly):
            return type(self) is type(other) and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            # constants must hash like the scalar they compare equal to
            self._hash = (hash(self[0]) if len(self.coeffs) <= 1
                          else hash((type(self).__name__, self.coeffs)))
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                coeff = format_rational(c)
                terms.append(f"({coeff})*{mono}" if mono and "/" in coeff else
                             f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(terms).replace("+ -", "- ")

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs] or ["0"]

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, _Poly):
            if type(other) is not type(self):
                raise TypeError(
                    f"cannot combine {type(self).__name__} with {type(other).__name__}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return type(self)((other,))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return type(self)()
            return type(self)(c * other for c in self.coeffs)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return type(self)()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return type(self)(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar only."""
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            inv = 1 / as_rational(other)
            return self * inv
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ContractViolation("polynomial power must be a nonnegative integer")
        result = type(self).one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int):
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return type(self)([0] * k + list(self.coeffs))

    # -- evaluation and substitution --------------------------------------

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x: Scalar) -> Fraction:
        """Exact Horner evaluation at a rational point."""
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def scale_arg(self, s: Scalar):
        """The polynomial ``p(s * x)``."""
        s = as_rational(s)
        out = []
        power = Fraction(1)
        for c in self.coeffs:
            out.append(c * power)
            power *= s
        return type(self)(out)

    def derivative(self):
        return type(self)(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose_affine(self, c0: Scalar, c1: Scalar):
        """The polynomial ``p(c0 + c1 * x)``, by Horner in the ring."""
        lin = type(self)((c0, c1))
        acc = type(self)()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def common_denominator(self) -> int:
        return reduce(math.lcm, (c.denominator for c in self.coeffs), 1)


class UPoly(_Poly):
    """Polynomial in ``u`` with rational coefficients."""

    __slots__ = ()
    var = "u"


class APoly(_Poly):
    """Polynomial in the mixing parameter ``a`` with rational coefficients."""

    __slots__ = ()
    var = "a"

    def reflect(self) -> "APoly":
        """The polynomial ``p(1 - a)``."""
        return self.compose_affine(1, -1)


A = APoly((0, 1))
ONE_MINUS_A = APoly((1, -1))


def poly_arith(p: _Poly, q: _Poly, op: str) -> _Poly:
    if type(p) is not type(q):
        raise TypeError("operands must be in the same polynomial ring")
    if op == "+":
        return p + q
    if op == "-":
        return p - q
    if op == "*":
        return p * q
    raise ValueError(f"unknown operator {op!r}")


def poly_eval(p: _Poly, x: Scalar) -> Fraction:
    return p.eval(x)


def poly_scale_arg(p: _Poly, s: Scalar) -> _Poly:
    return p.scale_arg(s)
