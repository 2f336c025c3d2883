"""Connection and linearization coefficients as exact polynomials in ``a``.

Three families are computed, each by a closed form or recursion and by an
independent oracle:

* ``c_k^(n)(a)``: ``q_n(a u) = sum_k c_k^(n)(a) q_k(u)``
* ``beta_i^(n)(a)``: ``q_n(a u) q_n((1-a) u) = sum_i beta_i^(n)(a) q_{n+i}(u)``
* ``beta_k^(n,m)(a)``: ``q_n(a u) q_m((1-a) u) = sum_k beta_k^(n,m)(a) q_k(u)``

Nonnegativity on ``[0, 1]`` is certified with Bernstein coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence, Union

from bessel_linz.basis import (
    HALF,
    alpha,
    carlitz_delta,
    gamma_coeff,
    poly_to_bessel,
    q_poly,
)
from bessel_linz.ratcore import (
    A,
    ONE_MINUS_A,
    APoly,
    ContractViolation,
    Scalar,
    UPoly,
    as_rational,
    binomial,
    pochhammer,
)

Entry = Union[APoly, Fraction]

CONNECTION = "connection"
LINEARIZATION_EQUAL = "linearization_equal"
LINEARIZATION_GENERAL = "linearization_general"
PRODUCT = "product"

CERTIFIED = "certified_nonneg"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients indexed by position in the Bessel basis.

    For ``linearization_equal`` tables the keys are ``i`` and the basis index
    is ``n + i`` (``index_offset = n``); every other kind is keyed directly by
    the basis index and spans the full range ``0 .. max degree``.
    """

    kind: str
    params: Mapping
    entries: Mapping[int, Entry]
    index_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def symbolic(self) -> bool:
        return any(isinstance(v, APoly) for v in self.entries.values())

    def __getitem__(self, k: int) -> Entry:
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def evaluate(self, a: Scalar) -> "CoeffTable":
        a = as_rational(a)
        values = {
            k: v.eval(a) if isinstance(v, APoly) else v for k, v in self.entries.items()
        }
        return CoeffTable(self.kind, {**self.params, "a": a}, values, self.index_offset)

    def total(self) -> Entry:
        zero = APoly.zero() if self.symbolic else Fraction(0)
        return sum(self.entries.values(), zero)

    def basis_entries(self) -> dict[int, Entry]:
        """Entries keyed by Bessel-basis index."""
        return {k + self.index_offset: v for k, v in self.entries.items()}

    def support(self) -> list[int]:
        return [k for k, v in self.entries.items() if v]


# ---------------------------------------------------------------------------
# connection coefficients
# ---------------------------------------------------------------------------


def connection_closed(n: int, k: int) -> APoly:
    """Closed form of ``c_k^(n)(a)`` as a sum of ``a**k (1-a)**r`` terms."""
    if not isinstance(n, int) or n < 0 or not isinstance(k, int) or not 0 <= k <= n:
        raise ContractViolation(f"need 0 <= k <= n, got n={n!r}, k={k!r}")
    if k == n:
        return A**n
    scale = Fraction(binomial(n, k), binomial(2 * n, 2 * k))
    inner = APoly.zero()
    for r in range(1, min(n - k, k + 1) + 1):
        weight = binomial(n + 1, k + 1 - r) * binomial(n - k - 1, r - 1)
        inner = inner + ONE_MINUS_A**r * weight
    return A**k * inner * scale


def connection_table(n: int) -> CoeffTable:
    return CoeffTable(CONNECTION, {"n": n}, {k: connection_closed(n, k) for k in range(n + 1)})


def connection_oracle(n: int) -> CoeffTable:
    """``c_k^(n)(a) = sum_{j>=k} a**j alpha(n, j) carlitz_delta(j, k)``."""
    if not isinstance(n, int) or n < 0:
        raise ContractViolation(f"n must be >= 0, got {n!r}")
    entries = {}
    for k in range(n + 1):
        entries[k] = APoly(
            alpha(n, j) * carlitz_delta(j, k) if j >= k else 0 for j in range(n + 1)
        )
    return CoeffTable(CONNECTION, {"n": n, "mode": "oracle"}, entries)


# ---------------------------------------------------------------------------
# equal-degree linearization
# ---------------------------------------------------------------------------


def linearization_equal_closed(n: int, i: int) -> APoly:
    """Closed form of ``beta_i^(n)(a)``, the weight of ``q_{n+i}``.

    Built from ``(4a(1-a))**i`` and even powers of ``2a - 1`` with positive
    rational weights, so nonnegativity on ``[0, 1]`` is manifest.
    """
    if not isinstance(n, int) or n < 0 or not isinstance(i, int) or not 0 <= i <= n:
        raise ContractViolation(f"need 0 <= i <= n, got n={n!r}, i={i!r}")
    f = math.factorial
    scale = (
        Fraction(f(n), f(2 * n)) ** 2
        * Fraction(1, 4**n)
        * Fraction(f(2 * n - 2 * i) * f(2 * n + 2 * i), f(n - i) * f(n + i))
    )
    centered_sq = APoly((-1, 2)) ** 2
    inner = APoly.zero()
    power = APoly.one()
    for j in range(n - i + 1):
        inner = inner + power * (binomial(2 * n + 1, 2 * j) * binomial(n - j, i))
        power = power * centered_sq
    return (A * ONE_MINUS_A * 4) ** i * inner * scale


def linearization_equal_table(n: int) -> CoeffTable:
    return CoeffTable(
        LINEARIZATION_EQUAL,
        {"n": n},
        {i: linearization_equal_closed(n, i) for i in range(n + 1)},
        index_offset=n,
    )


def macdonald3_weights(n: int) -> list[APoly]:
    """Weight of ``u**(2k) q_{n-k}(u)`` in ``q_n(a u) q_n((1-a) u)``."""
    base = A * ONE_MINUS_A
    out = []
    for k in range(n + 1):
        w = alpha(n, k) * pochhammer(HALF, n - k) / (2**k * pochhammer(HALF, n))
        out.append(base**k * w)
    return out


def macdonald3_expand(n: int) -> CoeffTable:
    """``beta_i^(n)`` assembled from the Macdonald-product weights and ``gamma_coeff``."""
    if not isinstance(n, int) or n < 0:
        raise ContractViolation(f"n must be >= 0, got {n!r}")
    weights = macdonald3_weights(n)
    entries = {}
    for i in range(n + 1):
        acc = APoly.zero()
        for k in range(i, n + 1):
            acc = acc + weights[k] * gamma_coeff(n, k, i)
        entries[i] = acc
    return CoeffTable(LINEARIZATION_EQUAL, {"n": n, "mode": "macdonald"}, entries, index_offset=n)


# ---------------------------------------------------------------------------
# general linearization
# ---------------------------------------------------------------------------


def _scaled_q(n: int, factor: APoly) -> list[APoly]:
    """``q_n(factor * u)`` as a list of APoly indexed by power of u."""
    out = []
    power = APoly.one()
    for c in q_poly(n):
        out.append(power * c)
        power = power * factor
    return out


def _convolve(p: Sequence[APoly], q: Sequence[APoly]) -> list[APoly]:
    out = [APoly.zero()] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + x * y
    return out


@lru_cache(maxsize=None)
def _general_oracle(n: int, m: int) -> tuple[APoly, ...]:
    product = _convolve(_scaled_q(n, A), _scaled_q(m, ONE_MINUS_A))
    expansion = poly_to_bessel(product)
    coeffs = list(expansion.coeffs) + [APoly.zero()] * (n + m + 1 - len(expansion))
    for c in coeffs:
        # a-degree is not stated anywhere; the product structure bounds it by n + m
        assert c.degree <= n + m, (n, m, c.degree)
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _general_recursion(n: int, m: int) -> tuple[APoly, ...]:
    if m == 0:
        return tuple(connection_closed(n, k) for k in range(n + 1))
    if n == 0:
        return tuple(connection_closed(m, k).reflect() for k in range(m + 1))
    left = _general_recursion(n - 1, m)
    right = _general_recursion(n, m - 1)
    a_sq = A * A * Fraction(1, 2 * n - 1)
    b_sq = ONE_MINUS_A * ONE_MINUS_A * Fraction(1, 2 * m - 1)
    out = [APoly.zero()]
    for k in range(n + m):
        out.append((a_sq * left[k] + b_sq * right[k]) * (2 * k + 1))
    return tuple(out)


def linearization_general(n: int, m: int, mode: str = "recursion") -> CoeffTable:
    """``beta_k^(n,m)(a)`` for ``k = 0 .. n+m`` (entries below ``min(n, m)`` are zero).

    ``mode="recursion"`` fills the ``(n, m)`` grid from the boundary rows
    ``(n, 0)`` and ``(0, m)`` with the two-term recursion in ``k``;
    ``mode="oracle"`` expands the product in ``u`` and back-substitutes.
    """
    for name, v in (("n", n), ("m", m)):
        if not isinstance(v, int) or v < 0:
            raise ContractViolation(f"{name} must be >= 0, got {v!r}")
    if mode == "recursion":
        coeffs = _general_recursion(n, m)
    elif mode == "oracle":
        coeffs = _general_oracle(n, m)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CoeffTable(
        LINEARIZATION_GENERAL, {"n": n, "m": m, "mode": mode}, dict(enumerate(coeffs))
    )


def lemma33_check(n: int, m: int) -> bool:
    """The ``k``-recursion as an identity between three oracle-mode tables."""
    if n < 1 or m < 1:
        raise ContractViolation("the recursion is stated for n, m >= 1")
    top = _general_oracle(n, m)
    left = _general_oracle(n - 1, m)
    right = _general_oracle(n, m - 1)
    if top[0]:
        return False
    for k in range(n + m):
        lhs = top[k + 1] * Fraction(1, 2 * k + 1)
        rhs = A * A * left[k] * Fraction(1, 2 * n - 1) + ONE_MINUS_A**2 * right[k] * Fraction(
            1, 2 * m - 1
        )
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# k-factor products
# ---------------------------------------------------------------------------


def _check_weights(degrees: Sequence[int], weights: Sequence[Fraction]) -> list[Fraction]:
    if len(degrees) != len(weights) or not degrees:
        raise ContractViolation("need one positive weight per degree, at least one factor")
    if any(not isinstance(d, int) or d < 0 for d in degrees):
        raise ContractViolation(f"degrees must be nonnegative integers: {degrees!r}")
    weights = [as_rational(w) for w in weights]
    if any(w <= 0 for w in weights):
        raise ContractViolation(f"weights must be positive: {weights!r}")
    if sum(weights) != 1:
        raise ContractViolation(f"weights must sum to 1, got {sum(weights)}")
    return weights


def _iterated_product(degrees: tuple[int, ...], weights: tuple[Fraction, ...]) -> list[Fraction]:
    if len(degrees) == 1:
        out = [Fraction(0)] * (degrees[0] + 1)
        out[degrees[0]] = Fraction(1)
        return out
    last_deg, last_w = degrees[-1], weights[-1]
    rest = 1 - last_w
    inner = _iterated_product(degrees[:-1], tuple(w / rest for w in weights[:-1]))
    out = [Fraction(0)] * (sum(degrees) + 1)
    for j, g in enumerate(inner):
        if not g:
            continue
        for i, beta in enumerate(_general_recursion(last_deg, j)):
            if beta:
                out[i] += g * beta.eval(last_w)
    return out


def product_expansion(degrees: Sequence[int], weights: Sequence[Scalar]) -> CoeffTable:
    """Bessel-basis coefficients of ``prod_i q_{n_i}(a_i u)`` with ``sum a_i = 1``.

    Built one factor at a time: the first ``k-1`` factors are rescaled to
    weights ``a_j / (1 - a_k)`` and expanded in ``q_j((1 - a_k) u)``; each term
    is then linearized against ``q_{n_k}(a_k u)``.
    """
    weights = _check_weights(degrees, weights)
    values = _iterated_product(tuple(degrees), tuple(weights))
    return CoeffTable(
        PRODUCT,
        {"degrees": list(degrees), "weights": weights},
        dict(enumerate(values)),
    )


def product_oracle(degrees: Sequence[int], weights: Sequence[Scalar]) -> CoeffTable:
    """Direct expansion of the whole product in monomials, then back-substitution."""
    weights = _check_weights(degrees, weights)
    poly = UPoly.one()
    for d, w in zip(degrees, weights):
        poly = poly * q_poly(d).scale_arg(w)
    values = list(poly_to_bessel(poly).coeffs)
    values += [Fraction(0)] * (sum(degrees) + 1 - len(values))
    return CoeffTable(
        PRODUCT,
        {"degrees": list(degrees), "weights": weights, "mode": "oracle"},
        dict(enumerate(values)),
    )


# ---------------------------------------------------------------------------
# Bernstein certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BernsteinCertificate:
    poly: APoly
    degree_used: int
    bernstein_coeffs: tuple[Fraction, ...] = field(repr=False)
    verdict: str

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _integer_form(p: APoly) -> tuple[list[int], int]:
    den = p.common_denominator()
    return [int(c * den) for c in p.coeffs], den


def _scaled_bernstein(ints: list[int], degree: int) -> list[int]:
    # C(d, k) * b_k = sum_i C(d - i, k - i) c_i, so signs match b_k
    out = []
    for k in range(degree + 1):
        acc = 0
        for i in range(min(k, len(ints) - 1) + 1):
            if ints[i]:
                acc += math.comb(degree - i, k - i) * ints[i]
        out.append(acc)
    return out


def bernstein_certify(p: APoly, degree: int) -> BernsteinCertificate:
    """Bernstein coefficients of ``p`` on ``[0, 1]`` at a fixed degree."""
    if degree < max(p.degree, 0):
        raise ContractViolation(f"degree {degree} is below deg p = {p.degree}")
    ints, den = _integer_form(p)
    scaled = _scaled_bernstein(ints, degree)
    coeffs = tuple(Fraction(b, den * math.comb(degree, k)) for k, b in enumerate(scaled))
    verdict = CERTIFIED if all(b >= 0 for b in scaled) else INDETERMINATE
    return BernsteinCertificate(p, degree, coeffs, verdict)


def certify_nonneg(p: APoly, max_degree: int) -> BernsteinCertificate:
    """Raise the Bernstein degree until all coefficients are nonnegative.

    Stops at ``max_degree`` with an ``indeterminate`` verdict; never reports a
    polynomial nonnegative without a certificate.
    """
    start = max(p.degree, 0)
    ints, _ = _integer_form(p)
    for degree in range(start, max(max_degree, start) + 1):
        if all(b >= 0 for b in _scaled_bernstein(ints, degree)):
            return bernstein_certify(p, degree)
    return bernstein_certify(p, max(max_degree, start))


def grid_min(p: APoly, points: int = 1001) -> tuple[Fraction, Fraction]:
    """Exact minimum of ``p`` over ``{j / (points - 1)}``; returns ``(value, a)``."""
    ints, den = _integer_form(p)
    steps = points - 1
    d = len(ints) - 1
    powers = [steps**e for e in range(d + 1)]
    best = None
    for j in range(points):
        # steps**d * den * p(j / steps), by integer Horner
        acc = 0
        for i in range(d, -1, -1):
            acc = acc * j + ints[i] * powers[d - i]
        if best is None or acc < best[0]:
            best = (acc, j)
    scale = den * steps ** max(d, 0)
    return Fraction(best[0], scale), Fraction(best[1], steps)
