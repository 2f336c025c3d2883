"""Exact connection and linearization coefficients of Bessel polynomials.

The polynomials are normalized so that ``q_n(0) = 1``.  Everything in the
algebra layer is exact (``fractions.Fraction``); the ``stochastic`` module is
the only place floating point appears.
"""

from bessel_linz.ratcore import (
    APoly,
    ContractViolation,
    UPoly,
    binomial,
    format_rational,
    parse_rational,
    pochhammer,
)
from bessel_linz.basis import (
    BesselExpansion,
    alpha,
    carlitz_delta,
    gamma_coeff,
    monomial_to_bessel,
    poly_to_bessel,
    q_poly,
    q_rec,
)
from bessel_linz.coefficients import (
    BernsteinCertificate,
    CoeffTable,
    bernstein_certify,
    certify_nonneg,
    connection_closed,
    connection_oracle,
    linearization_equal_closed,
    linearization_general,
    macdonald3_expand,
    product_expansion,
)

__all__ = [
    "APoly",
    "BernsteinCertificate",
    "BesselExpansion",
    "CoeffTable",
    "ContractViolation",
    "UPoly",
    "alpha",
    "bernstein_certify",
    "binomial",
    "carlitz_delta",
    "certify_nonneg",
    "connection_closed",
    "connection_oracle",
    "format_rational",
    "gamma_coeff",
    "linearization_equal_closed",
    "linearization_general",
    "macdonald3_expand",
    "monomial_to_bessel",
    "parse_rational",
    "pochhammer",
    "poly_to_bessel",
    "product_expansion",
    "q_poly",
    "q_rec",
]

__version__ = "0.1.0"
