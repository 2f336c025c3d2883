"""Student-t and inverse-Gamma laws at half-integer order, and Monte Carlo checks.

Conventions follow the unscaled Student-t family

    f_nu(x) = A_nu (1 + x**2) ** (-nu - 1/2),   nu = n + 1/2,

whose characteristic function is ``exp(-|y|) q_n(|y|)``.  A variable with this
law is ``sqrt(2 T) Z`` where ``Z`` is standard normal and ``T`` is inverse
Gamma with shape ``nu`` and scale ``1/4``, i.e. ``T = 1 / (4 G)`` with
``G ~ Gamma(nu, 1)``.  ``G`` is drawn with numpy's ``standard_gamma``
(Marsaglia-Tsang squeeze/rejection for shape >= 1, with the usual
``U**(1/shape)`` boost below 1) from a PCG64 stream, so every draw is a
deterministic function of the seed.

Samples are produced in fixed-size chunks.  Chunk ``i`` gets its own stream
``SeedSequence(seed, spawn_key=(i,))``, so the merged sample does not depend
on how many workers processed the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np
from scipy import special

from bessel_linz.basis import q_poly
from bessel_linz.coefficients import CoeffTable, linearization_general
from bessel_linz.ratcore import APoly, ContractViolation, Scalar, as_rational, format_rational

CHUNK = 1 << 16
KS_COEFFICIENT = 1.628  # asymptotic Kolmogorov quantile at alpha = 0.01
MIN_SAMPLES = 10**4

Weight = Union[Fraction, float]


def default_workers() -> int:
    env = os.environ.get("BESSEL_LINZ_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StudentT:
    """Unscaled Student-t law with ``2n + 1`` degrees of freedom (``nu = n + 1/2``)."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ContractViolation(f"n must be a nonnegative integer, got {self.n!r}")

    @property
    def nu(self) -> float:
        return self.n + 0.5

    @property
    def dof(self) -> int:
        return 2 * self.n + 1

    @property
    def norm_const(self) -> float:
        n = self.n
        return math.exp(math.lgamma(n + 1) - math.lgamma(0.5) - math.lgamma(n + 0.5))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return self.norm_const * (1.0 + x * x) ** (-(self.n + 1))

    def cdf(self, x):
        """Distribution function, accurate to a few ulps in both tails.

        For ``|x| <= 1`` the substitution ``x = tan(phi)`` turns the integrand
        into ``cos(phi)**(2n)``, integrated in closed form.  Beyond that the
        tail mass is ``A/2 * B(w; n + 1/2, 1/2)`` with ``w = 1/(1 + x**2)``,
        summed as a series of positive terms so it never cancels.
        """
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        centre = np.minimum(ax, 1.0)
        phi = np.arctan(centre)
        r = np.sqrt(1.0 + centre * centre)
        cos, sin = 1.0 / r, centre / r
        integral = phi
        cos_pow = cos  # cos**(2j - 1)
        for j in range(1, self.n + 1):
            integral = cos_pow * sin / (2 * j) + (2 * j - 1) / (2 * j) * integral
            cos_pow = cos_pow * cos * cos
        inner = self.norm_const * integral
        tail = self._upper_tail(np.maximum(ax, 1.0))
        lower = np.where(ax <= 1.0, 0.5 - inner, tail)
        return np.where(x >= 0, 1.0 - lower, lower)

    def _upper_tail(self, ax):
        """``P(X > ax)`` for ``ax >= 1``."""
        w = 1.0 / (1.0 + ax * ax)
        p = self.n + 0.5
        coef = np.ones_like(w)  # (1/2)_k / k! * w**k
        total = coef / p
        for k in range(1, 400):
            coef = coef * ((k - 0.5) / k) * w
            term = coef / (p + k)
            total = total + term
            if np.all(term <= 1e-17 * total):
                break
        return 0.5 * self.norm_const * w**p * total

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        t = InverseGamma(self.n).sample(rng, size)
        return np.sqrt(2.0 * t) * rng.standard_normal(size)


@dataclass(frozen=True)
class InverseGamma:
    """Inverse Gamma law with shape ``n + 1/2`` and scale ``1/4``."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ContractViolation(f"n must be a nonnegative integer, got {self.n!r}")

    @property
    def nu(self) -> float:
        return self.n + 0.5

    def density(self, t):
        t = np.asarray(t, dtype=float)
        nu = self.nu
        log_c = -2 * nu * math.log(2.0) - math.lgamma(nu)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.exp(log_c - 1.0 / (4.0 * t) - (nu + 1.0) * np.log(t))
        return np.where(t > 0, out, 0.0)

    def cdf(self, t):
        # P(1/(4G) <= t) = P(G >= 1/(4t)), regularized upper incomplete gamma
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = special.gammaincc(self.nu, 1.0 / (4.0 * np.where(t > 0, t, 1.0)))
        return np.where(t > 0, out, 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return 1.0 / (4.0 * rng.standard_gamma(self.nu, size))


def student_density(n: int, x):
    return StudentT(n).density(x)


def student_cdf(n: int, x):
    return StudentT(n).cdf(x)


def char_function_k(n: int, y: float) -> float:
    """``exp(-|y|) q_n(|y|)``, the characteristic function of ``StudentT(n)``."""
    y = abs(float(y))
    return math.exp(-y) * q_poly(n).eval_float(y)


# ---------------------------------------------------------------------------
# mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixtureSpec:
    """Finite mixture ``sum_k w_k f_{k + 1/2}``; ``k`` is the Bessel index.

    Exact (Fraction) weights must sum to exactly one; floating weights, used
    only for irrational mixing parameters, to within ``1e-12``.
    """

    components: tuple[tuple[int, Weight], ...]

    def __post_init__(self):
        comps = tuple(sorted((int(k), w) for k, w in self.components))
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ContractViolation("a mixture needs at least one component")
        if any(w < 0 for _, w in comps):
            raise ContractViolation(f"negative mixture weight in {comps!r}")
        total = sum(w for _, w in comps)
        if all(isinstance(w, (int, Fraction)) for _, w in comps):
            if total != 1:
                raise ContractViolation(f"weights sum to {total}, not 1")
        elif abs(total - 1.0) > 1e-12:
            raise ContractViolation(f"weights sum to {total!r}, not 1")

    @property
    def exact(self) -> bool:
        return all(isinstance(w, (int, Fraction)) for _, w in self.components)

    def as_dict(self) -> dict[int, Weight]:
        return dict(self.components)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return sum(float(w) * student_cdf(k, x) for k, w in self.components)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return sum(float(w) * student_density(k, x) for k, w in self.components)

    def inverse_gamma_cdf(self, t):
        t = np.asarray(t, dtype=float)
        return sum(float(w) * InverseGamma(k).cdf(t) for k, w in self.components)


def mixture_from_table(table: CoeffTable, a: Scalar | None = None) -> MixtureSpec:
    """Mixture weights from a coefficient table, evaluated at a rational ``a``.

    Zero weights are dropped.  A negative weight raises, since it would
    contradict nonnegativity of the coefficients on ``[0, 1]``.
    """
    entries = table.basis_entries()
    if table.symbolic:
        if a is None:
            raise ContractViolation("symbolic table needs a value for a")
        a = as_rational(a)
        if not 0 <= a <= 1:
            raise ContractViolation(f"a={a} outside [0, 1]")
        entries = {k: v.eval(a) if isinstance(v, APoly) else v for k, v in entries.items()}
    for k, w in entries.items():
        if w < 0:
            raise ValueError(f"negative coefficient {w} at k={k}")
    return MixtureSpec(tuple((k, w) for k, w in entries.items() if w != 0))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KSReport:
    params: dict
    samples: int
    seed: int
    ks_statistic: float
    critical_value: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.ks_statistic < self.critical_value))

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "samples": self.samples,
            "seed": self.seed,
            "ks_statistic": self.ks_statistic,
            "critical_value": self.critical_value,
            "pass": self.passed,
        }


def ks_statistic(sample: np.ndarray, cdf: Callable) -> float:
    """``sup |F_emp - F|`` against a continuous reference CDF."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    f = cdf(x)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def critical_value(samples: int) -> float:
    return KS_COEFFICIENT / math.sqrt(samples)


def chunked_sample(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    workers: int | None = None,
) -> np.ndarray:
    """Concatenate ``draw(rng_i, size_i)`` over fixed chunks with per-chunk streams."""
    sizes = [min(CHUNK, samples - start) for start in range(0, samples, CHUNK)]

    def run(i: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))
        return draw(rng, sizes[i])

    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(sizes) == 1:
        parts = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    return np.concatenate(parts)


def _check_mc_args(n: int, m: int, a: Scalar, samples: int) -> Fraction:
    for name, v in (("n", n), ("m", m)):
        if not isinstance(v, int) or v < 0:
            raise ContractViolation(f"{name} must be >= 0, got {v!r}")
    a = as_rational(a)
    if not 0 <= a <= 1:
        raise ContractViolation(f"a={a} outside [0, 1]")
    if samples < MIN_SAMPLES:
        raise ContractViolation(f"need at least {MIN_SAMPLES} samples, got {samples}")
    return a


def _params(n: int, m: int, a: Fraction) -> dict:
    return {"n": n, "m": m, "a": format_rational(a)}


def mc_convolution_check(
    n: int, m: int, a: Scalar, samples: int, seed: int, workers: int | None = None
) -> KSReport:
    """KS test of ``a X_n + (1-a) X_m`` against the Student-t mixture."""
    a = _check_mc_args(n, m, a, samples)
    mixture = mixture_from_table(linearization_general(n, m), a)
    xn, xm = StudentT(n), StudentT(m)
    fa, fb = float(a), float(1 - a)

    def draw(rng, size):
        return fa * xn.sample(rng, size) + fb * xm.sample(rng, size)

    sample = chunked_sample(draw, samples, seed, workers)
    d = ks_statistic(sample, mixture.cdf)
    return KSReport(
        {**_params(n, m, a), "kind": "convolution"}, samples, seed, d, critical_value(samples)
    )


def mc_inverse_gamma_check(
    n: int, m: int, a: Scalar, samples: int, seed: int, workers: int | None = None
) -> KSReport:
    """KS test of ``a**2 Z_n + (1-a)**2 Z_m`` against the inverse-Gamma mixture."""
    a = _check_mc_args(n, m, a, samples)
    mixture = mixture_from_table(linearization_general(n, m), a)
    zn, zm = InverseGamma(n), InverseGamma(m)
    fa, fb = float(a * a), float((1 - a) ** 2)

    def draw(rng, size):
        return fa * zn.sample(rng, size) + fb * zm.sample(rng, size)

    sample = chunked_sample(draw, samples, seed, workers)
    d = ks_statistic(sample, mixture.inverse_gamma_cdf)
    return KSReport(
        {**_params(n, m, a), "kind": "inverse_gamma"}, samples, seed, d, critical_value(samples)
    )


def majority_vote(
    check: Callable[..., KSReport],
    n: int,
    m: int,
    a: Scalar,
    samples: int,
    seed: int,
    rounds: int = 3,
    workers: int | None = None,
) -> tuple[bool, list[KSReport]]:
    """Run ``check`` on seeds ``seed, seed+1, ...``; pass when at least two thirds agree."""
    reports = [check(n, m, a, samples, seed + r, workers) for r in range(rounds)]
    passes = sum(r.passed for r in reports)
    return 3 * passes >= 2 * rounds, reports


# ---------------------------------------------------------------------------
# Fourier-side identity and the d-statistic
# ---------------------------------------------------------------------------


def fourier_identity_error(n: int, m: int, a: Scalar, grid: Sequence[float]) -> float:
    """Max relative gap between both sides of the characteristic-function identity.

    Left: ``exp(-u) q_n(a u) q_m((1-a) u)``; right: ``sum_k beta_k exp(-u) q_k(u)``.
    """
    a = as_rational(a)
    table = linearization_general(n, m).evaluate(a)
    fa, fb = float(a), float(1 - a)
    qn, qm = q_poly(n), q_poly(m)
    worst = 0.0
    for u in grid:
        e = math.exp(-u)
        lhs = e * qn.eval_float(fa * u) * qm.eval_float(fb * u)
        rhs = sum(float(w) * e * q_poly(k).eval_float(u) for k, w in table.items() if w)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst


def d_statistic_table(f1: int, f2: int, theta: float) -> MixtureSpec:
    """Mixture law of ``d = t1 sin(theta) - t2 cos(theta)`` with odd degrees of freedom.

    Weights are the coefficients ``beta_k^(n,m)`` at ``a = sin(theta)`` rounded
    to double; component ``k`` has ``2k + 1`` degrees of freedom.
    """
    for name, f in (("f1", f1), ("f2", f2)):
        if not isinstance(f, int) or f < 1 or f % 2 == 0:
            raise ContractViolation(f"{name}={f!r} must be an odd positive integer")
    if not 0.0 <= theta <= math.pi / 2:
        raise ContractViolation(f"theta={theta!r} outside [0, pi/2]")
    n, m = (f1 - 1) // 2, (f2 - 1) // 2
    # the double nearest sin(theta) is itself a rational in [0, 1]; evaluating
    # there exactly avoids cancellation in the expanded coefficients
    a = Fraction(math.sin(theta))
    comps = []
    for k, poly in linearization_general(n, m).items():
        w = poly.eval(a)
        if w < 0:
            raise ValueError(f"negative weight {w} at k={k}")
        if w > 0:
            comps.append((k, float(w)))
    return MixtureSpec(tuple(comps))
