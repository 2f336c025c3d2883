import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate, stats

from bessel_linz.coefficients import connection_table, linearization_general
from bessel_linz.ratcore import ContractViolation
from bessel_linz.stochastic import (
    InverseGamma,
    MixtureSpec,
    StudentT,
    char_function_k,
    chunked_sample,
    critical_value,
    d_statistic_table,
    fourier_identity_error,
    ks_statistic,
    majority_vote,
    mc_convolution_check,
    mc_inverse_gamma_check,
    mixture_from_table,
    student_cdf,
    student_density,
)


def test_density_values():
    assert student_density(0, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)
    assert student_density(1, 0.0) == pytest.approx(2 / math.pi, rel=1e-14)
    x = np.linspace(-7, 7, 57)
    for n in range(5):
        np.testing.assert_array_equal(student_density(n, x), student_density(n, -x))


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10])
def test_density_integrates_to_one(n):
    total, _ = integrate.quad(lambda x: student_density(n, x), -np.inf, np.inf,
                              epsabs=1e-13, epsrel=1e-13)
    assert abs(total - 1) < 1e-10


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_density_matches_rescaled_scipy_t(n):
    df = 2 * n + 1
    x = np.linspace(-5, 5, 41)
    ref = stats.t.pdf(x * math.sqrt(df), df) * math.sqrt(df)
    np.testing.assert_allclose(student_density(n, x), ref, rtol=1e-12)


def test_cdf_values():
    assert student_cdf(0, 0.0) == 0.5
    assert student_cdf(0, 1.0) == pytest.approx(0.75, abs=1e-15)
    v = float(student_cdf(5, 10.0))
    assert 0.999 < v < 1
    tail, _ = integrate.quad(lambda x: student_density(5, x), 10, np.inf, epsabs=1e-15)
    assert v == pytest.approx(1 - tail, abs=1e-12)


@pytest.mark.parametrize("n", [0, 1, 2, 4, 9])
def test_cdf_against_quadrature_and_derivative(n):
    for x in (-8.0, -1.3, 0.0, 0.4, 2.5, 30.0):
        ref, _ = integrate.quad(lambda t: student_density(n, t), -np.inf, x,
                                epsabs=1e-14, epsrel=1e-13)
        assert float(student_cdf(n, x)) == pytest.approx(ref, abs=1e-10)
    h = 1e-5
    xs = np.linspace(-6, 6, 25)
    fd = (student_cdf(n, xs + h) - student_cdf(n, xs - h)) / (2 * h)
    np.testing.assert_allclose(fd, student_density(n, xs), atol=1e-8)


@pytest.mark.parametrize("n", [0, 1, 6, 20])
def test_cdf_branches_meet_at_one(n):
    t = StudentT(n)
    below = float(t.cdf(np.nextafter(1.0, 0.0)))
    at = float(t.cdf(1.0))
    assert abs(at - below) < 2e-15
    assert float(t.cdf(-1.0)) == pytest.approx(float(t._upper_tail(np.array(1.0))), abs=2e-15)


def test_cdf_monotone_with_limits():
    xs = np.linspace(-1e3, 1e3, 10_000)
    for n in (0, 1, 3, 8):
        c = student_cdf(n, xs)
        assert np.all(np.diff(c) >= 0)
        assert float(student_cdf(n, -1e12)) < 1e-9 and float(student_cdf(n, 1e12)) > 1 - 1e-9
    mix = MixtureSpec(((1, F(1, 4)), (2, F(3, 4))))
    assert np.all(np.diff(mix.cdf(xs)) >= 0)


def test_char_function():
    assert char_function_k(0, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert all(char_function_k(n, 0.0) == 1.0 for n in range(10))
    assert char_function_k(2, 2.0) == pytest.approx(13 / 3 * math.exp(-2), rel=1e-15)
    assert char_function_k(3, -1.5) == char_function_k(3, 1.5)
    assert all(0 < char_function_k(n, y) <= 1 for n in range(6) for y in (0.1, 1, 5))


@pytest.mark.parametrize("n", [0, 2])
def test_char_function_is_fourier_transform(n):
    for y in (0.5, 1.7):
        # even integrand: twice the cosine transform over [0, inf)
        val, _ = integrate.quad(lambda x: 2 * student_density(n, x), 0, np.inf,
                                weight="cos", wvar=y)
        assert val == pytest.approx(char_function_k(n, y), abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_inverse_gamma_density_and_cdf(n):
    ig = InverseGamma(n)
    total, _ = integrate.quad(ig.density, 0, np.inf, epsabs=1e-13, limit=200)
    assert abs(total - 1) < 1e-10
    for t in (0.05, 0.3, 2.0):
        ref, _ = integrate.quad(ig.density, 0, t, epsabs=1e-14)
        assert float(ig.cdf(t)) == pytest.approx(ref, abs=1e-10)
    ref = stats.invgamma(n + 0.5, scale=0.25)
    ts = np.array([0.01, 0.1, 1.0, 10.0])
    np.testing.assert_allclose(ig.cdf(ts), ref.cdf(ts), rtol=1e-12)


def test_subordinated_sampler_matches_student_cdf():
    # variance 2t in the Gaussian kernel is what makes this pass
    for n in (0, 2):
        rng = np.random.default_rng(7)
        x = StudentT(n).sample(rng, 200_000)
        assert ks_statistic(x, StudentT(n).cdf) < critical_value(x.size)


def test_ks_statistic_matches_scipy():
    x = np.random.default_rng(3).standard_cauchy(5000) / 1.2
    ours = ks_statistic(x, StudentT(0).cdf)
    ref = stats.kstest(x, lambda v: StudentT(0).cdf(v)).statistic
    assert ours == pytest.approx(ref, abs=1e-15)


def test_chunking_independent_of_workers():
    draw = lambda rng, size: StudentT(1).sample(rng, size)
    one = chunked_sample(draw, 200_000, 11, workers=1)
    four = chunked_sample(draw, 200_000, 11, workers=4)
    np.testing.assert_array_equal(one, four)
    assert one.size == 200_000
    other = chunked_sample(draw, 200_000, 12, workers=1)
    assert not np.array_equal(one, other)


# -- mixtures ---------------------------------------------------------------


def test_mixture_examples():
    mix = mixture_from_table(linearization_general(1, 1), F(1, 2))
    assert mix.as_dict() == {1: F(1, 4), 2: F(3, 4)}
    av = F(2, 5)
    mix = mixture_from_table(connection_table(3), av)
    assert mix.as_dict() == {k: v for k, v in connection_table(3).evaluate(av).items() if v}
    assert mixture_from_table(connection_table(4), 1).as_dict() == {4: 1}


def test_mixture_validation():
    with pytest.raises(ContractViolation):
        MixtureSpec(((0, F(1, 2)), (1, F(1, 3))))
    with pytest.raises(ContractViolation):
        MixtureSpec(((0, F(3, 2)), (1, F(-1, 2))))
    with pytest.raises(ContractViolation):
        mixture_from_table(linearization_general(1, 1), F(3, 2))


def test_negative_weight_aborts():
    # outside [0, 1] coefficients can go negative; evaluated tables must be refused
    t = linearization_general(1, 1).evaluate(F(3, 2))
    with pytest.raises(ValueError):
        mixture_from_table(t)


def test_equal_kind_table_shifts_to_basis_index():
    from bessel_linz.coefficients import linearization_equal_table

    mix = mixture_from_table(linearization_equal_table(1), F(1, 2))
    assert mix.as_dict() == {1: F(1, 4), 2: F(3, 4)}


# -- identities and Monte Carlo ------------------------------------------------


def test_fourier_identity():
    grid = [i / 10 for i in range(1, 101)]
    for n in range(5):
        for m in range(5):
            assert fourier_identity_error(n, m, F(1, 3), grid) < 1e-12


def test_mc_convolution_small():
    r = mc_convolution_check(0, 0, F(1, 2), 20_000, 1)
    assert r.critical_value == pytest.approx(1.628 / math.sqrt(20_000))
    assert set(r.to_json()) == {"params", "samples", "seed", "ks_statistic", "critical_value", "pass"}
    ok, reports = majority_vote(mc_convolution_check, 2, 1, F(1, 3), 20_000, 5)
    assert ok and len(reports) == 3


def test_mc_endpoints():
    assert mc_convolution_check(2, 1, 0, 20_000, 9).ks_statistic < 0.03
    assert mc_inverse_gamma_check(2, 1, 1, 20_000, 9).ks_statistic < 0.03


def test_mc_detects_wrong_mixture():
    # n = 3 sampled, compared against the Cauchy law: must fail decisively
    x = StudentT(3).sample(np.random.default_rng(0), 50_000)
    assert ks_statistic(x, StudentT(0).cdf) > 5 * critical_value(50_000)


def test_mc_reproducible():
    r1 = mc_inverse_gamma_check(1, 2, F(1, 4), 10_000, 123)
    r2 = mc_inverse_gamma_check(1, 2, F(1, 4), 10_000, 123, workers=3)
    assert r1.to_json() == r2.to_json()


def test_mc_preconditions():
    with pytest.raises(ContractViolation):
        mc_convolution_check(1, 1, F(1, 2), 100, 0)
    with pytest.raises(ContractViolation):
        mc_convolution_check(1, 1, F(5, 4), 10_000, 0)


def test_d_statistic():
    assert d_statistic_table(5, 3, math.pi / 2).as_dict() == {2: 1.0}
    assert d_statistic_table(3, 1, 0.0).as_dict() == {0: 1.0}
    s = math.sin(math.pi / 4)
    mix = d_statistic_table(3, 3, math.pi / 4).as_dict()
    assert mix[1] == pytest.approx(1 - 3 * s * (1 - s), abs=1e-12)
    assert mix[2] == pytest.approx(3 * s * (1 - s), abs=1e-12)
    with pytest.raises(ContractViolation):
        d_statistic_table(4, 3, 0.3)
    with pytest.raises(ContractViolation):
        d_statistic_table(3, 3, 2.0)
