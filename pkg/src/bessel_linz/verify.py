"""Verification suites behind ``bessel-linz verify``.

Each suite returns a :class:`SuiteResult` whose ``checks`` map a check name to
a JSON-ready dict with at least a boolean ``passed`` field.
"""

from __future__ import annotations

import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from bessel_linz import basis, coefficients as co
from bessel_linz.ratcore import APoly, UPoly, format_rational
from bessel_linz import stochastic as st

SUITES = (
    "basis",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "lemma31",
    "lemma32",
    "lemma33",
    "montecarlo",
)

DEFAULT_BOUNDS = {
    "basis": 60,
    "theorem1": 30,
    "theorem2": 25,
    "theorem3": 15,
    "theorem4": 6,
    "lemma31": 20,
    "lemma32": 15,
    "lemma33": 12,
}


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checks: dict = field(default_factory=dict)
    timings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def add(self, name: str, passed: bool, **detail) -> None:
        self.checks[name] = {"passed": bool(passed), **detail}


def _first_failure(items, predicate: Callable) -> object | None:
    for item in items:
        if not predicate(item):
            return item
    return None


def _record(result: SuiteResult, name: str, items, predicate: Callable) -> None:
    items = list(items)
    bad = _first_failure(items, predicate)
    if bad is None:
        result.add(name, True, cases=len(items))
    else:
        result.add(name, False, cases=len(items), first_failure=repr(bad))


def worker_count() -> int:
    return st.default_workers()


def _pool_map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# ---------------------------------------------------------------------------


def suite_basis(max_n: int = 60) -> SuiteResult:
    res = SuiteResult("basis", {"max_n": max_n})
    chain = basis.q_chain(max_n)
    _record(res, "explicit_equals_three_term", range(max_n + 1),
            lambda n: basis.q_poly(n) == chain[n])
    _record(res, "derivative_identity", range(1, max_n + 1), basis.q_derivative_identity_check)

    def carlitz_ok(n):
        oracle = basis.poly_to_bessel(UPoly.monomial(n))
        return oracle.coeffs == basis.monomial_to_bessel(n).coeffs

    _record(res, "carlitz_equals_triangular_solve", range(max_n + 1), carlitz_ok)
    _record(res, "alpha_positive", [(n, k) for n in range(max_n + 1) for k in range(n + 1)],
            lambda nk: basis.alpha(*nk) > 0)
    return res


def _connection_p_at_one(n: int, k: int) -> Fraction:
    """``p(1)`` for the auxiliary sum whose ``(1-a)**0`` term must vanish."""
    f = math.factorial
    total = Fraction(0)
    for i in range(min(n - k, k + 1) + 1):
        total += Fraction((-1) ** i * f(2 * n - k - i) * (k + i + 1),
                          f(n - k - i) * f(i) * f(k + 1 - i))
    return total


def suite_theorem1(max_n: int = 30) -> SuiteResult:
    res = SuiteResult("theorem1", {"max_n": max_n})
    ns = range(max_n + 1)
    _record(res, "closed_equals_oracle", ns,
            lambda n: co.connection_table(n).entries == co.connection_oracle(n).entries)
    _record(res, "rows_sum_to_one", ns, lambda n: co.connection_table(n).total() == 1)
    _record(res, "top_entry_is_a_pow_n", ns,
            lambda n: co.connection_closed(n, n) == APoly.monomial(n))
    _record(res, "r0_term_vanishes", [(n, k) for n in ns for k in range(n)],
            lambda nk: _connection_p_at_one(*nk) == 0)
    _record(res, "bernstein_nonneg", [(n, k) for n in ns for k in range(n + 1)],
            lambda nk: co.certify_nonneg(co.connection_closed(*nk), 4 * nk[0]).certified)
    return res


def suite_theorem2(max_n: int = 25) -> SuiteResult:
    res = SuiteResult("theorem2", {"max_n": max_n})
    ns = range(max_n + 1)
    closed = {n: co.linearization_equal_table(n) for n in ns}
    _record(res, "closed_equals_macdonald", ns,
            lambda n: closed[n].entries == co.macdonald3_expand(n).entries)

    def oracle_ok(n):
        general = co.linearization_general(n, n, mode="oracle")
        return all(general[n + i] == closed[n][i] for i in range(n + 1))

    _record(res, "closed_equals_product_oracle", ns, oracle_ok)
    _record(res, "rows_sum_to_one", ns, lambda n: closed[n].total() == 1)
    a = APoly((0, 1))
    fixture = {0: 1 - a * (1 - a) * 3, 1: a * (1 - a) * 3}
    res.add("fixture_n1", closed[1].entries == fixture if max_n >= 1 else True)
    return res


def _theorem3_cell(nm: tuple[int, int]) -> tuple[tuple[int, int], dict, float]:
    n, m = nm
    start = time.perf_counter()
    rec = co.linearization_general(n, m, mode="recursion")
    orc = co.linearization_general(n, m, mode="oracle")
    low = min(n, m)
    cap = 4 * (n + m)
    certs = {k: co.certify_nonneg(p, cap) for k, p in orc.items()}
    uncertified = {}
    for k, c in certs.items():
        if not c.certified:
            value, at = co.grid_min(c.poly)
            uncertified[k] = {"grid_min": format_rational(value), "at": format_rational(at)}
    swapped = co.linearization_general(m, n, mode="oracle")
    out = {
        "modes_agree": rec.entries == orc.entries,
        "beta0_zero": (not orc[0]) if n >= 1 and m >= 1 else True,
        "support": all(not orc[k] for k in range(low)),
        "symmetry": all(orc[k] == swapped[k].reflect() for k in orc),
        "sum_to_one": orc.total() == 1,
        "certified": not uncertified,
        "uncertified": uncertified,
        "max_degree_used": max(c.degree_used for c in certs.values()),
    }
    return nm, out, time.perf_counter() - start


def suite_theorem3(max_n: int = 15, max_m: int | None = None,
                   workers: int | None = None) -> SuiteResult:
    max_m = max_n if max_m is None else max_m
    res = SuiteResult("theorem3", {"max_n": max_n, "max_m": max_m})
    cells = [(n, m) for n in range(max_n + 1) for m in range(max_m + 1)]
    workers = worker_count() if workers is None else workers
    outcomes = _pool_map(_theorem3_cell, cells, workers)
    for name in ("modes_agree", "beta0_zero", "support", "symmetry", "sum_to_one", "certified"):
        bad = [list(nm) for nm, out, _ in outcomes if not out[name]]
        detail = {"cases": len(cells)}
        if bad:
            detail["failures"] = bad[:20]
        if name == "certified":
            detail["max_degree_used"] = max(out["max_degree_used"] for _, out, _ in outcomes)
            detail["uncertified"] = {f"{nm[0]},{nm[1]}": out["uncertified"]
                                     for nm, out, _ in outcomes if out["uncertified"]}
        res.add(name, not bad, **detail)
    res.timings = [(nm, t) for nm, _, t in outcomes]
    return res


def random_product_instances(count: int, seed: int, max_degree: int = 6,
                             max_factors: int = 4) -> list[tuple[list[int], list[Fraction]]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(2, max_factors)
        degrees = [rng.randint(0, max_degree) for _ in range(k)]
        raw = [rng.randint(1, 12) for _ in range(k)]
        weights = [Fraction(r, sum(raw)) for r in raw]
        out.append((degrees, weights))
    return out


def suite_theorem4(instances: int = 20, seed: int = 0, max_degree: int = 6) -> SuiteResult:
    res = SuiteResult("theorem4", {"instances": instances, "seed": seed, "max_degree": max_degree})
    cases = random_product_instances(instances, seed, max_degree)
    tables = [(co.product_expansion(d, w), co.product_oracle(d, w), d) for d, w in cases]
    _record(res, "iterated_equals_oracle", range(len(cases)),
            lambda i: tables[i][0].entries == tables[i][1].entries)
    _record(res, "nonneg", range(len(cases)),
            lambda i: all(v >= 0 for v in tables[i][0].entries.values()))
    _record(res, "sum_to_one", range(len(cases)), lambda i: tables[i][0].total() == 1)
    _record(res, "support", range(len(cases)),
            lambda i: all(not tables[i][0][j] for j in range(min(tables[i][2]))))
    return res


def suite_lemma31(max_n: int = 20) -> SuiteResult:
    res = SuiteResult("lemma31", {"max_n": max_n})
    _record(res, "extended_recursion", [(n, k) for n in range(max_n + 1) for k in range(n + 1)],
            lambda nk: basis.lemma31_check(*nk))
    return res


def suite_lemma32(max_n: int = 15) -> SuiteResult:
    res = SuiteResult("lemma32", {"max_n": max_n})
    _record(res, "half_integer_bessel_recursion",
            [(n, j) for n in range(max_n + 1) for j in range(n + 1)],
            lambda nj: basis.half_integer_bessel_recursion_check(*nj))
    return res


def suite_lemma33(max_n: int = 12, max_m: int | None = None) -> SuiteResult:
    max_m = max_n if max_m is None else max_m
    res = SuiteResult("lemma33", {"max_n": max_n, "max_m": max_m})
    _record(res, "beta_recursion_oracle_mode",
            [(n, m) for n in range(1, max_n + 1) for m in range(1, max_m + 1)],
            lambda nm: co.lemma33_check(*nm))
    return res


def suite_montecarlo(n: int = 1, m: int = 1, a: Fraction = Fraction(1, 2),
                     samples: int = 10**6, seed: int = 42,
                     workers: int | None = None) -> SuiteResult:
    res = SuiteResult("montecarlo", {"n": n, "m": m, "a": format_rational(a),
                                     "samples": samples, "seed": seed})
    grid = [i / 10 for i in range(1, 101)]
    err = st.fourier_identity_error(n, m, a, grid)
    res.add("fourier_identity", err < 1e-12, max_relative_error=err)
    for name, check in (("convolution", st.mc_convolution_check),
                        ("inverse_gamma", st.mc_inverse_gamma_check)):
        ok, reports = st.majority_vote(check, n, m, a, samples, seed, workers=workers)
        res.add(name, ok, runs=[r.to_json() for r in reports])
    return res


def run_suite(suite: str, **bounds) -> SuiteResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    fn = globals()[f"suite_{suite}"]
    return fn(**{k: v for k, v in bounds.items() if v is not None})


def print_timings(result: SuiteResult, stream=sys.stderr) -> None:
    for (n, m), seconds in result.timings:
        print(f"cell n={n} m={m}: {seconds:.4f} s", file=stream)


__all__ = ["SUITES", "SuiteResult", "run_suite", "random_product_instances"] + [
    f"suite_{s}" for s in SUITES
]

