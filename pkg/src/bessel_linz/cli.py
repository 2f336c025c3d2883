"""Command-line front end.

    bessel-linz qpoly 2
    bessel-linz connection 3 --a 1/2
    bessel-linz linearize 2 1 --mode oracle --format csv
    bessel-linz product --degrees 1,1,1 --weights 1/3,1/3,1/3
    bessel-linz dstat 3 5 0.6
    bessel-linz verify theorem3 --max-n 15 --max-m 15
    bessel-linz mc-check convolution --n 1 --m 1 --a 1/2 --samples 1000000 --seed 42

Rationals cross this boundary only as ``"p/q"`` strings.  Output goes to
stdout (or ``--output``); profiling goes to stderr so stdout stays
byte-identical between runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Sequence

from bessel_linz import basis, coefficients as co, stochastic as st, verify
from bessel_linz.ratcore import APoly, format_rational, parse_rational


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {value}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _a_value(text: str) -> Fraction | None:
    if text.strip().lower() in ("symbolic", "sym", "a"):
        return None
    return _rational(text)


def _int_list(text: str) -> list[int]:
    return [_nonneg_int(t) for t in text.split(",") if t.strip()]


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _render_value(value):
    if isinstance(value, APoly):
        return {"apoly": value.to_strings()}
    if isinstance(value, float):
        return value
    return format_rational(value)


def render_json(command: str, params: dict, entries: list[dict], checks: dict | None = None,
                **extra) -> str:
    doc = {"command": command, "params": params, "entries": entries, "checks": checks or {}}
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def render_csv(entries: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    symbolic = any(isinstance(e["value"], dict) for e in entries)
    extra_cols = [c for c in ("dof",) if any(c in e for e in entries)]
    if symbolic:
        width = max(len(e["value"]["apoly"]) for e in entries)
        writer.writerow(["k", *extra_cols, *(f"a{i}" for i in range(width))])
        for e in entries:
            coeffs = e["value"]["apoly"]
            writer.writerow([e["k"], *(e[c] for c in extra_cols),
                             *coeffs, *(["0"] * (width - len(coeffs)))])
    else:
        writer.writerow(["k", *extra_cols, "value"])
        for e in entries:
            writer.writerow([e["k"], *(e[c] for c in extra_cols), e["value"]])
    return buf.getvalue()


def _table_entries(table: co.CoeffTable, suppress_zeros: bool) -> list[dict]:
    out = []
    for k, v in table.basis_entries().items():
        if suppress_zeros and not v:
            continue
        out.append({"k": k, "value": _render_value(v)})
    return out


def _emit(args, command: str, params: dict, entries: list[dict], checks: dict | None = None,
          **extra) -> None:
    if args.format == "csv":
        text = render_csv(entries)
    else:
        text = render_json(command, params, entries, checks, **extra)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_a(args, a: Fraction | None) -> None:
    if a is not None and not 0 <= a <= 1 and not args.allow_outside:
        raise SystemExit(
            f"error: a={format_rational(a)} is outside [0, 1]; pass --allow-outside to compute anyway"
        )


def _profile(args, label: str, seconds: float) -> None:
    if args.profile:
        print(f"{label}: {seconds:.4f} s", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_qpoly(args) -> int:
    q = basis.q_poly(args.n)
    coeffs = q.to_strings()
    entries = [{"k": k, "value": c} for k, c in enumerate(coeffs)]
    _emit(args, "qpoly", {"n": args.n}, entries, coefficients=coeffs)
    return 0


def cmd_connection(args) -> int:
    _check_a(args, args.a)
    start = time.perf_counter()
    table = co.connection_table(args.n)
    if args.a is not None:
        table = table.evaluate(args.a)
    _profile(args, f"cell n={args.n}", time.perf_counter() - start)
    params = {"n": args.n, "a": "symbolic" if args.a is None else format_rational(args.a)}
    _emit(args, "connection", params, _table_entries(table, args.suppress_zeros))
    return 0


def cmd_linearize(args) -> int:
    _check_a(args, args.a)
    start = time.perf_counter()
    modes = ["recursion", "oracle"] if args.mode == "both" else [args.mode]
    tables = {mode: co.linearization_general(args.n, args.m, mode=mode) for mode in modes}
    table = tables[modes[0]]
    checks = {}
    if len(tables) == 2:
        diff = [k for k in table if tables["recursion"][k] != tables["oracle"][k]]
        checks["modes_agree"] = {"passed": not diff, "differing_k": diff}
    if args.a is not None:
        table = table.evaluate(args.a)
    _profile(args, f"cell n={args.n} m={args.m}", time.perf_counter() - start)
    params = {
        "n": args.n,
        "m": args.m,
        "a": "symbolic" if args.a is None else format_rational(args.a),
        "mode": args.mode,
    }
    _emit(args, "linearize", params, _table_entries(table, args.suppress_zeros), checks)
    return 0 if all(c["passed"] for c in checks.values()) else 1


def cmd_product(args) -> int:
    if len(args.degrees) != len(args.weights):
        raise SystemExit("error: --degrees and --weights must have the same length")
    start = time.perf_counter()
    try:
        table = co.product_expansion(args.degrees, args.weights)
    except co.ContractViolation as exc:
        raise SystemExit(f"error: {exc}") from None
    checks = {}
    if args.check_oracle:
        oracle = co.product_oracle(args.degrees, args.weights)
        checks["iterated_equals_oracle"] = {"passed": oracle.entries == table.entries}
    _profile(args, "product", time.perf_counter() - start)
    params = {"degrees": args.degrees, "weights": [format_rational(w) for w in args.weights]}
    _emit(args, "product", params, _table_entries(table, args.suppress_zeros), checks)
    return 0 if all(c["passed"] for c in checks.values()) else 1


def cmd_dstat(args) -> int:
    try:
        mix = st.d_statistic_table(args.f1, args.f2, args.theta)
    except co.ContractViolation as exc:
        raise SystemExit(f"error: {exc}") from None
    entries = [{"k": k, "dof": 2 * k + 1, "value": w} for k, w in mix.components]
    _emit(args, "dstat", {"f1": args.f1, "f2": args.f2, "theta": args.theta}, entries)
    return 0


def cmd_verify(args) -> int:
    suite = args.suite
    bounds: dict = {}
    if suite in ("basis", "theorem1", "theorem2", "lemma31", "lemma32"):
        bounds["max_n"] = args.max_n
    elif suite in ("theorem3", "lemma33"):
        bounds["max_n"] = args.max_n
        bounds["max_m"] = args.max_m
    elif suite == "theorem4":
        bounds.update(instances=args.instances, seed=args.seed, max_degree=args.max_n)
    elif suite == "montecarlo":
        bounds.update(n=args.n, m=args.m, a=args.a, samples=args.samples, seed=args.seed)
    if suite == "theorem3":
        bounds["workers"] = verify.worker_count()
    start = time.perf_counter()
    result = verify.run_suite(suite, **bounds)
    if args.profile:
        verify.print_timings(result)
        _profile(args, f"suite {suite}", time.perf_counter() - start)
    text = render_json("verify", {"suite": suite, **result.params}, [], result.checks,
                       passed=result.passed)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if result.passed else 1


def cmd_mc_check(args) -> int:
    check = st.mc_convolution_check if args.kind == "convolution" else st.mc_inverse_gamma_check
    try:
        report = check(args.n, args.m, args.a, args.samples, args.seed)
    except co.ContractViolation as exc:
        raise SystemExit(f"error: {exc}") from None
    text = json.dumps(report.to_json(), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--suppress-zeros", action="store_true",
                        help="omit zero coefficients from tables")
    common.add_argument("--profile", action="store_true",
                        help="report wall time per cell on stderr")
    common.add_argument("--allow-outside", action="store_true",
                        help="accept a outside [0, 1] (no positivity is claimed there)")

    parser = argparse.ArgumentParser(
        prog="bessel-linz",
        description="Exact connection/linearization coefficients of Bessel polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qpoly", parents=[common], help="coefficients of q_n, low to high")
    p.add_argument("n", type=_nonneg_int)
    p.set_defaults(func=cmd_qpoly)

    p = sub.add_parser("connection", parents=[common], help="c_k^(n)(a) for k = 0..n")
    p.add_argument("n", type=_nonneg_int)
    p.add_argument("--a", type=_a_value, default=None,
                   help='rational "p/q", or "symbolic" (default)')
    p.set_defaults(func=cmd_connection)

    p = sub.add_parser("linearize", parents=[common], help="beta_k^(n,m)(a) for k = 0..n+m")
    p.add_argument("n", type=_nonneg_int)
    p.add_argument("m", type=_nonneg_int)
    p.add_argument("--a", type=_a_value, default=None)
    p.add_argument("--mode", choices=("recursion", "oracle", "both"), default="recursion",
                   help="'both' also reports whether the two modes agree")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("product", parents=[common], help="k-factor product coefficients")
    p.add_argument("--degrees", type=_int_list, required=True, help="comma list, e.g. 2,1,1")
    p.add_argument("--weights", type=_rational_list, required=True,
                   help="comma list of rationals summing to 1, e.g. 1/2,1/4,1/4")
    p.add_argument("--check-oracle", action="store_true")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("dstat", parents=[common], help="mixture law of the d-statistic")
    p.add_argument("f1", type=int)
    p.add_argument("f2", type=int)
    p.add_argument("theta", type=float, help="angle in radians, 0 <= theta <= pi/2")
    p.set_defaults(func=cmd_dstat)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=verify.SUITES)
    p.add_argument("--max-n", type=_nonneg_int, default=None)
    p.add_argument("--max-m", type=_nonneg_int, default=None)
    p.add_argument("--instances", type=_nonneg_int, default=20)
    p.add_argument("--n", type=_nonneg_int, default=1)
    p.add_argument("--m", type=_nonneg_int, default=1)
    p.add_argument("--a", type=_rational, default=Fraction(1, 2))
    p.add_argument("--samples", type=_nonneg_int, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc-check", parents=[common], help="single Monte Carlo KS run")
    p.add_argument("kind", choices=("convolution", "inverse-gamma"))
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--m", type=_nonneg_int, required=True)
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--samples", type=_nonneg_int, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_mc_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.max_n is None:
        args.max_n = verify.DEFAULT_BOUNDS.get(args.suite)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
