"""Command-line front end: coefficient tables, factorization checks,
urn simulations, empirical-vs-exact comparisons, polynomial tables and
transition-diagram export.

Parameters are given either in the general form (--alpha --beta --gamma)
or the integer urn form (--M --N --gamma); the integer form computes in
exact rationals and prints them as p/q strings, the general form computes
in double precision and prints 17 significant digits.  All outputs are
deterministic functions of the flags, including --seed and regardless of
--threads.

Exit codes: 0 success, 1 runtime failure, 2 invalid parameters,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import analysis, banded, urns
from .coefficients import (
    IntegerParameters,
    LUCoefficients,
    ParameterError,
    Parameters,
    lu_coefficients,
    lu_coefficients_integer,
    reconstruct_row,
    require_valid,
)

DEFAULT_SEED = 0x4A50  # fixed default so bare invocations reproduce byte-identically

SCHEMA = "1"


def _fmt(value) -> str:
    """Exact p/q string for rationals and integers, 17 significant
    digits for floats, empty string for undefined entries."""
    if value is None:
        return ""
    if isinstance(value, (Fraction, int)):
        return str(value)
    return format(value, ".17g")


def _json_value(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def _csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(value) for value in row])
    return buffer.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _add_parameter_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("parameters (choose one form)")
    group.add_argument("--alpha", type=float, help="general form: alpha > -1")
    group.add_argument("--beta", type=float, help="general form: beta > -1, |alpha - beta| < 1")
    group.add_argument(
        "--gamma",
        help="shared by both forms: real > -1 with --alpha/--beta, integer >= 0 with --M/--N",
    )
    group.add_argument("--M", type=int, help="integer form: alpha = 1/M, M >= 1")
    group.add_argument("--N", type=int, help="integer form: beta = 1/N, N >= 1")


def _resolve_parameters(args) -> Parameters | IntegerParameters:
    integer_form = args.M is not None or args.N is not None
    general_form = args.alpha is not None or args.beta is not None
    if integer_form and general_form:
        raise ParameterError("supply either --alpha/--beta or --M/--N, not both")
    if not integer_form and not general_form:
        raise ParameterError("parameters required: --alpha/--beta/--gamma or --M/--N/--gamma")
    if args.gamma is None:
        raise ParameterError("--gamma is required")
    if integer_form:
        if args.M is None or args.N is None:
            raise ParameterError("integer form requires both --M and --N")
        try:
            gamma = int(args.gamma)
        except ValueError:
            raise ParameterError(
                f"--gamma must be a non-negative integer with --M/--N (got {args.gamma!r})"
            ) from None
        params = IntegerParameters(args.M, args.N, gamma)
    else:
        if args.alpha is None or args.beta is None:
            raise ParameterError("general form requires both --alpha and --beta")
        try:
            gamma = float(args.gamma)
        except ValueError:
            raise ParameterError(f"--gamma must be a real number (got {args.gamma!r})") from None
        params = Parameters(args.alpha, args.beta, gamma)
    require_valid(params)
    return params


def _require_integer_form(params) -> IntegerParameters:
    if not isinstance(params, IntegerParameters):
        raise ParameterError("this command simulates urns and requires --M/--N/--gamma")
    return params


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def _build_coefficients(params, n_max: int) -> LUCoefficients:
    if isinstance(params, IntegerParameters):
        return lu_coefficients_integer(params, n_max)
    return lu_coefficients(params, n_max)


def _parameters_payload(params) -> dict:
    if isinstance(params, IntegerParameters):
        return {"form": "integer", "M": params.M, "N": params.N, "gamma": params.gamma}
    return {
        "form": "general",
        "alpha": params.alpha,
        "beta": params.beta,
        "gamma": params.gamma,
    }


def cmd_coeffs(args) -> int:
    params = _resolve_parameters(args)
    _require(args.n_max >= 0, "--n-max must be >= 0")
    coeffs = _build_coefficients(params, args.n_max)
    header = ["n", "x", "y", "t", "r", "s", "a", "b", "c", "d"]
    rows = []
    for n in range(args.n_max + 1):
        trow = reconstruct_row(coeffs, n)
        rows.append(
            [n, coeffs.x[n], coeffs.y[n], coeffs.t[n], coeffs.r[n], coeffs.s[n],
             trow.a, trow.b, trow.c, trow.d]
        )
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "coeffs",
            "parameters": _parameters_payload(params),
            "rows": [
                {name: _json_value(value) for name, value in zip(header, row)}
                for row in rows
            ],
        }
        _emit(_json_text(payload), args.output)
    else:
        _emit(_csv_text(header, rows), args.output)
    return 0


def cmd_verify(args) -> int:
    params = _resolve_parameters(args)
    _require(args.T >= 1, "--T must be >= 1")
    report = banded.verify_lu(params, args.T, tolerance=args.tolerance)
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "parameters": _parameters_payload(params),
    }
    payload.update(report.to_dict())
    _emit(_json_text(payload), args.output)
    return 0 if report.passed else 3


def _trajectory_rows(ip, trial, initial, steps, seed, experiment):
    gen = urns.RngStream(seed, stream_id=trial).generator()
    rows = [(trial, 0, 0, initial)]
    state = initial
    for step in range(1, steps + 1):
        if experiment == urns.COMPOSITE:
            first, second = urns.composite_step(ip, state, gen)
            rows.append((trial, step, 1, first.end_state))
            rows.append((trial, step, 2, second.end_state))
            state = second.end_state
        else:
            if experiment == 1:
                outcome = urns.experiment1_step(ip, state, gen)
            else:
                outcome = urns.experiment2_step(ip, state, gen)
            rows.append((trial, step, 1, outcome.end_state))
            state = outcome.end_state
    return rows


def cmd_simulate(args) -> int:
    ip = _require_integer_form(_resolve_parameters(args))
    _require(args.initial >= 0, "--initial must be >= 0")
    _require(args.steps >= 0, "--steps must be >= 0")
    _require(args.trials >= 0, "--trials must be >= 0")
    _require(args.threads >= 1, "--threads must be >= 1")
    _require(args.seed >= 0, "--seed must be >= 0")
    experiment = urns.COMPOSITE if args.experiment == "composite" else int(args.experiment)
    if args.aggregate:
        counts = urns.sample_endpoints(
            ip, args.initial, experiment, args.trials, args.seed,
            steps=args.steps, threads=args.threads,
        )
        pairs = sorted(counts.items())
        if args.format == "json":
            payload = {
                "schema": SCHEMA,
                "command": "simulate",
                "parameters": _parameters_payload(ip),
                "experiment": args.experiment,
                "initial": args.initial,
                "steps": args.steps,
                "trials": args.trials,
                "seed": args.seed,
                "counts": [{"state": state, "count": count} for state, count in pairs],
            }
            _emit(_json_text(payload), args.output)
        else:
            _emit(_csv_text(["state", "count"], [list(pair) for pair in pairs]), args.output)
        return 0

    all_rows = []
    for trial in range(args.trials):
        all_rows.extend(
            _trajectory_rows(ip, trial, args.initial, args.steps, args.seed, experiment)
        )
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "simulate",
            "parameters": _parameters_payload(ip),
            "experiment": args.experiment,
            "initial": args.initial,
            "steps": args.steps,
            "trials": args.trials,
            "seed": args.seed,
            "rows": [
                {"trial": trial, "step": step, "sub_step": sub, "state": state}
                for trial, step, sub, state in all_rows
            ],
        }
        _emit(_json_text(payload), args.output)
    else:
        _emit(
            _csv_text(["trial", "step", "sub_step", "state"], [list(row) for row in all_rows]),
            args.output,
        )
    return 0


def cmd_compare(args) -> int:
    ip = _require_integer_form(_resolve_parameters(args))
    initials = args.initial if args.initial else [0]
    _require(all(start >= 0 for start in initials), "--initial must be >= 0")
    _require(args.trials >= 1, "--trials must be >= 1")
    _require(args.threads >= 1, "--threads must be >= 1")
    _require(args.seed >= 0, "--seed must be >= 0")
    coeffs = lu_coefficients_integer(ip, max(initials))
    header = ["initial", "trials", "tv_distance", "chi_square", "dof", "chi_square_0999", "ok"]
    rows = []
    for start in initials:
        counts = urns.sample_endpoints(
            ip, start, urns.COMPOSITE, args.trials, args.seed,
            stream_offset=start << 20, threads=args.threads,
        )
        exact = reconstruct_row(coeffs, start)
        empirical = analysis.EmpiricalDistribution.from_counts(counts)
        tv = analysis.tv_distance(empirical, exact)
        statistic, dof = analysis.chi_square_statistic(empirical, exact)
        threshold = analysis.chi_square_threshold(dof)
        rows.append(
            [start, args.trials, tv, statistic, dof, threshold, statistic <= threshold]
        )
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "compare",
            "parameters": _parameters_payload(ip),
            "trials": args.trials,
            "seed": args.seed,
            "rows": [
                {name: _json_value(value) for name, value in zip(header, row)}
                for row in rows
            ],
        }
        _emit(_json_text(payload), args.output)
    else:
        _emit(_csv_text(header, rows), args.output)
    return 0


def cmd_poly(args) -> int:
    params = _resolve_parameters(args)
    _require(args.n_max >= 0, "--n-max must be >= 0")
    coeffs = _build_coefficients(params, args.n_max)
    exact = isinstance(params, IntegerParameters)
    points = args.x if args.x else ["1"]
    header = ["x", "n", "q"]
    rows = []
    for text in points:
        try:
            point = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"--x must be a rational number (got {text!r})") from None
        if not exact:
            point = float(point)
        evaluation = analysis.evaluate_polynomials(coeffs, point, args.n_max)
        for n, value in enumerate(evaluation.values):
            rows.append([point, n, value])
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "poly",
            "parameters": _parameters_payload(params),
            "rows": [
                {"x": _json_value(row[0]), "n": row[1], "q": _json_value(row[2])}
                for row in rows
            ],
        }
        _emit(_json_text(payload), args.output)
    else:
        _emit(_csv_text(header, rows), args.output)
    return 0


def cmd_graph(args) -> int:
    params = _resolve_parameters(args)
    _require(args.T >= 1, "--T must be >= 1")
    coeffs = _build_coefficients(params, args.T - 1)
    if args.which == "PL":
        matrix = banded.death_factor(coeffs, args.T)
    elif args.which == "PU":
        matrix = banded.birth_factor(coeffs, args.T)
    else:
        matrix = banded.reconstructed_matrix(coeffs, args.T)
    lines = [f"digraph {args.which} {{", "  rankdir=LR;"]
    for state in range(args.T):
        lines.append(f"  {state};")
    for i in range(args.T):
        for j, value in matrix.row_entries(i):
            if value != 0:
                lines.append(f'  {i} -> {j} [label="{_fmt(value)}"];')
    lines.append("}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urnchain",
        description=(
            "Pentadiagonal urn-model Markov chain: exact coefficients, stochastic "
            "LU verification, ball-level simulation and statistics."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub, formats, default_format):
        _add_parameter_flags(sub)
        if formats:
            sub.add_argument(
                "--format", choices=formats, default=default_format,
                help=f"output format (default {default_format})",
            )
        sub.add_argument("--output", help="write to this path instead of stdout")

    sub = subparsers.add_parser("coeffs", help="coefficient and transition-row table")
    add_common(sub, ["csv", "json"], "csv")
    sub.add_argument("--n-max", type=int, default=10, help="largest state index (default 10)")
    sub.set_defaults(func=cmd_coeffs)

    sub = subparsers.add_parser("verify", help="factorization and invariant checks (JSON report)")
    add_common(sub, None, None)
    sub.add_argument("--T", type=int, default=200, help="truncation dimension (default 200)")
    sub.add_argument(
        "--tolerance", type=float, default=None,
        help="override the per-entry tolerance (default: exact for --M/--N, 1e-12 otherwise)",
    )
    sub.set_defaults(func=cmd_verify)

    sub = subparsers.add_parser("simulate", help="run urn experiments (integer form only)")
    add_common(sub, ["csv", "json"], "csv")
    sub.add_argument(
        "--experiment", choices=["1", "2", "composite"], default="composite",
        help="which step to run (default composite: experiment 1 then 2)",
    )
    sub.add_argument("--initial", type=int, default=0, help="start state (default 0)")
    sub.add_argument("--steps", type=int, default=1, help="steps per trial (default 1)")
    sub.add_argument("--trials", type=int, default=1, help="independent trials (default 1)")
    sub.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"RNG seed; fixed default {DEFAULT_SEED:#06x} keeps bare runs reproducible",
    )
    sub.add_argument("--threads", type=int, default=1, help="worker threads (result-invariant)")
    sub.add_argument(
        "--aggregate", action="store_true",
        help="emit end-state counts instead of full trajectories",
    )
    sub.set_defaults(func=cmd_simulate)

    sub = subparsers.add_parser(
        "compare", help="empirical composite-step law vs exact row (integer form only)"
    )
    add_common(sub, ["csv", "json"], "csv")
    sub.add_argument(
        "--initial", type=int, action="append",
        help="start state; repeatable (default 0)",
    )
    sub.add_argument("--trials", type=int, default=100000, help="trials per state (default 100000)")
    sub.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"RNG seed; fixed default {DEFAULT_SEED:#06x} keeps bare runs reproducible",
    )
    sub.add_argument("--threads", type=int, default=1, help="worker threads (result-invariant)")
    sub.set_defaults(func=cmd_compare)

    sub = subparsers.add_parser("poly", help="polynomial values via the four-band recursion")
    add_common(sub, ["csv", "json"], "csv")
    sub.add_argument("--n-max", type=int, default=10, help="largest polynomial index (default 10)")
    sub.add_argument(
        "--x", action="append",
        help="evaluation point, rational like 1 or 3/4; repeatable (default 1)",
    )
    sub.set_defaults(func=cmd_poly)

    sub = subparsers.add_parser("graph", help="transition digraph in DOT format")
    add_common(sub, ["dot"], "dot")
    sub.add_argument(
        "--which", choices=["P", "PL", "PU"], default="P",
        help="composite chain (P), pure-death factor (PL) or pure-birth factor (PU)",
    )
    sub.add_argument("--T", type=int, default=6, help="number of states drawn (default 6)")
    sub.set_defaults(func=cmd_graph)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure contract
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
