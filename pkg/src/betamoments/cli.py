"""Command-line front end.

    betamoments moment  --kind jacobi --alpha 1 --gamma 1 --beta 2 --N 100 --n 2 --backend all
    betamoments series  --kind laguerre --alpha 0 --epsilon 1 --beta 2 --N 2 --order 5
    betamoments paths   --model schroder --n 3 --enumerate
    betamoments verify  --suite all
    betamoments sample  --kind jacobi --alpha 1 --gamma 1 --beta 2 --N 40 --seed 42

Each run writes one JSON envelope (or a CSV table with ``--format csv``)
to stdout, or to ``--output FILE``. Exit codes: 0 ok, 1 usage error,
2 failed cross-check or verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .combinatorics import (
    MAX_ENUMERATION_STEPS,
    RISE,
    count_weighted_paths,
    dyck_model,
    enumerate_paths,
    jacobi_model,
    motzkin_count,
    motzkin_model,
    schroder,
    schroder_bijection,
    schroder_like_model,
)
from .ensembles import KIND_ALIASES, KINDS, EnsembleSpec, a_params, transport_to_jacobi
from .exact import format_rational, parse_rational
from .genfunc import generating_function
from .mcmc import ChainConfig, factorization_test, mh_sample
from .moments import MomentContext, MomentResult, moments_all_backends
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

CSV_HEADERS = {
    "moment": ["kind", "n", "backend", "value", "value_float"],
    "series": ["n", "coefficient"],
    "paths": ["model", "size", "count", "path"],
    "verify": ["suite", "check", "passed", "detail"],
    "sample": ["quantity", "n", "mean", "stderr"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_output_flags(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", metavar="FILE", help="write here instead of stdout")


def _add_ensemble_flags(p):
    p.add_argument("--kind", choices=sorted(set(KINDS) | set(KIND_ALIASES)))
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--gamma", type=_rational)
    p.add_argument("--beta", type=_rational)
    p.add_argument("--N", dest="N", type=int)
    p.add_argument("--epsilon", type=_rational)
    p.add_argument("--tauD", dest="tauD", type=_rational)
    p.add_argument("--transport", nargs=2, type=int, metavar=("N1", "N2"),
                   help="gamma = 1 Jacobi ensemble for N1 incoming and N2 outgoing channels")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="betamoments", description="Large-N moments of beta ensembles")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moment", help="moments <T^n>")
    _add_ensemble_flags(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--n-max", type=int)
    p.add_argument("--backend", choices=("recurrence", "closed", "series", "paths", "all"), default="recurrence")
    _add_output_flags(p)

    p = sub.add_parser("series", help="generating-function coefficients")
    _add_ensemble_flags(p)
    p.add_argument("--order", type=int, required=True)
    _add_output_flags(p)

    p = sub.add_parser("paths", help="weighted lattice-path counts")
    p.add_argument("--model", choices=("dyck", "motzkin", "schroder", "jacobi4"), required=True)
    p.add_argument("--pairs", type=int, help="dyck: number of rise/fall pairs")
    p.add_argument("--length", type=int, help="horizontal length (dyck, motzkin, jacobi4)")
    p.add_argument("--rises", type=int, help="motzkin: count only paths with this many rises")
    p.add_argument("--n", type=int, help="schroder: index n, paths of horizontal length n")
    p.add_argument("--weights", default="", help='comma list such as "U=1/2,D=1/3,H=2,V=-1"')
    p.add_argument("--enumerate", action="store_true", help="also list the paths as U/D/H/V words")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--suite", choices=("cross-backend", "identities", "paths-oracle", "all"), default="all")
    p.add_argument("--max-n", type=int, default=30)
    _add_output_flags(p)

    p = sub.add_parser("sample", help="Metropolis estimates at finite N")
    _add_ensemble_flags(p)
    p.add_argument("--sweeps", type=int, default=200_000)
    p.add_argument("--burn-in", type=int, default=20_000)
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--step-scale", type=float)
    p.add_argument("--factorization", action="store_true",
                   help="estimate cov(T1,T2) at N and 2N instead")
    _add_output_flags(p)
    return ap


def spec_from_args(args) -> EnsembleSpec:
    if args.transport:
        n1, n2 = args.transport
        return transport_to_jacobi(n1, n2, args.beta if args.beta is not None else 2)
    if not args.kind:
        raise UsageError("--kind (or --transport) is required")
    kw = {k: getattr(args, k) for k in ("alpha", "gamma", "beta", "N", "epsilon", "tauD")}
    return EnsembleSpec(args.kind, **{k: v for k, v in kw.items() if v is not None})


def _envelope(command, results, spec=None, **extra):
    env = {"command": command, "version": __version__}
    if spec is not None:
        env["spec"] = spec.to_json()
        env["a_params"] = a_params(spec).to_json()
    env["results"] = results
    env.update(extra)
    return env


# ---------------------------------------------------------------------------
# commands; each returns (envelope, csv rows, exit code)


def cmd_moment(args):
    spec = spec_from_args(args)
    if args.n is not None:
        lo, hi = args.n, args.n
    else:
        lo, hi = 1, args.n_max
    if lo < 1:
        raise UsageError("--n/--n-max must be >= 1")
    extra = {}
    code = EXIT_OK
    if args.backend == "all":
        run = moments_all_backends(spec, hi)
        results = [r for r in run.results if r.n >= lo]
        extra["equality"] = run.report.to_json()
        if not run.report.equal:
            code = EXIT_FAILED
    else:
        backend = "closed_form" if args.backend == "closed" else args.backend
        ctx = MomentContext(spec)
        results = [MomentResult(spec, n, backend, ctx.value(backend, n)) for n in range(lo, hi + 1)]
    payload = [r.to_json() for r in results]
    rows = [[d[h] for h in CSV_HEADERS["moment"]] for d in payload]
    return _envelope("moment", payload, spec, **extra), rows, code


def cmd_series(args):
    spec = spec_from_args(args)
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    coeffs = generating_function(spec, args.order).to_strings()
    rows = [[n, c] for n, c in enumerate(coeffs)]
    return _envelope("series", coeffs, spec), rows, EXIT_OK


def _parse_weights(text):
    w = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = part.partition("=")
        key = key.strip().upper()
        if not sep or key not in ("U", "D", "H", "V"):
            raise UsageError(f"--weights: cannot parse {part!r}")
        try:
            w[key] = parse_rational(val)
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"--weights: {e}") from None
    return w


def _count_json(c: Fraction):
    return c.numerator if c.denominator == 1 else format_rational(c)


def cmd_paths(args):
    w = _parse_weights(args.weights)
    W = lambda k: w.get(k, 1)  # noqa: E731
    extra = {}
    if args.model == "dyck":
        if args.pairs is None and args.length is None:
            raise UsageError("dyck needs --pairs or --length")
        L = 2 * args.pairs if args.pairs is not None else args.length
        model = dyck_model(L, W("U"), W("D"))
        size = {"length": L}
        steps_bound = L
    elif args.model == "motzkin":
        if args.length is None:
            raise UsageError("motzkin needs --length")
        L = args.length
        model = motzkin_model(L, W("U"), W("D"), W("H"))
        size = {"length": L}
        steps_bound = L
    elif args.model == "schroder":
        if args.n is None:
            raise UsageError("schroder needs --n")
        L = args.n
        model = schroder_like_model(L, W("V"), W("D"), W("H"))
        size = {"n": L}
        steps_bound = 2 * L
        extra["schroder_number"] = schroder(L)
    else:
        if args.length is None:
            raise UsageError("jacobi4 needs --length")
        L = args.length
        model = jacobi_model(L, W("V"), W("U"), W("D"), W("H"))
        size = {"length": L}
        steps_bound = 2 * L
    if L < 0:
        raise UsageError("size must be non-negative")

    listed = None
    if args.enumerate:
        if steps_bound > MAX_ENUMERATION_STEPS:
            raise UsageError(f"enumeration bound: paths may need {steps_bound} > {MAX_ENUMERATION_STEPS} steps")
        listed = enumerate_paths(model, max(1, steps_bound))

    if args.model == "motzkin" and args.rises is not None:
        if w:
            raise UsageError("--rises counts unweighted paths; drop --weights")
        count = Fraction(motzkin_count(L, args.rises))
        size["rises"] = args.rises
        if listed is not None:
            listed = [p for p in listed if sum(1 for m in p.moves if m == RISE) == args.rises]
    else:
        count = count_weighted_paths(model)

    result = {"model": args.model, **size, "count": _count_json(count)}
    if listed is not None:
        result["paths"] = [str(p) for p in listed]
        if args.model == "schroder":
            # H in an image is a flat step of length 2
            result["schroder_images"] = [str(schroder_bijection(p)) for p in listed]
    size_str = ";".join(f"{k}={v}" for k, v in size.items())
    rows = [[args.model, size_str, format_rational(count), ""]]
    if listed is not None:
        rows += [[args.model, size_str, "", str(p)] for p in listed]
    return _envelope("paths", result, None, **extra), rows, EXIT_OK


def cmd_verify(args):
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    checks = run_suite(args.suite, args.max_n)
    ok = all(c.passed for c in checks)
    payload = [c.to_json() for c in checks]
    rows = [[c.suite, c.name, c.passed, json.dumps(c.detail, sort_keys=True)] for c in checks]
    for c in checks:
        if not c.passed:
            print(f"FAIL {c.suite}: {c.name} {c.detail}", file=sys.stderr)
    env = _envelope("verify", payload, None, all_passed=ok, suite=args.suite)
    return env, rows, EXIT_OK if ok else EXIT_FAILED


def cmd_sample(args):
    spec = spec_from_args(args)
    if spec.beta is None or spec.N is None:
        raise UsageError("sampling needs --beta and --N")
    try:
        cfg = ChainConfig(args.sweeps, args.burn_in, args.step_scale, args.chains, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.factorization:
        rep = factorization_test(spec, cfg)
        rows = [["cov_ratio", r["N"], r["ratio"], r["ratio_stderr"]] for r in rep["runs"]]
        rows.append(["decay_factor", "", rep["decay_factor"], rep["decay_factor_stderr"]])
        return _envelope("sample", rep, spec, mode="factorization"), rows, EXIT_OK
    st = mh_sample(spec, cfg, n_max=args.n_max)
    for note in st.diagnostics["warnings"]:
        print(f"warning: {note}", file=sys.stderr)
    d = st.to_json()
    rows = [["moment", e["n"], e["mean"], e["stderr"]] for e in d["estimates"]]
    rows.append(["pair_cov", "", d["pair_cov"]["cov"], d["pair_cov"]["stderr"]])
    return _envelope("sample", d, spec, mode="moments"), rows, EXIT_OK


COMMANDS = {
    "moment": cmd_moment,
    "series": cmd_series,
    "paths": cmd_paths,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


def _render(args, env, rows) -> str:
    if args.format == "json":
        return json.dumps(env, indent=2) + "\n"
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADERS[args.command])
    wr.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        env, rows, code = COMMANDS[args.command](args)
    except (UsageError, ValueError) as e:
        print(f"betamoments {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(args, env, rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
