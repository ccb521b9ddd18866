"""Command-line entry point: ``consecpat <subcommand> [options]``.

Every report echoes the resolved configuration.  Errors are printed to stderr
as a JSON object ``{"error": {"kind", "code", "message"}}`` and the process
exits with that code.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .errors import ConsecPatError, InvalidInputError
from .exact_oracle import enumerate_expectations, exact_tv_to_poisson, u_distribution
from .overlap import analyze_overlap, expected_Zk
from .pattern_stats import distinct_counts
from .perm_core import Permutation, as_pattern, read_permutations
from .serialize import dumps, fraction_str, to_jsonable
from .simulate import mc_expectation, mc_pattern_occurrence
from .stein_chen import ex_lower_bound, expected_occurrences, rows_to_csv, theorem_crossover, tv_bound

DEFAULT_SEED = 20240319
THREADS_ENV = "CONSECPAT_THREADS"
USAGE_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", USAGE_ERROR, message)
        sys.exit(USAGE_ERROR)


def _emit_error(kind: str, code: int, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "code": code, "message": message}}) + "\n")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="consecpat", description="Consecutive patterns in random permutations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--threads", type=int, default=_default_threads())
        return p

    p = common(sub.add_parser("count", help="distinct/repeat/pair counts of a permutation"))
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--perm", help='inline permutation, e.g. "983762541" or "9,8,3,..."')
    src.add_argument("--input", help="file with one permutation per line")
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int)

    p = common(sub.add_parser("sample", help="Monte Carlo estimate of E(X_n)"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--kmin", type=int)

    p = common(sub.add_parser("exact", help="exact expectations by enumeration (n <= 9)"))
    p.add_argument("--n", type=int, required=True)

    p = common(sub.add_parser("udist", help="exact law of a pattern's occurrence count vs Poisson"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--pattern", required=True)
    p.add_argument("--R", type=int, help="also run a Monte Carlo estimate with R replicates")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = common(sub.add_parser("overlap", help="pattern against itself at overlap r"))
    p.add_argument("--pattern", required=True)
    p.add_argument("--r", type=int, required=True)

    p = common(sub.add_parser("zk", help="exact E(Z^k)"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = common(sub.add_parser("bound", help="Stein-Chen total variation bound"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pattern", help="use exact joint probabilities for this pattern")

    p = common(sub.add_parser("theorem", help="lower-bound chain for E(X_n), or a crossover scan"))
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int)
    grp.add_argument("--scan", nargs=2, type=int, metavar=("N_LO", "N_HI"))
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _count(args):
    if args.perm is not None:
        perms = [Permutation.parse(args.perm)]
    else:
        with open(args.input, encoding="utf-8") as fh:
            perms = read_permutations(fh)
        if not perms:
            raise InvalidInputError(f"no permutations in {args.input}")
    stats = [distinct_counts(p, args.kmin, args.kmax) for p in perms]
    result = [{"permutation": str(p), "x_total": s.x_total, "stats": to_jsonable(s)} for p, s in zip(perms, stats)]
    rows = [(str(p), lv.k, lv.windows, lv.x, lv.y, lv.z) for p, s in zip(perms, stats) for lv in s.levels]
    return result, _csv(rows, ["permutation", "k", "windows", "x_k", "y_k", "z_k"])


def _sample(args):
    est = mc_expectation(args.n, args.R, args.seed, args.kmin, workers=args.threads)
    return to_jsonable(est), est.to_csv()


def _exact(args):
    e = enumerate_expectations(args.n, workers=args.threads)
    result = to_jsonable(e)
    result["ex"] = fraction_str(e.ex)
    result["ex_float"] = float(e.ex)
    rows = [(k, fraction_str(x), fraction_str(y), fraction_str(z))
            for k, (x, y, z) in enumerate(zip(e.ex_k, e.ey_k, e.ez_k), start=1)]
    rows.append(("total", fraction_str(e.ex), "", ""))
    return result, _csv(rows, ["k", "E_X_k", "E_Y_k", "E_Z_k"])


def _udist(args):
    p = as_pattern(args.pattern)
    k = args.k if args.k is not None else p.k
    table = u_distribution(args.n, k, p)
    lam = expected_occurrences(args.n, k)
    tv = exact_tv_to_poisson(table, lam)
    bound = tv_bound(args.n, k, p)
    result = {
        "table": to_jsonable(table),
        "mean": fraction_str(table.mean),
        "lam": fraction_str(lam),
        "lam_float": float(lam),
        "tv": tv,
        "epsilon_sharp_pattern": bound.epsilon_sharp,
        "epsilon_sharp_uniform": tv_bound(args.n, k).epsilon_sharp,
    }
    if args.R is not None:
        result["monte_carlo"] = to_jsonable(mc_pattern_occurrence(args.n, k, p, args.R, args.seed, args.threads))
    rows = [(j, fraction_str(q), float(q)) for j, q in enumerate(table.pmf)]
    return result, _csv(rows, ["j", "pmf", "pmf_float"])


def _overlap(args):
    a = analyze_overlap(args.pattern, args.r)
    result = to_jsonable(a)
    rows = [(key, json.dumps(val) if isinstance(val, (list, dict)) or val is None else val)
            for key, val in result.items()]
    return result, _csv(rows, ["field", "value"])


def _zk(args):
    v = expected_Zk(args.n, args.k)
    result = {"n": args.n, "k": args.k, "expected_Zk": fraction_str(v), "expected_Zk_float": float(v)}
    return result, _csv([(args.n, args.k, fraction_str(v), float(v))], ["n", "k", "expected_Zk", "float"])


def _bound(args):
    rep = tv_bound(args.n, args.k, args.pattern)
    return to_jsonable(rep), rows_to_csv(rep.to_rows())


def _theorem(args):
    if args.n is not None:
        chain = ex_lower_bound(args.n)
        result = to_jsonable(chain)
        result.update(chain_holds=chain.chain_holds, final_step_holds=chain.final_step_holds,
                      first_failing_line=chain.first_failing_line())
        return result, rows_to_csv(chain.to_rows())
    lo, hi = args.scan
    cross = theorem_crossover(lo, hi)
    result = to_jsonable(cross)
    rows = [(key, "" if val is None else val) for key, val in result.items()]
    return result, _csv(rows, ["field", "value"])


HANDLERS = {
    "count": _count,
    "sample": _sample,
    "exact": _exact,
    "udist": _udist,
    "overlap": _overlap,
    "zk": _zk,
    "bound": _bound,
    "theorem": _theorem,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, csv_text = HANDLERS[args.command](args)
    except ConsecPatError as exc:
        _emit_error(type(exc).__name__, exc.code, str(exc))
        return exc.code
    except OSError as exc:
        _emit_error("OSError", 6, str(exc))
        return 6
    config = _config(args)
    if args.format == "json":
        text = dumps({"command": args.command, "version": __version__, "config": config, "result": result})
    else:
        header = "".join(f"# {k}={v}\n" for k, v in config.items())
        text = header + csv_text
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
