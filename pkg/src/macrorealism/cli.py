"""Command-line entry point: ``macrorealism <subcommand> ...`` or ``python -m macrorealism``.

Exit codes: 0 success, 1 reproduction failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import bounds, support
from .bounds import ExperimentFrequencies
from .fragment import QuantumFragment, fragment_to_ptm, paper_fragment_theorem1, paper_fragment_theorem2
from .io import InputError, dumps, load_fragment, load_frequencies, load_model
from .overlap import support_curve
from .reproduce import format_rows, run_reproduction
from .search import maximize_gap

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

PAPER_FRAGMENTS = {"t1": paper_fragment_theorem1, "t2": paper_fragment_theorem2}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fragment_from_args(args) -> QuantumFragment:
    if getattr(args, "input", None):
        return load_fragment(args.input)
    return PAPER_FRAGMENTS[args.which or "t2"]()


def _observations(args):
    """Frequencies file if given, else the Born-rule table of the selected fragment."""
    if getattr(args, "freqs", None):
        return load_frequencies(args.freqs)
    return ExperimentFrequencies.from_table(fragment_to_ptm(_fragment_from_args(args)))


def cmd_fragment(args) -> int:
    frag = _fragment_from_args(args)
    table = fragment_to_ptm(frag)
    q = bounds.table_quantities(table)
    report = {
        "fragment": frag.to_dict(),
        "table": table.to_dict(),
        "gap": bounds.gap(table),
        "premises": {k: q[k] for k in ("p_a2_Pq1", "p_a3_TPq1", "p_q3_TPq1")},
        "premises_hold": bounds.theorem1_premises_hold(table, args.tol),
        "tol": args.tol,
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def _curve_rows(model, prep: str, q: str, alpha_max: float, points: int) -> tuple[list[tuple[float, float]], float | None]:
    """Exact breakpoints for a single (density, generator) pair, else samples on a grid."""
    gens = model.eigen_densities.get(q, ())
    dens = model.densities(prep)
    if len(gens) == 1 and len(dens) == 1:
        curve = support_curve(dens[0], gens[0])
        rows = curve.breakpoints
        tail = 2.0 * curve.alphas[-1] if curve.alphas[-1] > 0.0 else 1.0
        rows.append((tail, curve.asymptote))
        return rows, curve.asymptote
    grid = np.linspace(0.0, alpha_max, points)
    return support.model_support_curve(model, prep, q, grid), None


def cmd_curve(args) -> int:
    model = load_model(args.model)
    try:
        rows, _ = _curve_rows(model, args.prep, args.q, args.alpha_max, args.points)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    if args.format == "json":
        _emit(dumps({"prep": args.prep, "q": args.q, "curve": [list(r) for r in rows]}), args.out)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "omega"])
    for a, v in rows:
        writer.writerow([f"{a:.17g}", f"{v:.17g}"])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_exclude(args) -> int:
    freqs = load_frequencies(args.freqs)
    region = bounds.excluded_region(freqs)
    if args.format == "csv":
        _emit(region.to_csv(), args.out)
        return EXIT_OK
    line = region.line
    report = {
        "inputs": {"freqs": freqs.to_dict(), "model": args.model, "prep": args.prep, "q": args.q},
        "line": {"intercept": line.intercept, "slope": line.slope, "target": line.target},
        "beta_bound_at_0": region.beta_bound(0.0),
        "zero_alpha": region.zero_alpha,
        "em_ruled_out": bounds.em_ruled_out(freqs),
    }
    if args.model:
        model = load_model(args.model)
        gens = model.eigen_densities.get(args.q, ())
        dens = model.densities(args.prep) if args.prep in model.preparation_labels else None
        if dens is None:
            raise InputError(f"model has no preparation {args.prep!r}")
        if len(gens) == 1 and len(dens) == 1:
            verdict = bounds.ruled_out(support_curve(dens[0], gens[0]), line)
        else:
            grid = np.linspace(0.0, args.alpha_max, args.points)
            verdict = bounds.ruled_out(support.model_support_curve(model, args.prep, args.q, grid), line)
        report["verdict"] = verdict.to_dict()
    if args.region_out:
        Path(args.region_out).write_text(region.to_csv(), encoding="utf-8")
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_epsilon(args) -> int:
    obs = _observations(args)
    quad = bounds.epsilon_quadratic(obs)
    eps = bounds.worst_case_epsilon(obs)
    report = {
        "epsilon": eps,
        "quadratic": quad.to_dict(),
        "residual_at_root": bounds.epsilon_residual(obs, eps) if eps > 0 else None,
        "inputs": obs.to_dict(),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_em_check(args) -> int:
    freqs = _observations(args)
    line = bounds.exclusion_line(freqs)
    report = {
        "em_ruled_out": bounds.em_ruled_out(freqs),
        "line": {"intercept": line.intercept, "slope": line.slope, "target": line.target},
        "inputs": freqs.to_dict(),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    result = maximize_gap(args.restarts, args.seed, complex_psi=args.complex)
    _emit(dumps(result.to_dict()), args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = run_reproduction(fast=args.fast, seed=args.seed)
    if args.format == "json":
        _emit(dumps([r.to_dict() for r in rows]), args.out)
    else:
        _emit(format_rows(rows), args.out)
    failed = [r.name for r in rows if not r.passed]
    if failed:
        sys.stderr.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.fragment:
        load_fragment(args.fragment, args.tol)
    if args.model:
        load_model(args.model)
    if args.freqs:
        load_frequencies(args.freqs)
    if not (args.fragment or args.model or args.freqs):
        raise InputError("nothing to validate: pass --fragment, --model or --freqs")
    _emit(dumps({"valid": True, "violations": []}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="premise / validation tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", help="write output here instead of stdout")

    frag_sel = argparse.ArgumentParser(add_help=False)
    g = frag_sel.add_mutually_exclusive_group()
    g.add_argument("--which", choices=sorted(PAPER_FRAGMENTS), help="built-in fragment")
    g.add_argument("--input", "--fragment", dest="input", help="fragment JSON file")

    parser = argparse.ArgumentParser(prog="macrorealism", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fragment", parents=[common, frag_sel], help="Born-rule table, gap and premises")
    p.set_defaults(func=cmd_fragment)

    p = sub.add_parser("curve", parents=[common], help="support curve of a model preparation")
    p.add_argument("--model", required=True)
    p.add_argument("--prep", default="P")
    p.add_argument("--q", default="q1")
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    p.set_defaults(func=cmd_curve, default_format="csv")

    p = sub.add_parser("exclude", parents=[common], help="exclusion line, region and crossing verdict")
    p.add_argument("--freqs", required=True)
    p.add_argument("--model")
    p.add_argument("--prep", default="P")
    p.add_argument("--q", default="q1")
    p.add_argument("--region-out", help="also write the region CSV here")
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(func=cmd_exclude, default_format="json")

    for name, func, helptext in (
        ("epsilon", cmd_epsilon, "worst-case noise threshold"),
        ("em-check", cmd_em_check, "mixing-model exclusion test"),
    ):
        p = sub.add_parser(name, parents=[common, frag_sel], help=helptext)
        p.add_argument("--freqs", help="frequencies JSON (overrides the fragment)")
        p.set_defaults(func=func, default_format="json")

    p = sub.add_parser("search", parents=[common], help="maximize the gap over real qutrit fragments")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--complex", action="store_true", help="allow complex phases in psi")
    p.set_defaults(func=cmd_search, default_format="json")

    p = sub.add_parser("reproduce", parents=[common], help="recompute every headline number")
    p.add_argument("--fast", action="store_true", help="skip the fragment search")
    p.set_defaults(func=cmd_reproduce, default_format="text")

    p = sub.add_parser("validate", parents=[common], help="check input files against their formats")
    p.add_argument("--fragment")
    p.add_argument("--model")
    p.add_argument("--freqs")
    p.set_defaults(func=cmd_validate, default_format="json", tol=1e-10)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "json")
    if args.tol <= 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(dumps(exc.to_dict()))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
