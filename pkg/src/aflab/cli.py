"""Command-line front end.

    aflab run --shape ball.json [--checks all|table1|id,id] [--grid 48x96]
              [--origin as-given|circumcenter|steiner] [--format json|csv] [--out FILE]
    aflab convergence --shape ellipse.json --check af-identity-1 --grids 16,32,64
    aflab oracle --shape body.json --quantity I0,hx2_2 [--grid N]

Exit codes: 0 all checks passed (skips allowed), 1 some check failed,
2 usage or input errors.
"""

import argparse
import sys

import numpy as np

from .checks import convergence_study, run_suite
from .errors import AflabError
from .geometry.grids import default_grid, parse_grid
from .geometry.hypotheses import check_hypotheses
from .geometry.sampling import sample
from .geometry.shapes import translate
from .measures import min_enclosing_ball, steiner_point_from_samples
from .oracle import dense_quadrature_crosscheck
from .report import csv_report, csv_table, dumps, json_report
from .specfile import load_shape

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ORIGINS = ("as-given", "circumcenter", "steiner")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


class _Usage(Exception):
    pass


def build_parser():
    p = _Parser(prog="aflab", description="Curvature-integral identities and inequalities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a check suite on one shape")
    run.add_argument("--shape", required=True, help="shape-spec JSON file")
    run.add_argument("--checks", default="all", help="comma-separated ids, 'all' or 'table1'")
    run.add_argument("--grid", help="N (S^1) or NlatxNlon (S^2); default 128 / 48x96")
    run.add_argument("--origin", choices=ORIGINS, default="as-given")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--out", help="output file (default stdout)")
    run.add_argument("--no-refine", action="store_true",
                     help="skip the refined-grid pass (tolerance is then 1e-9 relative)")

    conv = sub.add_parser("convergence", help="residual of one check over several grids")
    conv.add_argument("--shape", required=True)
    conv.add_argument("--check", required=True)
    conv.add_argument("--grids", required=True, help="comma-separated grid sizes")
    conv.add_argument("--format", choices=("json", "csv"), default="json")
    conv.add_argument("--out")

    orc = sub.add_parser("oracle", help="dense-quadrature cross-check of curvature integrals")
    orc.add_argument("--shape", required=True)
    orc.add_argument("--quantity", default="I0",
                     help="comma-separated: I<k>, hx2_<k>, delta2_<k>, newton_<k>")
    orc.add_argument("--grid")
    orc.add_argument("--tol", type=float, default=1e-8, help="relative error counted as a failure")
    orc.add_argument("--format", choices=("json", "csv"), default="json")
    orc.add_argument("--out")
    return p


def _grid(text, dim):
    return default_grid(dim) if text is None else parse_grid(text, dim)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def origin_shift(shape, grid, origin):
    """Translation that moves the chosen origin of ``shape`` to 0."""
    if origin == "as-given":
        return np.zeros(shape.dim + 1)
    s = sample(shape, grid)
    if origin == "circumcenter":
        return -min_enclosing_ball(s.X).center
    rep = check_hypotheses(s, "convex")
    if not rep.passed:
        raise AflabError(f"the Steiner point needs a convex body; {rep.describe()}")
    return -steiner_point_from_samples(s)


def command_run(args):
    shape = load_shape(args.shape)
    grid = _grid(args.grid, shape.dim)
    shift = origin_shift(shape, grid, args.origin)
    if np.any(shift):
        shape = translate(shape, shift)
    results = run_suite(shape, grid, args.checks, refine=not args.no_refine)
    if args.format == "json":
        meta = {"shape": args.shape, "grid": grid.label, "origin": args.origin}
        _emit(json_report(results, meta), args.out)
    else:
        _emit(csv_report(results), args.out)
    return EXIT_FAIL if any(r.verdict == "fail" for r in results) else EXIT_OK


def command_convergence(args):
    shape = load_shape(args.shape)
    sizes = [s for s in args.grids.split(",") if s.strip()]
    grids = [parse_grid(s, shape.dim) for s in sizes]
    rows = convergence_study(shape, args.check, grids)
    cols = ("size", "residual_or_slack", "lhs", "rhs")
    if args.format == "json":
        doc = {"check": args.check, "rows": [dict(zip(cols, r)) for r in rows]}
        _emit(dumps(doc) + "\n", args.out)
    else:
        _emit(csv_table(cols, rows), args.out)
    return EXIT_OK


def command_oracle(args):
    shape = load_shape(args.shape)
    grid = _grid(args.grid, shape.dim)
    reports = [dense_quadrature_crosscheck(shape, q.strip(), grid)
               for q in args.quantity.split(",") if q.strip()]
    cols = ("quantity", "oracle_value", "main_value", "rel_error")
    if args.format == "json":
        _emit(dumps({"reports": [r.to_dict() for r in reports]}) + "\n", args.out)
    else:
        _emit(csv_table(cols, [[getattr(r, c) for c in cols] for r in reports]), args.out)
    return EXIT_FAIL if any(not r.rel_error < args.tol for r in reports) else EXIT_OK


COMMANDS = {"run": command_run, "convergence": command_convergence, "oracle": command_oracle}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (AflabError, OSError) as exc:
        print(f"aflab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
