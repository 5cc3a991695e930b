"""Command-line interface: ``shellbend {eval,check,families}``.

Exit codes: 0 success, 1 check failure or geometry error, 2 usage/config error.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .config import load_config, parse_grid, run_echo
from .errors import ConfigError, GeometryError
from .families import FAMILIES
from .harness import (DEFAULT_TOL, NORM_TOL, NULLITY_TOL, POLAR_TOL, admissible_mask,
                      interior_grid, measure_field, run_suite)
from .measures import MEASURE_NAMES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_PREFIXES = ("ktilde", "kcheck", "kbar", "ktilde_mod", "kcheck_mod")
COMPONENTS = ((0, 0, "11"), (0, 1, "12"), (1, 0, "21"), (1, 1, "22"))


def csv_header():
    cols = ["xi1", "xi2"]
    for prefix in CSV_PREFIXES:
        cols += [f"{prefix}_{suffix}" for _, _, suffix in COMPONENTS]
    return cols + ["u_norm"]


def _g17(x):
    return format(float(x), ".17g")


def strain_rows(reference, deformed, grid, skip_degenerate=False):
    """CSV rows for every grid point; returns (rows, number skipped)."""
    xi1, xi2 = interior_grid(reference.domain, *grid)
    skipped = 0
    if skip_degenerate:
        try:
            _, ms = measure_field(reference, deformed, xi1, xi2)
        except GeometryError:
            ok = admissible_mask(reference, deformed, xi1, xi2)
            skipped = int(np.count_nonzero(~ok))
            xi1, xi2 = xi1[ok], xi2[ok]
            if len(xi1) == 0:
                return [], skipped
            _, ms = measure_field(reference, deformed, xi1, xi2)
    else:
        _, ms = measure_field(reference, deformed, xi1, xi2)
    rows = []
    for i in range(len(xi1)):
        row = [_g17(xi1[i]), _g17(xi2[i])]
        for name in MEASURE_NAMES:
            k = ms[name][i]
            row += [_g17(k[a, b]) for a, b, _ in COMPONENTS]
        row.append(_g17(ms.u_norm[i]))
        rows.append(row)
    return rows, skipped


def _write_text(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_eval(args):
    if not args.config:
        raise ConfigError("--config", "eval requires a configuration file")
    cfg = load_config(args.config)
    grid = parse_grid(args.grid, "--grid") if args.grid else cfg.grid
    rows, skipped = strain_rows(cfg.reference, cfg.deformed, grid, args.skip_degenerate)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header())
    writer.writerows(rows)
    _write_text(buf.getvalue(), args.out or cfg.csv_path)
    if skipped:
        print(f"skipped {skipped} degenerate grid point(s)", file=sys.stderr)
    return EXIT_OK


def build_report(cfg=None, *, grid=None, scales=None, seeds=None, tol=None):
    """Run the check suite and return the JSON-ready report dict."""
    base = dict(grid=(21, 21), scales=(0.5, 2.0, 10.0), seeds=(0, 1, 2), tol=DEFAULT_TOL,
                nullity_tol=NULLITY_TOL, motions=10, families=tuple(FAMILIES))
    if cfg is not None:
        base.update(grid=cfg.grid, scales=cfg.scales, seeds=cfg.seeds, tol=cfg.tol,
                    nullity_tol=cfg.nullity_tol, motions=cfg.motions, families=cfg.families)
    if grid is not None:
        base["grid"] = grid
    if scales is not None:
        base["scales"] = scales
    if seeds is not None:
        base["seeds"] = seeds
    polar_tol, norm_tol = POLAR_TOL, NORM_TOL
    if tol is not None:
        # a single override tightens or loosens every check alike
        base["tol"] = base["nullity_tol"] = polar_tol = norm_tol = tol

    pairs = [("user-config", cfg.reference, cfg.deformed)] if cfg is not None else []
    reports = run_suite(
        pairs, families=base["families"], seeds=base["seeds"], grid=tuple(base["grid"]),
        scales=base["scales"], tol=base["tol"], nullity_tol=base["nullity_tol"],
        polar_tol=polar_tol, norm_tol=norm_tol, n_motions=base["motions"],
    )
    echo = cfg.echo() if cfg is not None else {"source": None}
    echo["run"] = run_echo(**base)
    passed = sum(r.passed for r in reports)
    return {
        "version": __version__,
        "config": echo,
        "checks": [r.to_dict() for r in reports],
        "summary": {"passed": passed, "failed": len(reports) - passed},
    }


def _parse_scales(text):
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError("--scales", f"expected comma-separated numbers, got {text!r}") from None
    if not values or min(values) <= 0:
        raise ConfigError("--scales", "scale factors must be positive")
    return values


def cmd_check(args):
    cfg = load_config(args.config) if args.config else None
    tol = args.tol
    if tol is not None and not tol > 0:
        raise ConfigError("--tol", "tolerance must be positive")
    report = build_report(
        cfg,
        grid=parse_grid(args.grid, "--grid") if args.grid else None,
        scales=_parse_scales(args.scales) if args.scales else None,
        seeds=(args.seed,) if args.seed is not None else None,
        tol=tol,
    )
    text = json.dumps(report, indent=2) + "\n"
    _write_text(text, args.out or (cfg.report_path if cfg else None))
    summary = report["summary"]
    for check in report["checks"]:
        if check["verdict"] != "pass":
            print(f"FAIL {check['name']} on {check['pair']}: residual {check['max_residual']!r} "
                  f"> tolerance {check['tolerance']!r} at {check['worst'].get('xi')}",
                  file=sys.stderr)
    print(f"{summary['passed']} passed, {summary['failed']} failed", file=sys.stderr)
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def cmd_families(args):
    for kind, fam in FAMILIES.items():
        print(f"{kind:22s} {fam.description}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shellbend",
        description="Bending-strain measures of shell mid-surfaces and their scaling checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="run configuration file")
        p.add_argument("--out", help="output path (default: config setting or stdout)")
        p.add_argument("--grid", help="grid resolution, e.g. 21x21")

    p_eval = sub.add_parser("eval", help="evaluate the measures on a grid and write CSV")
    common(p_eval)
    p_eval.add_argument("--skip-degenerate", action="store_true",
                        help="omit grid points where the geometry is degenerate")
    p_eval.set_defaults(func=cmd_eval)

    p_check = sub.add_parser("check", help="run the invariance suite and write a JSON report")
    common(p_check)
    p_check.add_argument("--seed", type=int, help="use a single family seed")
    p_check.add_argument("--tol", type=float, help="override every check tolerance")
    p_check.add_argument("--scales", help="comma-separated scale factors")
    p_check.set_defaults(func=cmd_check)

    p_fam = sub.add_parser("families", help="list built-in surface families")
    p_fam.set_defaults(func=cmd_families)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
