"""
rigidcol command line: first-moment bound on the 3-colourability
threshold of random graphs, with a desk-scale graph lab to check it.

Run with:  python app.py bound --c 2.468155
"""
import argparse
import logging
import sys
import traceback

import rigidcol
from rigidcol.errors import RigidColError
from rigidcol.types import SOLVER_METHODS

import services
import utils

logger = logging.getLogger("rigidcol")

# ── Command runners ──────────────────────────────────────────────────────────
# Each returns the full text to print so nothing reaches stdout on failure.

def _render(record, args):
    if args.json:
        return record.to_json() + "\n"
    if args.csv:
        return record.to_csv()
    return record.to_lines()


def _render_table(frame, args):
    if args.json:
        return utils.frame_to_json_lines(frame)
    return utils.frame_to_csv(frame)


def run_bound(args):
    return _render(services.cmd_bound(args.c, args.xmax, args.unit_mass, args.method), args)


def run_threshold(args):
    return _render(services.cmd_threshold(args.xmax, args.tol), args)


def run_scan(args):
    if args.grid_mode:
        frame = services.cmd_residual_grid(args.c, args.xmax, args.points)
    else:
        frame = services.cmd_scan(args.c_lo, args.c_hi, args.steps, args.xmax, args.jobs)
    return _render_table(frame, args)


def run_rigid_count(args):
    return _render(services.cmd_rigid_count(args.path), args)


def run_mc(args):
    record = services.cmd_mc(args.n, args.m, args.c, args.epsilon, args.xmax,
                             args.samples, args.seed, args.jobs)
    return _render(record, args)


def run_sample(args):
    graph, record = services.cmd_sample(args.n, args.m, args.seed, args.out)
    if args.out:
        return _render(record, args)
    return rigidcol.format_graph(graph)


# ── Command Registry ─────────────────────────────────────────────────────────
# Every subcommand is registered here; the parser is built from this list.

COMMANDS = [
    {
        "name": "bound",
        "handler": run_bound,
        "description": "Solve the spread system at one density c and print the "
                       "per-vertex bound F(c); F < 1 rules out 3-colourings.",
    },
    {
        "name": "threshold",
        "handler": run_threshold,
        "description": "Bisect on c for F(c) = 1 and print the resulting "
                       "upper bound c* on the threshold.",
    },
    {
        "name": "scan",
        "handler": run_scan,
        "description": "Tabulate F(c) and the spreads over an even grid of "
                       "densities, or K0/K1 over the admissible box with --grid-mode.",
    },
    {
        "name": "rigid-count",
        "handler": run_rigid_count,
        "description": "Count proper and rigid 3-colourings of a graph file "
                       "by exhaustive enumeration.",
    },
    {
        "name": "mc",
        "handler": run_mc,
        "description": "Monte Carlo estimate of the expected number of rigid "
                       "colourings on the degree-restricted subspace.",
    },
    {
        "name": "sample",
        "handler": run_sample,
        "description": "Sample a random multigraph G(n, m) in the text graph format.",
    },
]


# ── Parser ───────────────────────────────────────────────────────────────────

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--debug", action="store_true", help="log solver activity to stderr")
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="one JSON object per record")
    output.add_argument("--csv", action="store_true", help="CSV header and rows")

    parser = argparse.ArgumentParser(prog="rigidcol", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rigidcol {rigidcol.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for command in COMMANDS:
        parsers[command["name"]] = sub.add_parser(
            command["name"], parents=[common], help=command["description"], description=command["description"]
        )
        parsers[command["name"]].set_defaults(handler=command["handler"])

    p = parsers["bound"]
    p.add_argument("--c", type=float, required=True, help="edge density (m = c n)")
    p.add_argument("--xmax", type=int, default=60, help="degree truncation")
    p.add_argument("--unit-mass", action="store_true", help="tie phi2 to 1 instead of U(x_max)")
    p.add_argument("--method", choices=SOLVER_METHODS, default="bisection")

    p = parsers["threshold"]
    p.add_argument("--xmax", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-4, help="width of the final c bracket")

    p = parsers["scan"]
    p.add_argument("--c-lo", type=float, default=2.44)
    p.add_argument("--c-hi", type=float, default=2.50)
    p.add_argument("--steps", type=int, default=7)
    p.add_argument("--xmax", type=int, default=60)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.add_argument("--grid-mode", action="store_true", help="emit y0,y1,K0,K1 over the admissible box")
    p.add_argument("--c", type=float, default=2.468155, help="density for --grid-mode")
    p.add_argument("--points", type=int, default=41, help="grid points per axis for --grid-mode")

    p = parsers["rigid-count"]
    p.add_argument("path", help="graph file: 'n m' header, then one 'u v' line per edge")

    p = parsers["mc"]
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, default=2.468155, help="density of the Poisson reference profile")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--xmax", type=int, default=60)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = parsers["sample"]
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the graph here instead of stdout")

    return parser


# ── Error handler ────────────────────────────────────────────────────────────

def handle_exception(e, stream=None):
    """Report the error on stderr and return the process exit status."""
    stream = stream or sys.stderr
    logger.debug("[cli] %s", traceback.format_exc())
    stream.write(f"error: {type(e).__name__}: {e}\n")
    if isinstance(e, RigidColError):
        return e.exit_code
    return 1


# ── Main ─────────────────────────────────────────────────────────────────────

def main(argv=None):
    args = build_parser().parse_args(argv)
    rigidcol.configure_logging(args.debug or utils.env_flag("RIGIDCOL_DEBUG"))
    try:
        text = args.handler(args)
    except Exception as e:
        return handle_exception(e)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
