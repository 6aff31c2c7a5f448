import argparse
import sys

from spanner.build_spanner import CUSTOM_MODE, PRACTICAL_MODE, THEOREM_MODE, TRIANGLE_METHODS

DISTRIBUTIONS = ("uniform-cube", "gaussian", "clustered")
OUTPUT_FORMATS = ("text", "json")

DEFAULT_EPS = 1.0
DEFAULT_TRIANGLE_EPS1 = 0.5
DEFAULT_CANVAS_SIZE = 800
DEFAULT_STROKE_WIDTH = 1.0

USAGE_EXIT_CODE = 1


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (recorded in the report).")
    parser.add_argument("--out", help="Output file; stdout when omitted.")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="text", help="Report format.")
    parser.add_argument("--timings", action="store_true", help="Include phase timings in the report.")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log debug messages.")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings and errors only.")


def build_parser():
    """
    Defines the subcommands:

    gen           random point sets
    spanner       sparse oriented spanner (or the dense greedy baseline)
    dilation      exact or approximate oriented dilation of a stored graph
    min-triangle  approximate vs exact minimum triangle for one pair
    render        SVG drawing of a planar graph
    validate      structural checks on a stored graph
    """
    parser = CommandParser(
        prog="oriented-spanners",
        description="Build sparse oriented spanners and measure oriented dilation.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)

    gen = subparsers.add_parser("gen", help="Generate a random point set.")
    gen.add_argument("n", type=int, help="Number of points (>= 1).")
    gen.add_argument("d", type=int, help="Dimension (>= 1).")
    gen.add_argument("--distribution", choices=DISTRIBUTIONS, default="uniform-cube")
    _add_common(gen)

    spanner = subparsers.add_parser("spanner", help="Build an oriented spanner for a point file.")
    spanner.add_argument("points", help="Point file.")
    spanner.add_argument("--eps", type=float, default=DEFAULT_EPS, help="Target dilation 2+eps, eps in (0, 2).")
    spanner.add_argument("--eps1", type=float, help="Triangle approximation factor (custom mode only).")
    spanner.add_argument("--s", type=float, help="WSPD separation (custom mode only).")
    spanner.add_argument("--alpha", type=float, help="Triangle query cut-off ratio (custom mode only).")
    spanner.add_argument("--mode", choices=(THEOREM_MODE, PRACTICAL_MODE, CUSTOM_MODE), default=THEOREM_MODE)
    spanner.add_argument("--triangle-method", choices=TRIANGLE_METHODS, default="grid")
    spanner.add_argument("--baseline", action="store_true",
                         help="Dense greedy orientation over the minimum triangles of all pairs.")
    spanner.add_argument("--report", help="Write the run report here instead of stdout.")
    _add_common(spanner)

    dilation = subparsers.add_parser("dilation", help="Oriented dilation of a stored graph.")
    dilation.add_argument("points", help="Point file (or metric matrix with --metric).")
    dilation.add_argument("graph", help="Graph file.")
    method = dilation.add_mutually_exclusive_group(required=True)
    method.add_argument("--exact", action="store_true", help="Cubic exact computation.")
    method.add_argument("--approx", type=float, metavar="EPS", help="WSPD approximation with accuracy EPS > 0.")
    dilation.add_argument("--metric", action="store_true", help="First input is a metric matrix (exact only).")
    dilation.add_argument("--eps1", type=float, help="Override eps1 = eps/2 of the approximation.")
    dilation.add_argument("--s", type=float, help="Override s = 28/eps of the approximation.")
    dilation.add_argument("--inflate", type=float, default=1.0, metavar="K",
                          help="Multiply every oracle answer by K (synthetic K-approximate oracle).")
    dilation.add_argument("--triangle-method", choices=TRIANGLE_METHODS, default="grid")
    _add_common(dilation)

    triangle = subparsers.add_parser("min-triangle", help="Approximate minimum triangle for one pair.")
    triangle.add_argument("points", help="Point file.")
    triangle.add_argument("p", type=int)
    triangle.add_argument("q", type=int)
    triangle.add_argument("--eps1", type=float, default=DEFAULT_TRIANGLE_EPS1)
    triangle.add_argument("--eps2", type=float, help="Override the nearest-neighbour slack eps1/2.")
    triangle.add_argument("--alpha", type=float, help="Override the cut-off ratio 4/eps1.")
    triangle.add_argument("--eps3", type=float, help="Override the grid cell ratio.")
    _add_common(triangle)

    render = subparsers.add_parser("render", help="Draw a planar oriented graph as SVG.")
    render.add_argument("points", help="Point file (d = 2).")
    render.add_argument("graph", help="Graph file.")
    render.add_argument("--size", type=int, default=DEFAULT_CANVAS_SIZE, help="Canvas side in pixels.")
    render.add_argument("--stroke-width", type=float, default=DEFAULT_STROKE_WIDTH)
    _add_common(render)

    validate = subparsers.add_parser("validate", help="Check a stored graph against its point file.")
    validate.add_argument("points", help="Point file.")
    validate.add_argument("graph", help="Graph file.")
    _add_common(validate)

    return parser


def parse_arguments(argv=None):
    """Parses the command line; argparse usage errors exit with code 1."""
    return build_parser().parse_args(argv)
