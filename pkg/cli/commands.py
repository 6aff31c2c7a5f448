"""
Subcommand implementations and the error-to-exit-code mapping.

Exit codes:
    0  success
    1  usage error (bad arguments, broken preconditions)
    2  input validation error (malformed or inconsistent input files)
    3  internal invariant violation (or any unexpected failure)
"""

import logging
import sys
import time

import numpy as np

from cli.arguments import parse_arguments
from cli.display import display_min_triangle, display_validation, emit
from cli.render import render_svg
from core_geometry.errors import InputValidationError, InvariantViolation, UsageError
from core_geometry.geometry import PointSet, exact_min_triangle
from dilation.dilation_calculator import (
    ApproxDilationConfig,
    approx_oriented_dilation,
    exact_oriented_dilation,
    exact_oriented_dilation_metric,
)
from dilation.distance_oracles import InflatedOracle, dijkstra_oracle
from io_formats.load_data import parse_graph, parse_metric_matrix, parse_points, read_text, write_graph, write_points
from io_formats.reports import RunReport, digest_text
from min_triangle.triangle_query import TriangleQueryConfig, TriangleQueryStats, approx_min_triangle
from orientation.oriented_graph import graph_stats, validate_oriented_graph
from spanner.build_spanner import (
    CUSTOM_MODE,
    PRACTICAL_MODE,
    SpannerConfig,
    build_oriented_spanner,
    greedy_complete_spanner,
)
from spatial_index.ann_index import build_ann_index

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

DEFAULT_GEN_SEED = 0
CLUSTER_COUNT = 9
CLUSTER_SPREAD = 30.0
CLUSTER_RADIUS = 2.0


def configure_logging(args):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)

# --- Point Generation ---

def generate_points(n, d, distribution, seed):
    """
    Random point set, reproducible from `seed`.

    uniform-cube: uniform in [0, 1)^d.
    gaussian:     standard normal in every coordinate.
    clustered:    up to 9 cluster centres spread over a cube of side 30, each
                  point uniform in a box of half-side 2 around its centre.
    """
    if n < 1:
        raise UsageError(f"need at least one point, got n = {n}")
    if d < 1:
        raise UsageError(f"dimension must be at least 1, got d = {d}")
    rng = np.random.default_rng(seed)
    if distribution == "uniform-cube":
        coords = rng.random((n, d))
    elif distribution == "gaussian":
        coords = rng.standard_normal((n, d))
    elif distribution == "clustered":
        clusters = min(n, CLUSTER_COUNT)
        centres = rng.random((clusters, d)) * CLUSTER_SPREAD
        membership = rng.integers(0, clusters, size=n)
        coords = centres[membership] + rng.uniform(-CLUSTER_RADIUS, CLUSTER_RADIUS, size=(n, d))
    else:
        raise UsageError(f"unknown distribution {distribution!r}")
    return PointSet(coords)

# --- Subcommands ---

def cmd_gen(args):
    seed = DEFAULT_GEN_SEED if args.seed is None else args.seed
    ps = generate_points(args.n, args.d, args.distribution, seed)
    emit(write_points(ps), args.out)
    logging.info(f"Generated {len(ps)} {args.distribution} points in R^{args.d} with seed {seed}.")
    return EXIT_OK


def _spanner_config(args):
    overrides = {'eps1': args.eps1, 's': args.s, 'alpha': args.alpha}
    given = sorted(name for name, value in overrides.items() if value is not None)
    if args.mode == CUSTOM_MODE:
        return SpannerConfig.custom(args.eps, args.eps1, args.s, args.alpha, triangle_method=args.triangle_method)
    if given:
        raise UsageError(f"{args.mode} mode forbids constant overrides ({', '.join('--' + name for name in given)}); use --mode custom")
    if args.mode == PRACTICAL_MODE:
        return SpannerConfig.practical(args.eps)
    return SpannerConfig.theorem_defaults(args.eps, triangle_method=args.triangle_method)


def cmd_spanner(args):
    if args.out is None:
        raise UsageError("spanner needs --out for the graph file")
    points_text = read_text(args.points)
    ps = parse_points(points_text)

    started = time.perf_counter()
    if args.baseline:
        graph = greedy_complete_spanner(ps)
        config = {'baseline': 'greedy-complete'}
        result = {'graph': graph_stats(graph)}
        timings = {'total': time.perf_counter() - started}
    else:
        cfg = _spanner_config(args)
        graph, stats = build_oriented_spanner(ps, cfg)
        config = cfg.as_dict()
        result = {'stats': stats.as_dict(), 'graph': graph_stats(graph),
                  'guaranteed': cfg.guaranteed and stats.dilation_defined}
        if not stats.dilation_defined:
            result['dilation'] = "undefined: fewer than 3 points admit no triangle"
        timings = dict(stats.phase_seconds)

    emit(write_graph(graph), args.out)
    report = RunReport('spanner', digest_text(points_text), config, result, seed=args.seed, timings=timings)
    emit(report.render(args.format, args.timings), args.report)
    return EXIT_OK


def cmd_dilation(args):
    points_text = read_text(args.points)
    graph_text = read_text(args.graph)
    g = parse_graph(graph_text)

    started = time.perf_counter()
    if args.metric:
        if args.approx is not None:
            raise UsageError("approximate dilation needs point coordinates, not a metric matrix")
        matrix = parse_metric_matrix(points_text, seed=args.seed or 0)
        _check_vertex_count(g, len(matrix), "metric matrix")
        dilation = exact_oriented_dilation_metric(matrix, g)
        config = {'method': 'exact', 'input': 'metric'}
    else:
        ps = parse_points(points_text)
        _check_vertex_count(g, len(ps), "point file")
        if args.exact:
            dilation = exact_oriented_dilation(ps, g)
            config = {'method': 'exact', 'input': 'points'}
        else:
            oracle = dijkstra_oracle(g, ps)
            if args.inflate != 1.0:
                oracle = InflatedOracle(oracle, args.inflate)
            cfg = ApproxDilationConfig.from_eps(args.approx, args.eps1, args.s, triangle_method=args.triangle_method)
            dilation = approx_oriented_dilation(ps, g, args.approx, oracle, cfg)
            config = {'method': 'approximate', 'input': 'points', **cfg.as_dict(),
                      'oracle_factor': oracle.factor, 'oracle_cost': oracle.cost_class}

    report = RunReport('dilation', digest_text(points_text, graph_text), config, dilation.as_dict(),
                       seed=args.seed, timings={'dilation': time.perf_counter() - started})
    emit(report.render(args.format, args.timings), args.out)
    return EXIT_OK


def _check_vertex_count(g, n, source):
    if g.n != n:
        raise InputValidationError(f"graph has {g.n} vertices but the {source} has {n} points")


def cmd_min_triangle(args):
    points_text = read_text(args.points)
    ps = parse_points(points_text)
    cfg = TriangleQueryConfig.from_eps1(args.eps1, ps.dimension, eps2=args.eps2, alpha=args.alpha, eps3=args.eps3)
    stats = TriangleQueryStats()
    approx = approx_min_triangle(build_ann_index(ps), ps, args.p, args.q, cfg, stats)
    exact = exact_min_triangle(ps, args.p, args.q)
    if not cfg.overridden and approx.perimeter > (1 + cfg.eps1) * exact.perimeter:
        raise InvariantViolation(
            f"approximate perimeter {approx.perimeter} exceeds (1+{cfg.eps1}) times the exact {exact.perimeter}"
        )

    case_counts = {'case1': stats.case1, 'case2_grid': stats.case2_grid, 'case2_scan': stats.case2_scan}
    if args.format == "json":
        result = {
            'approximate': {'third': approx.r, 'perimeter': approx.perimeter},
            'exact': {'third': exact.r, 'perimeter': exact.perimeter},
            'ratio': approx.perimeter / exact.perimeter,
            'cases': case_counts,
        }
        config = {'eps1': cfg.eps1, 'eps2': cfg.eps2, 'alpha': cfg.alpha, 'eps3': cfg.eps3, 'p': args.p, 'q': args.q}
        report = RunReport('min-triangle', digest_text(points_text), config, result, seed=args.seed)
        emit(report.to_json(), args.out)
    else:
        emit(display_min_triangle(args.p, args.q, approx, exact, case_counts), args.out)
    return EXIT_OK


def cmd_render(args):
    ps = parse_points(read_text(args.points))
    g = parse_graph(read_text(args.graph))
    emit(render_svg(ps, g, size=args.size, stroke_width=args.stroke_width), args.out)
    return EXIT_OK


def cmd_validate(args):
    points_text = read_text(args.points)
    graph_text = read_text(args.graph)
    ps = parse_points(points_text)
    g = parse_graph(graph_text)
    problems = validate_oriented_graph(g)
    if g.n != len(ps):
        problems.insert(0, f"graph has {g.n} vertices but the point file has {len(ps)} points")
    stats = graph_stats(g)

    if args.format == "json":
        report = RunReport('validate', digest_text(points_text, graph_text), {}, {'problems': problems, 'graph': stats},
                           seed=args.seed)
        emit(report.to_json(), args.out)
    else:
        emit(display_validation(problems, stats), args.out)
    return EXIT_INVARIANT if problems else EXIT_OK


COMMANDS = {
    'gen': cmd_gen,
    'spanner': cmd_spanner,
    'dilation': cmd_dilation,
    'min-triangle': cmd_min_triangle,
    'render': cmd_render,
    'validate': cmd_validate,
}


def run(argv=None):
    """
    Parses `argv`, runs the subcommand and returns its exit code. Errors are
    reported on stderr and mapped onto exit codes 1-3.
    """
    args = parse_arguments(argv)
    configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except InputValidationError as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"Internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except UsageError as e:
        print(f"Usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logging.error(f"Command '{args.command}' failed unexpectedly: {e}", exc_info=True)
        return EXIT_INVARIANT
