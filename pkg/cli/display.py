import sys

from io_formats.load_data import write_text

RULE = "=" * 60


def emit(text, path=None):
    """Writes `text` to `path`, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
    else:
        write_text(path, text)


def _block(title, lines):
    return "\n".join([RULE, f" {title}", RULE, *lines]) + "\n"


def display_min_triangle(p, q, approx, exact, case_counts):
    """
    Presents an approximate minimum triangle next to the exact one.

    Args:
        p, q (int): Anchor indices.
        approx (TriangleTriple): Result of the approximate query.
        exact (TriangleTriple): Result of the linear scan.
        case_counts (dict): Which query case produced the answer.

    Returns:
        str: The text block, ready for `emit`.
    """
    ratio = approx.perimeter / exact.perimeter
    case = next((name for name, count in case_counts.items() if count), "unknown")
    return _block(f"Minimum triangle for pair ({p}, {q})", [
        f"Approximate: third point {approx.r}, perimeter {approx.perimeter!r} ({case})",
        f"Exact:       third point {exact.r}, perimeter {exact.perimeter!r}",
        f"Ratio approximate / exact: {ratio:.9f}",
    ])


def display_validation(problems, stats):
    """Graph statistics and every problem found by validate_oriented_graph, as a text block."""
    lines = [
        f"Vertices: {stats['vertices']}, edges: {stats['edges']} ({stats['edges_per_vertex']:.2f} per vertex)",
        f"Strongly connected components: {stats['strong_components']}",
        f"Out-degree histogram: {stats['out_degree_histogram']}",
    ]
    if not problems:
        lines.append("\nAll checks passed.")
    else:
        lines.append(f"\n{len(problems)} problem(s):")
        lines.extend(f"  - {problem}" for problem in problems)
    return _block("Graph validation", lines)
