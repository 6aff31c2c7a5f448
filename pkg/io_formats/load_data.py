"""
Plain-text formats for point sets, oriented graphs and metric matrices.

Points:  optional "dim d" header, then one point per line, coordinates
         separated by whitespace and/or commas.
Graphs:  "oriented n m" header, then m lines "u v" (0-based), sorted by (u, v).
Metric:  n lines of n nonnegative reals.

'#' starts a comment in every format. Parse errors carry the 1-based line number.
"""

import logging
import re

import numpy as np

from core_geometry.errors import InputValidationError, UsageError
from core_geometry.geometry import PointSet
from orientation.oriented_graph import OrientedGraph

GRAPH_HEADER = "oriented"
DIMENSION_HEADER = "dim"

# triples checked exhaustively up to this size, sampled above it
FULL_TRIANGLE_CHECK_LIMIT = 500
TRIANGLE_SAMPLE_SIZE = 200_000
METRIC_RELATIVE_TOLERANCE = 1e-12

_SEPARATORS = re.compile(r"[,\s]+")


def read_text(path):
    """Reads a whole UTF-8 input file, turning OS and decoding errors into input validation errors."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise InputValidationError(f"cannot read '{path}': {e}") from e
    except UnicodeDecodeError as e:
        raise InputValidationError(f"'{path}' is not valid UTF-8 text: {e.reason} at byte {e.start}") from e


def write_text(path, text):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def _content_lines(text):
    """Yields (line number, tokens) for every line with content after stripping comments."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0].strip()
        if content:
            yield number, [token for token in _SEPARATORS.split(content) if token]


def _parse_reals(tokens, line):
    try:
        values = [float(token) for token in tokens]
    except ValueError:
        raise InputValidationError(f"malformed row {' '.join(tokens)!r}: expected real numbers", line=line) from None
    if not all(np.isfinite(values)):
        raise InputValidationError("non-finite coordinate", line=line)
    return values

# --- Points ---

def parse_points(text):
    """
    Parses a point file.

    Args:
        text (str): File contents.

    Returns:
        PointSet: Validated points, indexed in file order.
    """
    dimension = None
    rows = []
    first_line = {}
    for line, tokens in _content_lines(text):
        if tokens[0] == DIMENSION_HEADER:
            if rows or dimension is not None:
                raise InputValidationError("'dim' header must come before every point", line=line)
            if len(tokens) != 2 or not tokens[1].isdecimal() or int(tokens[1]) < 1:
                raise InputValidationError(f"malformed header {' '.join(tokens)!r}: expected 'dim d' with d >= 1", line=line)
            dimension = int(tokens[1])
            continue

        values = _parse_reals(tokens, line)
        if dimension is None:
            dimension = len(values)
        elif len(values) != dimension:
            raise InputValidationError(f"expected {dimension} coordinates, got {len(values)}", line=line)
        key = tuple(values)
        if key in first_line:
            raise InputValidationError(f"duplicate point, same as line {first_line[key]}", line=line)
        first_line[key] = line
        rows.append(values)

    if not rows:
        raise InputValidationError("no points found")
    ps = PointSet(rows, dimension)
    logging.info(f"Parsed {len(ps)} points in dimension {ps.dimension}.")
    return ps


def write_points(ps):
    """Point file text; coordinates use repr, the shortest string that round-trips."""
    lines = [f"{DIMENSION_HEADER} {ps.dimension}"]
    lines.extend(" ".join(repr(float(c)) for c in row) for row in ps.coords)
    return "\n".join(lines) + "\n"

# --- Graphs ---

def write_graph(g):
    """Graph file text: header "oriented n m", then one sorted "u v" line per edge."""
    edges = g.edges()
    lines = [f"{GRAPH_HEADER} {g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def parse_graph(text):
    """
    Parses a graph file written by `write_graph`.

    Returns:
        OrientedGraph
    """
    lines = _content_lines(text)
    header = next(lines, None)
    if header is None:
        raise InputValidationError("empty graph file: expected header 'oriented n m'")
    line, tokens = header
    if len(tokens) != 3 or tokens[0] != GRAPH_HEADER or not (tokens[1].isdecimal() and tokens[2].isdecimal()):
        raise InputValidationError(f"malformed header {' '.join(tokens)!r}: expected 'oriented n m'", line=line)
    n, m = int(tokens[1]), int(tokens[2])

    g = OrientedGraph(n)
    count = 0
    for line, tokens in lines:
        if len(tokens) != 2 or not all(token.isdecimal() for token in tokens):
            raise InputValidationError(f"malformed edge {' '.join(tokens)!r}: expected 'u v'", line=line)
        u, v = int(tokens[0]), int(tokens[1])
        if g.has_edge(u, v):
            raise InputValidationError(f"edge ({u}, {v}) listed twice", line=line)
        try:
            g.add_edge(u, v)
        except UsageError as e:
            raise InputValidationError(str(e), line=line) from e
        count += 1
    if count != m:
        raise InputValidationError(f"header announces {m} edges but the file lists {count}")
    return g

# --- Metric Matrices ---

def parse_metric_matrix(text, seed=0):
    """
    Parses and validates a symmetric distance matrix.

    Checks nonnegativity, a zero diagonal, positive off-diagonal entries,
    symmetry and the triangle inequality (every triple for n <= 500, a seeded
    sample of triples above that).

    Returns:
        np.ndarray: Read-only n x n float64 matrix.
    """
    rows = []
    for line, tokens in _content_lines(text):
        values = _parse_reals(tokens, line)
        if rows and len(values) != len(rows[0][1]):
            raise InputValidationError(f"expected {len(rows[0][1])} entries, got {len(values)}", line=line)
        if any(v < 0 for v in values):
            raise InputValidationError("negative distance", line=line)
        rows.append((line, values))
    if not rows:
        raise InputValidationError("empty metric matrix")
    n = len(rows)
    if len(rows[0][1]) != n:
        raise InputValidationError(f"matrix has {n} rows but {len(rows[0][1])} columns")

    matrix = np.array([values for _, values in rows], dtype=np.float64)
    for i, (line, values) in enumerate(rows):
        if values[i] != 0:
            raise InputValidationError(f"diagonal entry ({i}, {i}) is {values[i]}, expected 0", line=line)
        for j in range(n):
            if j != i and values[j] == 0:
                raise InputValidationError(f"distinct points {i} and {j} at distance 0", line=line)
            if j < i and not _close(values[j], matrix[j, i]):
                raise InputValidationError(f"asymmetric entries ({i}, {j}) = {values[j]} and ({j}, {i}) = {matrix[j, i]}", line=line)

    _check_triangle_inequality(matrix, seed)
    matrix.flags.writeable = False
    logging.info(f"Parsed {n} x {n} metric matrix.")
    return matrix


def _close(a, b):
    return abs(a - b) <= METRIC_RELATIVE_TOLERANCE * max(abs(a), abs(b))


def _check_triangle_inequality(matrix, seed):
    n = len(matrix)
    if n <= FULL_TRIANGLE_CHECK_LIMIT:
        for k in range(n):
            # via[i, j] = d(i, k) + d(k, j)
            via = matrix[:, k][:, np.newaxis] + matrix[k, :][np.newaxis, :]
            violated = matrix > via * (1 + METRIC_RELATIVE_TOLERANCE)
            if violated.any():
                i, j = (int(v) for v in np.argwhere(violated)[0])
                _raise_triangle_violation(matrix, i, k, j)
        return

    rng = np.random.default_rng(seed)
    i, k, j = rng.integers(0, n, size=(3, TRIANGLE_SAMPLE_SIZE))
    violated = matrix[i, j] > (matrix[i, k] + matrix[k, j]) * (1 + METRIC_RELATIVE_TOLERANCE)
    if violated.any():
        first = int(np.argmax(violated))
        _raise_triangle_violation(matrix, int(i[first]), int(k[first]), int(j[first]))
    logging.debug(f"Sampled {TRIANGLE_SAMPLE_SIZE} triples for the triangle inequality (n = {n}).")


def _raise_triangle_violation(matrix, i, k, j):
    raise InputValidationError(
        f"triangle inequality violated by ({i}, {k}, {j}): "
        f"d({i},{j}) = {matrix[i, j]} > d({i},{k}) + d({k},{j}) = {matrix[i, k] + matrix[k, j]}"
    )
