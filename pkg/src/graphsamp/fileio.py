"""File formats shared by the CLI and the service clients.

* Edge list: UTF-8 CSV with header ``src,dst,weight``, zero-based node
  indices, each undirected edge listed once.
* Signal: CSV with header ``node,value``, one row per node.
* Samples: CSV with header ``index,value``.
* Matrix: a shape line ``# rows=R cols=C`` followed by ``row,col,value``
  triples; mask files reuse the triple format with the value ignored.
* Partition: CSV with header ``node,cell``.
"""
from __future__ import annotations

import csv
import io
import re

import numpy as np

from .errors import InvalidSpec
from .graphs import Graph


def graph_to_csv(graph: Graph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["src", "dst", "weight"])
    for u, v, w in graph.edges:
        writer.writerow([u, v, repr(w)])
    return buf.getvalue()


def graph_from_csv(text: str, node_count: int | None = None) -> Graph:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:3]] != ["src", "dst", "weight"]:
        raise InvalidSpec("edge list must start with header 'src,dst,weight'")
    edges = []
    max_node = -1
    for row in reader:
        if not row:
            continue
        u, v, w = int(row[0]), int(row[1]), float(row[2])
        edges.append((u, v, w))
        max_node = max(max_node, u, v)
    if node_count is None:
        node_count = max_node + 1
    return Graph(node_count, tuple(edges))


def signal_to_csv(values: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["node", "value"])
    for i, value in enumerate(np.asarray(values, dtype=float)):
        writer.writerow([i, repr(float(value))])
    return buf.getvalue()


def signal_from_csv(text: str) -> np.ndarray:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["node", "value"]:
        raise InvalidSpec("signal file must start with header 'node,value'")
    pairs = sorted((int(row[0]), float(row[1])) for row in reader if row)
    if [p[0] for p in pairs] != list(range(len(pairs))):
        raise InvalidSpec("signal file must cover nodes 0..N-1 exactly once")
    return np.array([p[1] for p in pairs], dtype=float)


def samples_to_csv(values: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "value"])
    for i, value in enumerate(np.asarray(values, dtype=float)):
        writer.writerow([i, repr(float(value))])
    return buf.getvalue()


def samples_from_csv(text: str) -> np.ndarray:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["index", "value"]:
        raise InvalidSpec("sample file must start with header 'index,value'")
    pairs = sorted((int(row[0]), float(row[1])) for row in reader if row)
    return np.array([p[1] for p in pairs], dtype=float)


_SHAPE_RE = re.compile(r"#\s*rows=(\d+)\s+cols=(\d+)")


def matrix_to_csv(matrix: np.ndarray, mask: tuple[tuple[int, int], ...] | None = None) -> str:
    """Write a dense matrix (mask=None) or just the masked entries."""
    matrix = np.asarray(matrix, dtype=float)
    n_rows, n_cols = matrix.shape
    buf = io.StringIO()
    buf.write(f"# rows={n_rows} cols={n_cols}\n")
    writer = csv.writer(buf)
    writer.writerow(["row", "col", "value"])
    entries = mask if mask is not None else tuple(
        (i, j) for i in range(n_rows) for j in range(n_cols)
    )
    for i, j in entries:
        writer.writerow([i, j, repr(float(matrix[i, j]))])
    return buf.getvalue()


def mask_to_csv(shape: tuple[int, int], mask: tuple[tuple[int, int], ...]) -> str:
    return matrix_to_csv(np.zeros(shape), mask=mask)


def matrix_from_csv(text: str) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    """Read a triple file; returns (matrix with zeros off-mask, mask entries)."""
    lines = text.splitlines()
    if not lines:
        raise InvalidSpec("matrix file is empty")
    match = _SHAPE_RE.match(lines[0])
    if not match:
        raise InvalidSpec("matrix file must start with '# rows=R cols=C'")
    n_rows, n_cols = int(match.group(1)), int(match.group(2))
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:3]] != ["row", "col", "value"]:
        raise InvalidSpec("matrix file needs header 'row,col,value' after the shape line")
    matrix = np.zeros((n_rows, n_cols))
    entries = []
    for row in reader:
        if not row:
            continue
        i, j, value = int(row[0]), int(row[1]), float(row[2])
        matrix[i, j] = value
        entries.append((i, j))
    return matrix, tuple(sorted(set(entries)))


def partition_to_csv(cells: tuple[tuple[int, ...], ...]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["node", "cell"])
    for cell_index, cell in enumerate(cells):
        for node in cell:
            writer.writerow([node, cell_index])
    return buf.getvalue()


def partition_from_csv(text: str) -> tuple[tuple[int, ...], ...]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["node", "cell"]:
        raise InvalidSpec("partition file must start with header 'node,cell'")
    assignments: dict[int, list[int]] = {}
    for row in reader:
        if not row:
            continue
        node, cell = int(row[0]), int(row[1])
        assignments.setdefault(cell, []).append(node)
    if not assignments or sorted(assignments) != list(range(len(assignments))):
        raise InvalidSpec("cells must be numbered 0..K-1")
    return tuple(tuple(sorted(assignments[c])) for c in sorted(assignments))


def series_to_csv(rows: list[dict]) -> str:
    """Uniform list-of-dicts (experiment series) to CSV."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
