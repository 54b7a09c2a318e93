"""Undirected simple graphs with an undo journal for edge deletions."""

from __future__ import annotations

import io
import os
from typing import Iterable, Iterator, TextIO

import numpy as np

from . import _kernels as K


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


class Graph:
    """Mutable undirected simple graph on vertices ``0..n-1``.

    Neighbor lists are kept in dense ``n x n`` int32 arrays so that the
    compiled kernels can share them directly.  Edge lookup is O(1) through
    the ``pos`` index matrix.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        self.n = int(n)
        self.nbr = np.zeros((n, n), dtype=np.int32)
        self.pos = np.full((n, n), -1, dtype=np.int32)
        self.deg = np.zeros(n, dtype=np.int32)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @property
    def m(self) -> int:
        return int(self.deg.sum()) // 2

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge ``u-v``; returns False for self-loops and duplicates."""
        self._check(u)
        self._check(v)
        if u == v or self.pos[u, v] >= 0:
            return False
        du = self.deg[u]
        dv = self.deg[v]
        self.nbr[u, du] = v
        self.pos[u, v] = du
        self.deg[u] = du + 1
        self.nbr[v, dv] = u
        self.pos[v, u] = dv
        self.deg[v] = dv + 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.pos[u, v] >= 0)

    def degree(self, v: int) -> int:
        return int(self.deg[v])

    def neighbors(self, v: int) -> list[int]:
        return self.nbr[v, : self.deg[v]].tolist()

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        for u in range(self.n):
            for v in sorted(self.neighbors(u)):
                if u < v:
                    yield u, v

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def min_degree(self) -> int:
        return int(self.deg.min())

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.n = self.n
        g.nbr = self.nbr.copy()
        g.pos = self.pos.copy()
        g.deg = self.deg.copy()
        return g

    def snapshot(self) -> tuple:
        """Structural fingerprint including neighbor order."""
        return (self.n, tuple(tuple(self.neighbors(v)) for v in range(self.n)))

    def check_invariants(self) -> None:
        """Assert symmetry, simplicity and index consistency."""
        for u in range(self.n):
            row = self.neighbors(u)
            assert len(set(row)) == len(row), f"parallel edge at {u}"
            assert u not in row, f"self-loop at {u}"
            for i, v in enumerate(row):
                assert self.pos[u, v] == i
                assert self.pos[v, u] >= 0, f"asymmetric edge {u}-{v}"
            assert int((self.pos[u] >= 0).sum()) == len(row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.snapshot() == other.snapshot()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class DeletionJournal:
    """Stack of marks over journaled edge deletions of one graph.

    ``mark()`` opens a level; ``restore(mark)`` re-inserts everything deleted
    since, newest first, so neighbor order round-trips exactly.
    """

    def __init__(self, g: Graph, capacity: int | None = None):
        self.g = g
        cap = max(capacity if capacity is not None else g.m, 1)
        self.rows = np.zeros((cap, 4), dtype=np.int32)
        self.top = np.zeros(1, dtype=np.int64)
        self._marks: list[int] = []

    def __len__(self) -> int:
        return int(self.top[0])

    def _ensure(self, extra: int) -> None:
        need = int(self.top[0]) + extra
        if need > self.rows.shape[0]:
            grown = np.zeros((max(need, 2 * self.rows.shape[0]), 4), dtype=np.int32)
            grown[: self.rows.shape[0]] = self.rows
            self.rows = grown

    def reserve(self) -> None:
        """Make room for deleting every edge currently present."""
        self._ensure(self.g.m)

    def mark(self) -> int:
        self._marks.append(int(self.top[0]))
        return len(self._marks) - 1

    def restore(self, mark: int) -> None:
        if mark != len(self._marks) - 1:
            raise ValueError("marks must be restored in LIFO order")
        target = self._marks.pop()
        g = self.g
        K.restore(g.nbr, g.pos, g.deg, self.rows, self.top, target)

    def forget(self) -> None:
        """Accept all deletions so far as the new baseline."""
        self.top[0] = 0
        self._marks.clear()

    def deleted_since(self, mark: int) -> list[tuple[int, int]]:
        lo = self._marks[mark]
        return [(int(u), int(v)) for u, v in self.rows[lo : int(self.top[0]), :2]]


def delete_edge_journaled(g: Graph, j: DeletionJournal, u: int, v: int) -> None:
    assert j.g is g, "journal belongs to another graph"
    assert j._marks, "no open journal mark"
    assert g.pos[u, v] >= 0, f"edge {u}-{v} not present"
    j._ensure(1)
    K.delete_edge(g.nbr, g.pos, g.deg, u, v, j.rows, j.top)


def components(g: Graph) -> np.ndarray:
    """Component id per vertex, numbered in order of smallest member."""
    comp = np.zeros(g.n, dtype=np.int32)
    K.label_components(g.nbr, g.deg, g.n, comp, np.zeros(g.n, dtype=np.int32))
    return comp


def is_connected(g: Graph) -> bool:
    return int(components(g).max()) == 0


def articulation_points(g: Graph) -> set[int]:
    s = K.scratch(g.n)
    K.articulation(g.nbr, g.deg, g.n, s["disc"], s["low"], s["parent"], s["itr"],
                   s["stk"], s["is_art"])
    return {int(v) for v in np.flatnonzero(s["is_art"])}


# ---------------------------------------------------------------- edge lists


def write_edge_list(g: Graph, out: TextIO, header: str | None = None) -> None:
    if header is not None:
        out.write(f"# {header}\n")
    out.write(f"{g.n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"{u} {v}\n")


def format_edge_list(g: Graph, header: str | None = None) -> str:
    buf = io.StringIO()
    write_edge_list(g, buf, header)
    return buf.getvalue()


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v`` (``u < v``).

    Lines starting with ``#`` are skipped.  Duplicates, self-loops,
    out-of-range ids and a wrong edge count raise :class:`GraphFormatError`.
    """
    lines = [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphFormatError("empty input")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad header line: {lines[0]!r}") from None
    if n < 1 or m < 0:
        raise GraphFormatError(f"bad header values n={n} m={m}")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header says {m} edges, found {len(lines) - 1}")
    g = Graph(n)
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex in {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex out of range in {ln!r}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop {u}")
        if u > v:
            raise GraphFormatError(f"line {lineno}: expected u < v in {ln!r}")
        if not g.add_edge(u, v):
            raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
    return g


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_edge_list(fh.read())


# ---------------------------------------------------------- named small graphs


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
