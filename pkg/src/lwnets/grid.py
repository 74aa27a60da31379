"""Rectangular lattice domain with vertex/edge/face fields.

Vertices are integer pairs (m, n) with 0 <= m <= m_max, 0 <= n <= n_max.
A face is addressed by its lower-left vertex (m, n), 0 <= m < m_max,
0 <= n < n_max, and carries the counterclockwise corner order

    i = (m, n),  j = (m+1, n),  k = (m+1, n+1),  l = (m, n+1),

so the diagonals are (i, k) and (j, l).  Edge functions are stored once per
undirected edge: horizontal edges are keyed by their left vertex, vertical
edges by their bottom vertex.  The serialization order of vertices is
v = m + n * (m_max + 1), m running fastest.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Vertex = tuple[int, int]


@dataclass(frozen=True)
class GridDomain:
    m_max: int
    n_max: int

    def __post_init__(self) -> None:
        if self.m_max < 1 or self.n_max < 1:
            raise ValueError("grid needs at least one face in each direction")

    @property
    def vertex_shape(self) -> tuple[int, int]:
        return (self.m_max + 1, self.n_max + 1)

    @property
    def face_shape(self) -> tuple[int, int]:
        return (self.m_max, self.n_max)

    def vertices(self):
        for n in range(self.n_max + 1):
            for m in range(self.m_max + 1):
                yield (m, n)

    def vertex_index(self, v: Vertex) -> int:
        m, n = v
        return m + n * (self.m_max + 1)

    def faces(self):
        for n in range(self.n_max):
            for m in range(self.m_max):
                yield (m, n)

    def edges(self):
        """Each undirected edge once, as (base, other)."""
        for n in range(self.n_max + 1):
            for m in range(self.m_max):
                yield ((m, n), (m + 1, n))
        for n in range(self.n_max):
            for m in range(self.m_max + 1):
                yield ((m, n), (m, n + 1))

    def contains(self, v: Vertex) -> bool:
        return 0 <= v[0] <= self.m_max and 0 <= v[1] <= self.n_max

    def face_quad(self, face: Vertex, reverse: bool = False) -> tuple[Vertex, Vertex, Vertex, Vertex]:
        m, n = face
        if not (0 <= m < self.m_max and 0 <= n < self.n_max):
            raise IndexError(f"face {face} out of range for {self.face_shape} faces")
        i, j, k, l = (m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)
        return (i, l, k, j) if reverse else (i, j, k, l)

    def face_edges(self, face: Vertex):
        """The four directed edges (i,j), (j,k), (k,l), (l,i) of a face."""
        i, j, k, l = self.face_quad(face)
        return [(i, j), (j, k), (k, l), (l, i)]

    def lattice_paths(self, start: Vertex, stop: Vertex):
        """Row-first and column-first monotone staircase vertex paths."""
        for v in (start, stop):
            if not self.contains(v):
                raise IndexError(f"vertex {v} outside domain")
        sm = 1 if stop[0] >= start[0] else -1
        sn = 1 if stop[1] >= start[1] else -1
        row_first = [start]
        for m in range(start[0] + sm, stop[0] + sm, sm):
            row_first.append((m, start[1]))
        for n in range(start[1] + sn, stop[1] + sn, sn):
            row_first.append((stop[0], n))
        col_first = [start]
        for n in range(start[1] + sn, stop[1] + sn, sn):
            col_first.append((start[0], n))
        for m in range(start[0] + sm, stop[0] + sm, sm):
            col_first.append((m, stop[1]))
        return row_first, col_first


def _edge_key(i: Vertex, j: Vertex):
    """Normalize a directed edge to (axis, base_m, base_n)."""
    (mi, ni), (mj, nj) = i, j
    if ni == nj and abs(mi - mj) == 1:
        return 0, min(mi, mj), ni
    if mi == mj and abs(ni - nj) == 1:
        return 1, mi, min(ni, nj)
    raise KeyError(f"{i}-{j} is not a lattice edge")


class EdgeField:
    """Orientation-independent per-edge storage (edge functions).

    ``horizontal`` has shape (m_max, n_max+1, ...), ``vertical``
    (m_max+1, n_max, ...).
    """

    def __init__(self, horizontal: np.ndarray, vertical: np.ndarray):
        self.horizontal = horizontal
        self.vertical = vertical

    @classmethod
    def zeros(cls, domain: GridDomain, dtype=float, extra: tuple[int, ...] = ()) -> "EdgeField":
        return cls(
            np.zeros((domain.m_max, domain.n_max + 1) + extra, dtype=dtype),
            np.zeros((domain.m_max + 1, domain.n_max) + extra, dtype=dtype),
        )

    def get(self, i: Vertex, j: Vertex):
        axis, m, n = _edge_key(i, j)
        return self.horizontal[m, n] if axis == 0 else self.vertical[m, n]

    def set(self, i: Vertex, j: Vertex, value) -> None:
        axis, m, n = _edge_key(i, j)
        if axis == 0:
            self.horizontal[m, n] = value
        else:
            self.vertical[m, n] = value

    def map(self, fn) -> "EdgeField":
        return EdgeField(fn(self.horizontal), fn(self.vertical))

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.horizontal)), np.max(np.abs(self.vertical))))


def face_corners(field: np.ndarray):
    """Corner slices (i, j, k, l) of a vertex field, batched over all faces.

    Output arrays have face shape (m_max, n_max, ...).
    """
    return field[:-1, :-1], field[1:, :-1], field[1:, 1:], field[:-1, 1:]


def diagonals(field: np.ndarray):
    """Face diagonals du_ik = u_k - u_i and du_jl = u_l - u_j, batched."""
    i, j, k, l = face_corners(field)
    return k - i, l - j
