"""Directed graphs on vertex set {0..n-1}; self-loops are allowed."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import StructureError


@dataclass(frozen=True)
class Digraph:
    num_vertices: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "edges",
                           frozenset((int(u), int(v)) for u, v in self.edges))
        if self.num_vertices < 1:
            raise StructureError("digraph needs at least one vertex")
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise StructureError(f"edge ({u}, {v}) is out of range")

    def check_vertex(self, v: int) -> int:
        if not 0 <= v < self.num_vertices:
            raise StructureError(f"vertex {v} is out of range")
        return v

    def successors(self) -> list[list[int]]:
        """Adjacency lists, each sorted ascending."""
        out: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return out
