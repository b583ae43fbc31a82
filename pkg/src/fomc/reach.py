"""Reachability algorithms: BFS oracle, midpoint recursion, the k-ary
level recursion over virtual power graphs, and a diagonal budget driver.

Accounted units are the explicitly charged stack costs of each recursion,
not process memory.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .digraph import Digraph
from .errors import BudgetExceeded, PreconditionError


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


@dataclass
class ReachReport:
    answer: bool
    peak_depth: int
    accounted_units: int
    budget_used: Optional[int] = None


# ---------------------------------------------------------------------------
# BFS ground truth
# ---------------------------------------------------------------------------


def bfs_reach(graph: Digraph, source: int, target: int,
              k: Optional[int] = None) -> bool:
    """True iff a directed path of length at most ``k`` exists (any length
    when ``k`` is None).  Every vertex reaches itself by a length-0 path."""
    graph.check_vertex(source)
    graph.check_vertex(target)
    succ = graph.successors()
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if k is not None and dist[u] >= k:
            continue
        for v in succ[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    if target not in dist:
        return False
    return True if k is None else dist[target] <= k


# ---------------------------------------------------------------------------
# Midpoint recursion
# ---------------------------------------------------------------------------


def savitch_reach(graph: Digraph, source: int, target: int, k: int) -> ReachReport:
    """Bounded reachability by midpoint splitting.

    ``reach(u, v, k)`` holds iff some midpoint splits the path into halves
    of length ``ceil(k/2)`` and ``floor(k/2)``; the bound-1 base accepts
    equality or a single edge and the bound-0 base equality only.  The
    recursion depth is exactly ``ceil(log2 k)`` for k >= 1.  Answers to
    solved triples are cached so repeated subproblems are not re-expanded;
    the charged stack cost is unaffected.
    """
    if k < 0:
        raise PreconditionError("path-length bound must be nonnegative")
    graph.check_vertex(source)
    graph.check_vertex(target)
    n = graph.num_vertices
    edges = graph.edges
    frame_units = 2 * ceil_log2(n) + ceil_log2(k + 1)
    memo: dict[tuple[int, int, int], bool] = {}
    state = {"depth": 0, "peak": 0}

    def rec(u: int, v: int, bound: int) -> bool:
        if bound == 0:
            return u == v
        if bound == 1:
            return u == v or (u, v) in edges
        key = (u, v, bound)
        cached = memo.get(key)
        if cached is not None:
            return cached
        state["depth"] += 1
        state["peak"] = max(state["peak"], state["depth"])
        first, second = -(-bound // 2), bound // 2
        answer = False
        try:
            for mid in range(n):
                if rec(u, mid, first) and rec(mid, v, second):
                    answer = True
                    break
        finally:
            state["depth"] -= 1
        memo[key] = answer
        return answer

    answer = rec(source, target, k)
    return ReachReport(answer=answer, peak_depth=state["peak"],
                       accounted_units=state["peak"] * frame_units)


# ---------------------------------------------------------------------------
# k-ary level recursion
# ---------------------------------------------------------------------------

EdgeQuery = Callable[[int, int], bool]


def bounded_path_search(edge_query: EdgeQuery, num_vertices: int,
                        source: int, target: int, k: int) -> bool:
    """Depth-first search for a path of length at most ``k``, accessing the
    graph only through an edge-query callback.

    A vertex is re-expanded only when reached at a strictly smaller depth,
    which keeps the search complete for bounded lengths.
    """
    if source == target:
        return True
    best = {source: 0}

    def dfs(node: int, depth: int) -> bool:
        if depth == k:
            return False
        for succ in range(num_vertices):
            if best.get(succ, k + 1) <= depth + 1:
                continue
            if edge_query(node, succ):
                if succ == target:
                    return True
                best[succ] = depth + 1
                if dfs(succ, depth + 1):
                    return True
        return False

    return dfs(source, 0)


def ck_reach(graph: Digraph, source: int, target: int, karity: int,
             inner: Callable = bounded_path_search,
             unit_budget: Optional[int] = None) -> ReachReport:
    """Unbounded reachability via a tower of virtual power graphs.

    Level ``i`` has an edge from u to v iff the input graph has a path of
    length at most ``karity**i`` between them; level 0 is the reflexive
    closure.  The number of levels is the least ``l`` with
    ``karity**l >= n-1``.  An edge query at level ``i`` runs the pluggable
    bounded-path solver on the level ``i-1`` graph, whose edges exist only
    as recursive answers; the virtual graphs are never materialized, but
    answered queries are cached.  Each level is charged
    ``2*ceil(log2 n) + ceil(log2 karity)`` accounted units.
    """
    if karity < 2:
        raise PreconditionError("level arity must be at least 2")
    graph.check_vertex(source)
    graph.check_vertex(target)
    n = graph.num_vertices
    levels = 0
    power = 1
    while power < n - 1:
        levels += 1
        power *= karity
    units = levels * (2 * ceil_log2(n) + ceil_log2(karity))
    if unit_budget is not None and units > unit_budget:
        raise BudgetExceeded(
            f"level recursion needs {units} accounted units, budget is {unit_budget}")
    edges = graph.edges
    memo: dict[tuple[int, int, int], bool] = {}

    def level_edge(i: int, u: int, v: int) -> bool:
        if i == 0:
            return u == v or (u, v) in edges
        key = (i, u, v)
        cached = memo.get(key)
        if cached is None:
            cached = inner(lambda a, b: level_edge(i - 1, a, b), n, u, v, karity)
            memo[key] = cached
        return cached

    answer = level_edge(levels, source, target)
    return ReachReport(answer=answer, peak_depth=levels, accounted_units=units)


# ---------------------------------------------------------------------------
# Diagonal budget driver
# ---------------------------------------------------------------------------


def diag_reach(graph: Digraph, source: int, target: int,
               unit_scale: int = 16) -> ReachReport:
    """Run the level recursion for growing arities under growing budgets.

    Budgets S = 2, 3, ... allow ``S * unit_scale`` accounted units; for
    each budget the arities 2..S are tried in order and the first run that
    fits its budget decides the answer.  The loop always terminates: the
    arity-2 recursion has a fixed finite cost, so it fits once S is large
    enough.
    """
    if unit_scale < 1:
        raise PreconditionError("unit scale must be positive")
    budget = 2
    while True:
        for karity in range(2, budget + 1):
            try:
                report = ck_reach(graph, source, target, karity,
                                  unit_budget=budget * unit_scale)
            except BudgetExceeded:
                continue
            return ReachReport(answer=report.answer,
                               peak_depth=report.peak_depth,
                               accounted_units=report.accounted_units,
                               budget_used=budget * unit_scale)
        budget += 1
