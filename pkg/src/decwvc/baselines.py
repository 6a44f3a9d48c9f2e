"""Centralized reference solvers: exact search for small graphs and a greedy heuristic."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import Graph

MAX_EXACT_ORDER = 24


class GraphTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class SolverResult:
    cover: tuple[int, ...]
    cover_weight: float
    exact: bool

    def to_dict(self) -> dict:
        return {"cover": list(self.cover), "cover_weight": self.cover_weight, "exact": self.exact}


def _weight_of(graph: Graph, cover: Iterable[int]) -> float:
    return math.fsum(graph.weight(v) for v in cover)


def brute_force_mwvc(graph: Graph, max_order: int = MAX_EXACT_ORDER) -> SolverResult:
    """Minimum-weight vertex cover by exhaustive include/exclude search.

    Vertices are decided in ID order.  Excluding a vertex forces all of its
    neighbors in.  Branches whose partial weight already exceeds the best
    complete cover are cut; equal-weight optima are resolved to the smallest
    sorted vertex tuple.
    """
    n = graph.order
    if n > max_order:
        raise GraphTooLargeError(f"exact search limited to {max_order} vertices, got {n}")
    weights = [Fraction(w) for w in graph.weights]
    adjacency = graph.adjacency

    best: list = [None, None]  # weight, cover tuple

    def search(v: int, state: list[int], partial: Fraction) -> None:
        # state[i]: 0 undecided, 1 in cover, -1 excluded
        if best[0] is not None and partial > best[0]:
            return
        while v <= n and state[v - 1] != 0:
            v += 1
        if v > n:
            cover = tuple(i for i in range(1, n + 1) if state[i - 1] == 1)
            if best[0] is None or (partial, cover) < (best[0], best[1]):
                best[0], best[1] = partial, cover
            return

        state[v - 1] = 1
        search(v + 1, state, partial + weights[v - 1])
        state[v - 1] = 0

        nbrs = adjacency[v - 1]
        if all(state[u - 1] != -1 for u in nbrs):
            forced = [u for u in nbrs if state[u - 1] == 0]
            state[v - 1] = -1
            for u in forced:
                state[u - 1] = 1
            search(v + 1, state, partial + sum(weights[u - 1] for u in forced))
            for u in forced:
                state[u - 1] = 0
            state[v - 1] = 0

    search(1, [0] * n, Fraction(0))
    cover = best[1] or ()
    return SolverResult(cover=cover, cover_weight=_weight_of(graph, cover), exact=True)


def greedy_mwvc(graph: Graph) -> SolverResult:
    """Repeatedly take the vertex with the lowest weight per uncovered incident edge.

    Ties go to the highest ID.
    """
    uncovered_deg = [graph.degree(v) for v in graph.vertices]
    in_cover = [False] * graph.order
    heap = [
        (Fraction(graph.weight(v)) / uncovered_deg[v - 1], -v, uncovered_deg[v - 1])
        for v in graph.vertices
        if uncovered_deg[v - 1] > 0
    ]
    heapq.heapify(heap)
    while heap:
        _, neg_v, deg_at_push = heapq.heappop(heap)
        v = -neg_v
        if in_cover[v - 1] or deg_at_push != uncovered_deg[v - 1]:
            continue  # stale entry
        in_cover[v - 1] = True
        for u in graph.neighbors(v):
            if in_cover[u - 1]:
                continue
            uncovered_deg[u - 1] -= 1
            d = uncovered_deg[u - 1]
            if d > 0:
                heapq.heappush(heap, (Fraction(graph.weight(u)) / d, -u, d))
    cover = tuple(v for v in graph.vertices if in_cover[v - 1])
    return SolverResult(cover=cover, cover_weight=_weight_of(graph, cover), exact=False)


def redundancy_prune(graph: Graph, cover: Iterable[int]) -> tuple[int, ...]:
    """Drop cover vertices whose neighbors are all covered, heaviest first (ties: higher ID)."""
    kept = set(cover)
    for v in sorted(kept, key=lambda v: (graph.weight(v), v), reverse=True):
        if all(u in kept for u in graph.neighbors(v)):
            kept.discard(v)
    return tuple(sorted(kept))


def greedy_pruned_mwvc(graph: Graph) -> SolverResult:
    cover = redundancy_prune(graph, greedy_mwvc(graph).cover)
    return SolverResult(cover=cover, cover_weight=_weight_of(graph, cover), exact=False)
