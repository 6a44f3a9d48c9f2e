"""Weighted undirected graphs: representation, synthetic generators, weights, file I/O.

Vertices are identified by the integers ``1..n``.  A :class:`Graph` is
immutable once built and can be shared freely between concurrent runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import networkx as nx

WEIGHT_LOW = 20
WEIGHT_HIGH = 100
POWER_LAW_EXPONENT = 0.5


class GraphFormatError(ValueError):
    """Base class for problems found while loading a graph file."""


class MalformedHeaderError(GraphFormatError):
    pass


class MalformedLineError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


class NonPositiveWeightError(GraphFormatError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable vertex-weighted undirected graph on vertices ``1..n``.

    ``weights[i]`` and ``adjacency[i]`` describe vertex ``i + 1``; each
    adjacency entry is a sorted tuple of neighbor IDs.  Use
    :meth:`from_edges` to build one; it validates everything.
    """

    weights: tuple[float, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        weights: Sequence[float] | None = None,
    ) -> "Graph":
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        if weights is None:
            weights = [1.0] * n
        if len(weights) != n:
            raise ValueError(f"expected {n} weights, got {len(weights)}")
        for i, w in enumerate(weights, start=1):
            if not w > 0 or math.isinf(w):
                raise NonPositiveWeightError(f"vertex {i} has invalid weight {w!r}")

        neighbors: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexRangeError(f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise SelfLoopError(f"self-loop on vertex {u}")
            if v in neighbors[u - 1]:
                raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
            neighbors[u - 1].add(v)
            neighbors[v - 1].add(u)
        return cls(
            weights=tuple(float(w) for w in weights),
            adjacency=tuple(tuple(sorted(s)) for s in neighbors),
        )

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Relabel nodes ``1..n`` following ``g``'s node order."""
        index = {node: i for i, node in enumerate(g.nodes(), start=1)}
        weights = [g.nodes[node].get("weight", 1.0) for node in g.nodes()]
        edges = [(index[a], index[b]) for a, b in g.edges()]
        return cls.from_edges(len(index), edges, weights)

    @property
    def order(self) -> int:
        return len(self.weights)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def vertices(self) -> range:
        return range(1, self.order + 1)

    def weight(self, v: int) -> float:
        return self.weights[v - 1]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v - 1]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v - 1])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield every edge once as ``(u, v)`` with ``u < v``, sorted."""
        for u, nbrs in enumerate(self.adjacency, start=1):
            for v in nbrs:
                if v > u:
                    yield u, v

    def average_degree(self) -> float:
        return 2 * self.num_edges / self.order if self.order else 0.0

    def total_weight(self) -> float:
        return math.fsum(self.weights)

    def with_weights(self, weights: Sequence[float]) -> "Graph":
        return Graph.from_edges(self.order, self.edges(), weights)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v in self.vertices:
            g.add_node(v, weight=self.weight(v))
        g.add_edges_from(self.edges())
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.weights == other.weights and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.weights, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.num_edges})"


class TopologyKind(str, Enum):
    RANDOM = "random"
    SCALE_FREE = "scalefree"
    SMALL_WORLD = "smallworld"


class WeightKind(str, Enum):
    UNIFORM = "uniform"
    POWER_LAW = "power"


@dataclass(frozen=True)
class Topology:
    kind: TopologyKind
    order: int
    avg_degree: int

    def __post_init__(self) -> None:
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if self.avg_degree < 1:
            raise ValueError(f"target average degree must be >= 1, got {self.avg_degree}")
        if self.avg_degree >= self.order:
            raise ValueError(
                f"target average degree {self.avg_degree} must be below order {self.order}"
            )
        if self.kind is TopologyKind.SMALL_WORLD and self.avg_degree < 2:
            raise ValueError("small-world graphs need a target average degree >= 2")


@dataclass(frozen=True)
class WeightDistribution:
    kind: WeightKind = WeightKind.UNIFORM
    low: float = WEIGHT_LOW
    high: float = WEIGHT_HIGH
    exponent: float = POWER_LAW_EXPONENT

    def __post_init__(self) -> None:
        if not 0 < self.low < self.high:
            raise ValueError(f"need 0 < low < high, got [{self.low}, {self.high}]")
        if self.kind is WeightKind.POWER_LAW and self.exponent == 1:
            raise ValueError("power-law exponent 1 is not supported")

    def sampler(self, seed: int):
        """Return a zero-argument callable drawing one weight per call."""
        rng = random.Random(seed)
        if self.kind is WeightKind.UNIFORM:
            lo, hi = math.ceil(self.low), math.floor(self.high)
            return lambda: float(rng.randint(lo, hi))

        # inverse transform of f(x) ~ x**(-exponent) truncated to [low, high]
        q = 1.0 - self.exponent
        a, b = self.low**q, self.high**q
        low, high = self.low, self.high

        def draw() -> float:
            x = (a + rng.random() * (b - a)) ** (1.0 / q)
            return min(max(x, low), high)

        return draw

    def sample(self, count: int, seed: int) -> list[float]:
        draw = self.sampler(seed)
        return [draw() for _ in range(count)]


def generate(topology: Topology, seed: int) -> Graph:
    """Generate an unweighted (unit-weight) graph for ``topology``.

    Parameters are chosen so that the expected average degree matches
    ``topology.avg_degree``:

    * random: G(n, p) with ``p = D / (n - 1)``;
    * scale-free: preferential attachment where each new vertex brings
      ``floor(D/2)`` or ``ceil(D/2)`` edges with equal probability (plain
      Barabási–Albert with ``m = D/2`` when D is even);
    * small-world: Newman–Watts–Strogatz ring lattice of degree ``k``, the
      smallest even number ``>= D/2``, plus a shortcut with probability
      ``(D - k) / k`` per lattice edge.

    Isolated vertices are kept.
    """
    n, d = topology.order, topology.avg_degree
    if topology.kind is TopologyKind.RANDOM:
        g = nx.fast_gnp_random_graph(n, d / (n - 1), seed=seed)
    elif topology.kind is TopologyKind.SCALE_FREE:
        lo, hi = max(1, d // 2), (d + 1) // 2
        if lo == hi:
            g = nx.barabasi_albert_graph(n, lo, seed=seed)
        else:
            g = nx.dual_barabasi_albert_graph(n, hi, lo, d / 2 - lo, seed=seed)
    else:
        half = (d + 1) // 2
        k = half + half % 2
        g = nx.newman_watts_strogatz_graph(n, k, (d - k) / k, seed=seed)
    return Graph.from_networkx(g)


def assign_weights(graph: Graph, dist: WeightDistribution, seed: int) -> Graph:
    """Return a copy of ``graph`` with weights drawn from ``dist``, in ID order."""
    return graph.with_weights(dist.sample(graph.order, seed))


def _format_weight(w: float) -> str:
    return str(int(w)) if w.is_integer() else repr(w)


def save_graph(graph: Graph, path: str | Path) -> None:
    lines = [f"{graph.order} {graph.num_edges}"]
    lines.extend(_format_weight(w) for w in graph.weights)
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise MalformedHeaderError("empty graph file")
    header = lines[0].split()
    try:
        n, m = (int(t) for t in header)
    except ValueError:
        raise MalformedHeaderError(f"header must be '<n> <m>', got {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise MalformedHeaderError(f"negative counts in header {lines[0]!r}")
    if len(lines) != 1 + n + m:
        raise MalformedHeaderError(
            f"header declares {n} vertices and {m} edges but file has "
            f"{len(lines) - 1} body lines"
        )

    weights = []
    for lineno, line in enumerate(lines[1 : n + 1], start=2):
        try:
            w = float(line)
        except ValueError:
            raise MalformedLineError(f"line {lineno}: bad weight {line!r}") from None
        if not w > 0 or math.isinf(w):
            raise NonPositiveWeightError(f"line {lineno}: weight must be positive, got {line!r}")
        weights.append(w)

    edges = []
    for lineno, line in enumerate(lines[n + 1 :], start=n + 2):
        parts = line.split()
        try:
            u, v = (int(t) for t in parts)
        except ValueError:
            raise MalformedLineError(f"line {lineno}: bad edge {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexRangeError(f"line {lineno}: edge ({u}, {v}) outside 1..{n}")
        edges.append((u, v))
    return Graph.from_edges(n, edges, weights)


def load_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
