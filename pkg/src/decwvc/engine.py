"""Round-based simulation of the protocol with exact message accounting.

Two schedules are available for the Selection phase.

``sequential`` (default) sweeps the nodes in ascending ID order once per
round.  An active node (not in the cover, at least one uncovered neighbor)
exchanges scores with its uncovered neighbors, picks the best of itself and
them, and sends ``include``; the target joins and announces it immediately,
so nodes later in the sweep act on the updated cover.

``synchronous`` is strict lock-step: all active nodes exchange scores, all
pick a target from the same snapshot, then every included node joins at
once and announces it.

In both, nodes that became settled announce it to their neighborhood at the
end of the round.  Selection repeats until every node is settled, then a
single Optimize round runs.  A node leaving the cover during Optimize does
so silently.

Message accounting: one message per point-to-point transmission, ``deg``
messages per neighborhood broadcast.  A score exchange between two nodes is
two messages.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .graph import Graph
from .protocol import (
    NO_CONFLICT,
    Decision,
    Message,
    MessageKind,
    NodeState,
    OptimizeRule,
    optimize_decision,
    score,
    select_candidate,
)


class Phase(str, Enum):
    SELECTION = "selection"
    OPTIMIZE = "optimize"
    DONE = "done"


class Schedule(str, Enum):
    SEQUENTIAL = "sequential"
    SYNCHRONOUS = "synchronous"


class PhaseError(RuntimeError):
    pass


@dataclass
class SimulationState:
    """Mutable state of one run.  Round functions update it in place."""

    graph: Graph
    nodes: dict[int, NodeState]
    round: int = 0
    message_count: int = 0
    phase: Phase = Phase.SELECTION
    schedule: Schedule = Schedule.SEQUENTIAL
    messages_by_kind: Counter = field(default_factory=Counter)
    round_messages: list[int] = field(default_factory=list)
    trace: list[Message] | None = None
    _scores: dict[int, tuple[int, Fraction]] = field(default_factory=dict, repr=False)

    @classmethod
    def initial(
        cls, graph: Graph, trace: bool = False, schedule: Schedule = Schedule.SEQUENTIAL
    ) -> "SimulationState":
        nodes = {
            v: NodeState(id=v, weight=graph.weight(v), neighbors=graph.neighbors(v))
            for v in graph.vertices
        }
        for node in nodes.values():
            # isolated vertices have nothing to cover
            node.settled = node.degree == 0
        return cls(
            graph=graph, nodes=nodes, schedule=Schedule(schedule), trace=[] if trace else None
        )

    @classmethod
    def with_cover(
        cls, graph: Graph, cover: Iterable[int], trace: bool = False
    ) -> "SimulationState":
        """State at the start of Optimize for an arbitrary (settled) cover."""
        state = cls.initial(graph, trace=trace)
        cover = set(cover)
        for v, node in state.nodes.items():
            node.in_cover = v in cover
            node.known_covered = {u for u in node.neighbors if u in cover}
            node.known_settled = set(node.neighbors)
            node.settled = True
        state.phase = Phase.OPTIMIZE
        return state

    def cover(self) -> set[int]:
        return {v for v, node in self.nodes.items() if node.in_cover}

    def all_settled(self) -> bool:
        return all(node.settled for node in self.nodes.values())

    def score_of(self, v: int) -> Fraction:
        """Current score of active node ``v``, recomputed only when its gain changes."""
        node = self.nodes[v]
        g = node.local_gain()
        cached = self._scores.get(v)
        if cached is None or cached[0] != g:
            cached = (g, score(node, g))
            self._scores[v] = cached
        return cached[1]

    def send(self, kind: MessageKind, sender: int, receivers: Iterable[int], value=None) -> None:
        receivers = tuple(receivers)
        self.message_count += len(receivers)
        self.messages_by_kind[kind] += len(receivers)
        if self.trace is not None:
            self.trace.extend(Message(kind, sender, r, value) for r in receivers)


def selection_round(state: SimulationState) -> SimulationState:
    """Run one Selection round under ``state.schedule``; no-op once all nodes settle."""
    if state.phase is not Phase.SELECTION:
        raise PhaseError(f"selection round requested in phase {state.phase.value}")
    active = [v for v, node in state.nodes.items() if not node.settled]
    if not active:
        return state
    before = state.message_count
    if state.schedule is Schedule.SYNCHRONOUS:
        _synchronous_selection(state, active)
    else:
        _sequential_selection(state, active)
    _announce_settled(state, active)
    state.round += 1
    state.round_messages.append(state.message_count - before)
    return state


def _include(state: SimulationState, target: int) -> None:
    node = state.nodes[target]
    if node.in_cover:
        return
    node.in_cover = True
    state.send(MessageKind.COVER_ANNOUNCE, target, node.neighbors)
    for u in node.neighbors:
        state.nodes[u].known_covered.add(target)


def _synchronous_selection(state: SimulationState, active: list[int]) -> None:
    nodes = state.nodes
    scores: dict[int, Fraction] = {}
    uncovered: dict[int, list[int]] = {}
    for v in active:
        uncovered[v] = nodes[v].uncovered_neighbors()
        scores[v] = state.score_of(v)
    # uncovered neighbors of an active node are themselves active, so each
    # active-active edge carries one score in each direction
    for v in active:
        state.send(MessageKind.SCORE_EXCHANGE, v, uncovered[v], scores[v])

    included: set[int] = set()
    for v in active:
        target = select_candidate(nodes[v], [(u, scores[u]) for u in uncovered[v]])
        if target != v:
            state.send(MessageKind.INCLUDE, v, (target,))
        included.add(target)
    for t in sorted(included):
        _include(state, t)


def _sequential_selection(state: SimulationState, active: list[int]) -> None:
    nodes = state.nodes
    for v in sorted(active):
        node = nodes[v]
        if node.in_cover:
            continue
        uncovered = node.uncovered_neighbors()
        if not uncovered:
            continue
        state.send(MessageKind.SCORE_EXCHANGE, v, uncovered, state.score_of(v))
        received = []
        for u in uncovered:
            s = state.score_of(u)
            state.send(MessageKind.SCORE_EXCHANGE, u, (v,), s)
            received.append((u, s))
        target = select_candidate(node, received)
        if target != v:
            state.send(MessageKind.INCLUDE, v, (target,))
        _include(state, target)


def _announce_settled(state: SimulationState, candidates: list[int]) -> None:
    nodes = state.nodes
    for v in candidates:
        node = nodes[v]
        if node.in_cover or node.local_gain() == 0:
            node.settled = True
            state.send(MessageKind.SETTLED, v, node.neighbors, v)
            for u in node.neighbors:
                nodes[u].known_settled.add(v)


def optimize_round(
    state: SimulationState, rule: OptimizeRule = OptimizeRule.SAFE_LOCAL_MIN
) -> SimulationState:
    if state.phase is not Phase.OPTIMIZE:
        raise PhaseError(f"optimize round requested in phase {state.phase.value}")
    if not state.all_settled():
        raise PhaseError("optimize round requires every node to be settled")
    nodes = state.nodes
    before = state.message_count

    candidates = [
        v for v, node in nodes.items() if node.in_cover and len(node.known_covered) == node.degree
    ]
    candidate_set = set(candidates)
    for v in candidates:
        state.send(MessageKind.COMMUNICATE_DROP, v, nodes[v].neighbors, v)

    leaving = []
    for v in candidates:
        node = nodes[v]
        replies = []
        for u in node.neighbors:
            reply = u if u in candidate_set else NO_CONFLICT
            state.send(MessageKind.DROP_REPLY, u, (v,), reply)
            replies.append(reply)
        if optimize_decision(node, replies, rule) is Decision.LEAVE:
            leaving.append(v)
        else:
            state.send(MessageKind.REVOKE_DROP, v, node.neighbors, v)

    for v in leaving:
        nodes[v].in_cover = False
        # no revoke received: neighbors infer the exit
        for u in nodes[v].neighbors:
            nodes[u].known_covered.discard(v)

    state.phase = Phase.DONE
    state.round_messages.append(state.message_count - before)
    return state


def validate_cover(graph: Graph, cover: Iterable[int]) -> bool:
    cover = set(cover)
    return all(u in cover or v in cover for u, v in graph.edges())


@dataclass
class RunReport:
    cover: tuple[int, ...]
    cover_weight: float
    apw_numerator: float
    apw_denominator: float
    rounds: int
    selection_rounds: int
    total_messages: int
    mpn: float
    valid: bool
    order: int
    rule: str
    schedule: str
    messages_by_kind: dict[str, int]
    round_messages: list[int]
    elapsed: float = field(default=0.0, compare=False)

    @property
    def cover_size(self) -> int:
        return len(self.cover)

    @property
    def apw(self) -> float:
        if self.apw_denominator == 0:
            return 0.0
        return self.apw_numerator / self.apw_denominator

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["cover"] = list(self.cover)
        d["cover_size"] = self.cover_size
        d["apw"] = self.apw
        if not timing:
            del d["elapsed"]
        return d


def run(
    graph: Graph,
    rule: OptimizeRule = OptimizeRule.SAFE_LOCAL_MIN,
    schedule: Schedule = Schedule.SEQUENTIAL,
    trace: bool = False,
) -> RunReport:
    """Run Selection to global settlement, then one Optimize round."""
    return run_state(graph, rule, schedule, trace)[0]


def run_state(
    graph: Graph,
    rule: OptimizeRule = OptimizeRule.SAFE_LOCAL_MIN,
    schedule: Schedule = Schedule.SEQUENTIAL,
    trace: bool = False,
) -> tuple[RunReport, SimulationState]:
    """Like :func:`run`, also returning the final simulation state."""
    start = time.process_time()
    state = SimulationState.initial(graph, trace=trace, schedule=schedule)
    while not state.all_settled():
        selection_round(state)
    state.phase = Phase.OPTIMIZE
    optimize_round(state, rule)
    elapsed = time.process_time() - start

    cover = tuple(sorted(state.cover()))
    cover_weight = math.fsum(graph.weight(v) for v in cover)
    report = RunReport(
        cover=cover,
        cover_weight=cover_weight,
        apw_numerator=cover_weight,
        apw_denominator=graph.total_weight(),
        rounds=state.round + 1,
        selection_rounds=state.round,
        total_messages=state.message_count,
        mpn=state.message_count / graph.order if graph.order else 0.0,
        valid=validate_cover(graph, cover),
        order=graph.order,
        rule=OptimizeRule(rule).value,
        schedule=state.schedule.value,
        messages_by_kind={k.value: state.messages_by_kind.get(k, 0) for k in MessageKind},
        round_messages=list(state.round_messages),
        elapsed=elapsed,
    )
    return report, state
