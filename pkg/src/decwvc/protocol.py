"""Per-node decision logic of the decentralized weighted vertex cover protocol.

Everything here is a pure function of explicit node state and the values a
node has received from its neighbors.  Scheduling, message delivery and
counting live in :mod:`decwvc.engine`.

Scores are exact rationals (:class:`fractions.Fraction`), so two nodes with
``w1 / g1 == w2 / g2`` are recognised as tied and the highest ID wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NO_CONFLICT = -1


class ProtocolError(Exception):
    pass


class ScoreDomainError(ProtocolError, ValueError):
    """Score requested for a node whose gain is zero."""


class NodeSettledError(ProtocolError):
    """Selection requested for a node with nothing left to cover."""


class OptimizeRule(str, Enum):
    # Leave iff all replies are -1 or some reply is a higher ID (literal reading).
    PAPER_LITERAL = "paper"
    # Leave iff every conflicting reply is a higher ID; keeps the cover valid.
    SAFE_LOCAL_MIN = "safe"


class Decision(str, Enum):
    LEAVE = "leave"
    STAY = "stay"


class MessageKind(str, Enum):
    SCORE_EXCHANGE = "score_exchange"
    INCLUDE = "include"
    COVER_ANNOUNCE = "cover_announce"
    SETTLED = "settled"
    COMMUNICATE_DROP = "communicate_drop"
    DROP_REPLY = "drop_reply"
    REVOKE_DROP = "revoke_drop"


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    sender: int
    receiver: int
    # score for SCORE_EXCHANGE, -1 or an ID for DROP_REPLY, sender ID for
    # SETTLED / COMMUNICATE_DROP / REVOKE_DROP, None otherwise
    value: Fraction | int | None = None

    def __post_init__(self) -> None:
        if self.kind is MessageKind.DROP_REPLY:
            if not (self.value == NO_CONFLICT or (isinstance(self.value, int) and self.value > 0)):
                raise ProtocolError(f"drop reply must be -1 or a vertex ID, got {self.value!r}")


@dataclass
class NodeState:
    """What a single node knows about itself and its neighborhood."""

    id: int
    weight: float
    neighbors: tuple[int, ...]
    in_cover: bool = False
    settled: bool = False
    known_covered: set[int] = field(default_factory=set)
    known_settled: set[int] = field(default_factory=set)

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    def cover_flags(self) -> dict[int, bool]:
        return {u: u in self.known_covered for u in self.neighbors}

    def uncovered_neighbors(self) -> list[int]:
        return [u for u in self.neighbors if u not in self.known_covered]

    def local_gain(self) -> int:
        return len(self.neighbors) - len(self.known_covered)


def gain(node: NodeState, neighbor_cover_flags: Mapping[int, bool]) -> int:
    """Number of neighbors of ``node`` that are not in the cover."""
    return sum(1 for u in node.neighbors if not neighbor_cover_flags[u])


def score(node: NodeState, node_gain: int) -> Fraction:
    """``w(n) / gain(n)`` as an exact rational; undefined at zero gain."""
    if node_gain <= 0:
        raise ScoreDomainError(f"score of node {node.id} undefined at gain {node_gain}")
    num, den = float(node.weight).as_integer_ratio()
    return Fraction(num, den * node_gain)


def is_settled(node: NodeState, neighbor_cover_flags: Mapping[int, bool]) -> bool:
    return node.in_cover or all(neighbor_cover_flags[u] for u in node.neighbors)


def best_of(candidates: Iterable[tuple[int, Fraction | float]]) -> int:
    """ID with the lowest score; the highest ID among equal scores.

    Floats are compared as the exact rationals they represent.
    """
    best_id = None
    best_score = None
    for vid, s in candidates:
        if not isinstance(s, Fraction):
            s = Fraction(s)
        if best_id is None or s < best_score or (s == best_score and vid > best_id):
            best_id, best_score = vid, s
    if best_id is None:
        raise NodeSettledError("no selection candidates")
    return best_id


def select_candidate(
    node: NodeState, uncovered_neighbors: Sequence[tuple[int, Fraction | float]]
) -> int:
    """Pick the node to include among ``node`` and its uncovered neighbors.

    ``uncovered_neighbors`` holds the ``(id, score)`` pairs received during
    the score exchange.  ``node`` competes with its own score whenever its
    gain (from its cover knowledge) is positive.
    """
    if node.in_cover:
        raise NodeSettledError(f"node {node.id} is already in the cover")
    pool = list(uncovered_neighbors)
    own_gain = node.local_gain()
    if own_gain > 0:
        pool.append((node.id, score(node, own_gain)))
    try:
        return best_of(pool)
    except NodeSettledError:
        raise NodeSettledError(f"node {node.id} has no uncovered neighbors") from None


def optimize_decision(
    node: NodeState, replies: Sequence[int], rule: OptimizeRule = OptimizeRule.SAFE_LOCAL_MIN
) -> Decision:
    """Decide whether a redundant cover node leaves, given its neighbors' drop replies.

    Each reply is ``-1`` (neighbor stays) or the neighbor's own ID (neighbor
    also wants to drop).
    """
    if len(replies) != node.degree:
        raise ProtocolError(
            f"node {node.id} expected {node.degree} drop replies, got {len(replies)}"
        )
    for r in replies:
        if r != NO_CONFLICT and r <= 0:
            raise ProtocolError(f"invalid drop reply {r!r}")
    conflicts = [r for r in replies if r != NO_CONFLICT]
    if rule is OptimizeRule.PAPER_LITERAL:
        leave = not conflicts or any(r > node.id for r in conflicts)
    else:
        leave = all(r > node.id for r in conflicts)
    return Decision.LEAVE if leave else Decision.STAY
