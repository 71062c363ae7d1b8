"""Outcome classes, partial-knowledge outcome sets, and provenance-carrying
facts about board families."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .board import Topology, topology_from_token


class Unknown:
    """Result of a computation that hit its limits; never a guess."""

    _instance: "Unknown | None" = None

    def __new__(cls) -> "Unknown":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unknown"

    def __bool__(self) -> bool:
        raise TypeError("Unknown is not a truth value; test with `is UNKNOWN`")


UNKNOWN = Unknown()


class OutcomeClass(Enum):
    VERTICAL = "V"    # the vertical player wins moving first or second
    HORIZONTAL = "H"  # the horizontal player wins moving first or second
    FIRST = "1"       # whoever moves first wins
    SECOND = "2"      # whoever moves second wins

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"OutcomeClass.{self.name}"


_TOKEN_TO_OUTCOME = {o.value: o for o in OutcomeClass}
_TOKEN_TO_OUTCOME.update({"1st": OutcomeClass.FIRST, "2nd": OutcomeClass.SECOND,
                          "v": OutcomeClass.VERTICAL, "h": OutcomeClass.HORIZONTAL})


def outcome_from_token(token: str) -> OutcomeClass:
    try:
        return _TOKEN_TO_OUTCOME[token.strip().lower() if len(token) > 1 else token.strip()]
    except KeyError:
        raise ValueError(f"unknown outcome token {token!r}") from None


@dataclass(frozen=True)
class OutcomeSet:
    """A nonempty subset of the four outcome classes: partial knowledge."""

    members: frozenset[OutcomeClass]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("outcome set must be nonempty")

    @classmethod
    def of(cls, *outcomes: OutcomeClass) -> "OutcomeSet":
        return cls(frozenset(outcomes))

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "OutcomeSet":
        return cls(frozenset(outcome_from_token(t) for t in tokens))

    def tokens(self) -> list[str]:
        order = {"V": 0, "H": 1, "1": 2, "2": 3}
        return sorted((o.value for o in self.members), key=order.__getitem__)

    @property
    def is_singleton(self) -> bool:
        return len(self.members) == 1

    @property
    def single(self) -> OutcomeClass:
        if not self.is_singleton:
            raise ValueError(f"outcome not determined: {self}")
        return next(iter(self.members))

    def __contains__(self, outcome: OutcomeClass) -> bool:
        return outcome in self.members

    def __le__(self, other: "OutcomeSet") -> bool:
        return self.members <= other.members

    def intersect(self, other: "OutcomeSet") -> frozenset[OutcomeClass]:
        return self.members & other.members

    def union(self, other: "OutcomeSet") -> "OutcomeSet":
        return OutcomeSet(self.members | other.members)

    def __str__(self) -> str:
        return "{" + ",".join(self.tokens()) + "}"


ALL_OUTCOMES = OutcomeSet(frozenset(OutcomeClass))


# Figure-style cell vocabulary: singletons by letter, pairs like "1h",
# triples as the missing member ("-v"), the full set as "?".
_PAIR_TOKENS = {
    frozenset({OutcomeClass.FIRST, OutcomeClass.HORIZONTAL}): "1h",
    frozenset({OutcomeClass.FIRST, OutcomeClass.VERTICAL}): "1v",
    frozenset({OutcomeClass.SECOND, OutcomeClass.HORIZONTAL}): "2h",
    frozenset({OutcomeClass.SECOND, OutcomeClass.VERTICAL}): "2v",
    frozenset({OutcomeClass.FIRST, OutcomeClass.SECOND}): "12",
    frozenset({OutcomeClass.VERTICAL, OutcomeClass.HORIZONTAL}): "vh",
}
_MISSING_TOKENS = {
    OutcomeClass.VERTICAL: "-v",
    OutcomeClass.HORIZONTAL: "-h",
    OutcomeClass.FIRST: "-1",
    OutcomeClass.SECOND: "-2",
}


def atlas_token(outcomes: OutcomeSet) -> str:
    members = outcomes.members
    if len(members) == 1:
        return next(iter(members)).value
    if len(members) == 2:
        return _PAIR_TOKENS[frozenset(members)]
    if len(members) == 3:
        missing = next(iter(frozenset(OutcomeClass) - members))
        return _MISSING_TOKENS[missing]
    return "?"


def outcomes_from_atlas_token(token: str) -> OutcomeSet:
    token = token.strip()
    if token == "?":
        return ALL_OUTCOMES
    for members, tok in _PAIR_TOKENS.items():
        if tok == token:
            return OutcomeSet(members)
    for missing, tok in _MISSING_TOKENS.items():
        if tok == token:
            return OutcomeSet(frozenset(OutcomeClass) - {missing})
    return OutcomeSet.of(outcome_from_token(token))


@dataclass(frozen=True)
class BoardKey:
    """Identifies a board family in the knowledge base.

    Length 0 is allowed here (the empty board, a second-player win): it
    participates in splitting rules even though no playable board has it.
    """

    topology: Topology
    width: int
    length: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.length < 0:
            raise ValueError("width must be positive and length nonnegative")

    def _sort_index(self) -> tuple:
        return (self.topology.value, self.width, self.length)

    def __lt__(self, other: "BoardKey") -> bool:
        return self._sort_index() < other._sort_index()

    @property
    def cells(self) -> int:
        return self.width * self.length

    def __str__(self) -> str:
        return f"{self.topology.value}:{self.width}x{self.length}"

    @classmethod
    def parse(cls, text: str) -> "BoardKey":
        topo_part, _, dims = text.strip().partition(":")
        if not dims:
            topo_part, dims = "rect", topo_part
        w, _, l = dims.lower().partition("x")
        return cls(topology_from_token(topo_part), int(w), int(l))


def rect_key(width: int, length: int) -> BoardKey:
    return BoardKey(Topology.RECTANGLE, width, length)


# ---------------------------------------------------------------------------
# Provenance


@dataclass(frozen=True)
class Searched:
    nodes: int = 0
    elapsed: float = 0.0
    kind: str = field(default="searched", init=False)


@dataclass(frozen=True)
class Asserted:
    citation: str
    kind: str = field(default="asserted", init=False)


@dataclass(frozen=True)
class Derived:
    rule: str
    premises: tuple[BoardKey, ...]
    kind: str = field(default="derived", init=False)


Provenance = Searched | Asserted | Derived


@dataclass(frozen=True)
class Fact:
    key: BoardKey
    outcomes: OutcomeSet
    provenance: Provenance


def provenance_to_dict(p: Provenance) -> dict:
    if isinstance(p, Searched):
        return {"kind": "searched", "nodes": p.nodes}
    if isinstance(p, Asserted):
        return {"kind": "asserted", "citation": p.citation}
    return {"kind": "derived", "rule": p.rule, "premises": [str(k) for k in p.premises]}


def provenance_from_dict(d: dict) -> Provenance:
    kind = d.get("kind")
    if kind == "searched":
        return Searched(nodes=int(d.get("nodes", 0)))
    if kind == "asserted":
        return Asserted(citation=d.get("citation", ""))
    if kind == "derived":
        return Derived(
            rule=d.get("rule", ""),
            premises=tuple(BoardKey.parse(k) for k in d.get("premises", [])),
        )
    raise ValueError(f"unknown provenance kind {kind!r}")
