"""Exhaustive outcome determination by memoized game-tree search.

The solver answers "does this player win moving first?" twice to classify a
position.  Search recurses on whole positions; the transposition key splits
the empty region into components and canonicalizes each, so congruent
disjunctive sums share table entries.  When every component is small, an
optional path sums exact component values instead of searching.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import values as values_mod
from .board import (
    MAX_CELLS,
    BoardSpec,
    CapacityError,
    Position,
    Player,
    apply_move,
    canonical_key,
    components,
    legal_move_masks,
    move_pairs,
)
from .facts import (
    BoardKey,
    Fact,
    OutcomeClass,
    OutcomeSet,
    ALL_OUTCOMES,
    Searched,
    UNKNOWN,
    Unknown,
)
from .games import Comparison, compare, ZERO


class TooLargeForOracleError(Exception):
    pass


def _check_capacity(spec: BoardSpec) -> None:
    """Search works on the fixed-capacity bitset scale only."""
    if spec.cells > MAX_CELLS:
        raise CapacityError(
            f"{spec} has {spec.cells} cells; search capacity is {MAX_CELLS}"
        )


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 50_000_000
    max_time: float = 900.0
    table_capacity: int = 1 << 20

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_time <= 0 or self.table_capacity <= 0:
            raise ValueError("limits must be positive")


@dataclass
class SearchResult:
    outcome: OutcomeClass | None
    nodes_visited: int
    table_hits: int
    elapsed: float
    limits_hit: bool = False


class _LimitStop(Exception):
    pass


class TranspositionTable:
    """Lossy fixed-capacity cache with two replacement tiers per slot:
    one preferring large subtrees, one always replaced.  Concurrent
    insert/lookup may lose updates; a miss is always safe, so correctness
    never depends on retention."""

    __slots__ = ("_slots", "_deep", "_recent", "hits")

    def __init__(self, capacity: int):
        self._slots = max(1, capacity // 2)
        self._deep: list = [None] * self._slots
        self._recent: list = [None] * self._slots
        self.hits = 0

    def get(self, key):
        slot = hash(key) % self._slots
        for tier in (self._deep, self._recent):
            entry = tier[slot]
            if entry is not None and entry[0] == key:
                self.hits += 1
                return entry[1]
        return None

    def put(self, key, win: bool, subtree_nodes: int) -> None:
        slot = hash(key) % self._slots
        deep = self._deep[slot]
        if deep is None or deep[0] == key or subtree_nodes >= deep[2]:
            self._deep[slot] = (key, win, subtree_nodes)
        else:
            self._recent[slot] = (key, win, subtree_nodes)


class Solver:
    """Reusable search engine; share one instance to reuse its tables."""

    def __init__(
        self,
        limits: SearchLimits | None = None,
        use_value_path: bool = True,
        value_cell_threshold: int = 16,
    ):
        self.limits = limits or SearchLimits()
        self.use_value_path = use_value_path
        self.value_cell_threshold = value_cell_threshold
        self.table: dict[tuple, bool] = {}
        self.tt = TranspositionTable(self.limits.table_capacity)
        self.nodes = 0
        self._deadline = 0.0
        self._key_cache: dict[tuple[BoardSpec, int, int], tuple] = {}

    # -- public API --

    def wins_moving(self, pos: Position, mover: Player) -> bool | Unknown:
        """True iff the mover can make the last move, searching exhaustively."""
        _check_capacity(pos.spec)
        self.nodes = 0
        self.tt.hits = 0
        self._deadline = time.monotonic() + self.limits.max_time
        try:
            return self._wins(pos, mover)
        except _LimitStop:
            return UNKNOWN

    def outcome(self, pos: Position) -> OutcomeClass | Unknown:
        v_first = self.wins_moving(pos, Player.VERTICAL)
        if v_first is UNKNOWN:
            return UNKNOWN
        nodes = self.nodes
        h_first = self.wins_moving(pos, Player.HORIZONTAL)
        self.nodes += nodes
        if h_first is UNKNOWN:
            return UNKNOWN
        return classify(v_first, h_first)

    def solve(self, spec: BoardSpec) -> tuple[Fact | None, SearchResult]:
        start = time.monotonic()
        pos = Position.empty(spec)
        outcome = self.outcome(pos)
        elapsed = time.monotonic() - start
        key = BoardKey(spec.topology, spec.width, spec.length)
        if outcome is UNKNOWN:
            result = SearchResult(None, self.nodes, self.tt.hits, elapsed, limits_hit=True)
            return None, result
        fact = Fact(key, OutcomeSet.of(outcome), Searched(nodes=self.nodes))
        return fact, SearchResult(outcome, self.nodes, self.tt.hits, elapsed)

    # -- internals --

    def _canonical(self, pos: Position, mover: Player) -> tuple:
        cache_key = (pos.spec, pos.mask, 0)
        key = self._key_cache.get(cache_key)
        if key is None:
            key = canonical_key(pos)
            if len(self._key_cache) < 1 << 20:
                self._key_cache[cache_key] = key
        return (key, mover.value)

    def _value_verdict(self, pos: Position, mover: Player) -> bool | None:
        """Decide the mover query from summed component values, if cheap."""
        comps = components(pos)
        if not comps or any(c.empty_count > self.value_cell_threshold for c in comps):
            return None
        try:
            total = values_mod.position_value(pos)
        except values_mod.LimitsExceededError:
            return None
        if mover is Player.VERTICAL:
            return compare(total, ZERO) in (Comparison.GREATER, Comparison.CONFUSED)
        return compare(total, ZERO) in (Comparison.LESS, Comparison.CONFUSED)

    def _wins(self, pos: Position, mover: Player) -> bool:
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise _LimitStop
        if self.nodes % 4096 == 0 and time.monotonic() > self._deadline:
            raise _LimitStop

        moves = legal_move_masks(pos, mover)
        if not moves:
            return False

        key = self._canonical(pos, mover)
        hit = self.tt.get(key)
        if hit is not None:
            return hit

        if self.use_value_path:
            verdict = self._value_verdict(pos, mover)
            if verdict is not None:
                self.tt.put(key, verdict, 1)
                return verdict

        start_nodes = self.nodes
        opponent = mover.opponent
        opp_pairs = move_pairs(pos.spec, opponent)
        empty = pos.empty_mask

        def destruction(move_bits: int) -> int:
            count = 0
            for i, j in opp_pairs:
                bits = (1 << i) | (1 << j)
                if empty & bits == bits and bits & move_bits:
                    count += 1
            return count

        ordered = sorted(moves, key=lambda m: (-destruction(m[2]), m[0], m[1]))
        win = False
        for _, _, bits in ordered:
            child = Position(pos.spec, pos.mask | bits)
            if not self._wins(child, opponent):
                win = True
                break
        self.tt.put(key, win, self.nodes - start_nodes + 1)
        return win


def classify(v_first_wins: bool, h_first_wins: bool) -> OutcomeClass:
    if v_first_wins and h_first_wins:
        return OutcomeClass.FIRST
    if v_first_wins:
        return OutcomeClass.VERTICAL
    if h_first_wins:
        return OutcomeClass.HORIZONTAL
    return OutcomeClass.SECOND


# -- module-level conveniences matching the operation contracts --


def wins_moving(pos: Position, mover: Player, limits: SearchLimits | None = None) -> bool | Unknown:
    return Solver(limits).wins_moving(pos, mover)


def outcome(pos: Position, limits: SearchLimits | None = None) -> OutcomeClass | Unknown:
    return Solver(limits).outcome(pos)


def solve_board(spec: BoardSpec, limits: SearchLimits | None = None,
                solver: Solver | None = None) -> Fact | None:
    """Fact with a searched singleton outcome, or None when limits hit."""
    solver = solver or Solver(limits)
    fact, _ = solver.solve(spec)
    return fact


# ---------------------------------------------------------------------------
# Verification oracle: plain minimax, no tables, no symmetry, no components.


def _oracle_wins(pos: Position, mover: Player) -> bool:
    for _, _, bits in legal_move_masks(pos, mover):
        if not _oracle_wins(Position(pos.spec, pos.mask | bits), mover.opponent):
            return True
    return False


def oracle_outcome(pos: Position) -> OutcomeClass:
    """Ground-truth outcome by unmemoized minimax; only for small positions."""
    _check_capacity(pos.spec)
    if pos.empty_count > 20:
        raise TooLargeForOracleError(
            f"{pos.empty_count} empty cells exceeds the oracle limit of 20"
        )
    return classify(
        _oracle_wins(pos, Player.VERTICAL), _oracle_wins(pos, Player.HORIZONTAL)
    )
