"""Game values of Domineering positions.

A position's value is the sum of its components' values; a component's value
is ``{vertical options | horizontal options}`` canonicalized.  Component
values are memoized on canonical component keys in an engine that persists
across calls, so repeated shapes are valued once per session.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .board import MAX_CELLS as _MAX_SEARCH_CELLS
from .board import Position, Player, apply_move, components, component_key, legal_moves
from .facts import OutcomeClass, UNKNOWN, Unknown
from .games import (
    Comparison,
    Game,
    LimitsExceededError,
    ZERO,
    add,
    compare,
    make,
)


@dataclass(frozen=True)
class ValueLimits:
    max_positions: int = 2_000_000
    max_options: int = 512
    max_time: float = 1800.0

    def __post_init__(self) -> None:
        if self.max_positions <= 0 or self.max_options <= 0 or self.max_time <= 0:
            raise ValueError("limits must be positive")


class ValueEngine:
    """Memo writes are last-write-wins: concurrent valuations of the same
    component produce identical interned games, so lost updates are safe."""

    def __init__(self, limits: ValueLimits | None = None):
        self.limits = limits or ValueLimits()
        self.memo: dict[tuple, Game] = {}
        self.positions_examined = 0
        self._deadline: float | None = None

    def value(self, pos: Position) -> Game:
        outermost = self._deadline is None
        if outermost:
            self._deadline = time.monotonic() + self.limits.max_time
        try:
            total = ZERO
            for comp in components(pos):
                total = add(total, self._component_value(comp))
            return total
        finally:
            if outermost:
                self._deadline = None

    def _component_value(self, comp: Position) -> Game:
        key = component_key(comp)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if comp.spec.cells > _MAX_SEARCH_CELLS:
            raise LimitsExceededError(
                f"{comp.spec} exceeds the valuation capacity of {_MAX_SEARCH_CELLS} cells"
            )
        self.positions_examined += 1
        if self.positions_examined > self.limits.max_positions:
            raise LimitsExceededError("value memo grew past max_positions")
        if self.positions_examined % 1024 == 0 and time.monotonic() > (
            self._deadline or float("inf")
        ):
            raise LimitsExceededError("value computation exceeded max_time")
        lefts = [self.value(apply_move(comp, m)) for m in legal_moves(comp, Player.VERTICAL)]
        rights = [self.value(apply_move(comp, m)) for m in legal_moves(comp, Player.HORIZONTAL)]
        game = make(lefts, rights, max_options=self.limits.max_options)
        self.memo[key] = game
        return game


_DEFAULT_ENGINE = ValueEngine()


def position_value(pos: Position, engine: ValueEngine | None = None) -> Game:
    """Exact value; raises LimitsExceededError when limits are hit."""
    return (engine or _DEFAULT_ENGINE).value(pos)


def value(pos: Position, limits: ValueLimits | None = None,
          engine: ValueEngine | None = None) -> Game | Unknown:
    """Exact value, or UNKNOWN when the computation outgrows its limits."""
    if engine is None:
        engine = ValueEngine(limits) if limits is not None else _DEFAULT_ENGINE
    try:
        return engine.value(pos)
    except LimitsExceededError:
        return UNKNOWN


def outcome_of_value(g: Game) -> OutcomeClass:
    c = compare(g, ZERO)
    if c is Comparison.GREATER:
        return OutcomeClass.VERTICAL
    if c is Comparison.LESS:
        return OutcomeClass.HORIZONTAL
    if c is Comparison.EQUAL:
        return OutcomeClass.SECOND
    return OutcomeClass.FIRST
