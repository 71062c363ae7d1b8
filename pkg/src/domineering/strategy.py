"""Constructive winning strategies: base tables extracted from solved
boards, sum compositions that answer in the part the opponent played in,
the rotation-mirror pairing for congruent squares, and value-guided play
for boards with no elementary decomposition.

A strategy is stateless: ``first_move`` is consulted only when the strategy
leads the game off, and ``reply`` answers the opponent's move just made.
Adversarial verification branches over every opponent line while our side
follows the strategy's single move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .board import (
    BoardSpec,
    DomineeringError,
    Move,
    Player,
    Position,
    Topology,
    apply_move,
    legal_moves,
    rect,
)
from .facts import OutcomeClass, OutcomeSet, UNKNOWN
from .games import Comparison, ZERO, add as games_add, compare
from .knowledge import KnowledgeBase, TailCertificate, outcome_for_length, tail_theorem
from .solver import Solver
from .values import ValueEngine, position_value


class StrategyError(DomineeringError):
    pass


class NotAWinError(StrategyError):
    pass


class OutcomeMismatchError(StrategyError):
    pass


class UnsupportedWidthError(StrategyError):
    pass


class UncertifiableCompositionError(StrategyError):
    pass


class ComponentMismatchError(StrategyError):
    pass


class NoWinningMoveError(StrategyError):
    pass


class TooLargeError(StrategyError):
    pass


class Role(Enum):
    WIN_FIRST = "first"
    WIN_SECOND = "second"
    WIN_ALWAYS = "always"

    @property
    def can_lead(self) -> bool:
        return self is not Role.WIN_SECOND

    @property
    def can_follow(self) -> bool:
        return self is not Role.WIN_FIRST


BASE_CELL_LIMIT = 28
THEOREM_WIDTHS = (2, 3, 4, 5, 7, 9, 11)


class Strategy:
    """Interface: subclasses define player, role, board, and the two move
    queries."""

    player: Player
    role: Role

    def initial_position(self) -> Position:
        raise NotImplementedError

    def first_move(self, pos: Position) -> Move:
        raise NotImplementedError

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Base tables


class BaseTableStrategy(Strategy):
    """Winning-move table over exactly the positions reachable when this
    side follows the table (on-policy closure)."""

    def __init__(self, spec: BoardSpec, player: Player, role: Role,
                 table: dict[int, Move]):
        self.spec = spec
        self.player = player
        self.role = role
        self.table = table

    def initial_position(self) -> Position:
        return Position.empty(self.spec)

    def _lookup(self, pos: Position) -> Move:
        move = self.table.get(pos.mask)
        if move is None:
            raise NoWinningMoveError(
                f"position not covered by base table for {self.spec}"
            )
        return move

    def first_move(self, pos: Position) -> Move:
        return self._lookup(pos)

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        return self._lookup(pos)

    def describe(self) -> str:
        return f"base({self.spec},{self.player.value},{self.role.value})"


_ROLE_FOR_OUTCOME = {
    (OutcomeClass.VERTICAL, Player.VERTICAL): Role.WIN_ALWAYS,
    (OutcomeClass.HORIZONTAL, Player.HORIZONTAL): Role.WIN_ALWAYS,
}


def role_for(outcome: OutcomeClass, player: Player) -> Role:
    if outcome is OutcomeClass.FIRST:
        return Role.WIN_FIRST
    if outcome is OutcomeClass.SECOND:
        return Role.WIN_SECOND
    role = _ROLE_FOR_OUTCOME.get((outcome, player))
    if role is None:
        raise NotAWinError(
            f"{player.value} does not win a board with outcome {outcome.value}"
        )
    return role


def build_base_strategy(spec: BoardSpec, player: Player,
                        solver: Solver | None = None,
                        role: Role | None = None) -> BaseTableStrategy:
    """Solve the board and extract the winning-move table for the player."""
    if spec.cells > BASE_CELL_LIMIT:
        raise TooLargeError(
            f"{spec} has {spec.cells} cells; base tables are limited to "
            f"{BASE_CELL_LIMIT}"
        )
    solver = solver or Solver()
    outcome = solver.outcome(Position.empty(spec))
    if outcome is UNKNOWN:
        raise TooLargeError(f"could not solve {spec} within limits")
    true_role = role_for(outcome, player)
    if role is not None and role is not true_role:
        if not (role is Role.WIN_FIRST and true_role is Role.WIN_ALWAYS) and not (
            role is Role.WIN_SECOND and true_role is Role.WIN_ALWAYS
        ):
            raise NotAWinError(
                f"{spec} has outcome {outcome.value}: role {role.value} unsupported"
            )
        true_role = role
    table: dict[int, Move] = {}
    opponent = player.opponent

    def close_ours(pos: Position) -> None:
        if pos.mask in table:
            return
        for move in legal_moves(pos, player):
            child = apply_move(pos, move)
            if solver.wins_moving(child, opponent) is False:
                table[pos.mask] = move
                close_theirs(child)
                return
        raise NotAWinError(f"no winning move found in a supposedly won position\n{pos}")

    def close_theirs(pos: Position) -> None:
        for move in legal_moves(pos, opponent):
            close_ours(apply_move(pos, move))

    root = Position.empty(spec)
    if true_role.can_lead:
        close_ours(root)
    if true_role.can_follow:
        close_theirs(root)
    return BaseTableStrategy(spec, player, true_role, table)


# ---------------------------------------------------------------------------
# Sum composition


@dataclass
class Part:
    col_start: int
    col_end: int  # exclusive
    strategy: Strategy
    role: Role

    @property
    def length(self) -> int:
        return self.col_end - self.col_start

    def local_position(self, pos: Position) -> Position:
        spec = pos.spec
        sub = BoardSpec(Topology.RECTANGLE, spec.width, self.length)
        mask = 0
        for r in range(spec.width):
            for c in range(self.col_start, self.col_end):
                if pos.mask >> (r * spec.length + c) & 1:
                    mask |= 1 << (r * sub.length + (c - self.col_start))
        return Position(sub, mask)

    def to_local(self, move: Move) -> Move:
        return Move(move.player, tuple((r, c - self.col_start) for r, c in move.cells))

    def to_global(self, move: Move) -> Move:
        return Move(move.player, tuple((r, c + self.col_start) for r, c in move.cells))

    def contains(self, move: Move) -> bool:
        return all(self.col_start <= c < self.col_end for _, c in move.cells)


def _compose_role(roles: Sequence[Role]) -> Role:
    firsts = sum(1 for r in roles if r is Role.WIN_FIRST)
    if firsts > 1:
        raise UncertifiableCompositionError(
            "two parts both need to move first; no composition certifies a win"
        )
    if firsts == 1:
        return Role.WIN_FIRST
    if any(r is Role.WIN_ALWAYS for r in roles):
        return Role.WIN_ALWAYS
    return Role.WIN_SECOND


class SumCompositionStrategy(Strategy):
    """Dispatch to the part the opponent played in; lead, when obliged, in
    the designated leading part."""

    def __init__(self, parts: list[Part], player: Player):
        if not parts:
            raise UncertifiableCompositionError("empty composition")
        self.parts = parts
        self.player = player
        self.role = _compose_role([p.role for p in parts])
        widths = {p.strategy.initial_position().spec.width for p in parts}
        if len(widths) != 1:
            raise UncertifiableCompositionError("parts have mixed widths")
        self.width = widths.pop()
        self.spec = rect(self.width, parts[-1].col_end)
        leads = [p for p in self.parts if p.role.can_lead]
        self.lead_part = leads[0] if leads else None

    def initial_position(self) -> Position:
        return Position.empty(self.spec)

    def first_move(self, pos: Position) -> Move:
        if self.lead_part is None:
            raise NoWinningMoveError("composition has no part able to lead")
        part = self.lead_part
        local = part.strategy.first_move(part.local_position(pos))
        return part.to_global(local)

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        for part in self.parts:
            if part.contains(opponent_move):
                local_pos = part.local_position(pos)
                local = part.strategy.reply(local_pos, part.to_local(opponent_move))
                return part.to_global(local)
        raise NoWinningMoveError(
            f"opponent move {opponent_move.cells} crosses part boundaries"
        )

    def describe(self) -> str:
        return "sum(" + ",".join(p.strategy.describe() for p in self.parts) + ")"


def compose_sum(parts: Iterable[Strategy | tuple[Strategy, Role]]) -> SumCompositionStrategy:
    """Compose equal-width part strategies laid out left to right."""
    normalized: list[tuple[Strategy, Role]] = []
    for item in parts:
        if isinstance(item, tuple):
            normalized.append(item)
        else:
            normalized.append((item, item.role))
    if not normalized:
        raise UncertifiableCompositionError("empty composition")
    players = {s.player for s, _ in normalized}
    if len(players) != 1:
        raise UncertifiableCompositionError("parts play for different sides")
    col = 0
    part_objs = []
    for strategy, role in normalized:
        spec = strategy.initial_position().spec
        part_objs.append(Part(col, col + spec.length, strategy, role))
        col += spec.length
    return SumCompositionStrategy(part_objs, players.pop())


class DualArmStrategy(Strategy):
    """A win-always strategy assembled from a win-moving-first arm and a
    win-moving-second arm over the same board.  The arm is recovered from
    the total domino count: even counts mean this side led the game."""

    def __init__(self, first_arm: Strategy, second_arm: Strategy):
        if first_arm.player is not second_arm.player:
            raise UncertifiableCompositionError("arms play for different sides")
        if first_arm.initial_position() != second_arm.initial_position():
            raise UncertifiableCompositionError("arms cover different boards")
        self.first_arm = first_arm
        self.second_arm = second_arm
        self.player = first_arm.player
        self.role = Role.WIN_ALWAYS

    def initial_position(self) -> Position:
        return self.first_arm.initial_position()

    def first_move(self, pos: Position) -> Move:
        return self.first_arm.first_move(pos)

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        dominoes = pos.mask.bit_count() // 2
        arm = self.first_arm if dominoes % 2 == 0 else self.second_arm
        return arm.reply(pos, opponent_move)

    def describe(self) -> str:
        return f"dual(first={self.first_arm.describe()},second={self.second_arm.describe()})"


class SplitStrategy(Strategy):
    """Width-2 vertical player's recipe: the first move occupies a full
    column, splitting the board into two parts she handles by role."""

    def __init__(self, length: int, split_col: int,
                 left: Strategy | None, right: Strategy | None):
        self.spec = rect(2, length)
        self.split_col = split_col
        self.player = Player.VERTICAL
        self.role = Role.WIN_FIRST
        parts = []
        if left is not None:
            parts.append(Part(0, split_col, left, left.role))
        if right is not None:
            parts.append(Part(split_col + 1, length, right, right.role))
        self.parts = parts

    def initial_position(self) -> Position:
        return Position.empty(self.spec)

    def first_move(self, pos: Position) -> Move:
        return Move(Player.VERTICAL, ((0, self.split_col), (1, self.split_col)))

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        for part in self.parts:
            if part.contains(opponent_move):
                local = part.strategy.reply(
                    part.local_position(pos), part.to_local(opponent_move)
                )
                return part.to_global(local)
        raise NoWinningMoveError("opponent move not inside any split part")

    def describe(self) -> str:
        inner = ",".join(p.strategy.describe() for p in self.parts)
        return f"split(col={self.split_col},{inner})"


# ---------------------------------------------------------------------------
# Mirror strategy


class MirrorStrategy(Strategy):
    """Second-player strategy for the horizontal player on two congruent
    squares: answer each move with its quarter-turn image in the other
    square, exploiting that a square is its own negative under rotation."""

    def __init__(self, square: BoardSpec, other: BoardSpec | None = None):
        other = other or square
        if square.topology is not Topology.RECTANGLE or other.topology is not Topology.RECTANGLE:
            raise ComponentMismatchError("mirror pairing needs rectangles")
        if square.width != square.length:
            raise ComponentMismatchError(f"{square} is not square")
        if (square.width, square.length) != (other.width, other.length):
            raise ComponentMismatchError(
                f"cannot pair {square} with {other}: components must be congruent"
            )
        self.n = square.width
        # two n-by-n squares separated by one occupied column
        self.spec = rect(self.n, 2 * self.n + 1)
        self.player = Player.HORIZONTAL
        self.role = Role.WIN_SECOND

    def initial_position(self) -> Position:
        occupied = [(r, self.n) for r in range(self.n)]
        return Position.from_cells(self.spec, occupied)

    def first_move(self, pos: Position) -> Move:
        raise NoWinningMoveError("mirror strategy never leads")

    def _image(self, cell: tuple[int, int]) -> tuple[int, int]:
        r, c = cell
        n = self.n
        if c < n:  # square A -> B under (r, c) -> (c, n-1-r)
            return (c, n + 1 + (n - 1 - r))
        local = c - (n + 1)  # square B -> A under the inverse map
        return (n - 1 - local, r)

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        cells = tuple(self._image(cell) for cell in opponent_move.cells)
        return Move(self.player, cells)

    def describe(self) -> str:
        return f"mirror({self.n}x{self.n})"


def mirror_strategy(square: BoardSpec, other: BoardSpec | None = None) -> MirrorStrategy:
    return MirrorStrategy(square, other)


# ---------------------------------------------------------------------------
# Value-guided play


def value_play_move(pos: Position, player: Player,
                    engine: ValueEngine | None = None,
                    candidate_moves: Sequence[Move] | None = None) -> Move:
    """A move to a position this player wins as the non-mover, found by
    exact valuation; errors when no such move exists."""
    moves = list(candidate_moves) if candidate_moves is not None else legal_moves(pos, player)
    good = (
        (Comparison.GREATER, Comparison.EQUAL)
        if player is Player.VERTICAL
        else (Comparison.LESS, Comparison.EQUAL)
    )
    for move in sorted(moves, key=Move.sort_key):
        child = apply_move(pos, move)
        if compare(position_value(child, engine), ZERO) in good:
            return move
    raise NoWinningMoveError(
        f"no move keeps the position winning for {player.value}"
    )


class ValuePlayStrategy(Strategy):
    """Play an entire board (or a fixed column partition of it) by exact
    values, never crossing piece boundaries."""

    def __init__(self, spec: BoardSpec, player: Player, role: Role,
                 piece_lengths: Sequence[int] | None = None,
                 engine: ValueEngine | None = None):
        self.spec = spec
        self.player = player
        self.role = role
        self.engine = engine
        if piece_lengths:
            if sum(piece_lengths) != spec.length:
                raise UncertifiableCompositionError("piece lengths do not tile the board")
            bounds = []
            col = 0
            for length in piece_lengths:
                bounds.append((col, col + length))
                col += length
            self.piece_bounds = bounds
        else:
            self.piece_bounds = [(0, spec.length)]

    def initial_position(self) -> Position:
        return Position.empty(self.spec)

    def _piece_positions(self, pos: Position) -> list[Position]:
        out = []
        for c0, c1 in self.piece_bounds:
            sub = BoardSpec(Topology.RECTANGLE, self.spec.width, c1 - c0)
            mask = 0
            for r in range(self.spec.width):
                for c in range(c0, c1):
                    if pos.mask >> (r * self.spec.length + c) & 1:
                        mask |= 1 << (r * sub.length + (c - c0))
            out.append(Position(sub, mask))
        return out

    def _in_one_piece(self, move: Move) -> bool:
        cols = [c for _, c in move.cells]
        return any(
            all(c0 <= c < c1 for c in cols) for c0, c1 in self.piece_bounds
        )

    def _pick(self, pos: Position) -> Move:
        good = (
            (Comparison.GREATER, Comparison.EQUAL)
            if self.player is Player.VERTICAL
            else (Comparison.LESS, Comparison.EQUAL)
        )
        for move in legal_moves(pos, self.player):
            if not self._in_one_piece(move):
                continue  # never cross a piece boundary
            child = apply_move(pos, move)
            total = ZERO
            for piece in self._piece_positions(child):
                total = games_add(total, position_value(piece, self.engine))
            if compare(total, ZERO) in good:
                return move
        raise NoWinningMoveError(
            f"no value-preserving move for {self.player.value} on {self.spec}"
        )

    def first_move(self, pos: Position) -> Move:
        return self._pick(pos)

    def reply(self, pos: Position, opponent_move: Move) -> Move:
        return self._pick(pos)

    def describe(self) -> str:
        pieces = ",".join(str(c1 - c0) for c0, c1 in self.piece_bounds)
        return f"value-play({self.spec},pieces=[{pieces}])"


# ---------------------------------------------------------------------------
# Per-width recipes


def _decompose_4_13(length: int) -> list[int] | None:
    """Write length as 4a + 13b with minimal b, if possible."""
    for b in range(0, length // 13 + 1):
        rest = length - 13 * b
        if rest % 4 == 0:
            return [4] * (rest // 4) + [13] * b
    return None


class StrategyBuilder:
    """Builds Theorem-style strategies against a saturated knowledge base.
    Base tables are solved on demand and cached per builder."""

    def __init__(self, kb: KnowledgeBase, solver: Solver | None = None):
        self.kb = kb
        self.solver = solver or Solver()
        self._bases: dict[tuple, BaseTableStrategy] = {}
        self._certs: dict[int, TailCertificate | None] = {}

    def base(self, width: int, length: int, player: Player,
             role: Role | None = None) -> BaseTableStrategy:
        key = (width, length, player, role)
        if key not in self._bases:
            self._bases[key] = build_base_strategy(
                rect(width, length), player, self.solver, role=role
            )
        return self._bases[key]

    def certificate(self, width: int) -> TailCertificate | None:
        if width not in self._certs:
            self._certs[width] = tail_theorem(self.kb, width)
        return self._certs[width]

    def outcome(self, width: int, length: int) -> OutcomeSet:
        return outcome_for_length(self.kb, width, length, self.certificate(width))

    # -- width 2 --

    def _width2_h_second(self, length: int) -> Strategy:
        parts = _decompose_4_13(length)
        if parts is None:
            return ValuePlayStrategy(rect(2, length), Player.HORIZONTAL, Role.WIN_ALWAYS)
        return compose_sum([self.base(2, p, Player.HORIZONTAL) for p in parts])

    def _width2_h_always(self, length: int) -> Strategy:
        parts = _decompose_4_13(length)
        if parts is None:
            # isolated searched wins (22, 31) and their composites
            for special in (22, 31):
                rest = length - special
                if rest == 0:
                    return ValuePlayStrategy(
                        rect(2, length), Player.HORIZONTAL, Role.WIN_ALWAYS
                    )
                if rest > 0 and _decompose_4_13(rest) is not None:
                    vp = ValuePlayStrategy(
                        rect(2, special), Player.HORIZONTAL, Role.WIN_ALWAYS
                    )
                    rest_parts = [
                        self.base(2, p, Player.HORIZONTAL)
                        for p in _decompose_4_13(rest)
                    ]
                    return compose_sum([vp] + rest_parts)
            raise UnsupportedWidthError(
                f"no certified decomposition for 2x{length}"
            )
        if any(p == 4 for p in parts):
            return compose_sum([self.base(2, p, Player.HORIZONTAL) for p in parts])
        # all parts are second-player boards: pair a leading arm with them
        second = compose_sum([self.base(2, p, Player.HORIZONTAL) for p in parts])
        first = self._width2_h_first(length)
        return DualArmStrategy(first, second)

    def _width2_h_first(self, length: int) -> Strategy:
        for lead_len in (2, 3):
            rest = length - lead_len
            if rest < 0:
                continue
            rest_parts = _decompose_4_13(rest) if rest else []
            if rest_parts is None:
                continue
            lead = self.base(2, lead_len, Player.HORIZONTAL, role=Role.WIN_FIRST)
            others = [self.base(2, p, Player.HORIZONTAL) for p in rest_parts]
            return compose_sum([lead] + others)
        raise UnsupportedWidthError(f"no leading decomposition for 2x{length}")

    def _width2_v_first(self, length: int) -> Strategy:
        nonneg = frozenset({OutcomeClass.SECOND, OutcomeClass.VERTICAL})
        for m in range(0, length):
            n = length - 1 - m
            if n < m:
                break
            om = self.kb.outcome(rect_key2(m))
            on = self.kb.outcome(rect_key2(n))
            if om.members <= nonneg and on.members <= nonneg and m <= 13 and n <= 13:
                left = self.base(2, m, Player.VERTICAL) if m else None
                right = self.base(2, n, Player.VERTICAL) if n else None
                return SplitStrategy(length, m, left, right)
        raise UnsupportedWidthError(f"no certified split for 2x{length}")

    def _width2(self, length: int, player: Player, role: Role) -> Strategy:
        if role is Role.WIN_SECOND:
            if length == 13:
                return self.base(2, 13, player)
            return self._width2_h_second(length) if player is Player.HORIZONTAL else \
                self.base(2, length, player)
        if player is Player.HORIZONTAL:
            if role is Role.WIN_FIRST:
                return self._width2_h_first(length)
            return self._width2_h_always(length)
        # vertical side
        if role is Role.WIN_ALWAYS:
            return self.base(2, length, Player.VERTICAL)
        return self._width2_v_first(length)

    # -- simple tiled widths --

    def _tiled_h(self, width: int, length: int, window: list[int],
                 period: int) -> Strategy:
        """All-horizontal-win pieces: period pieces plus one window piece."""
        residue = length % period
        target = None
        for w in window:
            if w % period == residue % period and w <= length:
                target = w
                break
        if target is None:
            raise UnsupportedWidthError(f"no piece decomposition for {width}x{length}")
        pieces = [period] * ((length - target) // period) + [target]
        return compose_sum([self.base(width, p, Player.HORIZONTAL) for p in sorted(pieces)])

    def _width3(self, length: int, player: Player, role: Role) -> Strategy:
        if role is Role.WIN_ALWAYS and player is Player.HORIZONTAL:
            return self._tiled_h(3, length, [4, 5, 6, 7], 4)
        return self.base(3, length, player, role=role)

    def _width5(self, length: int, player: Player, role: Role) -> Strategy:
        if role is Role.WIN_ALWAYS and player is Player.HORIZONTAL:
            if length % 2 == 0:
                return compose_sum(
                    [self.base(5, 2, Player.HORIZONTAL)] * (length // 2)
                )
            return compose_sum(
                [self.base(5, 2, Player.HORIZONTAL)] * ((length - 5) // 2)
                + [self.base(5, 5, Player.HORIZONTAL)]
            )
        return self.base(5, length, player, role=role)

    def _width7(self, length: int, player: Player, role: Role) -> Strategy:
        if role is Role.WIN_ALWAYS and player is Player.HORIZONTAL and length % 4 == 0:
            return compose_sum(
                [self.base(7, 4, Player.HORIZONTAL)] * (length // 4)
            )
        return self.base(7, length, player, role=role)

    def _width4(self, length: int, player: Player, role: Role) -> Strategy:
        if role is Role.WIN_ALWAYS and player is Player.HORIZONTAL:
            pieces = _greedy_pieces(length, [8, 10, 12, 14, 15, 17])
            if pieces is None:
                raise UnsupportedWidthError(f"no piece decomposition for 4x{length}")
            return ValuePlayStrategy(
                rect(4, length), Player.HORIZONTAL, Role.WIN_ALWAYS,
                piece_lengths=pieces,
            )
        return self.base(4, length, player, role=role)

    def _value_width(self, width: int, length: int, player: Player,
                     role: Role) -> Strategy:
        if role is Role.WIN_ALWAYS and player is Player.HORIZONTAL:
            if width == 9:
                pieces = [2] * (length // 2) if length % 2 == 0 else \
                    [3] + [2] * ((length - 3) // 2)
            else:  # width 11: odd lengths carry one single-column piece
                pieces = [2] * (length // 2) if length % 2 == 0 else \
                    [1] + [2] * ((length - 1) // 2)
            return ValuePlayStrategy(
                rect(width, length), player, role, piece_lengths=sorted(pieces)
            )
        return self.base(width, length, player, role=role)

    def strategy_for(self, width: int, length: int,
                     winner: Player | OutcomeClass) -> Strategy:
        if width not in THEOREM_WIDTHS:
            raise UnsupportedWidthError(
                f"no strategy recipe for width {width}: supported widths are "
                f"{THEOREM_WIDTHS}"
            )
        outcomes = self.outcome(width, length)
        if not outcomes.is_singleton:
            raise OutcomeMismatchError(
                f"{width}x{length} is not solved (knowledge: {outcomes}); "
                "refusing to guess"
            )
        outcome = outcomes.single
        if isinstance(winner, Player):
            player = winner
            role = role_for(outcome, player)  # raises on a true mismatch
        else:
            if winner in (OutcomeClass.VERTICAL, OutcomeClass.HORIZONTAL):
                if winner is not outcome:
                    raise OutcomeMismatchError(
                        f"{width}x{length} has outcome {outcome.value}, not "
                        f"{winner.value}"
                    )
                player = Player.VERTICAL if winner is OutcomeClass.VERTICAL else Player.HORIZONTAL
                role = Role.WIN_ALWAYS
            else:
                if winner is not outcome:
                    raise OutcomeMismatchError(
                        f"{width}x{length} has outcome {outcome.value}, not "
                        f"{winner.value}"
                    )
                player = Player.HORIZONTAL
                role = Role.WIN_FIRST if winner is OutcomeClass.FIRST else Role.WIN_SECOND
        if width == 2:
            return self._width2(length, player, role)
        if width == 3:
            return self._width3(length, player, role)
        if width == 4:
            return self._width4(length, player, role)
        if width == 5:
            return self._width5(length, player, role)
        if width == 7:
            return self._width7(length, player, role)
        return self._value_width(width, length, player, role)


def rect_key2(length: int):
    from .facts import BoardKey

    return BoardKey(Topology.RECTANGLE, 2, length)


def _greedy_pieces(length: int, pieces: list[int]) -> list[int] | None:
    """Smallest multiset of the given piece lengths summing to length."""
    best: list[int] | None = None

    def search(remaining: int, chosen: list[int], start: int) -> None:
        nonlocal best
        if remaining == 0:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        if best is not None and len(chosen) + 1 >= len(best):
            return
        for i in range(start, len(pieces)):
            p = pieces[i]
            if p <= remaining:
                chosen.append(p)
                search(remaining - p, chosen, i)
                chosen.pop()

    search(length, [], 0)
    return sorted(best) if best is not None else None


_DEFAULT_BUILDER: StrategyBuilder | None = None


def default_builder() -> StrategyBuilder:
    global _DEFAULT_BUILDER
    if _DEFAULT_BUILDER is None:
        from .knowledge import saturate
        from .seeds import default_knowledge_base

        kb = default_knowledge_base()
        saturate(kb)
        _DEFAULT_BUILDER = StrategyBuilder(kb)
    return _DEFAULT_BUILDER


def strategy_for(width: int, length: int, winner: Player | OutcomeClass,
                 builder: StrategyBuilder | None = None) -> Strategy:
    return (builder or default_builder()).strategy_for(width, length, winner)


# ---------------------------------------------------------------------------
# Adversarial verification


def verify_vs_exhaustive(strategy: Strategy, max_cells: int = 48,
                         move_observer: Callable[[Position, Move], None] | None = None,
                         ) -> bool:
    """True iff the strategy's side makes the last move against every
    adversary line, with our side following the strategy's single move."""
    root = strategy.initial_position()
    if root.empty_count > max_cells:
        raise TooLargeError(
            f"{root.empty_count} empty cells exceeds the verification cap of {max_cells}"
        )
    adversary = strategy.player.opponent
    memo: dict[int, bool] = {}

    def adversary_turn(pos: Position) -> bool:
        cached = memo.get(pos.mask)
        if cached is not None:
            return cached
        ok = True
        for move in legal_moves(pos, adversary):
            mid = apply_move(pos, move)
            try:
                ours = strategy.reply(mid, move)
                if move_observer is not None:
                    move_observer(mid, ours)
                after = apply_move(mid, ours)
            except (NoWinningMoveError, DomineeringError):
                ok = False
                break
            if not adversary_turn(after):
                ok = False
                break
        memo[pos.mask] = ok
        return ok

    results = []
    if strategy.role.can_lead:
        first = strategy.first_move(root)
        if move_observer is not None:
            move_observer(root, first)
        results.append(adversary_turn(apply_move(root, first)))
    if strategy.role.can_follow:
        results.append(adversary_turn(root))
    return all(results)


# ---------------------------------------------------------------------------
# Play sessions and transcripts


def column_label(c: int) -> str:
    label = ""
    c += 1
    while c:
        c, rem = divmod(c - 1, 26)
        label = chr(ord("a") + rem) + label
    return label


def parse_column_label(label: str) -> int:
    value = 0
    for ch in label:
        value = value * 26 + (ord(ch) - ord("a") + 1)
    return value - 1


def cell_name(cell: tuple[int, int]) -> str:
    r, c = cell
    return f"{column_label(c)}{r + 1}"


def parse_cell_name(text: str) -> tuple[int, int]:
    text = text.strip().lower()
    i = 0
    while i < len(text) and text[i].isalpha():
        i += 1
    if i == 0 or i == len(text):
        raise ValueError(f"bad cell {text!r}: want column letters then row number")
    return (int(text[i:]) - 1, parse_column_label(text[:i]))


def move_text(move: Move) -> str:
    a, b = move.cells
    return f"{move.player.value} {cell_name(a)}:{cell_name(b)}"


def parse_move_text(text: str, player: Player | None = None) -> Move:
    parts = text.strip().split()
    if len(parts) == 2:
        player = Player(parts[0].upper())
        cells_text = parts[1]
    elif len(parts) == 1 and player is not None:
        cells_text = parts[0]
    else:
        raise ValueError(f"bad move {text!r}: want 'V a1:b1' or 'a1:b1'")
    a_text, _, b_text = cells_text.partition(":")
    if not b_text:
        raise ValueError(f"bad move {text!r}: cells must be 'a1:b1'")
    return Move(player, (parse_cell_name(a_text), parse_cell_name(b_text)))


@dataclass
class PlaySession:
    """A game in progress: the engine side follows its strategy, the other
    side supplies moves."""

    position: Position
    to_move: Player
    strategy: Strategy | None
    engine_side: Player | None
    history: list[Move] = field(default_factory=list)

    @classmethod
    def start(cls, spec_or_pos: BoardSpec | Position,
              strategy: Strategy | None = None,
              engine_side: Player | None = None,
              first_player: Player = Player.VERTICAL) -> "PlaySession":
        pos = (
            spec_or_pos
            if isinstance(spec_or_pos, Position)
            else Position.empty(spec_or_pos)
        )
        return cls(pos, first_player, strategy, engine_side)

    @property
    def finished(self) -> bool:
        return not legal_moves(self.position, self.to_move)

    @property
    def winner(self) -> Player | None:
        if not self.finished:
            return None
        return self.to_move.opponent

    def apply(self, move: Move) -> None:
        if self.finished:
            raise IllegalTurnError("game is over")
        if move.player is not self.to_move:
            raise IllegalTurnError(f"it is {self.to_move.value}'s turn")
        self.position = apply_move(self.position, move)
        self.history.append(move)
        self.to_move = self.to_move.opponent

    def engine_move(self) -> Move:
        if self.strategy is None or self.engine_side is None:
            raise StrategyError("session has no engine side")
        if self.to_move is not self.engine_side:
            raise IllegalTurnError("not the engine's turn")
        if self.history:
            move = self.strategy.reply(self.position, self.history[-1])
        else:
            move = self.strategy.first_move(self.position)
        self.apply(move)
        return move

    def transcript(self, title: str = "") -> str:
        spec = self.position.spec
        header = f"# domineering {spec}"
        if self.strategy is not None and self.engine_side is not None:
            header += f" engine={self.engine_side.value} recipe={self.strategy.describe()}"
        if title:
            header += f" {title}"
        lines = [header] + [move_text(m) for m in self.history]
        if self.finished and self.winner is not None:
            lines.append(f"# winner: {self.winner.value}")
        return "\n".join(lines) + "\n"


class IllegalTurnError(DomineeringError):
    pass
