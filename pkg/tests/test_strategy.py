import pytest

from domineering.board import BoardSpec, Move, Player, Position, Topology, rect
from domineering.facts import OutcomeClass
from domineering.solver import Solver, oracle_outcome
from domineering.strategy import (
    BaseTableStrategy,
    ComponentMismatchError,
    DualArmStrategy,
    MirrorStrategy,
    NoWinningMoveError,
    NotAWinError,
    OutcomeMismatchError,
    PlaySession,
    Role,
    SplitStrategy,
    TooLargeError,
    UncertifiableCompositionError,
    UnsupportedWidthError,
    build_base_strategy,
    cell_name,
    compose_sum,
    mirror_strategy,
    move_text,
    parse_cell_name,
    parse_move_text,
    strategy_for,
    value_play_move,
    verify_vs_exhaustive,
)

V, H = Player.VERTICAL, Player.HORIZONTAL


# -- base tables ----------------------------------------------------------------

def test_base_strategy_roles(solver):
    second = build_base_strategy(rect(2, 13), H, solver)
    assert second.role is Role.WIN_SECOND
    always = build_base_strategy(rect(3, 4), H, solver)
    assert always.role is Role.WIN_ALWAYS
    first = build_base_strategy(rect(2, 2), V, solver)
    assert first.role is Role.WIN_FIRST


def test_base_strategy_not_a_win(solver):
    with pytest.raises(NotAWinError):
        build_base_strategy(rect(2, 4), V, solver)


def test_base_strategy_verifies(solver):
    strategy = build_base_strategy(rect(2, 5), V, solver)
    assert verify_vs_exhaustive(strategy)


def test_corrupted_base_table_fails_verification(solver):
    strategy = build_base_strategy(rect(3, 4), H, solver)
    # replace some stored move with a wrong but legal one
    from domineering.board import apply_move, legal_moves

    corrupted = False
    for mask in sorted(strategy.table):
        pos = Position(rect(3, 4), mask)
        good = strategy.table[mask]
        for move in legal_moves(pos, H):
            if move != good and solver.wins_moving(apply_move(pos, move), V) is True:
                strategy.table[mask] = move
                corrupted = True
                break
        if corrupted:
            break
    assert corrupted, "every alternative move wins; cannot corrupt"
    assert verify_vs_exhaustive(strategy) is False


# -- composition ----------------------------------------------------------------

def test_compose_roles(builder):
    s44 = builder.base(2, 4, H)
    s13 = builder.base(2, 13, H)
    assert compose_sum([s44, s44]).role is Role.WIN_ALWAYS
    assert compose_sum([s13, s13]).role is Role.WIN_SECOND
    assert compose_sum([s44, s13]).role is Role.WIN_ALWAYS


def test_compose_two_first_parts_uncertifiable(builder):
    first = builder.base(2, 2, H, role=Role.WIN_FIRST)
    with pytest.raises(UncertifiableCompositionError):
        compose_sum([first, first])


def test_compose_width2_26_as_second(builder):
    pair = compose_sum([builder.base(2, 13, H), builder.base(2, 13, H)])
    assert pair.role is Role.WIN_SECOND
    assert pair.initial_position().spec == rect(2, 26)


def test_composition_never_crosses_boundaries(builder):
    strategy = builder.strategy_for(3, 8, H)
    boundaries = {4}  # column index where parts meet

    def observer(pos, move):
        if move.player is H:
            cols = sorted(c for _, c in move.cells)
            assert not (cols[0] < 4 <= cols[1]), f"crossed boundary: {move}"

    assert verify_vs_exhaustive(strategy, move_observer=observer)


def test_all_strategy_moves_legal(builder):
    from domineering.board import legal_moves

    strategy = builder.strategy_for(2, 14, H)

    def observer(pos, move):
        assert move in legal_moves(pos, move.player)

    assert verify_vs_exhaustive(strategy, move_observer=observer)


# -- width-2 split ----------------------------------------------------------------

def test_split_strategy_for_19(builder):
    strategy = builder.strategy_for(2, 19, V)
    assert isinstance(strategy, SplitStrategy)
    assert strategy.split_col == 5  # leftmost certified split: 19 = 5+13+1
    first = strategy.first_move(Position.empty(rect(2, 19)))
    assert first.cells == ((0, 5), (1, 5))


def test_split_strategy_verifies(builder):
    strategy = builder.strategy_for(2, 7, V)
    assert verify_vs_exhaustive(strategy)


def test_vera_wins_small_boards(builder):
    for n in (1, 5, 9):
        strategy = builder.strategy_for(2, n, V)
        assert strategy.role is Role.WIN_ALWAYS
        assert verify_vs_exhaustive(strategy)


# -- mirror -----------------------------------------------------------------------

def test_mirror_reply_is_rotation_image():
    m = MirrorStrategy(rect(4, 4))
    pos = m.initial_position()
    from domineering.board import apply_move

    move = Move(V, ((0, 0), (1, 0)))
    mid = apply_move(pos, move)
    reply = m.reply(mid, move)
    assert reply.player is H
    assert reply.cells == ((0, 7), (0, 8))  # quarter-turn image in square B


def test_mirror_pair_2x2_playout():
    # the paired position is a second-player win outright
    m = MirrorStrategy(rect(2, 2))
    assert oracle_outcome(m.initial_position()) is OutcomeClass.SECOND
    assert verify_vs_exhaustive(m)


def test_mirror_mismatch():
    with pytest.raises(ComponentMismatchError):
        mirror_strategy(rect(4, 4), rect(5, 5))
    with pytest.raises(ComponentMismatchError):
        mirror_strategy(rect(3, 4))


def test_mirror_stays_inside_squares():
    m = MirrorStrategy(rect(3, 3))

    def observer(pos, move):
        if move.player is H:
            assert all(c != 3 for _, c in move.cells)

    assert verify_vs_exhaustive(m, move_observer=observer)


# -- value play -------------------------------------------------------------------

def test_value_play_move_examples():
    move = value_play_move(Position.empty(rect(2, 5)), V)
    from domineering.board import apply_move
    from domineering.values import position_value, outcome_of_value

    after = apply_move(Position.empty(rect(2, 5)), move)
    assert outcome_of_value(position_value(after)) in (
        OutcomeClass.VERTICAL, OutcomeClass.SECOND,
    )
    with pytest.raises(NoWinningMoveError):
        value_play_move(Position.empty(rect(1, 2)), V)


def test_value_play_strategy_verifies_small(builder):
    from domineering.strategy import ValuePlayStrategy

    vp = ValuePlayStrategy(rect(2, 8), H, Role.WIN_ALWAYS)
    assert verify_vs_exhaustive(vp)


# -- recipes ------------------------------------------------------------------------

def test_strategy_for_29(builder):
    strategy = builder.strategy_for(2, 29, H)
    assert strategy.describe().count("2x4") == 4
    assert strategy.describe().count("2x13") == 1


def test_strategy_for_unsupported_width(builder):
    with pytest.raises(UnsupportedWidthError):
        builder.strategy_for(6, 100, H)
    with pytest.raises(UnsupportedWidthError):
        builder.strategy_for(8, 8, H)


def test_strategy_for_unsolved_refuses(builder):
    with pytest.raises(OutcomeMismatchError):
        builder.strategy_for(4, 19, H)
    with pytest.raises(OutcomeMismatchError):
        builder.strategy_for(4, 21, V)


def test_strategy_for_outcome_mismatch(builder):
    with pytest.raises(NotAWinError):
        builder.strategy_for(2, 4, V)
    with pytest.raises(OutcomeMismatchError):
        builder.strategy_for(2, 4, OutcomeClass.VERTICAL)


def test_strategy_for_long_boards_use_tail(builder):
    strategy = builder.strategy_for(3, 100, H)
    assert strategy.role is Role.WIN_ALWAYS
    assert strategy.describe().count("3x4") == 25


@pytest.mark.slow
def test_dual_arm_covers_both_starts(builder):
    strategy = builder.strategy_for(2, 26, H)
    assert isinstance(strategy, DualArmStrategy)
    assert verify_vs_exhaustive(strategy, max_cells=52)


def test_dual_arm_structure(builder):
    strategy = builder.strategy_for(2, 26, H)
    assert isinstance(strategy, DualArmStrategy)
    assert strategy.role is Role.WIN_ALWAYS


# -- play sessions -------------------------------------------------------------------

def test_session_engine_wins_3x10(builder):
    import random

    rng = random.Random(7)
    strategy = builder.strategy_for(3, 10, H)
    session = PlaySession.start(rect(3, 10), strategy, H)
    from domineering.board import legal_moves

    while not session.finished:
        if session.to_move is H:
            session.engine_move()
        else:
            session.apply(rng.choice(legal_moves(session.position, V)))
    assert session.winner is H
    transcript = session.transcript()
    assert transcript.startswith("# domineering rect:3x10 engine=H")
    assert "# winner: H" in transcript


def test_session_turn_enforcement(builder):
    from domineering.strategy import IllegalTurnError

    session = PlaySession.start(rect(2, 4), builder.strategy_for(2, 4, H), H)
    with pytest.raises(IllegalTurnError):
        session.apply(Move(H, ((0, 0), (0, 1))))  # vertical player starts


def test_replay_history_reproduces_position(builder):
    strategy = builder.strategy_for(2, 13, OutcomeClass.SECOND)
    session = PlaySession.start(rect(2, 13), strategy, H)
    session.apply(Move(V, ((0, 0), (1, 0))))
    session.engine_move()
    replayed = Position.empty(rect(2, 13))
    from domineering.board import apply_move

    for move in session.history:
        replayed = apply_move(replayed, move)
    assert replayed == session.position


# -- coordinates ----------------------------------------------------------------------

def test_cell_names():
    assert cell_name((0, 0)) == "a1"
    assert cell_name((2, 1)) == "b3"
    assert cell_name((0, 26)) == "aa1"
    assert parse_cell_name("b3") == (2, 1)
    assert parse_cell_name("aa1") == (0, 26)


def test_move_text_round_trip():
    move = Move(V, ((0, 0), (1, 0)))
    assert move_text(move) == "V a1:a2"
    assert parse_move_text("V a1:a2") == move
    assert parse_move_text("a1:a2", player=V) == move


def test_verify_too_large(builder):
    strategy = builder.strategy_for(3, 100, H)
    with pytest.raises(TooLargeError):
        verify_vs_exhaustive(strategy)


# -- module invariants: never-lose sweep and polynomial growth ----------------

def test_never_lose_sweep(builder):
    """Every strategy the builder returns wins all adversary lines on every
    solved board with at most 26 cells in its width class."""
    from domineering.strategy import THEOREM_WIDTHS, StrategyError

    for width in THEOREM_WIDTHS:
        for length in range(1, 26 // width + 1):
            outcomes = builder.outcome(width, length)
            if not outcomes.is_singleton:
                continue
            winner = outcomes.single
            sides = {
                OutcomeClass.VERTICAL: [V],
                OutcomeClass.HORIZONTAL: [H],
                OutcomeClass.FIRST: [V, H],
                OutcomeClass.SECOND: [H],
            }[winner]
            for side in sides:
                strategy = builder.strategy_for(width, length, side)
                assert verify_vs_exhaustive(strategy, max_cells=26), (
                    f"{width}x{length} as {side.value} lost a line"
                )


def test_per_move_work_subquadratic(builder):
    """Per-move time over lengths 100..800 grows clearly slower than the
    square of the length."""
    import random
    import time as _time

    def ms_per_move(length):
        rng = random.Random(1)
        strategy = builder.strategy_for(3, length, H)
        session = PlaySession.start(rect(3, length), strategy, H)
        total, replies = 0.0, 0
        from domineering.board import legal_moves

        while not session.finished:
            if session.to_move is H:
                start = _time.monotonic()
                session.engine_move()
                total += _time.monotonic() - start
                replies += 1
            else:
                session.apply(rng.choice(legal_moves(session.position, V)))
        assert session.winner is H
        return total / replies

    times = {n: ms_per_move(n) for n in (100, 200, 400, 800)}
    ratio = times[800] / times[100]
    assert ratio < 40, f"per-move growth {ratio:.1f}x over an 8x length increase"
