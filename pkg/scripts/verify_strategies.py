#!/usr/bin/env python3
"""Exhaustively verify the engine's strategies on every solved board small
enough to traverse, and time per-move work on long boards."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import random

from domineering.board import Player, Position, legal_moves, rect
from domineering.facts import OutcomeClass
from domineering.strategy import (
    PlaySession,
    StrategyError,
    default_builder,
    verify_vs_exhaustive,
)

WIDTHS = (2, 3, 4, 5, 7, 9, 11)


def verify_small(builder, max_cells: int) -> None:
    for width in WIDTHS:
        for length in range(1, max_cells // width + 1):
            outcomes = builder.outcome(width, length)
            if not outcomes.is_singleton:
                print(f"{width}x{length}: unsolved {outcomes}, skipped")
                continue
            winner = outcomes.single
            sides = {
                OutcomeClass.VERTICAL: [Player.VERTICAL],
                OutcomeClass.HORIZONTAL: [Player.HORIZONTAL],
                OutcomeClass.FIRST: [Player.VERTICAL, Player.HORIZONTAL],
                OutcomeClass.SECOND: [Player.HORIZONTAL],
            }[winner]
            for side in sides:
                start = time.monotonic()
                try:
                    strategy = builder.strategy_for(width, length, side)
                    ok = verify_vs_exhaustive(strategy, max_cells=max_cells)
                except StrategyError as exc:
                    print(f"{width}x{length} as {side.value}: build refused ({exc})")
                    continue
                status = "ok" if ok else "FAILED"
                print(
                    f"{width}x{length} as {side.value}: {status} "
                    f"({time.monotonic() - start:.1f}s, {strategy.describe()})"
                )
                assert ok


def time_per_move(builder, lengths=(100, 200, 400, 800)) -> None:
    print("\nper-move timing, width 3, horizontal engine:")
    rng = random.Random(0)
    for length in lengths:
        strategy = builder.strategy_for(3, length, Player.HORIZONTAL)
        session = PlaySession.start(rect(3, length), strategy, Player.HORIZONTAL)
        reply_time = 0.0
        replies = 0
        while not session.finished:
            if session.to_move is Player.HORIZONTAL:
                start = time.monotonic()
                session.engine_move()
                reply_time += time.monotonic() - start
                replies += 1
            else:
                moves = legal_moves(session.position, Player.VERTICAL)
                session.apply(rng.choice(moves))
        print(f"  length {length:>4}: {replies} engine moves, "
              f"{1000 * reply_time / max(replies, 1):.2f} ms/move, winner {session.winner.value}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-cells", type=int, default=26)
    parser.add_argument("--timing", action="store_true", help="run the long-board timing")
    args = parser.parse_args()
    builder = default_builder()
    verify_small(builder, args.max_cells)
    if args.timing:
        time_per_move(builder)
    return 0


if __name__ == "__main__":
    sys.exit(main())
