"""Command-line interface: solve boards, print values, run the derivation,
play interactively, and serve the HTTP API."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import games
from .board import BoardSpec, Position, Player, topology_from_token
from .facts import BoardKey, UNKNOWN, provenance_to_dict
from .knowledge import (
    atlas_grid,
    atlas_text,
    explain_dict,
    fact_record,
    saturate,
    save_kb,
    tail_theorem,
)
from .seeds import apply_seeds, default_knowledge_base, load_seed_catalog
from .solver import SearchLimits, Solver
from .strategy import (
    PlaySession,
    StrategyBuilder,
    StrategyError,
    move_text,
    parse_move_text,
)
from .values import ValueLimits, value as position_value_or_unknown


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 1 on bad flags, not 2
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="domineering", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="determine who wins a board by search")
    solve.add_argument("--topology", default="rect")
    solve.add_argument("--width", type=int, required=True)
    solve.add_argument("--length", type=int, required=True)
    solve.add_argument("--max-nodes", type=int, default=SearchLimits.max_nodes)
    solve.add_argument("--max-time", type=float, default=SearchLimits.max_time)
    solve.add_argument("--machine", action="store_true",
                       help="emit a knowledge-base record line")

    value = sub.add_parser("value", help="print a board's canonical game value")
    value.add_argument("--topology", default="rect")
    value.add_argument("--width", type=int, required=True)
    value.add_argument("--length", type=int, required=True)
    value.add_argument("--sum", type=int, default=1, dest="copies",
                       help="number of copies to add together")
    value.add_argument("--compare", default=None,
                       help="verdict for e.g. '<-1/2', '<=0', '=0', '>1', '||0'")
    value.add_argument("--max-time", type=float, default=ValueLimits.max_time)

    derive = sub.add_parser("derive", help="saturate the rule engine over seeds")
    derive.add_argument("--seeds", default=None, help="seed catalog file (JSONL)")
    derive.add_argument("--horizon", type=int, default=64, help="max length per width")
    derive.add_argument("--emit", choices=["atlas", "traces", "kb"], default="atlas")
    derive.add_argument("--key", default=None, help="board key for traces, e.g. rect:2x26")
    derive.add_argument("--topology", default="rect", help="topology for atlas output")
    derive.add_argument("--max-width", type=int, default=11)
    derive.add_argument("--machine", action="store_true")
    derive.add_argument("--out", default=None, help="output file (default stdout)")

    play = sub.add_parser("play", help="play against the engine in the terminal")
    play.add_argument("--topology", default="rect")
    play.add_argument("--width", type=int, required=True)
    play.add_argument("--length", type=int, required=True)
    play.add_argument("--engine-side", default="auto", choices=["V", "H", "auto"])
    play.add_argument("--transcript", default=None, help="file for the move list")

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--kb", default=None, help="knowledge-base file to load")

    return parser


def cmd_solve(args) -> int:
    spec = BoardSpec(topology_from_token(args.topology), args.width, args.length)
    limits = SearchLimits(max_nodes=args.max_nodes, max_time=args.max_time)
    solver = Solver(limits)
    fact, result = solver.solve(spec)
    if fact is None:
        print("unknown (limits hit)")
        return 2
    if args.machine:
        record = {
            "type": "fact",
            "topology": spec.topology.value,
            "width": spec.width,
            "length": spec.length,
            "outcomes": fact.outcomes.tokens(),
            "provenance": provenance_to_dict(fact.provenance),
        }
        print(json.dumps(record))
    else:
        names = {"V": "V", "H": "H", "1": "1st", "2": "2nd"}
        print(f"{names[result.outcome.value]} (searched, {result.nodes_visited} nodes, "
              f"{result.elapsed:.2f}s)")
    return 0


_COMPARE_OPS = ("<=", ">=", "==", "<", ">", "=", "||")


def _parse_comparison(expr: str):
    expr = expr.strip()
    for op in _COMPARE_OPS:
        if expr.startswith(op):
            return op, games.parse(expr[len(op):])
    raise _CliError(f"bad comparison {expr!r}: start with one of {_COMPARE_OPS}")


def cmd_value(args) -> int:
    spec = BoardSpec(topology_from_token(args.topology), args.width, args.length)
    limits = ValueLimits(max_time=args.max_time)
    result = position_value_or_unknown(Position.empty(spec), limits=limits)
    if result is UNKNOWN:
        print("unknown (limits hit)")
        return 2
    total = result
    for _ in range(args.copies - 1):
        total = games.add(total, result)
    print(games.render(total))
    if args.compare:
        op, rhs = _parse_comparison(args.compare)
        cmp = games.compare(total, rhs)
        verdict = {
            "<": cmp is games.Comparison.LESS,
            "<=": cmp in (games.Comparison.LESS, games.Comparison.EQUAL),
            ">": cmp is games.Comparison.GREATER,
            ">=": cmp in (games.Comparison.GREATER, games.Comparison.EQUAL),
            "=": cmp is games.Comparison.EQUAL,
            "==": cmp is games.Comparison.EQUAL,
            "||": cmp is games.Comparison.CONFUSED,
        }[op]
        print("true" if verdict else "false")
    return 0


def cmd_derive(args) -> int:
    from .knowledge import KnowledgeBase

    kb = KnowledgeBase(length_horizon=args.horizon)
    apply_seeds(kb, load_seed_catalog(args.seeds))
    report = saturate(kb)
    print(report.summary(), file=sys.stderr)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if args.emit == "kb":
            if args.out:
                out.close()
                save_kb(kb, args.out)
            else:
                for key in sorted(kb.facts):
                    out.write(json.dumps(fact_record(kb, key)) + "\n")
        elif args.emit == "atlas":
            topo = topology_from_token(args.topology)
            if args.machine:
                out.write(json.dumps(
                    {"topology": topo.value,
                     "cells": atlas_grid(kb, topo, args.max_width, args.horizon)}
                ) + "\n")
            else:
                out.write(atlas_text(kb, topo, args.max_width, min(args.horizon, 40)) + "\n")
                for width in (2, 3, 4, 5, 7, 9, 11):
                    cert = tail_theorem(kb, width)
                    if cert:
                        out.write(f"# width {width}: H for all lengths >= {cert.start} "
                                  f"(window of {cert.period})\n")
        else:  # traces
            if not args.key:
                raise _CliError("--emit traces requires --key, e.g. --key rect:2x26")
            key = BoardKey.parse(args.key)
            out.write(json.dumps(explain_dict(kb, key), indent=2) + "\n")
    finally:
        if args.out and not out.closed:
            out.close()
    return 0


def cmd_play(args) -> int:
    spec = BoardSpec(topology_from_token(args.topology), args.width, args.length)
    if spec.topology.value != "rect":
        print("interactive play supports rectangles only", file=sys.stderr)
        return 1
    from .strategy import default_builder

    builder = default_builder()
    if args.engine_side == "auto":
        outcomes = builder.outcome(spec.width, spec.length)
        if not outcomes.is_singleton:
            print(f"cannot pick a side: outcome not determined ({outcomes})",
                  file=sys.stderr)
            return 1
        single = outcomes.single.value
        engine_side = Player.VERTICAL if single in ("V", "1") else Player.HORIZONTAL
    else:
        engine_side = Player(args.engine_side)
    try:
        strategy = builder.strategy_for(spec.width, spec.length, engine_side)
    except StrategyError as exc:
        print(f"refusing to play: {exc}", file=sys.stderr)
        return 1
    session = PlaySession.start(spec, strategy, engine_side)
    human = engine_side.opponent
    print(f"you play {human.value}; engine plays {engine_side.value} "
          f"({strategy.describe()})")
    while not session.finished:
        if session.to_move is engine_side:
            move = session.engine_move()
            print(f"engine: {move_text(move)}")
        else:
            print(session.position)
            line = input(f"{human.value} move (e.g. a1:a2, 'resign'): ").strip()
            if line.lower() in ("resign", "quit"):
                print(f"winner: {engine_side.value}")
                break
            try:
                move = parse_move_text(line, player=human)
                session.apply(move)
            except Exception as exc:
                print(f"illegal move: {exc}")
                continue
    else:
        print(f"winner: {session.winner.value}")
    if args.transcript:
        Path(args.transcript).write_text(session.transcript())
        print(f"transcript written to {args.transcript}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(kb_path=args.kb)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "solve": cmd_solve,
    "value": cmd_value,
    "derive": cmd_derive,
    "play": cmd_play,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
