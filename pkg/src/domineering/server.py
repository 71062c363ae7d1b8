"""HTTP service: the who-wins atlas with derivation traces, board values,
and interactive play sessions against the engine.

Sessions persist in a JSON sidecar next to the knowledge-base file, so a
restart resumes open games.
"""

from __future__ import annotations

import json
import time
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import games
from .board import (
    BoardSpec,
    CapacityError,
    IllegalMoveError,
    Move,
    Player,
    Position,
    Topology,
    topology_from_token,
)
from .facts import BoardKey, UNKNOWN
from .knowledge import KnowledgeBase, atlas_cell, atlas_grid, explain_dict, saturate
from .seeds import default_knowledge_base
from .solver import Solver
from .strategy import (
    IllegalTurnError,
    PlaySession,
    StrategyBuilder,
    StrategyError,
    Strategy,
)
from .values import ValueLimits, value as value_or_unknown

ENGINE_MOVE_BUDGET = 5.0  # seconds; over budget returns 503, never a weak move
VALUE_CELL_LIMIT = 36


class SessionCreate(BaseModel):
    topology: str = "rect"
    width: int
    length: int
    engine_side: Optional[str] = None  # "V" | "H" | "auto" | None


class MoveBody(BaseModel):
    player: str
    cells: list[list[int]]


class _SessionState:
    def __init__(self, session_id: str, session: PlaySession, recipe: str):
        self.id = session_id
        self.session = session
        self.recipe = recipe

    def record(self) -> dict:
        s = self.session
        spec = s.position.spec
        return {
            "id": self.id,
            "topology": spec.topology.value,
            "width": spec.width,
            "length": spec.length,
            "engine_side": s.engine_side.value if s.engine_side else None,
            "recipe": self.recipe,
            "moves": [
                {"player": m.player.value, "cells": [list(c) for c in m.cells]}
                for m in s.history
            ],
            "to_move": s.to_move.value,
            "status": "finished" if s.finished else "open",
            "winner": s.winner.value if s.winner else None,
        }


def create_app(kb: KnowledgeBase | None = None, kb_path: str | None = None,
               sessions_path: str | None = None) -> FastAPI:
    if kb is None:
        if kb_path and Path(kb_path).exists():
            from .knowledge import load_kb

            kb = load_kb(kb_path)
        else:
            kb = default_knowledge_base()
        saturate(kb)
    builder = StrategyBuilder(kb)
    sidecar = Path(
        sessions_path
        if sessions_path
        else (f"{kb_path}.sessions.json" if kb_path else "domineering.sessions.json")
    )
    app = FastAPI(title="domineering atlas")
    sessions: dict[str, _SessionState] = {}

    def persist() -> None:
        payload = {sid: st.record() for sid, st in sessions.items()}
        sidecar.write_text(json.dumps(payload, indent=0))

    def build_engine(spec: BoardSpec, engine_side: str | None) -> tuple[Player | None, Strategy | None]:
        if engine_side in (None, ""):
            return None, None
        if spec.topology is not Topology.RECTANGLE:
            raise HTTPException(422, "engine play supports rectangles only")
        if engine_side == "auto":
            outcomes = builder.outcome(spec.width, spec.length)
            if not outcomes.is_singleton:
                raise HTTPException(422, f"outcome not determined: {outcomes}")
            side = (
                Player.VERTICAL
                if outcomes.single.value in ("V", "1")
                else Player.HORIZONTAL
            )
        else:
            try:
                side = Player(engine_side)
            except ValueError:
                raise HTTPException(422, f"bad engine side {engine_side!r}") from None
        try:
            strategy = builder.strategy_for(spec.width, spec.length, side)
        except StrategyError as exc:
            raise HTTPException(422, str(exc)) from None
        return side, strategy

    def restore_sessions() -> None:
        if not sidecar.exists():
            return
        try:
            payload = json.loads(sidecar.read_text())
        except json.JSONDecodeError:
            return
        for sid, rec in payload.items():
            try:
                spec = BoardSpec(
                    topology_from_token(rec["topology"]), rec["width"], rec["length"]
                )
                side, strategy = None, None
                if rec.get("engine_side"):
                    side, strategy = build_engine(spec, rec["engine_side"])
                session = PlaySession.start(spec, strategy, side)
                for m in rec.get("moves", []):
                    session.apply(
                        Move(Player(m["player"]), tuple(tuple(c) for c in m["cells"]))
                    )
                sessions[sid] = _SessionState(sid, session, rec.get("recipe", ""))
            except Exception:
                continue  # a corrupt record never blocks startup

    restore_sessions()

    def parse_key(topology: str, width: int, length: int) -> BoardKey:
        try:
            key = BoardKey(topology_from_token(topology), width, length)
        except ValueError as exc:
            raise HTTPException(404, str(exc)) from None
        if not kb.within_horizon(key):
            raise HTTPException(404, f"{key} is outside the knowledge horizon")
        return key

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/outcome")
    def outcome(topology: str = "rect", width: int = 1, length: int = 1):
        return atlas_cell(kb, parse_key(topology, width, length))

    @app.get("/atlas")
    def atlas(topology: str = "rect", max_width: int = 11, max_length: int = 32):
        topo = topology_from_token(topology)
        max_width = min(max_width, kb.width_horizon)
        max_length = min(max_length, kb.length_horizon)
        return {
            "topology": topo.value,
            "max_width": max_width,
            "max_length": max_length,
            "cells": atlas_grid(kb, topo, max_width, max_length),
        }

    @app.get("/derivation")
    def derivation(topology: str = "rect", width: int = 1, length: int = 1):
        key = parse_key(topology, width, length)
        if key not in kb.facts:
            raise HTTPException(404, f"nothing known about {key}")
        return explain_dict(kb, key)

    @app.get("/value")
    def value(topology: str = "rect", width: int = 1, length: int = 1):
        try:
            spec = BoardSpec(topology_from_token(topology), width, length)
        except (ValueError, CapacityError) as exc:
            raise HTTPException(404, str(exc)) from None
        if spec.cells > VALUE_CELL_LIMIT:
            raise HTTPException(
                422, f"{spec} exceeds the value limit of {VALUE_CELL_LIMIT} cells"
            )
        result = value_or_unknown(Position.empty(spec), limits=ValueLimits(max_time=10.0))
        if result is UNKNOWN:
            raise HTTPException(422, "value computation hit its limits")
        return {"value": games.render(result)}

    @app.post("/sessions")
    def create_session(body: SessionCreate):
        try:
            spec = BoardSpec(topology_from_token(body.topology), body.width, body.length)
        except (ValueError, CapacityError) as exc:
            raise HTTPException(422, str(exc)) from None
        side, strategy = build_engine(spec, body.engine_side)
        sid = uuid.uuid4().hex[:12]
        state = _SessionState(
            sid,
            PlaySession.start(spec, strategy, side),
            strategy.describe() if strategy else "",
        )
        sessions[sid] = state
        persist()
        return state.record()

    def get_state(session_id: str) -> _SessionState:
        state = sessions.get(session_id)
        if state is None:
            raise HTTPException(404, f"no session {session_id}")
        return state

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return get_state(session_id).record()

    @app.post("/sessions/{session_id}/moves")
    def post_move(session_id: str, body: MoveBody):
        state = get_state(session_id)
        try:
            player = Player(body.player)
            cells = tuple(tuple(int(x) for x in c) for c in body.cells)
            if len(cells) != 2:
                raise IllegalMoveError("a move names exactly two cells")
            move = Move(player, cells)
        except (ValueError, IllegalMoveError) as exc:
            raise HTTPException(400, str(exc)) from None
        try:
            state.session.apply(move)
        except IllegalTurnError as exc:
            raise HTTPException(409, str(exc)) from None
        except IllegalMoveError as exc:
            raise HTTPException(400, str(exc)) from None
        persist()
        return state.record()

    @app.post("/sessions/{session_id}/engine-move")
    def engine_move(session_id: str):
        state = get_state(session_id)
        session = state.session
        if session.strategy is None or session.engine_side is None:
            raise HTTPException(422, "session has no engine side")
        if session.finished or session.to_move is not session.engine_side:
            raise HTTPException(409, "not the engine's turn")
        start = time.monotonic()
        try:
            if session.history:
                move = session.strategy.reply(session.position, session.history[-1])
            else:
                move = session.strategy.first_move(session.position)
        except StrategyError as exc:
            raise HTTPException(422, str(exc)) from None
        if time.monotonic() - start > ENGINE_MOVE_BUDGET:
            # computation over budget: the warmed caches make a retry cheap
            raise HTTPException(
                503, "engine move exceeded its time budget; retry",
                headers={"Retry-After": "1"},
            )
        session.apply(move)
        persist()
        return state.record()

    return app
