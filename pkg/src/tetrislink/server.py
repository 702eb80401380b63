"""HTTP + websocket game server for live matches.

Matches are held in memory keyed by id; each match serializes mutations
behind a lock, agent seats reply from a background worker, and every
state change bumps a version that websocket subscribers stream out.
The engine is the single legality oracle: the server never applies a
move the engine rejects.
"""

from __future__ import annotations

import asyncio
import os
import threading
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from .agents import Agent, make_agent
from .engine import GameState, Move, log_to_json, winner
from .shapes import BOARD_HEIGHT, BOARD_WIDTH


class Seat(BaseModel):
    kind: str  # "human" | "agent"
    name: str = ""


class CreateMatch(BaseModel):
    seats: list[Seat]
    seed: int = 0


class MoveRequest(BaseModel):
    seat: int
    templateId: int
    column: int


class MatchActor:
    def __init__(self, match_id: str, seats: list[Seat], seed: int,
                 log_dir: str | None):
        if not 2 <= len(seats) <= 4:
            raise ValueError("2 to 4 seats")
        self.id = match_id
        self.seats = seats
        self.log_dir = log_dir
        self.state = GameState(players=len(seats), seed=seed)
        self.agents: list[Agent | None] = []
        rng = np.random.default_rng(seed)
        for seat in seats:
            if seat.kind == "agent":
                self.agents.append(make_agent(seat.name or "random", rng))
            elif seat.kind == "human":
                self.agents.append(None)
            else:
                raise ValueError(f"seat kind {seat.kind!r}")
        self.lock = threading.RLock()
        self.version = 0
        self._worker: threading.Thread | None = None

    def snapshot(self) -> dict:
        with self.lock:
            state = self.state
            board = [
                [int(state.grid[r, c]) if state.grid[r, c] >= 0 else None
                 for c in range(BOARD_WIDTH)]
                for r in range(BOARD_HEIGHT)
            ]
            pieces = [
                [int(state.piece_grid[r, c]) if state.piece_grid[r, c] >= 0 else None
                 for c in range(BOARD_WIDTH)]
                for r in range(BOARD_HEIGHT)
            ]
            legal = [
                {"templateId": m.template, "column": m.column}
                for m in state.legal_moves()
            ] if not state.finished else []
            data = {
                "matchId": self.id,
                "version": self.version,
                "players": state.players,
                "board": board,
                "pieces": pieces,
                "inventories": state.inventory.tolist(),
                "scores": [int(t) for t in state.totals()],
                "current": state.current,
                "finished": state.finished,
                "legalMoves": legal,
                "seats": [s.model_dump() for s in self.seats],
            }
            if state.finished:
                data["winners"] = list(winner(state).winners)
            return data

    def submit_human_move(self, seat: int, move: Move) -> None:
        with self.lock:
            state = self.state
            if state.finished:
                raise ValueError("game is finished")
            if seat != state.current:
                raise ValueError(f"it is seat {state.current}'s turn")
            if self.agents[seat] is not None:
                raise ValueError(f"seat {seat} is not human")
            if not (0 <= move.template < 19 and 0 <= move.column < BOARD_WIDTH
                    and state.is_legal(move)):
                raise ValueError("illegal move")
            state.apply(move)
            self._bump()
        self.kick()

    def _bump(self) -> None:
        self.version += 1
        if self.state.finished and self.log_dir:
            path = Path(self.log_dir) / f"{self.id}.json"
            path.write_text(log_to_json(self.state) + "\n")

    def kick(self) -> None:
        """Run pending agent moves on a background worker."""
        with self.lock:
            if self._worker is not None and self._worker.is_alive():
                return
            self._worker = threading.Thread(target=self._agent_loop, daemon=True)
            self._worker.start()

    def _agent_loop(self) -> None:
        while True:
            with self.lock:
                state = self.state
                if state.finished:
                    return
                agent = self.agents[state.current]
                if agent is None:
                    return
                snapshot = state.copy()
            move = agent.move(snapshot)  # think off the lock
            with self.lock:
                if self.state.finished or self.agents[self.state.current] is not agent:
                    continue
                if self.state.is_legal(move):
                    self.state.apply(move)
                    self._bump()


def create_app(log_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="tetrislink server")
    matches: dict[str, MatchActor] = {}

    def get_match(match_id: str) -> MatchActor:
        match = matches.get(match_id)
        if match is None:
            raise HTTPException(status_code=404, detail="unknown match id")
        return match

    @app.post("/match")
    def create_match(req: CreateMatch):
        match_id = uuid.uuid4().hex[:12]
        try:
            match = MatchActor(match_id, req.seats, req.seed, log_dir)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))
        matches[match_id] = match
        match.kick()
        return {"matchId": match_id}

    @app.get("/match/{match_id}")
    def get_state(match_id: str):
        return get_match(match_id).snapshot()

    @app.post("/match/{match_id}/move")
    def post_move(match_id: str, req: MoveRequest):
        match = get_match(match_id)
        try:
            match.submit_human_move(req.seat, Move(req.templateId, req.column))
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))
        return {"ok": True}

    @app.get("/match/{match_id}/log")
    def get_log(match_id: str):
        match = get_match(match_id)
        with match.lock:
            if not match.state.finished:
                raise HTTPException(status_code=400, detail="match not finished")
            import json

            return json.loads(log_to_json(match.state))

    @app.websocket("/match/{match_id}/events")
    async def events(ws: WebSocket, match_id: str):
        match = matches.get(match_id)
        await ws.accept()
        if match is None:
            await ws.close(code=4004)
            return
        last = -1
        try:
            while True:
                if match.version != last:
                    snap = match.snapshot()
                    last = snap["version"]
                    await ws.send_json(snap)
                    if snap["finished"]:
                        break
                await asyncio.sleep(0.05)
        except WebSocketDisconnect:
            return

    return app


def run_server(port: int | None = None, log_dir: str | None = None) -> None:
    import uvicorn

    port = port or int(os.environ.get("PORT", "8000"))
    log_dir = log_dir or os.environ.get("LOG_DIR") or None
    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
    uvicorn.run(create_app(log_dir), host="127.0.0.1", port=port)
