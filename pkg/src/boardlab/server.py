"""Local HTTP + server-sent-events service for human-vs-agent play and
inspect mode.

Sessions live in memory and expire after 30 idle minutes.  Each session
serializes its mutations through one lock; agent replies are computed on a
background thread and delivered over the event channel, never inline in a
move response.  Every event carries a monotonically increasing sequence
number and the full resulting state, so replaying the channel reconstructs
the session exactly.
"""
from __future__ import annotations

import glob
import json
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .agents import Agent
from .cli import UsageError, build_agent_spec
from .core import Game, GameState
from .games import get_game

SESSION_TTL_SECONDS = 30 * 60
AGENT_KIND_MENU = {
    "any": ["random", "mc:rollouts=50", "mcts:iters=1000", "maxn:depth=2"],
    "stochastic": ["mctse:iters=1000", "expectimaxn:depth=2"],
    "nim": ["bouton"],
}


def _inspect_rng(seed: int, move_count: int) -> random.Random:
    return random.Random((seed, "inspect", move_count).__hash__())


@dataclass
class Session:
    id: str
    game: Game
    seats: list                      # "human" | "agent" per player
    agent: Optional[Agent]
    seed: int
    state: GameState
    history: list = field(default_factory=list)   # past states, oldest first
    events: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    changed: threading.Condition = field(init=False)
    chance_rng: random.Random = field(init=False)
    last_touch: float = field(default_factory=time.monotonic)
    expired: bool = False
    agent_busy: bool = False

    def __post_init__(self):
        self.changed = threading.Condition(self.lock)
        self.chance_rng = random.Random((self.seed, "chance").__hash__())

    def state_payload(self) -> dict:
        st = self.game.status(self.state)
        return {
            "cells": list(self.state.cells),
            "to_move": self.state.to_move,
            "move_count": self.state.move_count,
            "cumulative_reward": list(self.state.cumulative_reward),
            "legal_actions": [] if st.terminal else self.game.legal_actions(self.state),
            "terminal": st.terminal,
            "scores": list(st.scores) if st.terminal else None,
        }

    def push_event(self, kind: str, **extra) -> None:
        """Caller holds the lock."""
        event = {"seq": len(self.events), "type": kind, "state": self.state_payload()}
        event.update(extra)
        self.events.append(event)
        self.changed.notify_all()

    def touch(self) -> None:
        self.last_touch = time.monotonic()


class CreateSession(BaseModel):
    game: str
    seats: Optional[list] = None     # defaults: ["human"] or ["human", "agent"]
    agent: str = "random"
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    action: int
    seat: int = 0


def create_app(session_ttl: float = SESSION_TTL_SECONDS, agent_dir: str = ".") -> FastAPI:
    app = FastAPI(title="boardlab", version="0.1.0")
    # local single-user tool: let a browser UI served from any origin talk
    # to the API
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict = {}
    app.state.sessions = sessions
    app.state.session_ttl = session_ttl
    app.state.agent_dir = agent_dir

    def _get_session(session_id: str) -> Session:
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        if sess.expired or time.monotonic() - sess.last_touch > app.state.session_ttl:
            sess.expired = True
            raise HTTPException(410, f"session {session_id!r} expired")
        return sess

    def _resolve_chance(sess: Session) -> None:
        s = sess.state
        if s.is_afterstate and not sess.game.status(s).terminal:
            sess.state = sess.game.sample_chance(s, sess.chance_rng)

    def _agent_reply(sess: Session) -> None:
        """Background worker: plays agent seats until a human is to move."""
        try:
            while True:
                with sess.lock:
                    st = sess.game.status(sess.state)
                    if st.terminal or sess.seats[sess.state.to_move] != "agent":
                        sess.agent_busy = False
                        return
                    state = sess.state
                    move_index = state.move_count
                rng = random.Random((sess.seed, "agent", move_index).__hash__())
                action, _ = sess.agent.choose_action(state, rng)
                with sess.lock:
                    if sess.state is not state:  # undone/changed while thinking
                        continue
                    sess.history.append(sess.state)
                    sess.state = sess.game.apply_action(sess.state, action)
                    _resolve_chance(sess)
                    sess.push_event("agent_move", action=action, seat=state.to_move)
                    if sess.game.status(sess.state).terminal:
                        sess.push_event("terminal")
        except Exception as e:  # noqa: BLE001 — surface worker failures to clients
            with sess.lock:
                sess.agent_busy = False
                sess.push_event("error", message=str(e))

    def _kick_agent(sess: Session) -> None:
        """Caller holds the lock."""
        if sess.agent_busy:
            return
        st = sess.game.status(sess.state)
        if not st.terminal and sess.seats[sess.state.to_move] == "agent":
            sess.agent_busy = True
            threading.Thread(target=_agent_reply, args=(sess,), daemon=True).start()

    @app.get("/games")
    def list_games():
        return {
            "games": [
                {"id": "tictactoe", "players": 2, "params": {}},
                {"id": "connect4", "players": 2, "params": {}},
                {"id": "2048", "players": 1, "params": {}},
                {
                    "id": "hex",
                    "players": 2,
                    "params": {"size": {"type": "int", "min": 2, "max": 11, "default": 5}},
                    "spec": "hex-<size>",
                },
                {
                    "id": "nim",
                    "players": 2,
                    "params": {"heaps": {"type": "int list", "default": [3, 4, 5]}},
                    "spec": "nim-<h1,h2,...>",
                },
            ]
        }

    @app.get("/agents")
    def list_agents(game: str = ""):
        specs = list(AGENT_KIND_MENU["any"])
        if game:
            try:
                g = get_game(game)
            except ValueError as e:
                raise HTTPException(404, str(e))
            if g.stochastic:
                specs += AGENT_KIND_MENU["stochastic"]
            if g.spec.startswith("nim-"):
                specs += AGENT_KIND_MENU["nim"]
        files = sorted(glob.glob(f"{app.state.agent_dir}/*.gbga"))
        return {"specs": specs, "files": [f"file:{p}" for p in files]}

    @app.post("/session")
    def create_session(req: CreateSession):
        try:
            game = get_game(req.game)
        except ValueError as e:
            raise HTTPException(404, str(e))
        seats = req.seats
        if seats is None:
            seats = ["human"] if game.players == 1 else ["human", "agent"]
        if len(seats) != game.players or any(s not in ("human", "agent") for s in seats):
            raise HTTPException(422, f"seats must be {game.players} of human|agent")
        seed = req.seed if req.seed is not None else random.SystemRandom().randrange(2 ** 31)
        try:
            agent = build_agent_spec(req.agent, game, seed=seed)
        except UsageError as e:
            raise HTTPException(404, str(e))
        except RuntimeError as e:
            raise HTTPException(422, str(e))
        sess = Session(
            id=uuid.uuid4().hex,
            game=game,
            seats=list(seats),
            agent=agent,
            seed=seed,
            state=game.initial_state(random.Random((seed, "init").__hash__())),
        )
        sessions[sess.id] = sess
        with sess.lock:
            sess.push_event("state")
            _kick_agent(sess)
        return {
            "session_id": sess.id,
            "game": game.spec,
            "seats": sess.seats,
            "seed": seed,
            "state": sess.state_payload(),
        }

    @app.get("/session/{session_id}")
    def get_session(session_id: str):
        sess = _get_session(session_id)
        with sess.lock:
            sess.touch()
            return {
                "session_id": sess.id,
                "game": sess.game.spec,
                "seats": sess.seats,
                "seed": sess.seed,
                "last_seq": len(sess.events) - 1,
                "state": sess.state_payload(),
            }

    @app.post("/session/{session_id}/move")
    def post_move(session_id: str, req: MoveRequest):
        sess = _get_session(session_id)
        with sess.lock:
            sess.touch()
            st = sess.game.status(sess.state)
            if st.terminal:
                raise HTTPException(409, "game is over")
            mover = sess.state.to_move
            if sess.seats[mover] != "human" or req.seat != mover:
                raise HTTPException(409, f"not seat {req.seat}'s turn (player {mover} moves)")
            legal = sess.game.legal_actions(sess.state)
            if req.action not in legal:
                raise HTTPException(409, f"illegal action {req.action}")
            sess.history.append(sess.state)
            sess.state = sess.game.apply_action(sess.state, req.action)
            _resolve_chance(sess)
            sess.push_event("move", action=req.action, seat=mover)
            if sess.game.status(sess.state).terminal:
                sess.push_event("terminal")
            else:
                _kick_agent(sess)
            return {"state": sess.state_payload(), "last_seq": len(sess.events) - 1}

    @app.get("/session/{session_id}/inspect")
    def inspect(session_id: str):
        sess = _get_session(session_id)
        with sess.lock:
            sess.touch()
            state = sess.state
            st = sess.game.status(state)
            if st.terminal:
                return {"actions": [], "to_move": state.to_move}
        rng = _inspect_rng(sess.seed, state.move_count)
        _, estimates = sess.agent.choose_action(state, rng)
        mover = state.to_move
        values = {a: estimates[a][mover] for a in estimates}
        lo, hi = min(values.values()), max(values.values())
        payload = []
        for a in sorted(values):
            color = 0.5 if hi == lo else (values[a] - lo) / (hi - lo)
            payload.append(
                {
                    "action": a,
                    "name": sess.game.action_name(a),
                    "value": values[a],
                    "color": color,
                }
            )
        return {"actions": payload, "to_move": mover, "move_count": state.move_count}

    @app.post("/session/{session_id}/undo")
    def undo(session_id: str):
        sess = _get_session(session_id)
        with sess.lock:
            sess.touch()
            # one full round: back to the previous position where the same
            # human seat was to move
            human_seats = {p for p, s in enumerate(sess.seats) if s == "human"}
            target = None
            for i in range(len(sess.history) - 1, -1, -1):
                if sess.history[i].to_move in human_seats:
                    target = i
                    break
            if target is None:
                raise HTTPException(409, "nothing to undo")
            sess.state = sess.history[target]
            del sess.history[target:]
            sess.push_event("undo")
            return {"state": sess.state_payload(), "last_seq": len(sess.events) - 1}

    @app.get("/session/{session_id}/events")
    def events(session_id: str, request: Request, since: int = 0):
        sess = _get_session(session_id)

        def stream():
            next_seq = since
            while True:
                with sess.lock:
                    while next_seq >= len(sess.events):
                        if sess.expired:
                            yield 'event: expired\ndata: {}\n\n'
                            return
                        if not sess.changed.wait(timeout=15.0):
                            break
                    batch = sess.events[next_seq:]
                if not batch:
                    if time.monotonic() - sess.last_touch > app.state.session_ttl:
                        sess.expired = True
                        yield 'event: expired\ndata: {}\n\n'
                        return
                    yield ": keep-alive\n\n"
                    continue
                for event in batch:
                    yield f"id: {event['seq']}\ndata: {json.dumps(event)}\n\n"
                    next_seq = event["seq"] + 1

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
