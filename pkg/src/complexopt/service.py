"""HTTP API: complexity lookups, pricing, and the option-exercise game.

Game sessions are held in memory behind a lock; the coin sequence is drawn
from the seed at creation and never revealed past the current time, so the
final report can deterministically replay the optimal exercise policy against
the same ticks.  Single-user desk tool: no auth, permissive CORS.
"""

from __future__ import annotations

import json
import os
import random
import secrets
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from complexopt import complexity, pricing
from complexopt.complexity import (
    DEFAULT_SEARCH_LIMIT,
    DEFAULT_TREE_LIMIT,
    ComplexityCache,
    LimitExceeded,
)
from complexopt.pricing import MarketParams, PriceTree

DEFAULT_SESSION_TIMEOUT = 3600.0


class PriceRequest(BaseModel):
    style: str
    n: int
    rate: str | float | int = 0
    p: str | float | int = 0.5
    tree: bool = False


class NewGameRequest(BaseModel):
    n: int
    rate: str | float | int = 0
    p: str | float | int = 0.5
    seed: int | None = None


class StepRequest(BaseModel):
    action: str


def _params_or_400(rate, p) -> MarketParams:
    try:
        return MarketParams(Fraction(str(rate)), Fraction(str(p)))
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@dataclass
class GameSession:
    id: str
    n: int
    params: MarketParams
    seed: int
    ticks: str  # full pre-drawn sequence, server-held
    tree: PriceTree
    revealed: int = 0
    status: str = "active"  # active | exercised | expired
    exercise_time: int | None = None
    payoff: Fraction | None = None
    last_touch: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def touch(self) -> None:
        self.last_touch = time.monotonic()

    def deficiency_now(self) -> int:
        return complexity.deficiency(self.ticks[: self.revealed]).deficiency

    def settle(self, at: int, forced: bool) -> None:
        prefix = self.ticks[:at]
        self.payoff = Fraction(complexity.deficiency(prefix).deficiency) * self.params.discount(at)
        self.exercise_time = at
        self.status = "expired" if forced else "exercised"

    def state_payload(self) -> dict:
        d = self.deficiency_now()
        exercise_value = Fraction(d) * self.params.discount(self.revealed)
        return {
            "ticks": self.ticks[: self.revealed],
            "time": self.revealed,
            "deficiency": d,
            "exercise_value": float(exercise_value),
            "steps_remaining": self.n - self.revealed,
            "status": self.status,
            "payoff": None if self.payoff is None else float(self.payoff),
            "payoff_exact": None if self.payoff is None else str(self.payoff),
            "exercise_time": self.exercise_time,
        }


class GameStore:
    """In-memory session store with idle expiry and optional file snapshots."""

    def __init__(self, timeout: float = DEFAULT_SESSION_TIMEOUT, snapshot_path: str | None = None):
        self._sessions: dict[str, GameSession] = {}
        self._lock = threading.Lock()
        self._timeout = timeout
        self._snapshot_path = snapshot_path

    def add(self, session: GameSession) -> None:
        with self._lock:
            self._prune()
            self._sessions[session.id] = session
        self.save()

    def get(self, session_id: str) -> GameSession:
        with self._lock:
            self._prune()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    def _prune(self) -> None:
        now = time.monotonic()
        stale = [k for k, s in self._sessions.items() if now - s.last_touch > self._timeout]
        for k in stale:
            del self._sessions[k]

    def save(self) -> None:
        if self._snapshot_path is None:
            return
        with self._lock:
            payload = {
                sid: {
                    "n": s.n,
                    "rate": str(s.params.rate),
                    "p": str(s.params.up_prob),
                    "seed": s.seed,
                    "revealed": s.revealed,
                    "status": s.status,
                }
                for sid, s in self._sessions.items()
            }
        tmp = f"{self._snapshot_path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        os.replace(tmp, self._snapshot_path)


def draw_ticks(n: int, up_prob: Fraction, seed: int) -> str:
    rng = random.Random(seed)
    p = float(up_prob)
    return "".join("1" if rng.random() < p else "0" for _ in range(n))


def optimal_replay(tree: PriceTree, ticks: str, params: MarketParams) -> tuple[int, Fraction]:
    """Run the exercise-at-indifference frontier over a tick sequence; returns
    (exercise time, discounted payoff)."""
    m = tree.exercise_time(ticks)
    payoff = Fraction(complexity.deficiency(ticks[:m]).deficiency) * params.discount(m)
    return m, payoff


def create_app(
    tree_limit: int = DEFAULT_TREE_LIMIT,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
    cache: ComplexityCache | None = None,
    frontend_dir: str | None = None,
    session_timeout: float = DEFAULT_SESSION_TIMEOUT,
    snapshot_path: str | None = None,
) -> FastAPI:
    app = FastAPI(title="complexopt service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = GameStore(session_timeout, snapshot_path)
    cache = cache if cache is not None else complexity.default_cache()

    @app.get("/complexity")
    def get_complexity(x: str = ""):
        try:
            bits = complexity.normalize_ticks(x)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if len(bits) > search_limit:
            raise HTTPException(status_code=413, detail=f"string longer than limit {search_limit}")
        return complexity.an_complexity(bits, cache).to_json_dict()

    @app.post("/price")
    def post_price(req: PriceRequest):
        if req.style not in ("european", "american"):
            raise HTTPException(status_code=400, detail="style must be european or american")
        if req.n < 0:
            raise HTTPException(status_code=400, detail="n must be nonnegative")
        params = _params_or_400(req.rate, req.p)
        try:
            if req.style == "european":
                value = pricing.european_price(req.n, params, cache, limit=tree_limit)
                return {
                    "style": "european",
                    "n": req.n,
                    "rate": str(params.rate),
                    "p": str(params.up_prob),
                    "value": float(value),
                    "value_exact": str(value),
                }
            tree = pricing.american_price(req.n, params, cache, limit=tree_limit)
            payload = tree.to_json_dict()
            payload["value"] = float(tree.root)
            if not req.tree:
                payload.pop("nodes")
            return payload
        except LimitExceeded as exc:
            raise HTTPException(status_code=413, detail=str(exc)) from exc

    @app.post("/game/new")
    def new_game(req: NewGameRequest):
        if req.n < 0:
            raise HTTPException(status_code=400, detail="n must be nonnegative")
        params = _params_or_400(req.rate, req.p)
        try:
            tree = pricing.american_price(req.n, params, cache, limit=tree_limit)
        except LimitExceeded as exc:
            raise HTTPException(status_code=413, detail=str(exc)) from exc
        seed = req.seed if req.seed is not None else secrets.randbits(48)
        session = GameSession(
            id=secrets.token_urlsafe(12),
            n=req.n,
            params=params,
            seed=seed,
            ticks=draw_ticks(req.n, params.up_prob, seed),
            tree=tree,
        )
        if req.n == 0:
            session.settle(0, forced=True)
        store.add(session)
        return {
            "id": session.id,
            "n": session.n,
            "rate": float(params.rate),
            "p": float(params.up_prob),
            "optimal_value": float(tree.root),
            "optimal_value_exact": str(tree.root),
            "state": session.state_payload(),
        }

    @app.get("/game/{session_id}")
    def game_state(session_id: str):
        session = store.get(session_id)
        return {
            "id": session.id,
            "n": session.n,
            "rate": float(session.params.rate),
            "p": float(session.params.up_prob),
            "optimal_value": float(session.tree.root),
            "state": session.state_payload(),
        }

    @app.post("/game/{session_id}/step")
    def game_step(session_id: str, req: StepRequest):
        if req.action not in ("hold", "exercise"):
            raise HTTPException(status_code=400, detail="action must be hold or exercise")
        session = store.get(session_id)
        with session.lock:
            if session.status != "active":
                raise HTTPException(status_code=409, detail=f"session is {session.status}")
            if req.action == "exercise":
                session.settle(session.revealed, forced=False)
            else:
                session.revealed += 1
                if session.revealed >= session.n:
                    session.revealed = session.n
                    session.settle(session.n, forced=True)
            payload = session.state_payload()
        if session.status != "active":
            store.save()
        return payload

    @app.get("/game/{session_id}/report")
    def game_report(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if session.status == "active":
                raise HTTPException(status_code=409, detail="session still active")
            opt_time, opt_payoff = optimal_replay(session.tree, session.ticks, session.params)
            return {
                "ticks": session.ticks,
                "player_payoff": float(session.payoff),
                "player_payoff_exact": str(session.payoff),
                "player_exercise_time": session.exercise_time,
                "player_settlement": session.status,
                "optimal_value": float(session.tree.root),
                "optimal_payoff": float(opt_payoff),
                "optimal_payoff_exact": str(opt_payoff),
                "optimal_exercise_time": opt_time,
            }

    if frontend_dir and os.path.isdir(frontend_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
