"""Session server hosting live games over the arbiter.

HTTP JSON API plus one WebSocket per session. Every accepted action is
appended to a per-game JSON-lines event log (flushed and fsynced before the
acknowledgment) and the in-memory state is always the fold of that log, so
a restarted server resumes every match exactly where it stopped.

The server never holds plaintext boards or blinding factors: clients commit
roots and send proofs; the log mirrors the public ledger of the chain it
stands in for. Session tokens live in a sidecar file, not in the log.
"""

from __future__ import annotations

import asyncio
import base64
import binascii
import contextlib
import json
import os
import secrets
import time
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Query, WebSocket, WebSocketDisconnect

from . import arbiter
from .arbiter import ArbiterError, Phase
from .merkle import deserialize_proof, serialize_proof
from .rules import Coordinate, FleetSpec, ShotOutcome
from .simulator import MatchConfig

PLAYER_ONE = "p1"
PLAYER_TWO = "p2"


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(text: str, what: str) -> bytes:
    try:
        return base64.b64decode(text, validate=True)
    except (binascii.Error, TypeError, ValueError):
        raise HTTPException(400, f"{what} is not valid base64")


def parse_config(body: dict) -> MatchConfig:
    try:
        config = MatchConfig(
            rows=int(body.get("rows", 10)),
            cols=int(body.get("cols", 10)),
            fleet=FleetSpec(tuple(body.get("fleet", (1, 2, 3, 4, 5)))),
            timeout_ticks=int(body.get("timeout_ticks", 64)),
            deposit=int(body.get("deposit", 100)),
        )
    except (ValueError, TypeError) as exc:
        raise HTTPException(400, f"invalid config: {exc}")
    if config.deposit <= 0:
        raise HTTPException(400, "invalid config: deposit must be positive")
    if config.timeout_ticks < 1:
        raise HTTPException(400, "invalid config: timeout_ticks must be at least 1")
    try:
        config.arbiter_config()
    except ValueError as exc:
        raise HTTPException(400, f"invalid config: {exc}")
    return config


def _cell(index: int, cols: int) -> dict:
    return {"index": index, "row": index // cols, "col": index % cols}


def _target_index(value, config: MatchConfig) -> int:
    """Accept {"row","col"}, a bare index, or a label like "E5"."""
    cols = config.cols
    if isinstance(value, dict):
        try:
            coord = Coordinate(int(value["row"]), int(value["col"]))
        except (KeyError, TypeError, ValueError):
            raise HTTPException(400, "target must carry integer row and col")
        if not (0 <= coord.row < config.rows and 0 <= coord.col < cols):
            raise HTTPException(400, "target out of bounds")
        return coord.index(cols)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return Coordinate.from_label(value).index(cols)
        except (ValueError, IndexError):
            raise HTTPException(400, f"bad target label {value!r}")
    raise HTTPException(400, "unrecognized target")


def action_from_wire(body: dict, player: str, config: MatchConfig) -> arbiter.Action:
    kind = body.get("type")
    depth = config.arbiter_config().tree_depth
    if kind == "register":
        return arbiter.Register(player, int(body["deposit"]))
    if kind == "commit_root":
        return arbiter.CommitRoot(player, _unb64(body.get("root", ""), "root"))
    if kind == "first_shot":
        return arbiter.FirstShot(player, _target_index(body.get("target"), config))
    if kind == "play_turn":
        try:
            proof = deserialize_proof(_unb64(body.get("proof", ""), "proof"), depth)
        except ValueError as exc:
            raise HTTPException(400, f"malformed proof: {exc}")
        return arbiter.PlayTurn(player, proof,
                                _target_index(body.get("next_target"), config))
    if kind == "reveal_board":
        proofs = []
        for i, text in enumerate(body.get("proofs", ())):
            try:
                proofs.append(deserialize_proof(_unb64(text, f"proofs[{i}]"), depth))
            except ValueError as exc:
                raise HTTPException(400, f"malformed proof {i}: {exc}")
        return arbiter.RevealBoard(player, tuple(proofs))
    if kind == "timeout_claim":
        return arbiter.TimeoutClaim(player)
    raise HTTPException(400, f"unknown action type {kind!r}")


def action_to_wire(action: arbiter.Action) -> dict:
    match action:
        case arbiter.Register(player=p, deposit=d):
            return {"type": "register", "player": p, "deposit": d}
        case arbiter.CommitRoot(player=p, root=r):
            return {"type": "commit_root", "player": p, "root": _b64(r)}
        case arbiter.FirstShot(player=p, target=t):
            return {"type": "first_shot", "player": p, "target": t}
        case arbiter.PlayTurn(player=p, proof=proof, next_target=t):
            return {"type": "play_turn", "player": p,
                    "proof": _b64(serialize_proof(proof)), "next_target": t}
        case arbiter.RevealBoard(player=p, proofs=proofs):
            return {"type": "reveal_board", "player": p,
                    "proofs": [_b64(serialize_proof(pr)) for pr in proofs]}
        case arbiter.Tick(ticks=n):
            return {"type": "tick", "ticks": n}
        case arbiter.TimeoutClaim(player=p):
            return {"type": "timeout_claim", "player": p}
        case arbiter.Settle():
            return {"type": "settle"}
    raise TypeError(f"unknown action {action!r}")


def _action_from_log(record: dict, config: MatchConfig) -> arbiter.Action:
    """Rebuild an action from a persisted event (targets already indices)."""
    body = record["action"]
    kind = body["type"]
    if kind == "tick":
        return arbiter.Tick(body["ticks"])
    if kind == "settle":
        return arbiter.Settle()
    player = body["player"]
    if kind == "register":
        return arbiter.Register(player, body["deposit"])
    if kind == "first_shot":
        return arbiter.FirstShot(player, body["target"])
    if kind == "play_turn":
        depth = config.arbiter_config().tree_depth
        return arbiter.PlayTurn(
            player, deserialize_proof(base64.b64decode(body["proof"]), depth),
            body["next_target"])
    if kind == "reveal_board":
        depth = config.arbiter_config().tree_depth
        return arbiter.RevealBoard(player, tuple(
            deserialize_proof(base64.b64decode(t), depth) for t in body["proofs"]))
    if kind == "commit_root":
        return arbiter.CommitRoot(player, base64.b64decode(body["root"]))
    if kind == "timeout_claim":
        return arbiter.TimeoutClaim(player)
    raise ValueError(f"corrupt event log: unknown action {kind!r}")


class GameRuntime:
    """One live game: arbiter state, event log, sessions, subscribers."""

    def __init__(self, game_id: str, config: MatchConfig, data_dir: Path):
        self.game_id = game_id
        self.config = config
        self.state = arbiter.new_game(config.arbiter_config())
        self.events: list[dict] = []
        self.sessions: dict[str, str] = {}
        self.outcomes: dict[tuple[str, int], dict] = {}
        self.transfers: list[list] = []
        self.lock = asyncio.Lock()
        self.subscribers: set[asyncio.Queue] = set()
        self.log_path = data_dir / f"{game_id}.events.jsonl"
        self.sessions_path = data_dir / f"{game_id}.sessions.json"
        self._log_file = None

    # -- persistence -------------------------------------------------------

    def open_log(self):
        self._log_file = open(self.log_path, "a", encoding="utf-8")

    def append_event(self, record: dict):
        """Durably persist before anything is acknowledged or broadcast."""
        self._log_file.write(json.dumps(record, sort_keys=True) + "\n")
        self._log_file.flush()
        os.fsync(self._log_file.fileno())
        self.events.append(record)

    def save_sessions(self):
        self.sessions_path.write_text(json.dumps(self.sessions))

    def close(self):
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None

    # -- state transitions -------------------------------------------------

    @property
    def sequence(self) -> int:
        return self.events[-1]["sequence"] if self.events else 0

    def fold(self, action: arbiter.Action):
        """Apply an action, tracking shot outcomes and ledger transfers."""
        pending = self.state.pending_target
        shooter = None
        if isinstance(action, arbiter.PlayTurn) and self.state.players:
            shooter = self.state.opponent(action.player)
        new_state, effect = arbiter.apply(self.state, action)
        self.state = new_state
        if isinstance(action, arbiter.PlayTurn) and effect is not None:
            self.outcomes[(shooter, pending)] = {
                "kind": effect.kind.value, "ship_size": effect.ship_size}
        if isinstance(action, arbiter.Settle) and effect:
            self.transfers.extend([p, amount] for p, amount in effect)
        return effect

    def new_session(self, player: str) -> str:
        token = secrets.token_hex(16)
        self.sessions[token] = player
        self.save_sessions()
        return token

    # -- projections ---------------------------------------------------------

    def view_for(self, player: str) -> dict:
        state = self.state
        cols = self.config.cols
        shot_log = []
        for shooter, target in state.shot_log:
            shot_log.append({
                "shooter": shooter,
                "target": _cell(target, cols),
                "outcome": self.outcomes.get((shooter, target)),
            })
        verdict = None
        if state.verdict is not None:
            verdict = {"kind": state.verdict.kind.value,
                       "winner": state.verdict.winner,
                       "reason": state.verdict.reason.value
                       if state.verdict.reason else None}
        return {
            "game_id": self.game_id,
            "player": player,
            "sequence": self.sequence,
            "phase": state.phase.value,
            "clock": state.clock,
            "deadline": state.deadline,
            "pot": state.pot,
            "players": list(state.players),
            "deposits": dict(state.deposits),
            "first_mover": state.players[0] if state.players else None,
            "awaited": state.awaited,
            "pending_target": _cell(state.pending_target, cols)
            if state.pending_target is not None else None,
            "roots": {p: _b64(r) for p, r in state.roots.items()},
            "reveals": {p: {str(i): v for i, v in m.items()}
                        for p, m in state.reveals.items()},
            "shot_log": shot_log,
            "verdict": verdict,
            "transfers": list(self.transfers),
            "config": self.config.to_dict(),
        }

    def lobby_entry(self) -> dict:
        return {
            "game_id": self.game_id,
            "phase": self.state.phase.value,
            "players_joined": len(self.state.players),
            "joinable": self.state.phase is Phase.REGISTRATION
            and len(self.state.players) == 1,
            "deposit": self.config.deposit,
            "timeout_ticks": self.config.timeout_ticks,
        }

    def broadcast(self, record: dict):
        message = {"sequence": record["sequence"],
                   "phase": record["phase"],
                   "event": record["action"]}
        for queue in list(self.subscribers):
            queue.put_nowait(message)


class GameHost:
    """All games under one data directory; rebuilds every one of them from
    its event log at startup."""

    def __init__(self, data_dir, test_mode: bool = False,
                 tick_interval: float = 1.0):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.test_mode = test_mode
        self.tick_interval = tick_interval
        self.games: dict[str, GameRuntime] = {}
        for path in sorted(self.data_dir.glob("*.events.jsonl")):
            runtime = self._load(path)
            self.games[runtime.game_id] = runtime

    def _load(self, path: Path) -> GameRuntime:
        lines = [json.loads(line) for line in
                 path.read_text(encoding="utf-8").splitlines() if line.strip()]
        created = lines[0]
        if created.get("type") != "created":
            raise ValueError(f"corrupt event log {path}: missing creation record")
        config = MatchConfig.from_dict(created["config"])
        runtime = GameRuntime(created["game_id"], config, self.data_dir)
        for record in lines[1:]:
            runtime.fold(_action_from_log(record, config))
            runtime.events.append(record)
            if runtime.state.phase.value != record["phase"]:
                raise ValueError(
                    f"corrupt event log {path}: replay diverged at "
                    f"sequence {record['sequence']}")
        if runtime.sessions_path.exists():
            runtime.sessions = json.loads(runtime.sessions_path.read_text())
        runtime.open_log()
        return runtime

    def close(self):
        for runtime in self.games.values():
            runtime.close()

    def create_game(self, config: MatchConfig) -> GameRuntime:
        while True:
            game_id = secrets.token_hex(4)
            if game_id not in self.games:
                break
        runtime = GameRuntime(game_id, config, self.data_dir)
        runtime.open_log()
        runtime.append_event({
            "sequence": 0, "timestamp": time.time(), "type": "created",
            "game_id": game_id, "config": config.to_dict(),
        })
        self.games[game_id] = runtime
        return runtime

    def get(self, game_id: str) -> GameRuntime:
        runtime = self.games.get(game_id)
        if runtime is None:
            raise HTTPException(404, f"unknown game {game_id!r}")
        return runtime

    def authenticate(self, runtime: GameRuntime, token: str | None) -> str:
        player = runtime.sessions.get(token or "")
        if player is None:
            raise HTTPException(401, "missing or invalid session token")
        return player

    def accept(self, runtime: GameRuntime, action: arbiter.Action):
        """Apply, persist, auto-settle, broadcast. Caller holds the lock."""
        try:
            effect = runtime.fold(action)
        except ArbiterError as exc:
            raise HTTPException(400, str(exc))
        record = {
            "sequence": runtime.sequence + 1,
            "timestamp": time.time(),
            "action": action_to_wire(action),
            "phase": runtime.state.phase.value,
        }
        runtime.append_event(record)
        runtime.broadcast(record)
        if runtime.state.phase is Phase.FINISHED and not runtime.state.settled:
            transfers = runtime.fold(arbiter.Settle())
            settle_record = {
                "sequence": runtime.sequence + 1,
                "timestamp": time.time(),
                "action": {"type": "settle",
                           "transfers": [[p, a] for p, a in (transfers or [])]},
                "phase": runtime.state.phase.value,
            }
            runtime.append_event(settle_record)
            runtime.broadcast(settle_record)
        return effect


def create_app(data_dir, test_mode: bool = False,
               tick_interval: float = 1.0) -> FastAPI:
    host = GameHost(data_dir, test_mode=test_mode, tick_interval=tick_interval)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        ticker = None
        if not test_mode:
            ticker = asyncio.create_task(_drive_clocks(host))
        yield
        if ticker is not None:
            ticker.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await ticker
        host.close()

    app = FastAPI(title="fairships", lifespan=lifespan)
    app.state.host = host

    @app.post("/games")
    async def create_game(body: dict | None = None):
        config = parse_config(body or {})
        runtime = host.create_game(config)
        async with runtime.lock:
            host.accept(runtime, arbiter.Register(PLAYER_ONE, config.deposit))
            token = runtime.new_session(PLAYER_ONE)
        return {"game_id": runtime.game_id, "token": token,
                "player": PLAYER_ONE, "config": config.to_dict()}

    @app.get("/games")
    async def lobby():
        return {"games": [rt.lobby_entry() for rt in host.games.values()]}

    @app.post("/games/{game_id}/join")
    async def join_game(game_id: str):
        runtime = host.get(game_id)
        async with runtime.lock:
            if len(runtime.state.players) >= 2:
                raise HTTPException(409, "game already has two players")
            host.accept(runtime,
                        arbiter.Register(PLAYER_TWO, runtime.config.deposit))
            token = runtime.new_session(PLAYER_TWO)
        return {"game_id": game_id, "token": token, "player": PLAYER_TWO,
                "config": runtime.config.to_dict()}

    @app.post("/games/{game_id}/actions")
    async def submit_action(game_id: str, body: dict,
                            x_session_token: str | None = Header(default=None)):
        runtime = host.get(game_id)
        player = host.authenticate(runtime, x_session_token)
        if body.get("type") == "register":
            raise HTTPException(400, "registration happens via create/join")
        action = action_from_wire(body, player, runtime.config)
        async with runtime.lock:
            effect = host.accept(runtime, action)
            response = {"ok": True, "sequence": runtime.sequence,
                        "phase": runtime.state.phase.value}
            if isinstance(effect, ShotOutcome):
                response["outcome"] = {"kind": effect.kind.value,
                                       "ship_size": effect.ship_size}
            if runtime.state.verdict is not None:
                v = runtime.state.verdict
                response["verdict"] = {"kind": v.kind.value, "winner": v.winner,
                                       "reason": v.reason.value if v.reason else None}
                response["transfers"] = list(runtime.transfers)
        return response

    @app.get("/games/{game_id}/state")
    async def get_state(game_id: str,
                        x_session_token: str | None = Header(default=None)):
        runtime = host.get(game_id)
        player = host.authenticate(runtime, x_session_token)
        async with runtime.lock:
            return runtime.view_for(player)

    @app.post("/games/{game_id}/clock")
    async def advance_clock(game_id: str, body: dict):
        if not host.test_mode:
            raise HTTPException(403, "manual clock control requires test mode")
        runtime = host.get(game_id)
        ticks = int(body.get("ticks", 1))
        if ticks < 1:
            raise HTTPException(400, "ticks must be at least 1")
        async with runtime.lock:
            if runtime.state.phase is Phase.FINISHED:
                return {"ok": True, "clock": runtime.state.clock, "noop": True}
            host.accept(runtime, arbiter.Tick(ticks))
            return {"ok": True, "clock": runtime.state.clock}

    @app.websocket("/games/{game_id}/ws")
    async def game_socket(websocket: WebSocket, game_id: str,
                          token: str = Query(default="")):
        runtime = host.games.get(game_id)
        if runtime is None:
            await websocket.close(code=4404)
            return
        if token not in runtime.sessions:
            await websocket.close(code=4401)
            return
        await websocket.accept()
        queue: asyncio.Queue = asyncio.Queue()
        runtime.subscribers.add(queue)
        try:
            await websocket.send_json({
                "sequence": runtime.sequence,
                "phase": runtime.state.phase.value,
                "event": {"type": "snapshot"},
            })
            while True:
                message = await queue.get()
                await websocket.send_json(message)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            runtime.subscribers.discard(queue)

    return app


async def _drive_clocks(host: GameHost):
    """Wall-clock scheduler: one logical tick per interval per live game."""
    while True:
        await asyncio.sleep(host.tick_interval)
        for runtime in list(host.games.values()):
            if runtime.state.phase is Phase.FINISHED:
                continue
            async with runtime.lock:
                if runtime.state.phase is not Phase.FINISHED:
                    host.accept(runtime, arbiter.Tick(1))
