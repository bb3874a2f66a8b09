"""Deterministic match runner: honest strategies, scripted cheats, and the
wire/hash cost instrumentation for a full game.

Every match is reproducible byte-for-byte from (scripts, seed, config); all
randomness is drawn from string-seeded generators, never the global state.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .arbiter import (
    ArbiterState,
    GameConfig,
    Phase,
    Verdict,
    commit_root,
    first_shot,
    new_game,
    play_turn,
    register,
    reveal_board,
    settle,
    tick,
    timeout_claim,
)
from .merkle import (
    BOARD_CELLS,
    CountingHasher,
    MerkleProof,
    build_tree,
    prove_cell,
    serialize_proof,
    verify_proof,
)
from .rules import DEFAULT_FLEET, FleetSpec, Orientation, Placement, Coordinate, \
    ShotKind, validate_fleet

SCRIPT_KINDS = ("honest", "location_changer", "bad_fleet", "unresponsive", "fake_proof")


@dataclass(frozen=True)
class AdversaryScript:
    """A player behavior: honest, or deviating in exactly one named way.

    unresponsive takes an after_turn parameter: the player registers and
    commits, then goes silent after that many turn actions.
    """

    kind: str
    after_turn: int = 2

    def __post_init__(self):
        if self.kind not in SCRIPT_KINDS:
            raise ValueError(f"unknown script kind {self.kind!r}")
        if self.after_turn < 0:
            raise ValueError("after_turn must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "AdversaryScript":
        """Parse CLI form: a kind name, optionally 'unresponsive:<k>'."""
        kind, _, param = text.partition(":")
        if param:
            return cls(kind, after_turn=int(param))
        return cls(kind)

    def encode(self) -> str:
        if self.kind == "unresponsive":
            return f"{self.kind}:{self.after_turn}"
        return self.kind


@dataclass(frozen=True)
class MatchConfig:
    rows: int = 10
    cols: int = 10
    fleet: FleetSpec = DEFAULT_FLEET
    timeout_ticks: int = 64
    deposit: int = 100

    def arbiter_config(self) -> GameConfig:
        return GameConfig(rows=self.rows, cols=self.cols, fleet=self.fleet,
                          move_window=self.timeout_ticks)

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "fleet": list(self.fleet.sizes),
                "timeout_ticks": self.timeout_ticks, "deposit": self.deposit}

    @classmethod
    def from_dict(cls, d: dict) -> "MatchConfig":
        return cls(rows=d["rows"], cols=d["cols"],
                   fleet=FleetSpec(tuple(d["fleet"])),
                   timeout_ticks=d["timeout_ticks"], deposit=d["deposit"])


@dataclass(frozen=True)
class TranscriptEntry:
    """One broadcast message as an observer on the public channel sees it."""

    sender: str
    stage: str            # commit | turn | reveal
    payload: bytes
    reveals_cell: int | None = None  # board cell this message's proof opens


@dataclass
class MatchReport:
    seed: int
    scripts: dict[str, str]
    config: dict
    verdict: dict
    turns: int
    shot_log: list
    bytes_sent: dict
    hash_invocations: int
    transfers: list
    # in-memory only, never serialized:
    transcript: list = field(default_factory=list, repr=False)
    leaf_encodings: dict = field(default_factory=dict, repr=False)
    final_state: ArbiterState | None = field(default=None, repr=False)
    state_trace: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "scripts": self.scripts, "config": self.config,
                "verdict": self.verdict, "turns": self.turns,
                "shot_log": self.shot_log, "bytes_sent": self.bytes_sent,
                "hash_invocations": self.hash_invocations,
                "transfers": self.transfers}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def random_placements(spec: FleetSpec, rng: random.Random,
                      rows: int = 10, cols: int = 10) -> list[Placement]:
    """Uniform-ish rejection sampling of a valid fleet layout."""
    for _ in range(1000):
        cells = [0] * (rows * cols)
        placements = []
        ok = True
        for size in sorted(spec.sizes, reverse=True):
            placed = False
            for _attempt in range(200):
                horizontal = rng.random() < 0.5
                if horizontal:
                    if cols < size:
                        continue
                    r = rng.randrange(rows)
                    c = rng.randrange(cols - size + 1)
                    idxs = [r * cols + c + k for k in range(size)]
                else:
                    if rows < size:
                        continue
                    r = rng.randrange(rows - size + 1)
                    c = rng.randrange(cols)
                    idxs = [(r + k) * cols + c for k in range(size)]
                if all(cells[i] == 0 for i in idxs):
                    for i in idxs:
                        cells[i] = size
                    placements.append(Placement(
                        size, Coordinate(r, c),
                        Orientation.HORIZONTAL if horizontal else Orientation.VERTICAL))
                    placed = True
                    break
            if not placed:
                ok = False
                break
        if ok:
            return placements
    raise RuntimeError("could not place the fleet (board too small?)")


class _MatchPlayer:
    """Runtime for one scripted player: board, trees, targeting state."""

    def __init__(self, pid: str, script: AdversaryScript, seed: int,
                 config: MatchConfig):
        self.pid = pid
        self.script = script
        self.config = config
        rows, cols = config.rows, config.cols

        place_rng = random.Random(f"{seed}:{pid}:placement")
        if script.kind == "bad_fleet":
            # omit the smallest ship: an under-filled board can never be
            # fully sunk, so the cheater always reaches the terminal audit
            sizes = list(config.fleet.sizes)
            sizes.remove(min(sizes))
            if sizes:
                placements = random_placements(FleetSpec(tuple(sizes)),
                                               place_rng, rows, cols)
                self.cells = validate_fleet(placements, FleetSpec(tuple(sizes)),
                                            rows, cols)
            else:
                self.cells = [0] * (rows * cols)
        else:
            placements = random_placements(config.fleet, place_rng, rows, cols)
            self.cells = validate_fleet(placements, config.fleet, rows, cols)

        self.tree = build_tree(self.cells, rng=random.Random(f"{seed}:{pid}:blinding"))
        if script.kind == "location_changer":
            # rebuild with every ship shifted one column right (wrapping)
            # right after committing; all proofs come from the new tree
            shifted = [self.cells[r * cols + (c - 1) % cols]
                       for r in range(rows) for c in range(cols)]
            self.prove_tree = build_tree(
                shifted, rng=random.Random(f"{seed}:{pid}:shifted"))
        else:
            self.prove_tree = self.tree

        rng = random.Random(f"{seed}:{pid}:targets")
        self.permutation = list(range(rows * cols))
        rng.shuffle(self.permutation)
        self.perm_pos = 0
        self.hunt: list[int] = []
        self.shots_taken: set[int] = set()
        self.turns_taken = 0

    @property
    def silent(self) -> bool:
        return (self.script.kind == "unresponsive"
                and self.turns_taken >= self.script.after_turn)

    def next_target(self) -> int | None:
        while self.hunt:
            t = self.hunt.pop()
            if t not in self.shots_taken:
                return t
        while self.perm_pos < len(self.permutation):
            t = self.permutation[self.perm_pos]
            self.perm_pos += 1
            if t not in self.shots_taken:
                return t
        return None

    def note_shot(self, target: int):
        self.shots_taken.add(target)
        self.turns_taken += 1

    def feedback(self, target: int, outcome):
        """Hunt refinement: after a hit, queue the orthogonal neighbors."""
        if outcome.kind not in (ShotKind.HIT, ShotKind.SUNK):
            return
        cols = self.config.cols
        r, c = divmod(target, cols)
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < self.config.rows and 0 <= nc < cols:
                idx = nr * cols + nc
                if idx not in self.shots_taken:
                    self.hunt.append(idx)

    def respond(self, pending: int) -> MerkleProof:
        proof = prove_cell(self.prove_tree, pending)
        if self.script.kind == "fake_proof":
            tampered = bytearray(proof.siblings[0])
            tampered[-1] ^= 0x01
            proof = MerkleProof(proof.leaf, (bytes(tampered),) + proof.siblings[1:])
        return proof

    def reveal_proofs(self, already_revealed: set[int]) -> list[MerkleProof]:
        return [prove_cell(self.prove_tree, i)
                for i in range(self.config.rows * self.config.cols)
                if i not in already_revealed]


def _expire_and_claim(state: ArbiterState, claimant: str,
                      trace: list) -> ArbiterState:
    gap = state.deadline - state.clock
    if gap > 0:
        state = tick(state, gap)
        trace.append(state)
    state = timeout_claim(state, claimant)
    trace.append(state)
    return state


def run_match(script_a: AdversaryScript, script_b: AdversaryScript, seed: int,
              config: MatchConfig = MatchConfig()) -> MatchReport:
    """Drive both players through the arbiter until a verdict; misbehavior
    never raises, it becomes the verdict."""
    if isinstance(script_a, str):
        script_a = AdversaryScript.parse(script_a)
    if isinstance(script_b, str):
        script_b = AdversaryScript.parse(script_b)

    players = {"A": _MatchPlayer("A", script_a, seed, config),
               "B": _MatchPlayer("B", script_b, seed, config)}
    counter = CountingHasher()
    transcript: list[TranscriptEntry] = []
    trace: list[ArbiterState] = []
    bytes_sent = {pid: {"commit": 0, "turn": 0, "reveal": 0} for pid in players}

    def say(pid: str, stage: str, payload: bytes, reveals_cell: int | None = None):
        transcript.append(TranscriptEntry(pid, stage, payload, reveals_cell))
        bytes_sent[pid][stage] += len(payload)

    def advance(new_state: ArbiterState) -> ArbiterState:
        trace.append(new_state)
        return new_state

    state = new_game(config.arbiter_config())
    trace.append(state)
    state = advance(register(state, "A", config.deposit))
    state = advance(register(state, "B", config.deposit))
    for pid in ("A", "B"):
        state = advance(commit_root(state, pid, players[pid].tree.root))
        say(pid, "commit", players[pid].tree.root)

    while state.phase is not Phase.FINISHED:
        actor = players[state.awaited]
        opponent_pid = state.opponent(actor.pid)

        if actor.silent:
            state = _expire_and_claim(state, opponent_pid, trace)
            continue

        if state.phase is Phase.AWAITING_FIRST_SHOT:
            target = actor.next_target()
            state = advance(first_shot(state, actor.pid, target))
            actor.note_shot(target)
            say(actor.pid, "turn", bytes([target]))

        elif state.phase is Phase.AWAITING_TURN:
            pending = state.pending_target
            proof = actor.respond(pending)
            target = actor.next_target()
            wire_target = 0 if target is None else target
            state, outcome = play_turn(state, actor.pid, proof, wire_target,
                                       hash_fn=counter)
            trace.append(state)
            say(actor.pid, "turn", serialize_proof(proof) + bytes([wire_target]),
                reveals_cell=pending)
            if outcome is None:
                continue  # fake proof: verdict already in
            players[opponent_pid].feedback(pending, outcome)
            if outcome.kind is not ShotKind.FLEET_SUNK:
                actor.note_shot(target)

        elif state.phase is Phase.AWAITING_REVEAL:
            proofs = actor.reveal_proofs(set(state.reveals[actor.pid]))
            state = advance(reveal_board(state, actor.pid, proofs, hash_fn=counter))
            for proof in proofs:
                say(actor.pid, "reveal", serialize_proof(proof),
                    reveals_cell=proof.cell_index)

    state, transfers = settle(state)
    trace.append(state)
    verdict = state.verdict
    return MatchReport(
        seed=seed,
        scripts={"A": script_a.encode(), "B": script_b.encode()},
        config=config.to_dict(),
        verdict={"kind": verdict.kind.value, "winner": verdict.winner,
                 "reason": verdict.reason.value if verdict.reason else None},
        turns=len(state.shot_log),
        shot_log=[[pid, idx] for pid, idx in state.shot_log],
        bytes_sent=bytes_sent,
        hash_invocations=counter.calls,
        transfers=[[pid, amount] for pid, amount in transfers],
        transcript=transcript,
        leaf_encodings={pid: {leaf.cell_index: leaf.encoded()
                              for leaf in p.tree.leaves[:len(p.cells)]}
                        for pid, p in players.items()},
        final_state=state,
        state_trace=trace,
    )


def replay(report, config: MatchConfig | None = None) -> MatchReport:
    """Re-run a match from its report; byte-identical output or bust."""
    d = report.to_dict() if isinstance(report, MatchReport) else dict(report)
    recorded = MatchConfig.from_dict(d["config"])
    if config is not None and config != recorded:
        raise ValueError("config mismatch: report was recorded under a different config")
    return run_match(AdversaryScript.parse(d["scripts"]["A"]),
                     AdversaryScript.parse(d["scripts"]["B"]),
                     d["seed"], recorded)


def run_sweep(script_a, script_b, seeds, config: MatchConfig = MatchConfig()):
    for seed in seeds:
        yield run_match(script_a, script_b, seed, config)


def find_privacy_leaks(report: MatchReport) -> list[tuple[str, int, int]]:
    """Search the transcript for leaf secrets visible before their reveal.

    Scans for each cell's blinding factor (the full size||blinding encoding
    contains it, so an encoding leak is caught too): its first occurrence on
    the wire must be the owner's own opening proof for that very cell, where
    it legitimately appears. Anything earlier, or in anyone else's message,
    is a leak. Returns (player, cell, transcript position) per violation.
    """
    leaks = []
    for pid, encodings in report.leaf_encodings.items():
        for cell, encoded in encodings.items():
            blinding = encoded[1:]
            for pos, entry in enumerate(report.transcript):
                if blinding in entry.payload:
                    legitimate = (entry.sender == pid
                                  and entry.stage in ("turn", "reveal")
                                  and entry.reveals_cell == cell)
                    if not legitimate:
                        leaks.append((pid, cell, pos))
                    break
    return leaks


def measure_round_cost(config: MatchConfig = MatchConfig()) -> dict:
    """Wire bytes and verifier hash counts for one honest round, measured
    from real instrumented proofs (standard 100-cell, 128-leaf game only)."""
    if config.rows * config.cols != BOARD_CELLS:
        raise ValueError("cost model is defined for the standard 100-cell board")
    rng = random.Random("cost-probe")
    placements = random_placements(config.fleet, rng, config.rows, config.cols)
    cells = validate_fleet(placements, config.fleet, config.rows, config.cols)
    tree = build_tree(cells, rng=rng)

    proof = prove_cell(tree, 0)
    wire = serialize_proof(proof)
    per_proof = CountingHasher()
    assert verify_proof(tree.root, proof, hash_fn=per_proof)

    full_reveal = CountingHasher()
    for i in range(len(cells)):
        assert verify_proof(tree.root, prove_cell(tree, i), hash_fn=full_reveal)

    return {
        "root_bytes_per_player": len(tree.root),
        "proof_wire_bytes": len(wire),
        "sibling_count": len(proof.siblings),
        "sibling_bytes": sum(len(s) for s in proof.siblings),
        "leaf_bytes": 2 + len(proof.leaf.blinding),  # size byte + length byte + blinding
        "index_bytes": 1,
        "hash_invocations_per_proof": per_proof.calls,
        "full_reveal_proofs": len(cells),
        "full_reveal_hash_invocations": full_reveal.calls,
    }
