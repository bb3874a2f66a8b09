"""Arbiter: the neutral rule-enforcing state machine standing in for the
paper's smart contract.

States are immutable snapshots; every accepted action returns a new state.
Rejected actions raise ArbiterError and leave the state untouched. Detected
cheats are not errors: they transition straight to a finished verdict that
awards the pot to the honest side. Deadlines expire only when the opponent
claims them, mirroring a chain where state changes only on transactions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .merkle import MerkleProof, sha256_digest, tree_depth_for, verify_proof
from .rules import (
    BOARD_COLS,
    BOARD_ROWS,
    Coordinate,
    DEFAULT_FLEET,
    FleetSpec,
    ShotKind,
    ShotOutcome,
    audit_revealed_board,
    outcome_from_reveals,
)


class ArbiterError(Exception):
    """Move rejected; the state is unchanged."""


class Phase(Enum):
    REGISTRATION = "registration"
    COMMITTING = "committing"
    AWAITING_FIRST_SHOT = "awaiting_first_shot"
    AWAITING_TURN = "awaiting_turn"
    AWAITING_REVEAL = "awaiting_reveal"
    FINISHED = "finished"


class CheatReason(Enum):
    UNRESPONSIVE = "unresponsive"
    FAKE_PROOF = "fake_proof"
    INAPPROPRIATE_PLACEMENT = "inappropriate_placement"
    REFUSED_REVEAL = "refused_reveal"


class VerdictKind(Enum):
    LEGITIMATE_WIN = "legitimate_win"
    CHEAT_PENALTY = "cheat_penalty"
    TIMEOUT_FORFEIT = "timeout_forfeit"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    winner: str
    reason: CheatReason | None = None


@dataclass(frozen=True)
class GameConfig:
    rows: int = BOARD_ROWS
    cols: int = BOARD_COLS
    fleet: FleetSpec = DEFAULT_FLEET
    move_window: int = 64  # logical ticks per move, the block-height analogue

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("board must have at least one row and column")
        if self.move_window < 1:
            raise ValueError("move window must be at least one tick")

    @property
    def board_cells(self) -> int:
        return self.rows * self.cols

    @property
    def tree_depth(self) -> int:
        return tree_depth_for(self.board_cells)


@dataclass(frozen=True)
class ArbiterState:
    config: GameConfig
    phase: Phase = Phase.REGISTRATION
    players: tuple[str, ...] = ()
    deposits: dict[str, int] = field(default_factory=dict)
    roots: dict[str, bytes] = field(default_factory=dict)
    reveals: dict[str, dict[int, int]] = field(default_factory=dict)
    shot_log: tuple[tuple[str, int], ...] = ()  # (shooter, target cell index)
    pending_target: int | None = None           # cell the awaited player must open
    awaited: str | None = None                  # player whose action is awaited
    clock: int = 0
    deadline: int = 0
    pot: int = 0
    verdict: Verdict | None = None
    settled: bool = False

    def opponent(self, player: str) -> str:
        a, b = self.players
        return b if player == a else a


def new_game(config: GameConfig = GameConfig()) -> ArbiterState:
    return ArbiterState(config=config, deadline=config.move_window)


def _require(condition, message: str):
    if not condition:
        raise ArbiterError(message)


def _finish(state: ArbiterState, verdict: Verdict, **changes) -> ArbiterState:
    return replace(state, phase=Phase.FINISHED, verdict=verdict,
                   awaited=None, pending_target=None, **changes)


def _target_index(state: ArbiterState, target) -> int:
    cfg = state.config
    if isinstance(target, Coordinate):
        _require(0 <= target.row < cfg.rows and 0 <= target.col < cfg.cols,
                 f"target {target.row},{target.col} out of bounds")
        return target.index(cfg.cols)
    _require(0 <= target < cfg.board_cells, f"target index {target} out of bounds")
    return target


def register(state: ArbiterState, player: str, deposit: int) -> ArbiterState:
    """Escrow a deposit. The second deposit must equal the first; two
    registrations open the commit phase."""
    _require(state.phase is Phase.REGISTRATION, "registration is closed")
    _require(player not in state.players, f"player {player!r} already registered")
    _require(isinstance(deposit, int) and deposit > 0, "deposit must be positive")
    if state.players:
        first = state.deposits[state.players[0]]
        _require(deposit == first, f"deposit must equal the first player's {first}")
        # an empty lobby never expires (nothing escrowed); a join must beat it
        _require(state.clock < state.deadline, "lobby window expired")
    players = state.players + (player,)
    deposits = {**state.deposits, player: deposit}
    changes = dict(players=players, deposits=deposits,
                   pot=state.pot + deposit,
                   deadline=state.clock + state.config.move_window)
    if len(players) == 2:
        changes.update(phase=Phase.COMMITTING,
                       reveals={p: {} for p in players})
    return replace(state, **changes)


def commit_root(state: ArbiterState, player: str, root: bytes) -> ArbiterState:
    """Record a player's board commitment; write-once. Both commits arm the
    first shot."""
    _require(state.phase is Phase.COMMITTING, "not in the commit phase")
    _require(player in state.players, f"player {player!r} is not registered")
    _require(player not in state.roots, "root already committed and is permanent")
    _require(isinstance(root, bytes) and len(root) == 32, "root must be 32 bytes")
    _require(state.clock < state.deadline, "commit window expired")
    roots = {**state.roots, player: root}
    changes = dict(roots=roots)
    if len(roots) == 2:
        changes.update(phase=Phase.AWAITING_FIRST_SHOT,
                       awaited=state.players[0],
                       deadline=state.clock + state.config.move_window)
    return replace(state, **changes)


def first_shot(state: ArbiterState, player: str, target) -> ArbiterState:
    """Opening shot by the first registrant; carries no proof (nothing to open)."""
    _require(state.phase is Phase.AWAITING_FIRST_SHOT, "not awaiting the first shot")
    _require(player == state.awaited, "only the first registrant opens")
    _require(state.clock < state.deadline, "move window expired")
    idx = _target_index(state, target)
    return replace(state,
                   phase=Phase.AWAITING_TURN,
                   awaited=state.opponent(player),
                   pending_target=idx,
                   shot_log=state.shot_log + ((player, idx),),
                   deadline=state.clock + state.config.move_window)


def play_turn(state: ArbiterState, player: str, proof: MerkleProof, next_target,
              hash_fn=sha256_digest) -> tuple[ArbiterState, ShotOutcome | None]:
    """Open the cell the opponent just shot and fire back.

    A proof that targets the wrong cell or fails verification ends the game
    at once in the opponent's favor. If the opened cell completes the
    player's own sunk fleet, the opponent becomes candidate winner and
    next_target is ignored.
    """
    _require(state.phase is Phase.AWAITING_TURN, "not in the turn phase")
    _require(player == state.awaited, f"not {player!r}'s turn")
    _require(state.clock < state.deadline, "move window expired")
    opponent = state.opponent(player)
    pending = state.pending_target
    if proof.cell_index != pending or not verify_proof(
            state.roots[player], proof, depth=state.config.tree_depth, hash_fn=hash_fn):
        verdict = Verdict(VerdictKind.CHEAT_PENALTY, opponent, CheatReason.FAKE_PROOF)
        return _finish(state, verdict), None

    reveals = {**state.reveals,
               player: {**state.reveals[player], pending: proof.leaf.ship_size}}
    outcome = outcome_from_reveals(reveals[player], pending, state.config.fleet)
    if outcome.kind is ShotKind.FLEET_SUNK:
        next_state = replace(state,
                             reveals=reveals,
                             phase=Phase.AWAITING_REVEAL,
                             awaited=opponent,
                             pending_target=None,
                             deadline=state.clock + state.config.move_window)
        return next_state, outcome

    idx = _target_index(state, next_target)
    _require((player, idx) not in state.shot_log,
             f"cell {idx} already targeted by {player!r}")
    next_state = replace(state,
                         reveals=reveals,
                         awaited=opponent,
                         pending_target=idx,
                         shot_log=state.shot_log + ((player, idx),),
                         deadline=state.clock + state.config.move_window)
    return next_state, outcome


def reveal_board(state: ArbiterState, player: str, proofs,
                 hash_fn=sha256_digest) -> ArbiterState:
    """Terminal audit: the candidate winner opens every not-yet-revealed cell.

    Any failing proof is punished as fake; an incomplete reveal is rejected
    (the deadline keeps running); a complete reveal is audited against the
    fleet spec and settles the verdict either way.
    """
    _require(state.phase is Phase.AWAITING_REVEAL, "no reveal is awaited")
    _require(player == state.awaited, "only the candidate winner reveals")
    _require(state.clock < state.deadline, "reveal window expired")
    cfg = state.config
    opponent = state.opponent(player)
    known = dict(state.reveals[player])
    for proof in proofs:
        idx = proof.cell_index
        if not (0 <= idx < cfg.board_cells) or not verify_proof(
                state.roots[player], proof, depth=cfg.tree_depth, hash_fn=hash_fn):
            verdict = Verdict(VerdictKind.CHEAT_PENALTY, opponent,
                              CheatReason.FAKE_PROOF)
            return _finish(state, verdict)
        known[idx] = proof.leaf.ship_size
    missing = cfg.board_cells - len(known)
    _require(missing == 0, f"reveal incomplete: {missing} cells still unopened")

    cells = [known[i] for i in range(cfg.board_cells)]
    reveals = {**state.reveals, player: known}
    result = audit_revealed_board(cells, cfg.fleet, cfg.rows, cfg.cols)
    if result.valid:
        verdict = Verdict(VerdictKind.LEGITIMATE_WIN, player)
    else:
        verdict = Verdict(VerdictKind.CHEAT_PENALTY, opponent,
                          CheatReason.INAPPROPRIATE_PLACEMENT)
    return _finish(state, verdict, reveals=reveals)


def tick(state: ArbiterState, n: int = 1) -> ArbiterState:
    """Advance the logical clock. Expiry is never automatic: a passed
    deadline only enables the opponent's timeout_claim."""
    _require(isinstance(n, int) and n >= 1, "tick count must be at least 1")
    return replace(state, clock=state.clock + n)


def _delinquents(state: ArbiterState) -> set[str]:
    if state.phase is Phase.COMMITTING:
        return {p for p in state.players if p not in state.roots}
    if state.awaited is not None:
        return {state.awaited}
    return set()


def timeout_claim(state: ArbiterState, claimant: str) -> ArbiterState:
    """Claim an expired deadline against the delinquent side; pays the pot
    to the claimant. In the reveal phase a refusal is a cheat, not a mere
    timeout."""
    _require(state.phase is not Phase.FINISHED, "game already finished")
    _require(claimant in state.players, f"player {claimant!r} is not registered")
    _require(state.clock >= state.deadline, "deadline has not expired")
    if state.phase is Phase.REGISTRATION:
        # nobody joined: the lone registrant reclaims the escrow
        verdict = Verdict(VerdictKind.TIMEOUT_FORFEIT, claimant,
                          CheatReason.UNRESPONSIVE)
        return _finish(state, verdict)
    delinquents = _delinquents(state)
    # when both players sat out the commit window, either may claim
    _require(claimant not in delinquents or delinquents == set(state.players),
             "claimant is the party whose action is awaited")
    if state.phase is Phase.AWAITING_REVEAL:
        verdict = Verdict(VerdictKind.CHEAT_PENALTY, claimant,
                          CheatReason.REFUSED_REVEAL)
    else:
        verdict = Verdict(VerdictKind.TIMEOUT_FORFEIT, claimant,
                          CheatReason.UNRESPONSIVE)
    return _finish(state, verdict)


def settle(state: ArbiterState) -> tuple[ArbiterState, list[tuple[str, int]]]:
    """Pay the entire pot to the verdict's winner. Idempotent: a second call
    returns an empty ledger."""
    _require(state.phase is Phase.FINISHED, "game is not finished")
    if state.settled:
        return state, []
    transfers = [(state.verdict.winner, state.pot)] if state.pot else []
    return replace(state, pot=0, settled=True), transfers


# --- action encoding for event-sourced replay ----------------------------

@dataclass(frozen=True)
class Register:
    player: str
    deposit: int


@dataclass(frozen=True)
class CommitRoot:
    player: str
    root: bytes


@dataclass(frozen=True)
class FirstShot:
    player: str
    target: int


@dataclass(frozen=True)
class PlayTurn:
    player: str
    proof: MerkleProof
    next_target: int


@dataclass(frozen=True)
class RevealBoard:
    player: str
    proofs: tuple[MerkleProof, ...]


@dataclass(frozen=True)
class Tick:
    ticks: int


@dataclass(frozen=True)
class TimeoutClaim:
    player: str


@dataclass(frozen=True)
class Settle:
    pass


Action = (Register | CommitRoot | FirstShot | PlayTurn | RevealBoard
          | Tick | TimeoutClaim | Settle)


def apply(state: ArbiterState, action: Action, hash_fn=sha256_digest):
    """Pure transition function (state, action) -> (state, effect). The
    effect is a ShotOutcome for turns, a transfer list for settlement,
    otherwise None."""
    match action:
        case Register(player=p, deposit=d):
            return register(state, p, d), None
        case CommitRoot(player=p, root=r):
            return commit_root(state, p, r), None
        case FirstShot(player=p, target=t):
            return first_shot(state, p, t), None
        case PlayTurn(player=p, proof=proof, next_target=t):
            return play_turn(state, p, proof, t, hash_fn=hash_fn)
        case RevealBoard(player=p, proofs=proofs):
            return reveal_board(state, p, proofs, hash_fn=hash_fn), None
        case Tick(ticks=n):
            return tick(state, n), None
        case TimeoutClaim(player=p):
            return timeout_claim(state, p), None
        case Settle():
            return settle(state)
    raise TypeError(f"unknown action {action!r}")
