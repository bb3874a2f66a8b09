"""Bounded exhaustive exploration of the arbiter machine on the miniature
2x2 board with one size-2 ship. Shared by the arbiter tests and the
acceptance suite.

Clock values are canonicalized to the remaining window (every accepted move
re-arms the deadline), which makes the reachable space finite.
"""

import random

from fairships.arbiter import (
    ArbiterError,
    ArbiterState,
    GameConfig,
    Phase,
    commit_root,
    first_shot,
    new_game,
    play_turn,
    register,
    reveal_board,
    tick,
    timeout_claim,
)
from fairships.merkle import MerkleProof, build_tree, prove_cell
from fairships.rules import FleetSpec

MINI_CONFIG = GameConfig(rows=2, cols=2, fleet=FleetSpec((2,)), move_window=2)

MINI_BOARDS = {"A": [2, 0, 2, 0], "B": [0, 2, 0, 2]}
MINI_TREES = {
    pid: build_tree(cells, rng=random.Random(f"explore:{pid}"))
    for pid, cells in MINI_BOARDS.items()
}


def _tampered(proof: MerkleProof) -> MerkleProof:
    bad = bytearray(proof.siblings[0])
    bad[-1] ^= 0x01
    return MerkleProof(proof.leaf, (bytes(bad),) + proof.siblings[1:])


def canonical(state: ArbiterState):
    remaining = max(state.deadline - state.clock, 0)
    return (
        state.phase,
        state.players,
        tuple(sorted(state.deposits.items())),
        tuple(sorted(state.roots.items())),
        tuple((p, tuple(sorted(state.reveals[p].items())))
              for p in sorted(state.reveals)),
        state.shot_log,
        state.pending_target,
        state.awaited,
        remaining,
        state.pot,
        state.verdict,
        state.settled,
    )


def legal_moves(state: ArbiterState):
    """Every distinct parameterized action the awaited side could attempt,
    as (label, thunk) pairs. Thunks raise ArbiterError on rejection."""
    moves = []
    if state.phase is Phase.REGISTRATION:
        for pid in ("A", "B"):
            if pid not in state.players:
                moves.append((f"register:{pid}",
                              lambda p=pid: register(state, p, 100)))
    elif state.phase is Phase.COMMITTING:
        for pid in state.players:
            if pid not in state.roots:
                moves.append((f"commit:{pid}",
                              lambda p=pid: commit_root(state, p, MINI_TREES[p].root)))
    elif state.phase is Phase.AWAITING_FIRST_SHOT:
        for t in range(4):
            moves.append((f"first_shot:{t}",
                          lambda t=t: first_shot(state, state.awaited, t)))
    elif state.phase is Phase.AWAITING_TURN:
        honest = prove_cell(MINI_TREES[state.awaited], state.pending_target)
        for t in range(4):
            moves.append((f"turn:{t}",
                          lambda t=t, pr=honest:
                          play_turn(state, state.awaited, pr, t)[0]))
        moves.append(("turn:fake",
                      lambda pr=_tampered(honest):
                      play_turn(state, state.awaited, pr, 0)[0]))
    elif state.phase is Phase.AWAITING_REVEAL:
        pid = state.awaited
        missing = [i for i in range(4) if i not in state.reveals[pid]]
        proofs = [prove_cell(MINI_TREES[pid], i) for i in missing]
        moves.append(("reveal:honest",
                      lambda ps=tuple(proofs): reveal_board(state, pid, ps)))
        if proofs:
            bad = (_tampered(proofs[0]),) + tuple(proofs[1:])
            moves.append(("reveal:fake",
                          lambda ps=bad: reveal_board(state, pid, ps)))
    return moves


def explore(max_states: int = 200_000):
    """BFS over every reachable state. Returns (visited count, progress
    violations). A violation is a non-finished state where the awaited side
    has no accepted move and no party can ever claim the timeout."""
    start = new_game(MINI_CONFIG)
    seen = {canonical(start)}
    frontier = [start]
    violations = []
    visited = 0

    while frontier:
        state = frontier.pop()
        visited += 1
        if visited > max_states:
            raise AssertionError("state space exploded past the bound")
        if state.phase is Phase.FINISHED:
            continue

        successors = []
        has_enabled_move = False
        for _label, thunk in legal_moves(state):
            try:
                successors.append(thunk())
                has_enabled_move = True
            except ArbiterError:
                continue

        expired = state if state.clock >= state.deadline else tick(
            state, state.deadline - state.clock)
        successors.append(expired)
        claim_possible = False
        for pid in ("A", "B"):
            try:
                successors.append(timeout_claim(expired, pid))
                claim_possible = True
            except ArbiterError:
                continue

        if not has_enabled_move and not claim_possible:
            violations.append(state)

        for nxt in successors:
            key = canonical(nxt)
            if key not in seen:
                seen.add(key)
                frontier.append(nxt)

    return visited, violations
