import random

import pytest

from fairships.arbiter import (
    ArbiterError,
    CheatReason,
    GameConfig,
    Phase,
    VerdictKind,
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
from fairships.merkle import MerkleProof, build_tree, prove_cell
from fairships.rules import Coordinate, ShotKind, total_ship_cells
from explorer import explore

CONFIG = GameConfig(move_window=8)


def fresh_pair(table_cells, seed=1):
    """Registered + committed game with both players on the classic board."""
    trees = {"A": build_tree(table_cells, rng=random.Random(f"{seed}:A")),
             "B": build_tree(table_cells, rng=random.Random(f"{seed}:B"))}
    state = new_game(CONFIG)
    state = register(state, "A", 100)
    state = register(state, "B", 100)
    state = commit_root(state, "A", trees["A"].root)
    state = commit_root(state, "B", trees["B"].root)
    return state, trees


def drive_honest_match(state, trees, table_cells):
    """Both players shoot cells in index order until the machine finishes.
    Returns every intermediate state for invariant sweeps."""
    states = [state]
    state = first_shot(state, "A", 0)
    states.append(state)
    next_targets = {"A": 1, "B": 0}
    while state.phase is Phase.AWAITING_TURN:
        player = state.awaited
        proof = prove_cell(trees[player], state.pending_target)
        state, outcome = play_turn(state, player, proof, next_targets[player])
        assert outcome is not None
        next_targets[player] += 1
        states.append(state)
    return states, state


def test_registration_happy_path():
    state = new_game(CONFIG)
    state = register(state, "A", 100)
    assert state.phase is Phase.REGISTRATION and state.pot == 100
    state = register(state, "B", 100)
    assert state.phase is Phase.COMMITTING
    assert state.pot == 200
    assert state.players == ("A", "B")


def test_registration_rejects_bad_deposits():
    state = new_game(CONFIG)
    with pytest.raises(ArbiterError, match="positive"):
        register(state, "A", 0)
    state = register(state, "A", 100)
    with pytest.raises(ArbiterError, match="equal the first"):
        register(state, "B", 50)
    assert state.pot == 100  # unchanged
    with pytest.raises(ArbiterError, match="already registered"):
        register(state, "A", 100)
    full = register(state, "B", 100)
    with pytest.raises(ArbiterError, match="registration is closed"):
        register(full, "C", 100)


def test_lone_registrant_reclaims_after_lobby_expiry():
    state = register(new_game(CONFIG), "A", 100)
    state = tick(state, CONFIG.move_window)
    with pytest.raises(ArbiterError, match="lobby window expired"):
        register(state, "B", 100)
    state = timeout_claim(state, "A")
    assert state.verdict.kind is VerdictKind.TIMEOUT_FORFEIT
    assert state.verdict.winner == "A"
    _, transfers = settle(state)
    assert transfers == [("A", 100)]


def test_commit_flow_and_immutability(table_cells):
    state = new_game(CONFIG)
    state = register(state, "A", 100)
    state = register(state, "B", 100)
    tree = build_tree(table_cells, rng=random.Random("A"))
    state = commit_root(state, "A", tree.root)
    other_root = build_tree(table_cells, rng=random.Random("other")).root
    with pytest.raises(ArbiterError, match="permanent"):
        commit_root(state, "A", other_root)
    assert state.roots["A"] == tree.root  # unchanged
    state = commit_root(state, "B", other_root)
    assert state.phase is Phase.AWAITING_FIRST_SHOT
    assert state.awaited == "A"
    # once play starts, any commit attempt is out of phase
    with pytest.raises(ArbiterError, match="commit phase"):
        commit_root(state, "A", other_root)


def test_commit_after_deadline_rejected(table_cells):
    state = new_game(CONFIG)
    state = register(state, "A", 100)
    state = register(state, "B", 100)
    tree = build_tree(table_cells, rng=random.Random(0))
    state = commit_root(state, "A", tree.root)
    state = tick(state, CONFIG.move_window)
    with pytest.raises(ArbiterError, match="expired"):
        commit_root(state, "B", tree.root)
    claimed = timeout_claim(state, "A")
    assert claimed.verdict.winner == "A"
    assert claimed.verdict.reason is CheatReason.UNRESPONSIVE


def test_both_players_missing_commit_either_claims(table_cells):
    state = new_game(CONFIG)
    state = register(state, "A", 100)
    state = register(state, "B", 100)
    state = tick(state, CONFIG.move_window)
    claimed = timeout_claim(state, "B")
    assert claimed.verdict.winner == "B"


def test_first_shot_order(table_cells):
    state, _trees = fresh_pair(table_cells)
    with pytest.raises(ArbiterError, match="first registrant"):
        first_shot(state, "B", 0)
    state = first_shot(state, "A", Coordinate(4, 4))
    assert state.phase is Phase.AWAITING_TURN
    assert state.awaited == "B"
    assert state.pending_target == 44
    assert state.shot_log == (("A", 44),)


def test_play_turn_miss_and_alternation(table_cells):
    state, trees = fresh_pair(table_cells)
    empty = next(i for i, v in enumerate(table_cells) if v == 0)
    state = first_shot(state, "A", empty)
    proof = prove_cell(trees["B"], empty)
    state, outcome = play_turn(state, "B", proof, 7)
    assert outcome.kind is ShotKind.MISS and outcome.ship_size == 0
    assert state.awaited == "A" and state.pending_target == 7
    assert state.reveals["B"][empty] == 0


def test_fake_proof_ends_game_immediately(table_cells):
    state, trees = fresh_pair(table_cells)
    state = first_shot(state, "A", 3)
    proof = prove_cell(trees["B"], 3)
    bad = bytearray(proof.siblings[2])
    bad[5] ^= 0xFF
    tampered = MerkleProof(proof.leaf,
                           proof.siblings[:2] + (bytes(bad),) + proof.siblings[3:])
    state, outcome = play_turn(state, "B", tampered, 7)
    assert outcome is None
    assert state.phase is Phase.FINISHED
    assert state.verdict.kind is VerdictKind.CHEAT_PENALTY
    assert state.verdict.winner == "A"
    assert state.verdict.reason is CheatReason.FAKE_PROOF


def test_wrong_index_proof_is_fake(table_cells):
    state, trees = fresh_pair(table_cells)
    state = first_shot(state, "A", 3)
    wrong = prove_cell(trees["B"], 4)  # honest proof, wrong cell
    state, outcome = play_turn(state, "B", wrong, 7)
    assert outcome is None
    assert state.verdict.reason is CheatReason.FAKE_PROOF


def test_repeated_target_rejected_without_state_change(table_cells):
    state, trees = fresh_pair(table_cells)
    state = first_shot(state, "A", 0)
    state, _ = play_turn(state, "B", prove_cell(trees["B"], 0), 9)
    state, _ = play_turn(state, "A", prove_cell(trees["A"], 9), 1)
    before = state
    with pytest.raises(ArbiterError, match="already targeted"):
        play_turn(state, "B", prove_cell(trees["B"], 1), 9)
    assert state == before
    # a fresh target still goes through
    state, outcome = play_turn(state, "B", prove_cell(trees["B"], 1), 10)
    assert outcome is not None


def test_wrong_player_or_phase_rejected(table_cells):
    state, trees = fresh_pair(table_cells)
    with pytest.raises(ArbiterError, match="turn phase"):
        play_turn(state, "A", prove_cell(trees["A"], 0), 1)
    state = first_shot(state, "A", 0)
    with pytest.raises(ArbiterError, match="turn"):
        play_turn(state, "A", prove_cell(trees["A"], 0), 1)


def test_full_honest_match_reaches_reveal_and_win(table_cells):
    state, trees = fresh_pair(table_cells)
    states, state = drive_honest_match(state, trees, table_cells)
    assert state.phase is Phase.AWAITING_REVEAL
    # B answers A's shot k before A answers B's, so B's board is the first
    # fully sunk one and A becomes the candidate winner
    assert state.awaited == "A"
    occupied = sum(1 for v in state.reveals["B"].values() if v > 0)
    assert occupied == total_ship_cells(CONFIG.fleet)

    missing = [i for i in range(100) if i not in state.reveals["A"]]
    proofs = [prove_cell(trees["A"], i) for i in missing]
    state = reveal_board(state, "A", proofs)
    assert state.phase is Phase.FINISHED
    assert state.verdict.kind is VerdictKind.LEGITIMATE_WIN
    assert state.verdict.winner == "A"

    # invariants across the whole trajectory
    for s in states:
        assert s.pot == 200
        assert s.roots == state.roots  # roots never moved
        shooters = [p for p, _ in s.shot_log]
        assert all(a != b for a, b in zip(shooters, shooters[1:]))
        for pid in ("A", "B"):
            own = [t for p, t in s.shot_log if p == pid]
            assert len(own) == len(set(own))


def test_reveal_candidate_wins_but_wait_for_full_board(table_cells):
    state, trees = fresh_pair(table_cells)
    _, state = drive_honest_match(state, trees, table_cells)
    missing = [i for i in range(100) if i not in state.reveals["A"]]
    partial = [prove_cell(trees["A"], i) for i in missing[:-1]]
    before = state
    with pytest.raises(ArbiterError, match="incomplete"):
        reveal_board(state, "A", partial)
    assert state == before  # deadline still running, candidate may retry
    state = reveal_board(state, "A", [prove_cell(trees["A"], i) for i in missing])
    assert state.verdict.kind is VerdictKind.LEGITIMATE_WIN


def test_reveal_with_fake_proof_punished(table_cells):
    state, trees = fresh_pair(table_cells)
    _, state = drive_honest_match(state, trees, table_cells)
    missing = [i for i in range(100) if i not in state.reveals["A"]]
    proofs = [prove_cell(trees["A"], i) for i in missing]
    bad = bytearray(proofs[0].siblings[0])
    bad[0] ^= 1
    proofs[0] = MerkleProof(proofs[0].leaf,
                            (bytes(bad),) + proofs[0].siblings[1:])
    state = reveal_board(state, "A", proofs)
    assert state.verdict.kind is VerdictKind.CHEAT_PENALTY
    assert state.verdict.winner == "B"
    assert state.verdict.reason is CheatReason.FAKE_PROOF


def test_refused_reveal_claimed_as_cheat(table_cells):
    state, trees = fresh_pair(table_cells)
    _, state = drive_honest_match(state, trees, table_cells)
    assert state.phase is Phase.AWAITING_REVEAL
    with pytest.raises(ArbiterError, match="not expired"):
        timeout_claim(state, "B")
    state = tick(state, state.deadline - state.clock)
    state = timeout_claim(state, "B")
    assert state.verdict.kind is VerdictKind.CHEAT_PENALTY
    assert state.verdict.reason is CheatReason.REFUSED_REVEAL
    assert state.verdict.winner == "B"


def test_tick_is_monotone_and_never_finishes(table_cells):
    state, _ = fresh_pair(table_cells)
    s2 = tick(tick(state, 3), 4)
    assert s2.clock == state.clock + 7
    assert s2.phase is state.phase
    with pytest.raises(ArbiterError):
        tick(state, 0)


def test_deadline_rearmed_on_every_accepted_move(table_cells):
    state, trees = fresh_pair(table_cells)
    state = tick(state, 3)
    state = first_shot(state, "A", 0)
    assert state.deadline == state.clock + CONFIG.move_window
    state = tick(state, 5)
    state, _ = play_turn(state, "B", prove_cell(trees["B"], 0), 1)
    assert state.deadline == state.clock + CONFIG.move_window


def test_timeout_claim_boundaries(table_cells):
    state, _ = fresh_pair(table_cells)
    state = first_shot(state, "A", 0)
    # one tick before the deadline: too early
    state = tick(state, CONFIG.move_window - 1)
    with pytest.raises(ArbiterError, match="not expired"):
        timeout_claim(state, "A")
    state = tick(state, 1)
    # the delinquent cannot claim against themselves
    with pytest.raises(ArbiterError, match="awaited"):
        timeout_claim(state, "B")
    state = timeout_claim(state, "A")
    assert state.verdict.kind is VerdictKind.TIMEOUT_FORFEIT
    assert state.verdict.winner == "A"
    assert state.verdict.reason is CheatReason.UNRESPONSIVE


def test_settle_pays_winner_once(table_cells):
    state, trees = fresh_pair(table_cells)
    _, state = drive_honest_match(state, trees, table_cells)
    missing = [i for i in range(100) if i not in state.reveals["A"]]
    state = reveal_board(state, "A", [prove_cell(trees["A"], i) for i in missing])
    with pytest.raises(ArbiterError, match="not finished"):
        settle(new_game(CONFIG))
    state, transfers = settle(state)
    assert transfers == [("A", 200)]
    assert state.pot == 0
    state, again = settle(state)
    assert again == []
    # conservation: deposits in == transfers out
    assert sum(amount for _, amount in transfers) == 200


def test_finished_is_absorbing(table_cells):
    state, trees = fresh_pair(table_cells)
    state = first_shot(state, "A", 3)
    state, _ = play_turn(state, "B", prove_cell(trees["A"], 3), 7)  # wrong tree: fake
    assert state.phase is Phase.FINISHED
    with pytest.raises(ArbiterError):
        first_shot(state, "A", 5)
    with pytest.raises(ArbiterError):
        timeout_claim(tick(state, 100), "A")


def test_miniature_exploration_no_deadlock():
    visited, violations = explore()
    assert violations == []
    assert visited > 100  # sanity: the walk actually went somewhere
