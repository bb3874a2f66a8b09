"""Trustless two-player Battleships: blinded Merkle board commitments,
proof-carrying turns, deadlines, and cheat arbitration."""

__version__ = "0.1.0"

from .arbiter import (
    ArbiterError,
    ArbiterState,
    CheatReason,
    GameConfig,
    Phase,
    Verdict,
    VerdictKind,
    new_game,
)
from .merkle import (
    BoardTree,
    LeafData,
    MerkleProof,
    build_tree,
    encode_leaf,
    prove_cell,
    serialize_proof,
    deserialize_proof,
    verify_proof,
)
from .rules import (
    AuditResult,
    Coordinate,
    DEFAULT_FLEET,
    FleetSpec,
    Orientation,
    Placement,
    ShotKind,
    ShotOutcome,
    audit_revealed_board,
    resolve_shot,
    total_ship_cells,
    validate_fleet,
)
from .simulator import (
    AdversaryScript,
    MatchConfig,
    MatchReport,
    find_privacy_leaks,
    measure_round_cost,
    replay,
    run_match,
)
