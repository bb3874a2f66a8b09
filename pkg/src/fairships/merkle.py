"""Blinded Merkle commitments over board layouts.

A board commits as a full binary tree: one leaf per cell (a ship-size byte
concatenated with a random blinding factor) plus unblinded zero padding
leaves up to the next power of two. A cell is later opened with the classic
sibling path, verified by folding the leaf digest up to the committed root.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass

DIGEST_BYTES = 32
BLINDING_BYTES = 16        # 128-bit floor, configurable upward
MIN_BLINDING_BYTES = 16
MAX_SHIP_SIZE = 5

BOARD_CELLS = 100          # standard 10x10 game
TREE_LEAVES = 128          # padded to 2**7
TREE_DEPTH = 7

_LEAF_PREFIX = b"\x00"     # domain separation: leaf vs internal node
_NODE_PREFIX = b"\x01"
PADDING_LEAF = b"\x00"


def sha256_digest(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


class CountingHasher:
    """Digest function wrapper that counts invocations (verifier cost metering)."""

    def __init__(self, fn=sha256_digest):
        self.fn = fn
        self.calls = 0

    def __call__(self, data: bytes) -> bytes:
        self.calls += 1
        return self.fn(data)


@dataclass(frozen=True)
class LeafData:
    """One cell's committed content. Padding leaves (beyond the board) carry
    no blinding factor and always hold ship_size 0."""

    cell_index: int
    ship_size: int
    blinding: bytes | None

    def encoded(self) -> bytes:
        return encode_leaf(self.ship_size, self.blinding)


@dataclass(frozen=True)
class MerkleProof:
    leaf: LeafData
    siblings: tuple[bytes, ...]  # ordered leaf-to-root

    @property
    def cell_index(self) -> int:
        return self.leaf.cell_index


@dataclass(frozen=True)
class BoardTree:
    leaves: tuple[LeafData, ...]
    levels: tuple[tuple[bytes, ...], ...]  # levels[0] = leaf digests, levels[-1] = (root,)
    board_cells: int

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def encode_leaf(ship_size: int, blinding: bytes | None = None) -> bytes:
    """Leaf payload: one ship-size byte followed by the blinding factor.

    Padding leaves carry no secret and encode as the bare 0x00 byte.
    """
    if not 0 <= ship_size <= MAX_SHIP_SIZE:
        raise ValueError(f"ship size {ship_size} outside 0..{MAX_SHIP_SIZE}")
    if blinding is None:
        if ship_size != 0:
            raise ValueError("only empty padding leaves may omit the blinding factor")
        return PADDING_LEAF
    if len(blinding) < MIN_BLINDING_BYTES:
        raise ValueError(f"blinding factor shorter than {MIN_BLINDING_BYTES} bytes")
    return bytes([ship_size]) + blinding


def leaf_digest(leaf_bytes: bytes, hash_fn=sha256_digest) -> bytes:
    return hash_fn(_LEAF_PREFIX + leaf_bytes)


def node_digest(left: bytes, right: bytes, hash_fn=sha256_digest) -> bytes:
    return hash_fn(_NODE_PREFIX + left + right)


def tree_depth_for(cell_count: int) -> int:
    """Depth of the full binary tree covering cell_count leaves (100 -> 7)."""
    if cell_count < 1:
        raise ValueError("board must have at least one cell")
    return max(1, (cell_count - 1).bit_length())


def build_tree(cells, rng=None, hash_fn=sha256_digest,
               blinding_bytes: int = BLINDING_BYTES) -> BoardTree:
    """Commit a board: one blinded leaf per cell in row-major order, zero
    padding leaves up to the next power of two.

    rng needs a randbytes(n) method; pass random.Random(seed) for a
    reproducible tree, default is the OS entropy pool.
    """
    cells = list(cells)
    if not cells:
        raise ValueError("board must have at least one cell")
    for i, v in enumerate(cells):
        if not 0 <= v <= MAX_SHIP_SIZE:
            raise ValueError(f"cell {i} value {v} outside 0..{MAX_SHIP_SIZE}")
    if blinding_bytes < MIN_BLINDING_BYTES:
        raise ValueError(f"blinding length below the {MIN_BLINDING_BYTES}-byte floor")
    randbytes = rng.randbytes if rng is not None else secrets.token_bytes

    depth = tree_depth_for(len(cells))
    width = 1 << depth
    leaves = [LeafData(i, v, randbytes(blinding_bytes)) for i, v in enumerate(cells)]
    leaves += [LeafData(i, 0, None) for i in range(len(cells), width)]

    level = [leaf_digest(leaf.encoded(), hash_fn) for leaf in leaves]
    levels = [tuple(level)]
    while len(level) > 1:
        level = [node_digest(level[i], level[i + 1], hash_fn)
                 for i in range(0, len(level), 2)]
        levels.append(tuple(level))
    return BoardTree(tuple(leaves), tuple(levels), len(cells))


def prove_cell(tree: BoardTree, cell_index: int) -> MerkleProof:
    """Authentication path for one board cell (padding cells are not provable)."""
    if not 0 <= cell_index < tree.board_cells:
        raise IndexError(f"cell index {cell_index} outside 0..{tree.board_cells - 1}")
    siblings = []
    idx = cell_index
    for level in tree.levels[:-1]:
        siblings.append(level[idx ^ 1])
        idx >>= 1
    return MerkleProof(tree.leaves[cell_index], tuple(siblings))


def verify_proof(root: bytes, proof: MerkleProof, depth: int = TREE_DEPTH,
                 hash_fn=sha256_digest) -> bool:
    """True iff folding the leaf digest up the sibling path reproduces root.

    Left/right order at each level comes from the cell index bits, least
    significant bit = deepest level. Malformed proofs return False, never raise.
    """
    if len(proof.siblings) != depth:
        return False
    idx = proof.cell_index
    if not 0 <= idx < (1 << depth):
        return False
    try:
        acc = leaf_digest(proof.leaf.encoded(), hash_fn)
    except ValueError:
        return False
    for sibling in proof.siblings:
        if len(sibling) != DIGEST_BYTES:
            return False
        if idx & 1:
            acc = node_digest(sibling, acc, hash_fn)
        else:
            acc = node_digest(acc, sibling, hash_fn)
        idx >>= 1
    return acc == root


def serialize_proof(proof: MerkleProof) -> bytes:
    """Canonical wire form: cell index, ship size, blinding length, blinding
    bytes, then the sibling digests leaf-to-root. Big-endian single bytes."""
    leaf = proof.leaf
    blinding = leaf.blinding or b""
    if not 0 <= leaf.cell_index <= 0xFF:
        raise ValueError("cell index does not fit one byte")
    if not 0 <= leaf.ship_size <= 0xFF:
        raise ValueError("ship size does not fit one byte")
    if len(blinding) > 0xFF:
        raise ValueError("blinding factor does not fit one length byte")
    return (bytes([leaf.cell_index, leaf.ship_size, len(blinding)])
            + blinding
            + b"".join(proof.siblings))


def deserialize_proof(data: bytes, depth: int = TREE_DEPTH) -> MerkleProof:
    if len(data) < 3:
        raise ValueError("proof too short")
    cell_index, ship_size, blinding_len = data[0], data[1], data[2]
    expected = 3 + blinding_len + depth * DIGEST_BYTES
    if len(data) != expected:
        raise ValueError(f"proof is {len(data)} bytes, expected {expected}")
    blinding = bytes(data[3:3 + blinding_len]) if blinding_len else None
    rest = data[3 + blinding_len:]
    siblings = tuple(bytes(rest[i:i + DIGEST_BYTES])
                     for i in range(0, len(rest), DIGEST_BYTES))
    return MerkleProof(LeafData(cell_index, ship_size, blinding), siblings)
