// Client-side blinded Merkle commitments, byte-compatible with the server's
// verifier: leaf = ship-size byte || blinding, padding leaf = bare 0x00,
// domain-separated digests (0x00 leaf / 0x01 node), proofs serialized as
// index || size || blinding length || blinding || siblings leaf-to-root.

import { sha256 } from "js-sha256";

export const DIGEST_BYTES = 32;
export const BLINDING_BYTES = 16;
export const MAX_SHIP_SIZE = 5;

const LEAF_PREFIX = 0x00;
const NODE_PREFIX = 0x01;

export interface Leaf {
  cellIndex: number;
  shipSize: number;
  blinding: Uint8Array | null; // null only for padding leaves
}

export interface MerkleProof {
  leaf: Leaf;
  siblings: Uint8Array[];
}

export interface BoardTree {
  leaves: Leaf[];
  levels: Uint8Array[][]; // levels[0] = leaf digests, levels.at(-1) = [root]
  boardCells: number;
}

export type RandomBytes = (n: number) => Uint8Array;

export function cryptoRandomBytes(n: number): Uint8Array {
  const out = new Uint8Array(n);
  crypto.getRandomValues(out);
  return out;
}

function digest(data: Uint8Array): Uint8Array {
  return new Uint8Array(sha256.arrayBuffer(data));
}

function concat(...parts: Uint8Array[]): Uint8Array {
  const out = new Uint8Array(parts.reduce((n, p) => n + p.length, 0));
  let at = 0;
  for (const part of parts) {
    out.set(part, at);
    at += part.length;
  }
  return out;
}

export function encodeLeaf(shipSize: number, blinding: Uint8Array | null): Uint8Array {
  if (!Number.isInteger(shipSize) || shipSize < 0 || shipSize > MAX_SHIP_SIZE) {
    throw new Error(`ship size ${shipSize} outside 0..${MAX_SHIP_SIZE}`);
  }
  if (blinding === null) {
    if (shipSize !== 0) throw new Error("only padding leaves may omit the blinding");
    return new Uint8Array([0]);
  }
  if (blinding.length < BLINDING_BYTES) {
    throw new Error(`blinding shorter than ${BLINDING_BYTES} bytes`);
  }
  return concat(new Uint8Array([shipSize]), blinding);
}

function leafDigest(encoded: Uint8Array): Uint8Array {
  return digest(concat(new Uint8Array([LEAF_PREFIX]), encoded));
}

function nodeDigest(left: Uint8Array, right: Uint8Array): Uint8Array {
  return digest(concat(new Uint8Array([NODE_PREFIX]), left, right));
}

export function treeDepthFor(cellCount: number): number {
  if (cellCount < 1) throw new Error("board must have at least one cell");
  let depth = 1;
  while (1 << depth < cellCount) depth += 1;
  return depth;
}

export function buildTree(
  cells: number[],
  randomBytes: RandomBytes = cryptoRandomBytes,
): BoardTree {
  if (cells.length === 0) throw new Error("board must have at least one cell");
  const depth = treeDepthFor(cells.length);
  const width = 1 << depth;
  const leaves: Leaf[] = cells.map((v, i) => ({
    cellIndex: i,
    shipSize: v,
    blinding: randomBytes(BLINDING_BYTES),
  }));
  for (let i = cells.length; i < width; i++) {
    leaves.push({ cellIndex: i, shipSize: 0, blinding: null });
  }
  let level = leaves.map((leaf) => leafDigest(encodeLeaf(leaf.shipSize, leaf.blinding)));
  const levels = [level];
  while (level.length > 1) {
    const next: Uint8Array[] = [];
    for (let i = 0; i < level.length; i += 2) {
      next.push(nodeDigest(level[i], level[i + 1]));
    }
    levels.push(next);
    level = next;
  }
  return { leaves, levels, boardCells: cells.length };
}

export function treeRoot(tree: BoardTree): Uint8Array {
  return tree.levels[tree.levels.length - 1][0];
}

export function proveCell(tree: BoardTree, cellIndex: number): MerkleProof {
  if (cellIndex < 0 || cellIndex >= tree.boardCells) {
    throw new Error(`cell index ${cellIndex} out of range`);
  }
  const siblings: Uint8Array[] = [];
  let idx = cellIndex;
  for (let d = 0; d < tree.levels.length - 1; d++) {
    siblings.push(tree.levels[d][idx ^ 1]);
    idx >>= 1;
  }
  return { leaf: tree.leaves[cellIndex], siblings };
}

export function verifyProof(root: Uint8Array, proof: MerkleProof, depth: number): boolean {
  if (proof.siblings.length !== depth) return false;
  let idx = proof.leaf.cellIndex;
  if (idx < 0 || idx >= 1 << depth) return false;
  let acc: Uint8Array;
  try {
    acc = leafDigest(encodeLeaf(proof.leaf.shipSize, proof.leaf.blinding));
  } catch {
    return false;
  }
  for (const sibling of proof.siblings) {
    if (sibling.length !== DIGEST_BYTES) return false;
    acc = idx & 1 ? nodeDigest(sibling, acc) : nodeDigest(acc, sibling);
    idx >>= 1;
  }
  return bytesEqual(acc, root);
}

export function serializeProof(proof: MerkleProof): Uint8Array {
  const blinding = proof.leaf.blinding ?? new Uint8Array(0);
  const header = new Uint8Array([proof.leaf.cellIndex, proof.leaf.shipSize, blinding.length]);
  return concat(header, blinding, ...proof.siblings);
}

export function bytesEqual(a: Uint8Array, b: Uint8Array): boolean {
  if (a.length !== b.length) return false;
  for (let i = 0; i < a.length; i++) {
    if (a[i] !== b[i]) return false;
  }
  return true;
}

export function toBase64(bytes: Uint8Array): string {
  let raw = "";
  for (const b of bytes) raw += String.fromCharCode(b);
  return btoa(raw);
}

export function fromBase64(text: string): Uint8Array {
  const raw = atob(text);
  const out = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) out[i] = raw.charCodeAt(i);
  return out;
}

export function toHex(bytes: Uint8Array): string {
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

export function fromHex(text: string): Uint8Array {
  const out = new Uint8Array(text.length / 2);
  for (let i = 0; i < out.length; i++) {
    out[i] = parseInt(text.slice(2 * i, 2 * i + 2), 16);
  }
  return out;
}
