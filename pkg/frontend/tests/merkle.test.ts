// Cross-implementation vectors: roots and serialized proofs must match the
// server's Merkle code byte for byte, or committed boards would be
// unplayable. Vectors live in tests/fixtures/merkle_vectors.json.

import { describe, expect, it } from "vitest";
import vectors from "./fixtures/merkle_vectors.json";
import {
  buildTree,
  encodeLeaf,
  fromHex,
  proveCell,
  serializeProof,
  toBase64,
  fromBase64,
  toHex,
  treeDepthFor,
  treeRoot,
  verifyProof,
} from "../src/merkle.js";

interface Vector {
  cells: number[];
  blindings_hex: string[];
  root_hex: string;
  depth: number;
  proofs_hex: Record<string, string>;
}

function rebuild(vector: Vector) {
  const blindings = vector.blindings_hex.map(fromHex);
  let next = 0;
  return buildTree(vector.cells, () => blindings[next++]);
}

describe("golden vectors", () => {
  for (const [name, raw] of Object.entries(vectors)) {
    const vector = raw as Vector;
    it(`${name}: root and proofs match the server implementation`, () => {
      const tree = rebuild(vector);
      expect(tree.levels.length - 1).toBe(vector.depth);
      expect(toHex(treeRoot(tree))).toBe(vector.root_hex);
      for (const [cell, expected] of Object.entries(vector.proofs_hex)) {
        const proof = proveCell(tree, Number(cell));
        expect(toHex(serializeProof(proof))).toBe(expected);
        expect(verifyProof(treeRoot(tree), proof, vector.depth)).toBe(true);
      }
    });
  }
});

describe("leaf encoding", () => {
  it("is the ship-size byte followed by the blinding", () => {
    const blinding = new Uint8Array(16);
    expect(Array.from(encodeLeaf(2, blinding))).toEqual([2, ...new Array(16).fill(0)]);
    expect(Array.from(encodeLeaf(0, null))).toEqual([0]);
  });

  it("rejects out-of-range sizes and short blindings", () => {
    expect(() => encodeLeaf(6, new Uint8Array(16))).toThrow();
    expect(() => encodeLeaf(2, new Uint8Array(8))).toThrow();
    expect(() => encodeLeaf(3, null)).toThrow();
  });
});

describe("tree behavior", () => {
  it("pads the standard board to 128 leaves / depth 7", () => {
    const tree = buildTree(new Array(100).fill(0));
    expect(tree.leaves.length).toBe(128);
    expect(tree.levels.length - 1).toBe(7);
    expect(treeDepthFor(100)).toBe(7);
    expect(proveCell(tree, 0).siblings.length).toBe(7);
  });

  it("fresh blindings give fresh roots", () => {
    const cells = new Array(100).fill(0);
    const a = buildTree(cells);
    const b = buildTree(cells);
    expect(toHex(treeRoot(a))).not.toBe(toHex(treeRoot(b)));
  });

  it("rejects tampered proofs", () => {
    const cells = new Array(100).fill(0);
    cells[12] = 4;
    const tree = buildTree(cells);
    const root = treeRoot(tree);
    const proof = proveCell(tree, 12);
    expect(verifyProof(root, proof, 7)).toBe(true);
    const lied = { leaf: { ...proof.leaf, shipSize: 0 }, siblings: proof.siblings };
    expect(verifyProof(root, lied, 7)).toBe(false);
    const clipped = { leaf: proof.leaf, siblings: proof.siblings.slice(1) };
    expect(verifyProof(root, clipped, 7)).toBe(false);
  });
});

describe("base64", () => {
  it("round-trips arbitrary bytes", () => {
    const bytes = new Uint8Array([0, 1, 127, 128, 200, 255, 13, 10]);
    expect(Array.from(fromBase64(toBase64(bytes)))).toEqual(Array.from(bytes));
  });
});
