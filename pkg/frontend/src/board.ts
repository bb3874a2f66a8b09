// Fleet placement model: the editor's source of truth, mirroring the
// server's validation so an invalid board can never be committed.

export type Orientation = "horizontal" | "vertical";

export interface Placement {
  size: number;
  row: number;
  col: number;
  orientation: Orientation;
}

export const DEFAULT_FLEET = [1, 2, 3, 4, 5];

export function placementCells(p: Placement, cols: number): number[] {
  const cells: number[] = [];
  for (let k = 0; k < p.size; k++) {
    const row = p.orientation === "vertical" ? p.row + k : p.row;
    const col = p.orientation === "horizontal" ? p.col + k : p.col;
    cells.push(row * cols + col);
  }
  return cells;
}

export function inBounds(p: Placement, rows: number, cols: number): boolean {
  if (p.row < 0 || p.col < 0) return false;
  if (p.orientation === "horizontal") {
    return p.row < rows && p.col + p.size <= cols;
  }
  return p.col < cols && p.row + p.size <= rows;
}

export interface Conflict {
  slot: number;
  kind: "out_of_bounds" | "overlap";
  cells: number[];
}

/** Editor state for one fleet: one slot per required ship size. */
export class PlacementEditor {
  readonly fleet: number[];
  readonly rows: number;
  readonly cols: number;
  placements: (Placement | null)[];

  constructor(fleet: number[] = DEFAULT_FLEET, rows = 10, cols = 10) {
    this.fleet = [...fleet].sort((a, b) => a - b);
    this.rows = rows;
    this.cols = cols;
    this.placements = this.fleet.map(() => null);
  }

  place(slot: number, row: number, col: number, orientation: Orientation) {
    this.placements[slot] = { size: this.fleet[slot], row, col, orientation };
  }

  rotate(slot: number) {
    const p = this.placements[slot];
    if (!p) return;
    p.orientation = p.orientation === "horizontal" ? "vertical" : "horizontal";
  }

  clear(slot: number) {
    this.placements[slot] = null;
  }

  conflicts(): Conflict[] {
    const found: Conflict[] = [];
    const taken = new Map<number, number>(); // cell -> slot
    this.placements.forEach((p, slot) => {
      if (!p) return;
      if (!inBounds(p, this.rows, this.cols)) {
        found.push({ slot, kind: "out_of_bounds", cells: [] });
        return;
      }
      const cells = placementCells(p, this.cols);
      const clashes = cells.filter((c) => taken.has(c));
      if (clashes.length > 0) {
        found.push({ slot, kind: "overlap", cells: clashes });
      }
      for (const c of cells) taken.set(c, slot);
    });
    return found;
  }

  isComplete(): boolean {
    return this.placements.every((p) => p !== null) && this.conflicts().length === 0;
  }

  /** Cell grid (ship size per cell, 0 empty); null until the fleet is valid. */
  cells(): number[] | null {
    if (!this.isComplete()) return null;
    const grid = new Array(this.rows * this.cols).fill(0);
    for (const p of this.placements) {
      for (const c of placementCells(p!, this.cols)) grid[c] = p!.size;
    }
    return grid;
  }
}

/** Deterministic valid layout from a seeded generator (also the
 *  "randomize" button and the scripted e2e clients). */
export function randomLayout(
  fleet: number[],
  rows: number,
  cols: number,
  random: () => number = Math.random,
): PlacementEditor {
  for (let attempt = 0; attempt < 1000; attempt++) {
    const editor = new PlacementEditor(fleet, rows, cols);
    let ok = true;
    for (let slot = editor.fleet.length - 1; slot >= 0; slot--) {
      const size = editor.fleet[slot];
      let placed = false;
      for (let tries = 0; tries < 200 && !placed; tries++) {
        const horizontal = random() < 0.5;
        const row = Math.floor(random() * (horizontal ? rows : rows - size + 1));
        const col = Math.floor(random() * (horizontal ? cols - size + 1 : cols));
        editor.place(slot, row, col, horizontal ? "horizontal" : "vertical");
        if (editor.conflicts().length === 0) {
          placed = true;
        } else {
          editor.clear(slot);
        }
      }
      if (!placed) {
        ok = false;
        break;
      }
    }
    if (ok) return editor;
  }
  throw new Error("could not place the fleet");
}

/** Small deterministic PRNG for reproducible test layouts. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a += 0x6d2b79f5;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
