import { describe, expect, it } from "vitest";
import {
  DEFAULT_FLEET,
  PlacementEditor,
  mulberry32,
  placementCells,
  randomLayout,
} from "../src/board.js";

// the classic sample layout: sizes 1..5 as straight runs on a 10x10 board
function placeClassic(editor: PlacementEditor) {
  editor.place(0, 6, 4, "horizontal"); // size 1 at G5
  editor.place(1, 5, 1, "horizontal"); // size 2 at F2-F3
  editor.place(2, 0, 0, "vertical");   // size 3 down column 1
  editor.place(3, 3, 2, "horizontal"); // size 4 across row D
  editor.place(4, 2, 7, "vertical");   // size 5 down column 8
}

describe("placement editor", () => {
  it("accepts the classic board and produces the right cell grid", () => {
    const editor = new PlacementEditor();
    placeClassic(editor);
    expect(editor.conflicts()).toEqual([]);
    expect(editor.isComplete()).toBe(true);
    const cells = editor.cells()!;
    expect(cells.filter((v) => v > 0).length).toBe(15);
    const histogram = new Map<number, number>();
    for (const v of cells) {
      if (v > 0) histogram.set(v, (histogram.get(v) ?? 0) + 1);
    }
    expect(Object.fromEntries(histogram)).toEqual({ 1: 1, 2: 2, 3: 3, 4: 4, 5: 5 });
    expect(cells[64]).toBe(1); // G5
    expect(cells[35]).toBe(4); // D6
  });

  it("flags overlaps with the clashing cells and blocks commit", () => {
    const editor = new PlacementEditor();
    placeClassic(editor);
    editor.place(0, 3, 3, "horizontal"); // size 1 on top of the size-4 run
    const conflicts = editor.conflicts();
    expect(conflicts.length).toBe(1);
    expect(conflicts[0].kind).toBe("overlap");
    expect(conflicts[0].cells).toEqual([33]);
    expect(editor.isComplete()).toBe(false);
    expect(editor.cells()).toBeNull();
  });

  it("flags out-of-bounds ships", () => {
    const editor = new PlacementEditor();
    placeClassic(editor);
    editor.place(4, 8, 8, "vertical"); // size 5 runs off the bottom
    expect(editor.conflicts()[0].kind).toBe("out_of_bounds");
    expect(editor.isComplete()).toBe(false);
  });

  it("is incomplete until every ship is down", () => {
    const editor = new PlacementEditor();
    expect(editor.isComplete()).toBe(false);
    placeClassic(editor);
    editor.clear(2);
    expect(editor.isComplete()).toBe(false);
  });

  it("rotates in place", () => {
    const editor = new PlacementEditor();
    placeClassic(editor);
    editor.rotate(3); // size 4 at D3 horizontal -> vertical
    expect(editor.placements[3]!.orientation).toBe("vertical");
    expect(placementCells(editor.placements[3]!, 10)).toEqual([32, 42, 52, 62]);
  });
});

describe("random layout", () => {
  it("always yields a valid complete fleet", () => {
    for (let seed = 0; seed < 20; seed++) {
      const editor = randomLayout(DEFAULT_FLEET, 10, 10, mulberry32(seed));
      expect(editor.isComplete()).toBe(true);
      const cells = editor.cells()!;
      expect(cells.filter((v) => v > 0).length).toBe(15);
    }
  });

  it("is deterministic under a seeded generator", () => {
    const a = randomLayout(DEFAULT_FLEET, 10, 10, mulberry32(7)).cells();
    const b = randomLayout(DEFAULT_FLEET, 10, 10, mulberry32(7)).cells();
    expect(a).toEqual(b);
  });
});
