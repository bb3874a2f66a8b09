// DOM rendering: lobby, placement editor, dual grids, countdown, banner.
// Everything re-renders from the store; no state lives in the DOM.

import { PlacementEditor } from "./board.js";
import { formatTicks } from "./countdown.js";
import { GameStore, deriveViewModel } from "./store.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface EditorCallbacks {
  onCommit: (cells: number[]) => void;
}

/** Click-to-place editor: pick a ship from the dock, click a cell, press
 *  the rotate button to flip its orientation. Conflicts highlight red and
 *  disable the commit button. */
export function renderEditor(
  container: HTMLElement,
  editor: PlacementEditor,
  selected: { slot: number },
  callbacks: EditorCallbacks,
  rerender: () => void,
) {
  container.replaceChildren();
  const dock = el("div", "dock");
  editor.fleet.forEach((size, slot) => {
    const btn = el("button", "ship-button", `ship ${size}`);
    if (editor.placements[slot]) btn.classList.add("placed");
    if (selected.slot === slot) btn.classList.add("selected");
    btn.onclick = () => {
      selected.slot = slot;
      rerender();
    };
    dock.appendChild(btn);
  });
  const rotate = el("button", "rotate-button", "rotate");
  rotate.onclick = () => {
    editor.rotate(selected.slot);
    rerender();
  };
  dock.appendChild(rotate);
  container.appendChild(dock);

  const conflictCells = new Set<number>();
  const conflictSlots = new Set<number>();
  for (const conflict of editor.conflicts()) {
    conflictSlots.add(conflict.slot);
    conflict.cells.forEach((c) => conflictCells.add(c));
  }

  const grid = el("div", "grid editor-grid");
  grid.style.setProperty("--cols", String(editor.cols));
  const cells = new Array(editor.rows * editor.cols).fill(0);
  editor.placements.forEach((p, slot) => {
    if (!p) return;
    for (let k = 0; k < p.size; k++) {
      const r = p.orientation === "vertical" ? p.row + k : p.row;
      const c = p.orientation === "horizontal" ? p.col + k : p.col;
      if (r < editor.rows && c < editor.cols) {
        cells[r * editor.cols + c] = conflictSlots.has(slot) ? -1 : p.size;
      }
    }
  });
  cells.forEach((value, idx) => {
    const cell = el("div", "cell");
    if (value > 0) {
      cell.classList.add("ship");
      cell.textContent = String(value);
    } else if (value < 0 || conflictCells.has(idx)) {
      cell.classList.add("conflict");
    }
    cell.onclick = () => {
      const current = editor.placements[selected.slot];
      editor.place(
        selected.slot,
        Math.floor(idx / editor.cols),
        idx % editor.cols,
        current?.orientation ?? "horizontal",
      );
      rerender();
    };
    grid.appendChild(cell);
  });
  container.appendChild(grid);

  const commit = el("button", "commit-button", "commit board");
  commit.disabled = !editor.isComplete();
  commit.onclick = () => {
    const cells = editor.cells();
    if (cells) callbacks.onCommit(cells);
  };
  container.appendChild(commit);
}

export function renderGame(container: HTMLElement, store: GameStore) {
  const view = store.view;
  if (!view) return;
  const vm = deriveViewModel(view, store.cells);
  container.replaceChildren();

  const status = el("div", "status", vm.statusText);
  container.appendChild(status);

  if (vm.banner) {
    const banner = el(
      "div",
      `banner verdict-banner ${vm.banner.won ? "banner-won" : "banner-lost"}`,
      vm.banner.text,
    );
    container.appendChild(banner);
    const payout = el("div", "payout", `Pot paid out: ${vm.banner.payout}`);
    container.appendChild(payout);
  } else {
    const clock = el(
      "div",
      `countdown${vm.ticksLeft === 0 ? " expired" : ""}`,
      `Move window: ${formatTicks(vm.ticksLeft)}`,
    );
    container.appendChild(clock);
  }

  const boards = el("div", "boards");
  boards.appendChild(
    renderGrid("Your fleet", vm.ownGrid, view.config.cols, null),
  );
  boards.appendChild(
    renderGrid("Your shots", vm.targetGrid, view.config.cols, (idx) => {
      const target = { row: Math.floor(idx / view.config.cols), col: idx % view.config.cols };
      if (view.phase === "awaiting_first_shot" && vm.yourTurn) {
        void store.fireFirst(target);
      } else if (vm.yourTurn) {
        void store.respondAndFire(target);
      }
    }),
  );
  container.appendChild(boards);

  if (vm.needsReveal) {
    const reveal = el("button", "reveal-button", "reveal board and claim the pot");
    reveal.onclick = () => void store.revealAll();
    container.appendChild(reveal);
  }
  if (vm.claimEnabled) {
    const claim = el("button", "claim-button", "claim timeout");
    claim.onclick = () => void store.claimTimeout();
    container.appendChild(claim);
  }
}

function renderGrid(
  title: string,
  marks: string[],
  cols: number,
  onFire: ((idx: number) => void) | null,
): HTMLElement {
  const wrap = el("div", "board");
  wrap.appendChild(el("h3", undefined, title));
  const grid = el("div", "grid");
  grid.style.setProperty("--cols", String(cols));
  marks.forEach((mark, idx) => {
    const cell = el("div", `cell mark-${mark}`);
    if (onFire && mark === "unknown") {
      cell.classList.add("targetable");
      cell.onclick = () => onFire(idx);
    }
    grid.appendChild(cell);
  });
  wrap.appendChild(grid);
  return wrap;
}
