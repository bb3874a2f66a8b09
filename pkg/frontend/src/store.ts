// Client game state: the server's player-scoped view plus the local
// secrets (plaintext board, blinding factors, generated tree) that never
// leave the browser except inside opening proofs.

import { ApiClient, GameSocket, SocketFactory, SocketStatus } from "./api.js";
import {
  BoardTree,
  RandomBytes,
  buildTree,
  cryptoRandomBytes,
  encodeLeaf as encodeLeafBytes,
  fromBase64,
  proveCell,
  serializeProof,
  toBase64,
  treeRoot,
} from "./merkle.js";
import type { GameView, SessionGrant, SocketMessage } from "./protocol.js";

export interface KeyValueStore {
  get(key: string): string | null;
  set(key: string, value: string): void;
  remove(key: string): void;
}

export class MemoryStore implements KeyValueStore {
  private map = new Map<string, string>();

  get(key: string) {
    return this.map.get(key) ?? null;
  }

  set(key: string, value: string) {
    this.map.set(key, value);
  }

  remove(key: string) {
    this.map.delete(key);
  }
}

export function browserStorage(): KeyValueStore {
  return {
    get: (key) => localStorage.getItem(key),
    set: (key, value) => localStorage.setItem(key, value),
    remove: (key) => localStorage.removeItem(key),
  };
}

interface StoredSecrets {
  player: string;
  token: string;
  cells: number[];
  blindings: string[]; // base64, one per board cell, in leaf order
}

export interface GameStoreOptions {
  api: ApiClient;
  session: SessionGrant;
  storage?: KeyValueStore;
  socketFactory?: SocketFactory;
  randomBytes?: RandomBytes;
}

export class GameStore {
  readonly api: ApiClient;
  readonly session: SessionGrant;
  view: GameView | null = null;
  cells: number[] | null = null;
  socketStatus: SocketStatus = "closed";

  private tree: BoardTree | null = null;
  private storage: KeyValueStore;
  private socket: GameSocket | null = null;
  private socketFactory?: SocketFactory;
  private randomBytes: RandomBytes;
  private listeners = new Set<() => void>();

  constructor(options: GameStoreOptions) {
    this.api = options.api;
    this.session = options.session;
    this.storage = options.storage ?? new MemoryStore();
    this.socketFactory = options.socketFactory;
    this.randomBytes = options.randomBytes ?? cryptoRandomBytes;
    this.restoreSecrets();
  }

  get gameId() {
    return this.session.game_id;
  }

  get player() {
    return this.session.player;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify() {
    for (const listener of this.listeners) listener();
  }

  // -- secrets -------------------------------------------------------------

  private storageKey() {
    return `fairships:${this.gameId}:${this.player}`;
  }

  /** A page refresh must not lose the board: blindings reload from local
   *  storage and rebuild the exact committed tree. */
  private restoreSecrets() {
    const raw = this.storage.get(this.storageKey());
    if (!raw) return;
    const saved = JSON.parse(raw) as StoredSecrets;
    const blindings = saved.blindings.map(fromBase64);
    let next = 0;
    this.tree = buildTree(saved.cells, () => blindings[next++]);
    this.cells = saved.cells;
  }

  private persistSecrets(cells: number[], tree: BoardTree) {
    const secrets: StoredSecrets = {
      player: this.player,
      token: this.session.token,
      cells,
      blindings: tree.leaves
        .slice(0, cells.length)
        .map((leaf) => toBase64(leaf.blinding!)),
    };
    this.storage.set(this.storageKey(), JSON.stringify(secrets));
  }

  // -- realtime ------------------------------------------------------------

  connect() {
    if (!this.socketFactory) throw new Error("no socket factory configured");
    const url = this.api.socketUrl(this.gameId, this.session.token);
    this.socket = new GameSocket(url, this.socketFactory, {
      onMessage: (message) => void this.onSocketMessage(message),
      onStatus: (status) => {
        this.socketStatus = status;
        this.notify();
      },
    });
    this.socket.connect();
  }

  disconnect() {
    this.socket?.close();
    this.socket = null;
  }

  private async onSocketMessage(message: SocketMessage) {
    // the socket pushes deltas; the authoritative projection is re-fetched
    if (!this.view || message.sequence >= this.view.sequence) {
      await this.refresh();
    }
  }

  async refresh(): Promise<GameView> {
    this.view = await this.api.getState(this.gameId, this.session.token);
    this.notify();
    return this.view;
  }

  // -- actions ---------------------------------------------------------------

  /** Build the blinded tree locally and submit only its 32-byte root. */
  async commitBoard(cells: number[]) {
    const tree = buildTree(cells, this.randomBytes);
    this.tree = tree;
    this.cells = cells;
    this.persistSecrets(cells, tree);
    await this.api.submitAction(this.gameId, this.session.token, {
      type: "commit_root",
      root: toBase64(treeRoot(tree)),
    });
    await this.refresh();
  }

  proofBase64(cellIndex: number): string {
    if (!this.tree) throw new Error("no committed board");
    return toBase64(serializeProof(proveCell(this.tree, cellIndex)));
  }

  committedRoot(): string | null {
    return this.tree ? toBase64(treeRoot(this.tree)) : null;
  }

  /** Every blinded leaf encoding, for payload-scrubbing tests. */
  leafEncodingsBase64(): string[] {
    if (!this.tree || !this.cells) return [];
    return this.tree.leaves
      .slice(0, this.cells.length)
      .map((leaf) => toBase64(encodeLeafBytes(leaf.shipSize, leaf.blinding!)));
  }

  async fireFirst(target: { row: number; col: number }) {
    await this.api.submitAction(this.gameId, this.session.token, {
      type: "first_shot",
      target,
    });
    await this.refresh();
  }

  /** Open the cell the opponent just shot and fire back in one action. */
  async respondAndFire(target: { row: number; col: number }) {
    const pending = this.view?.pending_target;
    if (!pending) throw new Error("no pending shot to answer");
    const ack = await this.api.submitAction(this.gameId, this.session.token, {
      type: "play_turn",
      proof: this.proofBase64(pending.index),
      next_target: target,
    });
    await this.refresh();
    return ack;
  }

  /** Terminal reveal: prove every cell not already on the public record. */
  async revealAll() {
    const view = this.view ?? (await this.refresh());
    const already = new Set(
      Object.keys(view.reveals[this.player] ?? {}).map(Number),
    );
    const total = view.config.rows * view.config.cols;
    const proofs: string[] = [];
    for (let i = 0; i < total; i++) {
      if (!already.has(i)) proofs.push(this.proofBase64(i));
    }
    await this.api.submitAction(this.gameId, this.session.token, {
      type: "reveal_board",
      proofs,
    });
    await this.refresh();
  }

  async claimTimeout() {
    await this.api.submitAction(this.gameId, this.session.token, {
      type: "timeout_claim",
    });
    await this.refresh();
  }
}

// -- derived view model ------------------------------------------------------

export type CellMark =
  | "unknown"
  | "miss"
  | "hit"
  | "ship"
  | "ship-hit";

export interface ViewModel {
  phase: string;
  you: string;
  opponent: string | null;
  yourTurn: boolean;
  needsReveal: boolean;
  statusText: string;
  ownGrid: CellMark[];
  targetGrid: CellMark[];
  ticksLeft: number;
  claimEnabled: boolean;
  pot: number;
  banner: { text: string; won: boolean; payout: number } | null;
}

const STATUS: Record<string, string> = {
  registration: "Waiting for an opponent to join",
  committing: "Place your fleet and commit the board",
  awaiting_first_shot: "Opening shot",
  awaiting_turn: "Torpedo exchange",
  awaiting_reveal: "Terminal fleet audit",
  finished: "Game over",
};

export function deriveViewModel(view: GameView, cells: number[] | null): ViewModel {
  const me = view.player;
  const opponent = view.players.find((p) => p !== me) ?? null;
  const total = view.config.rows * view.config.cols;

  const ownGrid: CellMark[] = new Array(total).fill("unknown");
  if (cells) {
    cells.forEach((v, i) => {
      ownGrid[i] = v > 0 ? "ship" : "unknown";
    });
  }
  for (const [key, value] of Object.entries(view.reveals[me] ?? {})) {
    const idx = Number(key);
    ownGrid[idx] = value > 0 ? "ship-hit" : "miss";
  }

  const targetGrid: CellMark[] = new Array(total).fill("unknown");
  for (const shot of view.shot_log) {
    if (shot.shooter !== me) continue;
    if (!shot.outcome) continue;
    targetGrid[shot.target.index] = shot.outcome.kind === "miss" ? "miss" : "hit";
  }

  const yourTurn =
    (view.phase === "awaiting_turn" || view.phase === "awaiting_first_shot") &&
    view.awaited === me;
  const needsReveal = view.phase === "awaiting_reveal" && view.awaited === me;
  const ticksLeft = Math.max(view.deadline - view.clock, 0);
  const claimEnabled =
    view.phase !== "finished" && ticksLeft === 0 && view.awaited !== me;

  let banner: ViewModel["banner"] = null;
  if (view.verdict) {
    const won = view.verdict.winner === me;
    const payout = view.transfers
      .filter(([who]) => who === me)
      .reduce((sum, [, amount]) => sum + amount, 0);
    const reason = view.verdict.reason ? ` (${view.verdict.reason.replace(/_/g, " ")})` : "";
    banner = {
      won,
      payout,
      text: won
        ? `You win${reason}! Payout: ${payout}`
        : `You lose${reason}. Pot goes to ${view.verdict.winner}.`,
    };
  }

  let statusText = STATUS[view.phase] ?? view.phase;
  if (view.phase === "awaiting_turn") {
    statusText = yourTurn ? "Your turn: answer and fire" : "Opponent's turn";
  } else if (needsReveal) {
    statusText = "You are the candidate winner: reveal your board";
  }

  return {
    phase: view.phase,
    you: me,
    opponent,
    yourTurn,
    needsReveal,
    statusText,
    ownGrid,
    targetGrid,
    ticksLeft,
    claimEnabled,
    pot: view.pot,
    banner,
  };
}
