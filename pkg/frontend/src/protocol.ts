// Wire types for the fairships server API.

export interface GameConfigView {
  rows: number;
  cols: number;
  fleet: number[];
  timeout_ticks: number;
  deposit: number;
}

export interface CellRef {
  index: number;
  row: number;
  col: number;
}

export interface ShotOutcomeView {
  kind: "miss" | "hit" | "sunk" | "fleet_sunk";
  ship_size: number;
}

export interface ShotEntry {
  shooter: string;
  target: CellRef;
  outcome: ShotOutcomeView | null;
}

export interface VerdictView {
  kind: "legitimate_win" | "cheat_penalty" | "timeout_forfeit";
  winner: string;
  reason: string | null;
}

export type PhaseName =
  | "registration"
  | "committing"
  | "awaiting_first_shot"
  | "awaiting_turn"
  | "awaiting_reveal"
  | "finished";

export interface GameView {
  game_id: string;
  player: string;
  sequence: number;
  phase: PhaseName;
  clock: number;
  deadline: number;
  pot: number;
  players: string[];
  deposits: Record<string, number>;
  first_mover: string | null;
  awaited: string | null;
  pending_target: CellRef | null;
  roots: Record<string, string>;
  reveals: Record<string, Record<string, number>>;
  shot_log: ShotEntry[];
  verdict: VerdictView | null;
  transfers: [string, number][];
  config: GameConfigView;
}

export interface SessionGrant {
  game_id: string;
  token: string;
  player: string;
  config: GameConfigView;
}

export interface LobbyEntry {
  game_id: string;
  phase: PhaseName;
  players_joined: number;
  joinable: boolean;
  deposit: number;
  timeout_ticks: number;
}

export interface ActionAck {
  ok: boolean;
  sequence: number;
  phase: PhaseName;
  outcome?: ShotOutcomeView;
  verdict?: VerdictView;
  transfers?: [string, number][];
}

export interface SocketMessage {
  sequence: number;
  phase: PhaseName;
  event: Record<string, unknown>;
}

export type ClientAction =
  | { type: "commit_root"; root: string }
  | { type: "first_shot"; target: { row: number; col: number } }
  | { type: "play_turn"; proof: string; next_target: { row: number; col: number } }
  | { type: "reveal_board"; proofs: string[] }
  | { type: "timeout_claim" };
