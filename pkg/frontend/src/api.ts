// HTTP and WebSocket access to the game server. Both transports are
// injectable so tests can capture payloads and run under node.

import type {
  ActionAck,
  ClientAction,
  GameView,
  LobbyEntry,
  SessionGrant,
  SocketMessage,
} from "./protocol.js";

export class ApiError extends Error {
  status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

export interface CapturedRequest {
  path: string;
  body: unknown;
}

export interface ApiOptions {
  baseUrl: string;
  fetchFn?: typeof fetch;
  /** Observes every outgoing request body (payload audits in tests). */
  onRequest?: (captured: CapturedRequest) => void;
}

export class ApiClient {
  private baseUrl: string;
  private fetchFn: typeof fetch;
  private onRequest?: (captured: CapturedRequest) => void;

  constructor(options: ApiOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.onRequest = options.onRequest;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    token?: string,
  ): Promise<T> {
    this.onRequest?.({ path, body });
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (token) headers["X-Session-Token"] = token;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(response.status, payload.detail ?? response.statusText);
    }
    return payload as T;
  }

  createGame(config: Record<string, unknown> = {}): Promise<SessionGrant> {
    return this.request("POST", "/games", config);
  }

  joinGame(gameId: string): Promise<SessionGrant> {
    return this.request("POST", `/games/${gameId}/join`);
  }

  lobby(): Promise<{ games: LobbyEntry[] }> {
    return this.request("GET", "/games");
  }

  getState(gameId: string, token: string): Promise<GameView> {
    return this.request("GET", `/games/${gameId}/state`, undefined, token);
  }

  submitAction(gameId: string, token: string, action: ClientAction): Promise<ActionAck> {
    return this.request("POST", `/games/${gameId}/actions`, action, token);
  }

  advanceClock(gameId: string, ticks: number): Promise<{ ok: boolean; clock: number }> {
    return this.request("POST", `/games/${gameId}/clock`, { ticks });
  }

  socketUrl(gameId: string, token: string): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/games/${gameId}/ws?token=${encodeURIComponent(token)}`;
  }
}

// Minimal surface both browser WebSocket and the `ws` package satisfy.
export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export type SocketStatus = "connecting" | "connected" | "closed" | "failed";

export interface GameSocketHandlers {
  onMessage: (message: SocketMessage) => void;
  onStatus?: (status: SocketStatus) => void;
}

const MAX_RETRIES = 5;

/** Push channel with automatic reconnection and backoff. */
export class GameSocket {
  private url: string;
  private factory: SocketFactory;
  private handlers: GameSocketHandlers;
  private socket: SocketLike | null = null;
  private retries = 0;
  private stopped = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(url: string, factory: SocketFactory, handlers: GameSocketHandlers) {
    this.url = url;
    this.factory = factory;
    this.handlers = handlers;
  }

  connect() {
    this.stopped = false;
    this.open();
  }

  private open() {
    this.handlers.onStatus?.("connecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retries = 0;
      this.handlers.onStatus?.("connected");
    };
    socket.onmessage = (ev) => {
      this.handlers.onMessage(JSON.parse(String(ev.data)) as SocketMessage);
    };
    socket.onerror = () => {};
    socket.onclose = () => {
      if (this.stopped) return;
      if (this.retries >= MAX_RETRIES) {
        this.handlers.onStatus?.("failed");
        return;
      }
      const delay = 250 * 2 ** this.retries;
      this.retries += 1;
      this.timer = setTimeout(() => this.open(), delay);
    };
  }

  close() {
    this.stopped = true;
    if (this.timer) clearTimeout(this.timer);
    this.socket?.close();
    this.handlers.onStatus?.("closed");
  }
}
