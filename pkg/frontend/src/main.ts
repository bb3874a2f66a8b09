// Browser entry point: lobby (create/join) and the live game screen.

import { ApiClient } from "./api.js";
import { DEFAULT_FLEET, PlacementEditor } from "./board.js";
import type { SessionGrant } from "./protocol.js";
import { GameStore, browserStorage } from "./store.js";
import { renderEditor, renderGame } from "./ui.js";

const SESSION_KEY = "fairships:session";

function api(): ApiClient {
  return new ApiClient({ baseUrl: window.location.origin });
}

function savedSession(): SessionGrant | null {
  const raw = localStorage.getItem(SESSION_KEY);
  return raw ? (JSON.parse(raw) as SessionGrant) : null;
}

function enterGame(session: SessionGrant) {
  localStorage.setItem(SESSION_KEY, JSON.stringify(session));
  const store = new GameStore({
    api: api(),
    session,
    storage: browserStorage(),
    socketFactory: (url) => new WebSocket(url) as never,
  });
  const root = document.getElementById("app")!;
  const editor = new PlacementEditor(session.config.fleet ?? DEFAULT_FLEET,
    session.config.rows, session.config.cols);
  const selected = { slot: 0 };

  const rerender = () => {
    const view = store.view;
    if (!view) return;
    if (view.phase === "committing" && !(view.roots ?? {})[session.player]) {
      renderEditor(root, editor, selected, {
        onCommit: (cells) => void store.commitBoard(cells),
      }, rerender);
    } else {
      renderGame(root, store);
    }
  };
  store.subscribe(rerender);
  store.connect();
  void store.refresh();
  // keep the countdown moving between server pushes
  setInterval(() => void store.refresh(), 2000);
}

async function renderLobby() {
  const root = document.getElementById("app")!;
  root.replaceChildren();
  const title = document.createElement("h2");
  title.textContent = "fairships lobby";
  root.appendChild(title);

  const createBtn = document.createElement("button");
  createBtn.textContent = "create game (deposit 100)";
  createBtn.onclick = async () => {
    const session = await api().createGame({ deposit: 100 });
    enterGame(session);
  };
  root.appendChild(createBtn);

  const list = document.createElement("ul");
  root.appendChild(list);
  const { games } = await api().lobby();
  for (const game of games.filter((g) => g.joinable)) {
    const item = document.createElement("li");
    const join = document.createElement("button");
    join.textContent = `join ${game.game_id} (deposit ${game.deposit})`;
    join.onclick = async () => {
      const session = await api().joinGame(game.game_id);
      enterGame(session);
    };
    item.appendChild(join);
    list.appendChild(item);
  }
}

const existing = savedSession();
if (existing) {
  enterGame(existing);
} else {
  void renderLobby();
}
