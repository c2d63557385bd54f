/** Browser entry point: DOM wiring only; all logic lives in the
 * controller/store modules. */

import { Api } from "./api.js";
import { GameController } from "./controller.js";
import { buildViewModel, hitTest } from "./layout.js";
import { drawBoard } from "./render.js";
import { SessionStore } from "./store.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8000";

const api = new Api(apiBase);
const store = new SessionStore();
const controller = new GameController(
  api,
  store,
  (url) => new EventSource(url) as unknown as import("./sse.js").EventSourceLike,
);

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const gameSelect = $<HTMLSelectElement>("game");
const agentSelect = $<HTMLSelectElement>("agent");
const seedInput = $<HTMLInputElement>("seed");
const newGameBtn = $<HTMLButtonElement>("new-game");
const undoBtn = $<HTMLButtonElement>("undo");
const inspectToggle = $<HTMLInputElement>("inspect");
const noticeEl = $<HTMLDivElement>("notice");
const statusEl = $<HTMLDivElement>("status");
const canvas = $<HTMLCanvasElement>("board");
const ctx = canvas.getContext("2d")!;

const GAME_SPECS: Record<string, string> = {
  tictactoe: "tictactoe",
  connect4: "connect4",
  "2048": "2048",
  hex: "hex-5",
  nim: "nim-3,4,5",
};

async function populateMenus(): Promise<void> {
  const { games } = await api.listGames();
  gameSelect.innerHTML = "";
  for (const g of games) {
    const opt = document.createElement("option");
    opt.value = GAME_SPECS[g.id] ?? g.id;
    opt.textContent = g.id;
    gameSelect.appendChild(opt);
  }
  await populateAgents();
}

async function populateAgents(): Promise<void> {
  const listing = await api.listAgents(gameSelect.value);
  agentSelect.innerHTML = "";
  for (const spec of [...listing.specs, ...listing.files]) {
    const opt = document.createElement("option");
    opt.value = spec;
    opt.textContent = spec;
    agentSelect.appendChild(opt);
  }
}

function statusLine(): string {
  const { session, state } = store;
  if (!session || !state) return "no session";
  if (state.terminal) {
    const scores = state.scores ?? [];
    if (session.seats.length === 1) return `game over — score ${state.cumulative_reward[0]}`;
    const human = session.seats.indexOf("human");
    const s = scores[human] ?? 0;
    return s > 0 ? "you win!" : s < 0 ? "you lose" : "draw";
  }
  if (session.seats.length === 1) return `score ${state.cumulative_reward[0]}`;
  return session.seats[state.to_move] === "human"
    ? "your move"
    : "agent is thinking…";
}

function redraw(): void {
  const { session, state } = store;
  noticeEl.textContent = store.notice?.text ?? "";
  noticeEl.className = store.notice ? `notice ${store.notice.kind}` : "notice";
  statusEl.textContent = statusLine();
  if (!session || !state) return;
  const vm = buildViewModel(session.game, state);
  canvas.width = Math.ceil(vm.width);
  canvas.height = Math.ceil(vm.height);
  drawBoard(ctx, vm, store.inspect?.actions ?? null, store.lastMove);
}

store.subscribe(redraw);

canvas.addEventListener("click", (ev) => {
  const { session, state } = store;
  if (!session || !state) return;
  const box = canvas.getBoundingClientRect();
  const x = ((ev.clientX - box.left) / box.width) * canvas.width;
  const y = ((ev.clientY - box.top) / box.height) * canvas.height;
  const shape = hitTest(buildViewModel(session.game, state), x, y);
  if (shape?.action === null || shape === null) return; // inert area
  void controller.clickAction(shape.action);
});

newGameBtn.addEventListener("click", () => {
  const seed = seedInput.value ? parseInt(seedInput.value, 10) : undefined;
  void controller
    .newGame({ game: gameSelect.value, agent: agentSelect.value, seed })
    .then(() => (inspectToggle.checked ? controller.setInspect(true) : undefined))
    .catch((err) => store.setNotice({ kind: "error", text: String(err) }));
});

undoBtn.addEventListener("click", () => void controller.undo());
gameSelect.addEventListener("change", () => void populateAgents());
inspectToggle.addEventListener("change", () =>
  void controller.setInspect(inspectToggle.checked),
);

void populateMenus().catch((err) =>
  store.setNotice({ kind: "error", text: `cannot reach API at ${apiBase}: ${err}` }),
);
