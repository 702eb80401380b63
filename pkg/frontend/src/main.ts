// Browser entry point: lobby form -> live match view.  The store is the
// only mutable state; every server push or composer click funnels
// through it and triggers a full re-render.

import { MatchApi } from "./api.js";
import { cycleOrient, selectColumn, selectShape } from "./composer.js";
import { renderBanner, renderBoard, renderComposer, renderScores } from "./render.js";
import { MatchStore } from "./store.js";
import { SeatSpec } from "./types.js";

const api = new MatchApi("");
const store = new MatchStore();

const el = (id: string) => document.getElementById(id)!;

let closeSocket: (() => void) | null = null;
let spinnerTimer: number | null = null;

function render(): void {
  el("board").innerHTML = renderBoard(store.state, store.selection);
  el("scores").innerHTML = renderScores(store.state);
  el("banner").innerHTML = renderBanner(store.state, store.connected);
  el("composer").innerHTML = renderComposer(store.state, store.selection, store.myTurn);
  const thinking = !!store.state && !store.state.finished && !store.myTurn;
  el("spinner").classList.toggle("visible", thinking);
}

function wireComposer(): void {
  el("composer").addEventListener("click", async (ev) => {
    const target = (ev.target as HTMLElement).closest("button");
    if (!target || target.hasAttribute("disabled") || !store.state) return;
    if (target.dataset.shape !== undefined) {
      store.setSelection(selectShape(store.state, store.selection,
                                     Number(target.dataset.shape)));
    } else if (target.dataset.rotate !== undefined) {
      store.setSelection(cycleOrient(store.state, store.selection,
                                     Number(target.dataset.rotate) as 1 | -1));
    } else if (target.dataset.column !== undefined) {
      store.setSelection(selectColumn(store.state, store.selection,
                                      Number(target.dataset.column)));
    } else if (target.dataset.submit !== undefined) {
      const move = store.pendingMove();
      if (move === null || store.humanSeat === null) return;
      try {
        await api.postMove(store.state.matchId, { seat: store.humanSeat, ...move });
      } catch (e) {
        el("banner").innerHTML = `<div class="banner error">${(e as Error).message}</div>`;
      }
    }
  });
}

async function resync(matchId: string): Promise<void> {
  store.applyServerState(await api.getState(matchId));
  store.setConnected(true);
}

function watch(matchId: string): void {
  closeSocket?.();
  closeSocket = api.openEvents(
    matchId,
    (state) => {
      store.setConnected(true);
      store.applyServerState(state);
    },
    () => {
      if (store.state?.finished) return;
      store.setConnected(false);
      if (spinnerTimer === null) {
        spinnerTimer = window.setInterval(() => {
          resync(matchId).then(() => {
            window.clearInterval(spinnerTimer!);
            spinnerTimer = null;
            watch(matchId);
          }).catch(() => undefined);
        }, 1000);
      }
    },
  );
}

async function startMatch(): Promise<void> {
  const seats: SeatSpec[] = [];
  for (const select of document.querySelectorAll<HTMLSelectElement>(".seat-pick")) {
    if (select.value === "off") continue;
    seats.push(select.value === "human"
      ? { kind: "human", name: "" }
      : { kind: "agent", name: select.value });
  }
  if (seats.length < 2) return;
  const matchId = await api.createMatch(seats, Date.now() % 2 ** 31);
  el("lobby").classList.add("hidden");
  el("match").classList.remove("hidden");
  await resync(matchId);
  watch(matchId);
}

export function boot(): void {
  store.subscribe(render);
  wireComposer();
  el("start").addEventListener("click", () => {
    startMatch().catch((e) => {
      el("banner").innerHTML = `<div class="banner error">${(e as Error).message}</div>`;
    });
  });
}

if (typeof document !== "undefined" && document.getElementById("start")) {
  boot();
}
