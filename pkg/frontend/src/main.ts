// Bootstrap: session restore from the URL fragment, event wiring, and the
// fetch-then-render loop. At most one request is in flight per session;
// buttons are disabled while busy, which serializes rapid double-clicks.

import { fetchReport, fetchSession, newGame, step } from "./api.js";
import { renderApp } from "./render.js";
import { GameView, applyState, fromSession, withReport } from "./state.js";

let view: GameView | null = null;
let banner: string | null = null;

const root = document.getElementById("app") as HTMLElement;

function draw(): void {
  root.innerHTML = renderApp(view, banner);
}

async function guard(work: () => Promise<void>): Promise<void> {
  if (view) view = { ...view, busy: true };
  banner = null;
  draw();
  try {
    await work();
  } catch (error) {
    banner = error instanceof Error ? error.message : String(error);
    if (view) view = { ...view, busy: false };
  }
  draw();
}

async function settleIfFinished(): Promise<void> {
  if (view && view.status !== "active" && !view.report) {
    view = withReport(view, await fetchReport(view.id));
  }
}

async function start(n: number, rate: number): Promise<void> {
  await guard(async () => {
    const info = await newGame(n, rate);
    view = fromSession(info);
    window.location.hash = info.id;
    await settleIfFinished(); // an expiry-0 game settles immediately
  });
}

async function act(action: "hold" | "exercise"): Promise<void> {
  if (!view || view.status !== "active" || view.busy) return;
  const current = view;
  await guard(async () => {
    view = applyState(current, await step(current.id, action));
    await settleIfFinished();
  });
}

async function restoreFromHash(): Promise<void> {
  const id = window.location.hash.replace(/^#/, "");
  if (!id) return;
  await guard(async () => {
    view = fromSession(await fetchSession(id));
    await settleIfFinished();
  });
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest("[data-action]");
  if (!(target instanceof HTMLButtonElement) || target.disabled) return;
  const action = target.dataset.action;
  if (action === "hold" || action === "exercise") {
    event.preventDefault();
    void act(action);
  }
});

root.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  if (form.dataset.form !== "new-game") return;
  event.preventDefault();
  const data = new FormData(form);
  const n = Number(data.get("n") ?? 4);
  const rate = Number(data.get("rate") ?? 0);
  void start(n, rate);
});

draw();
void restoreFromHash();
