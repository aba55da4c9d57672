// HTML renderers. Pure string builders so tests can assert on the markup;
// main.ts swaps the result into the page and wires events by data-action.

import { GameView, canAct, discountConsistent, formatValue, glyphs } from "./state.js";

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderBanner(message: string | null): string {
  if (!message) return "";
  return `<div class="banner" role="alert">${escapeHtml(message)}</div>`;
}

export function renderNewGameForm(): string {
  return `
  <form class="new-game" data-form="new-game">
    <label>expiry <input name="n" type="number" min="0" max="16" value="4"></label>
    <label>rate <input name="rate" type="number" step="0.05" min="0" value="0.25"></label>
    <button type="submit" data-action="start">new game</button>
  </form>`;
}

export function renderGame(view: GameView): string {
  const disabled = canAct(view) ? "" : " disabled";
  const strip = glyphs(view.ticks) + "&middot;".repeat(view.stepsRemaining);
  const lines = [
    `<section class="game" data-session="${view.id}">`,
    `<p class="par">Par (optimal policy value): <strong>${formatValue(view.par)}</strong></p>`,
    `<p class="strip" aria-label="ticks">${strip}</p>`,
    `<p class="facts">time ${view.time} / ${view.n} &mdash; deficiency ${view.deficiency}`,
    ` &mdash; exercise now for <strong>${formatValue(view.exerciseValue)}</strong></p>`,
    `<p class="controls">`,
    `<button data-action="hold"${disabled}>hold</button>`,
    `<button data-action="exercise"${disabled}>exercise</button>`,
    `</p>`,
  ];
  if (!discountConsistent(view)) {
    lines.push(`<p class="warning">server and client discounting disagree</p>`);
  }
  if (view.status !== "active" && view.payoff !== null) {
    const how = view.status === "exercised" ? "exercised" : "settled at expiry";
    lines.push(
      `<p class="settled">${how} at time ${view.exerciseTime}: ` +
        `payoff <strong>${formatValue(view.payoff)}</strong></p>`,
    );
  }
  if (view.report) {
    const r = view.report;
    lines.push(`
    <table class="report">
      <tr><th></th><th>you</th><th>optimal policy</th></tr>
      <tr><td>payoff</td><td>${formatValue(r.player_payoff)}</td><td>${formatValue(r.optimal_payoff)}</td></tr>
      <tr><td>exercise time</td><td>${r.player_exercise_time ?? "-"}</td><td>${r.optimal_exercise_time ?? "-"}</td></tr>
    </table>
    <p class="ticks-reveal">full sequence: ${glyphs(r.ticks)}</p>`);
  }
  lines.push("</section>");
  return lines.join("\n");
}

export function renderApp(view: GameView | null, banner: string | null): string {
  return [
    `<h1>Complexity Option Game</h1>`,
    renderBanner(banner),
    renderNewGameForm(),
    view ? renderGame(view) : `<p class="hint">start a game to receive ticks</p>`,
  ].join("\n");
}
