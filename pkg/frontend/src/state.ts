// View state and its pure transitions. Nothing here touches the DOM or the
// network, so the whole file is unit-testable.

import type { GameReport, ServerGameState, SessionInfo, Status } from "./api.js";

export interface GameView {
  id: string;
  n: number;
  rate: number;
  par: number; // the optimal price, shown as the score to beat
  ticks: string;
  time: number;
  deficiency: number;
  exerciseValue: number;
  stepsRemaining: number;
  status: Status;
  payoff: number | null;
  exerciseTime: number | null;
  report: GameReport | null;
  busy: boolean;
}

export function fromSession(info: SessionInfo): GameView {
  return applyState(
    {
      id: info.id,
      n: info.n,
      rate: info.rate,
      par: info.optimal_value,
      ticks: "",
      time: 0,
      deficiency: 0,
      exerciseValue: 0,
      stepsRemaining: info.n,
      status: "active",
      payoff: null,
      exerciseTime: null,
      report: null,
      busy: false,
    },
    info.state,
  );
}

export function applyState(view: GameView, state: ServerGameState): GameView {
  return {
    ...view,
    ticks: state.ticks,
    time: state.time,
    deficiency: state.deficiency,
    exerciseValue: state.exercise_value,
    stepsRemaining: state.steps_remaining,
    status: state.status,
    payoff: state.payoff,
    exerciseTime: state.exercise_time,
    busy: false,
  };
}

export function withReport(view: GameView, report: GameReport): GameView {
  return { ...view, report, busy: false };
}

export function canAct(view: GameView): boolean {
  return view.status === "active" && !view.busy;
}

// H is an up tick (1), T a down tick (0)
export function glyphs(ticks: string): string {
  return ticks.replace(/1/g, "H").replace(/0/g, "T");
}

export function discountFactor(rate: number, steps: number): number {
  return (1 + rate) ** -steps;
}

// smoke check: the server's quoted exercise value must equal our own
// deficiency * (1+r)^-m recomputation at display precision
export function discountConsistent(view: GameView): boolean {
  const recomputed = view.deficiency * discountFactor(view.rate, view.time);
  return formatValue(recomputed) === formatValue(view.exerciseValue);
}

export function formatValue(value: number): string {
  return value.toFixed(4);
}
