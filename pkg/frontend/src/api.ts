// Typed client for the game service. The UI performs no option math itself;
// every displayed number originates from these endpoints.

export type Status = "active" | "exercised" | "expired";

export interface ServerGameState {
  ticks: string;
  time: number;
  deficiency: number;
  exercise_value: number;
  steps_remaining: number;
  status: Status;
  payoff: number | null;
  payoff_exact: string | null;
  exercise_time: number | null;
}

export interface SessionInfo {
  id: string;
  n: number;
  rate: number;
  p: number;
  optimal_value: number;
  state: ServerGameState;
}

export interface GameReport {
  ticks: string;
  player_payoff: number;
  player_exercise_time: number | null;
  player_settlement: Status;
  optimal_value: number;
  optimal_payoff: number;
  optimal_exercise_time: number | null;
}

const BASE = "";

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(BASE + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status code
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export function newGame(n: number, rate: number): Promise<SessionInfo> {
  return request<SessionInfo>("/game/new", {
    method: "POST",
    body: JSON.stringify({ n, rate, p: 0.5 }),
  });
}

export function fetchSession(id: string): Promise<SessionInfo> {
  return request<SessionInfo>(`/game/${id}`);
}

export function step(id: string, action: "hold" | "exercise"): Promise<ServerGameState> {
  return request<ServerGameState>(`/game/${id}/step`, {
    method: "POST",
    body: JSON.stringify({ action }),
  });
}

export function fetchReport(id: string): Promise<GameReport> {
  return request<GameReport>(`/game/${id}/report`);
}
