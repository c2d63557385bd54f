import type { GameEvent, SessionInfo, StatePayload } from "../src/types.js";

export function makeState(overrides: Partial<StatePayload> = {}): StatePayload {
  return {
    cells: new Array(9).fill(0),
    to_move: 0,
    move_count: 0,
    cumulative_reward: [0, 0],
    legal_actions: [0, 1, 2, 3, 4, 5, 6, 7, 8],
    terminal: false,
    scores: null,
    ...overrides,
  };
}

export function makeSession(overrides: Partial<SessionInfo> = {}): SessionInfo {
  return {
    session_id: "s1",
    game: "tictactoe",
    seats: ["human", "agent"],
    seed: 1,
    state: makeState(),
    ...overrides,
  };
}

export function makeEvent(
  seq: number,
  type: GameEvent["type"],
  overrides: Partial<GameEvent> = {},
): GameEvent {
  return { seq, type, state: makeState({ move_count: seq }), ...overrides };
}
