/** JSON shapes of the boardlab HTTP API. */

export interface StatePayload {
  cells: number[];
  to_move: number;
  move_count: number;
  cumulative_reward: number[];
  legal_actions: number[];
  terminal: boolean;
  scores: number[] | null;
}

export interface SessionInfo {
  session_id: string;
  game: string;
  seats: string[];
  seed: number;
  last_seq?: number;
  state: StatePayload;
}

export interface GameEvent {
  seq: number;
  type: "state" | "move" | "agent_move" | "undo" | "terminal" | "error";
  state: StatePayload;
  action?: number;
  seat?: number;
  message?: string;
}

export interface InspectAction {
  action: number;
  name: string;
  value: number;
  color: number; // affine rescale of values to [0, 1]; max -> 1, min -> 0
}

export interface InspectPayload {
  actions: InspectAction[];
  to_move: number;
  move_count?: number;
}

export interface GameListing {
  id: string;
  players: number;
  params: Record<string, unknown>;
  spec?: string;
}

export interface AgentListing {
  specs: string[];
  files: string[];
}
