import type {
  AgentListing,
  GameListing,
  InspectPayload,
  SessionInfo,
  StatePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export interface CreateSessionRequest {
  game: string;
  agent?: string;
  seats?: string[];
  seed?: number;
}

export interface MoveResponse {
  state: StatePayload;
  last_seq: number;
}

/** Thin typed client over the boardlab JSON API. */
export class Api {
  constructor(
    public readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    let payload: unknown = null;
    try {
      payload = await resp.json();
    } catch {
      /* non-JSON error body */
    }
    if (!resp.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : `request failed (${resp.status})`;
      throw new ApiError(resp.status, detail);
    }
    return payload as T;
  }

  listGames(): Promise<{ games: GameListing[] }> {
    return this.request("GET", "/games");
  }

  listAgents(game?: string): Promise<AgentListing> {
    const q = game ? `?game=${encodeURIComponent(game)}` : "";
    return this.request("GET", `/agents${q}`);
  }

  createSession(req: CreateSessionRequest): Promise<SessionInfo> {
    return this.request("POST", "/session", req);
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.request("GET", `/session/${id}`);
  }

  move(id: string, action: number, seat: number): Promise<MoveResponse> {
    return this.request("POST", `/session/${id}/move`, { action, seat });
  }

  undo(id: string): Promise<MoveResponse> {
    return this.request("POST", `/session/${id}/undo`);
  }

  inspect(id: string): Promise<InspectPayload> {
    return this.request("GET", `/session/${id}/inspect`);
  }

  eventsUrl(id: string, since: number): string {
    return `${this.baseUrl}/session/${id}/events?since=${since}`;
  }
}
