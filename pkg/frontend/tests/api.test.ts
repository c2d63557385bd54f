import { describe, expect, it } from "vitest";

import { Api, ApiError, type FetchLike } from "../src/api.js";

interface Call {
  url: string;
  init?: Parameters<FetchLike>[1];
}

function fakeFetch(status: number, payload: unknown) {
  const calls: Call[] = [];
  const fetchFn: FetchLike = (url, init) => {
    calls.push({ url, init });
    return Promise.resolve({
      ok: status >= 200 && status < 300,
      status,
      json: () => Promise.resolve(payload),
    });
  };
  return { calls, fetchFn };
}

describe("Api", () => {
  it("builds URLs from the base and strips trailing slashes", async () => {
    const { calls, fetchFn } = fakeFetch(200, { games: [] });
    const api = new Api("http://localhost:8714/", fetchFn);
    await api.listGames();
    expect(calls[0]!.url).toBe("http://localhost:8714/games");
  });

  it("encodes the agents game filter", async () => {
    const { calls, fetchFn } = fakeFetch(200, { specs: [], files: [] });
    await new Api("http://x", fetchFn).listAgents("nim-1,1,2");
    expect(calls[0]!.url).toBe("http://x/agents?game=nim-1%2C1%2C2");
  });

  it("POSTs JSON bodies for moves", async () => {
    const { calls, fetchFn } = fakeFetch(200, { state: {}, last_seq: 1 });
    await new Api("http://x", fetchFn).move("abc", 4, 0);
    expect(calls[0]!.url).toBe("http://x/session/abc/move");
    expect(calls[0]!.init?.method).toBe("POST");
    expect(JSON.parse(calls[0]!.init!.body!)).toEqual({ action: 4, seat: 0 });
  });

  it("maps error responses to ApiError with the server detail", async () => {
    const { fetchFn } = fakeFetch(409, { detail: "illegal action 3" });
    const api = new Api("http://x", fetchFn);
    const err = await api.move("abc", 3, 0).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).detail).toBe("illegal action 3");
  });

  it("builds the SSE stream URL with the offset", () => {
    const api = new Api("http://x", fakeFetch(200, {}).fetchFn);
    expect(api.eventsUrl("abc", 7)).toBe("http://x/session/abc/events?since=7");
  });
});
