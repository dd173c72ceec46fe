import { describe, expect, it, vi } from "vitest";
import { ServiceError, SuggestClient } from "../src/client.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("SuggestClient", () => {
  it("requests /suggest with prefix and user params", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ token: "t1", prefix: "ca", items: [] }),
    );
    const client = new SuggestClient("http://api.test", fetch);
    const resp = await client.suggest("ca", "u7");
    expect(resp.token).toBe("t1");
    const [url, init] = fetch.mock.calls[0];
    expect(url).toBe("http://api.test/suggest?prefix=ca&user=u7");
    expect(init?.signal).toBeUndefined();
  });

  it("omits the user param when not given and passes the abort signal", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ token: "t2", prefix: "x", items: [] }),
    );
    const client = new SuggestClient("http://api.test/", fetch);
    const controller = new AbortController();
    await client.suggest("x", undefined, controller.signal);
    const [url, init] = fetch.mock.calls[0];
    expect(url).toBe("http://api.test/suggest?prefix=x");
    expect(init?.signal).toBe(controller.signal);
  });

  it("url-encodes the prefix", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ token: "t", prefix: "a b", items: [] }),
    );
    const client = new SuggestClient("", fetch);
    await client.suggest("a b&c");
    expect(fetch.mock.calls[0][0]).toBe("/suggest?prefix=a+b%26c");
  });

  it("posts feedback with a numeric position", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ token: "t1", applied: true, position: 2 }),
    );
    const client = new SuggestClient("http://api.test", fetch);
    const resp = await client.feedback("t1", 2);
    expect(resp.applied).toBe(true);
    const [url, init] = fetch.mock.calls[0];
    expect(url).toBe("http://api.test/feedback");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(init?.body as string)).toEqual({ token: "t1", position: 2 });
  });

  it("posts feedback with position null for abandonment", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ token: "t1", applied: true, position: null }),
    );
    const client = new SuggestClient("http://api.test", fetch);
    await client.feedback("t1", null);
    const body = JSON.parse(fetch.mock.calls[0][1]?.body as string);
    expect(body).toEqual({ token: "t1", position: null });
  });

  it("parses /stats verbatim", async () => {
    const stats = {
      strategy: "cascade",
      display_size: 5,
      engines: ["popularity", "recency"],
      served: 3,
      clicks: 1,
      no_clicks: 1,
      expired: 0,
      open_tickets: 1,
      ttl_seconds: 120.0,
      expire_updates: true,
      bandits: [
        {
          position: null,
          actions: [
            { engine: "popularity", rank: null, alpha: 2, beta: 1, mean: 0.667, pulls: 2 },
          ],
        },
      ],
    };
    const fetch = vi.fn(async () => jsonResponse(stats));
    const client = new SuggestClient("http://api.test", fetch);
    expect(await client.stats()).toEqual(stats);
    expect(fetch.mock.calls[0][0]).toBe("http://api.test/stats");
  });

  it("raises ServiceError with the server detail on non-2xx", async () => {
    const fetch = vi.fn(async () =>
      jsonResponse({ detail: "ticket t9: UsedTicketError" }, 409),
    );
    const client = new SuggestClient("http://api.test", fetch);
    const err = await client.feedback("t9", 1).catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(409);
    expect(err.message).toContain("UsedTicketError");
  });

  it("hits the admin snapshot and restore routes", async () => {
    const fetch = vi
      .fn()
      .mockResolvedValueOnce(jsonResponse({ samplers: [] }))
      .mockResolvedValueOnce(jsonResponse({ restored: true }));
    const client = new SuggestClient("http://api.test", fetch);
    const snap = await client.snapshot();
    await client.restore(snap);
    expect(fetch.mock.calls[0][0]).toBe("http://api.test/admin/snapshot");
    expect(fetch.mock.calls[1][0]).toBe("http://api.test/admin/restore");
    expect(JSON.parse(fetch.mock.calls[1][1]?.body as string)).toEqual({
      samplers: [],
    });
  });
});
