import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function recordingFetch(status = 200, body: unknown = []) {
  const calls: { input: string; init?: RequestInit }[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    calls.push({ input, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, fetchFn };
}

describe("ApiClient", () => {
  it("lists pairs from /api/pairs", async () => {
    const { calls, fetchFn } = recordingFetch(200, [{ pair_id: "p0" }]);
    const client = new ApiClient("http://host", fetchFn);
    const pairs = await client.listPairs();
    expect(pairs).toEqual([{ pair_id: "p0" }]);
    expect(calls[0].input).toBe("http://host/api/pairs");
  });

  it("escapes pair ids in the path", async () => {
    const { calls, fetchFn } = recordingFetch(200, {});
    await new ApiClient("", fetchFn).getPair("a/b c");
    expect(calls[0].input).toBe("/api/pairs/a%2Fb%20c");
  });

  it("posts labels as JSON", async () => {
    const { calls, fetchFn } = recordingFetch(200, { label: "partial" });
    await new ApiClient("", fetchFn).postLabel("p0", 3, 5, "partial");
    expect(calls[0].input).toBe("/api/pairs/p0/labels");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      simple_sent: 3, complex_sent: 5, label: "partial",
    });
  });

  it("raises ApiError with status on non-2xx", async () => {
    const { fetchFn } = recordingFetch(404, { detail: "nope" });
    const client = new ApiClient("", fetchFn);
    await expect(client.getPair("zzz")).rejects.toMatchObject({
      name: "ApiError", status: 404,
    });
  });

  it("wraps network failures in ApiError", async () => {
    const client = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    await expect(client.listPairs()).rejects.toBeInstanceOf(ApiError);
  });

  it("exports annotation lines as text", async () => {
    const fetchFn = async () => new Response('{"pair_id": "p0"}\n', { status: 200 });
    const text = await new ApiClient("", fetchFn).exportAnnotations();
    expect(text).toContain('"pair_id"');
  });
});
