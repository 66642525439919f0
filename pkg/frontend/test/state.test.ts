import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import {
  displayedLabel,
  isDirty,
  labeledCount,
  moveSelection,
  saveSelected,
  selectedCandidate,
  sessionFromDetail,
  setDraft,
} from "../src/state.js";
import type { PairDetail } from "../src/types.js";

const detail: PairDetail = {
  pair_id: "p0",
  simple: { doc_id: "s", level: 1, paragraphs: [[{ text: "a b .", sent_index: 0 }]] },
  complex: { doc_id: "c", level: 0, paragraphs: [[{ text: "a b c .", sent_index: 0 }]] },
  candidates: [
    { simple_sent: 0, complex_sent: 0, similarity: 0.8, predicted_label: "aligned", human_label: null },
    { simple_sent: 0, complex_sent: 1, similarity: 0.2, predicted_label: null, human_label: "not_aligned" },
    { simple_sent: 1, complex_sent: 1, similarity: 0.5, predicted_label: null, human_label: null },
  ],
};

function flakyClient(failures: number): { client: ApiClient; calls: () => number } {
  let calls = 0;
  const fetchFn = async (_input: string, init?: RequestInit): Promise<Response> => {
    calls += 1;
    if (calls <= failures) throw new Error("connection refused");
    const body = JSON.parse(String(init?.body));
    return new Response(JSON.stringify({
      pair_id: "p0",
      simple_sent: body.simple_sent,
      complex_sent: body.complex_sent,
      label: body.label,
      source: "human",
      timestamp: "2024-01-01T00:00:00+00:00",
    }), { status: 200, headers: { "Content-Type": "application/json" } });
  };
  return { client: new ApiClient("", fetchFn), calls: () => calls };
}

describe("sessionFromDetail", () => {
  it("maps candidates and selects the first", () => {
    const session = sessionFromDetail(detail);
    expect(session.pairId).toBe("p0");
    expect(session.candidates).toHaveLength(3);
    expect(session.selected).toBe(0);
    expect(session.candidates[1].humanLabel).toBe("not_aligned");
    expect(session.candidates.every((c) => c.saveState === "saved")).toBe(true);
  });

  it("empty candidate list selects nothing", () => {
    const session = sessionFromDetail({ ...detail, candidates: [] });
    expect(session.selected).toBe(-1);
    expect(selectedCandidate(session)).toBeNull();
  });
});

describe("displayedLabel", () => {
  it("prefers draft, then human, then predicted", () => {
    const session = sessionFromDetail(detail);
    expect(displayedLabel(session.candidates[0])).toBe("aligned");   // predicted
    expect(displayedLabel(session.candidates[1])).toBe("not_aligned"); // human
    setDraft(session, "partial");
    expect(displayedLabel(session.candidates[0])).toBe("partial");   // draft
  });
});

describe("setDraft", () => {
  it("marks the candidate pending until acknowledged", () => {
    const session = sessionFromDetail(detail);
    setDraft(session, "partial");
    const candidate = session.candidates[0];
    expect(candidate.saveState).toBe("unsaved");
    expect(isDirty(candidate)).toBe(true);
    expect(candidate.humanLabel).toBeNull();     // no mutation before ack
  });

  it("re-picking the confirmed label cancels the draft", () => {
    const session = sessionFromDetail(detail);
    session.selected = 1;
    setDraft(session, "aligned");
    expect(session.candidates[1].saveState).toBe("unsaved");
    setDraft(session, "not_aligned");            // matches confirmed label
    expect(session.candidates[1].saveState).toBe("saved");
    expect(session.candidates[1].draftLabel).toBeNull();
  });
});

describe("saveSelected", () => {
  it("confirms the label from the server response", async () => {
    const session = sessionFromDetail(detail);
    setDraft(session, "partial");
    const { client } = flakyClient(0);
    const ok = await saveSelected(session, client);
    expect(ok).toBe(true);
    const candidate = session.candidates[0];
    expect(candidate.saveState).toBe("saved");
    expect(candidate.humanLabel).toBe("partial");
    expect(candidate.draftLabel).toBeNull();
  });

  it("network failure leaves the original label intact and marks failed", async () => {
    const session = sessionFromDetail(detail);
    session.selected = 1;
    setDraft(session, "aligned");
    const { client } = flakyClient(1);
    const ok = await saveSelected(session, client);
    expect(ok).toBe(false);
    const candidate = session.candidates[1];
    expect(candidate.saveState).toBe("failed");
    expect(candidate.humanLabel).toBe("not_aligned");  // original label intact
    expect(candidate.draftLabel).toBe("aligned");      // draft kept for retry
    expect(candidate.error).toContain("network failure");
  });

  it("retry after failure succeeds", async () => {
    const session = sessionFromDetail(detail);
    setDraft(session, "aligned");
    const { client, calls } = flakyClient(1);
    expect(await saveSelected(session, client)).toBe(false);
    expect(await saveSelected(session, client)).toBe(true);
    expect(calls()).toBe(2);
    expect(session.candidates[0].saveState).toBe("saved");
    expect(session.candidates[0].humanLabel).toBe("aligned");
  });

  it("no-op when nothing is drafted", async () => {
    const session = sessionFromDetail(detail);
    const { client, calls } = flakyClient(0);
    expect(await saveSelected(session, client)).toBe(true);
    expect(calls()).toBe(0);
  });

  it("server rejection (4xx) also lands in failed", async () => {
    const session = sessionFromDetail(detail);
    setDraft(session, "partial");
    const client = new ApiClient("", async () =>
      new Response("bad label", { status: 400 }));
    expect(await saveSelected(session, client)).toBe(false);
    expect(session.candidates[0].saveState).toBe("failed");
    expect(session.candidates[0].humanLabel).toBeNull();
  });
});

describe("selection and counting", () => {
  it("moveSelection clamps to bounds", () => {
    const session = sessionFromDetail(detail);
    moveSelection(session, -1);
    expect(session.selected).toBe(0);
    moveSelection(session, 1);
    moveSelection(session, 1);
    moveSelection(session, 1);
    expect(session.selected).toBe(2);
  });

  it("labeledCount counts confirmed labels only", () => {
    const session = sessionFromDetail(detail);
    expect(labeledCount(session)).toBe(1);
    setDraft(session, "aligned");
    expect(labeledCount(session)).toBe(1);   // drafts do not count
  });
});

describe("ApiError", () => {
  it("carries the status code", () => {
    const err = new ApiError("boom", 503);
    expect(err.status).toBe(503);
    expect(err.name).toBe("ApiError");
  });
});
