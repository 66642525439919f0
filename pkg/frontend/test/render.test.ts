// @vitest-environment happy-dom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { renderBanner, renderDashboard, renderPairView } from "../src/render.js";
import { sessionFromDetail, setDraft } from "../src/state.js";
import type { PairDetail, PairSummary } from "../src/types.js";

const detail: PairDetail = {
  pair_id: "p0",
  simple: {
    doc_id: "s", level: 1,
    paragraphs: [[{ text: "short one .", sent_index: 0 },
                  { text: "short two .", sent_index: 1 }]],
  },
  complex: {
    doc_id: "c", level: 0,
    paragraphs: [[{ text: "long one .", sent_index: 0 }],
                 [{ text: "long two .", sent_index: 1 }]],
  },
  candidates: [
    { simple_sent: 0, complex_sent: 0, similarity: 0.9, predicted_label: "aligned", human_label: null },
    { simple_sent: 1, complex_sent: 1, similarity: 0.4, predicted_label: null, human_label: null },
  ],
};

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<main id='view'></main>";
  container = document.getElementById("view")!;
});

const noopHandlers = {
  onSelect: () => {}, onLabel: () => {}, onSave: () => {}, onBack: () => {},
};

describe("renderPairView", () => {
  it("shows an empty state for a pair without candidates", () => {
    const empty = { ...detail, candidates: [] };
    renderPairView(container, empty, sessionFromDetail(empty), noopHandlers);
    expect(container.querySelector(".empty-state")?.textContent).toContain("no candidates");
  });

  it("highlights both sides of the selected candidate", () => {
    const session = sessionFromDetail(detail);
    session.selected = 1;
    renderPairView(container, detail, session, noopHandlers);
    const highlights = [...container.querySelectorAll(".sentence.highlight")];
    expect(highlights).toHaveLength(2);
    expect(highlights.map((e) => (e as HTMLElement).dataset.side).sort())
      .toEqual(["complex", "simple"]);
    expect(highlights.every((e) => (e as HTMLElement).dataset.index === "1")).toBe(true);
  });

  it("marks an unsaved draft label as pending", () => {
    const session = sessionFromDetail(detail);
    setDraft(session, "partial");          // what pressing "2" does
    renderPairView(container, detail, session, noopHandlers);
    const selectedRow = container.querySelector(".candidate.selected")!;
    expect(selectedRow.textContent).toContain("partially-aligned");
    expect(selectedRow.querySelector(".badge.pending")).not.toBeNull();
    expect(selectedRow.classList.contains("dirty")).toBe(true);
  });

  it("clears the pending marker once the label is confirmed", () => {
    const session = sessionFromDetail(detail);
    session.candidates[0].humanLabel = "partial";   // as if the POST succeeded
    renderPairView(container, detail, session, noopHandlers);
    const selectedRow = container.querySelector(".candidate.selected")!;
    expect(selectedRow.querySelector(".badge.pending")).toBeNull();
    expect(selectedRow.querySelector(".badge.human")).not.toBeNull();
  });

  it("clicking a candidate raises onSelect", () => {
    const session = sessionFromDetail(detail);
    const onSelect = vi.fn();
    renderPairView(container, detail, session, { ...noopHandlers, onSelect });
    const rows = container.querySelectorAll(".candidate");
    (rows[1] as HTMLElement).click();
    expect(onSelect).toHaveBeenCalledWith(1);
  });

  it("label buttons raise onLabel", () => {
    const session = sessionFromDetail(detail);
    const onLabel = vi.fn();
    renderPairView(container, detail, session, { ...noopHandlers, onLabel });
    (container.querySelector(".label-btn.label-partial") as HTMLElement).click();
    expect(onLabel).toHaveBeenCalledWith("partial");
  });
});

describe("renderDashboard", () => {
  const summaries: PairSummary[] = [
    { pair_id: "done", simple_doc_id: "d1", labeled_count: 4, total_candidates: 4 },
    { pair_id: "open", simple_doc_id: "d2", labeled_count: 1, total_candidates: 3 },
  ];
  const handlers = { onOpen: () => {}, onToggleFilter: () => {}, onRefresh: () => {} };

  it("shows counts and sorts unlabeled pairs first", () => {
    renderDashboard(container, summaries, false, handlers);
    const rows = [...container.querySelectorAll(".pair-row")];
    expect(rows).toHaveLength(2);
    expect(rows[0].textContent).toContain("open");
    expect(rows[0].textContent).toContain("1/3 labeled");
    expect(rows[1].textContent).toContain("4/4 labeled");
  });

  it("filter hides complete pairs", () => {
    renderDashboard(container, summaries, true, handlers);
    const rows = [...container.querySelectorAll(".pair-row")];
    expect(rows).toHaveLength(1);
    expect(rows[0].textContent).toContain("open");
  });

  it("filter checkbox reflects and reports its state", () => {
    const onToggleFilter = vi.fn();
    renderDashboard(container, summaries, true, { ...handlers, onToggleFilter });
    const checkbox = container.querySelector("#hide-complete") as HTMLInputElement;
    expect(checkbox.checked).toBe(true);
    checkbox.checked = false;
    checkbox.dispatchEvent(new Event("change"));
    expect(onToggleFilter).toHaveBeenCalledWith(false);
  });
});

describe("renderBanner", () => {
  it("shows a retry banner on failure and clears it", () => {
    const onRetry = vi.fn();
    renderBanner(container, "could not load pairs", onRetry);
    expect(container.querySelector(".banner-text")?.textContent)
      .toContain("could not load pairs");
    (container.querySelector(".banner-retry") as HTMLElement).click();
    expect(onRetry).toHaveBeenCalled();
    renderBanner(container, null, null);
    expect(container.querySelector(".banner")).toBeNull();
  });
});
