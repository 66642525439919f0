import type { CandidateState, PairSession } from "./state.js";
import { displayedLabel, isDirty } from "./state.js";
import type { DocPayload, LabelValue, PairDetail, PairSummary } from "./types.js";
import { LABELS, LABEL_TEXT } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface DashboardHandlers {
  onOpen: (pairId: string) => void;
  onToggleFilter: (hideComplete: boolean) => void;
  onRefresh: () => void;
}

export function renderDashboard(
  container: HTMLElement,
  summaries: PairSummary[],
  hideComplete: boolean,
  handlers: DashboardHandlers,
): void {
  container.replaceChildren();
  const bar = el("div", "toolbar");
  const filterLabel = el("label", "filter-toggle");
  const checkbox = el("input") as HTMLInputElement;
  checkbox.type = "checkbox";
  checkbox.checked = hideComplete;
  checkbox.id = "hide-complete";
  checkbox.addEventListener("change", () => handlers.onToggleFilter(checkbox.checked));
  filterLabel.append(checkbox, document.createTextNode(" hide fully labeled pairs"));
  const refresh = el("button", "refresh", "refresh (g)");
  refresh.addEventListener("click", handlers.onRefresh);
  bar.append(filterLabel, refresh);
  container.append(bar);

  const list = el("ul", "pair-list");
  const ordered = [...summaries].sort((a, b) => {
    const aDone = a.labeled_count >= a.total_candidates ? 1 : 0;
    const bDone = b.labeled_count >= b.total_candidates ? 1 : 0;
    return aDone - bDone || a.pair_id.localeCompare(b.pair_id);
  });
  for (const summary of ordered) {
    const done = summary.labeled_count >= summary.total_candidates;
    if (hideComplete && done) continue;
    const item = el("li", done ? "pair-row complete" : "pair-row");
    const link = el("a", "pair-link", summary.pair_id);
    link.href = `#/pair/${encodeURIComponent(summary.pair_id)}`;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      handlers.onOpen(summary.pair_id);
    });
    const progress = el(
      "span", "progress",
      `${summary.labeled_count}/${summary.total_candidates} labeled`,
    );
    item.append(link, el("span", "doc-id", summary.simple_doc_id), progress);
    list.append(item);
  }
  container.append(list);
  if (!list.childElementCount) {
    container.append(el("p", "empty-state", "no pairs to show"));
  }
}

function renderDocument(
  doc: DocPayload,
  side: "simple" | "complex",
  highlighted: Set<number>,
  onSentenceClick?: (index: number) => void,
): HTMLElement {
  const pane = el("section", `pane pane-${side}`);
  pane.append(el("h3", "pane-title", `${side} (${doc.doc_id})`));
  for (const paragraph of doc.paragraphs) {
    const block = el("p", "paragraph");
    for (const sentence of paragraph) {
      const span = el("span", "sentence", sentence.text + " ");
      span.dataset.side = side;
      span.dataset.index = String(sentence.sent_index);
      if (highlighted.has(sentence.sent_index)) span.classList.add("highlight");
      if (onSentenceClick) {
        span.addEventListener("click", () => onSentenceClick(sentence.sent_index));
      }
      block.append(span);
    }
    pane.append(block);
  }
  return pane;
}

function stateBadge(candidate: CandidateState): HTMLElement {
  switch (candidate.saveState) {
    case "unsaved":
      return el("span", "badge pending", "pending");
    case "saving":
      return el("span", "badge pending", "saving…");
    case "failed":
      return el("span", "badge failed", "failed – retry (r)");
    default:
      return candidate.humanLabel
        ? el("span", "badge human", "human")
        : el("span", "badge predicted", candidate.predictedLabel ? "predicted" : "unlabeled");
  }
}

export interface PairViewHandlers {
  onSelect: (index: number) => void;
  onLabel: (label: LabelValue) => void;
  onSave: () => void;
  onBack: () => void;
}

export function renderPairView(
  container: HTMLElement,
  detail: PairDetail,
  session: PairSession,
  handlers: PairViewHandlers,
): void {
  container.replaceChildren();
  const bar = el("div", "toolbar");
  const back = el("button", "back", "< pairs (esc)");
  back.addEventListener("click", handlers.onBack);
  bar.append(back, el("span", "pair-title", detail.pair_id));
  for (const label of LABELS) {
    const idx = LABELS.indexOf(label) + 1;
    const button = el("button", `label-btn label-${label}`, `${idx} ${LABEL_TEXT[label]}`);
    button.addEventListener("click", () => handlers.onLabel(label));
    bar.append(button);
  }
  const save = el("button", "save-btn", "save (enter)");
  save.addEventListener("click", handlers.onSave);
  bar.append(save);
  container.append(bar);

  if (!session.candidates.length) {
    container.append(el("p", "empty-state", "no candidates for this pair"));
    return;
  }

  const selected = session.candidates[session.selected];
  const panes = el("div", "panes");
  panes.append(
    renderDocument(detail.simple, "simple", new Set([selected.simpleSent])),
    renderDocument(detail.complex, "complex", new Set([selected.complexSent])),
  );
  container.append(panes);

  const table = el("ul", "candidate-list");
  session.candidates.forEach((candidate, index) => {
    const row = el("li", index === session.selected ? "candidate selected" : "candidate");
    row.tabIndex = 0;
    row.addEventListener("click", () => handlers.onSelect(index));
    const label = displayedLabel(candidate);
    row.append(
      el("span", "cand-pair", `s${candidate.simpleSent} ↔ c${candidate.complexSent}`),
      el("span", "cand-sim",
         candidate.similarity === null ? "–" : candidate.similarity.toFixed(3)),
      el("span", `cand-label label-${label ?? "none"}`,
         label ? LABEL_TEXT[label] : "unlabeled"),
      stateBadge(candidate),
    );
    if (isDirty(candidate)) row.classList.add("dirty");
    if (candidate.error) row.title = candidate.error;
    table.append(row);
  });
  container.append(table);
}

export function renderBanner(
  container: HTMLElement,
  message: string | null,
  onRetry: (() => void) | null,
): void {
  container.replaceChildren();
  if (!message) return;
  const banner = el("div", "banner");
  banner.append(el("span", "banner-text", message));
  if (onRetry) {
    const retry = el("button", "banner-retry", "retry");
    retry.addEventListener("click", onRetry);
    banner.append(retry);
  }
  container.append(banner);
}
