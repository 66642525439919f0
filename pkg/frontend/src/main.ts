import { ApiClient } from "./api.js";
import { bindKeyboard, type UiAction } from "./keyboard.js";
import { renderBanner, renderDashboard, renderPairView } from "./render.js";
import {
  moveSelection,
  saveSelected,
  selectedCandidate,
  sessionFromDetail,
  setDraft,
  type PairSession,
} from "./state.js";
import type { PairDetail, PairSummary } from "./types.js";

const client = new ApiClient("");

interface AppState {
  route: { view: "dashboard" } | { view: "pair"; pairId: string };
  summaries: PairSummary[];
  hideComplete: boolean;
  dashboardScroll: number;
  detail: PairDetail | null;
  session: PairSession | null;
}

const state: AppState = {
  route: { view: "dashboard" },
  summaries: [],
  hideComplete: false,
  dashboardScroll: 0,
  detail: null,
  session: null,
};

const view = document.getElementById("view")!;
const bannerHost = document.getElementById("banner")!;

function showError(message: string, retry: () => void): void {
  renderBanner(bannerHost, message, retry);
}

function clearBanner(): void {
  renderBanner(bannerHost, null, null);
}

function render(): void {
  if (state.route.view === "dashboard") {
    renderDashboard(view, state.summaries, state.hideComplete, {
      onOpen: openPair,
      onToggleFilter: (hide) => {
        state.hideComplete = hide;
        render();
      },
      onRefresh: () => void loadDashboard(),
    });
  } else if (state.detail && state.session) {
    renderPairView(view, state.detail, state.session, {
      onSelect: (index) => {
        state.session!.selected = index;
        render();
      },
      onLabel: (label) => {
        setDraft(state.session!, label);
        render();
      },
      onSave: () => void persistSelected(),
      onBack: backToDashboard,
    });
    document.querySelector(".pane-simple .highlight")?.scrollIntoView({ block: "nearest" });
    document.querySelector(".pane-complex .highlight")?.scrollIntoView({ block: "nearest" });
  }
}

async function loadDashboard(): Promise<void> {
  try {
    state.summaries = await client.listPairs();
    clearBanner();
  } catch (err) {
    showError(`could not load pairs: ${String(err)}`, () => void loadDashboard());
  }
  render();
}

async function openPair(pairId: string): Promise<void> {
  state.dashboardScroll = window.scrollY;
  try {
    const detail = await client.getPair(pairId);
    state.detail = detail;
    state.session = sessionFromDetail(detail);
    state.route = { view: "pair", pairId };
    clearBanner();
    render();
    window.scrollTo(0, 0);
  } catch (err) {
    // Fetch failure: stay where we are, offer a retry, lose nothing.
    showError(`could not load ${pairId}: ${String(err)}`, () => void openPair(pairId));
  }
}

function backToDashboard(): void {
  state.route = { view: "dashboard" };
  state.detail = null;
  state.session = null;
  void loadDashboard().then(() => window.scrollTo(0, state.dashboardScroll));
}

async function persistSelected(): Promise<void> {
  if (!state.session) return;
  const candidate = selectedCandidate(state.session);
  if (!candidate || candidate.draftLabel === null) return;
  render();                      // show the saving state
  await saveSelected(state.session, client);
  render();
}

function handleAction(action: UiAction): void {
  if (state.route.view === "dashboard") {
    if (action.kind === "refresh") void loadDashboard();
    return;
  }
  if (!state.session) return;
  switch (action.kind) {
    case "label":
      setDraft(state.session, action.label);
      render();
      break;
    case "next":
      moveSelection(state.session, 1);
      render();
      break;
    case "prev":
      moveSelection(state.session, -1);
      render();
      break;
    case "save":
    case "retry":
      void persistSelected();
      break;
    case "back":
      backToDashboard();
      break;
    case "refresh":
      void openPair(state.route.pairId);
      break;
  }
}

bindKeyboard(window, handleAction);
void loadDashboard();
