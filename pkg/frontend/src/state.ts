import type { ApiClient } from "./api.js";
import type { CandidatePayload, LabelValue, PairDetail } from "./types.js";

/** Per-candidate label lifecycle. A confirmed (server-acknowledged) label
 * only ever changes in `applyServerAck`; drafts and failures never touch it:
 *
 *   saved --setDraft--> unsaved --save--> saving --ack--> saved
 *                                            \----fail--> failed --retry--> saving
 */
export type SaveState = "saved" | "unsaved" | "saving" | "failed";

export interface CandidateState {
  simpleSent: number;
  complexSent: number;
  similarity: number | null;
  predictedLabel: LabelValue | null;
  humanLabel: LabelValue | null;
  draftLabel: LabelValue | null;
  saveState: SaveState;
  error: string | null;
}

export interface PairSession {
  pairId: string;
  candidates: CandidateState[];
  selected: number;
}

function candidateState(payload: CandidatePayload): CandidateState {
  return {
    simpleSent: payload.simple_sent,
    complexSent: payload.complex_sent,
    similarity: payload.similarity,
    predictedLabel: payload.predicted_label,
    humanLabel: payload.human_label,
    draftLabel: null,
    saveState: "saved",
    error: null,
  };
}

export function sessionFromDetail(detail: PairDetail): PairSession {
  return {
    pairId: detail.pair_id,
    candidates: detail.candidates.map(candidateState),
    selected: detail.candidates.length ? 0 : -1,
  };
}

export function selectedCandidate(session: PairSession): CandidateState | null {
  return session.selected >= 0 ? session.candidates[session.selected] : null;
}

/** The label the UI should show for a candidate: draft first, then the
 * confirmed human label, then the machine prediction. */
export function displayedLabel(candidate: CandidateState): LabelValue | null {
  return candidate.draftLabel ?? candidate.humanLabel ?? candidate.predictedLabel;
}

export function isDirty(candidate: CandidateState): boolean {
  return candidate.saveState !== "saved";
}

export function moveSelection(session: PairSession, delta: number): void {
  if (!session.candidates.length) return;
  const next = session.selected + delta;
  session.selected = Math.min(session.candidates.length - 1, Math.max(0, next));
}

/** Stage a label locally. Re-picking the confirmed label cancels the draft. */
export function setDraft(session: PairSession, label: LabelValue): void {
  const candidate = selectedCandidate(session);
  if (!candidate || candidate.saveState === "saving") return;
  if (candidate.humanLabel === label) {
    candidate.draftLabel = null;
    candidate.saveState = "saved";
    candidate.error = null;
    return;
  }
  candidate.draftLabel = label;
  candidate.saveState = "unsaved";
  candidate.error = null;
}

/** Push the selected candidate's draft to the server. The confirmed label
 * changes only on acknowledgment; on failure the draft and the previous
 * confirmed label both survive, and the candidate is marked failed. */
export async function saveSelected(session: PairSession, client: ApiClient): Promise<boolean> {
  const candidate = selectedCandidate(session);
  if (!candidate || candidate.draftLabel === null) return true;
  if (candidate.saveState === "saving") return false;
  candidate.saveState = "saving";
  candidate.error = null;
  try {
    const stored = await client.postLabel(
      session.pairId, candidate.simpleSent, candidate.complexSent, candidate.draftLabel,
    );
    candidate.humanLabel = stored.label;
    candidate.draftLabel = null;
    candidate.saveState = "saved";
    return true;
  } catch (err) {
    candidate.saveState = "failed";
    candidate.error = err instanceof Error ? err.message : String(err);
    return false;
  }
}

export function labeledCount(session: PairSession): number {
  return session.candidates.filter((c) => c.humanLabel !== null).length;
}
