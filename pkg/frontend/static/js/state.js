function candidateState(payload) {
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
export function sessionFromDetail(detail) {
    return {
        pairId: detail.pair_id,
        candidates: detail.candidates.map(candidateState),
        selected: detail.candidates.length ? 0 : -1,
    };
}
export function selectedCandidate(session) {
    return session.selected >= 0 ? session.candidates[session.selected] : null;
}
/** The label the UI should show for a candidate: draft first, then the
 * confirmed human label, then the machine prediction. */
export function displayedLabel(candidate) {
    return candidate.draftLabel ?? candidate.humanLabel ?? candidate.predictedLabel;
}
export function isDirty(candidate) {
    return candidate.saveState !== "saved";
}
export function moveSelection(session, delta) {
    if (!session.candidates.length)
        return;
    const next = session.selected + delta;
    session.selected = Math.min(session.candidates.length - 1, Math.max(0, next));
}
/** Stage a label locally. Re-picking the confirmed label cancels the draft. */
export function setDraft(session, label) {
    const candidate = selectedCandidate(session);
    if (!candidate || candidate.saveState === "saving")
        return;
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
export async function saveSelected(session, client) {
    const candidate = selectedCandidate(session);
    if (!candidate || candidate.draftLabel === null)
        return true;
    if (candidate.saveState === "saving")
        return false;
    candidate.saveState = "saving";
    candidate.error = null;
    try {
        const stored = await client.postLabel(session.pairId, candidate.simpleSent, candidate.complexSent, candidate.draftLabel);
        candidate.humanLabel = stored.label;
        candidate.draftLabel = null;
        candidate.saveState = "saved";
        return true;
    }
    catch (err) {
        candidate.saveState = "failed";
        candidate.error = err instanceof Error ? err.message : String(err);
        return false;
    }
}
export function labeledCount(session) {
    return session.candidates.filter((c) => c.humanLabel !== null).length;
}
