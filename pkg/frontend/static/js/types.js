/** Wire types mirroring the annotation service's JSON payloads. */
export const LABELS = ["aligned", "partial", "not_aligned"];
export const LABEL_TEXT = {
    aligned: "aligned",
    partial: "partially-aligned",
    not_aligned: "not-aligned",
};
