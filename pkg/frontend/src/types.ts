/** Wire types mirroring the annotation service's JSON payloads. */

export type LabelValue = "aligned" | "partial" | "not_aligned";

export const LABELS: readonly LabelValue[] = ["aligned", "partial", "not_aligned"];

export const LABEL_TEXT: Record<LabelValue, string> = {
  aligned: "aligned",
  partial: "partially-aligned",
  not_aligned: "not-aligned",
};

export interface PairSummary {
  pair_id: string;
  simple_doc_id: string;
  labeled_count: number;
  total_candidates: number;
}

export interface SentencePayload {
  text: string;
  sent_index: number;
}

export interface DocPayload {
  doc_id: string;
  level: number;
  paragraphs: SentencePayload[][];
}

export interface CandidatePayload {
  simple_sent: number;
  complex_sent: number;
  similarity: number | null;
  predicted_label: LabelValue | null;
  human_label: LabelValue | null;
}

export interface PairDetail {
  pair_id: string;
  simple: DocPayload;
  complex: DocPayload;
  candidates: CandidatePayload[];
}

export interface StoredLabel {
  pair_id: string;
  simple_sent: number;
  complex_sent: number;
  label: LabelValue;
  source: string;
  timestamp: string;
}
