import type { LabelValue, PairDetail, PairSummary, StoredLabel } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null = null) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin JSON client for the annotation service. All failures (network or
 * non-2xx) surface as ApiError so the UI can keep its local state intact. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = "";
      try {
        detail = await response.text();
      } catch {
        // response body unavailable; status alone will have to do
      }
      throw new ApiError(`request failed (${response.status}): ${detail}`, response.status);
    }
    return (await response.json()) as T;
  }

  listPairs(): Promise<PairSummary[]> {
    return this.request<PairSummary[]>("/api/pairs");
  }

  getPair(pairId: string): Promise<PairDetail> {
    return this.request<PairDetail>(`/api/pairs/${encodeURIComponent(pairId)}`);
  }

  postLabel(
    pairId: string,
    simpleSent: number,
    complexSent: number,
    label: LabelValue,
  ): Promise<StoredLabel> {
    return this.request<StoredLabel>(`/api/pairs/${encodeURIComponent(pairId)}/labels`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        simple_sent: simpleSent,
        complex_sent: complexSent,
        label,
      }),
    });
  }

  async exportAnnotations(): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + "/api/export");
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`export failed (${response.status})`, response.status);
    }
    return response.text();
  }
}
