export class ApiError extends Error {
    constructor(message, status = null) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
/** Thin JSON client for the annotation service. All failures (network or
 * non-2xx) surface as ApiError so the UI can keep its local state intact. */
export class ApiClient {
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + path, init);
        }
        catch (err) {
            throw new ApiError(`network failure: ${String(err)}`);
        }
        if (!response.ok) {
            let detail = "";
            try {
                detail = await response.text();
            }
            catch {
                // response body unavailable; status alone will have to do
            }
            throw new ApiError(`request failed (${response.status}): ${detail}`, response.status);
        }
        return (await response.json());
    }
    listPairs() {
        return this.request("/api/pairs");
    }
    getPair(pairId) {
        return this.request(`/api/pairs/${encodeURIComponent(pairId)}`);
    }
    postLabel(pairId, simpleSent, complexSent, label) {
        return this.request(`/api/pairs/${encodeURIComponent(pairId)}/labels`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({
                simple_sent: simpleSent,
                complex_sent: complexSent,
                label,
            }),
        });
    }
    async exportAnnotations() {
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + "/api/export");
        }
        catch (err) {
            throw new ApiError(`network failure: ${String(err)}`);
        }
        if (!response.ok) {
            throw new ApiError(`export failed (${response.status})`, response.status);
        }
        return response.text();
    }
}
