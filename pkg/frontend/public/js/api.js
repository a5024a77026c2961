// Typed client for the recommendation service JSON API. The only
// configuration is the API base URL; every payload shape mirrors the
// server's wire format exactly.
export class ApiError extends Error {
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function parseError(response) {
    try {
        const body = await response.json();
        const err = body?.error;
        if (err && typeof err.code === "string") {
            return new ApiError(response.status, err.code, err.message ?? err.code);
        }
    }
    catch {
        // fall through to the generic error below
    }
    return new ApiError(response.status, "http_error", `request failed with ${response.status}`);
}
export class ApiClient {
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async request(path, init) {
        const response = await fetch(this.baseUrl + path, {
            headers: { "Content-Type": "application/json" },
            ...init,
        });
        if (!response.ok) {
            throw await parseError(response);
        }
        return response;
    }
    async getSubjects() {
        const response = await this.request("/api/subjects");
        return (await response.json()).subjects;
    }
    async createSession(student, subject, phase) {
        const response = await this.request("/api/sessions", {
            method: "POST",
            body: JSON.stringify({ student, subject, phase }),
        });
        return response.json();
    }
    async getSession(sessionId) {
        const response = await this.request(`/api/sessions/${sessionId}`);
        return response.json();
    }
    /** Submit one answer. A duplicate-answer 409 means the server already has
     * it recorded, so it is absorbed rather than surfaced. */
    async submitAnswer(sessionId, questionId, option) {
        try {
            await this.request(`/api/sessions/${sessionId}/answers`, {
                method: "POST",
                body: JSON.stringify({ question_id: questionId, option }),
            });
        }
        catch (err) {
            if (err instanceof ApiError && err.code === "duplicate_answer") {
                return;
            }
            throw err;
        }
    }
    async finalize(sessionId) {
        const response = await this.request(`/api/sessions/${sessionId}/finalize`, {
            method: "POST",
        });
        return response.json();
    }
}
