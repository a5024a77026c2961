// Typed client for the recommendation service JSON API. The only
// configuration is the API base URL; every payload shape mirrors the
// server's wire format exactly.

export interface QuestionView {
  id: string;
  prompt: string;
  options: string[];
  level: string;
}

export interface SessionCreated {
  session_id: string;
  questions: QuestionView[];
}

export interface Features {
  subject: string;
  bla: number;
  mla: number;
  hla: number;
  avg_score: number;
}

export interface RecommendationView {
  course: string;
  level: string;
  confidence: number;
}

export interface FinalizeResult {
  features: Features;
  recommendation?: RecommendationView;
  performance_score?: number;
}

export interface SessionView {
  session_id: string;
  student: string;
  subject: string;
  phase: string;
  status: "open" | "scored";
  questions: QuestionView[];
  answers: Record<string, number>;
  result: FinalizeResult | null;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    const err = body?.error;
    if (err && typeof err.code === "string") {
      return new ApiError(response.status, err.code, err.message ?? err.code);
    }
  } catch {
    // fall through to the generic error below
  }
  return new ApiError(response.status, "http_error", `request failed with ${response.status}`);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return response;
  }

  async getSubjects(): Promise<string[]> {
    const response = await this.request("/api/subjects");
    return (await response.json()).subjects;
  }

  async createSession(student: string, subject: string, phase: string): Promise<SessionCreated> {
    const response = await this.request("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ student, subject, phase }),
    });
    return response.json();
  }

  async getSession(sessionId: string): Promise<SessionView> {
    const response = await this.request(`/api/sessions/${sessionId}`);
    return response.json();
  }

  /** Submit one answer. A duplicate-answer 409 means the server already has
   * it recorded, so it is absorbed rather than surfaced. */
  async submitAnswer(sessionId: string, questionId: string, option: number): Promise<void> {
    try {
      await this.request(`/api/sessions/${sessionId}/answers`, {
        method: "POST",
        body: JSON.stringify({ question_id: questionId, option }),
      });
    } catch (err) {
      if (err instanceof ApiError && err.code === "duplicate_answer") {
        return;
      }
      throw err;
    }
  }

  async finalize(sessionId: string): Promise<FinalizeResult> {
    const response = await this.request(`/api/sessions/${sessionId}/finalize`, {
      method: "POST",
    });
    return response.json();
  }
}
