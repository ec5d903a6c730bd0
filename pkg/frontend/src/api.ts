import type {
  AnswerResponse,
  CreateSessionRequest,
  CurrentResponse,
  QuestionStatsRow,
  SessionDescriptor,
  SummaryResponse,
  TeacherQuestion,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure (server unreachable, connection dropped). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body?.error?.code) {
      code = body.error.code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(code, message, response.status);
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string; questions: number }> {
    return this.request("/healthz");
  }

  listQuestions(params: {
    minGap?: number;
    target?: string;
    limit?: number;
  } = {}): Promise<TeacherQuestion[]> {
    const query = new URLSearchParams();
    if (params.minGap !== undefined) query.set("min_gap", String(params.minGap));
    if (params.target) query.set("target", params.target);
    if (params.limit !== undefined) query.set("limit", String(params.limit));
    const suffix = query.toString() ? `?${query}` : "";
    return this.request<{ questions: TeacherQuestion[] }>(`/questions${suffix}`).then(
      (body) => body.questions,
    );
  }

  questionStats(): Promise<QuestionStatsRow[]> {
    return this.request<{ stats: QuestionStatsRow[] }>("/stats/questions").then(
      (body) => body.stats,
    );
  }

  createSession(body: CreateSessionRequest): Promise<SessionDescriptor> {
    return this.post("/sessions", body);
  }

  current(sessionId: string): Promise<CurrentResponse> {
    return this.request(`/sessions/${sessionId}/current`);
  }

  submitAnswer(sessionId: string, questionId: string, text: string): Promise<AnswerResponse> {
    // text goes over the wire verbatim; the server does all normalization
    return this.post(`/sessions/${sessionId}/answer`, {
      question_id: questionId,
      text,
    });
  }

  summary(sessionId: string): Promise<SummaryResponse> {
    return this.request(`/sessions/${sessionId}/summary`);
  }
}
