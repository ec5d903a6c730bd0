import { ApiClient, NetworkError } from "./api.js";
import type {
  AnswerResponse,
  CurrentResponse,
  GradePayload,
  HintPayload,
  QuestionView,
  SummaryResponse,
} from "./types.js";

/**
 * View state for a quiz session. Every field mirrors what the service
 * returned; transitions happen only in response to API calls, so the
 * server remains the single source of truth (a page refresh rebuilds
 * the same state from GET current).
 */
export interface QuizViewState {
  sessionId: string | null;
  finished: boolean;
  index: number;
  total: number;
  question: QuestionView | null;
  attemptsUsed: number;
  hint: HintPayload | null;
  lastGrade: GradePayload | null;
  revealedAnswer: string | null;
  correctSoFar: number;
  summary: SummaryResponse | null;
  /** Typed answer preserved across a failed submit, for the retry prompt. */
  pendingAnswer: string | null;
  error: string | null;
}

export function initialState(): QuizViewState {
  return {
    sessionId: null,
    finished: false,
    index: 0,
    total: 0,
    question: null,
    attemptsUsed: 0,
    hint: null,
    lastGrade: null,
    revealedAnswer: null,
    correctSoFar: 0,
    summary: null,
    pendingAnswer: null,
    error: null,
  };
}

export class StudentFlow {
  state: QuizViewState = initialState();

  constructor(private readonly api: ApiClient) {}

  private applyCurrent(current: CurrentResponse): void {
    this.state.sessionId = current.session_id;
    this.state.finished = current.finished;
    this.state.index = current.index;
    this.state.total = current.total;
    this.state.question = current.question;
    this.state.attemptsUsed = current.attempts_used;
    this.state.hint = current.hint;
    this.state.correctSoFar = current.correct_so_far;
    this.state.error = null;
  }

  async start(options: {
    nQuestions: number;
    minGap: number;
    hintMode: boolean;
    seed?: number;
  }): Promise<void> {
    const session = await this.api.createSession({
      n_questions: options.nQuestions,
      min_gap: options.minGap,
      hint_mode: options.hintMode,
      seed: options.seed,
    });
    this.state = initialState();
    this.state.sessionId = session.session_id;
    await this.refresh();
  }

  /** Re-sync from the server; used on start and after a page refresh. */
  async refresh(): Promise<void> {
    if (!this.state.sessionId) throw new Error("no active session");
    this.applyCurrent(await this.api.current(this.state.sessionId));
    if (this.state.finished) {
      this.state.summary = await this.api.summary(this.state.sessionId);
    }
  }

  /**
   * Submit the typed answer verbatim. On a network failure the answer is
   * kept in pendingAnswer and the state flags an error so the UI can
   * offer a retry without losing the input.
   */
  async submit(text: string): Promise<AnswerResponse | null> {
    if (!this.state.sessionId || !this.state.question) {
      throw new Error("no current question");
    }
    let response: AnswerResponse;
    try {
      response = await this.api.submitAnswer(
        this.state.sessionId,
        this.state.question.question_id,
        text,
      );
    } catch (error) {
      if (error instanceof NetworkError) {
        this.state.pendingAnswer = text;
        this.state.error = "Could not reach the server. Your answer was kept; retry.";
        return null;
      }
      throw error;
    }
    this.state.pendingAnswer = null;
    this.state.lastGrade = response.grade;
    this.state.hint = response.hint ?? this.state.hint;
    this.state.revealedAnswer = response.answer ?? null;
    if (!response.finalized) {
      // same question, second attempt; attempts come from the grade payload
      this.state.attemptsUsed = response.grade.attempt_number;
      return response;
    }
    return response;
  }

  /** Advance to the server's current question (or the summary screen). */
  async next(): Promise<void> {
    this.state.lastGrade = null;
    this.state.revealedAnswer = null;
    this.state.hint = null;
    await this.refresh();
  }
}
