// Shapes of the quiz service API payloads. The client displays these
// verbatim; no correctness state is ever computed in the browser.

export interface QuestionView {
  question_id: string;
  masked_text: string;
}

export interface GradePayload {
  exact: boolean;
  stem: boolean;
  normalized_answer: string;
  normalized_truth: string;
  used_hint: boolean;
  attempt_number: number;
}

export interface HintPayload {
  kind: string;
  value: string;
}

export interface SessionDescriptor {
  session_id: string;
  n_questions: number;
  hint_mode: boolean;
  created_at: string;
}

export interface CurrentResponse {
  session_id: string;
  finished: boolean;
  index: number;
  total: number;
  answered: number;
  correct_so_far: number;
  question: QuestionView | null;
  attempts_used: number;
  hint: HintPayload | null;
}

export interface AnswerResponse {
  grade: GradePayload;
  hint: HintPayload | null;
  finalized: boolean;
  answer?: string;
}

export interface SummaryResponse {
  n_questions: number;
  exact_ratio: number;
  stem_ratio: number;
  with_hint_exact_ratio: number;
  with_hint_stem_ratio: number;
}

export interface TeacherQuestion {
  question_id: string;
  masked_text: string;
  target_word: string;
  phi: number;
  gini: number;
  rw: number;
  target_rank: number;
  top_candidates: [string, number][];
  source: { doc: string; sentence_id: string };
  model_name: string;
  created_at: string;
}

export interface QuestionStatsRow {
  question_id: string;
  phi: number;
  n_answers: number;
  exact_ratio: number;
  stem_ratio: number;
}

export interface CreateSessionRequest {
  n_questions: number;
  min_gap: number;
  hint_mode: boolean;
  seed?: number;
}
