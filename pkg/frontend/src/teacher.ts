import { ApiClient } from "./api.js";
import type { QuestionStatsRow, TeacherQuestion } from "./types.js";

export type SortKey = "phi" | "correct";

export interface TeacherRow {
  question: TeacherQuestion;
  stats: QuestionStatsRow | null;
  marked: boolean;
}

/**
 * Teacher browsing state: ranked questions filtered by the gap-score
 * slider, sortable by score or observed correct ratio, with a mark set
 * for assembling a quiz. Data comes exclusively from /questions and
 * /stats/questions.
 */
export class TeacherView {
  minGap = 0.8;
  sortBy: SortKey = "phi";
  targetFilter = "";
  rows: TeacherRow[] = [];
  private marks = new Set<string>();
  private statsById = new Map<string, QuestionStatsRow>();

  constructor(private readonly api: ApiClient) {}

  async load(): Promise<void> {
    const [questions, stats] = await Promise.all([
      this.api.listQuestions({
        minGap: this.minGap,
        target: this.targetFilter || undefined,
      }),
      this.api.questionStats(),
    ]);
    this.statsById = new Map(stats.map((row) => [row.question_id, row]));
    this.rows = questions.map((question) => ({
      question,
      stats: this.statsById.get(question.question_id) ?? null,
      marked: this.marks.has(question.question_id),
    }));
    this.sort();
  }

  async setMinGap(value: number): Promise<void> {
    this.minGap = value;
    await this.load();
  }

  async setTargetFilter(target: string): Promise<void> {
    this.targetFilter = target;
    await this.load();
  }

  setSort(key: SortKey): void {
    this.sortBy = key;
    this.sort();
  }

  private sort(): void {
    const ratio = (row: TeacherRow) => row.stats?.exact_ratio ?? -1;
    this.rows.sort((a, b) =>
      this.sortBy === "phi"
        ? b.question.phi - a.question.phi
        : ratio(b) - ratio(a),
    );
  }

  toggleMark(questionId: string): void {
    if (this.marks.has(questionId)) {
      this.marks.delete(questionId);
    } else {
      this.marks.add(questionId);
    }
    for (const row of this.rows) {
      row.marked = this.marks.has(row.question.question_id);
    }
  }

  get markedCount(): number {
    return this.marks.size;
  }

  /** A quiz set needs at least one marked question. */
  get canCreateSession(): boolean {
    return this.marks.size > 0;
  }

  /**
   * Create a session sized to the marked set. The service draws a
   * seeded shuffle from everything at the current threshold (there is
   * no per-id session endpoint), so the marks choose the count and the
   * threshold guarantees quality.
   */
  async createSession(hintMode: boolean, seed?: number): Promise<string> {
    if (!this.canCreateSession) throw new Error("no questions marked");
    const session = await this.api.createSession({
      n_questions: this.marks.size,
      min_gap: this.minGap,
      hint_mode: hintMode,
      seed,
    });
    return session.session_id;
  }
}
