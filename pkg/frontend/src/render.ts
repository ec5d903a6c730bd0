import type { QuizViewState } from "./studentFlow.js";
import type { TeacherRow } from "./teacher.js";

const BLANK_MARKER = "(____)";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/**
 * The sentence with the blank marker swapped for the answer input.
 * Everything around the blank is escaped; the input receives whatever
 * the student typed previously if a retry is pending.
 */
export function renderBlankSentence(maskedText: string, pendingAnswer: string | null): string {
  const at = maskedText.indexOf(BLANK_MARKER);
  if (at < 0) {
    return `<span class="sentence">${escapeHtml(maskedText)}</span>`;
  }
  const before = escapeHtml(maskedText.slice(0, at));
  const after = escapeHtml(maskedText.slice(at + BLANK_MARKER.length));
  const value = pendingAnswer === null ? "" : ` value="${escapeHtml(pendingAnswer)}"`;
  return (
    `<span class="sentence">${before}` +
    `<input id="answer-input" class="blank" autocomplete="off" spellcheck="false"${value}>` +
    `${after}</span>`
  );
}

export function renderStudent(state: QuizViewState): string {
  if (!state.sessionId) {
    return `<p class="muted">Start a session to begin.</p>`;
  }
  if (state.finished && state.summary) {
    const s = state.summary;
    return `
      <section class="summary">
        <h2>Session complete</h2>
        <p>Questions: ${s.n_questions}</p>
        <p>Exact match: <strong>${s.exact_ratio.toFixed(1)}%</strong></p>
        <p>Stem match: <strong>${s.stem_ratio.toFixed(1)}%</strong></p>
        <p>With hint (exact): <strong>${s.with_hint_exact_ratio.toFixed(1)}%</strong></p>
        <p>With hint (stem): <strong>${s.with_hint_stem_ratio.toFixed(1)}%</strong></p>
      </section>`;
  }
  if (!state.question) {
    return `<p class="muted">Loading…</p>`;
  }
  const parts: string[] = [];
  parts.push(
    `<p class="progress">Question ${state.index + 1} of ${state.total}` +
      ` · correct so far: ${state.correctSoFar}</p>`,
  );
  parts.push(renderBlankSentence(state.question.masked_text, state.pendingAnswer));
  if (state.hint) {
    parts.push(
      `<p class="hint">Hint: the word starts with ` +
        `<strong>${escapeHtml(state.hint.value)}</strong></p>`,
    );
  }
  if (state.lastGrade && !state.lastGrade.exact && !state.revealedAnswer) {
    parts.push(`<p class="feedback wrong">Not quite, try once more.</p>`);
  }
  if (state.revealedAnswer) {
    const grade = state.lastGrade;
    const verdict = grade?.exact ? "Correct!" : "The answer was";
    parts.push(
      `<p class="feedback ${grade?.exact ? "right" : "wrong"}">${verdict} ` +
        `<strong>${escapeHtml(state.revealedAnswer)}</strong>` +
        `${grade && !grade.exact && grade.stem ? " (stem matched)" : ""}</p>`,
    );
    parts.push(`<button id="next-button">Next</button>`);
  } else {
    parts.push(`<button id="submit-button">Submit</button>`);
  }
  if (state.error) {
    parts.push(`<p class="error">${escapeHtml(state.error)}</p>`);
  }
  return `<section class="question">${parts.join("\n")}</section>`;
}

export function renderTeacherTable(rows: TeacherRow[]): string {
  if (rows.length === 0) {
    return `<p class="muted">No questions at this threshold.</p>`;
  }
  const body = rows
    .map((row) => {
      const q = row.question;
      const candidates = q.top_candidates
        .map(([word, conf]) => `${escapeHtml(word)} ${(conf * 100).toFixed(1)}%`)
        .join(", ");
      const ratio =
        row.stats && row.stats.n_answers > 0
          ? `${row.stats.exact_ratio.toFixed(0)}% (${row.stats.n_answers})`
          : "–";
      return `
        <tr data-question-id="${escapeHtml(q.question_id)}">
          <td><input type="checkbox" class="mark" ${row.marked ? "checked" : ""}></td>
          <td>${q.phi.toFixed(3)}</td>
          <td>${ratio}</td>
          <td>${escapeHtml(q.target_word)}</td>
          <td>${escapeHtml(q.masked_text)}</td>
          <td class="candidates">${candidates}</td>
        </tr>`;
    })
    .join("\n");
  return `
    <table class="questions">
      <thead>
        <tr><th></th><th>gap</th><th>correct</th><th>target</th><th>sentence</th><th>top candidates</th></tr>
      </thead>
      <tbody>${body}</tbody>
    </table>`;
}
