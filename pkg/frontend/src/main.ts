import { ApiClient } from "./api.js";
import { renderStudent, renderTeacherTable } from "./render.js";
import { StudentFlow } from "./studentFlow.js";
import { TeacherView } from "./teacher.js";

// same-origin by default; ?api=http://host:port points elsewhere
const apiBase = new URLSearchParams(location.search).get("api") ?? "";
const api = new ApiClient(apiBase);
const flow = new StudentFlow(api);
const teacher = new TeacherView(api);

const studentRoot = document.getElementById("student-root") as HTMLElement;
const teacherRoot = document.getElementById("teacher-root") as HTMLElement;

function show(tab: "student" | "teacher"): void {
  document.getElementById("student-panel")!.hidden = tab !== "student";
  document.getElementById("teacher-panel")!.hidden = tab !== "teacher";
}

function repaintStudent(): void {
  studentRoot.innerHTML = renderStudent(flow.state);
  const input = document.getElementById("answer-input") as HTMLInputElement | null;
  if (input) {
    input.focus();
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void submit();
    });
  }
  document.getElementById("submit-button")?.addEventListener("click", () => void submit());
  document.getElementById("next-button")?.addEventListener("click", () => void next());
}

async function submit(): Promise<void> {
  const input = document.getElementById("answer-input") as HTMLInputElement | null;
  if (!input) return;
  // sent verbatim: the server owns normalization and grading
  await flow.submit(input.value);
  repaintStudent();
}

async function next(): Promise<void> {
  await flow.next();
  repaintStudent();
}

async function startSession(): Promise<void> {
  const n = Number((document.getElementById("n-questions") as HTMLInputElement).value);
  const minGap = Number((document.getElementById("student-min-gap") as HTMLInputElement).value);
  const hintMode = (document.getElementById("hint-mode") as HTMLInputElement).checked;
  const seedRaw = (document.getElementById("seed") as HTMLInputElement).value;
  try {
    await flow.start({
      nQuestions: n,
      minGap,
      hintMode,
      seed: seedRaw ? Number(seedRaw) : undefined,
    });
  } catch (error) {
    studentRoot.innerHTML = `<p class="error">${String(error)}</p>`;
    return;
  }
  repaintStudent();
}

async function repaintTeacher(): Promise<void> {
  const slider = document.getElementById("min-gap-slider") as HTMLInputElement;
  document.getElementById("min-gap-value")!.textContent = Number(slider.value).toFixed(2);
  teacherRoot.innerHTML = renderTeacherTable(teacher.rows);
  const button = document.getElementById("create-from-marks") as HTMLButtonElement;
  button.disabled = !teacher.canCreateSession;
  button.textContent = teacher.canCreateSession
    ? `Create session (${teacher.markedCount} questions)`
    : "Create session";
  teacherRoot.querySelectorAll("tr[data-question-id]").forEach((row) => {
    const id = (row as HTMLElement).dataset.questionId!;
    row.querySelector("input.mark")?.addEventListener("change", () => {
      teacher.toggleMark(id);
      void repaintTeacher();
    });
  });
}

function wireTeacherControls(): void {
  const slider = document.getElementById("min-gap-slider") as HTMLInputElement;
  slider.addEventListener("change", async () => {
    await teacher.setMinGap(Number(slider.value));
    await repaintTeacher();
  });
  document.getElementById("sort-phi")!.addEventListener("click", async () => {
    teacher.setSort("phi");
    await repaintTeacher();
  });
  document.getElementById("sort-correct")!.addEventListener("click", async () => {
    teacher.setSort("correct");
    await repaintTeacher();
  });
  const targetBox = document.getElementById("target-filter") as HTMLInputElement;
  targetBox.addEventListener("change", async () => {
    await teacher.setTargetFilter(targetBox.value.trim().toLowerCase());
    await repaintTeacher();
  });
  document.getElementById("create-from-marks")!.addEventListener("click", async () => {
    const hintMode = (document.getElementById("teacher-hint-mode") as HTMLInputElement).checked;
    const sessionId = await teacher.createSession(hintMode);
    const note = document.getElementById("teacher-note")!;
    note.textContent = `Session created: ${sessionId}`;
  });
}

document.getElementById("tab-student")!.addEventListener("click", () => show("student"));
document.getElementById("tab-teacher")!.addEventListener("click", async () => {
  show("teacher");
  await teacher.load();
  await repaintTeacher();
});
document.getElementById("start-session")!.addEventListener("click", () => void startSession());

show("student");
repaintStudent();
