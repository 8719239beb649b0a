/** The live-visit workflow: assign homework, hand over the bundle, record
 * the returned report.  Statuses and due dates are always the server's. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { errorBanner, escapeHtml, field, noticeBanner, option, show } from "../dom.js";
import type {
  Assignment,
  AssignmentCard,
  AssignmentStatus,
  Child,
  HomeworkTemplate,
  ReportResponse,
} from "../types.js";

export function toAssignmentCard(assignment: Assignment, status: AssignmentStatus | null): AssignmentCard {
  return {
    id: assignment.id,
    childId: assignment.childId,
    templateId: assignment.predefinedHomeworkId,
    assignedDate: assignment.assignedDate,
    deadlineDays: assignment.deadlineDays,
    reportDate: assignment.reportDate,
    status,
  };
}

export function renderStatusBadge(status: AssignmentStatus | null): string {
  if (status === null) {
    return `<span class="badge loading">…</span>`;
  }
  return `<span class="badge status-${escapeHtml(status.status)}">${escapeHtml(status.status)}</span>`;
}

export function renderAssignmentCard(card: AssignmentCard, children: Child[], templates: HomeworkTemplate[]): string {
  const child = children.find((c) => c.id === card.childId);
  const template = templates.find((t) => t.id === card.templateId);
  const childName = child ? `${child.familyName} ${child.givenName}` : `child #${card.childId}`;
  const templateName = template?.description || `template #${card.templateId}`;
  return `
  <article class="card assignment" data-assignment-id="${show(card.id)}">
    <header>
      <h3>#${show(card.id)} ${escapeHtml(childName)}</h3>
      ${renderStatusBadge(card.status)}
    </header>
    <p>${escapeHtml(templateName)} — assigned ${show(card.assignedDate)},
       due in ${show(card.deadlineDays)} days${
         card.status ? ` (due ${show(card.status.dueDate)})` : ""
       }</p>
    ${card.reportDate ? `<p>reported on ${show(card.reportDate)}</p>` : ""}
    <div class="actions">
      <a class="button" data-action="download-bundle" data-id="${show(card.id)}" href="#">device bundle</a>
      ${
        card.reportDate
          ? `<button data-action="show-outcomes" data-id="${show(card.id)}">outcomes</button>`
          : `<button data-action="enter-report" data-id="${show(card.id)}">enter report</button>
             <label class="button">upload results
               <input type="file" accept=".zip" hidden data-action="upload-results" data-id="${show(card.id)}">
             </label>`
      }
    </div>
    <div class="report-slot"></div>
  </article>`;
}

export function renderChildrenPanel(children: Child[]): string {
  const rows = children
    .map((c) => `<tr><td>${show(c.id)}</td><td>${escapeHtml(c.familyName)}</td><td>${escapeHtml(c.givenName)}</td></tr>`)
    .join("");
  return `
  <section class="card">
    <h3>Children</h3>
    ${children.length ? `<table class="list"><thead><tr><th>id</th><th>family name</th><th>given name</th></tr></thead><tbody>${rows}</tbody></table>` : `<p class="empty">No children enrolled yet.</p>`}
    <form id="child-form" class="inline">
      ${field("Family name", `<input name="familyName" required>`)}
      ${field("Given name", `<input name="givenName" required>`)}
      <button type="submit">Enroll</button>
      <div class="form-errors"></div>
    </form>
  </section>`;
}

export function renderAssignForm(children: Child[], templates: HomeworkTemplate[]): string {
  const childOptions = children.map((c) => option(c.id, `${c.familyName} ${c.givenName}`)).join("");
  const templateOptions = templates
    .map((t) => option(t.id, t.description || `template #${t.id}`))
    .join("");
  return `
  <form id="assign-form" class="card">
    <h3>Assign homework</h3>
    ${field("Child", `<select name="childId" required>${childOptions}</select>`)}
    ${field("Template", `<select name="predefinedHomeworkId" required>${templateOptions}</select>`)}
    ${field("Assigned date", `<input name="assignedDate" type="date" required>`)}
    ${field("Deadline (days)", `<input name="deadlineDays" type="number" min="1" value="7">`, "termen")}
    <p class="due-preview" id="due-preview"></p>
    <button type="submit">Assign</button>
    <div class="form-errors"></div>
  </form>`;
}

export function renderReportForm(assignmentId: number, template: HomeworkTemplate, exerciseTitles: Map<number, string>): string {
  const blocks = template.exerciseItems
    .map(
      (item) => `
      <fieldset data-exercise-id="${show(item.exerciseId)}">
        <legend>${escapeHtml(exerciseTitles.get(item.exerciseId) ?? `exercise #${item.exerciseId}`)}
          <span class="threshold">needs ${show(item.successThresholdPercent)}%</span></legend>
        <div class="attempt-rows">
          <div class="attempt-row">
            ${field("Achieved %", `<input name="percent" type="number" min="0" max="100" required>`)}
            ${field("Initially wrong words", `<input name="wrong" type="number" min="0" value="0">`)}
          </div>
        </div>
        <button type="button" data-action="add-attempt-row">Another attempt</button>
      </fieldset>`,
    )
    .join("");
  return `
  <form class="report-form card" data-assignment-id="${show(assignmentId)}">
    <h4>Activity report</h4>
    ${field("Report date", `<input name="reportDate" type="date" required>`)}
    ${blocks}
    <button type="submit">Save report</button>
    <div class="form-errors"></div>
  </form>`;
}

export function renderOutcomes(response: ReportResponse | { outcomes: ReportResponse["outcomes"] }, titles: Map<number, string>): string {
  const rows = response.outcomes
    .map((outcome) => {
      const attempts = outcome.attempts
        .map((a) => `${show(a.achievedPercent)}%${a.initiallyWrongWords ? ` (${show(a.initiallyWrongWords)} wrong)` : ""}`)
        .join(", ");
      return (
        `<tr class="${outcome.resolved ? "resolved" : "unresolved"}">` +
        `<td>${escapeHtml(titles.get(outcome.exerciseId) ?? `exercise #${outcome.exerciseId}`)}</td>` +
        `<td>${attempts || "—"}</td>` +
        `<td>${show(outcome.bestPercent)}%</td>` +
        `<td>${outcome.resolved ? "resolved" : "not resolved"}</td></tr>`
      );
    })
    .join("");
  return `<table class="list outcomes"><thead><tr><th>exercise</th><th>attempts</th><th>best</th><th>outcome</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderSessionsPage(
  children: Child[],
  templates: HomeworkTemplate[],
  cards: AssignmentCard[],
): string {
  const assignments = cards
    .map((card) => renderAssignmentCard(card, children, templates))
    .join("");
  return `
  <h2>Therapy sessions</h2>
  <div class="page-errors"></div>
  ${renderChildrenPanel(children)}
  ${renderAssignForm(children, templates)}
  <section>
    <h3>Assignments</h3>
    <div class="cards">${assignments || `<p class="empty">Nothing assigned yet.</p>`}</div>
  </section>`;
}

export async function mountSessionsPage(root: HTMLElement, api: ApiClient): Promise<void> {
  const [children, templates, assignments, exercises] = await Promise.all([
    api.listChildren(),
    api.listTemplates(),
    api.listAssignments(),
    api.listExercises(),
  ]);
  const statuses = await Promise.all(
    assignments.map((a) => api.assignmentStatus(a.id).catch(() => null)),
  );
  const cards = assignments.map((a, i) => toAssignmentCard(a, statuses[i]));
  root.innerHTML = renderSessionsPage(children, templates, cards);
  const exerciseTitles = new Map(exercises.map((e) => [e.id, e.title]));

  root.querySelector<HTMLFormElement>("#child-form")?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const data = new FormData(form);
    try {
      await api.createChild(String(data.get("familyName") ?? ""), String(data.get("givenName") ?? ""));
      await mountSessionsPage(root, api);
    } catch (error) {
      if (error instanceof ApiError) {
        form.querySelector(".form-errors")!.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });

  const assignForm = root.querySelector<HTMLFormElement>("#assign-form");
  const updatePreview = async () => {
    if (!assignForm) {
      return;
    }
    const data = new FormData(assignForm);
    const assignedDate = String(data.get("assignedDate") ?? "");
    const days = Number(data.get("deadlineDays"));
    const preview = assignForm.querySelector("#due-preview")!;
    if (!assignedDate || days < 1) {
      preview.textContent = "";
      return;
    }
    try {
      // Server-computed preview; the console does no date arithmetic.
      const { dueDate } = await api.dueDatePreview(assignedDate, days);
      preview.textContent = `Due date: ${dueDate}`;
    } catch {
      preview.textContent = "";
    }
  };
  assignForm?.addEventListener("change", updatePreview);
  assignForm?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(assignForm);
    const deadlineDays = Number(data.get("deadlineDays"));
    const errors = assignForm.querySelector(".form-errors")!;
    if (deadlineDays < 1) {
      errors.innerHTML = errorBanner({ code: "FormIncomplete", message: "deadline must be at least 1 day" });
      return;
    }
    try {
      await api.createAssignment({
        childId: Number(data.get("childId")),
        predefinedHomeworkId: Number(data.get("predefinedHomeworkId")),
        assignedDate: String(data.get("assignedDate") ?? ""),
        deadlineDays,
      });
      await mountSessionsPage(root, api);
    } catch (error) {
      if (error instanceof ApiError) {
        errors.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });

  root.addEventListener("change", async (event) => {
    const target = event.target as HTMLInputElement;
    if (target.dataset.action !== "upload-results" || !target.files?.length) {
      return;
    }
    const card = target.closest<HTMLElement>(".assignment")!;
    const slot = card.querySelector<HTMLElement>(".report-slot")!;
    try {
      const response = await api.uploadResults(Number(target.dataset.id), target.files[0]);
      slot.innerHTML = noticeBanner(`Report of ${response.reportDate} imported.`) +
        renderOutcomes(response, exerciseTitles);
      await refreshCard(card, api);
    } catch (error) {
      if (error instanceof ApiError) {
        // AlreadyReported / DigestMismatch are blocking conditions here.
        slot.innerHTML = errorBanner(error.body, error.status === 409);
      } else {
        throw error;
      }
    }
  });

  root.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) {
      return;
    }
    if (action === "add-attempt-row") {
      const rows = target.closest("fieldset")!.querySelector(".attempt-rows")!;
      rows.appendChild(rows.querySelector(".attempt-row")!.cloneNode(true));
      return;
    }
    if (action === "download-bundle") {
      event.preventDefault();
      window.location.href = api.bundleUrl(Number(target.dataset.id));
      return;
    }
    const card = target.closest<HTMLElement>(".assignment");
    if (!card) {
      return;
    }
    const slot = card.querySelector<HTMLElement>(".report-slot")!;
    const assignmentId = Number(target.dataset.id);
    try {
      if (action === "enter-report") {
        const assignment = assignments.find((a) => a.id === assignmentId)!;
        const template = templates.find((t) => t.id === assignment.predefinedHomeworkId)!;
        slot.innerHTML = renderReportForm(assignmentId, template, exerciseTitles);
        wireReportForm(slot, api, exerciseTitles, async (outcomesHtml) => {
          // Re-render for the new status, then keep the outcomes in view.
          await mountSessionsPage(root, api);
          const fresh = root.querySelector<HTMLElement>(
            `.assignment[data-assignment-id="${assignmentId}"] .report-slot`,
          );
          if (fresh) {
            fresh.innerHTML = outcomesHtml;
          }
        });
      } else if (action === "show-outcomes") {
        const payload = await api.outcomes(assignmentId);
        slot.innerHTML = renderOutcomes(payload, exerciseTitles);
      }
    } catch (error) {
      if (error instanceof ApiError) {
        slot.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });
}

function wireReportForm(
  slot: HTMLElement,
  api: ApiClient,
  titles: Map<number, string>,
  done: (outcomesHtml: string) => Promise<void>,
): void {
  const form = slot.querySelector<HTMLFormElement>(".report-form");
  form?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const errors = form.querySelector(".form-errors")!;
    const records: { exerciseId: number; attemptIndex: number; achievedPercent: number; initiallyWrongWords: number }[] = [];
    let clientProblem = "";
    form.querySelectorAll<HTMLElement>("fieldset[data-exercise-id]").forEach((block) => {
      const exerciseId = Number(block.dataset.exerciseId);
      block.querySelectorAll<HTMLElement>(".attempt-row").forEach((row, index) => {
        const percent = Number(row.querySelector<HTMLInputElement>("input[name=percent]")!.value);
        const wrong = Number(row.querySelector<HTMLInputElement>("input[name=wrong]")!.value);
        if (percent < 0 || percent > 100) {
          clientProblem = "percentages must be 0..100";
        }
        records.push({
          exerciseId,
          attemptIndex: index + 1,
          achievedPercent: percent,
          initiallyWrongWords: wrong,
        });
      });
    });
    if (clientProblem) {
      errors.innerHTML = errorBanner({ code: "FormIncomplete", message: clientProblem });
      return;
    }
    const reportDate = String(new FormData(form).get("reportDate") ?? "");
    try {
      // No optimistic UI: the outcome table renders only from the response.
      const response = await api.submitReport(Number(form.dataset.assignmentId), reportDate, records);
      await done(renderOutcomes(response, titles));
    } catch (error) {
      if (error instanceof ApiError) {
        errors.innerHTML = errorBanner(error.body, error.body.code === "AlreadyReported");
      } else {
        throw error;
      }
    }
  });
}

async function refreshCard(card: HTMLElement, api: ApiClient): Promise<void> {
  const id = Number(card.dataset.assignmentId);
  const status = await api.assignmentStatus(id).catch(() => null);
  const badge = card.querySelector(".badge");
  if (badge && status) {
    badge.outerHTML = renderStatusBadge(status);
  }
}
