/** Child progress: chronological chart plus per-assignment drill-down. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { progressChart } from "../chart.js";
import { errorBanner, option, show } from "../dom.js";
import type { Child, ProgressSummary } from "../types.js";
import { renderOutcomes } from "./sessions.js";

export function renderProgressTable(summary: ProgressSummary): string {
  const rows = summary.perAssignment
    .map(
      (entry) =>
        `<tr data-assignment-id="${show(entry.assignmentId)}">` +
        `<td>${show(entry.assignedDate)}</td>` +
        `<td>#${show(entry.assignmentId)}</td>` +
        `<td>${show(entry.meanBestPercent)}</td>` +
        `<td>${show(entry.resolvedCount)} / ${show(entry.exerciseCount)}</td>` +
        `<td><button data-action="drill-down" data-id="${show(entry.assignmentId)}">details</button></td>` +
        `</tr>`,
    )
    .join("");
  return (
    `<table class="list"><thead><tr>` +
    `<th>assigned</th><th>assignment</th><th>mean best %</th><th>resolved</th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderProgressPage(children: Child[], selected: number | undefined, summary: ProgressSummary | null): string {
  const options = [option("", "(choose a child)", selected === undefined)]
    .concat(children.map((c) => option(c.id, `${c.familyName} ${c.givenName}`, selected === c.id)))
    .join("");
  let body = "";
  if (summary !== null) {
    body =
      summary.perAssignment.length === 0
        ? `<p class="empty">No reported homework yet for this child.</p>`
        : `<section class="card">${progressChart({ childId: summary.childId, points: summary.perAssignment })}</section>
           <section class="card">${renderProgressTable(summary)}</section>
           <div id="drill-down-slot"></div>`;
  }
  return `
  <h2>Progress</h2>
  <div class="page-errors"></div>
  <form id="progress-form" class="inline card">
    <label class="field"><span>Child</span><select name="childId">${options}</select></label>
  </form>
  ${body}`;
}

export async function mountProgressPage(root: HTMLElement, api: ApiClient, childId?: number): Promise<void> {
  const children = await api.listChildren();
  let summary: ProgressSummary | null = null;
  if (childId !== undefined) {
    summary = await api.childProgress(childId);
  }
  root.innerHTML = renderProgressPage(children, childId, summary);

  root.querySelector<HTMLSelectElement>("select[name=childId]")?.addEventListener("change", async (event) => {
    const value = (event.target as HTMLSelectElement).value;
    await mountProgressPage(root, api, value ? Number(value) : undefined);
  });

  root.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== "drill-down") {
      return;
    }
    const slot = root.querySelector<HTMLElement>("#drill-down-slot");
    if (!slot) {
      return;
    }
    try {
      const [payload, exercises] = await Promise.all([
        api.outcomes(Number(target.dataset.id)),
        api.listExercises(),
      ]);
      const titles = new Map(exercises.map((e) => [e.id, e.title]));
      slot.innerHTML =
        `<section class="card"><h3>Assignment #${show(payload.assignmentId)}` +
        `${payload.reportDate ? ` — reported ${show(payload.reportDate)}` : ""}</h3>` +
        `${renderOutcomes(payload, titles)}</section>`;
    } catch (error) {
      if (error instanceof ApiError) {
        root.querySelector(".page-errors")!.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });
}
