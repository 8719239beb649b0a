/** Homework template management: cards plus a create form with item rows. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { errorBanner, escapeHtml, field, option, show } from "../dom.js";
import type { Exercise, HomeworkTemplate, TemplateCard } from "../types.js";

export function toTemplateCard(template: HomeworkTemplate): TemplateCard {
  return {
    id: template.id,
    description: template.description,
    repetitionsPerDay: template.repetitionsPerDay,
    items: template.exerciseItems,
  };
}

export function renderTemplateCard(card: TemplateCard, exercises: Exercise[]): string {
  const titles = new Map(exercises.map((e) => [e.id, e.title]));
  const items = card.items
    .map(
      (item) =>
        `<li>${escapeHtml(titles.get(item.exerciseId) ?? `exercise #${item.exerciseId}`)}` +
        ` <span class="threshold">needs ${show(item.successThresholdPercent)}%</span></li>`,
    )
    .join("");
  return `
  <article class="card template" data-template-id="${show(card.id)}">
    <h3>${escapeHtml(card.description || `Template #${card.id}`)}</h3>
    <p>${show(card.repetitionsPerDay)}x per day recommended</p>
    <ul>${items}</ul>
    <button class="danger" data-action="delete-template" data-id="${show(card.id)}">delete</button>
  </article>`;
}

export function renderTemplatesPage(templates: HomeworkTemplate[], exercises: Exercise[]): string {
  const cards = templates.map((t) => renderTemplateCard(toTemplateCard(t), exercises)).join("");
  const exerciseOptions = exercises
    .map((e) => option(e.id, `${e.title} (#${e.id})`))
    .join("");
  return `
  <h2>Homework templates</h2>
  <div class="page-errors"></div>
  <div class="cards">${cards || `<p class="empty">No templates yet.</p>`}</div>
  <form id="template-form" class="card">
    <h3>New template</h3>
    ${field("Description", `<input name="description">`)}
    ${field("Repetitions per day", `<input name="repetitionsPerDay" type="number" min="1" value="2">`)}
    <fieldset id="template-items">
      <legend>Exercises and success thresholds</legend>
      <div class="item-row">
        ${field("Exercise", `<select name="exerciseId">${exerciseOptions}</select>`)}
        ${field("Threshold %", `<input name="threshold" type="number" min="0" max="100" value="80">`)}
      </div>
    </fieldset>
    <button type="button" data-action="add-item-row">More exercises</button>
    <button type="submit">Create template</button>
    <div class="form-errors"></div>
  </form>`;
}

export function templateFormProblems(data: {
  repetitionsPerDay: number;
  items: { exerciseId: number; successThresholdPercent: number }[];
}): string[] {
  const problems: string[] = [];
  if (data.repetitionsPerDay < 1) {
    problems.push("repetitions per day must be at least 1");
  }
  if (data.items.length === 0) {
    problems.push("pick at least one exercise");
  }
  if (new Set(data.items.map((i) => i.exerciseId)).size !== data.items.length) {
    problems.push("each exercise may appear only once");
  }
  if (data.items.some((i) => i.successThresholdPercent < 0 || i.successThresholdPercent > 100)) {
    problems.push("thresholds must be 0..100");
  }
  return problems;
}

export async function mountTemplatesPage(root: HTMLElement, api: ApiClient): Promise<void> {
  const [templates, exercises] = await Promise.all([api.listTemplates(), api.listExercises()]);
  root.innerHTML = renderTemplatesPage(templates, exercises);

  const form = root.querySelector<HTMLFormElement>("#template-form");
  form?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const errors = form.querySelector(".form-errors")!;
    const exerciseIds = Array.from(form.querySelectorAll<HTMLSelectElement>("select[name=exerciseId]"));
    const thresholds = Array.from(form.querySelectorAll<HTMLInputElement>("input[name=threshold]"));
    const items = exerciseIds.map((select, i) => ({
      exerciseId: Number(select.value),
      successThresholdPercent: Number(thresholds[i]?.value ?? 0),
    }));
    const data = new FormData(form);
    const draft = {
      repetitionsPerDay: Number(data.get("repetitionsPerDay")),
      items,
    };
    const problems = templateFormProblems(draft);
    if (problems.length) {
      errors.innerHTML = errorBanner({ code: "FormIncomplete", message: problems.join("; ") });
      return;
    }
    try {
      await api.createTemplate({
        description: String(data.get("description") ?? ""),
        repetitionsPerDay: draft.repetitionsPerDay,
        exerciseItems: items,
        deficiencyRefs: [],
        testRefs: [],
      });
      await mountTemplatesPage(root, api);
    } catch (error) {
      if (error instanceof ApiError) {
        errors.innerHTML = errorBanner(error.body);
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
    if (action === "add-item-row") {
      const fieldset = root.querySelector("#template-items")!;
      const row = fieldset.querySelector(".item-row")!;
      fieldset.appendChild(row.cloneNode(true));
      return;
    }
    if (action === "delete-template") {
      const pageErrors = root.querySelector(".page-errors")!;
      try {
        await api.deleteTemplate(Number(target.dataset.id));
        await mountTemplatesPage(root, api);
      } catch (error) {
        if (error instanceof ApiError) {
          pageErrors.innerHTML = errorBanner(error.body);
        } else {
          throw error;
        }
      }
    }
  });
}
