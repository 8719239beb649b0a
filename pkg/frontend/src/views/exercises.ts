/** Exercise management: filterable list, creation, per-word configuration. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { errorBanner, escapeHtml, field, option, show } from "../dom.js";
import type {
  Association,
  Exercise,
  ExerciseConfiguration,
  ExerciseRow,
  ExerciseType,
  ParonymPair,
  TargetSound,
  Word,
} from "../types.js";

export const DIFFICULTIES = [1, 2, 3, 4, 5];

export function toExerciseRow(exercise: Exercise): ExerciseRow {
  return {
    id: exercise.id,
    title: exercise.title,
    difficulty: exercise.difficulty,
    associationId: exercise.associationId,
  };
}

export function describeAssociation(
  assoc: Association,
  types: ExerciseType[],
  subtypes: ExerciseType[],
  sounds: TargetSound[],
): string {
  const name = (rows: ExerciseType[], id: number) => rows.find((r) => r.id === id)?.name ?? `#${id}`;
  const label = sounds.find((s) => s.id === assoc.soundId)?.label ?? `#${assoc.soundId}`;
  return `${name(types, assoc.typeId)} / ${name(subtypes, assoc.subtypeId)} / sound "${label}"`;
}

export function renderExerciseRows(rows: ExerciseRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty">No exercises match.</p>`;
  }
  const body = rows
    .map(
      (row) =>
        `<tr data-exercise-id="${show(row.id)}">` +
        `<td>${show(row.id)}</td><td>${escapeHtml(row.title)}</td>` +
        `<td><span class="difficulty d${show(row.difficulty)}">${show(row.difficulty)}</span></td>` +
        `<td><button data-action="show-configs" data-id="${show(row.id)}">configuration</button>` +
        ` <button class="danger" data-action="delete-exercise" data-id="${show(row.id)}">delete</button></td>` +
        `</tr>`,
    )
    .join("");
  return `<table class="list"><thead><tr><th>id</th><th>title</th><th>difficulty</th><th></th></tr></thead><tbody>${body}</tbody></table>`;
}

export function renderFilterBar(sounds: TargetSound[], selectedSound: number | undefined): string {
  const options = [option("", "(all sounds)", selectedSound === undefined)]
    .concat(sounds.map((s) => option(s.id, `"${s.label}"`, selectedSound === s.id)))
    .join("");
  return `
  <form id="exercise-filter" class="inline">
    ${field("Target sound", `<select name="soundId">${options}</select>`)}
    <button type="submit">Filter</button>
  </form>`;
}

export function renderExerciseForm(associations: string[]): string {
  const difficultyOptions = DIFFICULTIES.map((d) => option(d, String(d), d === 3)).join("");
  return `
  <form id="exercise-form" class="card">
    <h3>New exercise</h3>
    ${field("Title", `<input name="title" required>`)}
    ${field(
      "Difficulty",
      `<select name="difficulty">${difficultyOptions}</select>`,
      "1 (easiest) to 5 (hardest)",
    )}
    ${field("Association", `<select name="associationId" required>${associations.join("")}</select>`, "type / subtype / target sound")}
    ${field("Instructions", `<textarea name="instructionsText" rows="2" required></textarea>`)}
    <button type="submit">Add exercise</button>
    <div class="form-errors"></div>
  </form>`;
}

export function renderConfigurations(
  exercise: Exercise,
  configs: ExerciseConfiguration[],
  words: Word[],
  pairs: ParonymPair[],
): string {
  const wordText = new Map(words.map((w) => [w.id, w.text]));
  const rows = configs
    .map(
      (c) =>
        `<tr><td>${escapeHtml(wordText.get(c.wordId) ?? `#${c.wordId}`)}</td>` +
        `<td>${c.paronymId === null ? "" : show(c.paronymId)}</td>` +
        `<td>${show(c.param1)}</td><td>${show(c.param2)}</td><td>${show(c.param3)}</td></tr>`,
    )
    .join("");
  const wordOptions = words.map((w) => option(w.id, `${w.text} (#${w.id})`)).join("");
  const pairOptions = [option("", "(none)")]
    .concat(pairs.map((p) => option(p.id, `pair #${p.id}: ${wordText.get(p.wordAId) ?? p.wordAId} ~ ${wordText.get(p.wordBId) ?? p.wordBId}`)))
    .join("");
  return `
  <section class="card" id="config-panel" data-exercise-id="${show(exercise.id)}">
    <h3>Configuration of "${escapeHtml(exercise.title)}"</h3>
    ${
      configs.length
        ? `<table class="list"><thead><tr><th>word</th><th>paronym</th><th>display ms</th><th>has sound</th><th>param3</th></tr></thead><tbody>${rows}</tbody></table>`
        : `<p class="empty">No words configured yet.</p>`
    }
    <form id="config-form" class="inline">
      ${field("Word", `<select name="wordId" required>${wordOptions}</select>`)}
      ${field("Paronym pair", `<select name="paronymId">${pairOptions}</select>`)}
      ${field("Display ms", `<input name="param1" type="number" min="0" value="1500">`)}
      ${field("Contains target sound", `<input type="checkbox" name="param2">`)}
      <button type="submit">Add word to exercise</button>
      <div class="form-errors"></div>
    </form>
  </section>`;
}

export function renderExercisesPage(
  exercises: Exercise[],
  sounds: TargetSound[],
  associationOptions: string[],
  selectedSound: number | undefined,
): string {
  return `
  <h2>Exercises</h2>
  <div class="page-errors"></div>
  <section class="card">
    ${renderFilterBar(sounds, selectedSound)}
    <div id="exercise-list">${renderExerciseRows(exercises.map(toExerciseRow))}</div>
  </section>
  <div id="config-slot"></div>
  ${renderExerciseForm(associationOptions)}`;
}

export function exerciseFormProblems(data: { title: string; difficulty: number }): string[] {
  const problems: string[] = [];
  if (!data.title.trim()) {
    problems.push("title must be non-empty");
  }
  if (!DIFFICULTIES.includes(data.difficulty)) {
    problems.push("difficulty must be between 1 and 5");
  }
  return problems;
}

export async function mountExercisesPage(
  root: HTMLElement,
  api: ApiClient,
  selectedSound?: number,
): Promise<void> {
  const [exercises, sounds, associations, types, subtypes] = await Promise.all([
    api.listExercises(selectedSound === undefined ? undefined : { soundId: selectedSound }),
    api.listSounds(),
    api.listAssociations(),
    api.listExerciseTypes(),
    api.listExerciseSubtypes(),
  ]);
  const associationOptions = associations.map((a) =>
    option(a.id, describeAssociation(a, types, subtypes, sounds)),
  );
  root.innerHTML = renderExercisesPage(exercises, sounds, associationOptions, selectedSound);

  root.querySelector<HTMLFormElement>("#exercise-filter")?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const value = new FormData(event.target as HTMLFormElement).get("soundId");
    await mountExercisesPage(root, api, value ? Number(value) : undefined);
  });

  const form = root.querySelector<HTMLFormElement>("#exercise-form");
  form?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const errors = form.querySelector(".form-errors")!;
    const data = new FormData(form);
    const draft = {
      title: String(data.get("title") ?? ""),
      difficulty: Number(data.get("difficulty")),
    };
    const problems = exerciseFormProblems(draft);
    if (problems.length) {
      errors.innerHTML = errorBanner({ code: "FormIncomplete", message: problems.join("; ") });
      return;
    }
    try {
      const instructions = await api.createInstructions(String(data.get("instructionsText") ?? ""));
      await api.createExercise({
        title: draft.title,
        difficulty: draft.difficulty,
        associationId: Number(data.get("associationId")),
        instructionsId: instructions.id,
      });
      await mountExercisesPage(root, api, selectedSound);
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
    const pageErrors = root.querySelector(".page-errors")!;
    try {
      if (action === "delete-exercise") {
        await api.deleteExercise(Number(target.dataset.id));
        await mountExercisesPage(root, api, selectedSound);
      } else if (action === "show-configs") {
        await mountConfigPanel(root, api, Number(target.dataset.id));
      }
    } catch (error) {
      if (error instanceof ApiError) {
        pageErrors.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });
}

async function mountConfigPanel(root: HTMLElement, api: ApiClient, exerciseId: number): Promise<void> {
  const [exercises, configs, words, pairs] = await Promise.all([
    api.listExercises(),
    api.listConfigurations(exerciseId),
    api.listWords(),
    api.listParonyms(),
  ]);
  const exercise = exercises.find((e) => e.id === exerciseId);
  if (!exercise) {
    return;
  }
  const slot = root.querySelector<HTMLElement>("#config-slot")!;
  slot.innerHTML = renderConfigurations(exercise, configs, words, pairs);
  slot.querySelector<HTMLFormElement>("#config-form")?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const formEl = event.target as HTMLFormElement;
    const errors = formEl.querySelector(".form-errors")!;
    const data = new FormData(formEl);
    try {
      await api.createConfiguration(exerciseId, {
        wordId: Number(data.get("wordId")),
        paronymId: data.get("paronymId") ? Number(data.get("paronymId")) : null,
        param1: Number(data.get("param1") ?? 0),
        param2: data.get("param2") === "on" ? 1 : 0,
        param3: 0,
      });
      await mountConfigPanel(root, api, exerciseId);
    } catch (error) {
      if (error instanceof ApiError) {
        errors.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });
}
