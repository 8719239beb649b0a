/** Typed access to the recorded API fixtures (see scripts/record_fixtures.py). */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  ApiErrorBody,
  Assignment,
  AssignmentStatus,
  Association,
  Child,
  DueDatePreview,
  Exercise,
  ExerciseConfiguration,
  ExerciseType,
  HomeworkTemplate,
  ParonymPair,
  ProgressSummary,
  ReportResponse,
  OutcomesPayload,
  TargetSound,
  Word,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const fixtures = {
  words: load<Word[]>("words.json"),
  paronyms: load<ParonymPair[]>("paronyms.json"),
  sounds: load<TargetSound[]>("sounds.json"),
  exerciseTypes: load<ExerciseType[]>("exercise-types.json"),
  exerciseSubtypes: load<ExerciseType[]>("exercise-subtypes.json"),
  associations: load<Association[]>("associations.json"),
  exercises: load<Exercise[]>("exercises.json"),
  exercisesBySound: load<Exercise[]>("exercises-by-sound.json"),
  configurations: load<ExerciseConfiguration[]>("configurations-1.json"),
  templates: load<HomeworkTemplate[]>("templates.json"),
  children: load<Child[]>("children.json"),
  assignments: load<Assignment[]>("assignments.json"),
  statusReported: load<AssignmentStatus>("status-reported.json"),
  statusPending: load<AssignmentStatus>("status-pending.json"),
  outcomes: load<OutcomesPayload>("outcomes-1.json"),
  progress: load<ProgressSummary>("progress-1.json"),
  dueDate: load<DueDatePreview>("due-date.json"),
  reportResponse: load<ReportResponse>("report-response.json"),
  errorStillReferenced: load<ApiErrorBody>("error-still-referenced.json"),
  errorValidation: load<ApiErrorBody>("error-validation.json"),
  errorAlreadyReported: load<ApiErrorBody>("error-already-reported.json"),
};
