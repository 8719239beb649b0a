/** Typed fetch client for the logokit API; the only network access the console makes. */

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
  Instructions,
  MediaAsset,
  OutcomesPayload,
  ParonymPair,
  ProgressSummary,
  ReportResponse,
  TargetSound,
  Word,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }
  let body: ApiErrorBody;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = { code: "HttpError", message: `${response.status} ${response.statusText}` };
  }
  throw new ApiError(response.status, body);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const query = params
      ? Object.entries(params)
          .filter(([, v]) => v !== undefined && v !== "")
          .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`)
          .join("&")
      : "";
    return this.base + path + (query ? `?${query}` : "");
  }

  private async get<T>(path: string, params?: Record<string, string | number | undefined>): Promise<T> {
    return unwrap<T>(await fetch(this.url(path, params)));
  }

  private async send<T>(method: string, path: string, payload?: unknown): Promise<T> {
    return unwrap<T>(
      await fetch(this.url(path), {
        method,
        headers: payload === undefined ? undefined : { "Content-Type": "application/json" },
        body: payload === undefined ? undefined : JSON.stringify(payload),
      }),
    );
  }

  private async upload<T>(path: string, file: File): Promise<T> {
    const form = new FormData();
    form.append("file", file, file.name);
    return unwrap<T>(await fetch(this.url(path), { method: "POST", body: form }));
  }

  // content
  listWords(): Promise<Word[]> {
    return this.get("/words");
  }
  createWord(payload: Omit<Word, "id">): Promise<Word> {
    return this.send("POST", "/words", payload);
  }
  deleteWord(id: number): Promise<void> {
    return this.send("DELETE", `/words/${id}`);
  }
  uploadAsset(kind: "sound" | "image", file: File): Promise<MediaAsset> {
    return this.upload(`/assets/${kind}`, file);
  }
  assetFileUrl(assetId: number): string {
    return this.url(`/assets/${assetId}/file`);
  }
  listParonyms(): Promise<ParonymPair[]> {
    return this.get("/paronyms");
  }
  createParonym(wordAId: number, wordBId: number): Promise<ParonymPair> {
    return this.send("POST", "/paronyms", { wordAId, wordBId });
  }
  deleteParonym(id: number): Promise<void> {
    return this.send("DELETE", `/paronyms/${id}`);
  }

  listExercises(filter?: {
    soundId?: number;
    typeId?: number;
    subtypeId?: number;
    difficultyMin?: number;
    difficultyMax?: number;
  }): Promise<Exercise[]> {
    return this.get("/exercises", filter as Record<string, number | undefined>);
  }
  createExercise(payload: Omit<Exercise, "id">): Promise<Exercise> {
    return this.send("POST", "/exercises", payload);
  }
  deleteExercise(id: number): Promise<void> {
    return this.send("DELETE", `/exercises/${id}`);
  }
  listConfigurations(exerciseId: number): Promise<ExerciseConfiguration[]> {
    return this.get(`/exercises/${exerciseId}/configurations`);
  }
  createConfiguration(
    exerciseId: number,
    payload: Omit<ExerciseConfiguration, "id" | "exerciseId">,
  ): Promise<ExerciseConfiguration> {
    return this.send("POST", `/exercises/${exerciseId}/configurations`, payload);
  }
  listExerciseTypes(): Promise<ExerciseType[]> {
    return this.get("/exercise-types");
  }
  createExerciseType(name: string, applicationName: string): Promise<ExerciseType> {
    return this.send("POST", "/exercise-types", { name, applicationName });
  }
  listExerciseSubtypes(): Promise<ExerciseType[]> {
    return this.get("/exercise-subtypes");
  }
  createExerciseSubtype(name: string, applicationName: string): Promise<ExerciseType> {
    return this.send("POST", "/exercise-subtypes", { name, applicationName });
  }
  listSounds(): Promise<TargetSound[]> {
    return this.get("/sounds");
  }
  createSound(label: string): Promise<TargetSound> {
    return this.send("POST", "/sounds", { label });
  }
  listAssociations(): Promise<Association[]> {
    return this.get("/associations");
  }
  createAssociation(typeId: number, subtypeId: number, soundId: number): Promise<Association> {
    return this.send("POST", "/associations", { typeId, subtypeId, soundId });
  }
  createInstructions(text: string): Promise<Instructions> {
    return this.send("POST", "/instructions", { text });
  }
  getInstructions(id: number): Promise<Instructions> {
    return this.get(`/instructions/${id}`);
  }

  listTemplates(): Promise<HomeworkTemplate[]> {
    return this.get("/templates");
  }
  createTemplate(payload: Omit<HomeworkTemplate, "id">): Promise<HomeworkTemplate> {
    return this.send("POST", "/templates", payload);
  }
  deleteTemplate(id: number): Promise<void> {
    return this.send("DELETE", `/templates/${id}`);
  }

  listChildren(): Promise<Child[]> {
    return this.get("/children");
  }
  createChild(familyName: string, givenName: string): Promise<Child> {
    return this.send("POST", "/children", { familyName, givenName });
  }

  // homework workflow
  listAssignments(): Promise<Assignment[]> {
    return this.get("/assignments");
  }
  createAssignment(payload: {
    childId: number;
    predefinedHomeworkId: number;
    assignedDate: string;
    deadlineDays: number;
  }): Promise<Assignment> {
    return this.send("POST", "/assignments", payload);
  }
  assignmentStatus(id: number, today?: string): Promise<AssignmentStatus> {
    return this.get(`/assignments/${id}/status`, { today });
  }
  dueDatePreview(assignedDate: string, deadlineDays: number): Promise<DueDatePreview> {
    return this.get("/due-date", { assignedDate, deadlineDays });
  }
  submitReport(
    assignmentId: number,
    reportDate: string,
    records: { exerciseId: number; attemptIndex: number; achievedPercent: number; initiallyWrongWords: number }[],
  ): Promise<ReportResponse> {
    return this.send("POST", `/assignments/${assignmentId}/report`, {
      assignmentId,
      reportDate,
      records,
    });
  }
  outcomes(assignmentId: number): Promise<OutcomesPayload> {
    return this.get(`/assignments/${assignmentId}/outcomes`);
  }
  bundleUrl(assignmentId: number): string {
    return this.url(`/assignments/${assignmentId}/bundle`);
  }
  uploadResults(assignmentId: number, file: File): Promise<ReportResponse> {
    return this.upload(`/assignments/${assignmentId}/results`, file);
  }
  childProgress(childId: number): Promise<ProgressSummary> {
    return this.get(`/children/${childId}/progress`);
  }
}
