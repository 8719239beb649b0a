/** JSON shapes of the API, mirrored field for field (see docs/schema.md). */

export interface MediaAsset {
  id: number;
  kind: "sound" | "image";
  filename: string;
}

export interface Word {
  id: number;
  text: string;
  speakerFamilyName: string;
  speakerGivenName: string;
  isTherapistRecording: boolean;
  partOfSpeech: "noun" | "verb" | "adjective" | "other";
  partOfSpeechLabel: string | null;
  gender: "masculine" | "feminine" | "neuter" | null;
  articleCompatible: boolean;
  soundAssetId: number;
  imageAssetId: number;
}

export interface ParonymPair {
  id: number;
  wordAId: number;
  wordBId: number;
}

export interface ExerciseType {
  id: number;
  name: string;
  applicationName: string;
}

export interface TargetSound {
  id: number;
  label: string;
}

export interface Association {
  id: number;
  typeId: number;
  subtypeId: number;
  soundId: number;
}

export interface Instructions {
  id: number;
  text: string;
}

export interface Exercise {
  id: number;
  title: string;
  difficulty: number;
  associationId: number;
  instructionsId: number;
}

export interface ExerciseConfiguration {
  id: number;
  exerciseId: number;
  wordId: number;
  paronymId: number | null;
  param1: number;
  param2: number;
  param3: number;
}

export interface TemplateItem {
  exerciseId: number;
  successThresholdPercent: number;
}

export interface LegacyRef {
  table: string;
  id: number;
}

export interface HomeworkTemplate {
  id: number;
  description: string;
  repetitionsPerDay: number;
  exerciseItems: TemplateItem[];
  deficiencyRefs: LegacyRef[];
  testRefs: LegacyRef[];
}

export interface Child {
  id: number;
  familyName: string;
  givenName: string;
}

export interface Assignment {
  id: number;
  childId: number;
  predefinedHomeworkId: number;
  assignedDate: string;
  deadlineDays: number;
  reportDate: string | null;
}

export interface AssignmentStatus {
  assignmentId: number;
  today: string;
  dueDate: string;
  status: "Pending" | "Overdue" | "ReportedOnTime" | "ReportedLate";
}

export interface AttemptLine {
  attemptIndex: number;
  achievedPercent: number;
  initiallyWrongWords: number;
}

export interface ExerciseOutcome {
  exerciseId: number;
  attempts: AttemptLine[];
  bestPercent: number;
  resolved: boolean;
}

export interface OutcomesPayload {
  assignmentId: number;
  reported: boolean;
  reportDate: string | null;
  outcomes: ExerciseOutcome[];
}

export interface ReportResponse {
  assignmentId: number;
  reportDate: string;
  outcomes: ExerciseOutcome[];
}

export interface ProgressEntry {
  assignmentId: number;
  assignedDate: string;
  meanBestPercent: number;
  resolvedCount: number;
  exerciseCount: number;
}

export interface ProgressSummary {
  childId: number;
  perAssignment: ProgressEntry[];
}

export interface DueDatePreview {
  dueDate: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  violations?: { field: string; code: string; message: string }[];
  referrers?: { kind: string; id: number }[];
  missing?: { kind: string; id: number }[];
}

/** View models: direct projections of API responses, no recomputation. */

export interface WordRow {
  id: number;
  text: string;
  speaker: string;
  partOfSpeech: string;
  soundUrl: string;
  imageUrl: string;
}

export interface ExerciseRow {
  id: number;
  title: string;
  difficulty: number;
  associationId: number;
}

export interface TemplateCard {
  id: number;
  description: string;
  repetitionsPerDay: number;
  items: TemplateItem[];
}

export interface AssignmentCard {
  id: number;
  childId: number;
  templateId: number;
  assignedDate: string;
  deadlineDays: number;
  reportDate: string | null;
  /** Server-computed; null until the /status call lands. */
  status: AssignmentStatus | null;
}

export interface ProgressChartSeries {
  childId: number;
  points: ProgressEntry[];
}
