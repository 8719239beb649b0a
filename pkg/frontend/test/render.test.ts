/** Pure render functions against recorded API fixtures: every displayed
 * number must be the fixture value, verbatim. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { progressChart } from "../src/chart.js";
import { errorBanner } from "../src/dom.js";
import { renderExerciseRows, toExerciseRow } from "../src/views/exercises.js";
import { renderProgressTable } from "../src/views/progress.js";
import {
  renderAssignmentCard,
  renderOutcomes,
  renderStatusBadge,
  toAssignmentCard,
} from "../src/views/sessions.js";
import { renderTemplateCard, toTemplateCard } from "../src/views/templates.js";
import { renderWordsTable } from "../src/views/words.js";
import { fixtures } from "./fixtures.js";

const api = new ApiClient("");

describe("words table", () => {
  const html = renderWordsTable(fixtures.words, api);

  it("shows every word with its media urls", () => {
    for (const word of fixtures.words) {
      expect(html).toContain(`>${word.text}</td>`);
      expect(html).toContain(`/assets/${word.soundAssetId}/file`);
      expect(html).toContain(`/assets/${word.imageAssetId}/file`);
    }
  });

  it("matches the snapshot", () => {
    expect(html).toMatchSnapshot();
  });
});

describe("exercise rows", () => {
  const html = renderExerciseRows(fixtures.exercises.map(toExerciseRow));

  it("displays titles and difficulties verbatim", () => {
    for (const exercise of fixtures.exercises) {
      expect(html).toContain(exercise.title);
      expect(html).toContain(`>${String(exercise.difficulty)}</span>`);
    }
  });

  it("matches the snapshot", () => {
    expect(html).toMatchSnapshot();
  });
});

describe("template card", () => {
  const template = fixtures.templates[0];
  const html = renderTemplateCard(toTemplateCard(template), fixtures.exercises);

  it("shows thresholds exactly as returned", () => {
    for (const item of template.exerciseItems) {
      expect(html).toContain(`needs ${String(item.successThresholdPercent)}%`);
    }
    expect(html).toContain(`${String(template.repetitionsPerDay)}x per day`);
  });

  it("matches the snapshot", () => {
    expect(html).toMatchSnapshot();
  });
});

describe("assignment card and status badge", () => {
  it("renders the server status verbatim, reported case", () => {
    const assignment = fixtures.assignments[0];
    const card = toAssignmentCard(assignment, fixtures.statusReported);
    const html = renderAssignmentCard(card, fixtures.children, fixtures.templates);
    expect(html).toContain(fixtures.statusReported.status);
    expect(html).toContain(`due ${fixtures.statusReported.dueDate}`);
    expect(html).toContain(`reported on ${assignment.reportDate}`);
    expect(html).toMatchSnapshot();
  });

  it("renders the pending badge from the status payload alone", () => {
    expect(renderStatusBadge(fixtures.statusPending)).toContain("Pending");
  });
});

describe("outcomes table", () => {
  const html = renderOutcomes(fixtures.reportResponse, new Map([[1, "Paronime cu s"]]));

  it("shows best percents and resolution flags from the response", () => {
    for (const outcome of fixtures.reportResponse.outcomes) {
      expect(html).toContain(`${String(outcome.bestPercent)}%`);
      expect(html).toContain(outcome.resolved ? "resolved" : "not resolved");
    }
  });

  it("matches the snapshot", () => {
    expect(html).toMatchSnapshot();
  });
});

describe("progress view", () => {
  const table = renderProgressTable(fixtures.progress);
  const chart = progressChart({
    childId: fixtures.progress.childId,
    points: fixtures.progress.perAssignment,
  });

  it("prints meanBestPercent exactly as the API sent it", () => {
    for (const entry of fixtures.progress.perAssignment) {
      expect(table).toContain(`>${String(entry.meanBestPercent)}</td>`);
      expect(chart).toContain(`>${String(entry.meanBestPercent)}</text>`);
      expect(table).toContain(
        `${String(entry.resolvedCount)} / ${String(entry.exerciseCount)}`,
      );
    }
  });

  it("draws one bar per reported assignment", () => {
    const bars = chart.match(/<g class="bar"/g) ?? [];
    expect(bars.length).toBe(fixtures.progress.perAssignment.length);
  });

  it("matches the snapshots", () => {
    expect(table).toMatchSnapshot();
    expect(chart).toMatchSnapshot();
  });
});

describe("error banners", () => {
  it("lists referrers on StillReferenced", () => {
    const html = errorBanner(fixtures.errorStillReferenced);
    expect(html).toContain("StillReferenced");
    for (const referrer of fixtures.errorStillReferenced.referrers ?? []) {
      expect(html).toContain(`${referrer.kind} ${String(referrer.id)}`);
    }
  });

  it("lists field violations on ValidationFailed", () => {
    const html = errorBanner(fixtures.errorValidation);
    expect(html).toContain("ValidationFailed");
    for (const violation of fixtures.errorValidation.violations ?? []) {
      expect(html).toContain(violation.field);
    }
  });

  it("marks blocking banners", () => {
    expect(errorBanner(fixtures.errorAlreadyReported, true)).toContain("blocking");
  });
});
