/** Client-side validation mirrors: they block obviously bad submissions but
 * never replace the server's checks. */

import { describe, expect, it } from "vitest";

import { DIFFICULTIES, exerciseFormProblems } from "../src/views/exercises.js";
import { templateFormProblems } from "../src/views/templates.js";
import { wordFormProblems } from "../src/views/words.js";

describe("word form mirror", () => {
  it("accepts a valid noun", () => {
    expect(
      wordFormProblems({
        text: "copil",
        partOfSpeech: "noun",
        gender: "masculine",
        articleCompatible: true,
      }),
    ).toEqual([]);
  });

  it("requires gender for nouns and rejects it elsewhere", () => {
    expect(
      wordFormProblems({ text: "copil", partOfSpeech: "noun", gender: "", articleCompatible: false }),
    ).not.toEqual([]);
    expect(
      wordFormProblems({ text: "merge", partOfSpeech: "verb", gender: "masculine", articleCompatible: false }),
    ).not.toEqual([]);
  });

  it("rejects the article on non-nouns", () => {
    expect(
      wordFormProblems({ text: "merge", partOfSpeech: "verb", gender: "", articleCompatible: true }),
    ).not.toEqual([]);
  });
});

describe("exercise form mirror", () => {
  it("accepts exactly difficulties 1..5", () => {
    expect(DIFFICULTIES).toEqual([1, 2, 3, 4, 5]);
    for (let difficulty = -1; difficulty <= 7; difficulty++) {
      const problems = exerciseFormProblems({ title: "t", difficulty });
      expect(problems.length === 0).toBe(difficulty >= 1 && difficulty <= 5);
    }
  });

  it("requires a title", () => {
    expect(exerciseFormProblems({ title: "  ", difficulty: 3 })).not.toEqual([]);
  });
});

describe("template form mirror", () => {
  it("needs at least one distinct exercise and sane thresholds", () => {
    expect(
      templateFormProblems({ repetitionsPerDay: 2, items: [{ exerciseId: 1, successThresholdPercent: 80 }] }),
    ).toEqual([]);
    expect(templateFormProblems({ repetitionsPerDay: 0, items: [] })).not.toEqual([]);
    expect(
      templateFormProblems({
        repetitionsPerDay: 1,
        items: [
          { exerciseId: 1, successThresholdPercent: 80 },
          { exerciseId: 1, successThresholdPercent: 60 },
        ],
      }),
    ).not.toEqual([]);
    expect(
      templateFormProblems({ repetitionsPerDay: 1, items: [{ exerciseId: 1, successThresholdPercent: 101 }] }),
    ).not.toEqual([]);
  });
});
