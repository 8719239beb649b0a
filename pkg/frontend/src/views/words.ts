/** Word management: list with media previews, create with uploads, paronym editor. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { errorBanner, escapeHtml, field, option, show } from "../dom.js";
import type { ParonymPair, Word, WordRow } from "../types.js";

export function toWordRow(word: Word, api: ApiClient): WordRow {
  return {
    id: word.id,
    text: word.text,
    speaker: `${word.speakerFamilyName} ${word.speakerGivenName}`.trim(),
    partOfSpeech: word.partOfSpeechLabel ?? word.partOfSpeech,
    soundUrl: api.assetFileUrl(word.soundAssetId),
    imageUrl: api.assetFileUrl(word.imageAssetId),
  };
}

export function renderWordRow(row: WordRow): string {
  return (
    `<tr data-word-id="${show(row.id)}">` +
    `<td>${show(row.id)}</td>` +
    `<td class="word-text">${escapeHtml(row.text)}</td>` +
    `<td>${escapeHtml(row.partOfSpeech)}</td>` +
    `<td>${escapeHtml(row.speaker)}</td>` +
    `<td><img class="thumb" src="${escapeHtml(row.imageUrl)}" alt="${escapeHtml(row.text)}"></td>` +
    `<td><audio controls preload="none" src="${escapeHtml(row.soundUrl)}"></audio></td>` +
    `<td><button class="danger" data-action="delete-word" data-id="${show(row.id)}">delete</button></td>` +
    `</tr>`
  );
}

export function renderWordsTable(words: Word[], api: ApiClient): string {
  if (words.length === 0) {
    return `<p class="empty">No words yet; add the first recording below.</p>`;
  }
  const rows = words.map((w) => renderWordRow(toWordRow(w, api))).join("");
  return (
    `<table class="list"><thead><tr>` +
    `<th>id</th><th>word</th><th>part of speech</th><th>speaker</th>` +
    `<th>image</th><th>recording</th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderWordForm(): string {
  return `
  <form id="word-form" class="card">
    <h3>New word</h3>
    ${field("Text", `<input name="text" required>`)}
    ${field("Speaker family name", `<input name="speakerFamilyName" required>`)}
    ${field("Speaker given name", `<input name="speakerGivenName" required>`)}
    ${field("Therapist recording", `<input type="checkbox" name="isTherapistRecording" checked>`)}
    ${field(
      "Part of speech",
      `<select name="partOfSpeech">
        <option value="noun">noun</option>
        <option value="verb">verb</option>
        <option value="adjective">adjective</option>
        <option value="other">other</option>
      </select>`,
    )}
    ${field(
      "Gender",
      `<select name="gender">
        <option value="">(none)</option>
        <option value="masculine">masculine</option>
        <option value="feminine">feminine</option>
        <option value="neuter">neuter</option>
      </select>`,
      "required for nouns, empty otherwise",
    )}
    ${field("Accepts un/o article", `<input type="checkbox" name="articleCompatible">`)}
    ${field("Sound file", `<input type="file" name="soundFile" accept=".wav,.mp3" required>`)}
    ${field("Image file", `<input type="file" name="imageFile" accept=".png,.jpg" required>`)}
    <button type="submit">Add word</button>
    <div class="form-errors"></div>
  </form>`;
}

export function renderParonymSection(pairs: ParonymPair[], words: Word[]): string {
  const byId = new Map(words.map((w) => [w.id, w.text]));
  const rows = pairs
    .map(
      (pair) =>
        `<tr><td>${show(pair.id)}</td>` +
        `<td>${escapeHtml(byId.get(pair.wordAId) ?? `#${pair.wordAId}`)}</td>` +
        `<td>${escapeHtml(byId.get(pair.wordBId) ?? `#${pair.wordBId}`)}</td>` +
        `<td><button class="danger" data-action="delete-paronym" data-id="${show(pair.id)}">delete</button></td></tr>`,
    )
    .join("");
  const options = words.map((w) => option(w.id, `${w.text} (#${w.id})`)).join("");
  return `
  <section class="card">
    <h3>Paronym pairs</h3>
    ${pairs.length ? `<table class="list"><thead><tr><th>id</th><th>word A</th><th>word B</th><th></th></tr></thead><tbody>${rows}</tbody></table>` : `<p class="empty">No pairs yet.</p>`}
    <form id="paronym-form" class="inline">
      ${field("Word A", `<select name="wordAId" required>${options}</select>`)}
      ${field("Word B", `<select name="wordBId" required>${options}</select>`)}
      <button type="submit">Pair them</button>
      <div class="form-errors"></div>
    </form>
  </section>`;
}

export function renderWordsPage(words: Word[], pairs: ParonymPair[], api: ApiClient): string {
  return `
  <h2>Words</h2>
  <div class="page-errors"></div>
  <section class="card">${renderWordsTable(words, api)}</section>
  ${renderWordForm()}
  ${renderParonymSection(pairs, words)}`;
}

/** Client-side mirror of the server's word rules; never replaces the 422s. */
export function wordFormProblems(data: {
  text: string;
  partOfSpeech: string;
  gender: string;
  articleCompatible: boolean;
}): string[] {
  const problems: string[] = [];
  if (!data.text.trim()) {
    problems.push("text must be non-empty");
  }
  if (data.partOfSpeech === "noun" && !data.gender) {
    problems.push("nouns need a gender");
  }
  if (data.partOfSpeech !== "noun" && data.gender) {
    problems.push("only nouns carry a gender");
  }
  if (data.partOfSpeech !== "noun" && data.articleCompatible) {
    problems.push("only nouns can take an article");
  }
  return problems;
}

export async function mountWordsPage(root: HTMLElement, api: ApiClient): Promise<void> {
  const [words, pairs] = await Promise.all([api.listWords(), api.listParonyms()]);
  root.innerHTML = renderWordsPage(words, pairs, api);

  const wordForm = root.querySelector<HTMLFormElement>("#word-form");
  wordForm?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const errors = wordForm.querySelector(".form-errors")!;
    const data = new FormData(wordForm);
    const draft = {
      text: String(data.get("text") ?? ""),
      partOfSpeech: String(data.get("partOfSpeech")),
      gender: String(data.get("gender") ?? ""),
      articleCompatible: data.get("articleCompatible") === "on",
    };
    const problems = wordFormProblems(draft);
    if (problems.length) {
      errors.innerHTML = errorBanner({ code: "FormIncomplete", message: problems.join("; ") });
      return;
    }
    try {
      const sound = await api.uploadAsset("sound", data.get("soundFile") as File);
      const image = await api.uploadAsset("image", data.get("imageFile") as File);
      await api.createWord({
        text: draft.text,
        speakerFamilyName: String(data.get("speakerFamilyName") ?? ""),
        speakerGivenName: String(data.get("speakerGivenName") ?? ""),
        isTherapistRecording: data.get("isTherapistRecording") === "on",
        partOfSpeech: draft.partOfSpeech as Word["partOfSpeech"],
        partOfSpeechLabel: null,
        gender: (draft.gender || null) as Word["gender"],
        articleCompatible: draft.articleCompatible,
        soundAssetId: sound.id,
        imageAssetId: image.id,
      });
      await mountWordsPage(root, api);
    } catch (error) {
      if (error instanceof ApiError) {
        errors.innerHTML = errorBanner(error.body);
      } else {
        throw error;
      }
    }
  });

  const paronymForm = root.querySelector<HTMLFormElement>("#paronym-form");
  paronymForm?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const errors = paronymForm.querySelector(".form-errors")!;
    const data = new FormData(paronymForm);
    try {
      await api.createParonym(Number(data.get("wordAId")), Number(data.get("wordBId")));
      await mountWordsPage(root, api);
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
      if (action === "delete-word") {
        await api.deleteWord(Number(target.dataset.id));
        await mountWordsPage(root, api);
      } else if (action === "delete-paronym") {
        await api.deleteParonym(Number(target.dataset.id));
        await mountWordsPage(root, api);
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
