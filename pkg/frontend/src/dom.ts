/** Small HTML/string helpers shared by the views. */

import type { ApiErrorBody } from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/**
 * Numbers are displayed exactly as the API sent them; formatting beyond
 * String() would break traceability to the response fields.
 */
export function show(value: number | string): string {
  return escapeHtml(String(value));
}

export function option(value: number | string, label: string, selected = false): string {
  return `<option value="${show(value)}"${selected ? " selected" : ""}>${escapeHtml(label)}</option>`;
}

/** Error banner fed verbatim from an API error body. */
export function errorBanner(error: ApiErrorBody, blocking = false): string {
  const parts = [`<strong>${escapeHtml(error.code)}</strong> ${escapeHtml(error.message)}`];
  if (error.violations?.length) {
    const items = error.violations
      .map((v) => `<li><code>${escapeHtml(v.field)}</code>: ${escapeHtml(v.message)}</li>`)
      .join("");
    parts.push(`<ul>${items}</ul>`);
  }
  if (error.referrers?.length) {
    const items = error.referrers
      .map((r) => `<li>${escapeHtml(r.kind)} ${show(r.id)}</li>`)
      .join("");
    parts.push(`<p>Still referenced by:</p><ul>${items}</ul>`);
  }
  return `<div class="banner error${blocking ? " blocking" : ""}" role="alert">${parts.join("")}</div>`;
}

export function noticeBanner(text: string): string {
  return `<div class="banner notice">${escapeHtml(text)}</div>`;
}

export function field(label: string, control: string, hint = ""): string {
  return `<label class="field"><span>${escapeHtml(label)}</span>${control}${
    hint ? `<small>${escapeHtml(hint)}</small>` : ""
  }</label>`;
}
