/** Hash router wiring the page modules to #app. */

import { ApiClient } from "./api.js";
import { mountExercisesPage } from "./views/exercises.js";
import { mountProgressPage } from "./views/progress.js";
import { mountSessionsPage } from "./views/sessions.js";
import { mountTemplatesPage } from "./views/templates.js";
import { mountWordsPage } from "./views/words.js";

export interface Route {
  hash: string;
  label: string;
  mount: (root: HTMLElement, api: ApiClient) => Promise<void>;
}

export const ROUTES: Route[] = [
  { hash: "#/words", label: "Words", mount: mountWordsPage },
  { hash: "#/exercises", label: "Exercises", mount: (r, a) => mountExercisesPage(r, a) },
  { hash: "#/templates", label: "Templates", mount: mountTemplatesPage },
  { hash: "#/sessions", label: "Sessions", mount: mountSessionsPage },
  { hash: "#/progress", label: "Progress", mount: (r, a) => mountProgressPage(r, a) },
];

export function renderNav(activeHash: string): string {
  return ROUTES.map(
    (route) =>
      `<a href="${route.hash}" class="${route.hash === activeHash ? "active" : ""}">${route.label}</a>`,
  ).join("");
}

export function startApp(document: Document, api: ApiClient = new ApiClient("..")): void {
  const nav = document.getElementById("nav")!;
  const root = document.getElementById("app")!;

  const navigate = async () => {
    const route = ROUTES.find((r) => r.hash === window.location.hash) ?? ROUTES[0];
    nav.innerHTML = renderNav(route.hash);
    root.innerHTML = `<p class="empty">Loading…</p>`;
    try {
      await route.mount(root, api);
    } catch (error) {
      root.innerHTML = `<div class="banner error">Cannot reach the API: ${String(error)}</div>`;
    }
  };

  window.addEventListener("hashchange", navigate);
  void navigate();
}
