// Browser bootstrap: fetch the report, then delegate clicks to the
// controller. The detail toggle repaints only the summary pane; other
// actions repaint the page shell.

import { ReportApi } from "./api.js";
import { App, type Action } from "./app.js";
import { renderError, renderLoading } from "./render.js";
import type { DetailLevel } from "./types.js";

const API_BASE: string =
  (globalThis as { SITREP_API_BASE?: string }).SITREP_API_BASE ?? "http://127.0.0.1:8000";

function actionFrom(el: HTMLElement): Action | null {
  switch (el.dataset.action) {
    case "select-chapter":
      return { kind: "select-chapter", chapterId: el.dataset.chapterId! };
    case "select-section":
      return { kind: "select-section", sectionId: el.dataset.sectionId! };
    case "set-detail":
      return { kind: "set-detail", level: el.dataset.level as DetailLevel };
    case "toggle-claim":
      return { kind: "toggle-claim", contextId: el.dataset.contextId! };
    default:
      return null;
  }
}

async function boot(root: HTMLElement): Promise<void> {
  root.innerHTML = renderLoading();
  const api = new ReportApi(API_BASE);
  let app: App;
  try {
    app = new App(await api.fetchReport());
  } catch (err) {
    root.innerHTML = renderError(err instanceof Error ? err.message : String(err));
    return;
  }
  root.innerHTML = app.html();

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) {
      return;
    }
    if (target.dataset.action === "retry") {
      void boot(root);
      return;
    }
    const action = actionFrom(target);
    if (!action) {
      return;
    }
    const summaryOnly = app.dispatch(action);
    if (summaryOnly) {
      const pane = root.querySelector("#summary-pane");
      if (pane) {
        pane.innerHTML = app.summaryPaneHtml();
        return;
      }
    }
    root.innerHTML = app.html();
  });
}

if (typeof document !== "undefined") {
  const rootElement = document.getElementById("app");
  if (rootElement) {
    void boot(rootElement);
  }
}
