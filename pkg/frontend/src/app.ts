// Hash-routed single-page app. Routes mirror the two taxonomy windows plus
// the request builder and a per-job result browser:
//   #/taxonomy/edit/parts    #/taxonomy/select/attributes
//   #/request                #/results/<jobId>

import { ApiClient } from "./api.js";
import type { Hierarchy } from "./api.js";
import { clear, el } from "./dom.js";
import { renderRequestBuilder } from "./request-view.js";
import { renderResultsBrowser } from "./results-view.js";
import { initialState } from "./state.js";
import { renderTaxonomyView } from "./taxonomy-view.js";

const HIERARCHY_NAMES = new Set(["formats", "parts", "attributes"]);

export function mountApp(root: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const state = initialState();

  const nav = el("nav", {}, [
    el("a", { href: "#/taxonomy/edit/parts" }, ["edit taxonomies"]),
    " | ",
    el("a", { href: "#/taxonomy/select/parts" }, ["select"]),
    " | ",
    el("a", { href: "#/request" }, ["request"]),
  ]);
  const outlet = el("main", {});
  root.append(nav, outlet);

  const route = (): void => {
    clear(outlet);
    const hash = window.location.hash.replace(/^#\//, "");
    const parts = hash.split("/").filter(Boolean);

    if (parts[0] === "taxonomy" && (parts[1] === "edit" || parts[1] === "select")) {
      const hierarchy = HIERARCHY_NAMES.has(parts[2] ?? "") ? (parts[2] as Hierarchy) : "parts";
      outlet.append(renderTaxonomyView(api, hierarchy, parts[1]).element);
      return;
    }
    if (parts[0] === "results" && parts[1]) {
      outlet.append(renderResultsBrowser(api, state, parts[1]).element);
      return;
    }
    const view = renderRequestBuilder(api, state, {
      onDone: (job) => {
        window.location.hash = `#/results/${job.jobId}`;
      },
    });
    outlet.append(view.element);
  };

  window.addEventListener("hashchange", route);
  route();
}
