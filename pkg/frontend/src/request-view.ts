// Request builder: pick target and propagated atoms from the loaded
// taxonomies, set sizes and limit, submit, and watch the job state. Formats
// name physical interfaces, not design intent, so they are shown but
// disabled in the target picker while staying pickable as propagated atoms.

import type { ApiClient, Hierarchy, JobDoc, RequestDoc, TaxonomyDoc } from "./api.js";
import { ApiError, HIERARCHIES } from "./api.js";
import { clear, el, showError } from "./dom.js";
import { pollJob } from "./poll.js";
import type { SessionState } from "./state.js";
import { targetIsEmpty } from "./state.js";

export interface RequestViewOptions {
  pollIntervalMs?: number;
  onDone?: (job: JobDoc) => void;
}

export interface RequestView {
  element: HTMLElement;
  refresh: () => Promise<void>;
  settled: () => Promise<void>;
  jobId: () => string | null;
}

function picker(
  kind: "target" | "propagated",
  taxonomies: Record<Hierarchy, TaxonomyDoc>,
  draftDoc: { formats: string[]; parts: string[]; attributes: string[] },
  onChange: () => void,
): HTMLElement {
  const box = el("fieldset", { class: `picker ${kind}` }, [el("legend", {}, [kind])]);
  for (const hierarchy of HIERARCHIES) {
    const group = el("div", { class: `group ${hierarchy}` }, [el("h4", {}, [hierarchy])]);
    for (const name of [...taxonomies[hierarchy].nodes].sort()) {
      const attrs: Record<string, string> = {
        type: "checkbox",
        "data-hierarchy": hierarchy,
        "data-name": name,
      };
      if (kind === "target" && hierarchy === "formats") {
        attrs.disabled = "";
      }
      const input = el("input", attrs);
      input.checked = draftDoc[hierarchy].includes(name);
      input.addEventListener("change", () => {
        const names = new Set(draftDoc[hierarchy]);
        if (input.checked) {
          names.add(name);
        } else {
          names.delete(name);
        }
        draftDoc[hierarchy] = [...names].sort();
        onChange();
      });
      group.append(el("label", {}, [input, name]));
    }
    box.append(group);
  }
  return box;
}

export function renderRequestBuilder(
  api: ApiClient,
  state: SessionState,
  options: RequestViewOptions = {},
): RequestView {
  const root = el("section", { class: "request-builder" });
  const errorBox = el("p", { class: "error", role: "alert" });
  errorBox.style.display = "none";
  const diagnosticsBox = el("ul", { class: "diagnostics" });
  const pickers = el("div", { class: "pickers" });
  const sizesInput = el("input", { class: "sizes", placeholder: "sizes, e.g. 3,5,7" });
  const limitInput = el("input", { class: "limit", type: "number", value: String(state.draft.limit) });
  const submitButton = el("button", { class: "submit", type: "button" }, ["Synthesize"]);
  const jobBox = el("p", { class: "job-state" });

  root.append(
    el("h2", {}, ["build a request"]),
    errorBox,
    diagnosticsBox,
    pickers,
    el("div", { class: "controls" }, [sizesInput, limitInput, submitButton]),
    jobBox,
  );

  let chain: Promise<void> = Promise.resolve();
  const enqueue = (work: () => Promise<void>): Promise<void> => {
    chain = chain.then(work, work);
    return chain;
  };

  let currentJob: string | null = null;

  const syncSubmit = (): void => {
    submitButton.disabled = targetIsEmpty(state.draft);
  };

  const render = (): void => {
    clear(pickers);
    if (state.taxonomies === null) {
      return;
    }
    pickers.append(
      picker("target", state.taxonomies, state.draft.target, syncSubmit),
      picker("propagated", state.taxonomies, state.draft.propagated, syncSubmit),
    );
    syncSubmit();
  };

  const reload = async (): Promise<void> => {
    const [formats, parts, attributes] = await Promise.all(
      HIERARCHIES.map((h) => api.getTaxonomy(h)),
    );
    state.taxonomies = {
      formats: formats as TaxonomyDoc,
      parts: parts as TaxonomyDoc,
      attributes: attributes as TaxonomyDoc,
    };
    render();
  };

  const parseSizes = (): number[] | null => {
    const text = sizesInput.value.trim();
    if (!text) {
      return null;
    }
    return text.split(",").map((s) => Number.parseInt(s.trim(), 10));
  };

  const submit = (): Promise<void> =>
    enqueue(async () => {
      if (targetIsEmpty(state.draft)) {
        return;
      }
      clear(diagnosticsBox);
      const doc: RequestDoc = {
        target: state.draft.target,
        propagated: state.draft.propagated,
        sizes: parseSizes(),
        limit: Number.parseInt(limitInput.value, 10) || 100,
      };
      let submitted: { jobId: string };
      try {
        submitted = await api.submitRequest(doc);
      } catch (error) {
        if (error instanceof ApiError) {
          showError(errorBox, `request rejected (${error.status}): ${error.message}`);
          for (const d of error.diagnostics) {
            diagnosticsBox.append(el("li", {}, [`${d.severity}: ${d.partId}: ${d.message}`]));
          }
          return;
        }
        throw error;
      }
      showError(errorBox, null);
      currentJob = submitted.jobId;
      state.selectedJob = submitted.jobId;
      jobBox.textContent = `job ${submitted.jobId}: queued`;
      const handle = pollJob(api, submitted.jobId, {
        intervalMs: options.pollIntervalMs,
        onUpdate: (job) => {
          jobBox.textContent = `job ${job.jobId}: ${job.state}`;
        },
      });
      const job = await handle.done;
      if (job.state === "done") {
        jobBox.textContent = `job ${job.jobId}: done, ${job.resultCount} results`;
        options.onDone?.(job);
      } else {
        jobBox.textContent = `job ${job.jobId}: failed`;
        showError(errorBox, `job failed: ${job.error ?? "unknown error"}`);
      }
    });

  submitButton.addEventListener("click", () => {
    void submit();
  });

  const refresh = (): Promise<void> => enqueue(reload);
  void refresh();

  return {
    element: root,
    refresh,
    settled: () => chain,
    jobId: () => currentJob,
  };
}
