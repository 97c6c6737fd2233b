// Result browser for one finished job. The row list mirrors the results
// endpoint payload exactly; unfolding a row shows the bill of materials as
// served; selecting a row loads the posed scene and offers one angle slider
// per revolute joint, each slider change re-querying the server for a fresh
// pose instead of transforming anything locally.

import type { ApiClient, PartDoc, ProgramDoc, ResultRow } from "./api.js";
import { clear, el, showError } from "./dom.js";
import { renderScene } from "./scene.js";
import type { SessionState } from "./state.js";

export interface ResultsView {
  element: HTMLElement;
  refresh: () => Promise<void>;
  settled: () => Promise<void>;
}

export function renderResultsBrowser(
  api: ApiClient,
  state: SessionState,
  jobId: string,
): ResultsView {
  const root = el("section", { class: "results", "data-job": jobId });
  const errorBox = el("p", { class: "error", role: "alert" });
  errorBox.style.display = "none";
  const table = el("table", { class: "result-list" });
  const scenePanel = el("div", { class: "scene-panel" });
  const sliderBox = el("div", { class: "sliders" });
  const sceneBox = el("div", { class: "scene-box", "data-scene-rev": "0" });
  scenePanel.append(sliderBox, sceneBox);
  root.append(el("h2", {}, [`results for job ${jobId}`]), errorBox, table, scenePanel);

  let chain: Promise<void> = Promise.resolve();
  const enqueue = (work: () => Promise<void>): Promise<void> => {
    chain = chain.then(work, work);
    return chain;
  };

  let partsById: Map<string, PartDoc> | null = null;
  let program: ProgramDoc | null = null;

  const loadScene = async (): Promise<void> => {
    if (state.selectedResult === null || program === null || partsById === null) {
      return;
    }
    const entries = await api.getScene(jobId, state.selectedResult, state.angles);
    sceneBox.innerHTML = renderScene({ entries, program, partsById });
    const rev = Number.parseInt(sceneBox.getAttribute("data-scene-rev") ?? "0", 10);
    sceneBox.setAttribute("data-scene-rev", String(rev + 1));
  };

  const renderSliders = (dofCount: number): void => {
    clear(sliderBox);
    state.angles = new Array(dofCount).fill(0);
    for (let i = 0; i < dofCount; i += 1) {
      const slider = el("input", {
        type: "range",
        class: "angle",
        "data-joint": String(i),
        min: "-3.1416",
        max: "3.1416",
        step: "0.01",
        value: "0",
      });
      slider.addEventListener("input", () => {
        state.angles[i] = Number.parseFloat(slider.value);
        void enqueue(loadScene);
      });
      sliderBox.append(el("label", {}, [`joint ${i}`, slider]));
    }
  };

  const selectResult = (row: ResultRow): Promise<void> =>
    enqueue(async () => {
      state.selectedResult = row.index;
      if (partsById === null) {
        const parts = await api.listParts();
        partsById = new Map(parts.map((p) => [p.partId, p]));
      }
      program = await api.getProgram(jobId, row.index);
      renderSliders(row.dof);
      await loadScene();
    });

  const unfold = async (row: ResultRow, cell: HTMLElement): Promise<void> => {
    const bom = await api.getBom(jobId, row.index);
    const bomTable = el("table", { class: "bom" });
    bomTable.append(
      el("tr", {}, [
        el("th", {}, ["part"]),
        el("th", {}, ["name"]),
        el("th", {}, ["qty"]),
        el("th", {}, ["unit cost"]),
        el("th", {}, ["row total"]),
      ]),
    );
    for (const r of bom.rows) {
      bomTable.append(
        el("tr", { class: "bom-row", "data-part-id": r.partId }, [
          el("td", { class: "part-id" }, [r.partId]),
          el("td", { class: "part-name" }, [r.name]),
          el("td", { class: "quantity" }, [String(r.quantity)]),
          el("td", { class: "unit-cost" }, [r.unitCost === null ? "?" : r.unitCost.toFixed(2)]),
          el("td", { class: "row-total" }, [r.rowTotal === null ? "?" : r.rowTotal.toFixed(2)]),
        ]),
      );
    }
    const summary = el("p", { class: "bom-total" }, [
      `total ${bom.totalKnownCost.toFixed(2)}${bom.costComplete ? "" : " (incomplete)"}`,
    ]);
    clear(cell);
    cell.append(bomTable, summary);
  };

  const renderRows = (rows: ResultRow[], total: number): void => {
    clear(table);
    table.append(
      el("tr", {}, [
        el("th", {}, ["#"]),
        el("th", {}, ["parts"]),
        el("th", {}, ["cost"]),
        el("th", {}, ["dof"]),
        el("th", {}, [""]),
      ]),
    );
    for (const row of rows) {
      const bomCell = el("td", { class: "bom-cell" });
      const unfoldButton = el("button", { class: "unfold", type: "button" }, ["BOM"]);
      unfoldButton.addEventListener("click", () => {
        void enqueue(() => unfold(row, bomCell));
      });
      const viewButton = el("button", { class: "view", type: "button" }, ["view"]);
      viewButton.addEventListener("click", () => {
        void selectResult(row);
      });
      const costText = row.totalKnownCost.toFixed(2) + (row.costComplete ? "" : " (incomplete)");
      const tr = el(
        "tr",
        {
          class: `result-row${row.costComplete ? "" : " cost-incomplete"}`,
          "data-index": String(row.index),
          "data-part-count": String(row.partCount),
          "data-total-known-cost": String(row.totalKnownCost),
          "data-cost-complete": String(row.costComplete),
          "data-dof": String(row.dof),
        },
        [
          el("td", { class: "index" }, [String(row.index)]),
          el("td", { class: "part-count" }, [String(row.partCount)]),
          el("td", { class: "cost" }, [costText]),
          el("td", { class: "dof" }, [String(row.dof)]),
          el("td", {}, [unfoldButton, viewButton]),
          bomCell,
        ],
      );
      table.append(tr);
    }
    table.setAttribute("data-total", String(total));
  };

  const reload = async (): Promise<void> => {
    try {
      const page = await api.getResults(jobId, 0, 500);
      renderRows(page.items, page.total);
      showError(errorBox, null);
    } catch (error) {
      showError(errorBox, error instanceof Error ? error.message : String(error));
    }
  };

  const refresh = (): Promise<void> => enqueue(reload);
  void refresh();

  return {
    element: root,
    refresh,
    settled: () => chain,
  };
}
