// Taxonomy views. Edit mode is the maintenance window with full CRUD; select
// mode is the picking window used while building requests, where the only
// mutation left enabled is adding a leaf and no operation may produce a
// duplicate name (checked client-side before any request is sent; the server
// enforces the same rule with a 409, which is surfaced inline).

import type { ApiClient, Hierarchy, TaxonomyDoc } from "./api.js";
import { ApiError } from "./api.js";
import { clear, el, showError } from "./dom.js";

export type TaxonomyMode = "edit" | "select";

export interface TaxonomyViewOptions {
  onSelect?: (hierarchy: Hierarchy, name: string, selected: boolean) => void;
  selected?: Set<string>;
  /** Disable node selection entirely (render-only). */
  selectable?: boolean;
}

export interface TaxonomyView {
  element: HTMLElement;
  refresh: () => Promise<void>;
  /** Resolves once every queued operation has finished. */
  settled: () => Promise<void>;
  doc: () => TaxonomyDoc | null;
}

function childrenOf(doc: TaxonomyDoc, parent: string): string[] {
  return doc.edges.filter(([, p]) => p === parent).map(([c]) => c).sort();
}

function roots(doc: TaxonomyDoc): string[] {
  const withParent = new Set(doc.edges.map(([c]) => c));
  return [...doc.nodes].filter((n) => !withParent.has(n)).sort();
}

export function renderTaxonomyView(
  api: ApiClient,
  hierarchy: Hierarchy,
  mode: TaxonomyMode,
  options: TaxonomyViewOptions = {},
): TaxonomyView {
  const root = el("section", { class: `taxonomy ${mode}`, "data-hierarchy": hierarchy });
  const errorBox = el("p", { class: "error", role: "alert" });
  errorBox.style.display = "none";
  const tree = el("div", { class: "tree" });

  const nameInput = el("input", { class: "new-name", placeholder: "new node name" });
  const parentSelect = el("select", { class: "new-parent" });
  const addButton = el("button", { class: "add-node", type: "button" }, ["Add"]);
  const form = el("div", { class: "add-form" }, [nameInput, parentSelect, addButton]);

  root.append(el("h2", {}, [`${hierarchy} (${mode})`]), errorBox, form, tree);

  let current: TaxonomyDoc | null = null;
  let chain: Promise<void> = Promise.resolve();

  const enqueue = (work: () => Promise<void>): Promise<void> => {
    chain = chain.then(work, work);
    return chain;
  };

  const put = async (doc: TaxonomyDoc): Promise<boolean> => {
    try {
      await api.putTaxonomy(doc);
    } catch (error) {
      if (error instanceof ApiError) {
        showError(errorBox, `server rejected the change (${error.status}): ${error.message}`);
        return false;
      }
      throw error;
    }
    showError(errorBox, null);
    return true;
  };

  const renderNode = (doc: TaxonomyDoc, name: string, seen: Set<string>): HTMLElement => {
    const item = el("li", { class: "node", "data-name": name });
    const label = el("span", { class: "name" }, [name]);
    if (options.selectable !== false && mode === "select") {
      label.classList.add("selectable");
      if (options.selected?.has(name)) {
        label.classList.add("selected");
      }
      label.addEventListener("click", () => {
        const nowSelected = !label.classList.contains("selected");
        label.classList.toggle("selected", nowSelected);
        options.onSelect?.(hierarchy, name, nowSelected);
      });
    }
    item.append(label);

    if (mode === "edit") {
      const renameInput = el("input", { class: "rename-input", value: name });
      const renameButton = el("button", { class: "rename", type: "button" }, ["rename"]);
      renameButton.addEventListener("click", () => {
        void actions.renameNode(name, renameInput.value.trim());
      });
      const deleteButton = el("button", { class: "delete", type: "button" }, ["delete"]);
      deleteButton.addEventListener("click", () => {
        void actions.deleteNode(name);
      });
      item.append(renameInput, renameButton, deleteButton);
    }

    // Shared nodes repeat under each parent; cut off on cycles defensively.
    if (!seen.has(name)) {
      const sub = childrenOf(doc, name);
      if (sub.length) {
        const list = el("ul", {});
        const nested = new Set(seen).add(name);
        for (const child of sub) {
          list.append(renderNode(doc, child, nested));
        }
        item.append(list);
      }
    }
    return item;
  };

  const render = (): void => {
    clear(tree);
    clear(parentSelect);
    if (current === null) {
      return;
    }
    parentSelect.append(el("option", { value: "" }, ["(root)"]));
    for (const node of [...current.nodes].sort()) {
      parentSelect.append(el("option", { value: node }, [node]));
    }
    const list = el("ul", { class: "roots" });
    for (const name of roots(current)) {
      list.append(renderNode(current, name, new Set()));
    }
    tree.append(list);
  };

  const reload = async (): Promise<void> => {
    current = await api.getTaxonomy(hierarchy);
    render();
  };

  const actions = {
    addNode: (name: string, parent: string): Promise<void> =>
      enqueue(async () => {
        if (current === null || !name) {
          return;
        }
        if (mode === "select" && current.nodes.includes(name)) {
          // the selecting window must never create a duplicate: reject
          // before anything goes on the wire
          showError(errorBox, `duplicate name: "${name}" already exists in ${hierarchy}`);
          return;
        }
        const doc: TaxonomyDoc = {
          hierarchy,
          nodes: [...current.nodes, name],
          edges: parent ? [...current.edges, [name, parent]] : [...current.edges],
        };
        if (await put(doc)) {
          await reload();
        }
      }),

    renameNode: (oldName: string, newName: string): Promise<void> =>
      enqueue(async () => {
        if (current === null || !newName || newName === oldName) {
          return;
        }
        const doc: TaxonomyDoc = {
          hierarchy,
          nodes: current.nodes.map((n) => (n === oldName ? newName : n)),
          edges: current.edges.map(([c, p]) => [
            c === oldName ? newName : c,
            p === oldName ? newName : p,
          ]),
        };
        if (await put(doc)) {
          await reload();
        }
      }),

    deleteNode: (name: string): Promise<void> =>
      enqueue(async () => {
        if (current === null) {
          return;
        }
        // matches the server-side rule: children are re-parented to the
        // deleted node's parents
        const parents = current.edges.filter(([c]) => c === name).map(([, p]) => p);
        const orphans = current.edges.filter(([, p]) => p === name).map(([c]) => c);
        const kept = current.edges.filter(([c, p]) => c !== name && p !== name);
        const bridged: [string, string][] = [];
        for (const orphan of orphans) {
          for (const parent of parents) {
            if (!kept.some(([c, p]) => c === orphan && p === parent)) {
              bridged.push([orphan, parent]);
            }
          }
        }
        const doc: TaxonomyDoc = {
          hierarchy,
          nodes: current.nodes.filter((n) => n !== name),
          edges: [...kept, ...bridged],
        };
        if (await put(doc)) {
          await reload();
        }
      }),
  };

  addButton.addEventListener("click", () => {
    void actions.addNode(nameInput.value.trim(), parentSelect.value);
  });

  const refresh = (): Promise<void> => enqueue(reload);
  void refresh();

  return {
    element: root,
    refresh,
    settled: () => chain,
    doc: () => current,
  };
}
