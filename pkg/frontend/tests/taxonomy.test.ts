// Taxonomy editor behavior against a live server: the selecting window's
// client-side duplicate guard, genuine server 409s surfaced inline, and
// edit-mode rename / delete-with-reparenting.

import { beforeAll, describe, expect, inject, it } from "vitest";
import type { PartDoc, TaxonomyDoc } from "../src/api.js";
import { ApiClient } from "../src/api.js";
import { renderTaxonomyView } from "../src/taxonomy-view.js";
import { countingClient, rawJson } from "./helpers.js";

let base: string;

beforeAll(() => {
  base = inject("apiA");
});

function addViaForm(view: ReturnType<typeof renderTaxonomyView>, name: string, parent = ""): void {
  const input = view.element.querySelector<HTMLInputElement>("input.new-name");
  const select = view.element.querySelector<HTMLSelectElement>("select.new-parent");
  const button = view.element.querySelector<HTMLButtonElement>("button.add-node");
  if (!input || !select || !button) {
    throw new Error("add form not rendered");
  }
  input.value = name;
  select.value = parent;
  button.click();
}

function errorText(view: ReturnType<typeof renderTaxonomyView>): string {
  return view.element.querySelector(".error")?.textContent ?? "";
}

describe("select mode", () => {
  it("rejects duplicate names client-side without sending a request", async () => {
    const { api, calls } = countingClient(base);
    const view = renderTaxonomyView(api, "attributes", "select");
    await view.settled();
    const before = calls();
    expect(view.doc()?.nodes).toContain("Steel");

    addViaForm(view, "Steel");
    await view.settled();

    expect(errorText(view)).toContain("duplicate name");
    expect(calls()).toBe(before); // nothing went on the wire
    const server = await rawJson<TaxonomyDoc>(`${base}/taxonomies/attributes`);
    expect(server.nodes.filter((n) => n === "Steel")).toHaveLength(1);
  });

  it("surfaces a real server 409 inline when its copy is stale", async () => {
    const view = renderTaxonomyView(new ApiClient(base), "attributes", "select");
    await view.settled();

    // Out of band, another client adds an atom and immediately uses it in a
    // part. Our stale full-document save would silently drop that atom, so
    // the server must refuse with 409.
    const doc = await rawJson<TaxonomyDoc>(`${base}/taxonomies/attributes`);
    const withCoating: TaxonomyDoc = {
      ...doc,
      nodes: [...doc.nodes, "CoatingX"],
      edges: [...doc.edges, ["CoatingX", "Capability"]],
    };
    await rawJson(`${base}/taxonomies/attributes`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(withCoating),
    });
    const gripper = await rawJson<PartDoc>(`${base}/parts/gripper`);
    const coated: PartDoc = {
      ...gripper,
      partTypes: {
        ...gripper.partTypes,
        attributes: [...gripper.partTypes.attributes, "CoatingX"],
      },
    };
    await rawJson(`${base}/parts/gripper`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(coated),
    });

    addViaForm(view, "GlossFinishX");
    await view.settled();

    expect(errorText(view)).toContain("409");
    expect(errorText(view)).toContain("invalid");

    // restore the part so later suites see the original annotations
    await rawJson(`${base}/parts/gripper`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(gripper),
    });
  });
});

describe("edit mode", () => {
  it("surfaces the server 409 that mirrors the duplicate-name rule", async () => {
    const view = renderTaxonomyView(new ApiClient(base), "parts", "edit");
    await view.settled();
    expect(view.doc()?.nodes).toContain("Motor");

    addViaForm(view, "Motor"); // edit mode sends; the server refuses
    await view.settled();

    expect(errorText(view)).toContain("409");
    const server = await rawJson<TaxonomyDoc>(`${base}/taxonomies/parts`);
    expect(server.nodes.filter((n) => n === "Motor")).toHaveLength(1);
  });

  it("renames over PUT and refreshes the tree", async () => {
    const view = renderTaxonomyView(new ApiClient(base), "attributes", "edit");
    await view.settled();
    addViaForm(view, "TempSeatX", "Capability");
    await view.settled();
    expect(view.element.querySelector('li[data-name="TempSeatX"]')).not.toBeNull();

    const row = view.element.querySelector<HTMLElement>('li[data-name="TempSeatX"]');
    const renameInput = row?.querySelector<HTMLInputElement>("input.rename-input");
    const renameButton = row?.querySelector<HTMLButtonElement>("button.rename");
    if (!renameInput || !renameButton) {
      throw new Error("rename controls missing");
    }
    renameInput.value = "TempSeatY";
    renameButton.click();
    await view.settled();

    expect(view.element.querySelector('li[data-name="TempSeatX"]')).toBeNull();
    expect(view.element.querySelector('li[data-name="TempSeatY"]')).not.toBeNull();
    const server = await rawJson<TaxonomyDoc>(`${base}/taxonomies/attributes`);
    expect(server.nodes).toContain("TempSeatY");
    expect(server.nodes).not.toContain("TempSeatX");
  });

  it("re-parents children when deleting a node, matching the server state", async () => {
    const view = renderTaxonomyView(new ApiClient(base), "attributes", "edit");
    await view.settled();
    addViaForm(view, "MidX", "Material");
    await view.settled();
    addViaForm(view, "LeafX", "MidX");
    await view.settled();

    const mid = view.element.querySelector<HTMLElement>('li[data-name="MidX"]');
    const deleteButton = mid?.querySelector<HTMLButtonElement>("button.delete");
    if (!deleteButton) {
      throw new Error("delete control missing");
    }
    deleteButton.click();
    await view.settled();

    expect(view.element.querySelector('li[data-name="MidX"]')).toBeNull();
    const leaf = view.element.querySelector<HTMLElement>('li[data-name="LeafX"]');
    expect(leaf).not.toBeNull();
    expect(leaf?.closest('li[data-name="Material"]')).not.toBeNull();

    // rendered structure agrees with a fresh GET
    const server = await rawJson<TaxonomyDoc>(`${base}/taxonomies/attributes`);
    expect(server.nodes).not.toContain("MidX");
    expect(server.nodes).toContain("LeafX");
    expect(server.edges).toContainEqual(["LeafX", "Material"]);
  });
});
