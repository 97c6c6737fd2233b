// Single-user session state. The server stays the source of truth for all
// domain data; this only tracks what the user is currently looking at.

import type { Hierarchy, RequestDoc, TaxonomyDoc, TypeDoc } from "./api.js";
import { emptyType, HIERARCHIES } from "./api.js";

export interface SessionState {
  taxonomies: Record<Hierarchy, TaxonomyDoc> | null;
  draft: RequestDoc;
  selectedJob: string | null;
  selectedResult: number | null;
  angles: number[];
}

export function initialState(): SessionState {
  return {
    taxonomies: null,
    draft: { target: emptyType(), propagated: emptyType(), sizes: null, limit: 100 },
    selectedJob: null,
    selectedResult: null,
    angles: [],
  };
}

function knownNames(doc: TypeDoc, taxonomies: Record<Hierarchy, TaxonomyDoc>): boolean {
  return HIERARCHIES.every((h) => doc[h].every((name) => taxonomies[h].nodes.includes(name)));
}

/** Drop draft atoms that no longer exist in the loaded taxonomies. */
export function pruneDraft(state: SessionState): void {
  const taxonomies = state.taxonomies;
  if (taxonomies === null) {
    return;
  }
  for (const doc of [state.draft.target, state.draft.propagated]) {
    for (const h of HIERARCHIES) {
      doc[h] = doc[h].filter((name) => taxonomies[h].nodes.includes(name));
    }
  }
}

export function draftIsConsistent(state: SessionState): boolean {
  if (state.taxonomies === null) {
    return true;
  }
  return (
    knownNames(state.draft.target, state.taxonomies) &&
    knownNames(state.draft.propagated, state.taxonomies)
  );
}

export function targetIsEmpty(draft: RequestDoc): boolean {
  return HIERARCHIES.every((h) => draft.target[h].length === 0);
}
