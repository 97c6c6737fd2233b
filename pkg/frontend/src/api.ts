// Typed client for the asmsynth HTTP service. Every view goes through this
// module; nothing in the client recomputes what an endpoint already reports.

export type Hierarchy = "formats" | "parts" | "attributes";

export const HIERARCHIES: readonly Hierarchy[] = ["formats", "parts", "attributes"];

export interface TaxonomyDoc {
  hierarchy: Hierarchy;
  nodes: string[];
  edges: [string, string][]; // [child, parent]
}

export interface TypeDoc {
  formats: string[];
  parts: string[];
  attributes: string[];
}

export interface FrameDoc {
  origin: [number, number, number];
  quaternion: [number, number, number, number]; // [w, x, y, z]
}

export interface JointOriginDoc {
  uuid: string;
  label: string;
  frame: FrameDoc;
  provides: TypeDoc | null;
  requires: TypeDoc | null;
  jointKind: "rigid" | "revolute";
  groupId: string | null;
}

export interface PartDoc {
  partId: string;
  name: string;
  partTypes: TypeDoc;
  unitCost: number | null;
  jointOrigins: JointOriginDoc[];
}

export interface RequestDoc {
  target: TypeDoc;
  propagated: TypeDoc;
  sizes: number[] | null;
  limit: number;
}

export interface JobDoc {
  jobId: string;
  state: "queued" | "running" | "done" | "failed";
  request: RequestDoc;
  createdAt: string;
  startedAt: string | null;
  finishedAt: string | null;
  resultCount?: number;
  error?: string;
}

export interface ResultRow {
  index: number;
  partCount: number;
  totalKnownCost: number;
  costComplete: boolean;
  dof: number;
}

export interface ResultPage {
  total: number;
  items: ResultRow[];
}

export interface BomRowDoc {
  partId: string;
  name: string;
  quantity: number;
  unitCost: number | null;
  rowTotal: number | null;
}

export interface BomDoc {
  rows: BomRowDoc[];
  totalKnownCost: number;
  costComplete: boolean;
}

export interface ProgramDoc {
  insertions: [string, number][];
  links: string[];
  moves: [string, string][]; // [occurrence, link]
  joints: [string, string, string, string, string][]; // [kind, parent, parentJo, child, childJo]
}

export interface SceneEntry {
  occ: string;
  partId: string;
  origin: [number, number, number];
  quaternion: [number, number, number, number];
}

export interface DiagnosticDoc {
  severity: string;
  partId: string;
  message: string;
  joUuid: string | null;
}

/** Non-2xx response, carrying the server's error payload. */
export class ApiError extends Error {
  status: number;
  diagnostics: DiagnosticDoc[];

  constructor(status: number, message: string, diagnostics: DiagnosticDoc[] = []) {
    super(message);
    this.status = status;
    this.diagnostics = diagnostics;
  }
}

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(baseUrl: string, fetchFn: FetchFn = (...args) => globalThis.fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    const doc = await response.json();
    if (!response.ok) {
      const message = typeof doc?.error === "string" ? doc.error : `HTTP ${response.status}`;
      throw new ApiError(response.status, message, Array.isArray(doc?.diagnostics) ? doc.diagnostics : []);
    }
    return doc as T;
  }

  health(): Promise<{ status: string }> {
    return this.call("GET", "/health");
  }

  getTaxonomy(hierarchy: Hierarchy): Promise<TaxonomyDoc> {
    return this.call("GET", `/taxonomies/${hierarchy}`);
  }

  putTaxonomy(doc: TaxonomyDoc): Promise<TaxonomyDoc> {
    return this.call("PUT", `/taxonomies/${doc.hierarchy}`, doc);
  }

  listParts(): Promise<PartDoc[]> {
    return this.call("GET", "/parts");
  }

  getPart(partId: string): Promise<PartDoc> {
    return this.call("GET", `/parts/${encodeURIComponent(partId)}`);
  }

  putPart(doc: PartDoc): Promise<PartDoc> {
    return this.call("PUT", `/parts/${encodeURIComponent(doc.partId)}`, doc);
  }

  deletePart(partId: string): Promise<void> {
    return this.call("DELETE", `/parts/${encodeURIComponent(partId)}`);
  }

  submitRequest(doc: RequestDoc): Promise<{ jobId: string; state: string }> {
    return this.call("POST", "/requests", doc);
  }

  listJobs(): Promise<JobDoc[]> {
    return this.call("GET", "/jobs");
  }

  getJob(jobId: string): Promise<JobDoc> {
    return this.call("GET", `/jobs/${jobId}`);
  }

  getResults(jobId: string, offset = 0, limit = 50): Promise<ResultPage> {
    return this.call("GET", `/jobs/${jobId}/results?offset=${offset}&limit=${limit}`);
  }

  getBom(jobId: string, index: number): Promise<BomDoc> {
    return this.call("GET", `/jobs/${jobId}/results/${index}/bom`);
  }

  getProgram(jobId: string, index: number): Promise<ProgramDoc> {
    return this.call("GET", `/jobs/${jobId}/results/${index}/program`);
  }

  getScene(jobId: string, index: number, angles: number[]): Promise<SceneEntry[]> {
    const qs = angles.length ? `?angles=${angles.map((a) => a.toFixed(6)).join(",")}` : "";
    return this.call("GET", `/jobs/${jobId}/results/${index}/scene${qs}`);
  }
}

export function emptyType(): TypeDoc {
  return { formats: [], parts: [], attributes: [] };
}
