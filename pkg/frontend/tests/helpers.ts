// Shared plumbing for the suite: raw fetch helpers that bypass the client
// under test, plus a fast job runner.

import type { FetchFn, RequestDoc } from "../src/api.js";
import { ApiClient } from "../src/api.js";

export async function rawJson<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok && response.status !== 204) {
    throw new Error(`HTTP ${response.status} for ${url}: ${await response.text()}`);
  }
  return response.status === 204 ? (undefined as T) : ((await response.json()) as T);
}

/** Submit a request and spin until the job is done; returns the job id. */
export async function runJob(base: string, doc: RequestDoc): Promise<string> {
  const submitted = await rawJson<{ jobId: string }>(`${base}/requests`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(doc),
  });
  for (let i = 0; i < 600; i += 1) {
    const job = await rawJson<{ state: string; error?: string }>(`${base}/jobs/${submitted.jobId}`);
    if (job.state === "done") {
      return submitted.jobId;
    }
    if (job.state === "failed") {
      throw new Error(`job failed: ${job.error}`);
    }
    await new Promise((r) => setTimeout(r, 50));
  }
  throw new Error("job never finished");
}

export interface CountingClient {
  api: ApiClient;
  calls: () => number;
}

/** ApiClient whose outbound requests are counted. */
export function countingClient(base: string): CountingClient {
  let count = 0;
  const counting: FetchFn = (input, init) => {
    count += 1;
    return globalThis.fetch(input, init);
  };
  return { api: new ApiClient(base, counting), calls: () => count };
}

export function typeDoc(partial: Partial<{ formats: string[]; parts: string[]; attributes: string[] }> = {}) {
  return { formats: [], parts: [], attributes: [], ...partial };
}
