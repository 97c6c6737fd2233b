// Job polling. The server is polled, never pushed: one GET per interval
// until the job reaches a terminal state.

import type { ApiClient, JobDoc } from "./api.js";

export const POLL_INTERVAL_MS = 1000;

export interface PollHandle {
  /** Resolves with the terminal job document (state done or failed). */
  done: Promise<JobDoc>;
  cancel: () => void;
}

type SetTimeoutFn = (callback: () => void, ms: number) => unknown;
type ClearTimeoutFn = (handle: unknown) => void;

export interface PollOptions {
  intervalMs?: number;
  onUpdate?: (job: JobDoc) => void;
  setTimeoutFn?: SetTimeoutFn;
  clearTimeoutFn?: ClearTimeoutFn;
}

export function pollJob(api: ApiClient, jobId: string, options: PollOptions = {}): PollHandle {
  const intervalMs = options.intervalMs ?? POLL_INTERVAL_MS;
  const schedule: SetTimeoutFn = options.setTimeoutFn ?? ((cb, ms) => setTimeout(cb, ms));
  const unschedule: ClearTimeoutFn = options.clearTimeoutFn ?? ((h) => clearTimeout(h as never));
  let timer: unknown = null;
  let cancelled = false;

  const done = new Promise<JobDoc>((resolve, reject) => {
    const tick = async () => {
      if (cancelled) {
        return;
      }
      let job: JobDoc;
      try {
        job = await api.getJob(jobId);
      } catch (error) {
        reject(error);
        return;
      }
      options.onUpdate?.(job);
      if (job.state === "done" || job.state === "failed") {
        resolve(job);
        return;
      }
      timer = schedule(tick, intervalMs);
    };
    void tick();
  });

  return {
    done,
    cancel: () => {
      cancelled = true;
      if (timer !== null) {
        unschedule(timer);
      }
    },
  };
}
