import type { ApiClient } from "./api.js";
import type { Job } from "./types.js";

export const POLL_INTERVAL_MS = 1000;

/**
 * Poll a job once per second until it settles. The per-tick callback feeds
 * the progress panel; the returned promise resolves with the terminal job.
 */
export function pollJob(
  api: ApiClient,
  jobId: string,
  onUpdate?: (job: Job) => void,
  intervalMs: number = POLL_INTERVAL_MS,
): Promise<Job> {
  return new Promise((resolve, reject) => {
    const tick = async () => {
      let job: Job;
      try {
        job = await api.getJob(jobId);
      } catch (error) {
        reject(error);
        return;
      }
      onUpdate?.(job);
      if (job.state === "succeeded" || job.state === "failed") {
        resolve(job);
        return;
      }
      setTimeout(tick, intervalMs);
    };
    void tick();
  });
}
