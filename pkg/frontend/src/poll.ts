// Poll a translation job every two seconds until it reaches a terminal state.

import type { TranslationJob } from './types.js';

export const POLL_INTERVAL_MS = 2000;

export interface PollOptions {
  intervalMs?: number;
  maxAttempts?: number;
  onUpdate?: (job: TranslationJob) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export function isTerminal(job: TranslationJob): boolean {
  return job.status === 'done' || job.status === 'failed';
}

/** Resolve with the first terminal job state seen; rejects only if polling exhausts maxAttempts. */
export async function pollJob(
  fetchJob: () => Promise<TranslationJob>,
  options: PollOptions = {},
): Promise<TranslationJob> {
  const intervalMs = options.intervalMs ?? POLL_INTERVAL_MS;
  const maxAttempts = options.maxAttempts ?? 150;
  const sleep = options.sleep ?? defaultSleep;

  for (let attempt = 0; attempt < maxAttempts; attempt += 1) {
    const job = await fetchJob();
    options.onUpdate?.(job);
    if (isTerminal(job)) {
      return job;
    }
    await sleep(intervalMs);
  }
  throw new Error(`job still not terminal after ${maxAttempts} polls`);
}
