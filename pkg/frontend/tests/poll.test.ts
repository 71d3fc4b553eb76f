import { describe, expect, it } from 'vitest';

import { isTerminal, pollJob, POLL_INTERVAL_MS } from '../src/poll.js';
import type { TranslationJob } from '../src/types.js';

function jobWith(status: TranslationJob['status']): TranslationJob {
  return {
    id: 'j1',
    article_id: 'a1',
    source_text: 'housing',
    chunks: ['housing'],
    backend_id: 'mock',
    status,
    output_text: status === 'done' ? 'আবাসন' : '',
    qa: null,
    error: status === 'failed' ? 'BackendUnavailable: boom' : null,
    created_at: null,
    finished_at: null,
  };
}

describe('pollJob', () => {
  it('polls every 2 s until the job is done', async () => {
    const sequence = [jobWith('pending'), jobWith('pending'), jobWith('done')];
    const sleeps: number[] = [];
    let calls = 0;
    const result = await pollJob(async () => sequence[calls++], {
      sleep: async (ms) => {
        sleeps.push(ms);
      },
    });
    expect(result.status).toBe('done');
    expect(calls).toBe(3);
    expect(sleeps).toEqual([POLL_INTERVAL_MS, POLL_INTERVAL_MS]);
  });

  it('failed is terminal too', async () => {
    let calls = 0;
    const result = await pollJob(
      async () => {
        calls += 1;
        return jobWith('failed');
      },
      { sleep: async () => {} },
    );
    expect(result.status).toBe('failed');
    expect(calls).toBe(1);
  });

  it('reports progress through onUpdate', async () => {
    const sequence = [jobWith('pending'), jobWith('done')];
    const seen: string[] = [];
    let calls = 0;
    await pollJob(async () => sequence[calls++], {
      sleep: async () => {},
      onUpdate: (job) => seen.push(job.status),
    });
    expect(seen).toEqual(['pending', 'done']);
  });

  it('gives up after maxAttempts', async () => {
    await expect(
      pollJob(async () => jobWith('pending'), { sleep: async () => {}, maxAttempts: 3 }),
    ).rejects.toThrow(/not terminal/);
  });

  it('isTerminal matches the status contract', () => {
    expect(isTerminal(jobWith('pending'))).toBe(false);
    expect(isTerminal(jobWith('done'))).toBe(true);
    expect(isTerminal(jobWith('failed'))).toBe(true);
  });
});
