/**
 * Poll a submitted run until it reaches a terminal state. Both outcomes
 * resolve with the final descriptor; callers branch on `state` so a failed
 * run can surface its reason in place instead of as an exception.
 */

import type { RunDescriptor } from './types.js';

export interface RunReader {
  getRun(runId: string): Promise<RunDescriptor>;
}

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onUpdate?: (descriptor: RunDescriptor) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export function isTerminal(state: RunDescriptor['state']): boolean {
  return state === 'completed' || state === 'failed';
}

export async function pollRun(api: RunReader, runId: string, options: PollOptions = {}): Promise<RunDescriptor> {
  const intervalMs = options.intervalMs ?? 500;
  const timeoutMs = options.timeoutMs ?? 120_000;
  const sleep = options.sleep ?? defaultSleep;
  const started = Date.now();
  for (;;) {
    const descriptor = await api.getRun(runId);
    options.onUpdate?.(descriptor);
    if (isTerminal(descriptor.state)) return descriptor;
    if (Date.now() - started > timeoutMs) {
      throw new Error(`run ${runId} still ${descriptor.state} after ${timeoutMs}ms`);
    }
    await sleep(intervalMs);
  }
}
