import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { CheckScheduler } from '../src/scheduler.js';
import type { Report } from '../src/types.js';

const emptyReport = (tag: string): Report => ({
  complete: true,
  lemmas: [],
  error: { line: 0, column: 0, message: tag },
});

describe('CheckScheduler', () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it('sends one request after the debounce pause', async () => {
    const check = vi.fn(async () => emptyReport('a'));
    const onReport = vi.fn();
    const s = new CheckScheduler(check, { onReport, onError: vi.fn() });
    s.noteEdit('text');
    expect(check).not.toHaveBeenCalled();
    await vi.advanceTimersByTimeAsync(399);
    expect(check).not.toHaveBeenCalled();
    await vi.advanceTimersByTimeAsync(1);
    expect(check).toHaveBeenCalledTimes(1);
    expect(onReport).toHaveBeenCalledTimes(1);
  });

  it('collapses rapid edits into a single request', async () => {
    const check = vi.fn(async (text: string) => emptyReport(text));
    const onReport = vi.fn();
    const s = new CheckScheduler(check, { onReport, onError: vi.fn() });
    s.noteEdit('one');
    await vi.advanceTimersByTimeAsync(200);
    s.noteEdit('two');
    await vi.advanceTimersByTimeAsync(200);
    s.noteEdit('three');
    await vi.advanceTimersByTimeAsync(400);
    expect(check).toHaveBeenCalledTimes(1);
    expect(check).toHaveBeenCalledWith('three');
  });

  it('discards responses older than the latest edit', async () => {
    const resolvers: Array<(r: Report) => void> = [];
    const check = vi.fn(
      () => new Promise<Report>((resolve) => resolvers.push(resolve)),
    );
    const onReport = vi.fn();
    const s = new CheckScheduler(check, { onReport, onError: vi.fn() });
    s.noteEdit('old');
    await vi.advanceTimersByTimeAsync(400);
    expect(check).toHaveBeenCalledTimes(1);
    s.noteEdit('new'); // edit while the first request is in flight
    resolvers[0](emptyReport('old'));
    await vi.advanceTimersByTimeAsync(400);
    resolvers[1]?.(emptyReport('new'));
    await vi.advanceTimersByTimeAsync(0);
    expect(onReport).toHaveBeenCalledTimes(1);
    expect(onReport.mock.calls[0][0].error?.message).toBe('new');
  });

  it('keeps at most one request in flight', async () => {
    let inFlight = 0;
    let peak = 0;
    const resolvers: Array<(r: Report) => void> = [];
    const check = vi.fn(() => {
      inFlight += 1;
      peak = Math.max(peak, inFlight);
      return new Promise<Report>((resolve) =>
        resolvers.push((r) => {
          inFlight -= 1;
          resolve(r);
        }),
      );
    });
    const s = new CheckScheduler(check, { onReport: vi.fn(), onError: vi.fn() });
    s.noteEdit('a');
    await vi.advanceTimersByTimeAsync(400);
    s.noteEdit('b');
    await vi.advanceTimersByTimeAsync(400);
    expect(check).toHaveBeenCalledTimes(1); // second waits for the first
    resolvers[0](emptyReport('a'));
    await vi.advanceTimersByTimeAsync(0);
    expect(check).toHaveBeenCalledTimes(2);
    expect(peak).toBe(1);
  });

  it('reports network errors but only for the latest edit', async () => {
    const check = vi.fn(async () => {
      throw new Error('down');
    });
    const onError = vi.fn();
    const s = new CheckScheduler(check, { onReport: vi.fn(), onError });
    s.noteEdit('a');
    await vi.advanceTimersByTimeAsync(400);
    expect(onError).toHaveBeenCalledTimes(1);
  });

  it('checkNow bypasses the debounce delay', async () => {
    const check = vi.fn(async () => emptyReport('now'));
    const onReport = vi.fn();
    const s = new CheckScheduler(check, { onReport, onError: vi.fn() });
    s.checkNow('text');
    await vi.advanceTimersByTimeAsync(0);
    expect(check).toHaveBeenCalledTimes(1);
    expect(onReport).toHaveBeenCalledTimes(1);
  });
});
