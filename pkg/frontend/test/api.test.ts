import { describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';

const jsonResponse = (body: unknown, status = 200) =>
  ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
    text: async () => JSON.stringify(body),
  }) as unknown as Response;

describe('ApiClient', () => {
  it('posts the script to /api/check', async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ complete: true, lemmas: [], error: null }));
    const client = new ApiClient('', fetchImpl as unknown as typeof fetch);
    const report = await client.check('lemma ...');
    expect(report.complete).toBe(true);
    const [url, init] = fetchImpl.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe('/api/check');
    expect(init.method).toBe('POST');
    expect(JSON.parse(init.body as string)).toEqual({ script: 'lemma ...' });
  });

  it('raises on a non-2xx check response', async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ detail: 'too large' }, 413));
    const client = new ApiClient('', fetchImpl as unknown as typeof fetch);
    await expect(client.check('x')).rejects.toThrow('413');
  });

  it('lists and fetches examples', async () => {
    const fetchImpl = vi.fn(async (url: string) =>
      url.endsWith('/api/examples')
        ? jsonResponse(['pelletier34', 'pelletier43'])
        : ({ ok: true, status: 200, text: async () => 'lemma ...' } as unknown as Response),
    );
    const client = new ApiClient('', fetchImpl as unknown as typeof fetch);
    expect(await client.examples()).toEqual(['pelletier34', 'pelletier43']);
    expect(await client.exampleText('pelletier43')).toBe('lemma ...');
  });

  it('raises on unknown examples', async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ detail: 'unknown' }, 404));
    const client = new ApiClient('', fetchImpl as unknown as typeof fetch);
    await expect(client.exampleText('zzz')).rejects.toThrow('unknown example');
  });
});
