import type { Report } from './types.js';

/** Thin client for the checking service; all logic lives server side. */
export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async check(script: string): Promise<Report> {
    const resp = await this.fetchImpl(`${this.base}/api/check`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ script }),
    });
    if (!resp.ok) {
      throw new Error(`check request failed with status ${resp.status}`);
    }
    return (await resp.json()) as Report;
  }

  async examples(): Promise<string[]> {
    const resp = await this.fetchImpl(`${this.base}/api/examples`);
    if (!resp.ok) {
      throw new Error(`examples request failed with status ${resp.status}`);
    }
    return (await resp.json()) as string[];
  }

  async exampleText(name: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.base}/api/examples/${encodeURIComponent(name)}`);
    if (!resp.ok) {
      throw new Error(`unknown example ${name}`);
    }
    return await resp.text();
  }
}
