/** Thin client for the checking service; all logic lives server side. */
export class ApiClient {
    constructor(base = '', fetchImpl = fetch) {
        this.base = base;
        this.fetchImpl = fetchImpl;
    }
    async check(script) {
        const resp = await this.fetchImpl(`${this.base}/api/check`, {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({ script }),
        });
        if (!resp.ok) {
            throw new Error(`check request failed with status ${resp.status}`);
        }
        return (await resp.json());
    }
    async examples() {
        const resp = await this.fetchImpl(`${this.base}/api/examples`);
        if (!resp.ok) {
            throw new Error(`examples request failed with status ${resp.status}`);
        }
        return (await resp.json());
    }
    async exampleText(name) {
        const resp = await this.fetchImpl(`${this.base}/api/examples/${encodeURIComponent(name)}`);
        if (!resp.ok) {
            throw new Error(`unknown example ${name}`);
        }
        return await resp.text();
    }
}
