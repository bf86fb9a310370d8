/** One marker per reported step (plus one for a parse error). */
export function gutterMarkers(report) {
    if (report === null)
        return [];
    if (report.error !== null) {
        return [{ line: report.error.line, status: 'error', message: report.error.message }];
    }
    const markers = [];
    for (const lemma of report.lemmas) {
        for (const step of lemma.steps) {
            markers.push({ line: step.line, status: step.status, message: step.message });
        }
    }
    return markers;
}
const SEVERITY = { ok: 0, unchecked: 1, error: 2 };
/** Collapse markers onto lines; the most severe status wins per line. */
export function markersByLine(markers) {
    const byLine = new Map();
    for (const m of markers) {
        const existing = byLine.get(m.line);
        if (existing === undefined || SEVERITY[m.status] > SEVERITY[existing.status]) {
            byLine.set(m.line, m);
        }
    }
    return byLine;
}
