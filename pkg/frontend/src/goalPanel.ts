import type { GoalView, LemmaView, Report } from './types.js';

export type PanelModel =
  | { kind: 'empty'; note: string }
  | { kind: 'parse-error'; note: string }
  | { kind: 'statement'; lemma: string; target: string }
  | { kind: 'done'; lemma: string }
  | { kind: 'goals'; lemma: string; goals: GoalView[] };

function lemmaAt(report: Report, cursorLine: number): LemmaView | null {
  let current: LemmaView | null = null;
  for (const lemma of report.lemmas) {
    const first = Math.min(...lemma.steps.map((s) => s.line));
    if (first <= cursorLine) current = lemma;
  }
  // before the first lemma's first step the first lemma is still relevant
  return current ?? report.lemmas[0] ?? null;
}

/**
 * The proof state to display for the cursor position: the goals after the
 * last ok step at or before the cursor line, the lemma statement before
 * the first step, and "no goals" once the proof is complete.
 */
export function goalPanel(report: Report | null, cursorLine: number): PanelModel {
  if (report === null) {
    return { kind: 'empty', note: 'start typing, or load an example' };
  }
  if (report.error !== null) {
    return {
      kind: 'parse-error',
      note: `syntax error at line ${report.error.line}: ${report.error.message}`,
    };
  }
  const lemma = lemmaAt(report, cursorLine);
  if (lemma === null) {
    return { kind: 'empty', note: 'no lemmas in this script' };
  }
  // report order is execution order; take the last ok step not past the cursor
  let chosen = null;
  for (const step of lemma.steps) {
    if (step.status === 'ok' && step.line <= cursorLine) chosen = step;
  }
  if (chosen === null) {
    return { kind: 'statement', lemma: lemma.name, target: lemma.statement };
  }
  if (chosen.goals.length === 0) {
    return { kind: 'done', lemma: lemma.name };
  }
  return { kind: 'goals', lemma: lemma.name, goals: chosen.goals };
}
