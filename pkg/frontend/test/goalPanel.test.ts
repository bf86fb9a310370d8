import { describe, expect, it } from 'vitest';

import { goalPanel } from '../src/goalPanel.js';
import type { Report, StepView } from '../src/types.js';

const step = (
  line: number,
  status: StepView['status'],
  targets: string[],
  assumptions: Array<[string, string]> = [],
): StepView => ({
  line,
  status,
  message: null,
  goals: targets.map((target) => ({
    assumptions: assumptions.map(([label, formula]) => ({ label, formula })),
    target,
  })),
});

const report: Report = {
  complete: true,
  lemmas: [
    {
      name: 'demo',
      statement: 'A ==> A',
      complete: true,
      warnings: [],
      steps: [
        step(3, 'ok', ['A'], [['h', 'A']]),
        step(4, 'ok', []),
        step(5, 'ok', []), // qed entry
      ],
    },
  ],
  error: null,
};

describe('goalPanel', () => {
  it('shows a hint with no report', () => {
    expect(goalPanel(null, 1).kind).toBe('empty');
  });

  it('shows the statement before the first step', () => {
    const model = goalPanel(report, 1);
    expect(model).toEqual({ kind: 'statement', lemma: 'demo', target: 'A ==> A' });
  });

  it('shows the goals after the last ok step at or before the cursor', () => {
    const model = goalPanel(report, 3);
    expect(model.kind).toBe('goals');
    if (model.kind === 'goals') {
      expect(model.goals[0].target).toBe('A');
      expect(model.goals[0].assumptions).toEqual([{ label: 'h', formula: 'A' }]);
    }
  });

  it('reports no goals at the end of a complete proof', () => {
    expect(goalPanel(report, 99)).toEqual({ kind: 'done', lemma: 'demo' });
  });

  it('falls back to the statement when steps before the cursor failed', () => {
    const broken: Report = {
      complete: false,
      lemmas: [
        {
          ...report.lemmas[0],
          complete: false,
          steps: [step(3, 'error', ['A']), step(4, 'unchecked', [])],
        },
      ],
      error: null,
    };
    expect(goalPanel(broken, 4).kind).toBe('statement');
  });

  it('selects the lemma under the cursor in a multi-lemma script', () => {
    const multi: Report = {
      complete: true,
      lemmas: [
        report.lemmas[0],
        {
          name: 'second',
          statement: 'B ==> B',
          complete: true,
          warnings: [],
          steps: [step(10, 'ok', ['B']), step(11, 'ok', [])],
        },
      ],
      error: null,
    };
    const model = goalPanel(multi, 10);
    expect(model.kind).toBe('goals');
    if (model.kind === 'goals') expect(model.lemma).toBe('second');
  });

  it('describes parse errors', () => {
    const bad: Report = {
      complete: false,
      lemmas: [],
      error: { line: 9, column: 1, message: 'expected a proof step' },
    };
    const model = goalPanel(bad, 1);
    expect(model.kind).toBe('parse-error');
  });
});
