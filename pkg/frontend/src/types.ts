/** JSON shapes returned by the checking service (POST /api/check). */

export interface AssumptionView {
  label: string;
  formula: string;
}

export interface GoalView {
  assumptions: AssumptionView[];
  target: string;
}

export type StepStatus = 'ok' | 'error' | 'unchecked';

export interface StepView {
  line: number;
  status: StepStatus;
  message: string | null;
  goals: GoalView[];
}

export interface LemmaView {
  name: string;
  statement: string;
  complete: boolean;
  warnings: string[];
  steps: StepView[];
}

export interface ParseErrorView {
  line: number;
  column: number;
  message: string;
}

export interface Report {
  complete: boolean;
  lemmas: LemmaView[];
  error: ParseErrorView | null;
}
