import { ApiClient } from './api.js';
import { goalPanel } from './goalPanel.js';
import { gutterMarkers, markersByLine } from './markers.js';
import { CheckScheduler } from './scheduler.js';
import type { Report } from './types.js';

const api = new ApiClient();

const editor = document.getElementById('editor') as HTMLTextAreaElement;
const gutter = document.getElementById('gutter') as HTMLElement;
const goals = document.getElementById('goals') as HTMLElement;
const banner = document.getElementById('banner') as HTMLElement;
const status = document.getElementById('status') as HTMLElement;
const examplesSelect = document.getElementById('examples') as HTMLSelectElement;

let lastReport: Report | null = null;

function cursorLine(): number {
  const upToCursor = editor.value.slice(0, editor.selectionStart ?? 0);
  return upToCursor.split('\n').length;
}

function renderGutter(): void {
  const lines = editor.value.split('\n').length;
  const byLine = markersByLine(gutterMarkers(lastReport));
  const parts: string[] = [];
  for (let i = 1; i <= lines; i++) {
    const marker = byLine.get(i);
    const cls = marker ? ` marker-${marker.status}` : '';
    const tip = marker?.message ? ` title="${escapeHtml(marker.message)}"` : '';
    parts.push(`<div class="gutter-line${cls}"${tip}>${i}</div>`);
  }
  gutter.innerHTML = parts.join('');
}

function renderGoals(): void {
  const model = goalPanel(lastReport, cursorLine());
  switch (model.kind) {
    case 'empty':
    case 'parse-error':
      goals.innerHTML = `<p class="note">${escapeHtml(model.note)}</p>`;
      break;
    case 'statement':
      goals.innerHTML =
        `<h3>${escapeHtml(model.lemma)}</h3>` +
        `<p class="note">to show:</p><pre>${escapeHtml(model.target)}</pre>`;
      break;
    case 'done':
      goals.innerHTML = `<h3>${escapeHtml(model.lemma)}</h3><p class="note">no goals &mdash; qed</p>`;
      break;
    case 'goals': {
      const blocks = model.goals.map((g, i) => {
        const assumptions = g.assumptions
          .map((a) => `<div class="assumption"><span class="label">${escapeHtml(a.label)}</span>: ${escapeHtml(a.formula)}</div>`)
          .join('');
        return (
          `<div class="goal"><div class="goal-index">goal ${i + 1}</div>` +
          assumptions +
          `<div class="target">&#8866; ${escapeHtml(g.target)}</div></div>`
        );
      });
      goals.innerHTML = `<h3>${escapeHtml(model.lemma)}</h3>` + blocks.join('');
      break;
    }
  }
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

const scheduler = new CheckScheduler(
  (script) => api.check(script),
  {
    onReport: (report) => {
      lastReport = report;
      banner.hidden = true;
      renderGutter();
      renderGoals();
    },
    onError: () => {
      // markers from the previous report are retained
      banner.hidden = false;
      banner.textContent = 'cannot reach the checking service';
    },
    onBusy: (busy) => {
      status.textContent = busy ? 'checking…' : '';
    },
  },
);

editor.addEventListener('input', () => {
  renderGutter(); // keep line numbers in sync while the check is pending
  scheduler.noteEdit(editor.value);
});
for (const event of ['keyup', 'click', 'select']) {
  editor.addEventListener(event, renderGoals);
}
editor.addEventListener('scroll', () => {
  gutter.scrollTop = editor.scrollTop;
});

async function loadExample(name: string): Promise<void> {
  try {
    const text = await api.exampleText(name);
    editor.value = text;
    lastReport = null;
    renderGutter();
    scheduler.checkNow(text);
  } catch {
    banner.hidden = false;
    banner.textContent = `could not load example ${name}`;
  }
}

examplesSelect.addEventListener('change', () => {
  if (examplesSelect.value) void loadExample(examplesSelect.value);
});

async function init(): Promise<void> {
  renderGutter();
  renderGoals();
  try {
    const names = await api.examples();
    for (const name of names) {
      const option = document.createElement('option');
      option.value = name;
      option.textContent = name;
      examplesSelect.appendChild(option);
    }
  } catch {
    banner.hidden = false;
    banner.textContent = 'cannot reach the checking service';
  }
}

void init();
