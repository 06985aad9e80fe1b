// Review dashboard: ranked candidates with their context bigrams and a
// corpus snippet, keyboard-first verdicts, live metrics, and an iteration
// trigger. The page holds no ground truth of its own; a reload rebuilds
// everything from the server.

import {
  ApiClient,
  ApiError,
  type MetricsRow,
  type ReviewItem,
  type StatusView,
  type Verdict,
} from './api.js';
import { VerdictQueue } from './queue.js';

const PAGE_SIZE = 50;
const POLL_MS = 800;
const RETRY_MS = 2000;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class ReviewApp {
  readonly queue: VerdictQueue;
  private status: StatusView | null = null;
  private items: ReviewItem[] = [];
  private total = 0;
  private offset = 0;
  private filter = 'pending';
  private selected = 0;
  private banner: string | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private metricsRows: MetricsRow[] = [],
  ) {
    this.queue = new VerdictQueue(
      (text, verdict) => this.api.postJudgment(text, verdict),
      ({ blocked, lastError }) => {
        this.banner = blocked ? `retrying verdicts: ${lastError ?? 'connection lost'}` : null;
        if (blocked) this.scheduleRetry();
        this.renderBanner();
        this.renderRows();
      },
    );
    root.addEventListener('keydown', (e) => this.onKey(e as KeyboardEvent));
  }

  async start(): Promise<void> {
    await this.refresh();
  }

  async refresh(): Promise<void> {
    this.status = await this.api.status();
    this.metricsRows = await this.api.metrics();
    const page = await this.api.candidates({
      status: this.filter,
      offset: this.offset,
      limit: PAGE_SIZE,
    });
    this.items = page.items;
    this.total = page.total;
    if (this.selected >= this.items.length) {
      this.selected = Math.max(0, this.items.length - 1);
    }
    this.render();
    if (this.status.running) this.schedulePoll();
  }

  private scheduleRetry(): void {
    if (this.retryTimer) return;
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      void this.queue.flush();
    }, RETRY_MS);
  }

  private schedulePoll(): void {
    if (this.pollTimer) return;
    this.pollTimer = setTimeout(async () => {
      this.pollTimer = null;
      try {
        const status = await this.api.status();
        this.status = status;
        if (status.running) {
          this.renderHeader();
          this.schedulePoll();
        } else {
          // iteration finished: verdicts unlock, pool and metrics change
          await this.queue.flush();
          await this.refresh();
        }
      } catch {
        this.schedulePoll();
      }
    }, POLL_MS);
  }

  private onKey(e: KeyboardEvent): void {
    if (e.key === 'j') this.moveSelection(1);
    else if (e.key === 'k') this.moveSelection(-1);
    else if (e.key === 'a') void this.judgeSelected('ACCEPT');
    else if (e.key === 'r') void this.judgeSelected('REJECT');
    else return;
    e.preventDefault();
  }

  private moveSelection(delta: number): void {
    if (!this.items.length) return;
    this.selected = Math.min(Math.max(this.selected + delta, 0), this.items.length - 1);
    this.renderRows();
  }

  async judgeSelected(verdict: Verdict): Promise<void> {
    const item = this.items[this.selected];
    if (item) await this.judge(item.text, verdict);
  }

  async judge(text: string, verdict: Verdict): Promise<void> {
    const item = this.items.find((i) => i.text === text);
    if (item) item.verdict = verdict; // optimistic; server state wins on refresh
    this.queue.enqueue(text, verdict);
    this.renderRows();
    await this.queue.flush();
    if (!this.queue.isBlocked && this.status) {
      // cheap count refresh so the pending badge tracks the server
      try {
        this.status = await this.api.status();
        this.renderHeader();
      } catch {
        /* next poll will catch up */
      }
    }
  }

  async runIteration(): Promise<void> {
    try {
      await this.api.startIteration();
      this.banner = null;
      if (this.status) this.status.running = true;
      this.renderHeader();
      this.renderBanner();
      this.schedulePoll();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.banner = `iteration blocked: ${err.detail}`;
      } else {
        this.banner = err instanceof Error ? err.message : String(err);
      }
      this.renderBanner();
    }
  }

  async setFilter(filter: string): Promise<void> {
    this.filter = filter;
    this.offset = 0;
    this.selected = 0;
    await this.refresh();
  }

  async setPage(delta: number): Promise<void> {
    const next = this.offset + delta * PAGE_SIZE;
    if (next < 0 || next >= this.total) return;
    this.offset = next;
    this.selected = 0;
    await this.refresh();
  }

  // -- rendering ----------------------------------------------------------

  private render(): void {
    this.root.innerHTML = '';
    this.root.append(
      this.buildHeader(),
      this.buildBanner(),
      this.buildMetrics(),
      this.buildToolbar(),
      this.buildTable(),
    );
    this.renderHeader();
    this.renderBanner();
    this.renderRows();
  }

  private buildHeader(): HTMLElement {
    const header = el('header', 'header');
    header.append(el('h1', undefined, 'journex review'));
    header.append(el('div', 'session-view'));
    const button = el('button', 'run-iteration', 'Run next iteration');
    button.addEventListener('click', () => void this.runIteration());
    header.append(button);
    return header;
  }

  private renderHeader(): void {
    const view = this.root.querySelector<HTMLElement>('.session-view');
    const button = this.root.querySelector<HTMLButtonElement>('.run-iteration');
    if (!view || !button || !this.status) return;
    const s = this.status;
    view.innerHTML = '';
    const pairs: [string, string][] = [
      ['iteration', String(s.iteration)],
      ['pool', String(s.pool_size)],
      ['pending', String(s.pending)],
      ['accepted', String(s.accepted)],
      ['rejected', String(s.rejected)],
      ['dictionary', String(s.lexicon_size)],
    ];
    for (const [label, value] of pairs) {
      const stat = el('span', 'stat');
      stat.append(el('span', 'stat-label', label), el('span', `stat-value stat-${label}`, value));
      view.append(stat);
    }
    button.disabled = s.running;
    button.textContent = s.running ? 'Iteration running…' : 'Run next iteration';
  }

  private buildBanner(): HTMLElement {
    return el('div', 'banner hidden');
  }

  private renderBanner(): void {
    const node = this.root.querySelector<HTMLElement>('.banner');
    if (!node) return;
    node.textContent = this.banner ?? '';
    node.classList.toggle('hidden', this.banner === null);
  }

  private buildMetrics(): HTMLElement {
    const box = el('section', 'metrics');
    if (!this.metricsRows.length) {
      box.append(el('p', 'muted', 'No iterations recorded yet.'));
      return box;
    }
    const table = el('table', 'metrics-table');
    const head = el('tr');
    head.append(el('th', undefined, 'metric'));
    for (const row of this.metricsRows) {
      head.append(el('th', undefined, String(row.iteration)));
    }
    table.append(head);
    const metrics: [string, (r: MetricsRow) => number, boolean][] = [
      ['precision', (r) => r.precision, true],
      ['recall', (r) => r.recall, true],
      ['F-measure', (r) => r.f_measure, true],
      ['extracted', (r) => r.extracted, false],
      ['new candidates', (r) => r.new_candidates, false],
    ];
    for (const [label, pick, isRatio] of metrics) {
      const tr = el('tr');
      tr.append(el('td', undefined, label));
      for (const row of this.metricsRows) {
        const value = pick(row);
        const td = el('td', 'num', isRatio ? value.toFixed(3) : String(value));
        // the exact server value, uninterpreted, for tooling and tests
        td.dataset.value = String(value);
        tr.append(td);
      }
      table.append(tr);
    }
    box.append(table);
    return box;
  }

  private buildToolbar(): HTMLElement {
    const bar = el('div', 'toolbar');
    for (const f of ['pending', 'accept', 'reject', 'all']) {
      const b = el('button', `filter filter-${f}${f === this.filter ? ' active' : ''}`, f);
      b.addEventListener('click', () => void this.setFilter(f));
      bar.append(b);
    }
    const prev = el('button', 'page-prev', '‹ prev');
    prev.addEventListener('click', () => void this.setPage(-1));
    const next = el('button', 'page-next', 'next ›');
    next.addEventListener('click', () => void this.setPage(1));
    const where = el(
      'span',
      'page-info',
      `${this.offset + 1}–${Math.min(this.offset + PAGE_SIZE, this.total)} of ${this.total}`,
    );
    bar.append(prev, where, next, el('span', 'hint', 'keys: j/k move · a accept · r reject'));
    return bar;
  }

  private buildTable(): HTMLElement {
    const table = el('table', 'candidates');
    const head = el('tr');
    for (const col of ['#', 'score', 'left', 'candidate', 'right', 'snippet', 'verdict', '']) {
      head.append(el('th', undefined, col));
    }
    table.append(head);
    for (const item of this.items) {
      const tr = el('tr', 'candidate-row');
      tr.dataset.text = item.text;
      tr.append(
        el('td', 'rank', String(item.rank)),
        el('td', 'num score', item.score.toFixed(4)),
        el('td', 'bigram left', item.left),
        el('td', 'text', item.text),
        el('td', 'bigram right', item.right),
        el('td', 'snippet', item.snippet),
        el('td', 'verdict', item.verdict),
      );
      const actions = el('td', 'actions');
      const accept = el('button', 'accept', '✓');
      accept.title = 'accept (a)';
      accept.addEventListener('click', () => void this.judge(item.text, 'ACCEPT'));
      const reject = el('button', 'reject', '✗');
      reject.title = 'reject (r)';
      reject.addEventListener('click', () => void this.judge(item.text, 'REJECT'));
      actions.append(accept, reject);
      tr.append(actions);
      tr.addEventListener('click', () => {
        this.selected = this.items.indexOf(item);
        this.renderRows();
      });
      table.append(tr);
    }
    return table;
  }

  private renderRows(): void {
    const rows = this.root.querySelectorAll<HTMLElement>('.candidate-row');
    rows.forEach((row, idx) => {
      const item = this.items[idx];
      if (!item) return;
      row.classList.toggle('selected', idx === this.selected);
      row.classList.toggle('queued', this.queue.pending > 0 && idx === this.selected);
      const verdictCell = row.querySelector<HTMLElement>('.verdict');
      if (verdictCell) {
        verdictCell.textContent = item.verdict;
        verdictCell.className = `verdict verdict-${item.verdict.toLowerCase()}`;
      }
    });
  }
}

export function mountApp(root: HTMLElement, baseUrl = ''): ReviewApp {
  const app = new ReviewApp(root, new ApiClient(baseUrl));
  root.tabIndex = 0; // receive keyboard events
  void app.start();
  return app;
}
