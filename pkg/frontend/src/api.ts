// Typed client for the review service JSON API. The UI never recomputes
// metrics or rankings; everything rendered comes from these payloads.

export interface StatusView {
  iteration: number;
  running: boolean;
  halted: boolean;
  error: string | null;
  generation: number;
  answers_loaded: boolean;
  pool_size: number;
  accepted: number;
  rejected: number;
  pending: number;
  lexicon_size: number;
}

export type Verdict = 'PENDING' | 'ACCEPT' | 'REJECT';

export interface ReviewItem {
  rank: number;
  score: number;
  text: string;
  left: string;
  right: string;
  snippet: string;
  verdict: Verdict;
  iteration: number;
  article_id: string;
  offset: number;
}

export interface CandidatePage {
  total: number;
  offset: number;
  items: ReviewItem[];
}

export interface MetricsRow {
  iteration: number;
  precision: number;
  recall: number;
  f_measure: number;
  extracted: number;
  accepted: number;
  rejected: number;
  pending: number;
  lexicon_size: number;
  new_candidates: number;
  [key: string]: number;
}

export interface JudgmentAck {
  text: string;
  verdict: Verdict;
  changed: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(resp: Response): Promise<never> {
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body, keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(private base: string = '') {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await fetch(this.base + path);
    if (!resp.ok) await parseError(resp);
    return resp.json() as Promise<T>;
  }

  status(): Promise<StatusView> {
    return this.getJson('/api/status');
  }

  candidates(params: {
    status?: string;
    iteration?: number;
    offset?: number;
    limit?: number;
  }): Promise<CandidatePage> {
    const search = new URLSearchParams();
    if (params.status) search.set('status', params.status);
    if (params.iteration !== undefined) search.set('iteration', String(params.iteration));
    if (params.offset !== undefined) search.set('offset', String(params.offset));
    if (params.limit !== undefined) search.set('limit', String(params.limit));
    return this.getJson(`/api/candidates?${search.toString()}`);
  }

  async postJudgment(text: string, verdict: Verdict, override = false): Promise<JudgmentAck> {
    const resp = await fetch(this.base + '/api/judgments', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text, verdict, override }),
    });
    if (!resp.ok) await parseError(resp);
    return resp.json() as Promise<JudgmentAck>;
  }

  async startIteration(): Promise<{ status: string; iteration: number }> {
    const resp = await fetch(this.base + '/api/iterations', { method: 'POST' });
    if (!resp.ok) await parseError(resp);
    return resp.json();
  }

  async metrics(): Promise<MetricsRow[]> {
    const body = await this.getJson<{ history: MetricsRow[] }>('/api/metrics');
    return body.history;
  }

  async dictionary(): Promise<{ entries: string[]; generation: number; seeds: string[] }> {
    return this.getJson('/api/dictionary');
  }
}
