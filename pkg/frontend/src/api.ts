// Thin typed client over the newsdesk JSON API.

import type {
  Article,
  ArticlePage,
  BackendInfo,
  PipelineRun,
  Source,
  TranslationJob,
} from './types.js';
import { filtersToQuery, type FilterState } from './urlState.js';

export class ApiRequestError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = 'ApiRequestError';
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (cause) {
    throw new ApiRequestError('Unreachable', `API unreachable: ${String(cause)}`, 0);
  }
  if (!response.ok) {
    let code = 'HttpError';
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string; message?: string };
      if (body.error) code = body.error;
      if (body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiRequestError(code, message, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  listArticles(filters: FilterState): Promise<ArticlePage> {
    return request(`${this.baseUrl}/api/articles?${filtersToQuery(filters)}`);
  }

  getArticle(id: string): Promise<Article> {
    return request(`${this.baseUrl}/api/articles/${encodeURIComponent(id)}`);
  }

  translateArticle(id: string, backendId: string): Promise<TranslationJob> {
    return request(`${this.baseUrl}/api/articles/${encodeURIComponent(id)}/translate`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ backend_id: backendId }),
    });
  }

  getJob(id: string): Promise<TranslationJob> {
    return request(`${this.baseUrl}/api/jobs/${encodeURIComponent(id)}`);
  }

  listSources(): Promise<{ items: Source[] }> {
    return request(`${this.baseUrl}/api/sources`);
  }

  listBackends(): Promise<{ items: BackendInfo[] }> {
    return request(`${this.baseUrl}/api/backends`);
  }

  latestRun(): Promise<PipelineRun> {
    return request(`${this.baseUrl}/api/runs/latest`);
  }
}
