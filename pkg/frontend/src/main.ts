// Dashboard wiring: filter controls, article table, review pane, polling.

import { ApiClient, ApiRequestError } from './api.js';
import { pollJob } from './poll.js';
import { articleTableHtml, errorBannerHtml, reviewPaneHtml } from './render.js';
import type { Article, ArticlePage, TranslationJob } from './types.js';
import { DEFAULT_FILTERS, filtersToQuery, parseFilters, type FilterState } from './urlState.js';

const api = new ApiClient();

interface ViewState {
  filters: FilterState;
  page: ArticlePage | null;
  selected: Article | null;
  job: TranslationJob | null;
}

const state: ViewState = {
  filters: parseFilters(window.location.search),
  page: null,
  selected: null,
  job: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(code: string, message: string): void {
  el('banner').innerHTML = errorBannerHtml(code, message);
}

function clearError(): void {
  el('banner').innerHTML = '';
}

function pushUrl(): void {
  const query = filtersToQuery(state.filters);
  window.history.pushState(null, '', query ? `?${query}` : window.location.pathname);
}

async function refreshTable(): Promise<void> {
  try {
    const page = await api.listArticles(state.filters);
    state.page = page;
    clearError();
    el('table-host').innerHTML = articleTableHtml(page);
    wireRows();
    renderPager();
  } catch (error) {
    // Keep the last good table on screen; only the banner changes.
    if (error instanceof ApiRequestError) {
      showError(error.code, error.message);
    } else {
      showError('Error', String(error));
    }
  }
}

function wireRows(): void {
  for (const row of document.querySelectorAll<HTMLTableRowElement>('tr.article-row')) {
    row.addEventListener('click', () => {
      const id = row.dataset.articleId;
      if (id) void selectArticle(id);
    });
  }
}

function renderPager(): void {
  const { limit, offset } = state.filters;
  const total = state.page?.total ?? 0;
  el('pager-label').textContent =
    total === 0 ? 'no matches' : `${offset + 1}–${Math.min(offset + limit, total)} of ${total}`;
  (el('prev') as HTMLButtonElement).disabled = offset === 0;
  (el('next') as HTMLButtonElement).disabled = offset + limit >= total;
}

function renderReview(): void {
  if (!state.selected) {
    el('review-host').innerHTML = '<p class="pane-placeholder">Select an article to review.</p>';
    return;
  }
  el('review-host').innerHTML = reviewPaneHtml(state.selected, state.job);
}

async function selectArticle(id: string): Promise<void> {
  try {
    state.selected = await api.getArticle(id);
    state.job = null;
    clearError();
    renderReview();
  } catch (error) {
    if (error instanceof ApiRequestError) showError(error.code, error.message);
  }
}

async function requestTranslation(): Promise<void> {
  if (!state.selected) return;
  const backendId = (el('backend') as HTMLSelectElement).value;
  try {
    clearError();
    const job = await api.translateArticle(state.selected.id, backendId);
    state.job = job;
    renderReview();
    if (job.status === 'pending') {
      state.job = await pollJob(() => api.getJob(job.id), {
        onUpdate: (update) => {
          state.job = update;
          renderReview();
        },
      });
    }
    renderReview();
  } catch (error) {
    if (error instanceof ApiRequestError) {
      showError(error.code, error.message);
    } else {
      showError('Error', String(error));
    }
  }
}

async function populateControls(): Promise<void> {
  try {
    const [sources, backends, wide] = await Promise.all([
      api.listSources(),
      api.listBackends(),
      api.listArticles({ ...DEFAULT_FILTERS, limit: 200 }),
    ]);
    const sourceSelect = el<HTMLSelectElement>('source');
    for (const source of sources.items) {
      const option = document.createElement('option');
      option.value = source.id;
      option.textContent = source.name;
      sourceSelect.append(option);
    }
    const classSelect = el<HTMLSelectElement>('class');
    const classes = [...new Set(wide.items.map((a) => a.class_label).filter((c): c is string => !!c))].sort();
    for (const label of classes) {
      const option = document.createElement('option');
      option.value = label;
      option.textContent = label;
      classSelect.append(option);
    }
    const backendSelect = el<HTMLSelectElement>('backend');
    for (const backend of backends.items) {
      const option = document.createElement('option');
      option.value = backend.id;
      option.textContent = `${backend.id} (${backend.kind})`;
      backendSelect.append(option);
    }
    classSelect.value = state.filters.class;
    sourceSelect.value = state.filters.source;
    el<HTMLInputElement>('q').value = state.filters.q;
  } catch (error) {
    if (error instanceof ApiRequestError) showError(error.code, error.message);
  }
}

function wireControls(): void {
  el<HTMLSelectElement>('class').addEventListener('change', (event) => {
    state.filters.class = (event.target as HTMLSelectElement).value;
    state.filters.offset = 0;
    pushUrl();
    void refreshTable();
  });
  el<HTMLSelectElement>('source').addEventListener('change', (event) => {
    state.filters.source = (event.target as HTMLSelectElement).value;
    state.filters.offset = 0;
    pushUrl();
    void refreshTable();
  });
  el<HTMLInputElement>('q').addEventListener('change', (event) => {
    state.filters.q = (event.target as HTMLInputElement).value;
    state.filters.offset = 0;
    pushUrl();
    void refreshTable();
  });
  el<HTMLButtonElement>('clear').addEventListener('click', () => {
    state.filters = { ...DEFAULT_FILTERS };
    el<HTMLSelectElement>('class').value = '';
    el<HTMLSelectElement>('source').value = '';
    el<HTMLInputElement>('q').value = '';
    pushUrl();
    void refreshTable();
  });
  el<HTMLButtonElement>('prev').addEventListener('click', () => {
    state.filters.offset = Math.max(0, state.filters.offset - state.filters.limit);
    pushUrl();
    void refreshTable();
  });
  el<HTMLButtonElement>('next').addEventListener('click', () => {
    state.filters.offset += state.filters.limit;
    pushUrl();
    void refreshTable();
  });
  el<HTMLButtonElement>('translate').addEventListener('click', () => {
    void requestTranslation();
  });
  window.addEventListener('popstate', () => {
    state.filters = parseFilters(window.location.search);
    void refreshTable();
  });
}

async function start(): Promise<void> {
  wireControls();
  await populateControls();
  await refreshTable();
  renderReview();
}

void start();
