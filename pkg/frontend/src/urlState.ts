// Filter state lives in the URL so any table view is shareable. Parameter
// names match the API contract: class, source, q, limit, offset.

export interface FilterState {
  class: string;
  source: string;
  q: string;
  limit: number;
  offset: number;
}

export const DEFAULT_FILTERS: FilterState = {
  class: '',
  source: '',
  q: '',
  limit: 25,
  offset: 0,
};

/** Serialize filters into the documented query string (paging always explicit). */
export function filtersToQuery(filters: FilterState): string {
  const params = new URLSearchParams();
  if (filters.class) params.set('class', filters.class);
  if (filters.source) params.set('source', filters.source);
  if (filters.q) params.set('q', filters.q);
  params.set('limit', String(filters.limit));
  params.set('offset', String(filters.offset));
  return params.toString();
}

/** Parse a location.search string back into a full filter state. */
export function parseFilters(search: string): FilterState {
  const params = new URLSearchParams(search);
  const limit = Number.parseInt(params.get('limit') ?? '', 10);
  const offset = Number.parseInt(params.get('offset') ?? '', 10);
  return {
    class: params.get('class') ?? '',
    source: params.get('source') ?? '',
    q: params.get('q') ?? '',
    limit: Number.isFinite(limit) && limit >= 0 ? limit : DEFAULT_FILTERS.limit,
    offset: Number.isFinite(offset) && offset >= 0 ? offset : DEFAULT_FILTERS.offset,
  };
}
