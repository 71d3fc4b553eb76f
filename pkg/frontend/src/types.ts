// Wire types mirroring the newsdesk API payloads exactly. The dashboard
// never recomputes any of these values; it renders them verbatim.

export interface QAReport {
  numerals_preserved: boolean;
  missing_numerals: string[];
  entities_preserved: boolean;
  missing_entities: string[];
  script_ok: boolean;
  length_ratio: number;
  passed: boolean;
}

export interface Article {
  id: string;
  source_id: string;
  url: string;
  title: string;
  body: string;
  language: string;
  fetched_at: string;
  published_at: string | null;
  dedup_hash: number;
  class_label: string | null;
  topic_scores: Record<string, number>;
  source_name: string;
  has_translation: boolean;
}

export interface ArticlePage {
  items: Article[];
  total: number;
}

export interface TranslationJob {
  id: string;
  article_id: string | null;
  source_text: string;
  chunks: string[];
  backend_id: string;
  status: 'pending' | 'done' | 'failed';
  output_text: string;
  qa: QAReport | null;
  error: string | null;
  created_at: string | null;
  finished_at: string | null;
}

export interface Source {
  id: string;
  name: string;
  feed_url: string;
  homepage_url: string;
  language: string;
  republish_permitted: boolean;
  license_note: string;
  enabled: boolean;
}

export interface BackendInfo {
  id: string;
  kind: string;
}

export interface PipelineRun {
  run_id: string;
  started_at: string;
  finished_at: string | null;
  sources_polled: number;
  articles_fetched: number;
  ingested: number;
  deduped: number;
  gate_denied: number;
  extraction_failures: number;
  classified: number;
  errors: { stage: string; id: string; reason: string }[];
}

export interface ApiErrorBody {
  error: string;
  message: string;
}
