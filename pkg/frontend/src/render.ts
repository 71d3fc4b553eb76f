// Pure HTML builders. The dashboard performs no computation on article
// content: every label, score, translation, and QA verdict is rendered
// verbatim from an API payload field (escaped for HTML, nothing else).

import type { Article, ArticlePage, QAReport, TranslationJob } from './types.js';

// A topic becomes a badge when its stored relevance score reaches this.
export const TOPIC_BADGE_THRESHOLD = 0.1;

export function escapeHtml(value: string): string {
  return value
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

export function topicBadges(article: Article, threshold = TOPIC_BADGE_THRESHOLD): string[] {
  return Object.entries(article.topic_scores)
    .filter(([, score]) => score >= threshold)
    .sort((a, b) => b[1] - a[1])
    .map(([topic]) => topic);
}

export function articleRowHtml(article: Article): string {
  const badges = topicBadges(article)
    .map((topic) => `<span class="badge badge-topic">${escapeHtml(topic)}</span>`)
    .join('');
  const label = article.class_label
    ? `<span class="badge badge-class">${escapeHtml(article.class_label)}</span>`
    : '<span class="badge badge-none">unlabeled</span>';
  const translated = article.has_translation ? '<span class="dot" title="has translation">●</span>' : '';
  return (
    `<tr class="article-row" data-article-id="${escapeHtml(article.id)}">` +
    `<td class="cell-title">${escapeHtml(article.title)}${translated}</td>` +
    `<td class="cell-source">${escapeHtml(article.source_name)}</td>` +
    `<td class="cell-class">${label}</td>` +
    `<td class="cell-topics">${badges}</td>` +
    `<td class="cell-fetched">${escapeHtml(article.fetched_at)}</td>` +
    `</tr>`
  );
}

export function articleTableHtml(page: ArticlePage): string {
  const rows = page.items.map(articleRowHtml).join('');
  return (
    '<table class="articles">' +
    '<thead><tr><th>Title</th><th>Source</th><th>Class</th><th>Topics</th><th>Fetched</th></tr></thead>' +
    `<tbody>${rows}</tbody>` +
    '</table>' +
    `<p class="total">${page.total} article(s) match</p>`
  );
}

function qaFlag(name: string, ok: boolean, advisory = false): string {
  const cls = ok ? 'qa-pass' : advisory ? 'qa-warn' : 'qa-fail';
  const mark = ok ? 'pass' : advisory ? 'advisory' : 'fail';
  return `<li class="${cls}"><span class="qa-name">${name}</span> <span class="qa-verdict">${mark}</span></li>`;
}

export function qaReportHtml(qa: QAReport): string {
  const missingNumerals = qa.missing_numerals
    .map((run) => `<mark class="missing-numeral">${escapeHtml(run)}</mark>`)
    .join(' ');
  const missingEntities = qa.missing_entities
    .map((token) => `<span class="missing-entity">${escapeHtml(token)}</span>`)
    .join(' ');
  return (
    `<div class="qa-report" data-passed="${qa.passed}">` +
    `<p class="qa-overall">QA ${qa.passed ? 'passed' : 'failed'}</p>` +
    '<ul class="qa-flags">' +
    qaFlag('numerals preserved', qa.numerals_preserved) +
    qaFlag('Bengali script', qa.script_ok) +
    qaFlag(`length ratio ${qa.length_ratio.toFixed(2)}`, qa.length_ratio >= 0.3 && qa.length_ratio <= 3.0) +
    qaFlag('entities preserved', qa.entities_preserved, true) +
    '</ul>' +
    (missingNumerals ? `<p class="qa-missing">missing numerals: ${missingNumerals}</p>` : '') +
    (missingEntities ? `<p class="qa-missing-entities">entities not found: ${missingEntities}</p>` : '') +
    '</div>'
  );
}

function paragraphs(text: string): string {
  return text
    .split('\n')
    .filter((line) => line.length > 0)
    .map((line) => `<p>${escapeHtml(line)}</p>`)
    .join('');
}

export function reviewPaneHtml(article: Article, job: TranslationJob | null): string {
  const left =
    `<section class="pane pane-english" lang="en">` +
    `<h2>${escapeHtml(article.title)}</h2>` +
    paragraphs(article.body) +
    '</section>';

  let right: string;
  if (job === null || job.status === 'pending') {
    right = `<section class="pane pane-bangla pane-empty" lang="bn">` +
      `<p class="pane-placeholder">${job === null ? 'No translation requested yet.' : 'Translating…'}</p>` +
      '</section>';
  } else if (job.status === 'failed') {
    right = `<section class="pane pane-bangla pane-failed" lang="bn">` +
      `<p class="job-error">${escapeHtml(job.error ?? 'translation failed')}</p>` +
      '</section>';
  } else {
    right = `<section class="pane pane-bangla" lang="bn">` +
      paragraphs(job.output_text) +
      (job.qa ? qaReportHtml(job.qa) : '') +
      '</section>';
  }
  return `<div class="review" data-article-id="${escapeHtml(article.id)}">${left}${right}</div>`;
}

export function errorBannerHtml(code: string, message: string): string {
  return `<div class="banner banner-error" role="alert">` +
    `<strong>${escapeHtml(code)}</strong> ${escapeHtml(message)}` +
    '</div>';
}
