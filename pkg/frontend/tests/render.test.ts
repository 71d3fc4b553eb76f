// @vitest-environment happy-dom
//
// Snapshot checks against recorded API payloads: everything the dashboard
// shows must be byte-identical to a fixture field after HTML parsing.

import { describe, expect, it } from 'vitest';

import {
  articleRowHtml,
  articleTableHtml,
  errorBannerHtml,
  escapeHtml,
  qaReportHtml,
  reviewPaneHtml,
  topicBadges,
} from '../src/render.js';
import type { Article, ArticlePage, TranslationJob } from '../src/types.js';

import articlesFixture from './fixtures/articles_housing.json';
import articleFixture from './fixtures/article.json';
import jobDoneFixture from './fixtures/job_done.json';
import jobFailedFixture from './fixtures/job_failed.json';
import jobQaFailedFixture from './fixtures/job_qa_failed.json';

const page = articlesFixture as unknown as ArticlePage;
const article = articleFixture as unknown as Article;
const jobDone = jobDoneFixture as unknown as TranslationJob;
const jobFailed = jobFailedFixture as unknown as TranslationJob;
const jobQaFailed = jobQaFailedFixture as unknown as TranslationJob;

function parse(html: string): HTMLElement {
  const host = document.createElement('div');
  host.innerHTML = html;
  return host;
}

describe('article table', () => {
  it('renders every recorded field byte-identical', () => {
    const host = parse(articleTableHtml(page));
    const rows = host.querySelectorAll('tr.article-row');
    expect(rows.length).toBe(page.items.length);
    page.items.forEach((item, index) => {
      const row = rows[index] as HTMLTableRowElement;
      expect(row.dataset.articleId).toBe(item.id);
      expect(row.querySelector('.cell-title')?.textContent).toContain(item.title);
      expect(row.querySelector('.cell-source')?.textContent).toBe(item.source_name);
      expect(row.querySelector('.cell-class .badge')?.textContent).toBe(item.class_label);
      expect(row.querySelector('.cell-fetched')?.textContent).toBe(item.fetched_at);
    });
  });

  it('shows the API total verbatim', () => {
    const host = parse(articleTableHtml(page));
    expect(host.querySelector('.total')?.textContent).toBe(`${page.total} article(s) match`);
  });

  it('derives topic badges only from stored scores', () => {
    const withScores = page.items[0];
    const badges = topicBadges(withScores);
    for (const topic of badges) {
      expect(withScores.topic_scores[topic]).toBeGreaterThanOrEqual(0.1);
    }
    const host = parse(articleRowHtml(withScores));
    const rendered = [...host.querySelectorAll('.badge-topic')].map((b) => b.textContent);
    expect(rendered).toEqual(badges);
  });

  it('marks translated articles', () => {
    const host = parse(articleRowHtml(article));
    expect(article.has_translation).toBe(true);
    expect(host.querySelector('.dot')).not.toBeNull();
  });
});

describe('review pane', () => {
  it('left pane is the English body, paragraph for paragraph', () => {
    const host = parse(reviewPaneHtml(article, jobDone));
    const english = host.querySelector('.pane-english');
    expect(english?.getAttribute('lang')).toBe('en');
    const paragraphs = [...(english?.querySelectorAll('p') ?? [])].map((p) => p.textContent);
    expect(paragraphs).toEqual(article.body.split('\n').filter((line) => line.length > 0));
    expect(english?.querySelector('h2')?.textContent).toBe(article.title);
  });

  it('right pane carries the Bangla output byte-identical with lang=bn', () => {
    const host = parse(reviewPaneHtml(article, jobDone));
    const bangla = host.querySelector('.pane-bangla');
    expect(bangla?.getAttribute('lang')).toBe('bn');
    const text = [...(bangla?.querySelectorAll(':scope > p') ?? [])]
      .map((p) => p.textContent)
      .join('\n');
    expect(text).toBe(jobDone.output_text.split('\n').filter((line) => line.length > 0).join('\n'));
  });

  it('is empty until a job exists', () => {
    const host = parse(reviewPaneHtml(article, null));
    const bangla = host.querySelector('.pane-bangla');
    expect(bangla?.classList.contains('pane-empty')).toBe(true);
    expect(bangla?.querySelectorAll('p').length).toBe(1);
  });

  it('failed jobs surface the server error text verbatim', () => {
    const host = parse(reviewPaneHtml(article, jobFailed));
    expect(host.querySelector('.job-error')?.textContent).toBe(jobFailed.error);
  });
});

describe('qa report', () => {
  it('renders verdicts straight from the payload', () => {
    const qa = jobDone.qa!;
    const host = parse(qaReportHtml(qa));
    expect(host.querySelector('.qa-report')?.getAttribute('data-passed')).toBe(String(qa.passed));
    const flags = [...host.querySelectorAll('.qa-flags li')];
    expect(flags[0].classList.contains(qa.numerals_preserved ? 'qa-pass' : 'qa-fail')).toBe(true);
    expect(flags[1].classList.contains(qa.script_ok ? 'qa-pass' : 'qa-fail')).toBe(true);
  });

  it('highlights each missing numeral from the payload list', () => {
    const qa = jobQaFailed.qa!;
    expect(qa.numerals_preserved).toBe(false);
    const host = parse(qaReportHtml(qa));
    const marks = [...host.querySelectorAll('mark.missing-numeral')].map((m) => m.textContent);
    expect(marks).toEqual(qa.missing_numerals);
    expect(host.querySelector('.qa-report')?.getAttribute('data-passed')).toBe('false');
  });

  it('entity misses are advisory, not failures', () => {
    const qa = jobDone.qa!;
    const host = parse(qaReportHtml(qa));
    const entityFlag = [...host.querySelectorAll('.qa-flags li')].at(-1);
    if (!qa.entities_preserved) {
      expect(entityFlag?.classList.contains('qa-warn')).toBe(true);
    }
    expect(host.querySelector('.qa-report')?.getAttribute('data-passed')).toBe(String(qa.passed));
  });
});

describe('escaping', () => {
  it('hostile titles render as text, never as markup', () => {
    const hostile: Article = {
      ...article,
      title: '<script>alert(1)</script> & "quotes"',
      body: 'plain body',
    };
    const host = parse(articleRowHtml(hostile));
    expect(host.querySelector('script')).toBeNull();
    expect(host.querySelector('.cell-title')?.textContent).toContain(hostile.title);
  });

  it('escapeHtml round-trips through the DOM', () => {
    const value = '5 < 6 & "7" > 2';
    const host = parse(`<span>${escapeHtml(value)}</span>`);
    expect(host.querySelector('span')?.textContent).toBe(value);
  });

  it('error banner shows code and message', () => {
    const host = parse(errorBannerHtml('UnknownBackend', 'no translation backend'));
    expect(host.querySelector('.banner-error')?.textContent).toContain('UnknownBackend');
    expect(host.querySelector('.banner-error')?.textContent).toContain('no translation backend');
  });
});
