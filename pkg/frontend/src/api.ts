/**
 * api.ts — typed client for the annotation service REST API.
 *
 * Every call resolves to parsed JSON on 2xx and throws an ApiError carrying
 * the server's {code, message} body otherwise, so callers can surface the
 * offending item (409/422 messages name it) in a banner.
 */

export interface BookSummary {
  volumeNumber: string;
  seriesName: string;
  title: string;
  confSeriesId: string | null;
  year: number | null;
  chapterCount: number;
}

export interface SessionSummary {
  sessionId: string;
  books: BookSummary[];
  chapterCount: number;
  topicCount: number;
}

export interface TaxonomyNode {
  topic: string;
  chapterCount: number;
  structural: boolean;
  children: TaxonomyNode[];
}

export interface TopicEntry {
  topic: string;
  chapterCount: number;
  marked: boolean;
}

export interface PmcEntry {
  code: string;
  label: string;
  level: number;
  chapterCount: number;
  marked: boolean;
}

export interface TaxonomyResponse {
  minChapters: number;
  taxonomy: TaxonomyNode[];
  topics: TopicEntry[];
  pmcs: PmcEntry[];
  previous: { confSeriesId: string; year: number | null; receipt: number | null } | null;
}

export interface Excerpt {
  text: string;
  chapterCount: number;
  occurrenceCount: number;
}

export interface TopicDetail {
  topic: string;
  label: string;
  aliases: string[];
  superTopics: string[];
  subTopics: string[];
  chapterCount: number;
}

export interface Highlight {
  start: number;
  end: number;
  topics: string[];
}

export interface ChapterView {
  chapterId: string;
  volumeNumber: string;
  title: string;
  abstract: string;
  keywords: string[];
  topics: string[];
  highlights: Highlight[];
}

export interface AnnotationRecordWire {
  confSeriesId?: string;
  year?: number;
  volumes?: string[];
  selectedTopics: string[];
  renames?: Record<string, string>;
  addedTopics?: { topic: string; parent: string | null }[];
  removedTopics?: string[];
  selectedPmcs?: string[];
  submittedAt?: string;
  receipt?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "http-error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(private base: string) {
    this.base = base.replace(/\/+$/, "");
  }

  async health(): Promise<{ status: string; classificationRuns: number }> {
    return unwrap(await fetch(`${this.base}/health`));
  }

  async createSession(archive: BufferSource): Promise<SessionSummary> {
    return unwrap(
      await fetch(`${this.base}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/zip" },
        body: archive,
      }),
    );
  }

  async taxonomy(sessionId: string, minChapters: number): Promise<TaxonomyResponse> {
    const url = `${this.base}/sessions/${sessionId}/taxonomy?minChapters=${minChapters}`;
    return unwrap(await fetch(url));
  }

  async explanation(sessionId: string, topic: string): Promise<{ topic: string; excerpts: Excerpt[] }> {
    const url = `${this.base}/sessions/${sessionId}/topics/${encodeURIComponent(topic)}/explanation`;
    return unwrap(await fetch(url));
  }

  async topicDetail(sessionId: string, topic: string): Promise<TopicDetail> {
    const url = `${this.base}/sessions/${sessionId}/topics/${encodeURIComponent(topic)}`;
    return unwrap(await fetch(url));
  }

  async chapters(sessionId: string): Promise<{ chapters: ChapterView[] }> {
    return unwrap(await fetch(`${this.base}/sessions/${sessionId}/chapters`));
  }

  async submit(
    sessionId: string,
    record: AnnotationRecordWire,
  ): Promise<{ receipt: number; record: AnnotationRecordWire }> {
    return unwrap(
      await fetch(`${this.base}/sessions/${sessionId}/submit`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(record),
      }),
    );
  }

  async history(confSeriesId: string): Promise<{ confSeriesId: string; records: AnnotationRecordWire[] }> {
    const url = `${this.base}/series/${encodeURIComponent(confSeriesId)}/history`;
    return unwrap(await fetch(url));
  }
}
