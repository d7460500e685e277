/**
 * chapters.ts — chapter cards with highlighted abstract passages.
 *
 * Highlight spans arrive from the server as half-open [start, end) offsets
 * into the abstract, already merged and sorted, so rendering is a single
 * left-to-right walk.
 */

import type { ChapterView } from "./api.js";

function highlightedAbstract(chapter: ChapterView): HTMLElement {
  const p = document.createElement("p");
  p.className = "abstract";
  const text = chapter.abstract;
  let cursor = 0;
  for (const span of chapter.highlights) {
    if (span.start > cursor) {
      p.appendChild(document.createTextNode(text.slice(cursor, span.start)));
    }
    const mark = document.createElement("mark");
    mark.textContent = text.slice(span.start, span.end);
    mark.title = span.topics.join(", ");
    p.appendChild(mark);
    cursor = span.end;
  }
  if (cursor < text.length) {
    p.appendChild(document.createTextNode(text.slice(cursor)));
  }
  return p;
}

function chapterCard(chapter: ChapterView): HTMLElement {
  const card = document.createElement("article");
  card.className = "chapter";
  card.dataset.chapterId = chapter.chapterId;

  const heading = document.createElement("h3");
  heading.textContent = chapter.title;
  const volume = document.createElement("span");
  volume.className = "volume";
  volume.textContent = `vol. ${chapter.volumeNumber}`;
  heading.appendChild(volume);
  card.appendChild(heading);

  card.appendChild(highlightedAbstract(chapter));

  if (chapter.keywords.length > 0) {
    const keywords = document.createElement("p");
    keywords.className = "keywords";
    keywords.textContent = `Keywords: ${chapter.keywords.join("; ")}`;
    card.appendChild(keywords);
  }

  const topics = document.createElement("div");
  topics.className = "chapter-topics";
  for (const topic of chapter.topics) {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.textContent = topic;
    topics.appendChild(chip);
  }
  card.appendChild(topics);
  return card;
}

export function renderChapters(container: HTMLElement, chapters: ChapterView[]): void {
  container.textContent = "";
  for (const chapter of chapters) {
    container.appendChild(chapterCard(chapter));
  }
}
