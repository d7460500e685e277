/**
 * state.ts — editor state and the client-side taxonomy refilter.
 *
 * The unfiltered taxonomy (minChapters=1) is fetched once per session; the
 * slider refilters it locally with the same semantics as the server (keep
 * nodes meeting the threshold, keep ancestors of kept nodes as structural),
 * so moving the slider costs no network round-trip. Forests larger than
 * CLIENT_FILTER_LIMIT nodes fall back to server-side filtering.
 */

import type { PmcEntry, TaxonomyNode, TaxonomyResponse, TopicEntry } from "./api.js";

export const CLIENT_FILTER_LIMIT = 5000;

export interface AddedTopic {
  topic: string;
  parent: string | null;
}

export class EditorState {
  sessionId = "";
  confSeriesId: string | null = null;
  minChapters = 1;
  /** Unfiltered forest as returned for minChapters=1. */
  forest: TaxonomyNode[] = [];
  topics: TopicEntry[] = [];
  pmcs: PmcEntry[] = [];
  previousYear: number | null = null;

  selectedTopics = new Set<string>();
  selectedPmcs = new Set<string>();
  renames = new Map<string, string>();
  addedTopics: AddedTopic[] = [];
  removedTopics = new Set<string>();

  loadTaxonomy(data: TaxonomyResponse): void {
    this.forest = data.taxonomy;
    this.topics = data.topics;
    this.pmcs = data.pmcs;
    this.previousYear = data.previous ? data.previous.year : null;
  }

  get markedTopics(): Set<string> {
    return new Set(this.topics.filter((t) => t.marked).map((t) => t.topic));
  }

  get markedPmcs(): Set<string> {
    return new Set(this.pmcs.filter((p) => p.marked).map((p) => p.code));
  }

  /** Select exactly the topics and PMCs marked from the previous edition. */
  selectFromLastYear(): void {
    this.selectedTopics = this.markedTopics;
    this.selectedPmcs = this.markedPmcs;
    for (const removed of this.removedTopics) {
      this.selectedTopics.delete(removed);
    }
  }

  toggleTopic(topic: string): void {
    if (this.selectedTopics.has(topic)) {
      this.selectedTopics.delete(topic);
    } else {
      this.selectedTopics.add(topic);
    }
  }

  togglePmc(code: string): void {
    if (this.selectedPmcs.has(code)) {
      this.selectedPmcs.delete(code);
    } else {
      this.selectedPmcs.add(code);
    }
  }

  rename(topic: string, label: string): void {
    const trimmed = label.trim();
    if (trimmed && trimmed !== topic) {
      this.renames.set(topic, trimmed);
      this.selectedTopics.add(topic); // a rename only ships with a selected topic
    } else {
      this.renames.delete(topic);
    }
  }

  remove(topic: string): void {
    const added = this.addedTopics.findIndex((a) => a.topic === topic);
    if (added >= 0) {
      // Removing a topic we added ourselves just withdraws the addition.
      this.addedTopics.splice(added, 1);
      this.selectedTopics.delete(topic);
      return;
    }
    this.removedTopics.add(topic);
    this.selectedTopics.delete(topic);
    this.renames.delete(topic);
  }

  addTopic(topic: string, parent: string | null): void {
    const name = topic.trim();
    if (!name || this.addedTopics.some((a) => a.topic === name)) return;
    this.addedTopics.push({ topic: name, parent });
    this.selectedTopics.add(name); // a manually added topic is a selection
  }

  /** The annotation record for submission — exactly the visible edits. */
  toRecord(): {
    selectedTopics: string[];
    selectedPmcs: string[];
    renames: Record<string, string>;
    addedTopics: AddedTopic[];
    removedTopics: string[];
  } {
    return {
      selectedTopics: [...this.selectedTopics].sort(),
      selectedPmcs: [...this.selectedPmcs].sort(),
      renames: Object.fromEntries(this.renames),
      addedTopics: [...this.addedTopics],
      removedTopics: [...this.removedTopics].sort(),
    };
  }
}

export function countNodes(forest: TaxonomyNode[]): number {
  let total = 0;
  for (const node of forest) {
    total += 1 + countNodes(node.children);
  }
  return total;
}

/**
 * Refilter a forest: a node stays when its count meets the threshold, or
 * (flagged structural) when any descendant stays. Mirrors the server rule.
 */
export function filterForest(forest: TaxonomyNode[], minChapters: number): TaxonomyNode[] {
  const kept: TaxonomyNode[] = [];
  for (const node of forest) {
    const children = filterForest(node.children, minChapters);
    if (node.chapterCount >= minChapters) {
      kept.push({ ...node, structural: false, children });
    } else if (children.length > 0) {
      kept.push({ ...node, structural: true, children });
    }
  }
  return kept;
}

/** Drop removed topics from the rendered forest (their children move up). */
export function pruneRemoved(forest: TaxonomyNode[], removed: Set<string>): TaxonomyNode[] {
  const kept: TaxonomyNode[] = [];
  for (const node of forest) {
    const children = pruneRemoved(node.children, removed);
    if (removed.has(node.topic)) {
      kept.push(...children);
    } else {
      kept.push({ ...node, children });
    }
  }
  return kept;
}
