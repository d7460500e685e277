/**
 * app.ts — wires the editor together: archive upload, the chapter-threshold
 * slider, the taxonomy tree with its edit actions, market codes, chapter
 * previews, and submission. Exported separately from main.ts so tests can
 * mount the app into any container and point it at any service URL.
 */

import { ApiClient, ApiError } from "./api.js";
import type { Excerpt, TaxonomyNode, TopicDetail } from "./api.js";
import { renderChapters } from "./chapters.js";
import { CLIENT_FILTER_LIMIT, countNodes, EditorState, filterForest, pruneRemoved } from "./state.js";
import { promptDialog, renderTree } from "./tree.js";
import type { RenderedNode, TreeActions } from "./tree.js";

export interface AppOptions {
  apiBase: string;
}

const SKELETON = `
  <div id="banner" hidden>
    <span id="banner-text"></span>
    <button type="button" id="banner-close">dismiss</button>
  </div>
  <header>
    <h1>Proceedings topic annotation</h1>
    <form id="upload-form">
      <input type="file" id="archive-input" accept=".zip,.xml" />
      <button type="submit" id="upload-button">Start session</button>
    </form>
    <p id="session-info"></p>
  </header>
  <main>
    <section id="taxonomy-panel">
      <div id="controls">
        <label for="min-chapters">
          minimum chapters: <output id="min-chapters-value">1</output>
        </label>
        <input type="range" id="min-chapters" min="1" max="1" value="1" />
        <button type="button" id="select-last-year" disabled>Select from last year</button>
        <span id="previous-info"></span>
        <button type="button" id="add-root">Add topic…</button>
      </div>
      <div id="tree"></div>
      <h2>Publisher market codes</h2>
      <ul id="pmcs"></ul>
      <h2>Pending edits</h2>
      <div id="edits">no pending edits</div>
      <button type="button" id="submit" disabled>Submit annotation</button>
      <p id="receipt"></p>
    </section>
    <section id="chapter-panel">
      <h2>Chapters</h2>
      <div id="chapters"></div>
    </section>
    <aside id="detail-panel"></aside>
  </main>
`;

/** Blob.arrayBuffer with a FileReader fallback for runtimes that lack it. */
async function readFileBytes(file: File): Promise<ArrayBuffer> {
  if (typeof file.arrayBuffer === "function") {
    return file.arrayBuffer();
  }
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(reader.result as ArrayBuffer);
    reader.onerror = () => reject(reader.error ?? new Error("could not read file"));
    reader.readAsArrayBuffer(file);
  });
}

function findNode(forest: RenderedNode[], topic: string): RenderedNode | null {
  for (const node of forest) {
    if (node.topic === topic) return node;
    const hit = findNode(node.children, topic);
    if (hit) return hit;
  }
  return null;
}

export function initApp(root: HTMLElement, options: AppOptions): void {
  const api = new ApiClient(options.apiBase);
  const state = new EditorState();
  const collapsed = new Set<string>();
  root.innerHTML = SKELETON;

  const find = <T extends HTMLElement>(selector: string): T => {
    const element = root.querySelector(selector);
    if (!element) throw new Error(`missing element: ${selector}`);
    return element as T;
  };

  const banner = find<HTMLElement>("#banner");
  const bannerText = find<HTMLElement>("#banner-text");
  const uploadForm = find<HTMLFormElement>("#upload-form");
  const archiveInput = find<HTMLInputElement>("#archive-input");
  const sessionInfo = find<HTMLElement>("#session-info");
  const slider = find<HTMLInputElement>("#min-chapters");
  const sliderValue = find<HTMLElement>("#min-chapters-value");
  const selectLastYear = find<HTMLButtonElement>("#select-last-year");
  const previousInfo = find<HTMLElement>("#previous-info");
  const addRoot = find<HTMLButtonElement>("#add-root");
  const treeEl = find<HTMLElement>("#tree");
  const pmcsEl = find<HTMLElement>("#pmcs");
  const editsEl = find<HTMLElement>("#edits");
  const submitButton = find<HTMLButtonElement>("#submit");
  const receiptEl = find<HTMLElement>("#receipt");
  const chaptersEl = find<HTMLElement>("#chapters");
  const detailEl = find<HTMLElement>("#detail-panel");

  const hideBanner = () => {
    banner.hidden = true;
  };

  const showError = (error: unknown) => {
    bannerText.textContent =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    banner.hidden = false;
  };

  find<HTMLButtonElement>("#banner-close").addEventListener("click", hideBanner);

  async function withBanner(run: () => Promise<void>): Promise<void> {
    hideBanner();
    try {
      await run();
    } catch (error) {
      showError(error);
    }
  }

  async function refreshTree(): Promise<void> {
    let forest: TaxonomyNode[];
    if (countNodes(state.forest) <= CLIENT_FILTER_LIMIT) {
      forest = filterForest(state.forest, state.minChapters);
    } else {
      forest = (await api.taxonomy(state.sessionId, state.minChapters)).taxonomy;
    }
    const visible = pruneRemoved(forest, state.removedTopics) as RenderedNode[];
    for (const added of state.addedTopics) {
      const node: RenderedNode = {
        topic: added.topic,
        chapterCount: 0,
        structural: false,
        added: true,
        children: [],
      };
      const parent = added.parent ? findNode(visible, added.parent) : null;
      if (parent) {
        parent.children.push(node);
      } else {
        visible.push(node); // parent filtered out (or a new root): show at top level
      }
    }
    const view = {
      selected: state.selectedTopics,
      marked: state.markedTopics,
      renames: state.renames,
      collapsed,
    };
    renderTree(treeEl, visible, view, actions);
  }

  function renderPmcs(): void {
    pmcsEl.textContent = "";
    const marked = state.markedPmcs;
    for (const pmc of state.pmcs) {
      const li = document.createElement("li");
      li.dataset.code = pmc.code;
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.className = "select-pmc";
      box.checked = state.selectedPmcs.has(pmc.code);
      box.addEventListener("change", () => {
        state.togglePmc(pmc.code);
        refreshEdits();
      });
      label.appendChild(box);
      const text = document.createElement("span");
      text.textContent = ` ${pmc.code} — ${pmc.label} (level ${pmc.level}, ${pmc.chapterCount} ch.)`;
      label.appendChild(text);
      li.appendChild(label);
      if (marked.has(pmc.code)) {
        const star = document.createElement("span");
        star.className = "marked";
        star.title = "used by the previous edition";
        star.textContent = "★";
        li.appendChild(star);
      }
      pmcsEl.appendChild(li);
    }
  }

  function refreshEdits(): void {
    editsEl.textContent = "";
    const chips: [string, string][] = [];
    for (const [from, to] of state.renames) {
      chips.push(["edit-rename", `${from} → ${to}`]);
    }
    for (const added of state.addedTopics) {
      chips.push([
        "edit-added",
        added.parent ? `+ ${added.topic} (under ${added.parent})` : `+ ${added.topic}`,
      ]);
    }
    for (const topic of state.removedTopics) {
      chips.push(["edit-removed", `− ${topic}`]);
    }
    if (chips.length === 0) {
      editsEl.textContent = "no pending edits";
      return;
    }
    for (const [kind, text] of chips) {
      const chip = document.createElement("span");
      chip.className = `chip ${kind}`;
      chip.textContent = text;
      editsEl.appendChild(chip);
    }
  }

  function showExplanation(topic: string, excerpts: Excerpt[]): void {
    detailEl.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = `Why “${state.renames.get(topic) ?? topic}”?`;
    detailEl.appendChild(heading);
    if (excerpts.length === 0) {
      const none = document.createElement("p");
      none.textContent = "No matched passages for this topic.";
      detailEl.appendChild(none);
      return;
    }
    const list = document.createElement("ol");
    list.className = "excerpts";
    for (const excerpt of excerpts) {
      const item = document.createElement("li");
      const quote = document.createElement("blockquote");
      quote.textContent = excerpt.text;
      item.appendChild(quote);
      const meta = document.createElement("small");
      meta.textContent = `${excerpt.chapterCount} chapters · ${excerpt.occurrenceCount} occurrences`;
      item.appendChild(meta);
      list.appendChild(item);
    }
    detailEl.appendChild(list);
  }

  function showDetail(detail: TopicDetail): void {
    detailEl.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = detail.label;
    detailEl.appendChild(heading);
    const rows: [string, string][] = [
      ["Canonical id", detail.topic],
      ["Aliases", detail.aliases.join(", ") || "—"],
      ["Broader topics", detail.superTopics.join(", ") || "—"],
      ["Narrower topics", detail.subTopics.join(", ") || "—"],
      ["Chapters", String(detail.chapterCount)],
    ];
    const dl = document.createElement("dl");
    for (const [term, value] of rows) {
      const dt = document.createElement("dt");
      dt.textContent = term;
      const dd = document.createElement("dd");
      dd.textContent = value;
      dl.appendChild(dt);
      dl.appendChild(dd);
    }
    detailEl.appendChild(dl);
  }

  const actions: TreeActions = {
    onToggleSelect(topic) {
      state.toggleTopic(topic);
      refreshEdits();
    },
    onExplain(topic) {
      void withBanner(async () => {
        const data = await api.explanation(state.sessionId, topic);
        showExplanation(topic, data.excerpts);
      });
    },
    onDetail(topic) {
      void withBanner(async () => showDetail(await api.topicDetail(state.sessionId, topic)));
    },
    onRename(topic) {
      void promptDialog(`Rename “${topic}”`, state.renames.get(topic) ?? topic).then((value) => {
        if (value === null) return;
        state.rename(topic, value);
        refreshEdits();
        return withBanner(refreshTree);
      });
    },
    onRemove(topic) {
      state.remove(topic);
      refreshEdits();
      void withBanner(refreshTree);
    },
    onAddChild(parent) {
      const title = parent ? `Add a subtopic of “${parent}”` : "Add a topic";
      void promptDialog(title).then((value) => {
        if (value === null) return;
        state.addTopic(value, parent);
        refreshEdits();
        return withBanner(refreshTree);
      });
    },
  };

  uploadForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void withBanner(async () => {
      const file = archiveInput.files?.[0];
      if (!file) {
        throw new Error("choose a proceedings archive first");
      }
      const summary = await api.createSession(await readFileBytes(file));
      state.sessionId = summary.sessionId;
      state.confSeriesId = summary.books.find((b) => b.confSeriesId)?.confSeriesId ?? null;
      state.minChapters = 1;
      const taxonomy = await api.taxonomy(summary.sessionId, 1);
      state.loadTaxonomy(taxonomy);

      const volumes = summary.books.map((b) => `vol. ${b.volumeNumber}`).join(", ");
      sessionInfo.textContent =
        `${volumes} — ${summary.chapterCount} chapters, ${summary.topicCount} topics`;
      const maxCount = Math.max(1, ...taxonomy.topics.map((t) => t.chapterCount));
      slider.min = "1";
      slider.max = String(maxCount);
      slider.value = "1";
      sliderValue.textContent = "1";
      selectLastYear.disabled = taxonomy.previous === null;
      previousInfo.textContent = taxonomy.previous
        ? `previous edition: ${taxonomy.previous.year ?? "unknown year"}`
        : "no previous edition on file";
      submitButton.disabled = false;
      receiptEl.textContent = "";

      const chapters = await api.chapters(summary.sessionId);
      renderChapters(chaptersEl, chapters.chapters);
      renderPmcs();
      refreshEdits();
      await refreshTree();
    });
  });

  slider.addEventListener("input", () => {
    if (!state.sessionId) return;
    state.minChapters = Math.max(1, Number(slider.value) || 1);
    sliderValue.textContent = slider.value;
    void withBanner(refreshTree);
  });

  selectLastYear.addEventListener("click", () => {
    state.selectFromLastYear();
    renderPmcs();
    refreshEdits();
    void withBanner(refreshTree);
  });

  addRoot.addEventListener("click", () => actions.onAddChild(null));

  submitButton.addEventListener("click", () => {
    void withBanner(async () => {
      const result = await api.submit(state.sessionId, state.toRecord());
      receiptEl.textContent = `submitted — receipt #${result.receipt}`;
    });
  });

  document.addEventListener("click", (event) => {
    const menu = document.getElementById("context-menu");
    if (menu && !(event.target instanceof Node && menu.contains(event.target))) {
      menu.remove();
    }
  });
}
