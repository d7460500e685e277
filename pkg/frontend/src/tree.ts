/**
 * tree.ts — taxonomy tree rendering, the node context menu, and the modal
 * input dialog. Everything is plain DOM so the same code runs in the
 * browser and under jsdom; no window.prompt/confirm.
 */

import type { TaxonomyNode } from "./api.js";

export interface RenderedNode extends TaxonomyNode {
  added?: boolean;
  children: RenderedNode[];
}

export interface TreeActions {
  onToggleSelect(topic: string): void;
  onExplain(topic: string): void;
  onDetail(topic: string): void;
  onRename(topic: string): void;
  onRemove(topic: string): void;
  onAddChild(parent: string | null): void;
}

export interface TreeView {
  selected: Set<string>;
  marked: Set<string>;
  renames: Map<string, string>;
  collapsed: Set<string>;
}

function nodeElement(node: RenderedNode, view: TreeView, actions: TreeActions): HTMLElement {
  const li = document.createElement("li");
  li.className = "node";
  li.dataset.topic = node.topic;
  if (node.structural) li.classList.add("structural");
  if (node.added) li.classList.add("added");

  const row = document.createElement("div");
  row.className = "node-row";

  if (node.children.length > 0) {
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "expander";
    toggle.textContent = view.collapsed.has(node.topic) ? "▸" : "▾";
    toggle.addEventListener("click", () => {
      if (view.collapsed.has(node.topic)) {
        view.collapsed.delete(node.topic);
      } else {
        view.collapsed.add(node.topic);
      }
      toggle.textContent = view.collapsed.has(node.topic) ? "▸" : "▾";
      const sub = li.querySelector(":scope > ul");
      if (sub instanceof HTMLElement) {
        sub.hidden = view.collapsed.has(node.topic);
      }
    });
    row.appendChild(toggle);
  } else {
    const spacer = document.createElement("span");
    spacer.className = "expander spacer";
    row.appendChild(spacer);
  }

  const checkbox = document.createElement("input");
  checkbox.type = "checkbox";
  checkbox.className = "select-topic";
  checkbox.checked = view.selected.has(node.topic);
  checkbox.addEventListener("change", () => actions.onToggleSelect(node.topic));
  row.appendChild(checkbox);

  const label = document.createElement("span");
  label.className = "topic-label";
  const rename = view.renames.get(node.topic);
  label.textContent = rename ?? node.topic;
  if (rename) {
    label.classList.add("renamed");
    label.title = `renamed from "${node.topic}"`;
  }
  label.addEventListener("contextmenu", (event) => {
    event.preventDefault();
    openContextMenu(event, node, actions);
  });
  row.appendChild(label);

  const count = document.createElement("span");
  count.className = "count";
  count.textContent = node.added ? "new" : String(node.chapterCount);
  row.appendChild(count);

  if (view.marked.has(node.topic)) {
    const star = document.createElement("span");
    star.className = "marked";
    star.title = "used by the previous edition";
    star.textContent = "★";
    row.appendChild(star);
  }

  li.appendChild(row);

  if (node.children.length > 0) {
    const sub = document.createElement("ul");
    sub.hidden = view.collapsed.has(node.topic);
    for (const child of node.children) {
      sub.appendChild(nodeElement(child, view, actions));
    }
    li.appendChild(sub);
  }
  return li;
}

export function renderTree(
  container: HTMLElement,
  forest: RenderedNode[],
  view: TreeView,
  actions: TreeActions,
): void {
  container.textContent = "";
  const root = document.createElement("ul");
  root.className = "tree";
  for (const node of forest) {
    root.appendChild(nodeElement(node, view, actions));
  }
  container.appendChild(root);
}

const MENU_ITEMS: { action: keyof TreeActions; label: string }[] = [
  { action: "onExplain", label: "Show explanation" },
  { action: "onDetail", label: "Topic details" },
  { action: "onRename", label: "Rename…" },
  { action: "onRemove", label: "Remove" },
  { action: "onAddChild", label: "Add subtopic…" },
];

export function closeContextMenu(): void {
  document.getElementById("context-menu")?.remove();
}

function openContextMenu(event: MouseEvent, node: RenderedNode, actions: TreeActions): void {
  closeContextMenu();
  const menu = document.createElement("div");
  menu.id = "context-menu";
  menu.style.left = `${event.clientX}px`;
  menu.style.top = `${event.clientY}px`;
  for (const item of MENU_ITEMS) {
    const button = document.createElement("button");
    button.type = "button";
    button.dataset.action = item.action;
    button.textContent = item.label;
    button.addEventListener("click", () => {
      closeContextMenu();
      if (item.action === "onAddChild") {
        actions.onAddChild(node.topic);
      } else {
        actions[item.action](node.topic);
      }
    });
    menu.appendChild(button);
  }
  document.body.appendChild(menu);
}

/**
 * Modal text-input dialog; resolves with the entered value, or null when
 * cancelled. Only one dialog exists at a time (#dialog).
 */
export function promptDialog(title: string, initial = ""): Promise<string | null> {
  document.getElementById("dialog")?.remove();
  return new Promise((resolve) => {
    const overlay = document.createElement("div");
    overlay.id = "dialog";
    const box = document.createElement("div");
    box.className = "dialog-box";

    const heading = document.createElement("p");
    heading.textContent = title;
    box.appendChild(heading);

    const input = document.createElement("input");
    input.type = "text";
    input.id = "dialog-input";
    input.value = initial;
    box.appendChild(input);

    const done = (value: string | null) => {
      overlay.remove();
      resolve(value);
    };

    const ok = document.createElement("button");
    ok.type = "button";
    ok.id = "dialog-ok";
    ok.textContent = "OK";
    ok.addEventListener("click", () => done(input.value));
    box.appendChild(ok);

    const cancel = document.createElement("button");
    cancel.type = "button";
    cancel.id = "dialog-cancel";
    cancel.textContent = "Cancel";
    cancel.addEventListener("click", () => done(null));
    box.appendChild(cancel);

    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") done(input.value);
      if (event.key === "Escape") done(null);
    });

    overlay.appendChild(box);
    document.body.appendChild(overlay);
    input.focus();
  });
}
