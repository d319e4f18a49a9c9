/**
 * DOM rendering. Everything on screen is derived from the last service
 * snapshot plus the local view state; no annotation content is cached
 * client-side, so a refetch plus re-render always reproduces the view.
 */

import { PALETTE, colorIndex } from "./colors.js";
import {
  ViewState, eventAt, highlightGroups, pendingValid, selectionRefs,
  tokenKey,
} from "./state.js";
import type { DocumentSnapshot } from "./types.js";

export interface Handlers {
  onSelectEvent(eventId: string): void;
  onEntityClick(ref: string): void;
  onBeginShadow(event: string, etype: "TOOL" | "HABITAT" | "INGREDIENT"):
      void;
  onSubmitShadow(label: string, relation: string): void;
  onCancelPending(): void;
  onMergeChains(a: string, b: string): void;
  onPreviewMode(mode: "hrp" | "mrp"): void;
}

function el(tag: string, className?: string,
            text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderDocument(snap: DocumentSnapshot, state: ViewState,
                               handlers: Handlers): HTMLElement {
  const root = el("div", "document-pane");
  const highlights = highlightGroups(snap, state);
  const emphasized = selectionRefs(snap, state.selected);

  for (const sentence of snap.sentences) {
    const p = el("p", "sentence");
    p.dataset.sentence = String(sentence.index);
    for (const token of sentence.tokens) {
      const span = el("span", "token", token.surface);
      span.dataset.token = `${sentence.index}:${token.index}`;
      const event = eventAt(snap, sentence.index, token.index);
      if (event) {
        span.classList.add("event-head");
        span.dataset.event = event.event_id;
        if (emphasized.has(event.event_id)) {
          span.classList.add("selected");
        }
        span.addEventListener("click", () =>
          handlers.onSelectEvent(event.event_id));
      }
      const hl = highlights.get(tokenKey(sentence.index, token.index));
      if (hl) {
        span.classList.add("entity");
        span.style.backgroundColor = PALETTE[hl.color] + "33";
        span.style.borderBottom = `2px solid ${PALETTE[hl.color]}`;
        span.dataset.chain = hl.chainId;
        if (hl.selected) span.classList.add("selected");
        const ref = refAtToken(snap, hl.chainId, sentence.index,
                               token.index);
        if (ref) {
          span.addEventListener("click", (e) => {
            e.stopPropagation();
            handlers.onEntityClick(ref);
          });
        }
      }
      p.appendChild(span);
      p.appendChild(document.createTextNode(" "));
    }
    root.appendChild(p);
  }
  return root;
}

function refAtToken(snap: DocumentSnapshot, chainId: string,
                    sentence: number, token: number): string | null {
  const chain = snap.chains.find((c) => c.chain_id === chainId);
  if (!chain) return null;
  for (const mention of chain.mentions) {
    const m = /^m_(\d+)_(\d+)$/.exec(mention.ref);
    if (m && Number(m[1]) === sentence && Number(m[2]) <= token) {
      // spans are short; the nearest starting mention wins
      return mention.ref;
    }
  }
  return null;
}

export function renderEventPanel(snap: DocumentSnapshot, state: ViewState,
                                 handlers: Handlers): HTMLElement {
  const root = el("div", "event-panel");
  const event = snap.events.find((e) => e.event_id === state.selected);
  if (!event) {
    root.appendChild(el("p", "hint",
                        "Select an event head to inspect and annotate."));
    return root;
  }
  root.appendChild(el("h3", undefined,
                      `${event.head} — ${event.frame} (${event.category})`));
  const list = el("ul", "participants");
  for (const p of event.participants) {
    const item = el("li", `participant ${p.explicitness}`,
                    `${p.relation} ${p.etype} ${p.label || p.ref}` +
                    (p.role ? ` (${p.role})` : ""));
    item.dataset.ref = p.ref;
    list.appendChild(item);
  }
  for (const m of event.modifiers) {
    list.appendChild(el("li", "modifier", `modifier ${m.role} ${m.text}`));
  }
  root.appendChild(list);

  const controls = el("div", "shadow-controls");
  for (const etype of ["TOOL", "HABITAT", "INGREDIENT"] as const) {
    const button = el("button", "add-shadow",
                      `+ shadow ${etype.toLowerCase()}`);
    button.dataset.etype = etype;
    button.addEventListener("click", () =>
      handlers.onBeginShadow(event.event_id, etype));
    controls.appendChild(button);
  }
  root.appendChild(controls);

  if (state.pending?.kind === "shadow" &&
      state.pending.event === event.event_id) {
    root.appendChild(renderShadowForm(snap, state, handlers));
  }
  if (state.pending?.kind === "link") {
    root.appendChild(el("p", "hint pending-link",
                        `linking ${state.pending.source} — click an ` +
                        "event head to attach, Esc to cancel"));
  }
  return root;
}

function renderShadowForm(snap: DocumentSnapshot, state: ViewState,
                          handlers: Handlers): HTMLElement {
  const pending = state.pending;
  if (pending?.kind !== "shadow") return el("div");
  const form = el("div", "shadow-form");
  const input = el("input") as HTMLInputElement;
  input.placeholder = `free-text ${pending.etype.toLowerCase()} label`;
  input.value = pending.label;
  input.className = "shadow-label";
  const relation = el("select") as HTMLSelectElement;
  for (const rel of ["participant-of", "result-of"]) {
    const option = el("option", undefined, rel) as HTMLOptionElement;
    option.value = rel;
    relation.appendChild(option);
  }
  const submit = el("button", "submit-shadow", "add") as HTMLButtonElement;
  submit.disabled = !pendingValid(
    { ...state, pending: { ...pending, label: input.value } }, snap);
  input.addEventListener("input", () => {
    submit.disabled = input.value.trim() === "";
  });
  submit.addEventListener("click", () =>
    handlers.onSubmitShadow(input.value, relation.value));
  const cancel = el("button", "cancel", "cancel");
  cancel.addEventListener("click", () => handlers.onCancelPending());
  form.append(input, relation, submit, cancel);
  return form;
}

export function renderChains(snap: DocumentSnapshot, state: ViewState,
                             handlers: Handlers): HTMLElement {
  const root = el("div", "chain-panel");
  root.appendChild(el("h3", undefined, "chains"));
  const selectedChain = snap.chains.find(
    (c) => c.mentions.some((m) => m.ref === state.selected));
  for (const chain of snap.chains) {
    const row = el("div", "chain-row");
    row.dataset.chain = chain.chain_id;
    const swatch = el("span", "swatch", " ");
    swatch.style.backgroundColor = PALETTE[colorIndex(chain.chain_id)];
    const timeline = chain.timeline.map((t) => t.text).join(" → ");
    row.append(swatch,
               el("span", "chain-id", `${chain.chain_id} [${chain.etype}] `),
               el("span", "timeline", timeline));
    if (selectedChain && selectedChain.chain_id !== chain.chain_id &&
        selectedChain.etype === chain.etype) {
      const merge = el("button", "merge", "merge into selection");
      merge.addEventListener("click", () =>
        handlers.onMergeChains(selectedChain.chain_id, chain.chain_id));
      row.appendChild(merge);
    }
    root.appendChild(row);
  }
  return root;
}

export function renderPreview(text: string, mode: "hrp" | "mrp",
                              handlers: Handlers): HTMLElement {
  const root = el("div", "preview-pane");
  const bar = el("div", "preview-bar");
  for (const m of ["hrp", "mrp"] as const) {
    const button = el("button", m === mode ? "mode active" : "mode", m);
    button.addEventListener("click", () => handlers.onPreviewMode(m));
    bar.appendChild(button);
  }
  const body = el("pre", "preview-text", text);
  root.append(bar, body);
  return root;
}

export function renderStatus(message: string,
                             kind: "info" | "error"): HTMLElement {
  return el("div", `status ${kind}`, message);
}
