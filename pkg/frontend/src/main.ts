/** Application wiring: service polling, gestures, keyboard shortcuts. */

import { ApiClient } from "./api.js";
import {
  addShadowGesture, linkGesture, mergeChainsGesture,
} from "./gestures.js";
import {
  renderChains, renderDocument, renderEventPanel, renderPreview,
  renderStatus,
} from "./render.js";
import {
  ViewState, beginLink, beginShadow, clearPending, initialState, select,
  withSnapshot,
} from "./state.js";
import type { DocumentSnapshot } from "./types.js";

const api = new ApiClient("");
let state: ViewState = initialState();
let snapshot: DocumentSnapshot | null = null;
let previewMode: "hrp" | "mrp" = "hrp";
let status = "";
let statusKind: "info" | "error" = "info";

const app = document.getElementById("app") ?? document.body;

async function refresh(docId: string): Promise<void> {
  snapshot = await api.getDoc(docId);
  state = withSnapshot(state, snapshot);
  await render();
}

function setStatus(message: string, kind: "info" | "error" = "info"): void {
  status = message;
  statusKind = kind;
}

const handlers = {
  onSelectEvent(eventId: string) {
    if (state.pending?.kind === "link" && snapshot) {
      const source = state.pending.source;
      state = clearPending(state);
      void linkGesture(api, snapshot, source, eventId).then((outcome) => {
        snapshot = outcome.snapshot;
        state = withSnapshot(state, outcome.snapshot);
        setStatus(outcome.ok ? `linked ${source} to ${eventId}`
                             : outcome.error ?? "rejected",
                  outcome.ok ? "info" : "error");
        void render();
      });
      return;
    }
    state = select(state, eventId);
    void render();
  },
  onEntityClick(ref: string) {
    state = beginLink(select(state, ref), ref);
    setStatus(`linking ${ref}: click an event head`);
    void render();
  },
  onBeginShadow(event: string, etype: "TOOL" | "HABITAT" | "INGREDIENT") {
    state = beginShadow(select(state, event), event, etype);
    void render();
  },
  onSubmitShadow(label: string, relation: string) {
    if (snapshot === null || state.pending?.kind !== "shadow") return;
    const pending = state.pending;
    state = clearPending(state);
    void addShadowGesture(api, snapshot, label, pending.etype,
                          pending.event,
                          relation as "participant-of" | "result-of")
      .then((outcome) => {
        snapshot = outcome.snapshot;
        state = withSnapshot(state, outcome.snapshot);
        setStatus(outcome.ok ? `added shadow ${pending.etype}`
                             : outcome.error ?? "rejected",
                  outcome.ok ? "info" : "error");
        void render();
      });
  },
  onCancelPending() {
    state = clearPending(state);
    void render();
  },
  onMergeChains(a: string, b: string) {
    if (snapshot === null) return;
    void mergeChainsGesture(api, snapshot, a, b).then((outcome) => {
      snapshot = outcome.snapshot;
      state = withSnapshot(state, outcome.snapshot);
      setStatus(outcome.ok ? `merged ${b} into ${a}`
                           : outcome.error ?? "rejected",
                outcome.ok ? "info" : "error");
      void render();
    });
  },
  onPreviewMode(mode: "hrp" | "mrp") {
    previewMode = mode;
    void render();
  },
};

async function render(): Promise<void> {
  app.replaceChildren();
  const header = document.createElement("header");
  const picker = document.createElement("select");
  const docs = await api.listDocs();
  for (const d of docs) {
    const option = document.createElement("option");
    option.value = d.doc_id;
    option.textContent = `${d.doc_id} (v${d.version})`;
    option.selected = d.doc_id === state.docId;
    picker.appendChild(option);
  }
  picker.addEventListener("change", () => void refresh(picker.value));
  header.appendChild(picker);
  if (status) header.appendChild(renderStatus(status, statusKind));
  app.appendChild(header);

  if (snapshot === null) {
    if (docs.length > 0) await refresh(docs[0].doc_id);
    return;
  }
  const main = document.createElement("main");
  main.appendChild(renderDocument(snapshot, state, handlers));
  const side = document.createElement("aside");
  side.appendChild(renderEventPanel(snapshot, state, handlers));
  side.appendChild(renderChains(snapshot, state, handlers));
  main.appendChild(side);
  app.appendChild(main);

  const preview = await api.preview(snapshot.doc_id, previewMode);
  app.appendChild(renderPreview(preview.text, previewMode, handlers));
}

document.addEventListener("keydown", (e) => {
  if (e.key === "Escape") {
    handlers.onCancelPending();
    return;
  }
  // keyboard-first flow: with an event selected, 1/2/3 add a shadow
  const order = { "1": "TOOL", "2": "HABITAT", "3": "INGREDIENT" } as const;
  const etype = order[e.key as keyof typeof order];
  if (etype && snapshot && state.selected &&
      snapshot.events.some((ev) => ev.event_id === state.selected)) {
    handlers.onBeginShadow(state.selected, etype);
    const input = document.querySelector<HTMLInputElement>(".shadow-label");
    input?.focus();
  }
});

void render();
