/**
 * View state and its pure derivations.
 *
 * The rendered view is a function of (service snapshot, local state)
 * only: reloading the page and refetching reproduces it exactly. Local
 * state never caches annotation content, just the selection and a
 * pending (not yet submitted) operation.
 */

import { colorIndex } from "./colors.js";
import type {
  DocumentSnapshot, EditOp, EntityType, EventView, Relation,
} from "./types.js";

export interface PendingShadow {
  kind: "shadow";
  etype: Exclude<EntityType, "EVENT-HEAD">;
  event: string;
  label: string;
  relation: Relation;
}

export interface PendingLink {
  kind: "link";
  source: string;
}

export type PendingOp = PendingShadow | PendingLink | null;

export interface ViewState {
  docId: string | null;
  selected: string | null;      // event id or entity ref
  pending: PendingOp;
  version: number;
}

export function initialState(): ViewState {
  return { docId: null, selected: null, pending: null, version: -1 };
}

export function withSnapshot(state: ViewState,
                             snap: DocumentSnapshot): ViewState {
  const selected = state.docId === snap.doc_id ? state.selected : null;
  return { docId: snap.doc_id, selected, pending: null,
           version: snap.version };
}

export function select(state: ViewState, ref: string | null): ViewState {
  return { ...state, selected: ref };
}

export function beginLink(state: ViewState, source: string): ViewState {
  return { ...state, pending: { kind: "link", source } };
}

export function beginShadow(state: ViewState, event: string,
                            etype: PendingShadow["etype"],
                            relation: Relation = "participant-of"):
    ViewState {
  return {
    ...state,
    pending: { kind: "shadow", etype, event, label: "", relation },
  };
}

export function setShadowLabel(state: ViewState, label: string): ViewState {
  if (state.pending?.kind !== "shadow") return state;
  return { ...state, pending: { ...state.pending, label } };
}

export function clearPending(state: ViewState): ViewState {
  return { ...state, pending: null };
}

/** A pending op is either absent or structurally valid for submission. */
export function pendingValid(state: ViewState,
                             snap: DocumentSnapshot | null): boolean {
  const p = state.pending;
  if (p === null) return true;
  if (snap === null) return false;
  if (p.kind === "shadow") {
    return p.label.trim().length > 0 && hasEvent(snap, p.event);
  }
  return hasEntity(snap, p.source);
}

export function hasEvent(snap: DocumentSnapshot, ref: string): boolean {
  return snap.events.some((e) => e.event_id === ref);
}

export function hasEntity(snap: DocumentSnapshot, ref: string): boolean {
  if (snap.hidden.some((h) => h.hid === ref)) return true;
  return snap.chains.some(
    (c) => c.mentions.some((m) => m.ref === ref));
}

/**
 * Build the LinkRole op for dragging an entity onto an event.
 * Returns an error string instead of an op when the gesture is invalid
 * (self links and unknown refs are blocked client-side).
 */
export function buildLinkOp(snap: DocumentSnapshot, source: string,
                            target: string,
                            relation: Relation = "participant-of"):
    EditOp | string {
  if (source === target) return "cannot link an entity to itself";
  if (!hasEntity(snap, source)) return `unknown entity ${source}`;
  if (!hasEvent(snap, target)) return `unknown event ${target}`;
  return {
    kind: "LinkRole",
    payload: { entity: source, relation, event: target },
  };
}

/** Build the one-step AddHidden op for a shadow entity with its link. */
export function buildShadowOp(snap: DocumentSnapshot, label: string,
                              etype: PendingShadow["etype"], event: string,
                              relation: Relation = "participant-of"):
    EditOp | string {
  if (label.trim() === "") return "shadow entity needs a label";
  if (!hasEvent(snap, event)) return `unknown event ${event}`;
  return {
    kind: "AddHidden",
    payload: {
      label: label.trim(), etype, subtype: "shadow", event, relation,
    },
  };
}

// ----------------------------------------------------------------------
// derived rendering data

export interface TokenHighlight {
  chainId: string;
  color: number;
  selected: boolean;
}

/** Key for one token position. */
export function tokenKey(sentence: number, index: number): string {
  return `${sentence}:${index}`;
}

function mentionSpan(snap: DocumentSnapshot, ref: string):
    { sentence: number; start: number; end: number } | null {
  const m = /^m_(\d+)_(\d+)$/.exec(ref);
  if (!m) return null;
  const sentence = Number(m[1]);
  const start = Number(m[2]);
  const sent = snap.sentences.find((s) => s.index === sentence);
  if (!sent) return null;
  let end = start;
  while (end < sent.tokens.length &&
         sent.tokens[end]?.entity?.startsWith("I-")) {
    end += 1;
  }
  return { sentence, start, end };
}

/**
 * Highlight map: token position -> chain highlight. Entity spans are
 * disjoint, so groups are mutually exclusive per token by construction.
 */
export function highlightGroups(snap: DocumentSnapshot,
                                state: ViewState):
    Map<string, TokenHighlight> {
  const selectedRefs = selectionRefs(snap, state.selected);
  const out = new Map<string, TokenHighlight>();
  for (const chain of snap.chains) {
    const color = colorIndex(chain.chain_id);
    for (const mention of chain.mentions) {
      const span = mentionSpan(snap, mention.ref);
      if (!span) continue;
      for (let t = span.start; t <= span.end; t++) {
        out.set(tokenKey(span.sentence, t), {
          chainId: chain.chain_id,
          color,
          selected: selectedRefs.has(mention.ref),
        });
      }
    }
  }
  return out;
}

/** Refs emphasized by the current selection (an event or an entity). */
export function selectionRefs(snap: DocumentSnapshot,
                              selected: string | null): Set<string> {
  const refs = new Set<string>();
  if (!selected) return refs;
  const event = snap.events.find((e) => e.event_id === selected);
  if (event) {
    refs.add(event.event_id);
    for (const p of event.participants) refs.add(p.ref);
    return refs;
  }
  const chain = snap.chains.find(
    (c) => c.mentions.some((m) => m.ref === selected));
  if (chain) {
    for (const m of chain.mentions) refs.add(m.ref);
  } else {
    refs.add(selected);
  }
  return refs;
}

export function eventAt(snap: DocumentSnapshot, sentence: number,
                        token: number): EventView | null {
  return snap.events.find(
    (e) => e.sentence === sentence && e.head_token === token) ?? null;
}
