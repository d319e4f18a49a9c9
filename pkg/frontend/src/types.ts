/**
 * DTOs mirroring the annotation service API (see docs/api.md).
 * Field names are snake_case to match the wire format exactly.
 */

export type EntityType = "EVENT-HEAD" | "TOOL" | "HABITAT" | "INGREDIENT";
export type Relation = "participant-of" | "result-of";
export type Explicitness = "explicit" | "drop" | "shadow";

export interface TokenView {
  index: number;
  surface: string;
  lemma: string;
  upos: string;
  entity: string | null;
  frame: string | null;
}

export interface SentenceView {
  index: number;
  tokens: TokenView[];
}

export interface HiddenEntityView {
  hid: string;
  label: string;
  etype: string;
  subtype: string;
  anchor_event: string;
  role: string | null;
}

export interface LinkView {
  entity: string;
  relation: string;
  event: string;
}

export interface ParticipantView {
  ref: string;
  relation: Relation;
  etype: string;
  role: string | null;
  label: string;
  explicitness: Explicitness;
}

export interface ModifierView {
  role: string;
  sentence: number;
  start: number;
  end: number;
  text: string;
}

export interface EventView {
  event_id: string;
  frame: string;
  category: string;
  sentence: number;
  head_token: number;
  head: string;
  participants: ParticipantView[];
  modifiers: ModifierView[];
}

export interface TimelineEntryView {
  event: string | null;
  text: string;
  location: string | null;
}

export interface ChainMentionView {
  ref: string;
  event: string | null;
}

export interface ChainView {
  chain_id: string;
  etype: string;
  declared: boolean;
  mentions: ChainMentionView[];
  timeline: TimelineEntryView[];
  color: number;
}

export interface DocumentSnapshot {
  doc_id: string;
  title: string;
  provenance: string;
  version: number;
  sentences: SentenceView[];
  hidden: HiddenEntityView[];
  links: LinkView[];
  events: EventView[];
  chains: ChainView[];
}

export interface DocListEntry {
  doc_id: string;
  title: string;
  version: number;
  sentences: number;
}

export interface PreviewResponse {
  doc_id: string;
  version: number;
  mode: string;
  text: string;
}

/** One edit operation as posted to /docs/{id}/edits. */
export interface EditOp {
  kind: "AddHidden" | "LinkRole" | "Unlink" | "MergeChains" | "SplitChain"
      | "SetSense";
  payload: Record<string, string>;
}

export interface EditResult {
  ok: boolean;
  version: number;
  /** set when the service rejected the batch */
  error?: string;
  /** set on a version conflict, after the snapshot was refetched */
  conflict?: boolean;
}
