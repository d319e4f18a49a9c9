/**
 * Annotation gestures: each one builds an op batch, submits it with the
 * current version, and resolves conflicts by refetching. The caller
 * re-renders exclusively from the snapshot that comes back — submitted
 * state is never kept locally.
 */

import { ApiClient, ApiError } from "./api.js";
import { buildLinkOp, buildShadowOp } from "./state.js";
import type {
  DocumentSnapshot, EditOp, EditResult, Relation,
} from "./types.js";

export interface GestureOutcome extends EditResult {
  snapshot: DocumentSnapshot;
}

async function submit(api: ApiClient, snap: DocumentSnapshot,
                      ops: EditOp[]): Promise<GestureOutcome> {
  try {
    const version = await api.applyOps(snap.doc_id, snap.version, ops);
    return {
      ok: true, version, snapshot: await api.getDoc(snap.doc_id),
    };
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // stale version: refetch so the caller can prompt and retry
      const fresh = await api.getDoc(snap.doc_id);
      return {
        ok: false, conflict: true, version: fresh.version,
        error: err.message, snapshot: fresh,
      };
    }
    if (err instanceof ApiError) {
      return {
        ok: false, version: snap.version, error: err.message,
        snapshot: snap,
      };
    }
    throw err;
  }
}

/** Drag an entity (possibly from a previous sentence) onto an event. */
export async function linkGesture(api: ApiClient, snap: DocumentSnapshot,
                                  source: string, target: string,
                                  relation: Relation = "participant-of"):
    Promise<GestureOutcome> {
  const op = buildLinkOp(snap, source, target, relation);
  if (typeof op === "string") {
    return { ok: false, version: snap.version, error: op, snapshot: snap };
  }
  return submit(api, snap, [op]);
}

/** Create a shadow entity with a free-text label and link it at once. */
export async function addShadowGesture(
    api: ApiClient, snap: DocumentSnapshot, label: string,
    etype: "TOOL" | "HABITAT" | "INGREDIENT", event: string,
    relation: Relation = "participant-of"): Promise<GestureOutcome> {
  const op = buildShadowOp(snap, label, etype, event, relation);
  if (typeof op === "string") {
    return { ok: false, version: snap.version, error: op, snapshot: snap };
  }
  return submit(api, snap, [op]);
}

/** Remove a link created by a previous gesture. */
export async function unlinkGesture(api: ApiClient, snap: DocumentSnapshot,
                                    entity: string, event: string):
    Promise<GestureOutcome> {
  return submit(api, snap, [{ kind: "Unlink", payload: { entity, event } }]);
}

/** Merge the chain of `source` into the chain of `target`. */
export async function mergeChainsGesture(
    api: ApiClient, snap: DocumentSnapshot, a: string, b: string):
    Promise<GestureOutcome> {
  if (a === b) {
    return {
      ok: false, version: snap.version,
      error: "cannot merge a chain with itself", snapshot: snap,
    };
  }
  return submit(api, snap, [{ kind: "MergeChains", payload: { a, b } }]);
}
