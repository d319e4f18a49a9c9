import { describe, expect, it } from "vitest";

import { makeSnapshot } from "./fixtures.js";
import {
  beginLink, beginShadow, buildLinkOp, buildShadowOp, highlightGroups,
  initialState, pendingValid, select, selectionRefs, setShadowLabel,
  tokenKey, withSnapshot,
} from "./state.js";

describe("view state", () => {
  it("is reset from a snapshot, keeping selection within the same doc",
     () => {
       const snap = makeSnapshot();
       let state = withSnapshot(initialState(), snap);
       expect(state.version).toBe(3);
       state = select(state, "e_1_1");
       state = withSnapshot(state, { ...snap, version: 4 });
       expect(state.selected).toBe("e_1_1");
       expect(state.pending).toBeNull();
       const other = { ...snap, doc_id: "other" };
       expect(withSnapshot(state, other).selected).toBeNull();
     });

  it("validates pending shadow ops before submission", () => {
    const snap = makeSnapshot();
    let state = withSnapshot(initialState(), snap);
    expect(pendingValid(state, snap)).toBe(true);
    state = beginShadow(state, "e_1_1", "TOOL");
    expect(pendingValid(state, snap)).toBe(false); // empty label
    state = setShadowLabel(state, "board");
    expect(pendingValid(state, snap)).toBe(true);
    state = beginShadow(state, "e_9_9", "TOOL");
    state = setShadowLabel(state, "board");
    expect(pendingValid(state, snap)).toBe(false); // unknown event
  });

  it("blocks linking an entity to itself", () => {
    const snap = makeSnapshot();
    expect(buildLinkOp(snap, "m_1_2", "m_1_2")).toMatch(/itself/);
  });

  it("blocks unknown refs in link gestures", () => {
    const snap = makeSnapshot();
    expect(buildLinkOp(snap, "m_9_9", "e_1_1")).toMatch(/unknown entity/);
    expect(buildLinkOp(snap, "m_1_2", "e_9_9")).toMatch(/unknown event/);
  });

  it("builds the one-step link op for a prior-sentence entity", () => {
    const snap = makeSnapshot();
    const op = buildLinkOp(snap, "m_1_2", "e_2_1");
    expect(op).toEqual({
      kind: "LinkRole",
      payload: { entity: "m_1_2", relation: "participant-of",
                 event: "e_2_1" },
    });
  });

  it("blocks empty shadow labels", () => {
    const snap = makeSnapshot();
    expect(buildShadowOp(snap, "   ", "TOOL", "e_1_1"))
      .toMatch(/needs a label/);
  });

  it("builds the bundled AddHidden op", () => {
    const snap = makeSnapshot();
    const op = buildShadowOp(snap, "hand", "TOOL", "e_2_1");
    expect(op).toEqual({
      kind: "AddHidden",
      payload: { label: "hand", etype: "TOOL", subtype: "shadow",
                 event: "e_2_1", relation: "participant-of" },
    });
  });

  it("computes mutually exclusive highlight groups per token", () => {
    const snap = makeSnapshot();
    const state = withSnapshot(initialState(), snap);
    const groups = highlightGroups(snap, state);
    expect(groups.get(tokenKey(1, 2))?.chainId).toBe("c1");
    expect(groups.get(tokenKey(1, 1))).toBeUndefined(); // event head
    // a Map can hold one group per token by construction; spans disjoint
    expect(groups.size).toBe(1);
  });

  it("selection emphasizes a whole chain or an event's participants",
     () => {
       const snap = makeSnapshot();
       const chainRefs = selectionRefs(snap, "m_1_2");
       expect(chainRefs).toEqual(new Set(["m_1_2", "h5"]));
       const eventRefs = selectionRefs(snap, "e_1_1");
       expect(eventRefs).toEqual(new Set(["e_1_1", "m_1_2", "h1"]));
     });

  it("keeps link pending state until cancelled or submitted", () => {
    const snap = makeSnapshot();
    let state = withSnapshot(initialState(), snap);
    state = beginLink(state, "m_1_2");
    expect(state.pending).toEqual({ kind: "link", source: "m_1_2" });
    expect(pendingValid(state, snap)).toBe(true);
  });
});
