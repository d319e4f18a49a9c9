// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { PALETTE, colorIndex } from "./colors.js";
import { makeSnapshot } from "./fixtures.js";
import {
  renderChains, renderDocument, renderEventPanel, renderPreview,
} from "./render.js";
import type { Handlers } from "./render.js";
import {
  beginShadow, initialState, select, withSnapshot,
} from "./state.js";

function noopHandlers(): Handlers {
  return {
    onSelectEvent() {}, onEntityClick() {}, onBeginShadow() {},
    onSubmitShadow() {}, onCancelPending() {}, onMergeChains() {},
    onPreviewMode() {},
  };
}

describe("rendering", () => {
  it("is a pure function of snapshot and view state", () => {
    const snap = makeSnapshot();
    const state = select(withSnapshot(initialState(), snap), "e_1_1");
    const a = renderDocument(snap, state, noopHandlers()).outerHTML;
    const b = renderDocument(snap, state, noopHandlers()).outerHTML;
    expect(a).toBe(b);
  });

  it("colors entity spans by their chain and marks event heads", () => {
    const snap = makeSnapshot();
    const state = withSnapshot(initialState(), snap);
    const root = renderDocument(snap, state, noopHandlers());
    const onions = root.querySelector<HTMLElement>('[data-token="1:2"]');
    expect(onions?.classList.contains("entity")).toBe(true);
    expect(onions?.dataset.chain).toBe("c1");
    // jsdom normalizes colors to rgb(...)
    const hex = PALETTE[colorIndex("c1")];
    const rgb = `rgb(${parseInt(hex.slice(1, 3), 16)}, ` +
      `${parseInt(hex.slice(3, 5), 16)}, ` +
      `${parseInt(hex.slice(5, 7), 16)})`;
    expect(onions?.style.borderBottom).toBe(`2px solid ${rgb}`);
    const head = root.querySelector<HTMLElement>('[data-event="e_1_1"]');
    expect(head?.classList.contains("event-head")).toBe(true);
  });

  it("emphasizes the selected event and its participants", () => {
    const snap = makeSnapshot();
    const state = select(withSnapshot(initialState(), snap), "e_1_1");
    const root = renderDocument(snap, state, noopHandlers());
    expect(root.querySelector('[data-event="e_1_1"]')!
      .classList.contains("selected")).toBe(true);
    expect(root.querySelector('[data-token="1:2"]')!
      .classList.contains("selected")).toBe(true);
  });

  it("clicking an event head reports the selection", () => {
    const snap = makeSnapshot();
    const state = withSnapshot(initialState(), snap);
    let picked = "";
    const handlers = {
      ...noopHandlers(),
      onSelectEvent(id: string) { picked = id; },
    };
    const root = renderDocument(snap, state, handlers);
    root.querySelector<HTMLElement>('[data-event="e_2_1"]')!.click();
    expect(picked).toBe("e_2_1");
  });

  it("shows participants with explicitness markers in the event panel",
     () => {
       const snap = makeSnapshot();
       const state = select(withSnapshot(initialState(), snap), "e_1_1");
       const panel = renderEventPanel(snap, state, noopHandlers());
       const rows = [...panel.querySelectorAll("li")].map(
         (li) => li.className);
       expect(rows).toContain("participant explicit");
       expect(rows).toContain("participant shadow");
     });

  it("disables shadow submission until a label is typed", () => {
    const snap = makeSnapshot();
    let state = select(withSnapshot(initialState(), snap), "e_1_1");
    state = beginShadow(state, "e_1_1", "HABITAT");
    const panel = renderEventPanel(snap, state, noopHandlers());
    const submit = panel.querySelector<HTMLButtonElement>(".submit-shadow");
    const input = panel.querySelector<HTMLInputElement>(".shadow-label");
    expect(submit!.disabled).toBe(true);
    input!.value = "cutting board";
    input!.dispatchEvent(new Event("input"));
    expect(submit!.disabled).toBe(false);
  });

  it("renders chain timelines with stable swatches", () => {
    const snap = makeSnapshot();
    const state = withSnapshot(initialState(), snap);
    const panel = renderChains(snap, state, noopHandlers());
    const row = panel.querySelector<HTMLElement>('[data-chain="c1"]');
    expect(row?.textContent).toContain(
      "onions → chopped onions → sautéed chopped onions");
  });

  it("offers chain merging only for same-typed chains", () => {
    const snap = makeSnapshot();
    // select the ingredient chain; only same-typed rows get merge buttons
    const state = select(withSnapshot(initialState(), snap), "m_1_2");
    const panel = renderChains(snap, state, noopHandlers());
    const toolRow = panel.querySelector('[data-chain="c_h1"]');
    expect(toolRow?.querySelector("button.merge")).toBeNull();
  });

  it("preview pane shows service text for the picked mode", () => {
    let mode = "";
    const handlers = {
      ...noopHandlers(),
      onPreviewMode(m: string) { mode = m; },
    };
    const pane = renderPreview("Chop onions ...", "hrp",
                               handlers as Handlers);
    expect(pane.querySelector(".preview-text")?.textContent)
      .toBe("Chop onions ...");
    const buttons = pane.querySelectorAll<HTMLButtonElement>(".mode");
    buttons[1].click();
    expect(mode).toBe("mrp");
  });
});
