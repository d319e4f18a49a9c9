/** Hand-built snapshot used by the unit tests (mirrors docs/api.md). */

import type { DocumentSnapshot } from "./types.js";

export function makeSnapshot(): DocumentSnapshot {
  return {
    doc_id: "chop-onions",
    title: "Chop onions",
    provenance: "fixture",
    version: 3,
    sentences: [
      {
        index: 1,
        tokens: [
          { index: 1, surface: "Chop", lemma: "chop", upos: "VERB",
            entity: "B-EVENT", frame: "CUT" },
          { index: 2, surface: "onions", lemma: "onion", upos: "NOUN",
            entity: "B-INGREDIENT", frame: null },
          { index: 3, surface: ".", lemma: ".", upos: "PUNCT",
            entity: null, frame: null },
        ],
      },
      {
        index: 2,
        tokens: [
          { index: 1, surface: "Sauté", lemma: "sauté", upos: "VERB",
            entity: "B-EVENT", frame: "COOK" },
          { index: 2, surface: "until", lemma: "until", upos: "SCONJ",
            entity: null, frame: null },
          { index: 3, surface: "browned", lemma: "brown", upos: "VERB",
            entity: null, frame: null },
          { index: 4, surface: ".", lemma: ".", upos: "PUNCT",
            entity: null, frame: null },
        ],
      },
    ],
    hidden: [
      { hid: "h1", label: "knife", etype: "TOOL", subtype: "shadow",
        anchor_event: "e_1_1", role: null },
      { hid: "h5", label: "", etype: "INGREDIENT", subtype: "drop",
        anchor_event: "e_2_1", role: null },
    ],
    links: [
      { entity: "h1", relation: "participant-of", event: "e_1_1" },
      { entity: "h5", relation: "participant-of", event: "e_2_1" },
    ],
    events: [
      {
        event_id: "e_1_1", frame: "CUT", category: "TRANSFORMATION",
        sentence: 1, head_token: 1, head: "Chop",
        participants: [
          { ref: "m_1_2", relation: "participant-of",
            etype: "INGREDIENT", role: "Patient", label: "onions",
            explicitness: "explicit" },
          { ref: "h1", relation: "participant-of", etype: "TOOL",
            role: "Instrument", label: "knife", explicitness: "shadow" },
        ],
        modifiers: [],
      },
      {
        event_id: "e_2_1", frame: "COOK", category: "TRANSFORMATION",
        sentence: 2, head_token: 1, head: "Sauté",
        participants: [
          { ref: "h5", relation: "participant-of", etype: "INGREDIENT",
            role: "Theme", label: "", explicitness: "drop" },
        ],
        modifiers: [
          { role: "Attribute", sentence: 2, start: 2, end: 3,
            text: "until browned" },
        ],
      },
    ],
    chains: [
      {
        chain_id: "c1", etype: "INGREDIENT", declared: true,
        mentions: [
          { ref: "m_1_2", event: "e_1_1" },
          { ref: "h5", event: "e_2_1" },
        ],
        timeline: [
          { event: null, text: "onions", location: null },
          { event: "e_1_1", text: "chopped onions", location: null },
          { event: "e_2_1", text: "sautéed chopped onions",
            location: null },
        ],
        color: 4,
      },
      {
        chain_id: "c_h1", etype: "TOOL", declared: false,
        mentions: [{ ref: "h1", event: "e_1_1" }],
        timeline: [{ event: null, text: "knife", location: null }],
        color: 2,
      },
    ],
  };
}
