"""Descriptive corpus statistics: recipes, entities, coreference chains."""

from dataclasses import dataclass, field

from .conllu import (
    Corpus, Document, DocumentError,
    ETYPE_EVENT, ETYPE_HABITAT, ETYPE_INGREDIENT, ETYPE_TOOL,
    REL_RESULT, entity_spans, mention_ref,
)
from .coref import build_chains
from .events import build_events
from .states import SenseTable

ENTITY_ROWS = (
    "EVENT-HEAD",
    "TOOL",
    "HABITAT",
    "INGREDIENT (participant)",
    "INGREDIENT (result)",
)
CHAIN_ROWS = ("TOOL", "HABITAT", "INGREDIENT", "ALL (explicit)", "ALL")


@dataclass
class Extrema:
    avg: float = 0.0
    max: int = 0
    min: int = 0


@dataclass
class SplitStats:
    recipes: int = 0
    sentences: Extrema = field(default_factory=Extrema)
    sentence_length: Extrema = field(default_factory=Extrema)
    # row -> {"explicit": avg, "hidden": avg or None}
    entities: dict[str, dict[str, float | None]] = field(default_factory=dict)
    chains: dict[str, float] = field(default_factory=dict)


@dataclass
class StatsReport:
    splits: dict[str, SplitStats] = field(default_factory=dict)


def _sentence_length(sentence) -> int:
    return sum(1 for t in sentence.tokens if t.upos != "PUNCT")


def _doc_entity_counts(doc: Document) -> dict[str, dict[str, int]]:
    counts = {row: {"explicit": 0, "hidden": 0} for row in ENTITY_ROWS}
    events = build_events(doc)
    explicit_result_ids = set()
    for event in events:
        for mention in event.results():
            if mention.span is not None:
                explicit_result_ids.add(mention.id)
    for i, sent in enumerate(doc.sentences, 1):
        for span in entity_spans(sent, i):
            if span.etype == ETYPE_EVENT:
                counts["EVENT-HEAD"]["explicit"] += 1
            elif span.etype == ETYPE_TOOL:
                counts["TOOL"]["explicit"] += 1
            elif span.etype == ETYPE_HABITAT:
                counts["HABITAT"]["explicit"] += 1
            else:
                mid = mention_ref(span.sentence, span.start)
                row = "INGREDIENT (result)" if mid in explicit_result_ids \
                    else "INGREDIENT (participant)"
                counts[row]["explicit"] += 1
    result_hids = {link.entity for link in doc.event_links
                   if link.relation == REL_RESULT}
    for decl in doc.hidden_entities:
        if decl.etype == ETYPE_TOOL:
            counts["TOOL"]["hidden"] += 1
        elif decl.etype == ETYPE_HABITAT:
            counts["HABITAT"]["hidden"] += 1
        elif decl.hid in result_hids:
            counts["INGREDIENT (result)"]["hidden"] += 1
        else:
            counts["INGREDIENT (participant)"]["hidden"] += 1
    return counts


def _doc_chain_counts(doc: Document, table: SenseTable) -> dict[str, int]:
    events = build_events(doc)
    chains = build_chains(doc, events, table)
    counts = {row: 0 for row in CHAIN_ROWS}
    for chain in chains:
        if chain.etype in (ETYPE_TOOL, ETYPE_HABITAT, ETYPE_INGREDIENT):
            counts[chain.etype] += 1
        counts["ALL"] += 1
        if all(ref.startswith("m_") for ref in chain.refs()):
            counts["ALL (explicit)"] += 1
    return counts


def compute_stats(corpus: Corpus, split_map: dict[str, str] | None = None,
                  table: SenseTable | None = None) -> StatsReport:
    """Tables of recipe, entity and chain counts per split.

    split_map assigns each doc_id to a split name; when omitted all
    documents land in one "all" split.  A document outside the map is an
    error.
    """
    table = table or SenseTable.default()
    by_split: dict[str, list[Document]] = {}
    if split_map is not None:
        for name in split_map.values():
            by_split.setdefault(name, [])
    for doc in corpus:
        if split_map is None:
            split = "all"
        elif doc.doc_id not in split_map:
            raise DocumentError(
                f"document {doc.doc_id} has no split label")
        else:
            split = split_map[doc.doc_id]
        by_split.setdefault(split, []).append(doc)
    if not by_split:
        by_split["all"] = []

    report = StatsReport()
    for split, docs in sorted(by_split.items()):
        report.splits[split] = _split_stats(docs, table)
    return report


def _split_stats(docs: list[Document], table: SenseTable) -> SplitStats:
    out = SplitStats(recipes=len(docs))
    if not docs:
        out.entities = {row: {"explicit": 0.0,
                              "hidden": None if row == "EVENT-HEAD" else 0.0}
                        for row in ENTITY_ROWS}
        out.chains = {row: 0.0 for row in CHAIN_ROWS}
        return out
    n = len(docs)
    sent_counts = [len(d.sentences) for d in docs]
    lengths = [_sentence_length(s) for d in docs for s in d.sentences]
    out.sentences = Extrema(avg=sum(sent_counts) / n,
                            max=max(sent_counts), min=min(sent_counts))
    if lengths:
        out.sentence_length = Extrema(avg=sum(lengths) / len(lengths),
                                      max=max(lengths), min=min(lengths))
    entity_totals = {row: {"explicit": 0, "hidden": 0} for row in ENTITY_ROWS}
    chain_totals = {row: 0 for row in CHAIN_ROWS}
    for doc in docs:
        for row, c in _doc_entity_counts(doc).items():
            entity_totals[row]["explicit"] += c["explicit"]
            entity_totals[row]["hidden"] += c["hidden"]
        for row, c in _doc_chain_counts(doc, table).items():
            chain_totals[row] += c
    out.entities = {
        row: {"explicit": entity_totals[row]["explicit"] / n,
              "hidden": None if row == "EVENT-HEAD"
              else entity_totals[row]["hidden"] / n}
        for row in ENTITY_ROWS
    }
    out.chains = {row: chain_totals[row] / n for row in CHAIN_ROWS}
    return out


def format_stats(report: StatsReport) -> str:
    """Aligned text tables for terminal output."""
    splits = list(report.splits)
    lines = []

    def row(label, values):
        lines.append(f"{label:<34}" + "".join(f"{v:>12}" for v in values))

    row("", splits)
    row("# of recipes", [s.recipes for s in report.splits.values()])
    for attr, label in (("sentences", "sentences per recipe"),
                        ("sentence_length", "sentence length")):
        for stat in ("avg", "max", "min"):
            vals = []
            for s in report.splits.values():
                v = getattr(getattr(s, attr), stat)
                vals.append(f"{v:.1f}" if stat == "avg" else str(v))
            row(f"{stat.capitalize()}. # of {label}"
                if attr == "sentences" else f"{stat.capitalize()} {label}",
                vals)
    lines.append("")
    row("Avg. # of entities per recipe", ["Exp./Hid." for _ in splits])
    for erow in ENTITY_ROWS:
        vals = []
        for s in report.splits.values():
            e = s.entities[erow]
            hid = "N/A" if e["hidden"] is None else f"{e['hidden']:.1f}"
            vals.append(f"{e['explicit']:.1f}/{hid}")
        row(erow, vals)
    lines.append("")
    row("Avg. # of coref chains per recipe", ["" for _ in splits])
    for crow in CHAIN_ROWS:
        row(crow, [f"{s.chains[crow]:.1f}" for s in report.splits.values()])
    return "\n".join(lines)
