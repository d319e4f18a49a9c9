"""Template question generation over saturated events.

Three question families probe dropped ingredients (Elision), hidden tools
and habitats (Implicit), and entity histories (Object Lifespan).  Only
events with at least one hidden entity are eligible, so every question
requires inference beyond the surface text.  Square-bracket adjunct slots
are optional; either every admissible subset is emitted or one is picked
by a seeded draw.
"""

import random
from dataclasses import dataclass, field

from .conllu import Document, ETYPE_HABITAT, ETYPE_INGREDIENT, ETYPE_TOOL, \
    REL_PARTICIPANT, REL_RESULT
from .coref import CorefChain, DocumentArtifacts, chain_index, lifespan
from .events import EXPLICIT, EntityMention, Event
from .lex import definite, gerund, participle, strip_article
from .paraphrase import (
    DpConfig, _entity_text, _hidden_text, _is_inline, _plan_events,
    _pre_state,
)

QT_ELISION = "Elision"
QT_IMPLICIT_TOOL = "ImplicitTool"
QT_IMPLICIT_HABITAT = "ImplicitHabitat"
QT_LIFESPAN_CONTENTS = "LifespanContents"
QT_LIFESPAN_HOW = "LifespanHow"

_OBJECT_ROLES = ("Theme", "Co-Theme", "Patient", "Co-Patient")


@dataclass(frozen=True)
class QuestionTemplate:
    qtype: str
    pattern: tuple[tuple[str, str], ...]  # (kind, value); kind: lit|slot|adj
    answer_slot: str
    adjunct_slots: tuple[str, ...]


TEMPLATES = (
    QuestionTemplate(
        QT_ELISION,
        (("lit", "What should be"), ("slot", "verb_pp"),
         ("adj", "habitat_phrase"), ("adj", "tool_phrase"),
         ("adj", "modifiers")),
        "ingredient_obj", ("habitat_phrase", "tool_phrase", "modifiers")),
    QuestionTemplate(
        QT_IMPLICIT_TOOL,
        (("lit", "What do you use to"), ("slot", "verb"), ("slot", "obj"),
         ("adj", "habitat_phrase"), ("adj", "modifiers")),
        "tool", ("habitat_phrase", "modifiers")),
    QuestionTemplate(
        QT_IMPLICIT_HABITAT,
        (("lit", "Where do you"), ("slot", "verb"), ("slot", "obj"),
         ("adj", "tool_phrase"), ("adj", "modifiers")),
        "habitat_phrase_answer", ("tool_phrase", "modifiers")),
    QuestionTemplate(
        QT_LIFESPAN_CONTENTS,
        (("lit", "What is in"), ("slot", "result_obj")),
        "ingredient_objs", ()),
    QuestionTemplate(
        QT_LIFESPAN_HOW,
        (("lit", "How did you get"), ("slot", "result_obj")),
        "event_phrase", ()),
)


@dataclass
class QAItem:
    question: str
    answer: str
    qtype: str
    source_event: str
    adjuncts_used: frozenset[str] = frozenset()


@dataclass
class QgenConfig:
    enumerate_all: bool = False
    seed: int = 0
    dp: DpConfig = field(default_factory=DpConfig)


def join_list(items: list[str]) -> str:
    """Comma list with a final "and": apples, batter and cinnamon sugar."""
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def _hidden_participants(event: Event) -> list[EntityMention]:
    return [m for m, rel in event.participants
            if rel == REL_PARTICIPANT and not _is_inline(m)]


def _has_hidden(event: Event) -> bool:
    if _hidden_participants(event):
        return True
    return any(m.explicitness != EXPLICIT for m in event.results())


def _bare_text(mention, event, art, cfg) -> str:
    if mention.explicitness == "shadow":
        return strip_article(mention.label)
    return _pre_state(mention, event, art).render(cfg.max_end_states)


def _slots(event: Event, art: DocumentArtifacts, cfg: DpConfig,
           events: list[Event], plans) -> dict[str, str]:
    prep = cfg.prepositions
    doc = art.doc
    tokens = doc.sentences[event.sentence - 1].tokens
    plan = plans[event.event_id]

    hidden = _hidden_participants(event)
    hidden_tools = [m for m in hidden if m.etype == ETYPE_TOOL]
    hidden_habitats = [m for m in hidden if m.etype == ETYPE_HABITAT]
    hidden_objs = [m for m in hidden if m.etype == ETYPE_INGREDIENT
                   and (m.role is None or m.role in _OBJECT_ROLES)]

    def claimed_text(start, end):
        return " ".join(t.surface for t in tokens[start - 1:end])

    habitat_parts = []
    tool_parts = []
    for start, end, mention in sorted(plan.claimed):
        if mention.etype == ETYPE_HABITAT:
            habitat_parts.append(claimed_text(start, end))
        elif mention.etype == ETYPE_TOOL:
            tool_parts.append(claimed_text(start, end))
    for m in hidden_habitats:
        text = _hidden_text(m, event, art, cfg)
        habitat_parts.append(f"{prep.habitat(strip_article(text))} {text}")
    for m in hidden_tools:
        tool_parts.append("with " + _hidden_text(m, event, art, cfg))

    objects = []
    for m, rel in event.participants:
        if rel != REL_PARTICIPANT or m.etype != ETYPE_INGREDIENT:
            continue
        if m.role is not None and m.role not in _OBJECT_ROLES:
            continue
        objects.append(_bare_text(m, event, art, cfg))

    slots = {
        "verb": event.head_lemma,
        "verb_pp": participle(event.head_lemma),
        "habitat_phrase": " ".join(habitat_parts),
        "tool_phrase": " ".join(tool_parts),
        "modifiers": " ".join(m.text for m in event.modifiers),
        "obj": definite(join_list(objects)) if objects else "",
        "ingredient_obj": join_list(
            [_bare_text(m, event, art, cfg) for m in hidden_objs]),
        "tool": strip_article(
            _bare_text(hidden_tools[0], event, art, cfg))
        if hidden_tools else "",
        "habitat_phrase_answer": "",
    }
    if hidden_habitats:
        m = hidden_habitats[0]
        text = _hidden_text(m, event, art, cfg)
        slots["habitat_phrase_answer"] = \
            f"{prep.habitat(strip_article(text))} {text}"

    result_chain = _result_chain(event, art)
    slots["result_obj"] = ""
    slots["ingredient_objs"] = ""
    slots["event_phrase"] = ""
    if result_chain is not None:
        post = result_chain.state_after(event.event_id)
        slots["result_obj"] = definite(post.render(cfg.max_end_states))
        upto = events[:events.index(event) + 1]
        report = lifespan(result_chain, upto, art.chains)
        slots["ingredient_objs"] = join_list(report.constituents)
        slots["event_phrase"] = _event_phrase(event, art, cfg, plan, tokens)
    return slots


def _result_chain(event: Event, art: DocumentArtifacts) -> CorefChain | None:
    for mention in event.results():
        chain = art.by_ref.get(mention.id)
        if chain is not None:
            return chain
    return None


def _event_phrase(event, art, cfg, plan, tokens) -> str:
    """Gerund realization: "by sprinkling cinnamon sugar over ..."."""
    parts = [m for m in _hidden_participants(event)
             if m.etype == ETYPE_INGREDIENT
             and (m.role is None or m.role in _OBJECT_ROLES)]
    words = ["by", gerund(event.head_lemma)]
    words.extend(_bare_text(m, event, art, cfg) for m in parts)
    heads = {event.head_token}
    prev_end = None
    for start, end, mention in sorted(plan.claimed):
        if prev_end is not None and start > prev_end + 1:
            gap = list(range(prev_end + 1, start))
            if not any(i in heads for i in gap):
                words.extend(tokens[i - 1].surface for i in gap)
        span = mention.span
        idx = start
        while idx <= end:
            if idx == span.start:
                relation = REL_RESULT if mention.role == "Result" \
                    else REL_PARTICIPANT
                words.append(_entity_text(mention, relation, event, art, cfg))
                idx = span.end + 1
            else:
                words.append(tokens[idx - 1].surface)
                idx += 1
        prev_end = max(prev_end or 0, end)
    return " ".join(words)


def adjunct_variants(template: QuestionTemplate, event: Event,
                     slots: dict[str, str]) -> list[frozenset[str]]:
    """Admissible adjunct subsets, ordered by size then slot order."""
    available = [s for s in template.adjunct_slots if slots.get(s)]
    variants: list[frozenset[str]] = []
    n = len(available)
    for size in range(n + 1):
        variants.extend(frozenset(c) for c in _combinations(available, size))
    return variants


def _combinations(items, size):
    if size == 0:
        yield ()
        return
    for i in range(len(items) - size + 1):
        for rest in _combinations(items[i + 1:], size - 1):
            yield (items[i],) + rest


def _render(template: QuestionTemplate, slots: dict[str, str],
            use: frozenset[str]) -> str:
    parts = []
    for kind, value in template.pattern:
        if kind == "lit":
            parts.append(value)
        elif kind == "slot":
            parts.append(slots.get(value, ""))
        elif value in use:
            parts.append(slots.get(value, ""))
    return " ".join(p for p in parts if p) + "?"


def _applicable(template: QuestionTemplate, event: Event,
                slots: dict[str, str]) -> bool:
    if not slots.get(template.answer_slot):
        return False
    for kind, value in template.pattern:
        if kind == "slot" and not slots.get(value):
            return False
    return True


def generate_questions(doc: Document, events: list[Event],
                       chains: list[CorefChain],
                       cfg: QgenConfig | None = None) -> list[QAItem]:
    """One QAItem per admissible (event, template, adjunct subset).

    Events with no hidden entity are skipped.  With enumerate_all off, a
    deterministic seeded draw keeps one adjunct variant per pair.
    """
    cfg = cfg or QgenConfig()
    art = DocumentArtifacts(doc=doc, events=events, chains=chains,
                            by_ref=chain_index(chains))
    plans = _plan_events(doc, events)
    items: list[QAItem] = []
    for event in events:
        if not _has_hidden(event):
            continue
        slots = _slots(event, art, cfg.dp, events, plans)
        for template in TEMPLATES:
            if not _applicable(template, event, slots):
                continue
            variants = adjunct_variants(template, event, slots)
            if not cfg.enumerate_all:
                rng = random.Random(
                    f"{cfg.seed}:{doc.doc_id}:{event.event_id}:"
                    f"{template.qtype}")
                variants = [variants[rng.randrange(len(variants))]]
            for use in variants:
                items.append(QAItem(
                    question=_render(template, slots, use),
                    answer=slots[template.answer_slot],
                    qtype=template.qtype,
                    source_event=event.event_id,
                    adjuncts_used=use))
    return items


def export_pair(item: QAItem, recipe_text: str) -> str:
    """Fine-tuning export line: question plus the whole recipe as context."""
    return f"question: {item.question} context: {recipe_text}"
