"""Human- and machine-readable dense paraphrase emitters plus the MRP codec.

Both renderings carry the same enriched content.  The human-readable form
is an English sentence assembled from ordered segments:

    [tool phrase][fronted habitat] head [objects][modifiers][destinations]
    [, resulting in outcome]

The machine-readable form keeps the source tokens and attaches curly-brace
blocks: one block after each event head holding its hidden roles and
outcome, and one block after each explicit entity holding its relation to
the head.  docs/mrp.md gives the grammar; transformed ingredients are
edited in place in both forms.
"""

import re
from dataclasses import dataclass, field, replace

from .conllu import (
    Document, ETYPE_HABITAT, ETYPE_INGREDIENT, ETYPE_TOOL,
    REL_PARTICIPANT, REL_RESULT,
)
from .coref import CorefChain, DocumentArtifacts, build_artifacts
from .events import EXPLICIT, EntityMention, Event, role_alignments
from .lex import PrepLexicon, definite, strip_article
from .states import EndStateClass, EntityState, SenseTable, classify_end_state

HEAD_KEYS = ("TOOL", "HABITAT", "OUTCOME", "INGRE_PART", "INGRE_RESULT",
             "OBJECT_PART", "OBJECT_RESULT")
INLINE_KEYS = ("INGRE_OF", "RESULT_OF", "TOOL_OF", "HABITAT_OF", "OBJECT_OF")

MODE_COOKING = "cooking"
MODE_TRANSFER = "transfer"

STYLE_RESULTING_IN = "resulting_in"
STYLE_TO_GET = "to_get"

_OBJECT_ROLES = ("Theme", "Co-Theme", "Patient", "Co-Patient")

_DETOK = re.compile(r"\s+([,.;:!?%])")


@dataclass
class DpConfig:
    mode: str = MODE_COOKING
    max_end_states: int | None = None
    outcome_style: str = STYLE_RESULTING_IN
    prepositions: PrepLexicon = field(default_factory=PrepLexicon.default)
    sense_table: SenseTable = field(default_factory=SenseTable.default)

    def __post_init__(self):
        if self.mode not in (MODE_COOKING, MODE_TRANSFER):
            raise ValueError(f"bad mode {self.mode!r}")
        if self.mode == MODE_TRANSFER:
            self.max_end_states = 2

    def key(self, name: str) -> str:
        if self.mode == MODE_TRANSFER:
            return name.replace("INGRE", "OBJECT")
        return name


@dataclass
class MrpEvent:
    head: str
    pre_block: list[tuple[str, str]] = field(default_factory=list)
    inline_tags: list[tuple[str, str]] = field(default_factory=list)
    text: str = ""


@dataclass
class MrpParse:
    events: list[MrpEvent]
    diagnostics: list[str]


@dataclass
class DocumentParaphrase:
    hrp: list[str]   # one per sentence
    mrp: list[str]   # one per window of at most three sentences


def detok(words: list[str]) -> str:
    return _DETOK.sub(r"\1", " ".join(w for w in words if w))


# ----------------------------------------------------------------------
# per-event material

@dataclass
class _EventPlan:
    event: Event
    claimed: list[tuple[int, int, EntityMention]]  # role-span start/end
    entity_at: dict[int, EntityMention]            # entity span start -> mention
    entity_skip: set[int]


def _plan_events(doc: Document, events: list[Event]
                 ) -> dict[str, _EventPlan]:
    plans = {
        e.event_id: _EventPlan(event=e, claimed=[], entity_at={},
                               entity_skip=set())
        for e in events
    }
    participants = {}
    for event in events:
        for mention, rel in event.participants:
            participants[(event.event_id, mention.id)] = mention
    for al in role_alignments(doc):
        if al.disposition != "claimed" or al.event not in plans:
            continue
        mention = participants.get((al.event, al.entity))
        if mention is None:
            continue
        plan = plans[al.event]
        plan.claimed.append((al.span.start, al.span.end, mention))
        span = mention.span
        plan.entity_at[span.start] = mention
        plan.entity_skip.update(range(span.start + 1, span.end + 1))
    return plans


def _owned_tokens(plans: dict[str, _EventPlan]) -> dict[tuple[int, int], set[str]]:
    """Which events own which (sentence, token) positions."""
    owned: dict[tuple[int, int], set[str]] = {}

    def mark(eid, sent, start, end):
        for i in range(start, end + 1):
            owned.setdefault((sent, i), set()).add(eid)

    for eid, plan in plans.items():
        ev = plan.event
        mark(eid, ev.sentence, ev.head_token, ev.head.span.end)
        for start, end, _ in plan.claimed:
            mark(eid, ev.sentence, start, end)
        for mod in ev.modifiers:
            mark(eid, mod.sentence, mod.start, mod.end)
    return owned


def _clause_tokens(plan: _EventPlan, owned) -> list[int]:
    """Token indices of the event's clause, with neutral gaps kept."""
    ev = plan.event
    spans = [(ev.head_token, ev.head.span.end)]
    spans += [(s, e) for s, e, _ in plan.claimed]
    spans += [(m.start, m.end) for m in ev.modifiers if m.sentence == ev.sentence]
    spans.sort()
    included: list[int] = []
    prev_end = None
    for start, end in spans:
        if prev_end is not None and start > prev_end + 1:
            gap = range(prev_end + 1, start)
            gap_owners = set()
            for i in gap:
                gap_owners |= owned.get((ev.sentence, i), set())
            if gap_owners <= {ev.event_id}:
                included.extend(gap)
        for i in range(start, end + 1):
            if not included or i > included[-1]:
                included.append(i)
        prev_end = max(prev_end or 0, end)
    return included


# ----------------------------------------------------------------------
# state rendering

def _chain_of(mention: EntityMention, art: DocumentArtifacts) -> CorefChain | None:
    return art.by_ref.get(mention.id)


def _pre_state(mention, event, art) -> EntityState:
    chain = _chain_of(mention, art)
    if chain is None:
        return EntityState(base=mention.label or mention.id)
    return chain.state_before(event.event_id)


def _participant_text(mention, event, art, cfg: DpConfig) -> str:
    """In-place rendering of an explicit participant: its chain state."""
    return _pre_state(mention, event, art).render(cfg.max_end_states)


def _result_text(mention, event, art, cfg: DpConfig) -> str:
    """A result span keeps its own surface under the prior state markers."""
    sts = _pre_state(mention, event, art).applied_states
    if cfg.max_end_states is not None:
        keep = cfg.max_end_states
        sts = sts[len(sts) - keep:] if keep > 0 else ()
    return " ".join(list(reversed(sts)) + [mention.label])


def _hidden_text(mention, event, art, cfg: DpConfig, *, bare=False) -> str:
    """Rendering of a hidden or cross-linked participant."""
    if mention.explicitness == "shadow":
        return mention.label
    state = _pre_state(mention, event, art).render(cfg.max_end_states)
    return state if bare else definite(state)


def _entity_text(mention, relation, event, art, cfg) -> str:
    if relation == REL_RESULT:
        return _result_text(mention, event, art, cfg)
    return _participant_text(mention, event, art, cfg)


# ----------------------------------------------------------------------
# hidden participant grouping

@dataclass
class _HiddenGroups:
    tools: list[str]
    fronted_locations: list[str]      # shadow Location habitats
    resolved_locations: list[str]     # drop/linked Location habitats
    destinations: list[str]
    objects: list[str]


def _is_inline(mention: EntityMention) -> bool:
    return mention.explicitness == EXPLICIT and mention.role is not None


def _hidden_groups(event, art, cfg: DpConfig) -> _HiddenGroups:
    tools, fronted, resolved, dests, objs = [], [], [], [], []
    prep = cfg.prepositions
    for mention, rel in event.participants:
        if rel != REL_PARTICIPANT or _is_inline(mention):
            continue
        text = _hidden_text(mention, event, art, cfg)
        role = mention.role
        if role == "Instrument" or (role is None and mention.etype == ETYPE_TOOL):
            tools.append(text)
        elif role == "Destination":
            dests.append(f"{prep.habitat(strip_article(text))} {text}")
        elif role == "Location" or (role is None
                                    and mention.etype == ETYPE_HABITAT):
            phrase = f"{prep.habitat(strip_article(text))} {text}"
            if mention.explicitness == "shadow":
                fronted.append(phrase)
            else:
                resolved.append(phrase)
        else:
            objs.append(text)
    return _HiddenGroups(tools=tools, fronted_locations=fronted,
                         resolved_locations=resolved, destinations=dests,
                         objects=objs)


def _outcome_text(event, art, cfg: DpConfig) -> str | None:
    results = event.results()
    hidden = [m for m in results if m.explicitness != EXPLICIT]
    if hidden:
        mention = hidden[0]
        if mention.explicitness == "shadow":
            return mention.label
        chain = _chain_of(mention, art)
        if chain is not None:
            return chain.state_after(event.event_id).render(cfg.max_end_states)
        return mention.label
    if results:
        return None  # the explicit result span already names the outcome
    if classify_end_state(event.frame, cfg.sense_table) \
            is not EndStateClass.TRANSFORMATION:
        return None
    for mention in event.object_participants():
        chain = _chain_of(mention, art)
        if chain is None:
            continue
        before = chain.state_before(event.event_id)
        after = chain.state_after(event.event_id)
        if after != before:
            return after.render(cfg.max_end_states)
    return None


# ----------------------------------------------------------------------
# HRP

def _lower_first(text: str) -> str:
    return text[:1].lower() + text[1:]


def _upper_first(text: str) -> str:
    return text[:1].upper() + text[1:]


def _hrp_clause(plan: _EventPlan, owned, art, cfg: DpConfig) -> str:
    event = plan.event
    groups = _hidden_groups(event, art, cfg)
    doc = art.doc
    tokens = doc.sentences[event.sentence - 1].tokens

    pre = ""
    if groups.tools:
        pre = "using " + " and ".join(groups.tools)
    if groups.fronted_locations:
        pre = (pre + " " if pre else "") + " ".join(groups.fronted_locations)
    if pre:
        pre += ", "

    time_spans = [m for m in event.modifiers if m.role == "Time"]
    anchor = max((m.end for m in time_spans), default=None)
    if anchor is None and plan.claimed:
        object_spans = [e for s, e, m in plan.claimed
                        if m.etype == ETYPE_INGREDIENT]
        anchor = max(object_spans, default=None)
    if anchor is None:
        anchor = event.head.span.end

    words: list[str] = []
    for idx in _clause_tokens(plan, owned):
        if idx == event.head_token:
            words.append(tokens[idx - 1].surface.lower())
            if event.head.span.end > event.head_token:
                words.extend(t.surface for t in
                             tokens[event.head_token:event.head.span.end])
            for obj in groups.objects:
                words.append(obj)
        elif event.head_token < idx <= event.head.span.end:
            pass
        elif idx in plan.entity_at:
            mention = plan.entity_at[idx]
            relation = REL_RESULT if mention.role == "Result" \
                else REL_PARTICIPANT
            words.append(_entity_text(mention, relation, event, art, cfg))
        elif idx in plan.entity_skip:
            pass
        else:
            words.append(tokens[idx - 1].surface)
        if idx == anchor and groups.resolved_locations:
            words.extend(groups.resolved_locations)
    if not words and groups.objects:
        words.extend(groups.objects)

    body = detok([w for w in words if w])
    if groups.destinations:
        body += " " + " ".join(groups.destinations)
    outcome = _outcome_text(event, art, cfg)
    if outcome:
        if cfg.outcome_style == STYLE_TO_GET:
            body += f" to get {outcome}"
        else:
            body += f", resulting in {outcome}"
    return (pre + body).strip()


def emit_hrp(event: Event, art: DocumentArtifacts,
             cfg: DpConfig | None = None) -> str:
    """Human-readable paraphrase of one event, without final punctuation."""
    cfg = cfg or DpConfig()
    plans = _plan_events(art.doc, art.events)
    owned = _owned_tokens(plans)
    return _upper_first(_hrp_clause(plans[event.event_id], owned, art, cfg))


# ----------------------------------------------------------------------
# MRP

def _head_pairs(event, art, cfg: DpConfig) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for mention, rel in event.participants:
        if rel != REL_PARTICIPANT or _is_inline(mention):
            continue
        text = _hidden_text(mention, event, art, cfg, bare=True)
        if mention.etype == ETYPE_TOOL:
            pairs.append(("TOOL", text))
        elif mention.etype == ETYPE_HABITAT:
            pairs.append(("HABITAT", text))
        else:
            pairs.append((cfg.key("INGRE_PART"), text))
    for mention in event.results():
        if mention.explicitness == EXPLICIT:
            continue
        pairs.append((cfg.key("INGRE_RESULT"),
                      _hidden_text(mention, event, art, cfg, bare=True)))
    if not event.results():
        outcome = _outcome_text(event, art, cfg)
        if outcome:
            pairs.append(("OUTCOME", outcome))
    return pairs


def _inline_key(mention: EntityMention, relation: str, cfg: DpConfig) -> str:
    if relation == REL_RESULT:
        return "RESULT_OF"
    if mention.etype == ETYPE_TOOL:
        return "TOOL_OF"
    if mention.etype == ETYPE_HABITAT:
        return "HABITAT_OF"
    return cfg.key("INGRE_OF")


def _render_block(pairs: list[tuple[str, str]]) -> str:
    return "{" + " # ".join(f"{k}:{v}" for k, v in pairs) + "}"


def _mrp_event_and_text(event: Event, art: DocumentArtifacts,
                        cfg: DpConfig) -> tuple[MrpEvent, str]:
    plans = _plan_events(art.doc, art.events)
    owned = _owned_tokens(plans)
    plan = plans[event.event_id]
    tokens = art.doc.sentences[event.sentence - 1].tokens

    pre_block = _head_pairs(event, art, cfg)
    inline: list[tuple[str, str]] = []
    words: list[str] = []
    pieces: list[str] = []
    for idx in _clause_tokens(plan, owned):
        if idx == event.head_token:
            surf = tokens[idx - 1].surface
            words.append(surf)
            pieces.append(surf)
            if pre_block:
                pieces.append(_render_block(pre_block))
        elif event.head_token < idx <= event.head.span.end:
            surf = tokens[idx - 1].surface
            words.append(surf)
            pieces.append(surf)
        elif idx in plan.entity_at:
            mention = plan.entity_at[idx]
            relation = REL_RESULT if mention.role == "Result" \
                else REL_PARTICIPANT
            text = _entity_text(mention, relation, event, art, cfg)
            words.append(text)
            pieces.append(text)
            key = _inline_key(mention, relation, cfg)
            inline.append((key, event.head_lemma))
            pieces.append(_render_block([(key, event.head_lemma)]))
        elif idx in plan.entity_skip:
            pass
        else:
            surf = tokens[idx - 1].surface
            words.append(surf)
            pieces.append(surf)
    return MrpEvent(head=tokens[event.head_token - 1].surface,
                    pre_block=pre_block, inline_tags=inline,
                    text=detok(words)), detok(pieces)


def to_mrp_event(event: Event, art: DocumentArtifacts,
                 cfg: DpConfig | None = None) -> MrpEvent:
    mrp_event, _ = _mrp_event_and_text(event, art, cfg or DpConfig())
    return mrp_event


def emit_mrp(event: Event, art: DocumentArtifacts,
             cfg: DpConfig | None = None) -> str:
    """Machine-readable paraphrase of one event (see docs/mrp.md)."""
    _, text = _mrp_event_and_text(event, art, cfg or DpConfig())
    return text


def parse_mrp(text: str) -> MrpParse:
    """Parse MRP text back into events; malformed blocks are skipped.

    Never raises: imperfect generator output is reported through the
    diagnostics list so that it can still be scored.
    """
    diagnostics: list[str] = []
    items: list[tuple[str, object]] = []  # ("word", str) | ("block", pairs, kind)
    i = 0
    n = len(text)
    while i < n:
        brace = text.find("{", i)
        if brace == -1:
            items.extend(("word", w) for w in text[i:].split())
            break
        items.extend(("word", w) for w in text[i:brace].split())
        close = text.find("}", brace)
        if close == -1:
            diagnostics.append(f"unclosed '{{' at offset {brace}")
            break
        body = text[brace + 1:close]
        pairs = []
        kinds = set()
        for raw in body.split(" # "):
            key, sep, value = raw.partition(":")
            key = key.strip()
            if not sep or not key or " " in key:
                diagnostics.append(f"malformed pair {raw!r}")
                continue
            if key in HEAD_KEYS:
                kinds.add("head")
            elif key in INLINE_KEYS:
                kinds.add("inline")
            else:
                diagnostics.append(f"unknown key {key!r}")
                kinds.add("inline" if key.endswith("_OF") else "head")
            pairs.append((key, value.strip()))
        if not pairs:
            i = close + 1
            continue
        if len(kinds) > 1:
            diagnostics.append("block mixes head and inline keys")
        kind = "head" if "head" in kinds else "inline"
        items.append(("block", (pairs, kind)))
        i = close + 1

    events: list[MrpEvent] = []
    cur: MrpEvent | None = None
    cur_words: list[str] = []
    pending_word: str | None = None

    def start_event(head: str):
        nonlocal cur, cur_words
        flush()
        cur = MrpEvent(head=head)
        cur_words = []

    def flush():
        nonlocal cur
        if cur is not None:
            cur.text = " ".join(cur_words)
            events.append(cur)
        cur = None

    for kind, payload in items:
        if kind == "word":
            if cur is None and pending_word is None:
                pending_word = payload
                continue
            if pending_word is not None:
                if cur is None:
                    start_event(pending_word)
                cur_words.append(pending_word)
                pending_word = None
            cur_words.append(payload)
            continue
        pairs, block_kind = payload
        if block_kind == "head":
            head = pending_word
            if head is None and cur_words:
                # head block not preceded by a fresh word: split here anyway
                head = cur_words[-1]
                prev_words = cur_words[:-1]
                if cur is not None:
                    cur.text = " ".join(prev_words)
                    events.append(cur)
                    cur = None
                cur = MrpEvent(head=head)
                cur_words = [head]
                cur.pre_block = list(pairs)
                continue
            if head is None:
                diagnostics.append("head block without a preceding word")
                start_event("")
            else:
                start_event(head)
                cur_words.append(head)
                pending_word = None
            cur.pre_block = list(pairs)
        else:
            if pending_word is not None:
                if cur is None:
                    start_event(pending_word)
                cur_words.append(pending_word)
                pending_word = None
            if cur is None:
                diagnostics.append("inline block before any text")
                start_event("")
            cur.inline_tags.extend(pairs)
    if pending_word is not None:
        if cur is None:
            start_event(pending_word)
        cur_words.append(pending_word)
    flush()
    return MrpParse(events=events, diagnostics=diagnostics)


# ----------------------------------------------------------------------
# document-level assembly

def _sentence_events(art: DocumentArtifacts, sent_idx: int) -> list[Event]:
    return [e for e in art.events if e.sentence == sent_idx]


def _sentence_punct(doc: Document, sent_idx: int) -> str:
    tokens = doc.sentences[sent_idx - 1].tokens
    if tokens and tokens[-1].upos == "PUNCT":
        return tokens[-1].surface
    return ""


def _sentence_hrp(art: DocumentArtifacts, sent_idx: int, plans, owned,
                  cfg: DpConfig) -> str:
    events = _sentence_events(art, sent_idx)
    tokens = art.doc.sentences[sent_idx - 1].tokens
    if not events:
        return detok([t.surface for t in tokens])
    clauses = [_hrp_clause(plans[e.event_id], owned, art, cfg)
               for e in events]
    text = clauses[0]
    for clause in clauses[1:]:
        text += "; and " + _lower_first(clause)
    return _upper_first(text) + _sentence_punct(art.doc, sent_idx)


def _sentence_mrp(art: DocumentArtifacts, sent_idx: int, plans,
                  cfg: DpConfig) -> str:
    doc = art.doc
    tokens = doc.sentences[sent_idx - 1].tokens
    events = _sentence_events(art, sent_idx)
    head_at = {e.head_token: e for e in events}
    entity_at: dict[int, tuple[EntityMention, list[tuple[Event, str]]]] = {}
    skip: set[int] = set()
    for e in events:
        plan = plans[e.event_id]
        for start, mention in plan.entity_at.items():
            relation = REL_RESULT if mention.role == "Result" \
                else REL_PARTICIPANT
            if start not in entity_at:
                entity_at[start] = (mention, [])
            entity_at[start][1].append((e, relation))
        skip |= plan.entity_skip
    pieces: list[str] = []
    idx = 1
    while idx <= len(tokens):
        if idx in head_at:
            event = head_at[idx]
            pieces.extend(t.surface for t in
                          tokens[idx - 1:event.head.span.end])
            pairs = _head_pairs(event, art, cfg)
            if pairs:
                pieces.append(_render_block(pairs))
            idx = event.head.span.end + 1
            continue
        if idx in entity_at:
            mention, attachments = entity_at[idx]
            event, relation = attachments[0]
            pieces.append(_entity_text(mention, relation, event, art, cfg))
            pairs = [(_inline_key(mention, rel, cfg), ev.head_lemma)
                     for ev, rel in attachments]
            pieces.append(_render_block(pairs))
            idx = mention.span.end + 1
            continue
        if idx in skip:
            idx += 1
            continue
        pieces.append(tokens[idx - 1].surface)
        idx += 1
    return detok(pieces)


def paraphrase_document(doc: Document,
                        cfg: DpConfig | None = None,
                        art: DocumentArtifacts | None = None,
                        window: int = 3) -> DocumentParaphrase:
    """HRP per sentence and MRP per window of at most `window` sentences."""
    cfg = cfg or DpConfig()
    art = art or build_artifacts(doc, cfg.sense_table)
    plans = _plan_events(doc, art.events)
    owned = _owned_tokens(plans)
    hrp = [_sentence_hrp(art, i, plans, owned, cfg)
           for i in range(1, len(doc.sentences) + 1)]
    sentence_mrps = [_sentence_mrp(art, i, plans, cfg)
                     for i in range(1, len(doc.sentences) + 1)]
    mrp = [" ".join(sentence_mrps[i:i + window])
           for i in range(0, len(sentence_mrps), window)]
    return DocumentParaphrase(hrp=hrp, mrp=mrp)
