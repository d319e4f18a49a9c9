"""Align entity annotations with role spans and build saturated events.

Within a sentence, entity spans and role spans that share an event
predicate are aligned: a role whose span overlaps an entity span is
*claimed* and merged onto that entity, unclaimed roles become event
modifiers, and hidden entities are attached afterwards through the
document's event links.
"""

from dataclasses import dataclass, field, replace

from .conllu import (
    Document, RoleSpan, Span,
    ETYPE_EVENT, ETYPE_HABITAT, ETYPE_INGREDIENT, ETYPE_TOOL,
    REL_PARTICIPANT, REL_RESULT,
    DocumentError, entity_spans, event_ref, mention_ref, role_spans,
    span_label,
)

# Object-like roles: the participants events actually act on.
OBJECT_ROLES = ("Theme", "Co-Theme", "Patient", "Co-Patient")
MAIN_ROLES = ("Theme", "Patient")
ATTACHED_ROLES = ("Co-Theme", "Co-Patient")

# Default role per entity type and relation, applied to hidden entities
# that carry no explicit role.
_DEFAULT_ROLE = {
    (ETYPE_TOOL, REL_PARTICIPANT): "Instrument",
    (ETYPE_HABITAT, REL_PARTICIPANT): "Location",
    (ETYPE_INGREDIENT, REL_PARTICIPANT): "Theme",
    (ETYPE_TOOL, REL_RESULT): "Result",
    (ETYPE_HABITAT, REL_RESULT): "Result",
    (ETYPE_INGREDIENT, REL_RESULT): "Result",
}

EXPLICIT = "explicit"


class AssemblyError(DocumentError):
    pass


@dataclass
class EntityMention:
    id: str
    etype: str
    label: str
    explicitness: str = EXPLICIT  # explicit | drop | shadow
    span: Span | None = None
    role: str | None = None


@dataclass
class Modifier:
    role: str
    sentence: int
    start: int
    end: int
    text: str


@dataclass
class RoleAlignment:
    entity: str | None
    role: str
    event: str
    disposition: str  # claimed | unclaimed
    span: RoleSpan


@dataclass
class Event:
    event_id: str
    head: EntityMention
    frame: str
    sentence: int
    head_token: int
    head_lemma: str
    participants: list[tuple[EntityMention, str]] = field(default_factory=list)
    modifiers: list[Modifier] = field(default_factory=list)

    def results(self) -> list[EntityMention]:
        return [m for m, rel in self.participants if rel == REL_RESULT]

    def participants_of(self, etype: str | None = None,
                        relation: str = REL_PARTICIPANT) -> list[EntityMention]:
        return [m for m, rel in self.participants
                if rel == relation and (etype is None or m.etype == etype)]

    def object_participants(self) -> list[EntityMention]:
        return [m for m, rel in self.participants
                if rel == REL_PARTICIPANT and m.etype == ETYPE_INGREDIENT
                and (m.role is None or m.role in OBJECT_ROLES)]


def explicit_mentions(doc: Document) -> dict[str, EntityMention]:
    """All non-event entity spans keyed by their derived mention id."""
    out: dict[str, EntityMention] = {}
    for i, sent in enumerate(doc.sentences, 1):
        for span in entity_spans(sent, i):
            if span.etype == ETYPE_EVENT:
                continue
            mid = mention_ref(span.sentence, span.start)
            out[mid] = EntityMention(id=mid, etype=span.etype,
                                     label=span_label(doc, span), span=span)
    return out


def role_alignments(doc: Document) -> list[RoleAlignment]:
    """Claim decision for every role span in the document."""
    alignments = []
    for i, sent in enumerate(doc.sentences, 1):
        spans = [s for s in entity_spans(sent, i) if s.etype != ETYPE_EVENT]
        for rs in role_spans(sent, i):
            claimed = None
            for span in spans:
                if span.start <= rs.end and rs.start <= span.end:
                    claimed = span
                    break
            if claimed is not None:
                alignments.append(RoleAlignment(
                    entity=mention_ref(claimed.sentence, claimed.start),
                    role=rs.label, event=rs.event, disposition="claimed",
                    span=rs))
            else:
                alignments.append(RoleAlignment(
                    entity=None, role=rs.label, event=rs.event,
                    disposition="unclaimed", span=rs))
    return alignments


def assemble_events(doc: Document) -> list[Event]:
    """Build one event per EVENT-HEAD span from the explicit layers only."""
    events: dict[str, Event] = {}
    for i, sent in enumerate(doc.sentences, 1):
        for span in entity_spans(sent, i):
            if span.etype != ETYPE_EVENT:
                continue
            eid = event_ref(span.sentence, span.start)
            head_tok = sent.tokens[span.start - 1]
            head = EntityMention(id=eid, etype=ETYPE_EVENT,
                                 label=span_label(doc, span), span=span)
            events[eid] = Event(
                event_id=eid, head=head,
                frame=head_tok.misc.get("Frame", ""),
                sentence=i, head_token=span.start,
                head_lemma=head_tok.lemma)

    mentions = explicit_mentions(doc)
    claimed_roles: dict[tuple[str, str], RoleAlignment] = {}
    for al in role_alignments(doc):
        event = events.get(al.event)
        if event is None:
            raise AssemblyError(f"role span names unknown event {al.event}")
        if al.disposition == "claimed":
            key = (al.event, al.entity)
            if key in claimed_roles:
                # a second role span on the same entity keeps the first merge
                continue
            claimed_roles[key] = al
        else:
            sent = doc.sentences[al.span.sentence - 1]
            text = " ".join(t.surface for t in
                            sent.tokens[al.span.start - 1:al.span.end])
            event.modifiers.append(Modifier(
                role=al.role, sentence=al.span.sentence,
                start=al.span.start, end=al.span.end, text=text))

    for (eid, mid), al in sorted(
            claimed_roles.items(),
            key=lambda kv: (kv[1].span.sentence, kv[1].span.start)):
        mention = replace(mentions[mid], role=al.role)
        relation = REL_RESULT if al.role == "Result" else REL_PARTICIPANT
        events[eid].participants.append((mention, relation))

    ordered = sorted(events.values(), key=lambda e: (e.sentence, e.head_token))
    for event in ordered:
        _check_single_result(event)
    return ordered


def saturate_hidden(doc: Document, events: list[Event]) -> list[Event]:
    """Attach hidden entities and cross-sentence links to their events.

    Returns new Event objects; the input list is left untouched.  Drop
    entities must have an antecedent in their chain, i.e. they may not be
    the first mention (their rendered label is resolved later against the
    chain state, see the coref module).
    """
    decls = {d.hid: d for d in doc.hidden_entities}
    mentions = explicit_mentions(doc)
    chain_position: dict[str, int] = {}
    for decl_chain in doc.coref_decls:
        for pos, ref in enumerate(decl_chain.mentions):
            chain_position[ref] = pos

    out = [replace(e, participants=list(e.participants),
                   modifiers=list(e.modifiers)) for e in events]
    by_id = {e.event_id: e for e in out}
    for link in doc.event_links:
        event = by_id.get(link.event)
        if event is None:
            raise AssemblyError(
                f"entity {link.entity} linked to nonexistent event "
                f"{link.event}")
        if link.entity in decls:
            decl = decls[link.entity]
            if decl.subtype == "drop" and link.entity not in chain_position:
                raise AssemblyError(
                    f"drop entity {decl.hid} names no antecedent chain")
            role = decl.role or _DEFAULT_ROLE[(decl.etype, link.relation)]
            mention = EntityMention(id=decl.hid, etype=decl.etype,
                                    label=decl.label,
                                    explicitness=decl.subtype, role=role)
        else:
            src = mentions.get(link.entity)
            if src is None:
                raise AssemblyError(
                    f"link names unknown entity {link.entity}")
            mention = replace(src)
        event.participants.append((mention, link.relation))
    for event in out:
        _check_single_result(event)
    return out


def _check_single_result(event: Event) -> None:
    results = [m for m in event.results() if m.etype == ETYPE_INGREDIENT]
    if len(results) > 1:
        ids = ", ".join(m.id for m in results)
        raise AssemblyError(
            f"event {event.event_id} has more than one result-of "
            f"ingredient: {ids}")


def build_events(doc: Document) -> list[Event]:
    """Assembly plus hidden-argument saturation in one call."""
    return saturate_hidden(doc, assemble_events(doc))
