"""Coreference chains whose mentions mutate through events.

A chain tracks one underlying entity.  Its timeline folds the document's
events in order: transformations append end-state markers, location
changes move the entity, and result mentions re-base the chain — an
explicit result span composes with the previous head noun ("apples" +
"wedges" gives "apple wedges"), while a free-text hidden result replaces
the description outright and clears accumulated markers (it names a new
preparation, e.g. "appelkoek").
"""

from dataclasses import dataclass, field

from .conllu import (
    Document, HiddenEntityDecl,
    ETYPE_INGREDIENT, REL_PARTICIPANT, REL_RESULT,
    DocumentError,
)
from .events import EXPLICIT, Event, EntityMention, OBJECT_ROLES
from .lex import head_noun, singularize, strip_article
from .states import (
    EntityState, LocationFact, SenseTable, begin_end_states,
)


class CorefError(DocumentError):
    pass


@dataclass
class TimelineEntry:
    event_id: str | None  # None marks the initial state
    state: EntityState


@dataclass
class CorefChain:
    chain_id: str
    etype: str
    mentions: list[tuple[str, str | None]]  # (mention ref, anchor event)
    timeline: list[TimelineEntry]
    declared: bool = True
    pre_states: dict[str, EntityState] = field(default_factory=dict,
                                               compare=False)
    post_states: dict[str, EntityState] = field(default_factory=dict,
                                                compare=False)
    location_facts: list[LocationFact] = field(default_factory=list,
                                               compare=False)

    def refs(self) -> list[str]:
        return [ref for ref, _ in self.mentions]

    def initial_state(self) -> EntityState:
        return self.timeline[0].state

    def current_state(self) -> EntityState:
        return self.timeline[-1].state

    def state_before(self, event_id: str) -> EntityState:
        return self.pre_states.get(event_id, self.current_state())

    def state_after(self, event_id: str) -> EntityState:
        return self.post_states.get(event_id, self.current_state())


@dataclass
class LifespanReport:
    chain_id: str
    events: list[str]
    constituents: list[str]


def _mention_sort_key(mention: EntityMention, events_by_id, attach_order):
    if mention.explicitness == EXPLICIT:
        return (mention.span.sentence, mention.span.start, 0, 0)
    event = events_by_id[attach_order[mention.id][0]]
    return (event.sentence, event.head_token, 1, attach_order[mention.id][1])


def build_chains(doc: Document, events: list[Event],
                 table: SenseTable | None = None) -> list[CorefChain]:
    """Chains per the document's coref declarations plus singletons.

    Every non-event mention lands in exactly one chain.  Timelines are
    computed by folding the subevent engine over each chain's events in
    document order.
    """
    table = table or SenseTable.default()
    events_by_id = {e.event_id: e for e in events}

    from .events import explicit_mentions
    mention_objs: dict[str, EntityMention] = dict(explicit_mentions(doc))
    for decl in doc.hidden_entities:
        mention_objs.setdefault(decl.hid, EntityMention(
            id=decl.hid, etype=decl.etype, label=decl.label,
            explicitness=decl.subtype, role=decl.role))
    attach_order: dict[str, tuple[str, int]] = {}
    for event in events:
        for pos, (mention, rel) in enumerate(event.participants):
            if mention.id not in attach_order:
                mention_objs[mention.id] = mention
                attach_order[mention.id] = (event.event_id, pos)

    assigned: dict[str, str] = {}
    chains: list[CorefChain] = []
    decls = list(doc.coref_decls)
    for decl in decls:
        refs = []
        etype = None
        for ref in decl.mentions:
            if ref in assigned:
                raise CorefError(
                    f"mention {ref} appears in chains {assigned[ref]} "
                    f"and {decl.chain_id}")
            assigned[ref] = decl.chain_id
            mention = mention_objs.get(ref)
            if mention is None:
                raise CorefError(f"chain names unknown mention {ref}")
            if etype is None:
                etype = mention.etype
            elif etype != mention.etype:
                raise CorefError(
                    f"chain {decl.chain_id} mixes entity types {etype} and "
                    f"{mention.etype}")
            refs.append(mention)
        chains.append(_fold_chain(decl.chain_id, etype, refs, events,
                                  events_by_id, attach_order,
                                  table, declared=True))

    for ref, mention in mention_objs.items():
        if ref in assigned:
            continue
        chains.append(_fold_chain(f"c_{ref}", mention.etype, [mention],
                                  events, events_by_id, attach_order,
                                  table, declared=False))
    return chains


def _fold_chain(chain_id, etype, mentions, events, events_by_id,
                attach_order, table, declared) -> CorefChain:
    member_ids = {m.id for m in mentions}
    ordered = sorted(
        mentions,
        key=lambda m: _mention_sort_key(m, events_by_id, attach_order)
        if (m.explicitness == EXPLICIT and m.span is not None)
        or m.id in attach_order
        else (1 << 30, 0, 0, 0))
    first = ordered[0]
    if first.explicitness == "drop":
        anchor = attach_order.get(first.id)
        raise CorefError(
            f"drop entity {first.id} at event "
            f"{anchor[0] if anchor else '?'} has no prior state")
    state = EntityState(base=first.label or first.id)
    timeline = [TimelineEntry(event_id=None, state=state)]
    pre: dict[str, EntityState] = {}
    post: dict[str, EntityState] = {}
    locations: list[LocationFact] = []

    chain_events: list[tuple[Event, list[tuple[EntityMention, str]]]] = []
    seen = set()
    for event in events:
        hits = [(m, rel) for m, rel in event.participants
                if m.id in member_ids]
        if hits and event.event_id not in seen:
            seen.add(event.event_id)
            chain_events.append((event, hits))

    for event, hits in chain_events:
        pre[event.event_id] = state
        results = [m for m, rel in hits if rel == REL_RESULT]
        objectish = [m for m, rel in hits
                     if rel == REL_PARTICIPANT
                     and (m.role is None or m.role in OBJECT_ROLES)]
        changed = False
        if results:
            rebased = _rebase(state, results[0])
            if rebased != state:
                state = rebased
                changed = True
        elif objectish:
            _, end = begin_end_states(event, state, table)
            if end != state:
                if end.location is not None and \
                        end.location != state.location:
                    locations.append(LocationFact(
                        entity=chain_id, habitat=end.location,
                        effective_from=event.event_id))
                state = end
                changed = True
        post[event.event_id] = state
        if changed:
            timeline.append(TimelineEntry(event_id=event.event_id,
                                          state=state))

    mention_pairs = []
    for m in ordered:
        anchor = attach_order.get(m.id)
        mention_pairs.append((m.id, anchor[0] if anchor else None))
    return CorefChain(chain_id=chain_id, etype=etype,
                      mentions=mention_pairs, timeline=timeline,
                      declared=declared, pre_states=pre, post_states=post,
                      location_facts=locations)


def _rebase(state: EntityState, result: EntityMention) -> EntityState:
    """New chain state after an event produced `result` into the chain."""
    if result.explicitness == EXPLICIT:
        label = result.label
        old_head = head_noun(state.base)
        words = {w.lower() for w in label.split()}
        if old_head and old_head not in {singularize(w) for w in words}:
            label = f"{singularize(strip_article(state.base).split()[-1])} " \
                    f"{label}"
        return EntityState(base=label, applied_states=state.applied_states,
                           location=state.location)
    # free-text hidden result: a fresh description, markers reset
    return EntityState(base=result.label or state.render(),
                       location=state.location)


def chain_index(chains: list[CorefChain]) -> dict[str, CorefChain]:
    idx = {}
    for chain in chains:
        for ref in chain.refs():
            idx[ref] = chain
    return idx


@dataclass
class DocumentArtifacts:
    """Everything the emitters need for one document."""

    doc: Document
    events: list[Event]
    chains: list[CorefChain]
    by_ref: dict[str, CorefChain]


def build_artifacts(doc: Document,
                    table: SenseTable | None = None) -> DocumentArtifacts:
    from .events import build_events
    table = table or SenseTable.default()
    events = build_events(doc)
    chains = build_chains(doc, events, table)
    return DocumentArtifacts(doc=doc, events=events, chains=chains,
                             by_ref=chain_index(chains))


def resolve_drop(entity: HiddenEntityDecl | EntityMention,
                 chains: list[CorefChain]) -> EntityState:
    """State of a drop argument's chain as of its anchor event."""
    if isinstance(entity, HiddenEntityDecl):
        ref, anchor = entity.hid, entity.anchor_event
    else:
        ref, anchor = entity.id, None
    idx = chain_index(chains)
    chain = idx.get(ref)
    if chain is None:
        raise CorefError(f"drop entity {ref} is not a chain member")
    if anchor is None:
        anchor = dict(chain.mentions).get(ref)
    if chain.mentions and chain.mentions[0][0] == ref:
        raise CorefError(
            f"drop entity {ref} at event {anchor} has no prior state")
    if anchor is None:
        return chain.current_state()
    return chain.state_before(anchor)


def lifespan(chain: CorefChain, events: list[Event],
             chains: list[CorefChain] | None = None) -> LifespanReport:
    """Events touching the chain plus the ingredients folded into it.

    Constituents are the distinct ingredient participants of every event
    that produced a result into this chain, each rendered at its own
    chain's initial state and deduplicated by chain.
    """
    member_ids = {ref for ref, _ in chain.mentions}
    idx = chain_index(chains) if chains else {}
    touched: list[str] = []
    constituents: list[str] = []
    counted: set[str] = set()

    result_events = []
    for event in events:
        if any(m.id in member_ids for m, _ in event.participants):
            touched.append(event.event_id)
        if any(m.id in member_ids and rel == REL_RESULT
               for m, rel in event.participants):
            result_events.append(event)

    for event in result_events:
        for m, rel in event.participants:
            if rel != REL_PARTICIPANT or m.etype != ETYPE_INGREDIENT:
                continue
            source = idx.get(m.id)
            if m.id in member_ids:
                source = chain
            key = source.chain_id if source else m.id
            if key in counted:
                continue
            counted.add(key)
            if source is not None:
                label = source.initial_state().render()
            else:
                label = strip_article(m.label) if m.label else m.id
            if label not in constituents:
                constituents.append(label)
    if not constituents:
        constituents = [chain.initial_state().render()]
    return LifespanReport(chain_id=chain.chain_id, events=touched,
                          constituents=constituents)
