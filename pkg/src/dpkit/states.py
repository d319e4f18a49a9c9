"""End-state classification and begin/end entity redescription.

Events fall into three end-state classes: a transformation rewrites the
entity description (``chop`` turns *onions* into *chopped onions*), a
location change moves the entity without touching its description, and
everything else leaves the state alone.  Classes come from a verb-sense
table; unknown senses are never an error and classify as Neither.
"""

import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from .conllu import ETYPE_HABITAT, REL_PARTICIPANT
from .events import Event
from .lex import _parse_tsv, participle


class EndStateClass(Enum):
    TRANSFORMATION = "Transformation"
    LOCATION_CHANGE = "LocationChange"
    NEITHER = "Neither"


_CATEGORY = {
    "TRANSFORMATION": EndStateClass.TRANSFORMATION,
    "LOCATION_CHANGE": EndStateClass.LOCATION_CHANGE,
    "NONE": EndStateClass.NEITHER,
}
_CATEGORY_NAME = {v: k for k, v in _CATEGORY.items()}


class StateWarning(UserWarning):
    pass


@dataclass
class SenseTable:
    entries: dict[str, EndStateClass] = field(default_factory=dict)
    source: str = "embedded-default"

    @classmethod
    def default(cls) -> "SenseTable":
        text = resources.files("dpkit.data").joinpath(
            "sense_table.tsv").read_text("utf-8")
        return cls(entries=_parse_entries(text))

    @classmethod
    def from_tsv(cls, path: str | Path) -> "SenseTable":
        return cls(entries=_parse_entries(Path(path).read_text("utf-8")),
                   source=str(path))

    def classify(self, sense: str) -> EndStateClass:
        return self.entries.get(sense, EndStateClass.NEITHER)


def _parse_entries(text: str) -> dict[str, EndStateClass]:
    out = {}
    for sense, category in _parse_tsv(text).items():
        if category not in _CATEGORY:
            raise ValueError(f"bad end-state category {category!r} "
                             f"for sense {sense!r}")
        out[sense] = _CATEGORY[category]
    return out


def classify_end_state(frame: str, table: SenseTable) -> EndStateClass:
    return table.classify(frame)


@dataclass(frozen=True)
class EntityState:
    """A noun phrase plus its accumulated end-state markers.

    Rendering puts the latest marker outermost: base "garlic" with
    applied_states ("peeled", "minced") renders as "minced peeled garlic".
    """

    base: str
    applied_states: tuple[str, ...] = ()
    location: str | None = None

    def render(self, max_states: int | None = None) -> str:
        sts = self.applied_states
        if max_states is not None:
            sts = sts[len(sts) - max_states:] if max_states > 0 else ()
        parts = list(reversed(sts)) + [self.base]
        return " ".join(parts)


@dataclass(frozen=True)
class LocationFact:
    entity: str  # chain id
    habitat: str
    effective_from: str  # event id


def truncate_states(state: EntityState, k: int) -> EntityState:
    """Keep only the k most recent end-state markers."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k >= len(state.applied_states):
        return state
    kept = state.applied_states[len(state.applied_states) - k:] if k else ()
    return replace(state, applied_states=kept)


def _append_marker(state: EntityState, marker: str) -> EntityState:
    if state.applied_states and state.applied_states[-1] == marker:
        return state
    return replace(state, applied_states=state.applied_states + (marker,))


def destination_habitat(event: Event) -> str | None:
    habitats = [m for m, rel in event.participants
                if rel == REL_PARTICIPANT and m.etype == ETYPE_HABITAT]
    for m in habitats:
        if m.role == "Destination":
            return m.label
    return habitats[0].label if habitats else None


def begin_end_states(event: Event, state_in: EntityState,
                     table: SenseTable | None = None,
                     ) -> tuple[EntityState, EntityState]:
    """Begin and end redescriptions of an entity passing through an event.

    A transformation appends the head verb's participle to the end state;
    the begin state carries an "un" prefix on that marker for rendering
    only.  A location change leaves the description alone and points the
    end state at the event's destination habitat.
    """
    table = table or SenseTable.default()
    cls = classify_end_state(event.frame, table)
    if cls is EndStateClass.TRANSFORMATION:
        marker = participle(event.head_lemma)
        begin = _append_marker(state_in, "un" + marker)
        end = _append_marker(state_in, marker)
        return begin, end
    if cls is EndStateClass.LOCATION_CHANGE:
        dest = destination_habitat(event)
        if dest is None:
            warnings.warn(
                f"location-change event {event.event_id} has no habitat "
                f"participant; location kept", StateWarning, stacklevel=2)
            return state_in, state_in
        return state_in, replace(state_in, location=dest)
    return state_in, state_in


def category_name(cls: EndStateClass) -> str:
    return _CATEGORY_NAME[cls]
