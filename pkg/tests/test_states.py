import pytest

from dpkit.coref import build_artifacts
from dpkit.lex import gerund, participle, singularize
from dpkit.states import (
    EndStateClass, EntityState, SenseTable, StateWarning,
    begin_end_states, classify_end_state, truncate_states,
)
from docgen import fixture

TABLE = SenseTable.default()


@pytest.mark.parametrize("sense,expected", [
    ("CONVERT", EndStateClass.TRANSFORMATION),
    ("SPILL_POUR", EndStateClass.LOCATION_CHANGE),
    ("AMELIORATE", EndStateClass.NEITHER),
])
def test_default_table_classification(sense, expected):
    assert classify_end_state(sense, TABLE) is expected


def test_unknown_sense_is_neither_never_an_error():
    for sense in ("", "NO_SUCH_SENSE", "cut", "👩‍🍳"):
        assert classify_end_state(sense, TABLE) is EndStateClass.NEITHER


@pytest.mark.parametrize("lemma,expected", [
    ("chop", "chopped"),
    ("cut", "cut"),
    ("sauté", "sautéed"),
    ("saute", "sauted"),
    ("bake", "baked"),
    ("mince", "minced"),
    ("fry", "fried"),
    ("spray", "sprayed"),
    ("simmer", "simmered"),
    ("stir", "stirred"),
    ("beat", "beaten"),
    ("whisk", "whisked"),
])
def test_participle(lemma, expected):
    assert participle(lemma) == expected


@pytest.mark.parametrize("lemma,expected", [
    ("chop", "chopping"),
    ("sprinkle", "sprinkling"),
    ("bake", "baking"),
    ("sauté", "sautéing"),
    ("tie", "tying"),
    ("combine", "combining"),
])
def test_gerund(lemma, expected):
    assert gerund(lemma) == expected


@pytest.mark.parametrize("noun,expected", [
    ("apples", "apple"), ("wedges", "wedge"), ("dishes", "dish"),
    ("glass", "glass"), ("batter", "batter"), ("berries", "berry"),
])
def test_singularize(noun, expected):
    assert singularize(noun) == expected


def _chop_saute_events():
    art = build_artifacts(fixture("chop_onions.conllu"))
    return art.events


def test_begin_end_states_transformation_chain():
    chop, saute = _chop_saute_events()
    onions = EntityState(base="onions")
    begin1, end1 = begin_end_states(chop, onions, TABLE)
    assert begin1.render() == "unchopped onions"
    assert end1.render() == "chopped onions"
    begin2, end2 = begin_end_states(saute, end1, TABLE)
    assert begin2.render() == "unsautéed chopped onions"
    assert end2.render() == "sautéed chopped onions"


def test_begin_end_states_location_change():
    art = build_artifacts(fixture("hot_pan.conllu"))
    add = [e for e in art.events if e.event_id == "e_2_1"][0]
    state = EntityState(base="onions", applied_states=("chopped",))
    begin, end = begin_end_states(add, state, TABLE)
    assert begin == state
    assert end.render() == "chopped onions"
    assert end.location == "hot pan"


def test_location_change_without_habitat_warns():
    art = build_artifacts(fixture("hot_pan.conllu"))
    add = [e for e in art.events if e.event_id == "e_2_1"][0]
    add = type(add)(event_id=add.event_id, head=add.head, frame=add.frame,
                    sentence=add.sentence, head_token=add.head_token,
                    head_lemma=add.head_lemma,
                    participants=[(m, rel) for m, rel in add.participants
                                  if m.etype != "HABITAT"],
                    modifiers=add.modifiers)
    state = EntityState(base="onions", location="board")
    with pytest.warns(StateWarning):
        _, end = begin_end_states(add, state, TABLE)
    assert end.location == "board"


def test_neither_is_identity():
    art = build_artifacts(fixture("appelkoek.conllu"))
    press = [e for e in art.events if e.event_id == "e_2_1"][0]
    state = EntityState(base="apple wedges", applied_states=("peeled",))
    assert begin_end_states(press, state, TABLE) == (state, state)


def test_transformation_never_touches_location():
    chop, _ = _chop_saute_events()
    state = EntityState(base="onions", location="board")
    _, end = begin_end_states(chop, state, TABLE)
    assert end.location == "board"
    assert end.applied_states == ("chopped",)


def test_chainability_is_order_sensitive():
    chop, saute = _chop_saute_events()
    state = EntityState(base="onions")
    for event in (chop, saute, chop):
        _, state = begin_end_states(event, state, TABLE)
    # chop after sauté re-applies; adjacent duplicates are the only merge
    assert state.render() == "chopped sautéed chopped onions"
    other = EntityState(base="onions")
    for event in (saute, chop):
        _, other = begin_end_states(event, other, TABLE)
    assert other.render() == "chopped sautéed onions"


def test_begin_rendering_continues_previous_end():
    chop, saute = _chop_saute_events()
    _, end1 = begin_end_states(chop, EntityState(base="onions"), TABLE)
    begin2, _ = begin_end_states(saute, end1, TABLE)
    marker = "un" + participle(saute.head_lemma)
    assert begin2.render() == f"{marker} {end1.render()}"


@pytest.mark.parametrize("k,expected", [
    (0, "garlic"),
    (1, "sauted garlic"),
    (2, "sauted minced garlic"),
    (3, "sauted minced peeled garlic"),
    (9, "sauted minced peeled garlic"),
])
def test_truncate_states(k, expected):
    state = EntityState(base="garlic",
                        applied_states=("peeled", "minced", "sauted"))
    assert truncate_states(state, k).render() == expected


def test_truncate_negative_rejected():
    with pytest.raises(ValueError):
        truncate_states(EntityState(base="x"), -1)


def test_sense_table_tsv_round_trip(tmp_path):
    path = tmp_path / "senses.tsv"
    path.write_text("SENSE\tCATEGORY\nZAP\tTRANSFORMATION\n", "utf-8")
    table = SenseTable.from_tsv(path)
    assert classify_end_state("ZAP", table) is EndStateClass.TRANSFORMATION
    assert classify_end_state("CONVERT", table) is EndStateClass.NEITHER
