from pathlib import Path

import pytest

from dpkit.conllu import (
    ConlluError, Document, DocumentError, parse_corpus, write_corpus,
)
from docgen import fixture, fixture_bytes, random_corpus

MINIMAL = """# newdoc id = d1
# title = T
# provenance = p
1\tCut\tcut\tVERB\t_\t_\t0\troot\t_\tEntity=B-EVENT|Frame=CUT
2\tthe\tthe\tDET\t_\t_\t3\tdet\t_\tRole=B-Patient:e_1_1
3\tbroccoli\tbroccoli\tNOUN\t_\t_\t1\tobj\t_\tEntity=B-INGREDIENT|Role=I-Patient:e_1_1

"""


def test_parse_columnar_line():
    doc = parse_corpus(MINIMAL)[0]
    tok = doc.sentences[0].tokens[0]
    assert tok.index == 1
    assert tok.surface == "Cut"
    assert tok.lemma == "cut"
    assert tok.upos == "VERB"
    assert tok.misc == {"Entity": "B-EVENT", "Frame": "CUT"}


def test_empty_input_is_empty_corpus():
    assert parse_corpus(b"") == []
    assert parse_corpus("\n\n") == []
    assert write_corpus([]) == b""


def test_appelkoek_fixture_has_five_sentences():
    doc = fixture("appelkoek.conllu")
    assert len(doc.sentences) == 5
    assert doc.doc_id == "appelkoek"


def test_fixture_files_are_canonical():
    for name in ("appelkoek.conllu", "chop_onions.conllu",
                 "barilla.conllu", "garlic.conllu"):
        data = fixture_bytes(name)
        assert write_corpus(parse_corpus(data)) == data


def test_repo_golden_files_match_packaged_fixtures():
    golden_dir = Path(__file__).parent.parent / "fixtures"
    if not golden_dir.is_dir():
        pytest.skip("repo checkout without the golden directory")
    names = sorted(p.name for p in golden_dir.glob("*.conllu"))
    assert "appelkoek.conllu" in names
    for name in names:
        assert (golden_dir / name).read_bytes() == fixture_bytes(name)


def test_accented_forms_survive_round_trip():
    data = fixture_bytes("chop_onions.conllu")
    doc = parse_corpus(data)[0]
    assert doc.sentences[1].tokens[0].surface == "Sauté"
    assert "Sauté".encode("utf-8") in write_corpus([doc])


def test_round_trip_random_documents():
    corpus = random_corpus(seed=11, n_docs=50)
    data = write_corpus(corpus)
    assert parse_corpus(data) == corpus


def test_write_parse_write_is_idempotent():
    corpus = random_corpus(seed=23, n_docs=20)
    once = write_corpus(corpus)
    assert write_corpus(parse_corpus(once)) == once


@pytest.mark.parametrize("mangle,lineno", [
    (lambda ls: ls.__setitem__(3, ls[3].replace("\t_\t_\t0", "\t_\t0")), 4),
    (lambda ls: ls.__setitem__(3, ls[3].replace("1\tCut", "7\tCut")), 4),
    (lambda ls: ls.__setitem__(4, ls[4] + "|Role=B-X:e"), 5),
    (lambda ls: ls.__setitem__(
        4, ls[4].replace("Role=B-Patient:e_1_1",
                         "Role=B-Patient:e_1_1|Role=x")), 5),
])
def test_parse_errors_carry_exact_line_numbers(mangle, lineno):
    lines = MINIMAL.split("\n")
    mangle(lines)
    with pytest.raises(ConlluError) as exc:
        parse_corpus("\n".join(lines))
    assert exc.value.line == lineno


def test_head_out_of_range_rejected():
    bad = MINIMAL.replace("3\tbroccoli\tbroccoli\tNOUN\t_\t_\t1",
                          "3\tbroccoli\tbroccoli\tNOUN\t_\t_\t9")
    with pytest.raises(DocumentError):
        parse_corpus(bad)


def test_two_roots_rejected():
    bad = MINIMAL.replace("2\tthe\tthe\tDET\t_\t_\t3",
                          "2\tthe\tthe\tDET\t_\t_\t0")
    with pytest.raises(DocumentError):
        parse_corpus(bad)


def test_dangling_reference_names_the_id():
    bad = MINIMAL.rstrip() + "\n# link: h9|participant-of|e_1_1\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "h9" in str(exc.value)


def test_dangling_event_reference():
    bad = MINIMAL.rstrip() + \
        "\n# hidden: h1|knife|TOOL|shadow|e_9_9\n# link: h1|participant-of|e_9_9\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "e_9_9" in str(exc.value)


def test_duplicate_doc_id_rejected():
    with pytest.raises(ConlluError) as exc:
        parse_corpus(MINIMAL + MINIMAL)
    assert "duplicate doc_id" in str(exc.value)


def test_shadow_needs_label():
    bad = MINIMAL.rstrip() + \
        "\n# hidden: h1||TOOL|shadow|e_1_1\n# link: h1|participant-of|e_1_1\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "label" in str(exc.value)


def test_drop_needs_antecedent_chain():
    bad = MINIMAL.rstrip() + \
        "\n# hidden: h1||INGREDIENT|drop|e_1_1\n# link: h1|participant-of|e_1_1\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "antecedent" in str(exc.value)


def test_mention_in_two_chains_rejected():
    bad = MINIMAL.rstrip() + \
        "\n# coref: c1 = m_1_3\n# coref: c2 = m_1_3\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "m_1_3" in str(exc.value)


def test_chain_mixing_types_rejected():
    text = MINIMAL.replace(
        "3\tbroccoli\tbroccoli\tNOUN\t_\t_\t1\tobj\t_\t"
        "Entity=B-INGREDIENT|Role=I-Patient:e_1_1",
        "3\tbroccoli\tbroccoli\tNOUN\t_\t_\t1\tobj\t_\t"
        "Entity=B-INGREDIENT|Role=I-Patient:e_1_1\n"
        "4\tknife\tknife\tNOUN\t_\t_\t1\tobl\t_\tEntity=B-TOOL")
    bad = text.rstrip() + "\n# coref: c1 = m_1_3, m_1_4\n\n"
    with pytest.raises(DocumentError) as exc:
        parse_corpus(bad)
    assert "mixes entity types" in str(exc.value)


def test_empty_document_round_trips():
    doc = Document(doc_id="empty", title="", provenance="x")
    data = write_corpus([doc])
    assert parse_corpus(data) == [doc]


def test_comments_preserved_verbatim():
    doc = parse_corpus(MINIMAL)[0]
    doc.sentences[0].comments.append("# annotator = someone")
    data = write_corpus([doc])
    assert parse_corpus(data)[0] == doc
