"""Reader/writer for the toolkit's extended CoNLL-U dialect.

The dialect is standard 10-column CoNLL-U with three extensions, fully
documented in docs/format.md:

* entity, role and frame layers ride in the MISC column
  (``Entity=B-TOOL``, ``Role=B-Patient:e_1_3``, ``Frame=CUT``);
* hidden entities, event links and coreference chains are document-level
  comment lines (``# hidden:``, ``# link:``, ``# coref:``);
* every document opens with ``# newdoc id =`` plus ``# title =`` and
  ``# provenance =`` header lines.

Mention and event identifiers are derived from spans (``m_<sent>_<tok>``
for entity mentions, ``e_<sent>_<tok>`` for events), so files carry no id
bookkeeping.  Hidden entities use explicit ``h``-prefixed ids declared in
``# hidden:`` lines.

The XPOS, FEATS and DEPS columns are restricted to ``_`` so that a parsed
corpus can be re-serialized byte-exactly.
"""

import re
from dataclasses import dataclass, field

ETYPE_EVENT = "EVENT-HEAD"
ETYPE_TOOL = "TOOL"
ETYPE_HABITAT = "HABITAT"
ETYPE_INGREDIENT = "INGREDIENT"
ENTITY_TYPES = (ETYPE_EVENT, ETYPE_TOOL, ETYPE_HABITAT, ETYPE_INGREDIENT)

# BIO tags in the file use the short EVENT tag for EVENT-HEAD mentions.
_TAG_TO_ETYPE = {
    "EVENT": ETYPE_EVENT,
    "TOOL": ETYPE_TOOL,
    "HABITAT": ETYPE_HABITAT,
    "INGREDIENT": ETYPE_INGREDIENT,
}
_ETYPE_TO_TAG = {v: k for k, v in _TAG_TO_ETYPE.items()}

REL_PARTICIPANT = "participant-of"
REL_RESULT = "result-of"
RELATIONS = (REL_PARTICIPANT, REL_RESULT)

SUBTYPE_DROP = "drop"
SUBTYPE_SHADOW = "shadow"

HIDDEN_ETYPES = (ETYPE_TOOL, ETYPE_HABITAT, ETYPE_INGREDIENT)

# Characters that would break the pipe/brace-delimited surfaces downstream.
_LABEL_BAD = re.compile(r"[|\t\n{}#]")

_MENTION_RE = re.compile(r"m_(\d+)_(\d+)$")
_EVENT_RE = re.compile(r"e_(\d+)_(\d+)$")
_HIDDEN_RE = re.compile(r"h[A-Za-z0-9_]*$")
_ROLE_ENTRY_RE = re.compile(r"(B|I)-([A-Za-z0-9-]+):(e_\d+_\d+)$")


class ConlluError(ValueError):
    """Malformed input line; carries the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DocumentError(ValueError):
    """Semantic violation (dangling reference, invariant breach)."""


@dataclass
class Token:
    index: int
    surface: str
    lemma: str
    upos: str
    head: int
    deprel: str
    misc: dict[str, str] = field(default_factory=dict)


@dataclass
class Sentence:
    tokens: list[Token] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)


@dataclass
class HiddenEntityDecl:
    hid: str
    label: str
    etype: str
    subtype: str  # drop | shadow
    anchor_event: str
    role: str | None = None


@dataclass
class EventLink:
    entity: str
    relation: str
    event: str


@dataclass
class CorefDecl:
    chain_id: str
    mentions: list[str] = field(default_factory=list)


@dataclass
class Document:
    doc_id: str
    title: str = ""
    provenance: str = ""
    sentences: list[Sentence] = field(default_factory=list)
    hidden_entities: list[HiddenEntityDecl] = field(default_factory=list)
    event_links: list[EventLink] = field(default_factory=list)
    coref_decls: list[CorefDecl] = field(default_factory=list)


Corpus = list[Document]


def mention_ref(sent_idx: int, tok_idx: int) -> str:
    return f"m_{sent_idx}_{tok_idx}"


def event_ref(sent_idx: int, tok_idx: int) -> str:
    return f"e_{sent_idx}_{tok_idx}"


@dataclass(frozen=True)
class Span:
    """Contiguous entity span; start/end are 1-based inclusive token indices."""

    sentence: int
    start: int
    end: int
    etype: str


@dataclass(frozen=True)
class RoleSpan:
    """Contiguous semantic-role span attributed to one event."""

    sentence: int
    start: int
    end: int
    label: str
    event: str


def entity_spans(sentence: Sentence, sent_idx: int) -> list[Span]:
    """Decode the Entity BIO layer of one sentence into spans."""
    spans = []
    open_span = None  # [start, end, etype]
    for tok in sentence.tokens:
        tag = tok.misc.get("Entity")
        if tag is None:
            if open_span:
                spans.append(Span(sent_idx, *open_span))
                open_span = None
            continue
        if "-" not in tag:
            raise DocumentError(
                f"sentence {sent_idx} token {tok.index}: bad Entity tag {tag!r}")
        mark, _, name = tag.partition("-")
        etype = _TAG_TO_ETYPE.get(name)
        if mark not in ("B", "I") or etype is None:
            raise DocumentError(
                f"sentence {sent_idx} token {tok.index}: bad Entity tag {tag!r}")
        if mark == "B":
            if open_span:
                spans.append(Span(sent_idx, *open_span))
            open_span = [tok.index, tok.index, etype]
        else:
            if not open_span or open_span[2] != etype or open_span[1] != tok.index - 1:
                raise DocumentError(
                    f"sentence {sent_idx} token {tok.index}: I-{name} does not "
                    f"continue a span")
            open_span[1] = tok.index
    if open_span:
        spans.append(Span(sent_idx, *open_span))
    return spans


def role_spans(sentence: Sentence, sent_idx: int) -> list[RoleSpan]:
    """Decode the Role BIO layer; every tag names its governing event."""
    # Per event: ordered list of (token index, mark, label).
    per_event: dict[str, list[tuple[int, str, str]]] = {}
    order: list[str] = []
    for tok in sentence.tokens:
        raw = tok.misc.get("Role")
        if raw is None:
            continue
        seen_events = set()
        for entry in raw.split(","):
            m = _ROLE_ENTRY_RE.match(entry)
            if not m:
                raise DocumentError(
                    f"sentence {sent_idx} token {tok.index}: bad Role entry "
                    f"{entry!r}")
            mark, label, ev = m.groups()
            if ev in seen_events:
                raise DocumentError(
                    f"sentence {sent_idx} token {tok.index}: two Role tags for "
                    f"event {ev}")
            seen_events.add(ev)
            if ev not in per_event:
                per_event[ev] = []
                order.append(ev)
            per_event[ev].append((tok.index, mark, label))
    spans = []
    for ev in order:
        open_span = None  # [start, end, label]
        for idx, mark, label in per_event[ev]:
            if mark == "B":
                if open_span:
                    spans.append(RoleSpan(sent_idx, open_span[0], open_span[1],
                                          open_span[2], ev))
                open_span = [idx, idx, label]
            else:
                if (not open_span or open_span[2] != label
                        or open_span[1] != idx - 1):
                    raise DocumentError(
                        f"sentence {sent_idx} token {idx}: I-{label}:{ev} does "
                        f"not continue a span")
                open_span[1] = idx
        if open_span:
            spans.append(RoleSpan(sent_idx, open_span[0], open_span[1],
                                  open_span[2], ev))
    spans.sort(key=lambda s: (s.start, s.end, s.event))
    return spans


def span_label(doc: Document, span: Span) -> str:
    toks = doc.sentences[span.sentence - 1].tokens
    return " ".join(t.surface for t in toks[span.start - 1:span.end])


def document_spans(doc: Document) -> list[Span]:
    out = []
    for i, sent in enumerate(doc.sentences, 1):
        out.extend(entity_spans(sent, i))
    return out


def validate_document(doc: Document) -> None:
    """Check every Document invariant; raise DocumentError on breach."""
    if not doc.doc_id:
        raise DocumentError("document has no id")
    spans = []
    for i, sent in enumerate(doc.sentences, 1):
        if not sent.tokens:
            raise DocumentError(f"sentence {i} of {doc.doc_id} has no tokens")
        roots = 0
        n = len(sent.tokens)
        for pos, tok in enumerate(sent.tokens, 1):
            if tok.index != pos:
                raise DocumentError(
                    f"sentence {i}: token index {tok.index} breaks 1..n order")
            if not 0 <= tok.head <= n:
                raise DocumentError(
                    f"sentence {i} token {pos}: head {tok.head} out of range")
            if tok.head == 0:
                roots += 1
        if roots != 1:
            raise DocumentError(
                f"sentence {i} of {doc.doc_id} has {roots} root tokens")
        spans.extend(entity_spans(sent, i))

    mention_ids = {mention_ref(s.sentence, s.start)
                   for s in spans if s.etype != ETYPE_EVENT}
    event_ids = {event_ref(s.sentence, s.start)
                 for s in spans if s.etype == ETYPE_EVENT}

    for i, sent in enumerate(doc.sentences, 1):
        for rs in role_spans(sent, i):
            if rs.event not in event_ids:
                raise DocumentError(
                    f"role span {rs.label} in sentence {i} names unknown "
                    f"event {rs.event}")

    hidden_ids = set()
    for decl in doc.hidden_entities:
        if not _HIDDEN_RE.match(decl.hid):
            raise DocumentError(f"bad hidden entity id {decl.hid!r}")
        if decl.hid in hidden_ids:
            raise DocumentError(f"duplicate hidden entity id {decl.hid}")
        hidden_ids.add(decl.hid)
        if decl.etype not in HIDDEN_ETYPES:
            raise DocumentError(
                f"hidden entity {decl.hid}: etype must be one of "
                f"{HIDDEN_ETYPES}, got {decl.etype!r}")
        if decl.subtype not in (SUBTYPE_DROP, SUBTYPE_SHADOW):
            raise DocumentError(
                f"hidden entity {decl.hid}: bad subtype {decl.subtype!r}")
        if decl.subtype == SUBTYPE_SHADOW and not decl.label:
            raise DocumentError(
                f"shadow entity {decl.hid} must carry a free-text label")
        if decl.label and _LABEL_BAD.search(decl.label):
            raise DocumentError(
                f"hidden entity {decl.hid}: label contains a reserved "
                f"character")
        if decl.anchor_event not in event_ids:
            raise DocumentError(
                f"hidden entity {decl.hid} anchored to unknown event "
                f"{decl.anchor_event}")

    linked = set()
    seen_links = set()
    for link in doc.event_links:
        if link.relation not in RELATIONS:
            raise DocumentError(f"bad relation {link.relation!r} in link")
        if link.event not in event_ids:
            raise DocumentError(f"link names unknown event {link.event}")
        if link.entity in hidden_ids:
            linked.add(link.entity)
        elif link.entity not in mention_ids:
            raise DocumentError(f"link names unknown entity {link.entity}")
        key = (link.entity, link.relation, link.event)
        if key in seen_links:
            raise DocumentError(
                f"duplicate link {link.entity}|{link.relation}|{link.event}")
        seen_links.add(key)
    for decl in doc.hidden_entities:
        if decl.hid not in linked:
            raise DocumentError(
                f"hidden entity {decl.hid} has no event link")

    etype_by_span = {mention_ref(s.sentence, s.start): s.etype
                     for s in spans if s.etype != ETYPE_EVENT}
    etype_by_hid = {d.hid: d.etype for d in doc.hidden_entities}
    chain_ids = set()
    assigned: dict[str, str] = {}
    drop_ids = {d.hid for d in doc.hidden_entities
                if d.subtype == SUBTYPE_DROP}
    chained_drops = set()
    for decl in doc.coref_decls:
        if decl.chain_id in chain_ids:
            raise DocumentError(f"duplicate chain id {decl.chain_id}")
        chain_ids.add(decl.chain_id)
        if not decl.mentions:
            raise DocumentError(f"chain {decl.chain_id} has no mentions")
        etype = None
        for ref in decl.mentions:
            if ref in etype_by_span:
                ref_type = etype_by_span[ref]
            elif ref in etype_by_hid:
                ref_type = etype_by_hid[ref]
                if ref in drop_ids:
                    chained_drops.add(ref)
            else:
                raise DocumentError(
                    f"chain {decl.chain_id} names unknown mention {ref}")
            if ref in assigned:
                raise DocumentError(
                    f"mention {ref} appears in chains {assigned[ref]} and "
                    f"{decl.chain_id}")
            assigned[ref] = decl.chain_id
            if etype is None:
                etype = ref_type
            elif etype != ref_type:
                raise DocumentError(
                    f"chain {decl.chain_id} mixes entity types {etype} and "
                    f"{ref_type} at {ref}")
    for hid in drop_ids - chained_drops:
        raise DocumentError(
            f"drop entity {hid} names no antecedent chain")


# ----------------------------------------------------------------------
# Parsing

_NEWDOC_RE = re.compile(r"#\s*newdoc id\s*=\s*(.*)$")
_TITLE_RE = re.compile(r"#\s*title\s*=\s*(.*)$")
_PROV_RE = re.compile(r"#\s*provenance\s*=\s*(.*)$")
_HIDDEN_LINE_RE = re.compile(r"#\s*hidden:\s*(.*)$")
_LINK_LINE_RE = re.compile(r"#\s*link:\s*(.*)$")
_COREF_LINE_RE = re.compile(r"#\s*coref:\s*(.*)$")


def parse_corpus(data: bytes | str) -> Corpus:
    """Parse a byte stream in the dialect into a list of documents.

    Raises ConlluError for malformed lines (with the offending line
    number) and DocumentError for dangling references or invariant
    violations.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    docs: list[Document] = []
    seen_ids: set[str] = set()
    doc: Document | None = None
    tokens: list[Token] = []
    comments: list[str] = []

    def flush_sentence(lineno: int) -> None:
        nonlocal tokens, comments
        if tokens:
            doc.sentences.append(Sentence(tokens=tokens, comments=comments))
        elif comments:
            raise ConlluError(lineno, "comment block without token lines")
        tokens = []
        comments = []

    def flush_doc() -> None:
        nonlocal doc
        if doc is not None:
            try:
                validate_document(doc)
            except DocumentError as exc:
                raise DocumentError(f"document {doc.doc_id}: {exc}") from None
            docs.append(doc)
        doc = None

    for lineno, line in enumerate(text.split("\n"), 1):
        if line.strip() == "":
            if tokens or comments:
                flush_sentence(lineno)
            continue
        if line.startswith("#"):
            m = _NEWDOC_RE.match(line)
            if m:
                if tokens:
                    raise ConlluError(lineno, "newdoc inside a sentence block")
                flush_sentence(lineno)
                flush_doc()
                doc_id = m.group(1).strip()
                if not doc_id:
                    raise ConlluError(lineno, "newdoc line with empty id")
                if doc_id in seen_ids:
                    raise ConlluError(lineno, f"duplicate doc_id {doc_id!r}")
                seen_ids.add(doc_id)
                doc = Document(doc_id=doc_id)
                continue
            if doc is None:
                raise ConlluError(lineno, "content before any # newdoc line")
            m = _TITLE_RE.match(line)
            if m:
                doc.title = m.group(1).strip()
                continue
            m = _PROV_RE.match(line)
            if m:
                doc.provenance = m.group(1).strip()
                continue
            m = _HIDDEN_LINE_RE.match(line)
            if m:
                doc.hidden_entities.append(_parse_hidden(m.group(1), lineno))
                continue
            m = _LINK_LINE_RE.match(line)
            if m:
                doc.event_links.append(_parse_link(m.group(1), lineno))
                continue
            m = _COREF_LINE_RE.match(line)
            if m:
                doc.coref_decls.append(_parse_coref(m.group(1), lineno))
                continue
            comments.append(line)
            continue
        if doc is None:
            raise ConlluError(lineno, "token line before any # newdoc line")
        tokens.append(_parse_token(line, lineno, len(tokens)))
    flush_sentence(len(text.split("\n")))
    flush_doc()
    return docs


def _parse_token(line: str, lineno: int, prior: int) -> Token:
    cols = line.split("\t")
    if len(cols) != 10:
        raise ConlluError(
            lineno, f"expected 10 tab-separated columns, got {len(cols)}")
    idx_s, surface, lemma, upos, xpos, feats, head_s, deprel, deps, misc_s = cols
    if not idx_s.isdigit():
        raise ConlluError(lineno, f"bad token index {idx_s!r} "
                          "(ranges and empty nodes are not part of the dialect)")
    index = int(idx_s)
    if index != prior + 1:
        raise ConlluError(lineno, f"token index {index} breaks 1..n order")
    for col, name in ((xpos, "XPOS"), (feats, "FEATS"), (deps, "DEPS")):
        if col != "_":
            raise ConlluError(lineno, f"{name} must be '_' in this dialect")
    if not surface:
        raise ConlluError(lineno, "empty FORM column")
    try:
        head = int(head_s)
    except ValueError:
        raise ConlluError(lineno, f"bad HEAD value {head_s!r}") from None
    misc: dict[str, str] = {}
    if misc_s != "_":
        for pair in misc_s.split("|"):
            key, sep, value = pair.partition("=")
            if not sep or not key:
                raise ConlluError(lineno, f"bad MISC pair {pair!r}")
            if key in misc:
                raise ConlluError(lineno, f"duplicate MISC key {key!r}")
            misc[key] = value
    return Token(index=index, surface=surface, lemma=lemma, upos=upos,
                 head=head, deprel=deprel, misc=misc)


def _parse_hidden(body: str, lineno: int) -> HiddenEntityDecl:
    fields = [f.strip() for f in body.split("|")]
    if len(fields) not in (5, 6):
        raise ConlluError(
            lineno, "hidden line needs hid|label|etype|subtype|event[|role]")
    role = fields[5] if len(fields) == 6 and fields[5] else None
    return HiddenEntityDecl(hid=fields[0], label=fields[1], etype=fields[2],
                            subtype=fields[3], anchor_event=fields[4],
                            role=role)


def _parse_link(body: str, lineno: int) -> EventLink:
    fields = [f.strip() for f in body.split("|")]
    if len(fields) != 3:
        raise ConlluError(lineno, "link line needs entity|relation|event")
    return EventLink(entity=fields[0], relation=fields[1], event=fields[2])


def _parse_coref(body: str, lineno: int) -> CorefDecl:
    cid, sep, rest = body.partition("=")
    if not sep:
        raise ConlluError(lineno, "coref line needs 'chain_id = m1, m2, ...'")
    mentions = [m.strip() for m in rest.split(",") if m.strip()]
    return CorefDecl(chain_id=cid.strip(), mentions=mentions)


# ----------------------------------------------------------------------
# Writing

def write_corpus(corpus: Corpus) -> bytes:
    """Serialize to canonical form; parse(write(c)) is structurally c."""
    out: list[str] = []
    for doc in corpus:
        blocks = _doc_blocks(doc)
        out.extend(blocks)
    return "".join(out).encode("utf-8")


def _doc_blocks(doc: Document) -> list[str]:
    header = [
        f"# newdoc id = {doc.doc_id}\n",
        f"# title = {doc.title}\n",
        f"# provenance = {doc.provenance}\n",
    ]
    standoff: list[str] = []
    for d in doc.hidden_entities:
        fields = [d.hid, d.label, d.etype, d.subtype, d.anchor_event]
        if d.role:
            fields.append(d.role)
        standoff.append("# hidden: " + "|".join(fields) + "\n")
    for link in doc.event_links:
        standoff.append(
            f"# link: {link.entity}|{link.relation}|{link.event}\n")
    for decl in doc.coref_decls:
        standoff.append(
            f"# coref: {decl.chain_id} = {', '.join(decl.mentions)}\n")

    if not doc.sentences:
        return ["".join(header) + "\n"]

    blocks = []
    last = len(doc.sentences) - 1
    for i, sent in enumerate(doc.sentences):
        parts: list[str] = []
        if i == 0:
            parts.extend(header)
        parts.extend(c + "\n" for c in sent.comments)
        if i == last:
            parts.extend(standoff)
        for tok in sent.tokens:
            misc = "|".join(f"{k}={v}" for k, v in tok.misc.items()) or "_"
            parts.append(
                f"{tok.index}\t{tok.surface}\t{tok.lemma}\t{tok.upos}\t_\t_\t"
                f"{tok.head}\t{tok.deprel}\t_\t{misc}\n")
        parts.append("\n")
        blocks.append("".join(parts))
    return blocks


def parse_path(path) -> Corpus:
    with open(path, "rb") as f:
        return parse_corpus(f.read())


def write_path(corpus: Corpus, path) -> None:
    with open(path, "wb") as f:
        f.write(write_corpus(corpus))
