"""HTTP facade over a corpus store for the annotation environment.

Documents live on disk as canonical dialect files plus one append-only
JSON-lines audit log per document; the current state is the base file
with its log replayed, so an edit history can always be re-derived and
compared against an export.  Writes are serialized per store and guarded
by optimistic versioning: a stale expected_version is rejected with the
current one.
"""

import copy
import hashlib
import json
import threading
from dataclasses import asdict, dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .conllu import (
    CorefDecl, Document, DocumentError, EventLink, HiddenEntityDecl,
    HIDDEN_ETYPES, RELATIONS, SUBTYPE_DROP, SUBTYPE_SHADOW,
    parse_corpus, validate_document, write_corpus,
)
from .coref import build_artifacts
from .paraphrase import DpConfig, MODE_COOKING, MODE_TRANSFER, \
    paraphrase_document
from .states import SenseTable, category_name, classify_end_state

PALETTE_SIZE = 12

OP_KINDS = ("AddHidden", "LinkRole", "Unlink", "MergeChains", "SplitChain",
            "SetSense")


class StoreError(Exception):
    pass


class NotFound(StoreError):
    pass


class VersionConflict(StoreError):
    def __init__(self, current: int):
        super().__init__(f"version conflict; current version is {current}")
        self.current = current


class EditRejected(StoreError):
    """Invalid op; the message names the violated invariant."""


@dataclass
class EditOp:
    kind: str
    payload: dict
    actor: str = "anon"
    seq: int = 0


class DocumentStore:
    """In-memory corpus backed by dialect files and audit logs."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.Lock()
        self.docs: dict[str, Document] = {}
        self.versions: dict[str, int] = {}
        self._base_file: dict[str, Path] = {}
        for path in sorted(self.root.glob("*.conllu")):
            for doc in parse_corpus(path.read_bytes()):
                if doc.doc_id in self.docs:
                    raise StoreError(f"duplicate doc_id {doc.doc_id}")
                self._base_file[doc.doc_id] = path
                self.docs[doc.doc_id] = doc
                self.versions[doc.doc_id] = 0
                self._replay_log(doc.doc_id)

    def _audit_path(self, doc_id: str) -> Path:
        return self.root / f"{doc_id}.audit.jsonl"

    def _replay_log(self, doc_id: str) -> None:
        path = self._audit_path(doc_id)
        if not path.exists():
            return
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            op = EditOp(kind=record["op"]["kind"],
                        payload=record["op"].get("payload", {}),
                        actor=record.get("actor", "anon"),
                        seq=record["seq"])
            doc = copy.deepcopy(self.docs[doc_id])
            _apply_op(doc, op)
            self.docs[doc_id] = doc
            self.versions[doc_id] = record["seq"]

    def list_docs(self) -> list[dict]:
        return [{"doc_id": doc_id, "title": doc.title,
                 "version": self.versions[doc_id],
                 "sentences": len(doc.sentences)}
                for doc_id, doc in sorted(self.docs.items())]

    def get(self, doc_id: str) -> tuple[Document, int]:
        if doc_id not in self.docs:
            raise NotFound(f"unknown document {doc_id}")
        return self.docs[doc_id], self.versions[doc_id]

    def apply(self, doc_id: str, ops: list[EditOp], expected_version: int,
              actor: str = "anon") -> int:
        """Apply an atomic batch of edits; every op revalidates the doc."""
        with self._lock:
            doc, version = self.get(doc_id)
            if expected_version != version:
                raise VersionConflict(version)
            work = copy.deepcopy(doc)
            for op in ops:
                _apply_op(work, op)
            try:
                validate_document(work)
                build_artifacts(work)
            except DocumentError as exc:
                raise EditRejected(str(exc)) from None
            self.docs[doc_id] = work
            with open(self._audit_path(doc_id), "a", encoding="utf-8") as f:
                for i, op in enumerate(ops, 1):
                    record = {"seq": version + i, "actor": actor,
                              "op": {"kind": op.kind, "payload": op.payload}}
                    f.write(json.dumps(record, sort_keys=True) + "\n")
            self.versions[doc_id] = version + len(ops)
            return self.versions[doc_id]

    def export(self, doc_id: str) -> bytes:
        doc, _ = self.get(doc_id)
        return write_corpus([doc])

    def replay(self, doc_id: str) -> bytes:
        """Re-derive the document from its base file plus the audit log."""
        if doc_id not in self._base_file:
            raise NotFound(f"unknown document {doc_id}")
        base = [d for d in parse_corpus(self._base_file[doc_id].read_bytes())
                if d.doc_id == doc_id][0]
        path = self._audit_path(doc_id)
        if path.exists():
            for line in path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                _apply_op(base, EditOp(kind=record["op"]["kind"],
                                       payload=record["op"].get("payload",
                                                                {})))
        return write_corpus([base])


# ----------------------------------------------------------------------
# edit operations

def _require(payload: dict, *names: str) -> list:
    values = []
    for name in names:
        if name not in payload or payload[name] in (None, ""):
            raise EditRejected(f"op needs field {name!r}")
        values.append(payload[name])
    return values


def _next_hid(doc: Document) -> str:
    used = {d.hid for d in doc.hidden_entities}
    n = 1
    while f"h{n}" in used:
        n += 1
    return f"h{n}"


def _next_chain_id(doc: Document) -> str:
    used = {c.chain_id for c in doc.coref_decls}
    n = 1
    while f"c{n}" in used:
        n += 1
    return f"c{n}"


def _chain_members(doc: Document, chain_ref: str) -> tuple[CorefDecl | None,
                                                           list[str]]:
    for decl in doc.coref_decls:
        if decl.chain_id == chain_ref:
            return decl, list(decl.mentions)
    if chain_ref.startswith("c_"):
        # auto id of a singleton chain: c_<mention ref>
        return None, [chain_ref[2:]]
    raise EditRejected(f"unknown chain {chain_ref}")


def _apply_op(doc: Document, op: EditOp) -> None:
    if op.kind not in OP_KINDS:
        raise EditRejected(f"unknown op kind {op.kind!r}")
    handler = {
        "AddHidden": _op_add_hidden,
        "LinkRole": _op_link_role,
        "Unlink": _op_unlink,
        "MergeChains": _op_merge_chains,
        "SplitChain": _op_split_chain,
        "SetSense": _op_set_sense,
    }[op.kind]
    handler(doc, op.payload)


def _op_add_hidden(doc: Document, payload: dict) -> None:
    label = payload.get("label", "")
    etype, subtype, event = _require(payload, "etype", "subtype", "event")
    relation = payload.get("relation", "participant-of")
    if etype not in HIDDEN_ETYPES:
        raise EditRejected(f"etype must be one of {HIDDEN_ETYPES}")
    if subtype not in (SUBTYPE_DROP, SUBTYPE_SHADOW):
        raise EditRejected("subtype must be drop or shadow")
    if subtype == SUBTYPE_SHADOW and not label:
        raise EditRejected("shadow entity needs a non-empty label")
    if relation not in RELATIONS:
        raise EditRejected(f"relation must be one of {RELATIONS}")
    for d in doc.hidden_entities:
        if (d.label, d.etype, d.subtype, d.anchor_event) == \
                (label, etype, subtype, event):
            raise EditRejected(
                f"identical hidden entity {d.hid} already on event {event}")
    hid = _next_hid(doc)
    doc.hidden_entities.append(HiddenEntityDecl(
        hid=hid, label=label, etype=etype, subtype=subtype,
        anchor_event=event, role=payload.get("role")))
    doc.event_links.append(EventLink(entity=hid, relation=relation,
                                     event=event))
    if subtype == SUBTYPE_DROP:
        chain_ref = payload.get("chain")
        if not chain_ref:
            raise EditRejected("drop entity needs an antecedent chain")
        decl, members = _chain_members(doc, chain_ref)
        if decl is None:
            decl = CorefDecl(chain_id=_next_chain_id(doc), mentions=members)
            doc.coref_decls.append(decl)
        decl.mentions.append(hid)


def _op_link_role(doc: Document, payload: dict) -> None:
    entity, relation, event = _require(payload, "entity", "relation", "event")
    if relation not in RELATIONS:
        raise EditRejected(f"relation must be one of {RELATIONS}")
    for link in doc.event_links:
        if (link.entity, link.relation, link.event) == \
                (entity, relation, event):
            raise EditRejected("link already present")
    doc.event_links.append(EventLink(entity=entity, relation=relation,
                                     event=event))


def _op_unlink(doc: Document, payload: dict) -> None:
    entity, event = _require(payload, "entity", "event")
    before = len(doc.event_links)
    doc.event_links = [l for l in doc.event_links
                       if not (l.entity == entity and l.event == event)]
    if len(doc.event_links) == before:
        raise EditRejected(f"no link between {entity} and {event}")
    if any(l.entity == entity for l in doc.event_links):
        return
    # last link of a hidden entity removed: retire the declaration
    decls = [d for d in doc.hidden_entities if d.hid == entity]
    if decls:
        doc.hidden_entities.remove(decls[0])
        for chain in doc.coref_decls:
            if entity in chain.mentions:
                chain.mentions.remove(entity)
        doc.coref_decls = [c for c in doc.coref_decls if c.mentions]


def _op_merge_chains(doc: Document, payload: dict) -> None:
    a, b = _require(payload, "a", "b")
    if a == b:
        raise EditRejected("cannot merge a chain with itself")
    decl_a, members_a = _chain_members(doc, a)
    decl_b, members_b = _chain_members(doc, b)
    if decl_b is not None:
        doc.coref_decls.remove(decl_b)
    if decl_a is None:
        decl_a = CorefDecl(chain_id=_next_chain_id(doc), mentions=members_a)
        doc.coref_decls.append(decl_a)
    decl_a.mentions.extend(m for m in members_b
                           if m not in decl_a.mentions)


def _op_split_chain(doc: Document, payload: dict) -> None:
    chain_ref, mention = _require(payload, "chain", "mention")
    decl, members = _chain_members(doc, chain_ref)
    if decl is None or mention not in members:
        raise EditRejected(f"chain {chain_ref} has no mention {mention}")
    at = members.index(mention)
    if at == 0:
        raise EditRejected("cannot split a chain at its first mention")
    decl.mentions = members[:at]
    doc.coref_decls.append(CorefDecl(chain_id=_next_chain_id(doc),
                                     mentions=members[at:]))


def _op_set_sense(doc: Document, payload: dict) -> None:
    event, frame = _require(payload, "event", "frame")
    try:
        _, sent_s, tok_s = event.split("_")
        sent = doc.sentences[int(sent_s) - 1]
        token = sent.tokens[int(tok_s) - 1]
    except (ValueError, IndexError):
        raise EditRejected(f"unknown event {event}") from None
    if token.misc.get("Entity") != "B-EVENT":
        raise EditRejected(f"{event} is not an event head")
    token.misc["Frame"] = frame


# ----------------------------------------------------------------------
# rendering

def chain_color(chain_id: str) -> int:
    digest = hashlib.md5(chain_id.encode("utf-8")).hexdigest()
    return int(digest, 16) % PALETTE_SIZE


def render_document(doc: Document, version: int,
                    table: SenseTable | None = None) -> dict:
    table = table or SenseTable.default()
    art = build_artifacts(doc, table)
    sentences = []
    for i, sent in enumerate(doc.sentences, 1):
        sentences.append({
            "index": i,
            "tokens": [{
                "index": t.index, "surface": t.surface, "lemma": t.lemma,
                "upos": t.upos, "entity": t.misc.get("Entity"),
                "frame": t.misc.get("Frame"),
            } for t in sent.tokens],
        })
    events = []
    for event in art.events:
        events.append({
            "event_id": event.event_id,
            "frame": event.frame,
            "category": category_name(
                classify_end_state(event.frame, table)),
            "sentence": event.sentence,
            "head_token": event.head_token,
            "head": event.head.label,
            "participants": [{
                "ref": m.id, "relation": rel, "etype": m.etype,
                "role": m.role, "label": m.label,
                "explicitness": m.explicitness,
            } for m, rel in event.participants],
            "modifiers": [asdict(m) for m in event.modifiers],
        })
    chains = []
    for chain in art.chains:
        chains.append({
            "chain_id": chain.chain_id,
            "etype": chain.etype,
            "declared": chain.declared,
            "mentions": [{"ref": ref, "event": ev}
                         for ref, ev in chain.mentions],
            "timeline": [{"event": t.event_id, "text": t.state.render(),
                          "location": t.state.location}
                         for t in chain.timeline],
            "color": chain_color(chain.chain_id),
        })
    return {
        "doc_id": doc.doc_id,
        "title": doc.title,
        "provenance": doc.provenance,
        "version": version,
        "sentences": sentences,
        "hidden": [asdict(d) for d in doc.hidden_entities],
        "links": [asdict(l) for l in doc.event_links],
        "events": events,
        "chains": chains,
    }


# ----------------------------------------------------------------------
# HTTP app

class EditRequest(BaseModel):
    expected_version: int
    actor: str = "anon"
    op: dict | None = None
    ops: list[dict] | None = None


def create_app(store: DocumentStore) -> FastAPI:
    app = FastAPI(title="dense paraphrase annotation service",
                  docs_url=None, redoc_url=None)

    @app.exception_handler(StoreError)
    async def _store_error(request: Request, exc: StoreError):
        if isinstance(exc, NotFound):
            return JSONResponse(status_code=404,
                                content={"detail": str(exc)})
        if isinstance(exc, VersionConflict):
            return JSONResponse(status_code=409, content={
                "detail": str(exc), "current_version": exc.current})
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/docs")
    def list_docs():
        return store.list_docs()

    @app.get("/docs/{doc_id}")
    def get_document(doc_id: str):
        doc, version = store.get(doc_id)
        return render_document(doc, version)

    @app.post("/docs/{doc_id}/edits")
    def apply_edits(doc_id: str, body: EditRequest):
        raw_ops = body.ops if body.ops is not None else \
            [body.op] if body.op is not None else []
        if not raw_ops:
            raise EditRejected("no op given")
        ops = []
        for raw in raw_ops:
            if "kind" not in raw:
                raise EditRejected("op needs a kind")
            payload = raw.get("payload")
            if payload is None:
                payload = {k: v for k, v in raw.items() if k != "kind"}
            ops.append(EditOp(kind=raw["kind"], payload=payload,
                              actor=body.actor))
        version = store.apply(doc_id, ops, body.expected_version,
                              actor=body.actor)
        return {"version": version}

    @app.get("/docs/{doc_id}/preview")
    def preview(doc_id: str, mode: str = Query("hrp"),
                transfer: bool = Query(False)):
        doc, version = store.get(doc_id)
        cfg = DpConfig(mode=MODE_TRANSFER if transfer else MODE_COOKING)
        dp = paraphrase_document(doc, cfg)
        text = "\n".join(dp.hrp if mode == "hrp" else dp.mrp)
        return {"doc_id": doc_id, "version": version, "mode": mode,
                "text": text}

    @app.get("/docs/{doc_id}/export")
    def export(doc_id: str):
        return PlainTextResponse(store.export(doc_id).decode("utf-8"))

    return app
