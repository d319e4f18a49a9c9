"""Command-line entry point wiring all modules together."""

import argparse
import json
import os
import sys
from dataclasses import asdict
from importlib import resources
from pathlib import Path

from . import __version__
from .conllu import ConlluError, DocumentError, parse_path
from .coref import build_artifacts, lifespan
from .lex import PrepLexicon
from .metrics import document_chain_keys, coref_score, mrp_score, qa_score
from .paraphrase import DpConfig, MODE_COOKING, MODE_TRANSFER, \
    STYLE_RESULTING_IN, STYLE_TO_GET, paraphrase_document
from .questions import QgenConfig, generate_questions, export_pair
from .stats import compute_stats, format_stats
from .states import SenseTable, category_name, classify_end_state

CONFIG_DIR_ENV = "DPKIT_CONFIG_DIR"


def _config_path(name: str, override: str | None) -> Path | None:
    if override:
        return Path(override)
    config_dir = os.environ.get(CONFIG_DIR_ENV)
    if config_dir and (Path(config_dir) / name).exists():
        return Path(config_dir) / name
    return None


def make_dp_config(args) -> DpConfig:
    sense_path = _config_path("sense_table.tsv",
                              getattr(args, "sense_table", None))
    prep_path = _config_path("prepositions.tsv",
                             getattr(args, "prepositions", None))
    table = SenseTable.from_tsv(sense_path) if sense_path \
        else SenseTable.default()
    lexicon = PrepLexicon.from_tsv(prep_path) if prep_path \
        else PrepLexicon.default()
    mode = MODE_TRANSFER if getattr(args, "transfer", False) else MODE_COOKING
    cfg = DpConfig(mode=mode, prepositions=lexicon, sense_table=table,
                   outcome_style=getattr(args, "outcome_style",
                                         STYLE_RESULTING_IN))
    if getattr(args, "max_end_states", None) is not None \
            and mode == MODE_COOKING:
        cfg.max_end_states = args.max_end_states
    return cfg


def _load_corpus(paths: list[str]):
    corpus = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for f in sorted(path.glob("*.conllu")):
                corpus.extend(parse_path(f))
        else:
            corpus.extend(parse_path(path))
    return corpus


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ----------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    failures = 0
    results = []
    for raw in args.files:
        errors = []
        n_docs = 0
        try:
            corpus = parse_path(raw)
            n_docs = len(corpus)
            for doc in corpus:
                try:
                    build_artifacts(doc)
                except DocumentError as exc:
                    errors.append(f"document {doc.doc_id}: {exc}")
        except (ConlluError, DocumentError, OSError) as exc:
            errors.append(str(exc))
        results.append({"file": str(raw), "documents": n_docs,
                        "ok": not errors, "errors": errors})
        for message in errors:
            print(f"{raw}: {message}", file=sys.stderr)
        failures += len(errors)
        if not errors and not getattr(args, "json", False):
            print(f"{raw}: OK ({n_docs} documents)")
    if getattr(args, "json", False):
        print(json.dumps({"files": results}, indent=2, sort_keys=True))
    return 1 if failures else 0


def cmd_events(args) -> int:
    cfg = make_dp_config(args)
    out = []
    for doc in _load_corpus(args.files):
        art = build_artifacts(doc, cfg.sense_table)
        doc_events = []
        for event in art.events:
            doc_events.append({
                "event_id": event.event_id,
                "frame": event.frame,
                "category": category_name(
                    classify_end_state(event.frame, cfg.sense_table)),
                "head": event.head.label,
                "participants": [
                    {"ref": m.id, "label": m.label, "etype": m.etype,
                     "role": m.role, "relation": rel,
                     "explicitness": m.explicitness}
                    for m, rel in event.participants],
                "modifiers": [{"role": m.role, "text": m.text}
                              for m in event.modifiers],
            })
        out.append({"doc_id": doc.doc_id, "events": doc_events})
    lines = []
    for block in out:
        lines.append(f"# {block['doc_id']}")
        for ev in block["events"]:
            lines.append(f"  {ev['event_id']} {ev['head']} "
                         f"[{ev['frame']} -> {ev['category']}]")
            for p in ev["participants"]:
                role = f" ({p['role']})" if p["role"] else ""
                lines.append(f"    {p['relation']:<15} {p['etype']:<11} "
                             f"{p['label'] or p['ref']}{role} "
                             f"<{p['explicitness']}>")
            for m in ev["modifiers"]:
                lines.append(f"    modifier        {m['role']:<11} "
                             f"{m['text']}")
    _emit(args, {"documents": out}, "\n".join(lines))
    return 0


def cmd_chains(args) -> int:
    cfg = make_dp_config(args)
    out = []
    lines = []
    for doc in _load_corpus(args.files):
        art = build_artifacts(doc, cfg.sense_table)
        lines.append(f"# {doc.doc_id}")
        for chain in art.chains:
            report = lifespan(chain, art.events, art.chains)
            record = {
                "doc_id": doc.doc_id,
                "chain_id": chain.chain_id,
                "etype": chain.etype,
                "mentions": chain.refs(),
                "timeline": [{"event": t.event_id,
                              "text": t.state.render(),
                              "location": t.state.location}
                             for t in chain.timeline],
                "constituents": report.constituents,
            }
            out.append(record)
            arrow = " -> ".join(t["text"] for t in record["timeline"])
            lines.append(f"  {chain.chain_id} [{chain.etype}] {arrow}")
    if getattr(args, "json", False):
        print("\n".join(json.dumps(r, sort_keys=True) for r in out))
    else:
        print("\n".join(lines))
    return 0


def cmd_paraphrase(args) -> int:
    cfg = make_dp_config(args)
    payload = []
    lines = []
    for doc in _load_corpus(args.files):
        dp = paraphrase_document(doc, cfg)
        payload.append({"doc_id": doc.doc_id, "hrp": dp.hrp, "mrp": dp.mrp})
        lines.extend(dp.hrp if args.mode == "hrp" else dp.mrp)
    _emit(args, {"documents": payload}, "\n".join(lines))
    return 0


def cmd_qgen(args) -> int:
    cfg = QgenConfig(enumerate_all=args.enumerate_all, seed=args.seed,
                     dp=make_dp_config(args))
    records = []
    for doc in _load_corpus(args.files):
        art = build_artifacts(doc, cfg.dp.sense_table)
        items = generate_questions(doc, art.events, art.chains, cfg)
        recipe = " ".join(
            " ".join(t.surface for t in s.tokens) for s in doc.sentences)
        for item in items:
            records.append((doc.doc_id, item, recipe))
    if args.format == "pairs":
        for _, item, recipe in records:
            print(export_pair(item, recipe))
        return 0
    for doc_id, item, _ in records:
        print(json.dumps({
            "question": item.question, "answer": item.answer,
            "type": item.qtype, "doc_id": doc_id,
            "event_id": item.source_event,
        }, sort_keys=True))
    return 0


def _read_answers(path: str) -> list[str]:
    answers = []
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("{"):
            answers.append(json.loads(line).get("answer", ""))
        else:
            answers.append(line)
    return answers


def cmd_eval(args) -> int:
    if args.task == "qa":
        score = qa_score(_read_answers(args.sys), _read_answers(args.gold))
        report = asdict(score)
        text = f"EM {score.em:.4f}  F1 {score.f1:.4f}  (n={score.n})"
    elif args.task == "coref":
        sys_chains, gold_chains = [], []
        gold_docs = {d.doc_id: d for d in _load_corpus([args.gold])}
        for doc in _load_corpus([args.sys]):
            gold = gold_docs.get(doc.doc_id)
            if gold is None:
                raise DocumentError(
                    f"document {doc.doc_id} missing from gold file")
            sys_art = build_artifacts(doc)
            gold_art = build_artifacts(gold)
            prefix = doc.doc_id
            for keys in document_chain_keys(doc, sys_art.chains):
                sys_chains.append([(prefix,) + k for k in keys])
            for keys in document_chain_keys(gold, gold_art.chains):
                gold_chains.append([(prefix,) + k for k in keys])
        score = coref_score(sys_chains, gold_chains)
        report = {
            "muc": asdict(score.muc), "b3": asdict(score.b3),
            "ceafe": asdict(score.ceafe), "conll_f1": score.conll_f1,
        }
        text = "\n".join([
            f"MUC     P {score.muc.precision:.4f} R {score.muc.recall:.4f} "
            f"F1 {score.muc.f1:.4f}",
            f"B3      P {score.b3.precision:.4f} R {score.b3.recall:.4f} "
            f"F1 {score.b3.f1:.4f}",
            f"CEAF-e  P {score.ceafe.precision:.4f} "
            f"R {score.ceafe.recall:.4f} F1 {score.ceafe.f1:.4f}",
            f"CoNLL-F1 {score.conll_f1:.4f}",
        ])
    else:
        sys_text = Path(args.sys).read_text("utf-8")
        gold_text = Path(args.gold).read_text("utf-8")
        granularity = "exact" if args.granularity == "exact" else "role"
        score = mrp_score(sys_text, gold_text, granularity)
        report = {
            "granularity": score.granularity,
            "overall": asdict(score.overall),
            "by_type": {k: asdict(v) for k, v in score.by_type.items()},
        }
        rows = [f"{'ALL':<18} P {score.overall.precision:.4f} "
                f"R {score.overall.recall:.4f} F1 {score.overall.f1:.4f}"]
        for cat, prf in sorted(score.by_type.items()):
            rows.append(f"{cat:<18} P {prf.precision:.4f} "
                        f"R {prf.recall:.4f} F1 {prf.f1:.4f}")
        text = "\n".join(rows)
    _emit(args, report, text)
    return 0


def cmd_stats(args) -> int:
    corpus = _load_corpus(args.files)
    split_map = None
    if args.split_map:
        split_map = json.loads(Path(args.split_map).read_text("utf-8"))
    report = compute_stats(corpus, split_map)
    payload = {
        split: {
            "recipes": s.recipes,
            "sentences": asdict(s.sentences),
            "sentence_length": asdict(s.sentence_length),
            "entities": s.entities,
            "chains": s.chains,
        } for split, s in report.splits.items()
    }
    _emit(args, payload, format_stats(report))
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    from .service import DocumentStore, create_app
    store = DocumentStore(args.data)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_fixtures(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = sorted(
        r.name for r in resources.files("dpkit.fixtures").iterdir()
        if r.name.endswith(".conllu"))
    for name in names:
        data = resources.files("dpkit.fixtures").joinpath(name).read_bytes()
        (outdir / name).write_bytes(data)
        print(outdir / name)
    return 0


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpkit",
        description="dense paraphrasing toolkit for annotated "
                    "procedural text")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, files=True):
        if files:
            p.add_argument("files", nargs="+",
                           help=".conllu files or directories")
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report")
        p.add_argument("--sense-table", help="verb sense table TSV")
        p.add_argument("--prepositions", help="preposition lexicon TSV")

    p = sub.add_parser("validate", help="parse and check dialect files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("events", help="print role-saturated event graphs")
    common(p)
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("chains", help="print coreference chains with "
                                      "state timelines")
    common(p)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("paraphrase", help="emit dense paraphrases")
    common(p)
    p.add_argument("--mode", choices=("hrp", "mrp"), default="hrp")
    p.add_argument("--transfer", action="store_true",
                   help="out-of-domain key renaming and state truncation")
    p.add_argument("--outcome-style", dest="outcome_style",
                   choices=(STYLE_RESULTING_IN, STYLE_TO_GET),
                   default=STYLE_RESULTING_IN)
    p.add_argument("--max-end-states", dest="max_end_states", type=int)
    p.set_defaults(func=cmd_paraphrase)

    p = sub.add_parser("qgen", help="generate question-answer pairs")
    common(p)
    p.add_argument("--format", choices=("jsonl", "pairs"), default="jsonl")
    p.add_argument("--enumerate-all", action="store_true",
                   help="emit every adjunct variant")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_qgen)

    p = sub.add_parser("eval", help="score system output")
    p.add_argument("task", choices=("qa", "coref", "mrp"))
    p.add_argument("sys")
    p.add_argument("gold")
    p.add_argument("--granularity", choices=("role", "exact"),
                   default="role")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="corpus statistics tables")
    common(p)
    p.add_argument("--split-map", help="JSON file mapping doc_id to split")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--data", default=".", help="directory of .conllu files")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fixtures", help="write the bundled fixture corpus")
    p.add_argument("outdir")
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConlluError, DocumentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
