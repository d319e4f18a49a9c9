"""Scoring: QA exact-match/F1, Cohen's kappa, coreference, MRP match.

Coreference is scored with MUC (link-based), B-cubed (mention-weighted)
and entity CEAF (optimal one-to-one chain alignment); their F1 average is
the CoNLL F1.  QA strings are normalized the usual reading-comprehension
way: lowercase, strip punctuation and articles, collapse whitespace.
Ratios with an empty denominator count as perfect agreement (identical
empty or all-singleton partitions score 1).
"""

import re
import string
from collections import Counter
from dataclasses import dataclass, field

from scipy.optimize import linear_sum_assignment

from .paraphrase import parse_mrp

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


@dataclass
class PRF:
    precision: float
    recall: float
    f1: float


@dataclass
class QaScore:
    em: float
    f1: float
    n: int


@dataclass
class CorefScore:
    muc: PRF
    b3: PRF
    ceafe: PRF
    conll_f1: float


@dataclass
class MrpScore:
    granularity: str  # role | exact
    overall: PRF
    by_type: dict[str, PRF] = field(default_factory=dict)


def _prf(p_num, p_den, r_num, r_den) -> PRF:
    p = p_num / p_den if p_den else 1.0
    r = r_num / r_den if r_den else 1.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return PRF(precision=p, recall=r, f1=f1)


# ----------------------------------------------------------------------
# QA

def normalize_answer(text: str) -> str:
    text = text.lower()
    text = text.translate(_PUNCT_TABLE)
    text = _ARTICLE_RE.sub(" ", text)
    return " ".join(text.split())


def _token_f1(pred: str, gold: str) -> float:
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    common = Counter(pred_tokens) & Counter(gold_tokens)
    same = sum(common.values())
    if same == 0:
        return 0.0
    p = same / len(pred_tokens)
    r = same / len(gold_tokens)
    return 2 * p * r / (p + r)


def qa_score(preds: list[str], golds: list[str]) -> QaScore:
    if len(preds) != len(golds):
        raise ValueError(
            f"got {len(preds)} predictions for {len(golds)} references")
    n = len(golds)
    if n == 0:
        return QaScore(em=0.0, f1=0.0, n=0)
    em = sum(normalize_answer(p) == normalize_answer(g)
             for p, g in zip(preds, golds)) / n
    f1 = sum(_token_f1(p, g) for p, g in zip(preds, golds)) / n
    return QaScore(em=em, f1=f1, n=n)


# ----------------------------------------------------------------------
# Cohen's kappa

def cohen_kappa(labels_a: list, labels_b: list) -> float:
    if len(labels_a) != len(labels_b):
        raise ValueError("label sequences differ in length")
    n = len(labels_a)
    if n == 0:
        raise ValueError("empty label sequences")
    po = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    counts_a = Counter(labels_a)
    counts_b = Counter(labels_b)
    pe = sum(counts_a[k] * counts_b.get(k, 0) for k in counts_a) / (n * n)
    if pe == 1.0:
        return 1.0
    return (po - pe) / (1 - pe)


# ----------------------------------------------------------------------
# Coreference

def _check_partition(chains, name):
    seen = set()
    cleaned = []
    for chain in chains:
        members = list(chain)
        for m in members:
            if m in seen:
                raise ValueError(
                    f"duplicate mention {m!r} in {name} partition")
            seen.add(m)
        if members:
            cleaned.append(frozenset(members))
    return cleaned


def _mention_map(chains):
    out = {}
    for chain in chains:
        for m in chain:
            out[m] = chain
    return out


def _vilain(keys, response_map):
    """Numerator/denominator of the MUC link count for one direction."""
    num = den = 0
    for chain in keys:
        if len(chain) < 2:
            continue
        partitions = set()
        missing = 0
        for m in chain:
            r = response_map.get(m)
            if r is None:
                missing += 1
            else:
                partitions.add(r)
        num += len(chain) - (len(partitions) + missing)
        den += len(chain) - 1
    return num, den


def _muc(sys_chains, gold_chains) -> PRF:
    r_num, r_den = _vilain(gold_chains, _mention_map(sys_chains))
    p_num, p_den = _vilain(sys_chains, _mention_map(gold_chains))
    return _prf(p_num, p_den, r_num, r_den)


def _b_cubed(sys_chains, gold_chains) -> PRF:
    gold_map = _mention_map(gold_chains)
    sys_map = _mention_map(sys_chains)
    r_num = sum(len(gold_map[m] & sys_map.get(m, frozenset()))
                / len(gold_map[m]) for m in gold_map)
    p_num = sum(len(sys_map[m] & gold_map.get(m, frozenset()))
                / len(sys_map[m]) for m in sys_map)
    return _prf(p_num, len(sys_map), r_num, len(gold_map))


def _ceaf_e(sys_chains, gold_chains) -> PRF:
    if not sys_chains or not gold_chains:
        return _prf(0, len(sys_chains), 0, len(gold_chains))
    phi = [[2 * len(g & s) / (len(g) + len(s)) for s in sys_chains]
           for g in gold_chains]
    rows, cols = linear_sum_assignment(phi, maximize=True)
    total = sum(phi[r][c] for r, c in zip(rows, cols))
    return _prf(total, len(sys_chains), total, len(gold_chains))


def coref_score(sys_chains, gold_chains) -> CorefScore:
    """MUC, B-cubed and CEAF-e over two partitions of mention keys.

    Chains are iterables of hashable mention keys; a mention may appear
    in at most one chain per partition.
    """
    sys_p = _check_partition(sys_chains, "system")
    gold_p = _check_partition(gold_chains, "gold")
    muc = _muc(sys_p, gold_p)
    b3 = _b_cubed(sys_p, gold_p)
    ceafe = _ceaf_e(sys_p, gold_p)
    conll = (muc.f1 + b3.f1 + ceafe.f1) / 3
    return CorefScore(muc=muc, b3=b3, ceafe=ceafe, conll_f1=conll)


def document_chain_keys(doc, chains) -> list[list[tuple]]:
    """Comparable mention keys for scoring two annotations of one text.

    Explicit mentions key by span; hidden mentions by (anchor event,
    entity type, normalized label), the documented convention for
    aligning annotator-added entities.
    """
    decls = {d.hid: d for d in doc.hidden_entities}
    out = []
    for chain in chains:
        keys = []
        for ref, anchor in chain.mentions:
            if ref.startswith("m_"):
                keys.append(("span", ref))
            else:
                decl = decls.get(ref)
                label = " ".join(
                    ((decl.label if decl else "") or "").lower().split())
                anchor_event = decl.anchor_event if decl else anchor
                keys.append(("hidden", anchor_event, chain.etype, label))
        out.append(keys)
    return out


# ----------------------------------------------------------------------
# MRP match

_TYPE_OF_KEY = {
    "TOOL": "TOOL", "TOOL_OF": "TOOL",
    "HABITAT": "HABITAT", "HABITAT_OF": "HABITAT",
    "INGRE_PART": "INGREDIENT_PART", "OBJECT_PART": "INGREDIENT_PART",
    "INGRE_OF": "INGREDIENT_PART", "OBJECT_OF": "INGREDIENT_PART",
    "INGRE_RESULT": "INGREDIENT_RESULT", "OBJECT_RESULT": "INGREDIENT_RESULT",
    "RESULT_OF": "INGREDIENT_RESULT", "OUTCOME": "INGREDIENT_RESULT",
}

GRANULARITY_ROLE = "role"
GRANULARITY_EXACT = "exact"


def _mrp_items(text: str, granularity: str):
    parsed = parse_mrp(text)
    items = []
    for i, event in enumerate(parsed.events):
        for key, value in list(event.pre_block) + list(event.inline_tags):
            category = _TYPE_OF_KEY.get(key, "OTHER")
            if granularity == GRANULARITY_EXACT:
                items.append((category, (i, key, " ".join(
                    value.lower().split()))))
            else:
                items.append((category, (i, key)))
    return items


def mrp_score(sys_text: str, gold_text: str,
              granularity: str = GRANULARITY_ROLE) -> MrpScore:
    """Multiset match of (event index, key[, value]) pairs."""
    if granularity not in (GRANULARITY_ROLE, GRANULARITY_EXACT):
        raise ValueError(f"bad granularity {granularity!r}")
    sys_items = _mrp_items(sys_text, granularity)
    gold_items = _mrp_items(gold_text, granularity)
    by_type: dict[str, PRF] = {}
    categories = sorted({c for c, _ in sys_items}
                        | {c for c, _ in gold_items})

    def score(sys_sel, gold_sel) -> PRF:
        overlap = sum((Counter(sys_sel) & Counter(gold_sel)).values())
        return _prf(overlap, len(sys_sel), overlap, len(gold_sel))

    for cat in categories:
        by_type[cat] = score([i for c, i in sys_items if c == cat],
                             [i for c, i in gold_items if c == cat])
    overall = score([i for _, i in sys_items], [i for _, i in gold_items])
    return MrpScore(granularity=granularity, overall=overall,
                    by_type=by_type)
