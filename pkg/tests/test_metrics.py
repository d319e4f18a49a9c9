import itertools
import random

import pytest

from dpkit.metrics import (
    PRF, cohen_kappa, coref_score, mrp_score, normalize_answer, qa_score,
)


# ----------------------------------------------------------------------
# QA

def test_qa_exact_match_and_f1_trivial():
    score = qa_score(["peeled apples"], ["peeled apples"])
    assert score.em == 1.0 and score.f1 == 1.0


def test_qa_partial_overlap_hand_case():
    score = qa_score(["peeled apples"], ["apples"])
    assert score.em == 0.0
    assert abs(score.f1 - 2 / 3) < 1e-12


def test_qa_empty_prediction():
    score = qa_score([""], ["apples"])
    assert score.em == 0.0 and score.f1 == 0.0


def test_qa_length_mismatch_rejected():
    with pytest.raises(ValueError):
        qa_score(["a"], ["a", "b"])


def test_qa_article_invariance():
    rng = random.Random(2)
    words = ["peeled", "apples", "warm", "butter", "mix"]
    for _ in range(50):
        base = rng.sample(words, k=rng.randint(1, len(words)))
        with_articles = []
        for w in base:
            if rng.random() < 0.5:
                with_articles.append(rng.choice(["the", "a", "an"]))
            with_articles.append(w)
        a, b = " ".join(base), " ".join(with_articles)
        assert normalize_answer(a) == normalize_answer(b)
        assert qa_score([a], [b]).f1 == 1.0


# ----------------------------------------------------------------------
# kappa

def test_kappa_identical_sequences():
    assert cohen_kappa(list("ABCABC"), list("ABCABC")) == 1.0


def test_kappa_hand_case():
    assert abs(cohen_kappa(list("AABB"), list("AABA")) - 0.5) < 1e-12


def test_kappa_independent_labels_near_zero():
    rng = random.Random(7)
    n = 200_000
    a = [rng.choice("AB") for _ in range(n)]
    b = [rng.choice("AB") for _ in range(n)]
    assert abs(cohen_kappa(a, b)) < 0.05


def test_kappa_constant_agreement():
    assert cohen_kappa(["A"] * 5, ["A"] * 5) == 1.0


def test_kappa_empty_rejected():
    with pytest.raises(ValueError):
        cohen_kappa([], [])


def test_kappa_invariant_under_relabeling():
    rng = random.Random(9)
    a = [rng.choice("XYZ") for _ in range(500)]
    b = [rng.choice("XYZ") for _ in range(500)]
    mapping = {"X": "one", "Y": "two", "Z": "three"}
    assert abs(cohen_kappa(a, b) -
               cohen_kappa([mapping[x] for x in a],
                           [mapping[x] for x in b])) < 1e-12


# ----------------------------------------------------------------------
# coreference

def test_identical_partitions_are_perfect():
    parts = [[{"a", "b"}, {"c"}], [{"a"}, {"b"}, {"c"}], [{"a", "b", "c"}]]
    for p in parts:
        score = coref_score(p, p)
        assert score.muc.f1 == score.b3.f1 == score.ceafe.f1 == 1.0
        assert score.conll_f1 == 1.0


def test_muc_hand_case():
    score = coref_score([{"a", "b"}, {"c"}], [{"a", "b", "c"}])
    assert score.muc.precision == 1.0
    assert abs(score.muc.recall - 0.5) < 1e-12
    assert abs(score.muc.f1 - 2 / 3) < 1e-12


def test_duplicate_mention_rejected():
    with pytest.raises(ValueError):
        coref_score([{"a"}, {"a", "b"}], [{"a", "b"}])


# independent naive reimplementation used as the oracle ----------------

def naive_muc(sys_chains, gold_chains):
    def direction(keys, response):
        num = den = 0
        for chain in keys:
            if len(chain) < 2:
                continue
            pieces = []
            for m in chain:
                homes = [i for i, r in enumerate(response) if m in r]
                pieces.append(homes[0] if homes else ("miss", m))
            num += len(chain) - len(set(pieces))
            den += len(chain) - 1
        return num, den

    r_num, r_den = direction(gold_chains, sys_chains)
    p_num, p_den = direction(sys_chains, gold_chains)
    return _naive_prf(p_num, p_den, r_num, r_den)


def naive_b3(sys_chains, gold_chains):
    def side(base, other):
        total = 0.0
        count = 0
        for chain in base:
            for m in chain:
                count += 1
                others = [c for c in other if m in c]
                if others:
                    total += len(chain & others[0]) / len(chain)
        return total, count

    r_num, r_den = side(gold_chains, sys_chains)
    p_num, p_den = side(sys_chains, gold_chains)
    return _naive_prf(p_num, p_den, r_num, r_den)


def naive_ceafe(sys_chains, gold_chains):
    def phi(a, b):
        return 2 * len(a & b) / (len(a) + len(b))

    best = 0.0
    if sys_chains and gold_chains:
        small, large = (sys_chains, gold_chains) \
            if len(sys_chains) <= len(gold_chains) \
            else (gold_chains, sys_chains)
        for perm in itertools.permutations(range(len(large)),
                                           len(small)):
            best = max(best, sum(phi(small[i], large[j])
                                 for i, j in enumerate(perm)))
    return _naive_prf(best, len(sys_chains), best, len(gold_chains))


def _naive_prf(p_num, p_den, r_num, r_den):
    p = p_num / p_den if p_den else 1.0
    r = r_num / r_den if r_den else 1.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def set_partitions(items):
    """All partitions of a list (standard recursive enumeration)."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [partial[i] | {head}] + partial[i + 1:]
        yield partial + [{head}]


def _close(got: PRF, want):
    assert abs(got.precision - want[0]) < 1e-9
    assert abs(got.recall - want[1]) < 1e-9
    assert abs(got.f1 - want[2]) < 1e-9


def test_coref_matches_naive_oracle_small_exhaustive():
    mentions = list("abcd")
    parts = [list(map(frozenset, p)) for p in set_partitions(mentions)]
    for sys_p in parts:
        for gold_p in parts:
            score = coref_score(sys_p, gold_p)
            _close(score.muc, naive_muc(sys_p, gold_p))
            _close(score.b3, naive_b3(sys_p, gold_p))
            _close(score.ceafe, naive_ceafe(sys_p, gold_p))


def test_ceafe_alignment_is_optimal():
    # no alignment may beat the one the scorer picked
    rng = random.Random(3)
    mentions = list("abcdefgh")
    for _ in range(40):
        def random_partition():
            chains = []
            for m in rng.sample(mentions, k=rng.randint(1, len(mentions))):
                if chains and rng.random() < 0.6:
                    rng.choice(chains).add(m)
                else:
                    chains.append({m})
            return [frozenset(c) for c in chains]

        sys_p, gold_p = random_partition(), random_partition()
        if len(sys_p) > 5 or len(gold_p) > 5:
            continue
        score = coref_score(sys_p, gold_p)
        _close(score.ceafe, naive_ceafe(sys_p, gold_p))


def test_conll_f1_is_mean_of_three():
    score = coref_score([{"a", "b"}, {"c"}], [{"a", "c"}, {"b"}])
    assert abs(score.conll_f1 -
               (score.muc.f1 + score.b3.f1 + score.ceafe.f1) / 3) < 1e-12


# ----------------------------------------------------------------------
# MRP scoring

GOLD = ("Chop {TOOL:knife # HABITAT:cutting board # OUTCOME:chopped onions}"
        " onions {INGRE_OF:chop}")


def test_identical_mrp_perfect_everywhere():
    score = mrp_score(GOLD, GOLD, "exact")
    assert score.overall == PRF(1.0, 1.0, 1.0)
    assert all(v == PRF(1.0, 1.0, 1.0) for v in score.by_type.values())


def test_dropped_tool_pair_halves_recall():
    gold = "Mix {TOOL:fork # TOOL:whisk} eggs {INGRE_OF:mix}"
    sys = "Mix {TOOL:fork} eggs {INGRE_OF:mix}"
    score = mrp_score(sys, gold, "role")
    assert score.by_type["TOOL"].recall == 0.5
    assert score.by_type["TOOL"].precision == 1.0


def test_role_right_value_wrong_counts_only_at_role_granularity():
    sys = GOLD.replace("TOOL:knife", "TOOL:fork")
    role = mrp_score(sys, GOLD, "role")
    exact = mrp_score(sys, GOLD, "exact")
    assert role.by_type["TOOL"].f1 == 1.0
    assert exact.by_type["TOOL"].f1 == 0.0
    assert role.overall.f1 == 1.0
    assert exact.overall.f1 < 1.0


def test_value_comparison_normalizes_case_and_space():
    sys = GOLD.replace("cutting board", "Cutting  Board")
    assert mrp_score(sys, GOLD, "exact").overall.f1 == 1.0


def test_bad_granularity_rejected():
    with pytest.raises(ValueError):
        mrp_score(GOLD, GOLD, "strict")
