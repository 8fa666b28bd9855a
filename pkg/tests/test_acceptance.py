"""Conformance suite: one test per acceptance criterion.

Each test prints a PASS line on success so a verbose run reads as a
checklist. Expected values are frozen from independent oracles (bubble
sort counts, reachability closures, hand arithmetic) or from the
documented reference outputs.
"""

import math
import os
import random
import time
from collections import Counter

import pytest

from dativekit import (
    Alternator,
    LinearizationMode,
    PollutionPlan,
    ScoredSentence,
    SurgeryConfig,
    UniformBackend,
    VerbLexicon,
    apply_strict,
    build_condition,
    detect_2postverbal,
    detect_loose,
    do_preference,
    evaluate_pairs,
    geo_mean_perplexity,
    inversion_score,
    ols,
    partition_corpus,
    pearson,
    plan_pollution,
    relinearize,
    relinearize_tree,
    zscore,
)
from dativekit.alternate import (
    surface_from_instance,
    swap_to_double_object,
    swap_to_prepositional,
)
from dativekit.scoring import PreferenceRecord
from dativekit.synth import (
    dative_fixture_set,
    gave_do_tree,
    gave_po_tree,
    green_melon_tree,
    he_ran_tree,
    mixed_fixture_corpus,
    played_japan_tree,
    random_tree,
    synthetic_corpus,
    telling_tree,
)

SHORT = "short_first"
LONG = "long_first"


def test_c01_reference_sentence_linearization():
    """Re-linearization reproduces the reference outputs exactly, <1s."""
    start = time.perf_counter()
    tree = green_melon_tree()
    assert " ".join(relinearize(tree, "short_first")) == (
        "he uses a fork to eat the green melon from the shop"
    )
    assert " ".join(relinearize(tree, "long_first")) == (
        "from the shop the melon green eat to uses a fork he"
    )
    assert " ".join(relinearize(tree, "long_first_headfinal")) == (
        "the shop from the green melon to eat a fork he uses"
    )
    mode = LinearizationMode("random_first", rng_seed=21)
    assert relinearize(tree, mode) == relinearize(tree, mode)
    assert Counter(relinearize(tree, mode)) == Counter(tree.forms())
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"PASS reference-sentence linearization ({elapsed * 1000:.0f} ms)")


def _bubble_swaps(values, ascending):
    values = list(values)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(values) - 1):
            bad = values[i] > values[i + 1] if ascending else values[i] < values[i + 1]
            if bad:
                values[i], values[i + 1] = values[i + 1], values[i]
                swaps += 1
                changed = True
    return swaps


def _subtree_size(tree, node):
    return 1 + sum(_subtree_size(tree, child) for child in tree.children(node))


def _head_lengths(tree):
    for tok in tree.tokens:
        kids = tree.children(tok.index)
        if len(kids) >= 2:
            yield [_subtree_size(tree, k) for k in kids]


def _is_tie_free(tree):
    return all(len(set(lengths)) == len(lengths) for lengths in _head_lengths(tree))


def test_c02_inversion_oracle_equivalence():
    """Inversion counts equal a brute-force bubble sort on 1000 random trees."""
    start = time.perf_counter()
    rng = random.Random(20240)
    tie_free_seen = 0
    for case in range(1000):
        tree = random_tree(f"acc{case}", rng.randint(1, 15), rng)
        for lengths in _head_lengths(tree):
            pairwise = sum(
                1
                for i in range(len(lengths))
                for j in range(i + 1, len(lengths))
                if lengths[i] > lengths[j]
            )
            assert pairwise == _bubble_swaps(lengths, True)
        oracle_short = sum(_bubble_swaps(ls, True) for ls in _head_lengths(tree))
        oracle_long = sum(_bubble_swaps(ls, False) for ls in _head_lengths(tree))
        short = inversion_score(tree, SHORT)
        long_ = inversion_score(tree, LONG)
        assert short.inversions == oracle_short
        assert long_.inversions == oracle_long
        if _is_tie_free(tree) and short.max_inversions > 0:
            tie_free_seen += 1
            assert short.inversions + long_.inversions == short.max_inversions
            assert short.normalized + long_.normalized == pytest.approx(1.0, abs=1e-12)
    assert tie_free_seen > 50
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"PASS inversion oracle equivalence ({tie_free_seen} tie-free, {elapsed:.1f} s)")


def test_c03_post_linearization_fixpoint():
    """Short-first output scores 0; tie-free long-first output scores 1."""
    trees = mixed_fixture_corpus()
    rng = random.Random(77)
    trees += [random_tree(f"fx{i}", rng.randint(2, 14), rng) for i in range(200)]
    tie_free_checked = 0
    for tree in trees:
        short_out = relinearize_tree(tree, SHORT)
        assert inversion_score(short_out, SHORT).inversions == 0, tree.sentence_id
        if _is_tie_free(tree):
            long_out = relinearize_tree(tree, LONG)
            report = inversion_score(long_out, SHORT)
            assert report.inversions == report.max_inversions, tree.sentence_id
            if report.max_inversions > 0:
                assert report.normalized == 1.0
                tie_free_checked += 1
    assert tie_free_checked > 10
    print(f"PASS post-linearization fixpoint ({len(trees)} trees)")


def test_c04_alternation_round_trip():
    """Both transform compositions are identity on the dative fixture set."""
    fixtures = dative_fixture_set()
    assert len(fixtures) >= 50
    canonical = {f.tree.text() for f in fixtures}
    assert "I gave the dog a bone" in canonical
    assert "I gave a bone to the dog" in canonical
    for fixture in fixtures:
        instances = detect_loose(fixture.tree)
        assert len(instances) == 1, fixture.tree.sentence_id
        inst = instances[0]
        sd = surface_from_instance(fixture.tree, inst)
        if inst.form == "DO":
            po = swap_to_prepositional(sd, "to")
            assert swap_to_double_object(po).tokens == sd.tokens
            extra = Counter(po.tokens) - Counter(sd.tokens)
            assert extra == Counter({"to": 1})
        else:
            do = swap_to_double_object(sd)
            assert swap_to_prepositional(do, inst.preposition).tokens == sd.tokens
            extra = Counter(sd.tokens) - Counter(do.tokens)
            assert extra == Counter({inst.preposition: 1})
            assert len(sd.tokens) == len(do.tokens) + 1
    print(f"PASS alternation round trip ({len(fixtures)} fixtures)")


def test_c05_detection_schema_and_partition():
    """Schema fixtures classify exactly; strict is a subset of loose."""
    do_tree, po_tree = gave_do_tree(), gave_po_tree()
    assert [i.form for i in detect_loose(do_tree)] == ["DO"]
    assert [(i.form, i.preposition) for i in detect_loose(po_tree)] == [("PO", "to")]
    from dativekit.synth import baked_po_tree, eats_melon_tree

    assert [(i.form, i.preposition) for i in detect_loose(baked_po_tree())] == [("PO", "for")]
    assert detect_loose(eats_melon_tree()) == []

    corpus = [
        do_tree, po_tree, telling_tree(), played_japan_tree(), he_ran_tree(),
        eats_melon_tree(),
    ]
    partition = partition_corpus(corpus)
    assert partition.dative_ids == {"gave_do", "gave_po"}
    assert partition.ambiguous_ids == {"telling", "played_japan"}
    assert partition.non_dative_ids == {"he_ran", "eats_melon"}

    lexicon = VerbLexicon.bundled()
    mixed = mixed_fixture_corpus()
    loose = [inst for tree in mixed for inst in detect_loose(tree)]
    strict = [inst for inst in apply_strict(loose, lexicon) if inst.strict]
    loose_keys = {(i.tree_ref, i.verb_index) for i in loose}
    assert {(i.tree_ref, i.verb_index) for i in strict} <= loose_keys
    for tree in mixed:
        if detect_loose(tree):
            assert detect_2postverbal(tree)
    print(f"PASS detection schema and partition (strict {len(strict)}/{len(loose)})")


def test_c06_pollution_arithmetic_and_exposure_totals():
    """Insertion counts and cross-condition exposure totals are exact."""
    plan = plan_pollution(9_000_000, 0.00025, 2 / 3)
    assert (plan.estimated_false_negatives, plan.insert_do, plan.insert_po) == (2250, 1500, 750)

    corpus = synthetic_corpus(n_do=40, n_po=40, n_plain=30)
    partition = partition_corpus(corpus)
    alternator = Alternator(lexicon=VerbLexicon.bundled())
    small_plan = PollutionPlan(30, 20, 10, 0.001, 2 / 3)
    k_balanced = 5
    k_default = 2 * k_balanced + (small_plan.insert_do + small_plan.insert_po) // 2
    results = {
        "default": build_condition(
            corpus, partition,
            SurgeryConfig("default", count_per_form=k_default, pollution=small_plan, inject=False),
            alternator,
        ),
        "swapped": build_condition(
            corpus, partition,
            SurgeryConfig("swapped", count_per_form=k_default, pollution=small_plan),
            alternator,
        ),
        "balanced": build_condition(
            corpus, partition,
            SurgeryConfig("balanced", count_per_form=k_balanced, pollution=small_plan),
            alternator,
        ),
    }
    totals = {
        name: result.report.total_do + result.report.total_po
        for name, result in results.items()
    }
    assert len(set(totals.values())) == 1, totals
    assert results["balanced"].report.counterfactual_do == small_plan.insert_do
    assert results["balanced"].report.counterfactual_po == small_plan.insert_po
    assert results["default"].report.counterfactual_do == 0
    assert results["swapped"].report.pollution_skipped
    print(f"PASS pollution arithmetic and exposure totals (total {totals['default']})")


def test_c07_scoring_identities():
    """Uniform stub scores are exactly zero; anti-symmetry; perplexity."""
    backend = UniformBackend(per_token_logprob=-2.0)
    lexicon = VerbLexicon.bundled()
    from dativekit.alternate import build_pair

    pairs = []
    fixtures = dative_fixture_set()
    k = 0
    while len(pairs) < 2000:
        fixture = fixtures[k % len(fixtures)]
        inst = detect_loose(fixture.tree)[0]
        pair = build_pair(fixture.tree, inst, lexicon)
        pairs.append(pair)
        k += 1
    result = evaluate_pairs(pairs, backend)
    assert len(result.records) == 2000 and not result.failures
    assert all(record.score == 0.0 for record in result.records)

    rng = random.Random(4)
    worst = 0.0
    for _ in range(10_000):
        a = ScoredSentence("a", rng.uniform(-80.0, 0.0), rng.randint(1, 40))
        b = ScoredSentence("b", rng.uniform(-80.0, 0.0), rng.randint(1, 40))
        worst = max(worst, abs(do_preference(a, b) + do_preference(b, a)))
    assert worst <= 1e-12

    scored = [
        ScoredSentence("x", -math.log(2.0) * 5, 5),
        ScoredSentence("y", -math.log(8.0) * 2, 2),
    ]
    assert geo_mean_perplexity(scored) == pytest.approx(4.0, abs=1e-12)
    print("PASS scoring identities (2000 zero scores, anti-symmetry, perplexity 4)")


def _planted_records(slope_length, slope_animacy, intercept, n=240):
    rng = random.Random(12)
    records = []
    for i in range(n):
        length = rng.uniform(-2.5, 2.5)
        animacy = (i % 3) - 1
        score = intercept + slope_length * length + slope_animacy * animacy
        records.append(
            PreferenceRecord(f"p{i}", "give", score, length, animacy, "s1", "DO")
        )
    return records


def test_c08a_ols_recovers_planted_coefficients():
    """Noiseless planted regression is recovered to 1e-9 relative error."""
    result = ols(_planted_records(-0.174, 0.0, 0.5))
    assert result.coefficients["length_diff"] == pytest.approx(-0.174, rel=1e-9)
    assert result.coefficients["intercept"] == pytest.approx(0.5, rel=1e-9)
    assert abs(result.coefficients["animacy_diff"]) <= 1e-9
    both = ols(_planted_records(-0.174, 0.065, 0.5))
    assert both.coefficients["animacy_diff"] == pytest.approx(0.065, rel=1e-9)
    print("PASS planted-coefficient regression recovery")


def test_c08b_pearson_checklist_fixture():
    """Checklist value for pearson([1,2,3], [2,1,4]).

    The product-moment computation by hand gives sum(dx*dy) = 2 with
    Sxx = 2 and Syy = 14/3, so r = 6/sqrt(84) = 0.6547; the checklist
    instead lists 0.5, which equals the rank correlation of these vectors
    (or the product-moment value for y = [2,1,3]). The assertion keeps the
    checklist value and therefore documents the discrepancy by failing.
    """
    assert pearson([1, 2, 3], [2, 1, 4]) == 0.5
    print("PASS pearson checklist fixture")


def test_c08c_zscore_exact():
    """z-scoring [1,2,3] gives exactly [-1, 0, 1]."""
    assert zscore([1, 2, 3]) == [-1.0, 0.0, 1.0]
    print("PASS z-score exactness")


def test_c09_throughput_100k():
    """Partition + surgery + linearization over 100k sentences in <60s."""
    corpus = synthetic_corpus(
        n_do=2000, n_po=2000, n_plain=93000, n_ambiguous=1500, n_two_postverbal=1500
    )
    assert len(corpus) == 100_000
    start = time.perf_counter()
    partition = partition_corpus(corpus)
    alternator = Alternator(lexicon=VerbLexicon.bundled())
    plan = plan_pollution(len(partition.non_dative_ids), 0.00025, 2 / 3)
    result = build_condition(
        corpus, partition,
        SurgeryConfig("balanced", count_per_form=1500, pollution=plan, rng_seed=42),
        alternator,
    )
    lines = 0
    for tree in corpus:
        lines += len(relinearize(tree, "long_first_headfinal")) > 0
    elapsed = time.perf_counter() - start
    assert lines == 100_000
    assert result.report.output_sentences > 90_000
    assert elapsed < 60.0
    print(f"PASS throughput: 100k sentences in {elapsed:.1f} s")


@pytest.mark.skipif(
    "DATIVEKIT_SMOKE_BACKEND" not in os.environ,
    reason="set DATIVEKIT_SMOKE_BACKEND to a scoring-service URL backed by a "
    "pretrained model to run the end-to-end smoke check",
)
def test_c10_end_to_end_smoke_sign():
    """With a pretrained model serving /score, the length correlation on 200
    generated test pairs is negative (short-first)."""
    from dativekit import HTTPBackend
    from dativekit.alternate import build_pair

    backend = HTTPBackend(os.environ["DATIVEKIT_SMOKE_BACKEND"], timeout=120)
    lexicon = VerbLexicon.bundled()
    fixtures = dative_fixture_set()
    pairs = []
    k = 0
    while len(pairs) < 200:
        fixture = fixtures[k % len(fixtures)]
        pairs.append(build_pair(fixture.tree, detect_loose(fixture.tree)[0], lexicon))
        k += 1
    result = evaluate_pairs(pairs, backend)
    assert not result.failures
    r = pearson(
        [rec.score for rec in result.records],
        [rec.length_diff for rec in result.records],
    )
    assert r < 0
    print(f"PASS end-to-end smoke (r_length = {r:.3f})")
