"""Walkthrough: building manipulated training corpora.

Shows the five conditions on a synthetic corpus, the counterfactual
pollution plan derived from a recall-error estimate, and the exposure
report each build produces.
"""

from dativekit import (
    Alternator,
    SurgeryConfig,
    VerbLexicon,
    build_condition,
    partition_corpus,
    plan_pollution,
)
from dativekit.synth import gave_do_tree, gave_po_tree, he_ran_tree, synthetic_corpus


def main():
    print("== Pollution plan from a recall-error estimate ==")
    plan = plan_pollution(9_000_000, 0.00025, 2 / 3)
    print(f"  9M non-datives at 0.025% recall error, DO share 2/3 ->")
    print(f"  estimate={plan.estimated_false_negatives} "
          f"insert DO={plan.insert_do} insert PO={plan.insert_po}")

    print("\n== Condition semantics on a three-sentence corpus ==")
    tiny = [gave_do_tree("s1"), gave_po_tree("s2"), he_ran_tree("s3")]
    partition = partition_corpus(tiny)
    alternator = Alternator(lexicon=VerbLexicon.bundled())
    for condition in ("default", "balanced", "swapped", "no_datives"):
        result = build_condition(
            tiny, partition,
            SurgeryConfig(condition, count_per_form=1, rng_seed=0),
            alternator,
        )
        print(f"  {condition}:")
        for sentence in result.sentences:
            print(f"    [{sentence.origin}] {sentence.text()}")

    print("\n== Reports at corpus scale, with pollution ==")
    corpus = synthetic_corpus(n_do=300, n_po=300, n_plain=2000, n_two_postverbal=100)
    partition = partition_corpus(corpus)
    small_plan = plan_pollution(len(partition.non_dative_ids), 0.005, 2 / 3)
    for condition, kwargs in (
        ("default", dict(count_per_form=200, pollution=small_plan, inject=False)),
        ("balanced", dict(count_per_form=100, pollution=small_plan)),
        ("no_datives", dict(pollution=small_plan)),
        ("no_2postverbal", dict(pollution=small_plan)),
    ):
        result = build_condition(
            corpus, partition, SurgeryConfig(condition, rng_seed=42, **kwargs), alternator
        )
        report = result.report
        print(
            f"  {condition:>14}: out={report.output_sentences:5d} "
            f"controlled DO/PO={report.controlled_do}/{report.controlled_po} "
            f"fn={report.estimated_fn_do}/{report.estimated_fn_po} "
            f"cf={report.counterfactual_do}/{report.counterfactual_po} "
            f"total={report.total_do}/{report.total_po}"
        )


if __name__ == "__main__":
    main()
