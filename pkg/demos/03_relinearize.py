"""Walkthrough: global constituent re-linearization and order metrics.

Re-linearizes one sentence in all four modes (with the bracketed debug
view), then measures how short-first a small corpus is via inversion
counts.
"""

from dativekit import (
    LinearizationMode,
    corpus_order_report,
    inversion_score,
    relinearize,
    relinearize_bracketed,
)
from dativekit.synth import green_melon_tree, synthetic_corpus


def main():
    tree = green_melon_tree()
    print(f"original: {tree.text()}")
    for order in ("short_first", "long_first", "long_first_headfinal", "random_first"):
        mode = LinearizationMode(order, rng_seed=21)
        flat = " ".join(relinearize(tree, mode))
        print(f"\n{order} (seed 21)")
        print(f"  flat:      {flat}")
        print(f"  bracketed: {relinearize_bracketed(tree, mode)}")

    print("\n== Inversion metrics for the original sentence ==")
    for direction in ("short_first", "long_first"):
        report = inversion_score(tree, direction)
        print(f"  toward {direction}: {report.inversions}/{report.max_inversions} "
              f"(normalized {report.normalized:.3f})")

    print("\n== Corpus order report ==")
    corpus = synthetic_corpus(n_do=200, n_po=200, n_plain=600)
    report = corpus_order_report(corpus)
    print(f"  sentences: {report.sentences} (eligible {report.eligible_sentences})")
    print(f"  short-first fraction: {report.fraction_short_first:.3f} "
          f"(excl. trivial {report.fraction_short_first_excl_trivial:.3f})")
    print(f"  long-first fraction:  {report.fraction_long_first:.3f} "
          f"(excl. trivial {report.fraction_long_first_excl_trivial:.3f})")
    print(f"  mean normalized distance to short-first: {report.mean_normalized_to_short:.3f}")
    print(f"  mean normalized distance to long-first:  {report.mean_normalized_to_long:.3f}")


if __name__ == "__main__":
    main()
