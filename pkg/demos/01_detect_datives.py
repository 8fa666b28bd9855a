"""Walkthrough: detecting datives in a dependency-parsed corpus.

Builds a small corpus from the bundled parse fixtures, runs loose and
strict detection, and partitions the corpus into dative / excluded /
non-dative sentences.
"""

from dativekit import (
    VerbLexicon,
    apply_strict,
    detect_2postverbal,
    detect_loose,
    partition_corpus,
)
from dativekit.synth import (
    gave_do_tree,
    gave_po_tree,
    baked_po_tree,
    he_ran_tree,
    played_japan_tree,
    sprayed_wall_tree,
    telling_tree,
)


def show_instances(tree):
    print(f"\n  {tree.text()!r}")
    instances = detect_loose(tree)
    if not instances:
        print("    no dative found")
    for inst in instances:
        recipient = " ".join(tree.token(i).form for i in inst.recipient.token_indices)
        theme = " ".join(tree.token(i).form for i in inst.theme.token_indices)
        marker = f" prep={inst.preposition}" if inst.preposition else ""
        print(f"    {inst.form} verb={inst.verb_lemma}{marker} "
              f"recipient={recipient!r} theme={theme!r}")
    print(f"    two postverbal arguments: {detect_2postverbal(tree)}")


def main():
    print("== Loose detection on single sentences ==")
    for tree in (gave_do_tree(), gave_po_tree(), baked_po_tree(),
                 sprayed_wall_tree(), he_ran_tree()):
        show_instances(tree)

    print("\n== Strict refinement against the bundled verb lexicon ==")
    lexicon = VerbLexicon.bundled()
    loose = detect_loose(gave_po_tree())
    for inst in apply_strict(loose, lexicon):
        print(f"  {inst.verb_lemma} as {inst.form}: strict={inst.strict}")

    print("\n== Corpus partition ==")
    corpus = [
        gave_do_tree(), gave_po_tree(), telling_tree(),
        played_japan_tree(), he_ran_tree(), sprayed_wall_tree(),
    ]
    partition = partition_corpus(corpus, lexicon=lexicon)
    print(f"  datives:        {sorted(partition.dative_ids)}")
    print(f"  ambiguous:      {sorted(partition.ambiguous_ids)}")
    print(f"  non-datives:    {sorted(partition.non_dative_ids)}")
    print(f"  two-postverbal: {sorted(partition.two_postverbal_ids)}")
    print(f"  instances found: {len(partition.instances)}")


if __name__ == "__main__":
    main()
