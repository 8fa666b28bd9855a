from collections import Counter

import pytest

from dativekit import (
    AlternationError,
    Alternator,
    TableBackend,
    build_pair,
    choose_preposition,
    detect_loose,
    do_to_po,
    merge_annotations,
    po_to_do,
    read_pairs_jsonl,
    write_pairs_jsonl,
)
from dativekit.alternate import (
    surface_from_instance,
    swap_to_double_object,
    swap_to_prepositional,
)
from dativekit.detect import DativeInstance
from dativekit.treebank import Span
from dativekit.synth import baked_do_tree, sent_po_adjunct_tree


def only_instance(tree):
    instances = detect_loose(tree)
    assert len(instances) == 1
    return instances[0]


def test_po_to_do_canonical(gave_po):
    assert po_to_do(gave_po, only_instance(gave_po)) == [
        "I", "gave", "the", "dog", "a", "bone",
    ]


def test_do_to_po_canonical(gave_do):
    assert do_to_po(gave_do, only_instance(gave_do), "to") == [
        "I", "gave", "a", "bone", "to", "the", "dog",
    ]


def test_trailing_adjunct_untouched():
    tree = sent_po_adjunct_tree()
    assert po_to_do(tree, only_instance(tree)) == [
        "She", "sent", "him", "it", "yesterday",
    ]


def test_benefactive_insertion():
    tree = baked_do_tree()
    assert do_to_po(tree, only_instance(tree), "for") == [
        "She", "baked", "a", "cake", "for", "me",
    ]


def test_overlapping_spans_rejected(gave_do):
    inst = only_instance(gave_do)
    broken = DativeInstance(
        tree_ref=inst.tree_ref,
        verb_index=inst.verb_index,
        verb_lemma=inst.verb_lemma,
        form="DO",
        theme=Span((4, 5, 6), 6),
        recipient=inst.recipient,
    )
    with pytest.raises(AlternationError):
        do_to_po(gave_do, broken, "to")


def test_noncontiguous_span_rejected(gave_do):
    inst = only_instance(gave_do)
    broken = DativeInstance(
        tree_ref=inst.tree_ref,
        verb_index=inst.verb_index,
        verb_lemma=inst.verb_lemma,
        form="DO",
        theme=inst.theme,
        recipient=Span((1, 4), 4),
    )
    with pytest.raises(AlternationError):
        do_to_po(gave_do, broken, "to")


def test_wrong_form_rejected(gave_do):
    with pytest.raises(AlternationError):
        po_to_do(gave_do, only_instance(gave_do))


def test_round_trips_on_all_fixtures(fixtures):
    for fixture in fixtures:
        inst = only_instance(fixture.tree)
        assert inst.form == fixture.form, fixture.tree.sentence_id
        sd = surface_from_instance(fixture.tree, inst)
        if inst.form == "DO":
            there = swap_to_prepositional(sd, "to")
            back = swap_to_double_object(there)
        else:
            there = swap_to_double_object(sd)
            back = swap_to_prepositional(there, inst.preposition)
        assert back.tokens == sd.tokens, fixture.tree.sentence_id
        assert back.verb_pos == sd.verb_pos
        assert back.theme_start == sd.theme_start
        assert back.recipient_start == sd.recipient_start


def test_token_multiset_conservation(fixtures):
    for fixture in fixtures:
        inst = only_instance(fixture.tree)
        if inst.form == "DO":
            do_tokens = fixture.tree.forms()
            po_tokens = do_to_po(fixture.tree, inst, "to")
            prep = "to"
        else:
            po_tokens = fixture.tree.forms()
            do_tokens = po_to_do(fixture.tree, inst)
            prep = inst.preposition
        assert len(po_tokens) == len(do_tokens) + 1
        diff = Counter(po_tokens) - Counter(do_tokens)
        assert diff == Counter({prep: 1})
        # the extra preposition sits immediately before the recipient block
        sd = surface_from_instance(fixture.tree, inst)
        if inst.form == "DO":
            out = swap_to_prepositional(sd, "to")
        else:
            out = sd
        assert out.prep_pos == out.recipient_start - 1


def test_choose_preposition_lexicon(lexicon):
    assert choose_preposition("give", lexicon).prep == "to"
    assert choose_preposition("give", lexicon).source == "lexicon"
    assert choose_preposition("bake", lexicon).prep == "for"


def test_choose_preposition_scorer(lexicon):
    backend = TableBackend({"to variant": (-40.0, 5), "for variant": (-38.0, 5)})
    choice = choose_preposition("zorp", lexicon, backend, ("to variant", "for variant"))
    assert choice.prep == "for"
    assert choice.source == "scorer"
    # classified-both verbs also go through the scorer
    both = choose_preposition("bring", lexicon, backend, ("to variant", "for variant"))
    assert both.prep == "for"


def test_choose_preposition_fallback(lexicon):
    choice = choose_preposition("zorp", lexicon, None)
    assert choice.prep == "to"
    assert choice.source == "fallback"


def test_build_pair_from_do(gave_do, lexicon):
    pair = build_pair(gave_do, only_instance(gave_do), lexicon)
    assert pair.pair_id == "gave_do:2"
    assert pair.attested == "DO"
    assert pair.prep == "to"
    assert pair.do_sentence == ["I", "gave", "the", "dog", "a", "bone"]
    assert pair.po_sentence == ["I", "gave", "a", "bone", "to", "the", "dog"]
    assert pair.theme_len == 2 and pair.recipient_len == 2
    assert not pair.recipient_pronoun and not pair.theme_pronoun
    assert pair.prep_fallback is False


def test_build_pair_from_po(gave_po, lexicon):
    pair = build_pair(gave_po, only_instance(gave_po), lexicon)
    assert pair.attested == "PO"
    assert pair.do_sentence == ["I", "gave", "the", "dog", "a", "bone"]
    assert pair.po_sentence == ["I", "gave", "a", "bone", "to", "the", "dog"]


def test_build_pair_pronoun_flags(lexicon):
    tree = sent_po_adjunct_tree()
    pair = build_pair(tree, only_instance(tree), lexicon)
    assert pair.recipient_pronoun and pair.theme_pronoun


def test_build_pair_fallback_flag(gave_do):
    pair = build_pair(gave_do, only_instance(gave_do), lexicon=None, scorer=None)
    assert pair.prep == "to"
    assert pair.prep_fallback is True


def test_alternator(gave_do, gave_po, lexicon):
    alternator = Alternator(lexicon=lexicon)
    assert alternator.alternant(gave_do, only_instance(gave_do)) == [
        "I", "gave", "a", "bone", "to", "the", "dog",
    ]
    assert alternator.alternant(gave_po, only_instance(gave_po)) == [
        "I", "gave", "the", "dog", "a", "bone",
    ]
    assert alternator.can_transform(gave_do, only_instance(gave_do))


def test_pairs_jsonl_round_trip(tmp_path, fixtures, lexicon):
    pairs = [build_pair(f.tree, only_instance(f.tree), lexicon) for f in fixtures[:10]]
    path = tmp_path / "pairs.jsonl"
    assert write_pairs_jsonl(pairs, path) == 10
    assert read_pairs_jsonl(path) == pairs


def test_merge_annotations(gave_do, lexicon):
    pair = build_pair(gave_do, only_instance(gave_do), lexicon)
    merged = merge_annotations(
        [pair], {pair.pair_id: {"recipient_animate": True, "theme_animate": False}}
    )
    assert merged[0].recipient_animate is True
    assert merged[0].theme_animate is False
    untouched = merge_annotations([pair], {})
    assert untouched[0] == pair
