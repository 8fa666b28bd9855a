"""Hand-built parse fixtures and synthetic corpus generators.

The dative fixture set enumerates canonical double-object and
prepositional parses over varied argument shapes (pronouns, bare and
modified noun phrases, proper names, noun phrases with trailing
preposition phrases), plus non-dative, exclusion-pattern, and
two-postverbal sentences. ``synthetic_corpus`` cycles the same templates
to arbitrary scale for corpus-level runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .treebank import DepTree, Token

# A chunk row is (form, lemma, upos, rel_head, deprel); rel_head is the
# 0-based row index of the governor inside the chunk, or -1 for the chunk
# head, which attaches to the enclosing sentence.
Row = tuple[str, str, str, int, str]


@dataclass(frozen=True)
class Chunk:
    rows: tuple[Row, ...]
    head: int


def np_pron(form: str) -> Chunk:
    return Chunk(((form, form.lower(), "PRON", -1, ""),), 0)


def np_propn(form: str) -> Chunk:
    return Chunk(((form, form, "PROPN", -1, ""),), 0)


def np_det(det: str, noun: str) -> Chunk:
    return Chunk(
        (
            (det, det.lower(), "DET", 1, "det"),
            (noun, noun, "NOUN", -1, ""),
        ),
        1,
    )


def np_det_adj(det: str, adj: str, noun: str) -> Chunk:
    return Chunk(
        (
            (det, det.lower(), "DET", 2, "det"),
            (adj, adj, "ADJ", 2, "amod"),
            (noun, noun, "NOUN", -1, ""),
        ),
        2,
    )


def np_det_noun_pp(det: str, noun: str, prep: str, pdet: str, pnoun: str) -> Chunk:
    return Chunk(
        (
            (det, det.lower(), "DET", 1, "det"),
            (noun, noun, "NOUN", -1, ""),
            (prep, prep, "ADP", 1, "prep"),
            (pdet, pdet.lower(), "DET", 4, "det"),
            (pnoun, pnoun, "NOUN", 2, "pobj"),
        ),
        1,
    )


def _attach(chunk: Chunk, base: int, ext_head: int, ext_deprel: str) -> list[Token]:
    tokens = []
    for offset, (form, lemma, upos, rel, deprel) in enumerate(chunk.rows):
        tokens.append(
            Token(
                index=base + offset + 1,
                form=form,
                lemma=lemma,
                upos=upos,
                head=ext_head if rel == -1 else base + rel + 1,
                deprel=ext_deprel if rel == -1 else deprel,
            )
        )
    return tokens


def build_tree(sentence_id: str, rows: Sequence[Row | tuple]) -> DepTree:
    """Build a tree from absolute (form, lemma, upos, head, deprel) rows."""
    tokens = [
        Token(index=i + 1, form=r[0], lemma=r[1], upos=r[2], head=r[3], deprel=r[4])
        for i, r in enumerate(rows)
    ]
    return DepTree(tokens=tokens, sentence_id=sentence_id)


def _finish(
    sentence_id: str,
    tokens: list[Token],
    verb_index: int,
    adjunct: str | None,
    punct: bool,
) -> DepTree:
    if adjunct is not None:
        tokens.append(
            Token(len(tokens) + 1, adjunct, adjunct, "NOUN", verb_index, "npadvmod")
        )
    if punct:
        tokens.append(Token(len(tokens) + 1, ".", ".", "PUNCT", verb_index, "punct"))
    return DepTree(tokens=tokens, sentence_id=sentence_id)


def do_sentence(
    sentence_id: str,
    subject: Chunk,
    verb_form: str,
    verb_lemma: str,
    recipient: Chunk,
    theme: Chunk,
    recipient_label: str = "dative",
    adjunct: str | None = None,
    punct: bool = False,
) -> DepTree:
    """Subject, verb, recipient, theme; the double-object layout."""
    verb_index = len(subject.rows) + 1
    tokens = _attach(subject, 0, verb_index, "nsubj")
    tokens.append(Token(verb_index, verb_form, verb_lemma, "VERB", 0, "root"))
    base = verb_index
    tokens.extend(_attach(recipient, base, verb_index, recipient_label))
    base += len(recipient.rows)
    tokens.extend(_attach(theme, base, verb_index, "dobj"))
    return _finish(sentence_id, tokens, verb_index, adjunct, punct)


def po_sentence(
    sentence_id: str,
    subject: Chunk,
    verb_form: str,
    verb_lemma: str,
    theme: Chunk,
    prep: str,
    recipient: Chunk,
    prep_label: str = "dative",
    adjunct: str | None = None,
    punct: bool = False,
) -> DepTree:
    """Subject, verb, theme, preposition, recipient; the PO layout."""
    verb_index = len(subject.rows) + 1
    tokens = _attach(subject, 0, verb_index, "nsubj")
    tokens.append(Token(verb_index, verb_form, verb_lemma, "VERB", 0, "root"))
    base = verb_index
    tokens.extend(_attach(theme, base, verb_index, "dobj"))
    base += len(theme.rows)
    prep_index = base + 1
    tokens.append(Token(prep_index, prep, prep, "ADP", verb_index, prep_label))
    tokens.extend(_attach(recipient, prep_index, prep_index, "pobj"))
    return _finish(sentence_id, tokens, verb_index, adjunct, punct)


# Canonical single-sentence fixtures.


def gave_do_tree(sentence_id: str = "gave_do") -> DepTree:
    """I gave the dog a bone."""
    return do_sentence(sentence_id, np_pron("I"), "gave", "give", np_det("the", "dog"), np_det("a", "bone"))


def gave_po_tree(sentence_id: str = "gave_po") -> DepTree:
    """I gave a bone to the dog."""
    return po_sentence(
        sentence_id, np_pron("I"), "gave", "give", np_det("a", "bone"), "to", np_det("the", "dog")
    )


def baked_do_tree(sentence_id: str = "baked_do") -> DepTree:
    """She baked me a cake."""
    return do_sentence(sentence_id, np_pron("She"), "baked", "bake", np_pron("me"), np_det("a", "cake"))


def baked_po_tree(sentence_id: str = "baked_po") -> DepTree:
    """She baked a cake for me."""
    return po_sentence(
        sentence_id, np_pron("She"), "baked", "bake", np_det("a", "cake"), "for", np_pron("me")
    )


def sent_po_adjunct_tree(sentence_id: str = "sent_po") -> DepTree:
    """She sent it to him yesterday."""
    return po_sentence(
        sentence_id, np_pron("She"), "sent", "send", np_pron("it"), "to", np_pron("him"),
        adjunct="yesterday",
    )


def green_melon_tree(sentence_id: str = "melon") -> DepTree:
    """he uses a fork to eat the green melon from the shop (lowercased)."""
    return build_tree(
        sentence_id,
        [
            ("he", "he", "PRON", 2, "nsubj"),
            ("uses", "use", "VERB", 0, "root"),
            ("a", "a", "DET", 4, "det"),
            ("fork", "fork", "NOUN", 2, "dobj"),
            ("to", "to", "PART", 6, "aux"),
            ("eat", "eat", "VERB", 2, "xcomp"),
            ("the", "the", "DET", 9, "det"),
            ("green", "green", "ADJ", 9, "amod"),
            ("melon", "melon", "NOUN", 6, "dobj"),
            ("from", "from", "ADP", 9, "prep"),
            ("the", "the", "DET", 12, "det"),
            ("shop", "shop", "NOUN", 10, "pobj"),
        ],
    )


def he_ran_tree(sentence_id: str = "he_ran") -> DepTree:
    return build_tree(
        sentence_id,
        [("He", "he", "PRON", 2, "nsubj"), ("ran", "run", "VERB", 0, "root")],
    )


def eats_melon_tree(sentence_id: str = "eats_melon") -> DepTree:
    """He eats the green melon."""
    return build_tree(
        sentence_id,
        [
            ("He", "he", "PRON", 2, "nsubj"),
            ("eats", "eat", "VERB", 0, "root"),
            ("the", "the", "DET", 5, "det"),
            ("green", "green", "ADJ", 5, "amod"),
            ("melon", "melon", "NOUN", 2, "dobj"),
        ],
    )


def eats_melon_fork_tree(sentence_id: str = "eats_melon_fork") -> DepTree:
    """He eats the green melon from the shop with a fork."""
    return build_tree(
        sentence_id,
        [
            ("He", "he", "PRON", 2, "nsubj"),
            ("eats", "eat", "VERB", 0, "root"),
            ("the", "the", "DET", 5, "det"),
            ("green", "green", "ADJ", 5, "amod"),
            ("melon", "melon", "NOUN", 2, "dobj"),
            ("from", "from", "ADP", 5, "prep"),
            ("the", "the", "DET", 8, "det"),
            ("shop", "shop", "NOUN", 6, "pobj"),
            ("with", "with", "ADP", 2, "prep"),
            ("a", "a", "DET", 11, "det"),
            ("fork", "fork", "NOUN", 9, "pobj"),
        ],
    )


def sprayed_wall_tree(sentence_id: str = "sprayed_wall") -> DepTree:
    """Jack sprayed the wall with the paint."""
    return build_tree(
        sentence_id,
        [
            ("Jack", "Jack", "PROPN", 2, "nsubj"),
            ("sprayed", "spray", "VERB", 0, "root"),
            ("the", "the", "DET", 4, "det"),
            ("wall", "wall", "NOUN", 2, "dobj"),
            ("with", "with", "ADP", 2, "prep"),
            ("the", "the", "DET", 7, "det"),
            ("paint", "paint", "NOUN", 5, "pobj"),
        ],
    )


def put_book_tree(sentence_id: str = "put_book") -> DepTree:
    """He put the book on the table."""
    return build_tree(
        sentence_id,
        [
            ("He", "he", "PRON", 2, "nsubj"),
            ("put", "put", "VERB", 0, "root"),
            ("the", "the", "DET", 4, "det"),
            ("book", "book", "NOUN", 2, "dobj"),
            ("on", "on", "ADP", 2, "prep"),
            ("the", "the", "DET", 7, "det"),
            ("table", "table", "NOUN", 5, "pobj"),
        ],
    )


def telling_tree(sentence_id: str = "telling") -> DepTree:
    """So you 're telling me this is over ? (object plus clausal complement)."""
    return build_tree(
        sentence_id,
        [
            ("So", "so", "ADV", 4, "advmod"),
            ("you", "you", "PRON", 4, "nsubj"),
            ("'re", "be", "AUX", 4, "aux"),
            ("telling", "tell", "VERB", 0, "root"),
            ("me", "me", "PRON", 4, "dobj"),
            ("this", "this", "PRON", 7, "nsubj"),
            ("is", "be", "AUX", 4, "ccomp"),
            ("over", "over", "ADV", 7, "advmod"),
            ("?", "?", "PUNCT", 4, "punct"),
        ],
    )


def played_japan_tree(sentence_id: str = "played_japan") -> DepTree:
    """He played 38 games for Japan until 1971 (bare *for* phrase)."""
    return build_tree(
        sentence_id,
        [
            ("He", "he", "PRON", 2, "nsubj"),
            ("played", "play", "VERB", 0, "root"),
            ("38", "38", "NUM", 4, "nummod"),
            ("games", "game", "NOUN", 2, "dobj"),
            ("for", "for", "ADP", 2, "prep"),
            ("Japan", "Japan", "PROPN", 5, "pobj"),
            ("until", "until", "ADP", 2, "prep"),
            ("1971", "1971", "NUM", 7, "pobj"),
        ],
    )


def she_sleeps_tree(sentence_id: str = "she_sleeps") -> DepTree:
    return build_tree(
        sentence_id,
        [
            ("She", "she", "PRON", 2, "nsubj"),
            ("sleeps", "sleep", "VERB", 0, "root"),
            ("soundly", "soundly", "ADV", 2, "advmod"),
        ],
    )


# Vocabulary for the enumerated fixture set.

TO_VERBS = (
    ("gave", "give"), ("sent", "send"), ("told", "tell"), ("showed", "show"),
    ("offered", "offer"), ("handed", "hand"), ("sold", "sell"), ("paid", "pay"),
    ("taught", "teach"), ("threw", "throw"), ("mailed", "mail"), ("lent", "lend"),
    ("served", "serve"), ("read", "read"), ("wrote", "write"),
)
FOR_VERBS = (
    ("baked", "bake"), ("made", "make"), ("bought", "buy"), ("cooked", "cook"),
    ("built", "build"), ("found", "find"), ("poured", "pour"), ("saved", "save"),
    ("fetched", "fetch"), ("knitted", "knit"),
)
BOTH_VERBS = (("brought", "bring"), ("left", "leave"))

_SUBJECTS = (
    np_pron("I"), np_pron("She"), np_pron("He"), np_pron("They"),
    np_pron("We"), np_propn("Sam"),
)
_RECIPIENTS = (
    np_det("the", "dog"), np_pron("him"), np_det("the", "teacher"), np_pron("me"),
    np_det_adj("the", "old", "man"), np_propn("Mary"), np_det("a", "friend"),
    np_pron("them"), np_det("the", "children"), np_det_noun_pp("the", "man", "from", "the", "shop"),
    np_det("the", "students"), np_pron("her"),
)
_THEMES = (
    np_det("a", "bone"), np_det("the", "letter"), np_det_adj("a", "long", "letter"),
    np_pron("it"), np_det("the", "keys"), np_det_adj("the", "green", "melon"),
    np_det("a", "cake"), np_det("some", "money"), np_det_noun_pp("the", "book", "from", "the", "library"),
    np_det("the", "ball"), np_det("an", "apple"), np_det("a", "story"),
)
_ADJUNCTS = (None, "yesterday", None, "today")


@dataclass(frozen=True)
class DativeFixture:
    tree: DepTree
    form: str  # attested form, DO or PO
    prep: str | None
    verb_lemma: str


def dative_fixture_set() -> list[DativeFixture]:
    """Hand-built dative parses spanning forms, shapes, and labels."""
    fixtures = [
        DativeFixture(gave_do_tree("fix_do_000"), "DO", None, "give"),
        DativeFixture(gave_po_tree("fix_po_000"), "PO", "to", "give"),
        DativeFixture(baked_do_tree("fix_do_001"), "DO", None, "bake"),
        DativeFixture(baked_po_tree("fix_po_001"), "PO", "for", "bake"),
        DativeFixture(sent_po_adjunct_tree("fix_po_002"), "PO", "to", "send"),
    ]
    counter = 10
    for i, (verb_form, verb_lemma) in enumerate(TO_VERBS):
        fixtures.append(
            DativeFixture(
                do_sentence(
                    f"fix_do_{counter:03d}",
                    _SUBJECTS[i % len(_SUBJECTS)],
                    verb_form,
                    verb_lemma,
                    _RECIPIENTS[i % len(_RECIPIENTS)],
                    _THEMES[i % len(_THEMES)],
                    recipient_label="dative" if i % 2 == 0 else "dobj",
                    adjunct=_ADJUNCTS[i % len(_ADJUNCTS)],
                    punct=i % 3 == 0,
                ),
                "DO",
                None,
                verb_lemma,
            )
        )
        fixtures.append(
            DativeFixture(
                po_sentence(
                    f"fix_po_{counter:03d}",
                    _SUBJECTS[(i + 1) % len(_SUBJECTS)],
                    verb_form,
                    verb_lemma,
                    _THEMES[(i + 3) % len(_THEMES)],
                    "to",
                    _RECIPIENTS[(i + 2) % len(_RECIPIENTS)],
                    prep_label="dative" if i % 2 == 0 else "prep",
                    adjunct=_ADJUNCTS[(i + 1) % len(_ADJUNCTS)],
                    punct=i % 3 == 1,
                ),
                "PO",
                "to",
                verb_lemma,
            )
        )
        counter += 1
    for i, (verb_form, verb_lemma) in enumerate(FOR_VERBS):
        fixtures.append(
            DativeFixture(
                do_sentence(
                    f"fix_do_{counter:03d}",
                    _SUBJECTS[(i + 2) % len(_SUBJECTS)],
                    verb_form,
                    verb_lemma,
                    _RECIPIENTS[(i + 5) % len(_RECIPIENTS)],
                    _THEMES[(i + 1) % len(_THEMES)],
                    recipient_label="dative",
                    adjunct=_ADJUNCTS[(i + 2) % len(_ADJUNCTS)],
                ),
                "DO",
                None,
                verb_lemma,
            )
        )
        fixtures.append(
            DativeFixture(
                po_sentence(
                    f"fix_po_{counter:03d}",
                    _SUBJECTS[(i + 3) % len(_SUBJECTS)],
                    verb_form,
                    verb_lemma,
                    _THEMES[(i + 7) % len(_THEMES)],
                    "for",
                    _RECIPIENTS[(i + 4) % len(_RECIPIENTS)],
                    prep_label="dative",  # bare *for* phrases do not count
                    punct=i % 2 == 0,
                ),
                "PO",
                "for",
                verb_lemma,
            )
        )
        counter += 1
    for i, (verb_form, verb_lemma) in enumerate(BOTH_VERBS):
        fixtures.append(
            DativeFixture(
                do_sentence(
                    f"fix_do_{counter:03d}",
                    _SUBJECTS[i], verb_form, verb_lemma,
                    _RECIPIENTS[(i + 7) % len(_RECIPIENTS)],
                    _THEMES[(i + 5) % len(_THEMES)],
                ),
                "DO",
                None,
                verb_lemma,
            )
        )
        fixtures.append(
            DativeFixture(
                po_sentence(
                    f"fix_po_{counter:03d}",
                    _SUBJECTS[i + 1], verb_form, verb_lemma,
                    _THEMES[(i + 9) % len(_THEMES)],
                    "to",
                    _RECIPIENTS[(i + 8) % len(_RECIPIENTS)],
                ),
                "PO",
                "to",
                verb_lemma,
            )
        )
        counter += 1
    return fixtures


def non_dative_fixtures() -> list[DepTree]:
    return [
        he_ran_tree(),
        eats_melon_tree(),
        she_sleeps_tree(),
        eats_melon_fork_tree(),
        sprayed_wall_tree(),
        put_book_tree(),
    ]


def ambiguous_fixtures() -> list[DepTree]:
    return [telling_tree(), played_japan_tree()]


def mixed_fixture_corpus() -> list[DepTree]:
    """Every fixture family together, for partition-style tests."""
    trees = [fixture.tree for fixture in dative_fixture_set()]
    trees.extend(non_dative_fixtures())
    trees.extend(ambiguous_fixtures())
    return trees


def random_tree(sentence_id: str, n_tokens: int, rng: random.Random) -> DepTree:
    """A random single-rooted tree over ``n_tokens`` surface positions."""
    if n_tokens < 1:
        raise ValueError("need at least one token")
    order = list(range(1, n_tokens + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for k in range(1, n_tokens):
        heads[order[k]] = order[rng.randrange(k)]
    tokens = [
        Token(i, f"w{i}", f"w{i}", "NOUN", heads[i], "dep")
        for i in range(1, n_tokens + 1)
    ]
    return DepTree(tokens=tokens, sentence_id=sentence_id)


_PLAIN_BUILDERS = (he_ran_tree, eats_melon_tree, she_sleeps_tree)
_TWO_POSTVERBAL_BUILDERS = (eats_melon_fork_tree, sprayed_wall_tree, put_book_tree)
_AMBIGUOUS_BUILDERS = (telling_tree, played_japan_tree)


def synthetic_corpus(
    n_do: int = 0,
    n_po: int = 0,
    n_plain: int = 0,
    n_ambiguous: int = 0,
    n_two_postverbal: int = 0,
    id_prefix: str = "syn",
) -> list[DepTree]:
    """Deterministically cycle the fixture templates up to the given counts."""
    trees: list[DepTree] = []
    verbs = TO_VERBS + FOR_VERBS
    for i in range(n_do):
        verb_form, verb_lemma = verbs[i % len(verbs)]
        trees.append(
            do_sentence(
                f"{id_prefix}d{i:07d}",
                _SUBJECTS[i % len(_SUBJECTS)],
                verb_form,
                verb_lemma,
                _RECIPIENTS[i % len(_RECIPIENTS)],
                _THEMES[i % len(_THEMES)],
                recipient_label="dative" if i % 2 == 0 else "dobj",
                adjunct=_ADJUNCTS[i % len(_ADJUNCTS)],
            )
        )
    for i in range(n_po):
        verb_form, verb_lemma = verbs[(i + 3) % len(verbs)]
        prep = "for" if verb_lemma in {v for _, v in FOR_VERBS} else "to"
        trees.append(
            po_sentence(
                f"{id_prefix}p{i:07d}",
                _SUBJECTS[(i + 1) % len(_SUBJECTS)],
                verb_form,
                verb_lemma,
                _THEMES[(i + 2) % len(_THEMES)],
                prep,
                _RECIPIENTS[(i + 1) % len(_RECIPIENTS)],
                prep_label="dative" if prep == "for" or i % 2 == 0 else "prep",
            )
        )
    for i in range(n_plain):
        trees.append(_PLAIN_BUILDERS[i % len(_PLAIN_BUILDERS)](f"{id_prefix}n{i:07d}"))
    for i in range(n_ambiguous):
        trees.append(_AMBIGUOUS_BUILDERS[i % len(_AMBIGUOUS_BUILDERS)](f"{id_prefix}a{i:07d}"))
    for i in range(n_two_postverbal):
        trees.append(
            _TWO_POSTVERBAL_BUILDERS[i % len(_TWO_POSTVERBAL_BUILDERS)](f"{id_prefix}t{i:07d}")
        )
    return trees
