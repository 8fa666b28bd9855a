"""Surface transforms between double-object and prepositional datives.

The transforms operate on surface token order with contiguous span moves,
not on re-parsed trees: to go PO to DO, delete the preposition and place
the recipient immediately before the theme; to go DO to PO, move the
recipient to immediately after the theme and insert the preposition in
front of it. Everything outside verb/theme/recipient/preposition keeps
its relative order, so the two transforms are mutually inverse.

Instances with overlapping or non-contiguous argument spans are rejected
rather than approximated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .detect import BENEFACTIVE, DO, PO, TO_DATIVE, DativeInstance, VerbLexicon
from .treebank import DepTree

_PREP = -1  # sentinel slot for the inserted preposition


class AlternationError(ValueError):
    """The instance cannot be transformed (malformed or gapped spans)."""


@dataclass(frozen=True)
class SurfaceDative:
    """A dative occurrence located in a flat token list.

    Block coordinates are 0-based positions into ``tokens``; both argument
    blocks are contiguous by construction.
    """

    tokens: tuple[str, ...]
    form: str
    verb_pos: int
    theme_start: int
    theme_len: int
    recipient_start: int
    recipient_len: int
    prep_pos: int | None = None

    @property
    def theme_tokens(self) -> tuple[str, ...]:
        return self.tokens[self.theme_start : self.theme_start + self.theme_len]

    @property
    def recipient_tokens(self) -> tuple[str, ...]:
        return self.tokens[self.recipient_start : self.recipient_start + self.recipient_len]


def surface_from_instance(tree: DepTree, instance: DativeInstance) -> SurfaceDative:
    """Project a detected instance onto surface coordinates, validating it."""
    theme = instance.theme
    recipient = instance.recipient
    if set(theme.token_indices) & set(recipient.token_indices):
        raise AlternationError(
            f"{instance.tree_ref}: theme and recipient spans overlap"
        )
    if not theme.is_contiguous or not recipient.is_contiguous:
        raise AlternationError(f"{instance.tree_ref}: argument span is not contiguous")
    for span in (theme, recipient):
        if instance.verb_index in span.token_indices:
            raise AlternationError(f"{instance.tree_ref}: span contains the verb")
    if instance.form == PO:
        if instance.prep_index is None or instance.preposition is None:
            raise AlternationError(f"{instance.tree_ref}: PO instance lacks a preposition")
        if instance.prep_index in theme.token_indices or instance.prep_index in recipient.token_indices:
            raise AlternationError(f"{instance.tree_ref}: preposition inside an argument span")
    elif instance.form == DO:
        if instance.prep_index is not None:
            raise AlternationError(f"{instance.tree_ref}: DO instance carries a preposition")
    else:
        raise AlternationError(f"{instance.tree_ref}: unknown form {instance.form!r}")
    return SurfaceDative(
        tokens=tuple(tree.forms()),
        form=instance.form,
        verb_pos=instance.verb_index - 1,
        theme_start=theme.start - 1,
        theme_len=len(theme),
        recipient_start=recipient.start - 1,
        recipient_len=len(recipient),
        prep_pos=None if instance.prep_index is None else instance.prep_index - 1,
    )


def _rebuild(sd: SurfaceDative, order: list[int], form: str, prep: str | None) -> SurfaceDative:
    tokens = tuple(prep if p == _PREP else sd.tokens[p] for p in order)
    position = {p: i for i, p in enumerate(order)}
    return SurfaceDative(
        tokens=tokens,
        form=form,
        verb_pos=position[sd.verb_pos],
        theme_start=position[sd.theme_start],
        theme_len=sd.theme_len,
        recipient_start=position[sd.recipient_start],
        recipient_len=sd.recipient_len,
        prep_pos=position.get(_PREP),
    )


def swap_to_double_object(sd: SurfaceDative) -> SurfaceDative:
    """PO to DO: drop the preposition, recipient goes before the theme."""
    if sd.form != PO:
        raise AlternationError(f"expected a PO occurrence, got {sd.form}")
    recipient = list(range(sd.recipient_start, sd.recipient_start + sd.recipient_len))
    dropped = set(recipient) | {sd.prep_pos}
    order: list[int] = []
    for pos in range(len(sd.tokens)):
        if pos in dropped:
            continue
        if pos == sd.theme_start:
            order.extend(recipient)
        order.append(pos)
    return _rebuild(sd, order, DO, None)


def swap_to_prepositional(sd: SurfaceDative, prep: str) -> SurfaceDative:
    """DO to PO: recipient moves after the theme, behind the preposition."""
    if sd.form != DO:
        raise AlternationError(f"expected a DO occurrence, got {sd.form}")
    if prep not in ("to", "for"):
        raise AlternationError(f"preposition must be to or for, got {prep!r}")
    recipient = list(range(sd.recipient_start, sd.recipient_start + sd.recipient_len))
    theme_end = sd.theme_start + sd.theme_len - 1
    order: list[int] = []
    for pos in range(len(sd.tokens)):
        if pos in recipient:
            continue
        order.append(pos)
        if pos == theme_end:
            order.append(_PREP)
            order.extend(recipient)
    return _rebuild(sd, order, PO, prep)


def po_to_do(tree: DepTree, instance: DativeInstance) -> list[str]:
    """The DO realization of an attested PO, as a token list."""
    return list(swap_to_double_object(surface_from_instance(tree, instance)).tokens)


def do_to_po(tree: DepTree, instance: DativeInstance, prep: str) -> list[str]:
    """The PO realization of an attested DO, as a token list."""
    return list(swap_to_prepositional(surface_from_instance(tree, instance), prep).tokens)


@dataclass(frozen=True)
class PrepChoice:
    prep: str
    source: str  # lexicon | scorer | fallback | attested


def choose_preposition(
    verb_lemma: str,
    lexicon: VerbLexicon | None,
    scorer=None,
    candidates: tuple[str, str] | None = None,
) -> PrepChoice:
    """Pick *to* or *for* for a generated PO.

    Lexicon class decides when it can; otherwise the scorer compares the
    two candidate sentences (*to* variant first) and the higher total
    log-probability wins. With no scorer configured the choice falls back
    to *to* and is flagged.
    """
    entry = lexicon.get(verb_lemma) if lexicon is not None else None
    if entry is not None and entry.verb_class == TO_DATIVE:
        return PrepChoice("to", "lexicon")
    if entry is not None and entry.verb_class == BENEFACTIVE:
        return PrepChoice("for", "lexicon")
    if scorer is None:
        return PrepChoice("to", "fallback")
    if candidates is None:
        raise ValueError("scorer-based choice requires the two candidate sentences")
    scored = scorer.score_batch(list(candidates))
    prep = "to" if scored[0].total_logprob >= scored[1].total_logprob else "for"
    return PrepChoice(prep, "scorer")


@dataclass
class AlternationPair:
    """A DO sentence and its PO counterpart for the same event."""

    pair_id: str
    do_sentence: list[str]
    po_sentence: list[str]
    verb_lemma: str
    attested: str
    theme_len: int
    recipient_len: int
    prep: str
    recipient_animate: bool = False
    theme_animate: bool = False
    recipient_pronoun: bool = False
    theme_pronoun: bool = False
    prep_fallback: bool = False

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "do_sentence": list(self.do_sentence),
            "po_sentence": list(self.po_sentence),
            "verb_lemma": self.verb_lemma,
            "attested": self.attested,
            "theme_len": self.theme_len,
            "recipient_len": self.recipient_len,
            "prep": self.prep,
            "recipient_animate": self.recipient_animate,
            "theme_animate": self.theme_animate,
            "recipient_pronoun": self.recipient_pronoun,
            "theme_pronoun": self.theme_pronoun,
            "prep_fallback": self.prep_fallback,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AlternationPair":
        return cls(
            pair_id=data["pair_id"],
            do_sentence=list(data["do_sentence"]),
            po_sentence=list(data["po_sentence"]),
            verb_lemma=data["verb_lemma"],
            attested=data["attested"],
            theme_len=data["theme_len"],
            recipient_len=data["recipient_len"],
            prep=data["prep"],
            recipient_animate=bool(data.get("recipient_animate", False)),
            theme_animate=bool(data.get("theme_animate", False)),
            recipient_pronoun=bool(data.get("recipient_pronoun", False)),
            theme_pronoun=bool(data.get("theme_pronoun", False)),
            prep_fallback=bool(data.get("prep_fallback", False)),
        )


def build_pair(
    tree: DepTree,
    instance: DativeInstance,
    lexicon: VerbLexicon | None = None,
    scorer=None,
) -> AlternationPair:
    """Pair an attested dative with its generated alternant."""
    pair_id = f"{tree.sentence_id}:{instance.verb_index}"
    sd = surface_from_instance(tree, instance)
    if instance.form == DO:
        to_variant = swap_to_prepositional(sd, "to")
        for_variant = swap_to_prepositional(sd, "for")
        try:
            choice = choose_preposition(
                instance.verb_lemma,
                lexicon,
                scorer,
                (" ".join(to_variant.tokens), " ".join(for_variant.tokens)),
            )
        except Exception as exc:  # noqa: BLE001 - name the failing pair
            raise AlternationError(f"pair {pair_id}: preposition choice failed: {exc}") from exc
        do_tokens = list(sd.tokens)
        po_tokens = list((to_variant if choice.prep == "to" else for_variant).tokens)
    else:
        choice = PrepChoice(instance.preposition or "to", "attested")
        do_tokens = list(swap_to_double_object(sd).tokens)
        po_tokens = list(sd.tokens)
    return AlternationPair(
        pair_id=pair_id,
        do_sentence=do_tokens,
        po_sentence=po_tokens,
        verb_lemma=instance.verb_lemma,
        attested=instance.form,
        theme_len=len(instance.theme),
        recipient_len=len(instance.recipient),
        prep=choice.prep,
        recipient_pronoun=tree.token(instance.recipient.head_index).upos == "PRON",
        theme_pronoun=tree.token(instance.theme.head_index).upos == "PRON",
        prep_fallback=choice.source == "fallback",
    )


class Alternator:
    """Produces the unattested alternant sentence for a detected instance."""

    def __init__(self, lexicon: VerbLexicon | None = None, scorer=None):
        self.lexicon = lexicon
        self.scorer = scorer

    def can_transform(self, tree: DepTree, instance: DativeInstance) -> bool:
        try:
            surface_from_instance(tree, instance)
        except AlternationError:
            return False
        return True

    def alternant(self, tree: DepTree, instance: DativeInstance) -> list[str]:
        sd = surface_from_instance(tree, instance)
        if instance.form == PO:
            return list(swap_to_double_object(sd).tokens)
        to_variant = swap_to_prepositional(sd, "to")
        for_variant = swap_to_prepositional(sd, "for")
        choice = choose_preposition(
            instance.verb_lemma,
            self.lexicon,
            self.scorer,
            (" ".join(to_variant.tokens), " ".join(for_variant.tokens)),
        )
        return list((to_variant if choice.prep == "to" else for_variant).tokens)


def write_pairs_jsonl(pairs: Iterable[AlternationPair], path: Path | str) -> int:
    count = 0
    with Path(path).open("w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair.to_dict(), sort_keys=True) + "\n")
            count += 1
    return count


def read_pairs_jsonl(path: Path | str) -> list[AlternationPair]:
    out = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                out.append(AlternationPair.from_dict(json.loads(line)))
    return out


def merge_annotations(
    pairs: Sequence[AlternationPair], annotations: Mapping[str, Mapping] | Path | str
) -> list[AlternationPair]:
    """Overlay sidecar animacy/pronominality labels keyed by pair_id."""
    if not isinstance(annotations, Mapping):
        table: dict[str, Mapping] = {}
        with Path(annotations).open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    record = json.loads(line)
                    table[record["pair_id"]] = record
        annotations = table
    merged = []
    fields = ("recipient_animate", "theme_animate", "recipient_pronoun", "theme_pronoun")
    for pair in pairs:
        extra = annotations.get(pair.pair_id)
        if extra:
            updates = {k: bool(extra[k]) for k in fields if k in extra}
            pair = replace(pair, **updates)
        merged.append(pair)
    return merged
