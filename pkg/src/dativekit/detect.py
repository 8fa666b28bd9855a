"""Dative detection over dependency parses.

Detection comes in two grains. The loose pass matches dependency patterns:
a double-object (DO) dative is a verb governing an indirect-object
dependent plus a direct object, or two direct objects; a prepositional
(PO) dative is a verb governing a direct object (the theme) plus a *to*
phrase under an indirect-object or preposition relation, or a *for*
phrase under an indirect-object relation, whose object is the recipient.
The strict pass keeps only loose matches whose verb a curated lexicon
licenses in that form.

The matcher deliberately favors recall over precision: borderline parses
produce an instance, and filtering happens downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .treebank import DepTree, Span, Token, subtree_span

DO = "DO"
PO = "PO"

TO_DATIVE = "to-dative"
BENEFACTIVE = "benefactive"
BOTH = "both"
VERB_CLASSES = (TO_DATIVE, BENEFACTIVE, BOTH)


@dataclass(frozen=True)
class DetectionConfig:
    """Dependency label inventory and sanity checks used by the matcher.

    Defaults follow the spaCy-style labels (``dobj``/``dative``/``prep``/
    ``pobj``); swap in another inventory for other parser conventions.
    """

    dobj_labels: frozenset[str] = frozenset({"dobj"})
    dative_labels: frozenset[str] = frozenset({"dative"})
    prep_labels: frozenset[str] = frozenset({"prep"})
    pobj_labels: frozenset[str] = frozenset({"pobj"})
    clausal_labels: frozenset[str] = frozenset({"ccomp", "xcomp"})
    dative_preps: frozenset[str] = frozenset({"to", "for"})
    verb_upos: frozenset[str] = frozenset({"VERB"})
    argument_upos: frozenset[str] = frozenset({"NOUN", "PROPN", "PRON", "DET"})
    require_postverbal: bool = True


DEFAULT_CONFIG = DetectionConfig()


@dataclass(frozen=True)
class DativeInstance:
    """One detected dative occurrence, anchored to its sentence.

    ``preposition`` is None for DO instances; for PO instances it is the
    marker form and ``prep_index`` its token index.
    """

    tree_ref: str
    verb_index: int
    verb_lemma: str
    form: str
    theme: Span
    recipient: Span
    preposition: str | None = None
    prep_index: int | None = None
    strict: bool = False

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.tree_ref,
            "verb_index": self.verb_index,
            "verb_lemma": self.verb_lemma,
            "form": self.form,
            "theme": {"indices": list(self.theme.token_indices), "head": self.theme.head_index},
            "recipient": {
                "indices": list(self.recipient.token_indices),
                "head": self.recipient.head_index,
            },
            "preposition": self.preposition,
            "prep_index": self.prep_index,
            "strict": self.strict,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "DativeInstance":
        return cls(
            tree_ref=data["sentence_id"],
            verb_index=data["verb_index"],
            verb_lemma=data["verb_lemma"],
            form=data["form"],
            theme=Span(tuple(data["theme"]["indices"]), data["theme"]["head"]),
            recipient=Span(tuple(data["recipient"]["indices"]), data["recipient"]["head"]),
            preposition=data.get("preposition"),
            prep_index=data.get("prep_index"),
            strict=bool(data.get("strict", False)),
        )


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    verb_class: str
    alternates: bool
    allowed_forms: frozenset[str]


class VerbLexicon:
    """Levin-style verb classification consumed as a small data file.

    File format is line oriented and tab separated:
    ``lemma<TAB>class<TAB>alternates<TAB>allowed_forms`` where class is one
    of ``to-dative``/``benefactive``/``both``, alternates is ``true`` or
    ``false``, and allowed_forms is a comma-joined subset of ``DO,PO``.
    """

    def __init__(self, entries: Mapping[str, LexiconEntry]):
        self._entries = dict(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self._entries

    def get(self, lemma: str) -> LexiconEntry | None:
        return self._entries.get(lemma.lower())

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "VerbLexicon":
        entries: dict[str, LexiconEntry] = {}
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise ValueError(f"lexicon line needs 4 tab-separated fields: {line!r}")
            lemma, verb_class, alternates, forms = cols
            if verb_class not in VERB_CLASSES:
                raise ValueError(f"unknown verb class {verb_class!r} for {lemma!r}")
            allowed = frozenset(f.strip() for f in forms.split(",") if f.strip())
            if not allowed <= {DO, PO}:
                raise ValueError(f"allowed forms must be within DO,PO: {forms!r}")
            entries[lemma.lower()] = LexiconEntry(
                lemma=lemma.lower(),
                verb_class=verb_class,
                alternates=alternates.strip().lower() in ("true", "1", "yes"),
                allowed_forms=allowed,
            )
        return cls(entries)

    @classmethod
    def from_file(cls, path: Path | str) -> "VerbLexicon":
        with Path(path).open("r", encoding="utf-8") as handle:
            return cls.from_lines(handle)

    @classmethod
    def bundled(cls) -> "VerbLexicon":
        """The lexicon shipped with the package (test verbs and fixtures)."""
        text = resources.files("dativekit.data").joinpath("verb_lexicon.tsv").read_text("utf-8")
        return cls.from_lines(text.splitlines())


def _prep_object(tree: DepTree, prep_index: int, config: DetectionConfig) -> int | None:
    for child in tree.children(prep_index):
        if tree.token(child).deprel in config.pobj_labels:
            return child
    return None


def _argument_ok(tree: DepTree, span: Span, verb_index: int, config: DetectionConfig) -> bool:
    if tree.token(span.head_index).upos not in config.argument_upos:
        return False
    if config.require_postverbal and span.start <= verb_index:
        return False
    return True


def _disjoint(a: Span, b: Span) -> bool:
    return not set(a.token_indices) & set(b.token_indices)


def _try_double_object(
    tree: DepTree, verb: Token, recipient_head: int, theme_head: int, config: DetectionConfig
) -> DativeInstance | None:
    recipient = subtree_span(tree, recipient_head)
    theme = subtree_span(tree, theme_head)
    if not _disjoint(recipient, theme):
        return None
    if not (_argument_ok(tree, recipient, verb.index, config)
            and _argument_ok(tree, theme, verb.index, config)):
        return None
    return DativeInstance(
        tree_ref=tree.sentence_id,
        verb_index=verb.index,
        verb_lemma=verb.lemma.lower(),
        form=DO,
        theme=theme,
        recipient=recipient,
    )


def _try_prepositional(
    tree: DepTree,
    verb: Token,
    theme_head: int,
    prep_index: int,
    prep_form: str,
    pobj_index: int,
    config: DetectionConfig,
) -> DativeInstance | None:
    theme = subtree_span(tree, theme_head)
    recipient = subtree_span(tree, pobj_index)
    if prep_index in theme.token_indices or prep_index in recipient.token_indices:
        return None
    if not _disjoint(recipient, theme):
        return None
    if config.require_postverbal and prep_index <= verb.index:
        return None
    if not (_argument_ok(tree, recipient, verb.index, config)
            and _argument_ok(tree, theme, verb.index, config)):
        return None
    return DativeInstance(
        tree_ref=tree.sentence_id,
        verb_index=verb.index,
        verb_lemma=verb.lemma.lower(),
        form=PO,
        theme=theme,
        recipient=recipient,
        preposition=prep_form,
        prep_index=prep_index,
    )


def _detect_at_verb(tree: DepTree, verb: Token, config: DetectionConfig) -> DativeInstance | None:
    deps = tree.children(verb.index)
    dobjs = [d for d in deps if tree.token(d).deprel in config.dobj_labels]
    dative_nominals: list[int] = []
    prep_candidates: list[tuple[int, str, int]] = []
    for dep in deps:
        tok = tree.token(dep)
        form = tok.form.lower()
        if tok.deprel in config.dative_labels:
            pobj = _prep_object(tree, dep, config)
            if form in config.dative_preps and pobj is not None:
                prep_candidates.append((dep, form, pobj))
            else:
                dative_nominals.append(dep)
        elif tok.deprel in config.prep_labels and form == "to":
            # A bare *to* phrase counts; *for* needs the indirect-object label.
            pobj = _prep_object(tree, dep, config)
            if pobj is not None:
                prep_candidates.append((dep, form, pobj))
    # Double object via an indirect-object dependent plus a direct object.
    for recipient_head in dative_nominals:
        for theme_head in dobjs:
            instance = _try_double_object(tree, verb, recipient_head, theme_head, config)
            if instance is not None:
                return instance
    # Double object via two direct objects; the earlier one is the recipient.
    for i in range(len(dobjs)):
        for j in range(i + 1, len(dobjs)):
            instance = _try_double_object(tree, verb, dobjs[i], dobjs[j], config)
            if instance is not None:
                return instance
    prep_candidates.sort()
    for theme_head in dobjs:
        for prep_index, prep_form, pobj in prep_candidates:
            instance = _try_prepositional(
                tree, verb, theme_head, prep_index, prep_form, pobj, config
            )
            if instance is not None:
                return instance
    return None


def detect_loose(tree: DepTree, config: DetectionConfig = DEFAULT_CONFIG) -> list[DativeInstance]:
    """Return at most one dative instance per qualifying verb."""
    out = []
    for tok in tree.tokens:
        if tok.upos not in config.verb_upos:
            continue
        instance = _detect_at_verb(tree, tok, config)
        if instance is not None:
            out.append(instance)
    return out


def refine_strict(instance: DativeInstance, lexicon: VerbLexicon) -> bool:
    """True iff the lexicon classifies the verb and licenses this usage."""
    entry = lexicon.get(instance.verb_lemma)
    if entry is None:
        return False
    if instance.form not in entry.allowed_forms:
        return False
    if instance.form == PO:
        if instance.preposition == "to" and entry.verb_class == BENEFACTIVE:
            return False
        if instance.preposition == "for" and entry.verb_class == TO_DATIVE:
            return False
    return True


def apply_strict(
    instances: Iterable[DativeInstance], lexicon: VerbLexicon
) -> list[DativeInstance]:
    return [replace(inst, strict=refine_strict(inst, lexicon)) for inst in instances]


def detect_2postverbal(tree: DepTree, config: DetectionConfig = DEFAULT_CONFIG) -> bool:
    """True iff some verb has two postverbal arguments of any kind.

    That is two object-like dependents, or one object-like dependent plus
    any preposition with an object (not restricted to *to*/*for*).
    """
    for tok in tree.tokens:
        if tok.upos not in config.verb_upos:
            continue
        objects = 0
        preps_with_obj = 0
        for dep in tree.children(tok.index):
            if config.require_postverbal and dep <= tok.index:
                continue
            child = tree.token(dep)
            if child.deprel in config.dobj_labels:
                objects += 1
            elif child.deprel in config.dative_labels or child.deprel in config.prep_labels:
                if _prep_object(tree, dep, config) is not None:
                    preps_with_obj += 1
                elif child.deprel in config.dative_labels:
                    objects += 1
        if objects >= 2 or (objects >= 1 and preps_with_obj >= 1):
            return True
    return False


def _matches_exclusion(tree: DepTree, config: DetectionConfig) -> bool:
    """Patterns that may hide datives: object + clausal complement, or
    object + bare *for* phrase with an object."""
    for tok in tree.tokens:
        if tok.upos not in config.verb_upos:
            continue
        deps = tree.children(tok.index)
        if not any(tree.token(d).deprel in config.dobj_labels for d in deps):
            continue
        for dep in deps:
            child = tree.token(dep)
            if child.deprel in config.clausal_labels:
                return True
            if (
                child.deprel in config.prep_labels
                and child.form.lower() == "for"
                and _prep_object(tree, dep, config) is not None
            ):
                return True
    return False


@dataclass
class Partition:
    """Three-way split of a corpus, plus all loose instances found.

    ``two_postverbal_ids`` is the subset of ``non_dative_ids`` whose trees
    contain a verb with two postverbal arguments.
    """

    dative_ids: set[str]
    ambiguous_ids: set[str]
    non_dative_ids: set[str]
    two_postverbal_ids: set[str]
    instances: list[DativeInstance]

    def instances_by_sentence(self) -> dict[str, list[DativeInstance]]:
        grouped: dict[str, list[DativeInstance]] = {}
        for inst in self.instances:
            grouped.setdefault(inst.tree_ref, []).append(inst)
        return grouped


def partition_corpus(
    trees: Iterable[DepTree],
    config: DetectionConfig = DEFAULT_CONFIG,
    lexicon: VerbLexicon | None = None,
) -> Partition:
    """Split a corpus into dative / ambiguous-excluded / non-dative sets."""
    partition = Partition(set(), set(), set(), set(), [])
    for tree in trees:
        instances = detect_loose(tree, config)
        if instances:
            partition.dative_ids.add(tree.sentence_id)
            if lexicon is not None:
                instances = apply_strict(instances, lexicon)
            partition.instances.extend(instances)
        elif _matches_exclusion(tree, config):
            partition.ambiguous_ids.add(tree.sentence_id)
        else:
            partition.non_dative_ids.add(tree.sentence_id)
            if detect_2postverbal(tree, config):
                partition.two_postverbal_ids.add(tree.sentence_id)
    return partition


def write_instances_jsonl(instances: Iterable[DativeInstance], path: Path | str) -> int:
    count = 0
    with Path(path).open("w", encoding="utf-8") as handle:
        for inst in instances:
            handle.write(json.dumps(inst.to_dict(), sort_keys=True) + "\n")
            count += 1
    return count


def read_instances_jsonl(path: Path | str) -> list[DativeInstance]:
    out = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                out.append(DativeInstance.from_dict(json.loads(line)))
    return out
