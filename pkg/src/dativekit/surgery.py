"""Training-condition corpus builds: balance, swap, ablate, pollute.

Five conditions are supported. ``default`` keeps a controlled number of
attested datives per form. ``balanced`` additionally emits the generated
alternant of every kept dative, so each event appears in both forms.
``swapped`` emits only the alternants. ``no_datives`` drops the dative and
exclusion sets entirely, and ``no_2postverbal`` additionally drops every
sentence containing a verb with two postverbal arguments.

Artificial pollution counteracts datives the detector missed: an estimate
of the false negatives is split between forms and that many counterfactual
sentences (alternants of attested datives) are injected. The swapped
condition never injects.

All sampling is driven by the configured seed; output order is sorted by
sentence id with injected sentences appended in sampling order, so builds
are reproducible byte for byte.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .alternate import Alternator
from .detect import DO, PO, DativeInstance, Partition
from .treebank import DepTree

DEFAULT = "default"
BALANCED = "balanced"
SWAPPED = "swapped"
NO_DATIVES = "no_datives"
NO_2POSTVERBAL = "no_2postverbal"
CONDITIONS = (DEFAULT, BALANCED, SWAPPED, NO_DATIVES, NO_2POSTVERBAL)

_SAMPLED_CONDITIONS = (DEFAULT, BALANCED, SWAPPED)


class SurgeryError(ValueError):
    """A condition build cannot be satisfied as configured."""


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class PollutionPlan:
    """How many counterfactual datives to insert, split by target form."""

    estimated_false_negatives: int
    insert_do: int
    insert_po: int
    error_rate: float
    do_share: float

    def __post_init__(self) -> None:
        if self.insert_do + self.insert_po != self.estimated_false_negatives:
            raise ValueError("insertion counts must sum to the false-negative estimate")


def plan_pollution(
    non_dative_sentence_count: int, error_rate: float, do_share: float
) -> PollutionPlan:
    """Derive insertion counts from the recall-error estimate.

    Rounding is half-up: the estimate is ``round(count * error_rate)`` and
    the DO share of it is rounded the same way, with PO taking the rest.
    """
    if not 0 <= error_rate <= 1:
        raise ValueError("error_rate must be within [0, 1]")
    if not 0 <= do_share <= 1:
        raise ValueError("do_share must be within [0, 1]")
    estimate = _round_half_up(non_dative_sentence_count * error_rate)
    insert_do = _round_half_up(estimate * do_share)
    return PollutionPlan(
        estimated_false_negatives=estimate,
        insert_do=insert_do,
        insert_po=estimate - insert_do,
        error_rate=error_rate,
        do_share=do_share,
    )


@dataclass
class SurgeryConfig:
    """One condition build. ``inject`` False keeps the plan for accounting
    (the false-negative estimate) without inserting counterfactuals."""

    condition: str
    count_per_form: int = 0
    pollution: PollutionPlan | None = None
    inject: bool = True
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.condition not in CONDITIONS:
            raise SurgeryError(f"unknown condition {self.condition!r}")
        if self.count_per_form < 0:
            raise SurgeryError("count_per_form must be >= 0")


@dataclass(frozen=True)
class OutputSentence:
    sentence_id: str
    tokens: tuple[str, ...]
    origin: str  # attested | alternant | non_dative | counterfactual
    do_instances: int = 0
    po_instances: int = 0

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass
class SurgeryReport:
    """Per-category counts for one condition build.

    ``controlled_*`` count dative instances present in non-injected output
    (attested plus balancing alternants); ``counterfactual_*`` count
    injected pollution. Totals add the false-negative estimates.
    """

    condition: str
    input_sentences: int = 0
    dative_sentences: int = 0
    ambiguous_sentences: int = 0
    non_dative_sentences: int = 0
    kept_do_sentences: int = 0
    kept_po_sentences: int = 0
    controlled_do: int = 0
    controlled_po: int = 0
    estimated_fn_do: int = 0
    estimated_fn_po: int = 0
    counterfactual_do: int = 0
    counterfactual_po: int = 0
    dropped_two_postverbal: int = 0
    rejected_instances: int = 0
    output_sentences: int = 0
    pollution_skipped: bool = False

    @property
    def total_do(self) -> int:
        return self.controlled_do + self.estimated_fn_do + self.counterfactual_do

    @property
    def total_po(self) -> int:
        return self.controlled_po + self.estimated_fn_po + self.counterfactual_po

    @property
    def percent_dative(self) -> float:
        if self.output_sentences == 0:
            return 0.0
        return 100.0 * (self.total_do + self.total_po) / self.output_sentences

    def to_dict(self) -> dict:
        data = {
            "condition": self.condition,
            "input_sentences": self.input_sentences,
            "dative_sentences": self.dative_sentences,
            "ambiguous_sentences": self.ambiguous_sentences,
            "non_dative_sentences": self.non_dative_sentences,
            "kept_do_sentences": self.kept_do_sentences,
            "kept_po_sentences": self.kept_po_sentences,
            "controlled_do": self.controlled_do,
            "controlled_po": self.controlled_po,
            "estimated_fn_do": self.estimated_fn_do,
            "estimated_fn_po": self.estimated_fn_po,
            "counterfactual_do": self.counterfactual_do,
            "counterfactual_po": self.counterfactual_po,
            "dropped_two_postverbal": self.dropped_two_postverbal,
            "rejected_instances": self.rejected_instances,
            "output_sentences": self.output_sentences,
            "pollution_skipped": self.pollution_skipped,
            "total_do": self.total_do,
            "total_po": self.total_po,
            "percent_dative": self.percent_dative,
        }
        return data


@dataclass
class SurgeryResult:
    sentences: list[OutputSentence]
    report: SurgeryReport


def _form_counts(instances: Sequence[DativeInstance]) -> tuple[int, int]:
    do_n = sum(1 for inst in instances if inst.form == DO)
    return do_n, len(instances) - do_n


def inject_pollution(
    pool: Sequence[tuple[DepTree, DativeInstance]],
    plan: PollutionPlan,
    alternator: Alternator,
    rng_seed: int,
) -> list[OutputSentence]:
    """Sample attested datives and append their alternants as counterfactuals.

    A counterfactual DO comes from an attested PO and vice versa; sampling
    is without replacement and reproducible from ``rng_seed``.
    """
    attested_po = [(t, i) for t, i in pool if i.form == PO]
    attested_do = [(t, i) for t, i in pool if i.form == DO]
    if len(attested_po) < plan.insert_do:
        raise SurgeryError(
            f"need {plan.insert_do} attested PO datives to build DO counterfactuals, "
            f"have {len(attested_po)}"
        )
    if len(attested_do) < plan.insert_po:
        raise SurgeryError(
            f"need {plan.insert_po} attested DO datives to build PO counterfactuals, "
            f"have {len(attested_do)}"
        )
    rng = random.Random(rng_seed)
    injected: list[OutputSentence] = []
    for k, (tree, inst) in enumerate(rng.sample(attested_po, plan.insert_do)):
        injected.append(
            OutputSentence(
                sentence_id=f"{tree.sentence_id}#cfdo{k}",
                tokens=tuple(alternator.alternant(tree, inst)),
                origin="counterfactual",
                do_instances=1,
            )
        )
    for k, (tree, inst) in enumerate(rng.sample(attested_do, plan.insert_po)):
        injected.append(
            OutputSentence(
                sentence_id=f"{tree.sentence_id}#cfpo{k}",
                tokens=tuple(alternator.alternant(tree, inst)),
                origin="counterfactual",
                po_instances=1,
            )
        )
    return injected


def build_condition(
    trees: Iterable[DepTree],
    partition: Partition,
    config: SurgeryConfig,
    alternator: Alternator,
) -> SurgeryResult:
    """Assemble one training-condition corpus and its report."""
    trees_by_id = {tree.sentence_id: tree for tree in trees}
    report = SurgeryReport(
        condition=config.condition,
        input_sentences=len(trees_by_id),
        dative_sentences=len(partition.dative_ids),
        ambiguous_sentences=len(partition.ambiguous_ids),
        non_dative_sentences=len(partition.non_dative_ids),
    )

    grouped = partition.instances_by_sentence()
    eligible: dict[str, list[DativeInstance]] = {}
    for sid in sorted(partition.dative_ids):
        tree = trees_by_id.get(sid)
        if tree is None:
            continue
        instances = grouped.get(sid, [])
        usable = [i for i in instances if alternator.can_transform(tree, i)]
        report.rejected_instances += len(instances) - len(usable)
        if usable and len(usable) == len(instances):
            eligible[sid] = usable

    kept: set[str] = set()
    if config.condition in _SAMPLED_CONDITIONS:
        do_sids = sorted(s for s, ins in eligible.items() if any(i.form == DO for i in ins))
        po_sids = sorted(s for s, ins in eligible.items() if any(i.form == PO for i in ins))
        if config.count_per_form > len(do_sids):
            raise SurgeryError(
                f"requested {config.count_per_form} DO sentences per form, "
                f"only {len(do_sids)} available"
            )
        if config.count_per_form > len(po_sids):
            raise SurgeryError(
                f"requested {config.count_per_form} PO sentences per form, "
                f"only {len(po_sids)} available"
            )
        rng = random.Random(config.rng_seed)
        kept_do = rng.sample(do_sids, config.count_per_form)
        kept_po = rng.sample(po_sids, config.count_per_form)
        report.kept_do_sentences = len(kept_do)
        report.kept_po_sentences = len(kept_po)
        kept = set(kept_do) | set(kept_po)

    sentences: list[OutputSentence] = []
    for sid in sorted(trees_by_id):
        if sid in partition.ambiguous_ids:
            continue
        tree = trees_by_id[sid]
        if sid in partition.dative_ids:
            if config.condition in (NO_DATIVES, NO_2POSTVERBAL) or sid not in kept:
                continue
            instances = eligible[sid]
            do_n, po_n = _form_counts(instances)
            if config.condition in (DEFAULT, BALANCED):
                sentences.append(
                    OutputSentence(sid, tuple(tree.forms()), "attested", do_n, po_n)
                )
            if config.condition in (BALANCED, SWAPPED):
                for inst in sorted(instances, key=lambda i: i.verb_index):
                    flipped_do = do_n + (1 if inst.form == PO else -1)
                    sentences.append(
                        OutputSentence(
                            sentence_id=f"{sid}#alt{inst.verb_index}",
                            tokens=tuple(alternator.alternant(tree, inst)),
                            origin="alternant",
                            do_instances=flipped_do,
                            po_instances=len(instances) - flipped_do,
                        )
                    )
        else:
            if (
                config.condition == NO_2POSTVERBAL
                and sid in partition.two_postverbal_ids
            ):
                report.dropped_two_postverbal += 1
                continue
            sentences.append(OutputSentence(sid, tuple(tree.forms()), "non_dative"))

    if config.pollution is not None:
        report.estimated_fn_do = config.pollution.insert_do
        report.estimated_fn_po = config.pollution.insert_po
        if config.condition == SWAPPED:
            report.pollution_skipped = True
        elif config.inject:
            pool = [
                (trees_by_id[sid], inst)
                for sid in sorted(eligible)
                for inst in eligible[sid]
            ]
            sentences.extend(
                inject_pollution(pool, config.pollution, alternator, config.rng_seed)
            )

    for sentence in sentences:
        if sentence.origin == "counterfactual":
            report.counterfactual_do += sentence.do_instances
            report.counterfactual_po += sentence.po_instances
        else:
            report.controlled_do += sentence.do_instances
            report.controlled_po += sentence.po_instances
    report.output_sentences = len(sentences)
    return SurgeryResult(sentences=sentences, report=report)


def write_corpus(sentences: Iterable[OutputSentence], path: Path | str) -> int:
    count = 0
    with Path(path).open("w", encoding="utf-8") as handle:
        for sentence in sentences:
            handle.write(sentence.text() + "\n")
            count += 1
    return count


def write_report(report: SurgeryReport, path: Path | str) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
