"""Command-line pipeline: detect, partition, alternate, surgery, linearize,
order-report, pairs, score, report.

Stages compose through files so each is independently testable and
resumable. Every run writes a manifest JSON (inputs, resolved
configuration and its hash, seed, version) next to its outputs; identical
configuration and seed give byte-identical outputs.

Exit codes: 0 success, 1 partial failure (per-item errors were logged),
2 configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import sys
from functools import partial
from pathlib import Path

from . import __version__
from .alternate import Alternator, build_pair, merge_annotations, read_pairs_jsonl, write_pairs_jsonl
from .detect import (
    DEFAULT_CONFIG,
    DativeInstance,
    DetectionConfig,
    VerbLexicon,
    apply_strict,
    partition_corpus,
    read_instances_jsonl,
    write_instances_jsonl,
)
from .linearize import LinearizationMode, corpus_order_report, relinearize, relinearize_bracketed
from .scoring import FileBackend, HTTPBackend, evaluate_pairs
from .stats import emit_report, read_judgments_csv, read_records_csv
from .surgery import (
    CONDITIONS,
    SurgeryConfig,
    SurgeryError,
    build_condition,
    plan_pollution,
    write_corpus,
    write_report,
)
from .treebank import load_treebank


class ConfigError(ValueError):
    """Bad flags, unreadable inputs, or an inconsistent configuration."""


def _load_config_file(path: Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values: dict[str, str] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line needs key = value: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config_defaults(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    for key, value in _load_config_file(path).items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _require_input(path_str: str | None, what: str) -> Path:
    if not path_str:
        raise ConfigError(f"missing required {what}")
    path = Path(path_str)
    if not path.exists():
        raise ConfigError(f"{what} not found: {path}")
    return path


def _detection_config(args: argparse.Namespace) -> DetectionConfig:
    overrides = {}
    spec = getattr(args, "labels", None)
    if spec:
        mapping = {
            "dobj": "dobj_labels",
            "dative": "dative_labels",
            "prep": "prep_labels",
            "pobj": "pobj_labels",
            "clausal": "clausal_labels",
        }
        for item in spec.split(","):
            if "=" not in item:
                raise ConfigError(f"--labels items look like dobj=obj: {item!r}")
            key, value = item.split("=", 1)
            key = key.strip()
            if key not in mapping:
                raise ConfigError(f"unknown label kind {key!r}")
            overrides[mapping[key]] = frozenset(v.strip() for v in value.split("|") if v.strip())
    if overrides:
        from dataclasses import replace

        return replace(DEFAULT_CONFIG, **overrides)
    return DEFAULT_CONFIG


def _lexicon(args: argparse.Namespace) -> VerbLexicon:
    path = getattr(args, "lexicon", None)
    if path:
        return VerbLexicon.from_file(_require_input(path, "lexicon file"))
    return VerbLexicon.bundled()


def _backend(args: argparse.Namespace):
    spec = getattr(args, "backend", None)
    if not spec:
        raise ConfigError("exactly one --backend is required (file:PATH or http(s)://URL)")
    label = getattr(args, "seed_label", None)
    if spec.startswith("file:"):
        return FileBackend(_require_input(spec[5:], "score file"), identity=label)
    if spec.startswith(("http://", "https://")):
        return HTTPBackend(
            spec,
            timeout=float(getattr(args, "timeout", None) or 30.0),
            retries=int(getattr(args, "retries", None) or 2),
            identity=label,
        )
    raise ConfigError(f"backend spec must be file:PATH or an http(s) URL: {spec!r}")


def _write_manifest(args: argparse.Namespace, out_dir: Path, inputs: list[str], outputs: list[str]) -> None:
    resolved = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func",) and not k.startswith("_")
    }
    resolved = {k: (str(v) if isinstance(v, Path) else v) for k, v in resolved.items()}
    payload = json.dumps(resolved, sort_keys=True)
    manifest = {
        "tool": "dativekit",
        "version": __version__,
        "subcommand": args.subcommand,
        "config": resolved,
        "config_hash": hashlib.sha256(payload.encode("utf-8")).hexdigest(),
        "seed": resolved.get("seed"),
        "inputs": inputs,
        "outputs": outputs,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / f"{args.subcommand}_manifest.json").open("w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _report_parse_errors(errors) -> None:
    for error in errors:
        print(f"parse error: line {error.line}: {error.message}", file=sys.stderr)


def _workers(args: argparse.Namespace) -> int:
    requested = getattr(args, "workers", None)
    if requested is None:
        return os.cpu_count() or 1
    count = int(requested)
    if count < 1:
        raise ConfigError("--workers must be >= 1")
    return count


def _map_trees(fn, trees, workers: int, chunksize: int = 64):
    """Order-preserving map over trees, optionally in worker processes."""
    if workers <= 1 or len(trees) < 2 * chunksize:
        return [fn(tree) for tree in trees]
    with multiprocessing.Pool(workers) as pool:
        return list(pool.imap(fn, trees, chunksize=chunksize))


def _detect_one(config: DetectionConfig, tree):
    from .detect import detect_loose

    return detect_loose(tree, config)


def cmd_detect(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    config = _detection_config(args)
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    batches = _map_trees(partial(_detect_one, config), trees, _workers(args))
    instances: list[DativeInstance] = [inst for batch in batches for inst in batch]
    lexicon = _lexicon(args)
    instances = apply_strict(instances, lexicon)
    if args.strict_only:
        instances = [inst for inst in instances if inst.strict]
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    count = write_instances_jsonl(instances, out_path)
    _write_manifest(args, out_path.parent, [str(in_path)], [str(out_path)])
    print(f"detected {count} instances in {len(trees)} sentences")
    return 1 if errors else 0


def cmd_partition(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    config = _detection_config(args)
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    partition = partition_corpus(trees, config, _lexicon(args))
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {
        "datives": sorted(partition.dative_ids),
        "ambiguous": sorted(partition.ambiguous_ids),
        "non_datives": sorted(partition.non_dative_ids),
        "two_postverbal": sorted(partition.two_postverbal_ids),
    }
    with (out_dir / "partition.json").open("w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")
    write_instances_jsonl(partition.instances, out_dir / "instances.jsonl")
    _write_manifest(
        args, out_dir, [str(in_path)],
        [str(out_dir / "partition.json"), str(out_dir / "instances.jsonl")],
    )
    print(
        f"datives={len(partition.dative_ids)} ambiguous={len(partition.ambiguous_ids)} "
        f"non_datives={len(partition.non_dative_ids)} "
        f"two_postverbal={len(partition.two_postverbal_ids)}"
    )
    return 1 if errors else 0


def cmd_alternate(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    inst_path = _require_input(args.instances, "instances file")
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    trees_by_id = {tree.sentence_id: tree for tree in trees}
    alternator = Alternator(lexicon=_lexicon(args))
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    failures = 0
    written = 0
    with out_path.open("w", encoding="utf-8") as handle:
        for inst in read_instances_jsonl(inst_path):
            tree = trees_by_id.get(inst.tree_ref)
            if tree is None:
                failures += 1
                print(f"alternate error: unknown sentence {inst.tree_ref}", file=sys.stderr)
                continue
            try:
                tokens = alternator.alternant(tree, inst)
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"alternate error: {inst.tree_ref}:{inst.verb_index}: {exc}", file=sys.stderr)
                continue
            handle.write(
                json.dumps(
                    {
                        "sentence_id": inst.tree_ref,
                        "verb_index": inst.verb_index,
                        "attested": inst.form,
                        "alternant": tokens,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
            written += 1
    _write_manifest(args, out_path.parent, [str(in_path), str(inst_path)], [str(out_path)])
    print(f"wrote {written} alternants, {failures} failures")
    return 1 if failures or errors else 0


def cmd_surgery(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    if args.condition not in CONDITIONS:
        raise ConfigError(f"--condition must be one of {', '.join(CONDITIONS)}")
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    config = _detection_config(args)
    lexicon = _lexicon(args)
    partition = partition_corpus(trees, config, lexicon)
    plan = None
    if args.pollute != "off":
        plan = plan_pollution(
            len(partition.non_dative_ids),
            float(args.error_rate),
            float(args.do_share),
        )
    surgery_config = SurgeryConfig(
        condition=args.condition,
        count_per_form=int(args.count_per_form),
        pollution=plan,
        inject=args.pollute == "inject",
        rng_seed=int(args.seed),
    )
    result = build_condition(trees, partition, surgery_config, Alternator(lexicon=lexicon))
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_corpus(result.sentences, out_dir / "corpus.txt")
    write_report(result.report, out_dir / "report.json")
    if args.emit_conllu:
        from .treebank import write_treebank

        trees_by_id = {tree.sentence_id: tree for tree in trees}
        untouched = [
            trees_by_id[s.sentence_id]
            for s in result.sentences
            if s.origin in ("attested", "non_dative") and s.sentence_id in trees_by_id
        ]
        write_treebank(untouched, out_dir / "passthrough.conllu")
    _write_manifest(
        args, out_dir, [str(in_path)],
        [str(out_dir / "corpus.txt"), str(out_dir / "report.json")],
    )
    report = result.report
    print(
        f"{report.condition}: {report.output_sentences} sentences, "
        f"controlled DO/PO {report.controlled_do}/{report.controlled_po}, "
        f"counterfactual {report.counterfactual_do}/{report.counterfactual_po}"
    )
    return 1 if errors else 0


def _linearize_one(mode: LinearizationMode, bracketed: bool, tree) -> str:
    if bracketed:
        return relinearize_bracketed(tree, mode)
    return " ".join(relinearize(tree, mode))


def cmd_linearize(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    order = args.mode.replace("-", "_")
    mode = LinearizationMode(order=order, rng_seed=int(args.seed))
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    lines = _map_trees(
        partial(_linearize_one, mode, args.bracketed), trees, _workers(args)
    )
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8") as handle:
        for line in lines:
            handle.write(line + "\n")
    _write_manifest(args, out_path.parent, [str(in_path)], [str(out_path)])
    print(f"linearized {len(lines)} sentences ({args.mode})")
    return 1 if errors else 0


def cmd_order_report(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    if not trees:
        raise ConfigError("order report needs a non-empty treebank")
    report = corpus_order_report(trees)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.output:
        out_path = Path(args.output)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        _write_manifest(args, out_path.parent, [str(in_path)], [str(out_path)])
    else:
        sys.stdout.write(text)
    return 1 if errors else 0


def cmd_pairs(args: argparse.Namespace) -> int:
    in_path = _require_input(args.input, "input treebank")
    inst_path = _require_input(args.instances, "instances file")
    trees, errors = load_treebank(in_path)
    _report_parse_errors(errors)
    trees_by_id = {tree.sentence_id: tree for tree in trees}
    lexicon = _lexicon(args)
    scorer = _backend(args) if args.backend else None
    instances = read_instances_jsonl(inst_path)
    if args.strict_only:
        instances = [inst for inst in instances if inst.strict]
    by_form: dict[str, list[DativeInstance]] = {"DO": [], "PO": []}
    for inst in instances:
        if inst.tree_ref in trees_by_id:
            by_form[inst.form].append(inst)
    if args.sample_per_form is not None:
        import random as _random

        rng = _random.Random(int(args.seed))
        n = int(args.sample_per_form)
        for form in ("DO", "PO"):
            if n > len(by_form[form]):
                raise ConfigError(
                    f"requested {n} {form} instances, only {len(by_form[form])} available"
                )
            by_form[form] = rng.sample(sorted(by_form[form], key=lambda i: (i.tree_ref, i.verb_index)), n)
    pairs = []
    failures = 0
    for form in ("DO", "PO"):
        for inst in by_form[form]:
            try:
                pairs.append(build_pair(trees_by_id[inst.tree_ref], inst, lexicon, scorer))
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"pair error: {inst.tree_ref}:{inst.verb_index}: {exc}", file=sys.stderr)
    if args.annotations:
        pairs = merge_annotations(pairs, _require_input(args.annotations, "annotations file"))
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    count = write_pairs_jsonl(pairs, out_path)
    _write_manifest(args, out_path.parent, [str(in_path), str(inst_path)], [str(out_path)])
    print(f"wrote {count} pairs, {failures} failures")
    return 1 if failures or errors else 0


def cmd_score(args: argparse.Namespace) -> int:
    pairs_path = _require_input(args.pairs, "pairs file")
    backend = _backend(args)
    pairs = read_pairs_jsonl(pairs_path)
    result = evaluate_pairs(pairs, backend, batch_size=int(args.batch_size))
    condition = args.condition or "default"
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    from .stats import write_records_csv

    write_records_csv({condition: result.records}, out_dir / "records.csv")
    for failure in result.failures:
        print(f"score error: {failure.pair_id}: {failure.message}", file=sys.stderr)
    _write_manifest(args, out_dir, [str(pairs_path)], [str(out_dir / "records.csv")])
    print(f"scored {len(result.records)} pairs, {len(result.failures)} failures")
    return 1 if result.failures else 0


def cmd_report(args: argparse.Namespace) -> int:
    records_path = _require_input(args.records, "records file")
    records_by_condition = read_records_csv(records_path)
    judgments = None
    if args.judgments:
        judgments = read_judgments_csv(_require_input(args.judgments, "judgments file"))
    out_dir = Path(args.output_dir)
    emit_report(records_by_condition, out_dir, judgments)
    _write_manifest(
        args, out_dir, [str(records_path)],
        [str(out_dir / "report.json"), str(out_dir / "records.csv"),
         str(out_dir / "correlations_long.csv")],
    )
    total = sum(len(v) for v in records_by_condition.values())
    print(f"reported on {total} records across {len(records_by_condition)} conditions")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dativekit",
        description="Corpus surgery and evaluation for the English dative alternation.",
    )
    parser.add_argument("--version", action="version", version=f"dativekit {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value defaults file")
        p.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")

    p = sub.add_parser("detect", help="detect dative instances in a treebank")
    common(p)
    p.add_argument("--input", required=True, help="CoNLL-U treebank")
    p.add_argument("--output", required=True, help="instances JSONL")
    p.add_argument("--lexicon", help="verb lexicon TSV (default: bundled)")
    p.add_argument("--labels", help="label overrides, e.g. dobj=obj,dative=iobj")
    p.add_argument("--strict-only", action="store_true", help="keep lexicon-licensed instances only")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("partition", help="split a corpus into dative/ambiguous/non-dative")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("alternate", help="emit the unattested alternant per instance")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--instances", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_alternate)

    p = sub.add_parser("surgery", help="build a training-condition corpus")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--condition", required=True)
    p.add_argument("--count-per-form", default=0)
    p.add_argument(
        "--pollute", nargs="?", const="inject", default="off",
        choices=("off", "estimate", "inject"),
        help="plan counterfactual insertion (inject) or only record the estimate",
    )
    p.add_argument("--error-rate", default=0.00025)
    p.add_argument("--do-share", default=2 / 3)
    p.add_argument("--seed", default=0)
    p.add_argument("--lexicon")
    p.add_argument("--labels")
    p.add_argument("--emit-conllu", action="store_true", help="also write untouched trees as CoNLL-U")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("linearize", help="re-linearize constituents by length")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument(
        "--mode", required=True,
        choices=("short-first", "long-first", "random-first", "long-first-headfinal"),
    )
    p.add_argument("--seed", default=0)
    p.add_argument("--bracketed", action="store_true", help="emit bracketed debug notation")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("order-report", help="corpus short/long-first statistics")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="JSON path (default: stdout)")
    p.set_defaults(func=cmd_order_report)

    p = sub.add_parser("pairs", help="build evaluation pairs from instances")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--instances", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--backend", help="file:PATH or http(s)://URL for preposition fallback")
    p.add_argument("--seed-label", help="override backend identity label")
    p.add_argument("--timeout", default=30.0)
    p.add_argument("--retries", default=2)
    p.add_argument("--sample-per-form", default=None)
    p.add_argument("--seed", default=0)
    p.add_argument("--strict-only", action="store_true")
    p.add_argument("--annotations", help="sidecar JSONL keyed by pair_id")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("score", help="score pairs through a log-probability backend")
    common(p)
    p.add_argument("--pairs", required=True)
    p.add_argument("--backend", required=True)
    p.add_argument("--seed-label")
    p.add_argument("--timeout", default=30.0)
    p.add_argument("--retries", default=2)
    p.add_argument("--batch-size", default=64)
    p.add_argument("--condition", help="condition label for the records (default: default)")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="correlations and regressions from records")
    common(p)
    p.add_argument("--records", required=True)
    p.add_argument("--judgments", help="verb,score CSV")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config_defaults(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SurgeryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
