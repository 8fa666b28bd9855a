import json

import pytest

from dativekit import write_treebank
from dativekit.cli import main
from dativekit.synth import (
    gave_do_tree,
    gave_po_tree,
    green_melon_tree,
    mixed_fixture_corpus,
    synthetic_corpus,
)


@pytest.fixture()
def corpus_file(tmp_path):
    path = tmp_path / "corpus.conllu"
    write_treebank(mixed_fixture_corpus(), path)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_version(capsys):
    assert run("--version") == 0
    assert "dativekit" in capsys.readouterr().out


def test_unknown_flag_exits_2():
    assert run("detect", "--no-such-flag") == 2


def test_missing_input_exits_2(tmp_path):
    assert run(
        "detect", "--input", tmp_path / "absent.conllu",
        "--output", tmp_path / "out.jsonl",
    ) == 2


def test_detect_and_partition(tmp_path, corpus_file, capsys):
    out = tmp_path / "instances.jsonl"
    assert run("detect", "--input", corpus_file, "--output", out, "--workers", 1) == 0
    lines = [l for l in out.read_text().splitlines() if l.strip()]
    assert len(lines) == 59  # one per dative fixture
    assert all("sentence_id" in json.loads(l) for l in lines)

    part_dir = tmp_path / "partition"
    assert run("partition", "--input", corpus_file, "--output-dir", part_dir) == 0
    summary = json.loads((part_dir / "partition.json").read_text())
    assert len(summary["datives"]) == 59
    assert len(summary["ambiguous"]) == 2
    assert len(summary["two_postverbal"]) == 3
    assert (part_dir / "partition_manifest.json").exists()


def test_strict_only_filter(tmp_path, corpus_file):
    out = tmp_path / "strict.jsonl"
    assert run(
        "detect", "--input", corpus_file, "--output", out, "--strict-only", "--workers", 1
    ) == 0
    strict_lines = [l for l in out.read_text().splitlines() if l.strip()]
    assert 0 < len(strict_lines) <= 59
    assert all(json.loads(l)["strict"] for l in strict_lines)


def test_alternate_stage(tmp_path, corpus_file):
    instances = tmp_path / "instances.jsonl"
    run("detect", "--input", corpus_file, "--output", instances, "--workers", 1)
    alternants = tmp_path / "alternants.jsonl"
    assert run(
        "alternate", "--input", corpus_file, "--instances", instances,
        "--output", alternants,
    ) == 0
    rows = [json.loads(l) for l in alternants.read_text().splitlines() if l.strip()]
    assert len(rows) == 59
    by_id = {f"{r['sentence_id']}": r for r in rows}
    assert by_id["fix_po_000"]["alternant"] == ["I", "gave", "the", "dog", "a", "bone"]


def test_surgery_balanced_and_determinism(tmp_path):
    corpus = synthetic_corpus(n_do=12, n_po=12, n_plain=6, n_ambiguous=2)
    source = tmp_path / "synthetic.conllu"
    write_treebank(corpus, source)
    out_a = tmp_path / "a"
    code = run(
        "surgery", "--input", source, "--output-dir", out_a,
        "--condition", "balanced", "--count-per-form", 5, "--seed", 42,
    )
    assert code == 0
    report = json.loads((out_a / "report.json").read_text())
    assert report["kept_do_sentences"] == 5
    assert report["kept_po_sentences"] == 5
    assert report["controlled_do"] == 10
    assert report["controlled_po"] == 10
    out_b = tmp_path / "b"
    run(
        "surgery", "--input", source, "--output-dir", out_b,
        "--condition", "balanced", "--count-per-form", 5, "--seed", 42,
    )
    assert (out_a / "corpus.txt").read_bytes() == (out_b / "corpus.txt").read_bytes()
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()


def test_surgery_pollution_inject(tmp_path):
    corpus = synthetic_corpus(n_do=40, n_po=40, n_plain=4000)
    source = tmp_path / "synthetic.conllu"
    write_treebank(corpus, source)
    out = tmp_path / "out"
    code = run(
        "surgery", "--input", source, "--output-dir", out,
        "--condition", "no_datives", "--pollute",
        "--error-rate", 0.005, "--do-share", 0.5, "--seed", 7,
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    # 4000 non-datives at rate 0.005 is an estimate of 20, split evenly
    assert report["estimated_fn_do"] == 10
    assert report["counterfactual_do"] == 10
    assert report["counterfactual_po"] == 10
    assert report["output_sentences"] == 4000 + 20


def test_linearize_cli(tmp_path):
    source = tmp_path / "melon.conllu"
    write_treebank([green_melon_tree()], source)
    out = tmp_path / "linearized.txt"
    assert run(
        "linearize", "--input", source, "--output", out,
        "--mode", "long-first-headfinal", "--workers", 1,
    ) == 0
    assert out.read_text().strip() == "the shop from the green melon to eat a fork he uses"
    assert run(
        "linearize", "--input", source, "--output", out,
        "--mode", "short-first", "--bracketed", "--workers", 1,
    ) == 0
    assert out.read_text().strip() == (
        "[he] uses [a fork] [[to] eat [[the] [green] melon [from the shop]]]"
    )


def test_linearize_workers_equivalence(tmp_path):
    corpus = synthetic_corpus(n_do=60, n_po=60, n_plain=200)
    source = tmp_path / "c.conllu"
    write_treebank(corpus, source)
    one = tmp_path / "one.txt"
    two = tmp_path / "two.txt"
    assert run("linearize", "--input", source, "--output", one,
               "--mode", "random-first", "--seed", 3, "--workers", 1) == 0
    assert run("linearize", "--input", source, "--output", two,
               "--mode", "random-first", "--seed", 3, "--workers", 2) == 0
    assert one.read_bytes() == two.read_bytes()


def test_order_report_cli(tmp_path, capsys):
    source = tmp_path / "m.conllu"
    write_treebank([green_melon_tree()], source)
    assert run("order-report", "--input", source) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["sentences"] == 1
    assert payload["fraction_short_first"] == 1.0


def test_pairs_and_score_and_report(tmp_path, corpus_file):
    instances = tmp_path / "instances.jsonl"
    run("detect", "--input", corpus_file, "--output", instances, "--workers", 1)
    pairs = tmp_path / "pairs.jsonl"
    assert run(
        "pairs", "--input", corpus_file, "--instances", instances,
        "--output", pairs, "--sample-per-form", 10, "--seed", 1,
    ) == 0
    rows = [json.loads(l) for l in pairs.read_text().splitlines() if l.strip()]
    assert len(rows) == 20
    assert sum(1 for r in rows if r["attested"] == "DO") == 10

    # uniform per-token stub: every text gets -2.0 per whitespace token
    texts = set()
    for row in rows:
        texts.add(" ".join(row["do_sentence"]))
        texts.add(" ".join(row["po_sentence"]))
    stub = tmp_path / "stub.jsonl"
    with stub.open("w") as handle:
        for text in sorted(texts):
            n = len(text.split())
            handle.write(json.dumps(
                {"text": text, "total_logprob": -2.0 * n, "token_count": n}) + "\n")
    score_dir = tmp_path / "scores"
    assert run(
        "score", "--pairs", pairs, "--backend", f"file:{stub}",
        "--output-dir", score_dir, "--condition", "default", "--seed-label", "seed1",
    ) == 0
    records = (score_dir / "records.csv").read_text().splitlines()
    assert len(records) == 21
    assert all(line.split(",")[5] == "0.0" for line in records[1:])

    report_dir = tmp_path / "report"
    judgments = tmp_path / "judgments.csv"
    judgments.write_text("verb,score\ngive,1.0\nsend,0.5\nbake,-0.5\nmake,0.1\n")
    assert run(
        "report", "--records", score_dir / "records.csv",
        "--judgments", judgments, "--output-dir", report_dir,
    ) == 0
    payload = json.loads((report_dir / "report.json").read_text())
    assert "default" in payload["conditions"]
    assert (report_dir / "correlations_long.csv").exists()


def test_score_partial_failure_exit_code(tmp_path, corpus_file):
    instances = tmp_path / "instances.jsonl"
    run("detect", "--input", corpus_file, "--output", instances, "--workers", 1)
    pairs = tmp_path / "pairs.jsonl"
    run("pairs", "--input", corpus_file, "--instances", instances,
        "--output", pairs, "--sample-per-form", 2, "--seed", 1)
    stub = tmp_path / "stub.jsonl"
    stub.write_text("")  # empty table: nothing scoreable
    assert run(
        "score", "--pairs", pairs, "--backend", f"file:{stub}",
        "--output-dir", tmp_path / "s",
    ) == 1


def test_config_file_defaults(tmp_path):
    source = tmp_path / "m.conllu"
    write_treebank([gave_do_tree(), gave_po_tree()], source)
    config = tmp_path / "run.cfg"
    config.write_text("workers = 1\n# comment\n")
    out = tmp_path / "i.jsonl"
    assert run("detect", "--input", source, "--output", out, "--config", config) == 0
    assert len(out.read_text().splitlines()) == 2


def test_manifest_contents(tmp_path):
    source = tmp_path / "m.conllu"
    write_treebank([green_melon_tree()], source)
    out = tmp_path / "lin.txt"
    run("linearize", "--input", source, "--output", out, "--mode", "short-first",
        "--seed", 9, "--workers", 1)
    manifest = json.loads((tmp_path / "linearize_manifest.json").read_text())
    assert manifest["tool"] == "dativekit"
    assert manifest["subcommand"] == "linearize"
    assert manifest["seed"] == "9"
    assert manifest["config_hash"]
    assert str(source) in manifest["inputs"]
