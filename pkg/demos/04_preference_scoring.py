"""Walkthrough: evaluation pairs, preference scores, and reports.

Builds DO/PO test pairs from the fixtures, scores them with stub
log-probability backends, and writes the CSV/JSON report bundle that
external statistics tooling consumes.
"""

import math
import tempfile
from pathlib import Path

from dativekit import (
    TableBackend,
    UniformBackend,
    VerbLexicon,
    build_pair,
    detect_loose,
    emit_report,
    evaluate_pairs,
    geo_mean_perplexity,
    merge_annotations,
    ols,
    pearson,
)
from dativekit.synth import dative_fixture_set

ANIMATE = {"him", "me", "them", "her", "us", "dog", "teacher", "friend", "man",
           "Mary", "children", "students", "Sam", "John"}


def main():
    lexicon = VerbLexicon.bundled()
    fixtures = dative_fixture_set()
    pairs = [build_pair(f.tree, detect_loose(f.tree)[0], lexicon) for f in fixtures]
    # animacy comes from a sidecar annotation table keyed by pair id;
    # here a small word list stands in for the manual labels, and pronoun
    # "it" themes are read as animate referents so the covariate varies
    sidecar = {
        pair.pair_id: {
            "recipient_animate": bool(ANIMATE & set(pair.do_sentence[2 : 2 + pair.recipient_len])),
            "theme_animate": pair.theme_pronoun,
        }
        for pair in pairs
    }
    pairs = merge_annotations(pairs, sidecar)
    print(f"built {len(pairs)} evaluation pairs; first pair:")
    print(f"  DO: {' '.join(pairs[0].do_sentence)}")
    print(f"  PO: {' '.join(pairs[0].po_sentence)}")

    print("\n== Uniform backend: length normalization cancels everything ==")
    uniform = evaluate_pairs(pairs, UniformBackend(per_token_logprob=-2.0))
    print(f"  scores all zero: {all(r.score == 0.0 for r in uniform.records)}")

    print("\n== A short-first-biased stub backend ==")
    # -2 per token, plus a penalty when the earlier postverbal argument is
    # the longer one (recipient first in DO, theme first in PO)
    table = {}
    for pair in pairs:
        do_text = " ".join(pair.do_sentence)
        po_text = " ".join(pair.po_sentence)
        do_penalty = 0.4 * max(0, pair.recipient_len - pair.theme_len)
        po_penalty = 0.4 * max(0, pair.theme_len - pair.recipient_len)
        table[do_text] = (-2.0 * len(pair.do_sentence) - do_penalty, len(pair.do_sentence))
        table[po_text] = (-2.0 * len(pair.po_sentence) - po_penalty, len(pair.po_sentence))
    backend = TableBackend(table, identity="short-first-stub")
    result = evaluate_pairs(pairs, backend)
    scores = [r.score for r in result.records]
    lengths = [r.length_diff for r in result.records]
    r_length = pearson(scores, lengths)
    print(f"  {len(result.records)} records, r(score, length_diff) = {r_length:+.3f}")
    fit = ols(result.records)
    print(f"  OLS: intercept={fit.coefficients['intercept']:+.4f} "
          f"length={fit.coefficients['length_diff']:+.4f} "
          f"animacy={fit.coefficients['animacy_diff']:+.4f} (n={fit.n})")

    print("\n== Perplexity diagnostic ==")
    scored = backend.score_batch(sorted(table)[:20])
    print(f"  geometric mean perplexity over 20 sentences: "
          f"{geo_mean_perplexity(scored):.2f}")
    print(f"  (a uniform -ln 2 model would give exactly "
          f"{math.exp(math.log(2.0)):.0f})")

    out_dir = Path(tempfile.mkdtemp(prefix="dativekit_report_"))
    emit_report({"demo": result.records}, out_dir)
    print(f"\nreport bundle written to {out_dir}:")
    for path in sorted(out_dir.iterdir()):
        print(f"  {path.name}")


if __name__ == "__main__":
    main()
