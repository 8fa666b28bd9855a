"""Aggregation of preference records: correlations, z-scores, OLS, reports.

Mixed-effects modelling is intentionally not reimplemented here; the
report writer exports a long-format table (condition, seed, verb lemma,
score, covariates) that external statistics tooling can consume, plus
fixed-effects OLS estimates with standard errors for a first look.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .scoring import PreferenceRecord


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("correlation needs at least two points")
    ax = np.asarray(x, dtype=np.float64)
    ay = np.asarray(y, dtype=np.float64)
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    return float(np.dot(dx, dy)) / math.sqrt(sxx * syy)


def zscore(values: Sequence[float]) -> list[float]:
    """Standardize to mean 0 and sample (n-1) standard deviation 1."""
    if len(values) < 2:
        raise ValueError("z-scoring needs at least two points")
    arr = np.asarray(values, dtype=np.float64)
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        raise ValueError("z-score undefined for a constant vector")
    return [float(v) for v in (arr - arr.mean()) / sd]


@dataclass(frozen=True)
class VerbRow:
    verb_lemma: str
    model_mean: float
    model_z: float
    judgment: float
    judgment_z: float


@dataclass(frozen=True)
class VerbComparison:
    r: float
    n_verbs: int
    table: tuple[VerbRow, ...]


def verb_level_compare(
    records: Iterable[PreferenceRecord], judgments: Mapping[str, float]
) -> VerbComparison:
    """Correlate per-verb mean preference scores with external judgments.

    Both sides are z-scored over the verb intersection before the
    correlation is computed.
    """
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for record in records:
        sums[record.verb_lemma] = sums.get(record.verb_lemma, 0.0) + record.score
        counts[record.verb_lemma] = counts.get(record.verb_lemma, 0) + 1
    verbs = sorted(v for v in sums if v in judgments)
    if len(verbs) < 2:
        raise ValueError(f"need at least two verbs in common, have {len(verbs)}")
    model_means = [sums[v] / counts[v] for v in verbs]
    judged = [float(judgments[v]) for v in verbs]
    model_z = zscore(model_means)
    judged_z = zscore(judged)
    r = pearson(model_z, judged_z)
    table = tuple(
        VerbRow(v, model_means[i], model_z[i], judged[i], judged_z[i])
        for i, v in enumerate(verbs)
    )
    return VerbComparison(r=r, n_verbs=len(verbs), table=table)


@dataclass(frozen=True)
class RegressionResult:
    coefficients: dict[str, float]
    standard_errors: dict[str, float]
    r_squared: float
    n: int

    def to_dict(self) -> dict:
        return {
            "coefficients": dict(self.coefficients),
            "standard_errors": dict(self.standard_errors),
            "r_squared": self.r_squared,
            "n": self.n,
        }


_PREDICTORS = ("length_diff", "animacy_diff")


def ols(
    records: Sequence[PreferenceRecord],
    predictors: Sequence[str] = _PREDICTORS,
) -> RegressionResult:
    """Fixed-effects least squares of score on the given covariates."""
    n = len(records)
    if n <= len(predictors) + 1:
        raise ValueError(f"need more than {len(predictors) + 1} records, have {n}")
    y = np.array([r.score for r in records], dtype=np.float64)
    columns = [np.ones(n)]
    for name in predictors:
        columns.append(np.array([float(getattr(r, name)) for r in records]))
    design = np.column_stack(columns)
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ValueError(f"rank-deficient design: {_collinear_predictor(design, predictors)}")
    beta, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ beta
    rss = float(residuals @ residuals)
    dof = n - design.shape[1]
    sigma2 = rss / dof
    covariance = sigma2 * np.linalg.inv(design.T @ design)
    names = ["intercept", *predictors]
    tss = float(np.sum((y - y.mean()) ** 2))
    r_squared = 0.0 if tss == 0.0 else min(1.0, max(0.0, 1.0 - rss / tss))
    return RegressionResult(
        coefficients={name: float(b) for name, b in zip(names, beta)},
        standard_errors={
            name: float(math.sqrt(max(covariance[i, i], 0.0))) for i, name in enumerate(names)
        },
        r_squared=r_squared,
        n=n,
    )


def _collinear_predictor(design: np.ndarray, predictors: Sequence[str]) -> str:
    for i, name in enumerate(predictors, start=1):
        if float(design[:, i].std()) == 0.0:
            return f"{name} has zero variance"
    for i in range(1, design.shape[1]):
        for j in range(i + 1, design.shape[1]):
            a, b = design[:, i], design[:, j]
            da, db = a - a.mean(), b - b.mean()
            denom = math.sqrt(float(da @ da) * float(db @ db))
            if denom > 0 and abs(float(da @ db)) / denom > 1.0 - 1e-12:
                return f"{predictors[j - 1]} is collinear with {predictors[i - 1]}"
    return "predictors are collinear"


_CSV_HEADER = (
    "condition",
    "pair_id",
    "verb_lemma",
    "attested",
    "seed_label",
    "score",
    "length_diff",
    "animacy_diff",
)


def write_records_csv(
    records_by_condition: Mapping[str, Sequence[PreferenceRecord]], path: Path | str
) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_CSV_HEADER)
        for condition in sorted(records_by_condition):
            for r in records_by_condition[condition]:
                writer.writerow(
                    [
                        condition,
                        r.pair_id,
                        r.verb_lemma,
                        r.attested,
                        r.seed_label,
                        repr(r.score),
                        repr(r.length_diff),
                        r.animacy_diff,
                    ]
                )


def read_records_csv(path: Path | str) -> dict[str, list[PreferenceRecord]]:
    out: dict[str, list[PreferenceRecord]] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            out.setdefault(row["condition"], []).append(
                PreferenceRecord(
                    pair_id=row["pair_id"],
                    verb_lemma=row["verb_lemma"],
                    score=float(row["score"]),
                    length_diff=float(row["length_diff"]),
                    animacy_diff=int(row["animacy_diff"]),
                    seed_label=row["seed_label"],
                    attested=row["attested"],
                )
            )
    return out


def _safe_pearson(x: Sequence[float], y: Sequence[float]) -> float | None:
    try:
        return pearson(x, y)
    except ValueError:
        return None


def _group_summary(records: Sequence[PreferenceRecord]) -> dict:
    scores = [r.score for r in records]
    lengths = [r.length_diff for r in records]
    animacies = [float(r.animacy_diff) for r in records]
    summary: dict = {
        "n": len(records),
        "r_length": _safe_pearson(scores, lengths),
        "r_animacy": _safe_pearson(scores, animacies),
    }
    try:
        summary["ols"] = ols(records).to_dict()
    except ValueError as exc:
        summary["ols"] = {"error": str(exc)}
    return summary


def correlation_rows(
    records_by_condition: Mapping[str, Sequence[PreferenceRecord]]
) -> list[dict]:
    """Plot-ready long format: one row per condition and seed."""
    rows = []
    for condition in sorted(records_by_condition):
        by_seed: dict[str, list[PreferenceRecord]] = {}
        for record in records_by_condition[condition]:
            by_seed.setdefault(record.seed_label, []).append(record)
        for seed in sorted(by_seed):
            group = by_seed[seed]
            rows.append(
                {
                    "condition": condition,
                    "seed": seed,
                    "n": len(group),
                    "r_length": _safe_pearson([r.score for r in group], [r.length_diff for r in group]),
                    "r_animacy": _safe_pearson(
                        [r.score for r in group], [float(r.animacy_diff) for r in group]
                    ),
                }
            )
    return rows


def emit_report(
    records_by_condition: Mapping[str, Sequence[PreferenceRecord]],
    out_dir: Path | str,
    judgments: Mapping[str, float] | None = None,
) -> dict:
    """Write records.csv, report.json, and correlations_long.csv.

    Returns the report dictionary. Correlations are reported both pooled
    per condition and per seed label.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_records_csv(records_by_condition, out_dir / "records.csv")

    report: dict = {"conditions": {}}
    for condition in sorted(records_by_condition):
        records = list(records_by_condition[condition])
        by_seed: dict[str, list[PreferenceRecord]] = {}
        for record in records:
            by_seed.setdefault(record.seed_label, []).append(record)
        entry = {
            "pooled": _group_summary(records) if records else {"n": 0},
            "per_seed": {seed: _group_summary(group) for seed, group in sorted(by_seed.items())},
        }
        if judgments is not None:
            try:
                comparison = verb_level_compare(records, judgments)
                entry["verb_comparison"] = {
                    "r": comparison.r,
                    "n_verbs": comparison.n_verbs,
                }
            except ValueError as exc:
                entry["verb_comparison"] = {"error": str(exc)}
        report["conditions"][condition] = entry

    with (out_dir / "report.json").open("w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")

    with (out_dir / "correlations_long.csv").open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["condition", "seed", "n", "r_length", "r_animacy"])
        for row in correlation_rows(records_by_condition):
            writer.writerow(
                [
                    row["condition"],
                    row["seed"],
                    row["n"],
                    "" if row["r_length"] is None else repr(row["r_length"]),
                    "" if row["r_animacy"] is None else repr(row["r_animacy"]),
                ]
            )
    return report


def read_judgments_csv(path: Path | str) -> dict[str, float]:
    """Two-column ``verb,score`` file, with or without a header row."""
    out: dict[str, float] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        for row in csv.reader(handle):
            if not row or len(row) < 2:
                continue
            try:
                out[row[0].strip().lower()] = float(row[1])
            except ValueError:
                continue  # header row
    return out
