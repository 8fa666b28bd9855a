"""Log-probability backends, preference scores, covariates, perplexity.

All log-probabilities are natural log. The preference score for a pair is
the DO sentence's length-normalized total log-probability minus the PO
sentence's; positive means the double-object form is preferred. Token
counts are whatever the backend reports (subword counts for real models,
whitespace counts for stubs), while the length covariate uses the
whitespace word counts of the argument spans.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Protocol, Sequence

import requests

from .alternate import AlternationPair


@dataclass(frozen=True)
class ScoredSentence:
    text: str
    total_logprob: float
    token_count: int


class BackendError(RuntimeError):
    """A backend could not score the requested texts."""


class LogProbBackend(Protocol):
    identity: str

    def score_batch(self, texts: Sequence[str]) -> list[ScoredSentence]: ...


@dataclass
class UniformBackend:
    """Assigns every token the same log-probability; handy for identities."""

    per_token_logprob: float = -2.0
    identity: str = "uniform"

    def score_batch(self, texts: Sequence[str]) -> list[ScoredSentence]:
        out = []
        for text in texts:
            count = len(text.split())
            if count == 0:
                raise BackendError(f"cannot score empty text: {text!r}")
            out.append(ScoredSentence(text, self.per_token_logprob * count, count))
        return out


class TableBackend:
    """Scores from an in-memory table keyed by exact text."""

    def __init__(self, table: Mapping[str, tuple[float, int]], identity: str = "table"):
        self.table = dict(table)
        self.identity = identity

    def score_batch(self, texts: Sequence[str]) -> list[ScoredSentence]:
        missing = [t for t in texts if t not in self.table]
        if missing:
            raise BackendError(f"no scores for {len(missing)} texts, first: {missing[0]!r}")
        return [ScoredSentence(t, *self.table[t]) for t in texts]


class FileBackend(TableBackend):
    """JSON-lines score table: one ``{text, total_logprob, token_count}`` per line."""

    def __init__(self, path: Path | str, identity: str | None = None):
        table = {}
        path = Path(path)
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                table[record["text"]] = (
                    float(record["total_logprob"]),
                    int(record["token_count"]),
                )
        super().__init__(table, identity or f"file:{path.name}")


class HTTPBackend:
    """Client for the scoring service wire format.

    POST ``/score`` with ``{"texts": [...]}`` returns order-aligned
    ``{"scores": [{"total_logprob": r, "token_count": n}, ...]}``, and GET
    ``/health`` returns 200 once a model is loaded.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = 30.0,
        retries: int = 2,
        identity: str | None = None,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self._identity = identity
        self._session = session or requests.Session()

    @property
    def identity(self) -> str:
        if self._identity is None:
            try:
                health = self.health()
                self._identity = str(health.get("model_identity", self.base_url))
            except BackendError:
                self._identity = self.base_url
        return self._identity

    def health(self) -> dict:
        try:
            response = self._session.get(f"{self.base_url}/health", timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendError(f"health check failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendError(f"service not ready: HTTP {response.status_code}")
        return response.json()

    def score_batch(self, texts: Sequence[str]) -> list[ScoredSentence]:
        payload = {"texts": list(texts)}
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self._session.post(
                    f"{self.base_url}/score", json=payload, timeout=self.timeout
                )
                if response.status_code != 200:
                    raise BackendError(
                        f"scoring failed: HTTP {response.status_code}: {response.text[:200]}"
                    )
                scores = response.json()["scores"]
                if len(scores) != len(texts):
                    raise BackendError(
                        f"response misaligned: {len(scores)} scores for {len(texts)} texts"
                    )
                return [
                    ScoredSentence(t, float(s["total_logprob"]), int(s["token_count"]))
                    for t, s in zip(texts, scores)
                ]
            except (requests.RequestException, BackendError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(min(0.25 * (attempt + 1), 2.0))
        raise BackendError(f"scoring failed after {self.retries + 1} attempts: {last_error}")


def do_preference(do: ScoredSentence, po: ScoredSentence) -> float:
    """Length-normalized log-probability difference, DO minus PO."""
    if do.token_count < 1 or po.token_count < 1:
        raise ValueError("token counts must be >= 1")
    return do.total_logprob / do.token_count - po.total_logprob / po.token_count


class FeatureDiffs(NamedTuple):
    length_diff: float
    animacy_diff: int


def encode_features(pair: AlternationPair) -> FeatureDiffs:
    """Length and animacy difference scores, recipient minus theme.

    ``length_diff`` is the log difference of the span word counts; the
    animacy difference is +1 when only the recipient is animate, -1 when
    only the theme is, else 0.
    """
    if pair.recipient_len < 1 or pair.theme_len < 1:
        raise ValueError(f"pair {pair.pair_id}: argument spans must be non-empty")
    length_diff = math.log(pair.recipient_len) - math.log(pair.theme_len)
    animacy_diff = int(pair.recipient_animate) - int(pair.theme_animate)
    return FeatureDiffs(length_diff, animacy_diff)


@dataclass(frozen=True)
class PreferenceRecord:
    pair_id: str
    verb_lemma: str
    score: float
    length_diff: float
    animacy_diff: int
    seed_label: str
    attested: str


@dataclass(frozen=True)
class EvalFailure:
    pair_id: str
    message: str


@dataclass
class EvalResult:
    records: list[PreferenceRecord]
    failures: list[EvalFailure]


def _record_for(pair: AlternationPair, do: ScoredSentence, po: ScoredSentence, label: str) -> PreferenceRecord:
    features = encode_features(pair)
    return PreferenceRecord(
        pair_id=pair.pair_id,
        verb_lemma=pair.verb_lemma,
        score=do_preference(do, po),
        length_diff=features.length_diff,
        animacy_diff=features.animacy_diff,
        seed_label=label,
        attested=pair.attested,
    )


def evaluate_pairs(
    pairs: Sequence[AlternationPair],
    backend: LogProbBackend,
    batch_size: int = 64,
) -> EvalResult:
    """Score both realizations of every pair and emit preference records.

    A failed batch is retried pair by pair so one bad entry only loses
    itself; failures are reported alongside the partial results.
    """
    records: list[PreferenceRecord] = []
    failures: list[EvalFailure] = []
    label = backend.identity
    for start in range(0, len(pairs), batch_size):
        chunk = pairs[start : start + batch_size]
        texts: list[str] = []
        for pair in chunk:
            texts.append(" ".join(pair.do_sentence))
            texts.append(" ".join(pair.po_sentence))
        try:
            scored = backend.score_batch(texts)
            for k, pair in enumerate(chunk):
                records.append(_record_for(pair, scored[2 * k], scored[2 * k + 1], label))
        except (BackendError, ValueError):
            for pair in chunk:
                try:
                    do_scored, po_scored = backend.score_batch(
                        [" ".join(pair.do_sentence), " ".join(pair.po_sentence)]
                    )
                    records.append(_record_for(pair, do_scored, po_scored, label))
                except (BackendError, ValueError) as exc:
                    failures.append(EvalFailure(pair.pair_id, str(exc)))
    return EvalResult(records=records, failures=failures)


def geo_mean_perplexity(scored: Iterable[ScoredSentence]) -> float:
    """Geometric mean of per-sentence perplexities exp(-logprob/length)."""
    total = 0.0
    count = 0
    for sentence in scored:
        if sentence.token_count < 1:
            raise ValueError("token counts must be >= 1")
        total += sentence.total_logprob / sentence.token_count
        count += 1
    if count == 0:
        raise ValueError("geometric mean perplexity needs at least one sentence")
    return math.exp(-total / count)
