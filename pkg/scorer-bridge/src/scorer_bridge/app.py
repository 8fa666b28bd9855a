"""HTTP surface of the scoring service.

GET /health returns 200 with the model identity once the checkpoint is
loaded and 503 while it is not. POST /score takes ``{"texts": [...]}`` and
returns order-aligned ``{"scores": [{"total_logprob", "token_count"}]}``;
empty requests and overlong texts get 422 (the latter naming the offending
index), and scoring before the model is ready gets 503.

One process serves one checkpoint; multi-seed experiments run one service
per checkpoint.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .model import CausalScorer, ScoringError


class ScoreRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class ScoreItem(BaseModel):
    total_logprob: float
    token_count: int


class ScoreResponse(BaseModel):
    scores: list[ScoreItem]


class ModelHolder:
    """Thread-safe lazy owner of the scorer; inference is serialized."""

    def __init__(self, model_path: str | None, max_tokens: int | None = None):
        self.model_path = model_path
        self.max_tokens = max_tokens
        self.scorer: CausalScorer | None = None
        self._lock = threading.Lock()

    def load(self) -> None:
        with self._lock:
            if self.scorer is None:
                if not self.model_path:
                    raise RuntimeError("no model path configured")
                self.scorer = CausalScorer(self.model_path, max_tokens=self.max_tokens)

    def score(self, texts: list[str]) -> list[tuple[float, int]]:
        with self._lock:
            if self.scorer is None:
                raise RuntimeError("model not loaded")
            return self.scorer.score(texts)


def create_app(
    model_path: str | None = None,
    max_tokens: int | None = None,
    preload: bool = True,
) -> FastAPI:
    app = FastAPI(title="scorer-bridge")
    holder = ModelHolder(model_path, max_tokens=max_tokens)
    app.state.holder = holder
    if preload and model_path:
        holder.load()

    @app.get("/health")
    def health():
        scorer = holder.scorer
        if scorer is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok", "model_identity": scorer.identity}

    @app.post("/score", response_model=ScoreResponse)
    def score(request: ScoreRequest):
        if holder.scorer is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        try:
            scored = holder.score(request.texts)
        except ScoringError as exc:
            raise HTTPException(
                status_code=422, detail={"index": exc.index, "message": str(exc)}
            ) from exc
        return ScoreResponse(
            scores=[ScoreItem(total_logprob=lp, token_count=n) for lp, n in scored]
        )

    return app
