"""Sentence scoring on top of a Hugging Face causal language model.

A sentence's total log-probability is the sum of natural-log next-token
probabilities over the full sequence, conditioning the first real token on
the model's BOS token. The reported token count is the number of scored
(real) tokens under the model's own tokenizer.

Scoring is deterministic for a fixed checkpoint; batching uses right
padding with an attention mask, so a text scores the same alone or inside
a batch up to small float reassociation (documented tolerance 1e-4).
"""

from __future__ import annotations

from pathlib import Path

import torch
import torch.nn.functional as F
from transformers import AutoModelForCausalLM, AutoTokenizer


class ScoringError(ValueError):
    """A text in the request cannot be scored; carries its index."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class CausalScorer:
    def __init__(self, model_path: str | Path, max_tokens: int | None = None):
        model_path = Path(model_path)
        self.tokenizer = AutoTokenizer.from_pretrained(str(model_path))
        self.model = AutoModelForCausalLM.from_pretrained(str(model_path))
        self.model.eval()
        self.identity = model_path.name
        bos = self.tokenizer.bos_token_id
        if bos is None:
            bos = self.tokenizer.eos_token_id
        if bos is None:
            raise ValueError("tokenizer defines neither BOS nor EOS token")
        self.bos_id = int(bos)
        pad = self.tokenizer.pad_token_id
        self.pad_id = int(pad) if pad is not None else self.bos_id
        model_limit = int(getattr(self.model.config, "n_positions", 0) or 4096)
        self.max_tokens = min(max_tokens or model_limit, model_limit)

    def _encode(self, texts: list[str]) -> list[list[int]]:
        encoded = []
        for index, text in enumerate(texts):
            ids = self.tokenizer.encode(text, add_special_tokens=False)
            if not ids:
                raise ScoringError(index, f"text {index} tokenizes to nothing")
            if len(ids) + 1 > self.max_tokens:
                raise ScoringError(
                    index,
                    f"text {index} is {len(ids)} tokens, limit {self.max_tokens - 1}",
                )
            encoded.append([self.bos_id] + ids)
        return encoded

    @torch.no_grad()
    def score(self, texts: list[str]) -> list[tuple[float, int]]:
        """Return (total_logprob, token_count) per text, order aligned."""
        sequences = self._encode(list(texts))
        width = max(len(seq) for seq in sequences)
        input_ids = torch.full((len(sequences), width), self.pad_id, dtype=torch.long)
        mask = torch.zeros((len(sequences), width), dtype=torch.long)
        for row, seq in enumerate(sequences):
            input_ids[row, : len(seq)] = torch.tensor(seq, dtype=torch.long)
            mask[row, : len(seq)] = 1
        logits = self.model(input_ids=input_ids, attention_mask=mask).logits
        logprobs = F.log_softmax(logits.float(), dim=-1)
        out = []
        for row, seq in enumerate(sequences):
            targets = torch.tensor(seq[1:], dtype=torch.long)
            per_token = logprobs[row, : len(seq) - 1].gather(1, targets.unsqueeze(1))
            out.append((float(per_token.sum().item()), len(seq) - 1))
        return out
