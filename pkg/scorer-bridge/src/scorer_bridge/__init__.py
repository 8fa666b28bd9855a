"""HTTP log-probability scoring service around a causal language model."""

__version__ = "0.1.0"

from .app import create_app
from .model import CausalScorer, ScoringError
