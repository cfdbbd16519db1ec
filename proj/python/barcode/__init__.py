"""Python bindings for the BARcode bio-inspiration search engine."""
import json as _json

from ._core import (  # noqa: F401
    ConfigError,
    Error,
    ProviderError,
    StoreError,
    ValidationError,
    fleiss_kappa,
    mann_whitney_u,
    ndcg_at_k,
    precision_at_k,
    problem_pairs,
    rbo,
    run_cli,
)
from . import _core

__all__ = [
    "Engine", "build_index", "verify_bundle", "precision_at_k", "ndcg_at_k", "rbo",
    "mann_whitney_u", "fleiss_kappa", "problem_pairs", "run_cli", "Error", "ConfigError",
    "ValidationError", "ProviderError", "StoreError",
]


def _paths(config):
    return None if config is None else str(config)


def build_index(index_dir, articles=None, config=None, overrides=None, force=False):
    """Runs every pending pipeline stage and seals the bundle."""
    return _json.loads(_core._build_index(str(index_dir), None if articles is None else str(articles),
                                          _paths(config), dict(overrides or {}), force))


def verify_bundle(index_dir):
    """Re-hashes a sealed bundle; raises StoreError on any mismatch."""
    return _json.loads(_core._verify_bundle(str(index_dir)))


class Engine:
    """A loaded, verified index bundle."""

    def __init__(self, index_dir, config=None, overrides=None):
        self._engine = _core._Engine(str(index_dir), _paths(config), dict(overrides or {}))

    def query(self, text, k=15, filtered=False, baseline=False):
        return _json.loads(self._engine.query(text, k, filtered, baseline))

    def sentence(self, sentence_id):
        return _json.loads(self._engine.sentence(sentence_id))

    @property
    def manifest(self):
        return _json.loads(self._engine.manifest())
