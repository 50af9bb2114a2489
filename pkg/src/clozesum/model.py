"""Parameter layout for the full summarizer + QA reward model.

One ParamStore holds everything: the shared embedding table, a document
encoder, the question/summary encoder, the attention/answer head of the
reward model, and the selection head with its tracking LSTM. Names are
stable strings so checkpoints and gradient checks can address tensors
individually.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import ParamStore, add_lstm_params, xavier_uniform

EMBEDDING = "embed.table"
DOC_ENCODER = "doc_enc"
QS_ENCODER = "qs_enc"
ATTENTION = "attend.bilinear"
ANSWER_PROJ = "answer.proj"
DECIDE = "decide"
SELECT_W = "select.weight"
SELECT_B = "select.bias"


@dataclass(frozen=True)
class ModelDims:
    vocab_size: int
    answer_count: int
    embed_dim: int
    hidden_size: int
    decide_hidden: int
    share_encoders: bool = False

    @property
    def state_dim(self) -> int:
        """Per-token encoder output width (forward ++ backward)."""
        return 2 * self.hidden_size


def doc_encoder_prefix(dims: ModelDims) -> str:
    return QS_ENCODER if dims.share_encoders else DOC_ENCODER


def init_params(dims: ModelDims, rng: np.random.Generator,
                embedding: np.ndarray | None = None) -> ParamStore:
    """Build a freshly initialized ParamStore for the given dimensions.

    `embedding` optionally supplies a pre-trained (vocab_size, embed_dim)
    table; it stays trainable either way.
    """
    store = ParamStore()
    if embedding is None:
        embedding = rng.uniform(-0.05, 0.05, size=(dims.vocab_size, dims.embed_dim))
    elif embedding.shape != (dims.vocab_size, dims.embed_dim):
        raise ValueError(
            f"embedding table {embedding.shape} does not match "
            f"({dims.vocab_size}, {dims.embed_dim})"
        )
    store.add(EMBEDDING, embedding)
    for direction in ("fw", "bw"):
        add_lstm_params(store, f"{QS_ENCODER}.{direction}", dims.embed_dim,
                        dims.hidden_size, rng)
    if not dims.share_encoders:
        for direction in ("fw", "bw"):
            add_lstm_params(store, f"{DOC_ENCODER}.{direction}", dims.embed_dim,
                            dims.hidden_size, rng)
    d = dims.state_dim
    store.add(ATTENTION, xavier_uniform(rng, d, d))
    store.add(ANSWER_PROJ, xavier_uniform(rng, dims.answer_count, d))
    add_lstm_params(store, DECIDE, d + 1, dims.decide_hidden, rng)
    store.add(SELECT_W, xavier_uniform(rng, 1, d + dims.decide_hidden)[0])
    store.add(SELECT_B, np.zeros(1))
    return store
