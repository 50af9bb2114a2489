"""Bidirectional recurrent encoding of token sequences.

Documents use their own encoder parameters; questions and summaries
share one encoder (and optionally the document encoder too, behind the
share_encoders switch). Per-token states are the concatenation of the
forward and backward hidden states, so their width is twice the LSTM
hidden size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import EMBEDDING


@dataclass
class DirectionCache:
    xs: np.ndarray      # (T, I) inputs actually fed to the cell
    hs: np.ndarray      # (T, H)
    cs: np.ndarray      # (T, H)
    gates: np.ndarray   # (T, 4H) post-activation


@dataclass
class SeqCache:
    token_ids: np.ndarray
    prefix: str
    fw: DirectionCache
    bw: DirectionCache
    drop_fw: np.ndarray | None
    drop_bw: np.ndarray | None


def _run_direction(xs, store, prefix):
    w_in = store.get(prefix + ".w_in")
    w_rec = store.get(prefix + ".w_rec")
    bias = store.get(prefix + ".bias")
    hidden = w_rec.shape[1]
    xproj = xs @ w_in.T + bias
    hs, cs, gates = kernels.lstm_loop_forward(
        np.ascontiguousarray(xproj), w_rec, np.zeros(hidden), np.zeros(hidden)
    )
    return DirectionCache(xs=xs, hs=hs, cs=cs, gates=gates)


def _direction_backward(dhs, cache, store, prefix):
    w_in = store.get(prefix + ".w_in")
    w_rec = store.get(prefix + ".w_rec")
    hidden = w_rec.shape[1]
    dzs = kernels.lstm_loop_backward(
        np.ascontiguousarray(dhs), cache.cs, cache.gates, w_rec, np.zeros(hidden)
    )
    h_prev = np.vstack([np.zeros((1, hidden)), cache.hs[:-1]])
    store.add_grad(prefix + ".w_rec", dzs.T @ h_prev)
    store.add_grad(prefix + ".w_in", dzs.T @ cache.xs)
    store.add_grad(prefix + ".bias", dzs.sum(axis=0))
    return dzs @ w_in


def encode_seq(token_ids, store, prefix, rng=None, dropout=0.0, training=False):
    """Encode a token-id sequence into per-token states.

    Returns (states (T, 2H), SeqCache). Dropout, when enabled, is applied
    to the embedded inputs of each direction independently.
    """
    token_ids = np.asarray(token_ids, dtype=np.intp)
    if token_ids.size == 0:
        raise ValueError("cannot encode an empty sequence")
    xs = store.get(EMBEDDING)[token_ids]
    drop_fw = drop_bw = None
    xs_fw, xs_bw = xs, xs[::-1]
    if training and dropout > 0.0:
        keep = 1.0 - dropout
        drop_fw = (rng.random(xs.shape) >= dropout) / keep
        drop_bw = (rng.random(xs.shape) >= dropout) / keep
        xs_fw = xs * drop_fw
        xs_bw = xs_fw[::-1] * 0 + (xs[::-1] * drop_bw)  # keep shapes explicit
        xs_bw = xs[::-1] * drop_bw
    fw = _run_direction(np.ascontiguousarray(xs_fw), store, prefix + ".fw")
    bw = _run_direction(np.ascontiguousarray(xs_bw), store, prefix + ".bw")
    states = np.concatenate([fw.hs, bw.hs[::-1]], axis=1)
    cache = SeqCache(token_ids=token_ids, prefix=prefix, fw=fw, bw=bw,
                     drop_fw=drop_fw, drop_bw=drop_bw)
    return states, cache


def encode_seq_backward(dstates, cache, store):
    """Accumulate encoder and embedding gradients for upstream dstates."""
    hidden = cache.fw.hs.shape[1]
    dxs_fw = _direction_backward(dstates[:, :hidden], cache.fw, store,
                                 cache.prefix + ".fw")
    dxs_bw = _direction_backward(
        np.ascontiguousarray(dstates[::-1, hidden:]), cache.bw, store,
        cache.prefix + ".bw"
    )
    if cache.drop_fw is not None:
        dxs_fw = dxs_fw * cache.drop_fw
        dxs_bw = dxs_bw * cache.drop_bw
    dxs = dxs_fw + dxs_bw[::-1]
    np.add.at(store.grad(EMBEDDING), cache.token_ids, dxs)


def encode_question(token_ids, store, prefix):
    """Encode a question into one vector: [forward last ++ backward last].

    Uses the same parameters as summary encoding (same prefix). Returns
    (q (2H,), SeqCache).
    """
    states, cache = encode_seq(token_ids, store, prefix)
    hidden = cache.fw.hs.shape[1]
    q = np.concatenate([states[-1, :hidden], states[0, hidden:]])
    return q, cache


def encode_question_backward(dq, cache, store):
    hidden = cache.fw.hs.shape[1]
    T = cache.fw.hs.shape[0]
    dstates = np.zeros((T, 2 * hidden))
    dstates[-1, :hidden] = dq[:hidden]
    dstates[0, hidden:] = dq[hidden:]
    encode_seq_backward(dstates, cache, store)
