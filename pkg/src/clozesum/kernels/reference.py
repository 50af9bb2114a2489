"""Pure-numpy backend for the sequential kernel loops.

Mirrors clozesum.kernels._core exactly; shapes and gate layout follow
clozesum.numerics ([input, forget, candidate, output] blocks of 4H).
Sequences are (T, dim) row-major float64.
"""

import numpy as np
from scipy.special import expit

MODE_SAMPLE = 0
MODE_GREEDY = 1
MODE_FORCED = 2


def lstm_loop_forward(xproj, w_rec, h0, c0):
    """Run an LSTM over a sequence of precomputed input projections.

    xproj (T, 4H) already holds w_in @ x_t + bias for every step.
    Returns (hs (T, H), cs (T, H), gates (T, 4H)) with gates stored
    post-activation.
    """
    T = xproj.shape[0]
    H = w_rec.shape[1]
    hs = np.empty((T, H))
    cs = np.empty((T, H))
    gates = np.empty((T, 4 * H))
    h = h0
    c = c0
    for t in range(T):
        z = xproj[t] + w_rec @ h
        i = expit(z[:H])
        f = expit(z[H : 2 * H])
        g = np.tanh(z[2 * H : 3 * H])
        o = expit(z[3 * H :])
        c = f * c + i * g
        h = o * np.tanh(c)
        gates[t, :H] = i
        gates[t, H : 2 * H] = f
        gates[t, 2 * H : 3 * H] = g
        gates[t, 3 * H :] = o
        cs[t] = c
        hs[t] = h
    return hs, cs, gates


def lstm_loop_backward(dhs, cs, gates, w_rec, c0):
    """Reverse pass of lstm_loop_forward.

    dhs (T, H) are upstream gradients on every h_t. Returns dzs (T, 4H),
    the gradients on the pre-activation gate inputs; the caller contracts
    them against inputs / previous states for the weight gradients.
    """
    T, H = dhs.shape
    dzs = np.empty((T, 4 * H))
    dh = np.zeros(H)
    dc = np.zeros(H)
    for t in range(T - 1, -1, -1):
        i = gates[t, :H]
        f = gates[t, H : 2 * H]
        g = gates[t, 2 * H : 3 * H]
        o = gates[t, 3 * H :]
        tc = np.tanh(cs[t])
        dh_total = dhs[t] + dh
        do = dh_total * tc
        dc_total = dc + dh_total * o * (1.0 - tc * tc)
        c_prev = cs[t - 1] if t > 0 else c0
        dzs[t, :H] = dc_total * g * i * (1.0 - i)
        dzs[t, H : 2 * H] = dc_total * c_prev * f * (1.0 - f)
        dzs[t, 2 * H : 3 * H] = dc_total * i * (1.0 - g * g)
        dzs[t, 3 * H :] = do * o * (1.0 - o)
        dh = w_rec.T @ dzs[t]
        dc = dc_total * f
    return dzs


def select_loop_forward(zh, base, ycol, sel_w_s, dec_w_rec, dec_b, mode, uniforms, forced):
    """Sequential word-selection loop: sigmoid decision + tracking LSTM.

    zh (T,) holds the document-state part of every selection logit
    (already dotted with the selection weights, bias included). base
    (T, 4S) holds the tracking LSTM's input projection of the document
    state; ycol (T, 4S) is the column added when the word is selected.
    sel_w_s (S,) is the selection weight block over the tracking state.

    mode: 0 sample against `uniforms`, 1 greedy (p > 0.5, ties drop the
    word), 2 teacher-forced with `forced`. Returns (probs (T,),
    mask (T,) of 0.0/1.0, s_seq (T, S), c_seq (T, S), gates (T, 4S)).
    """
    T = zh.shape[0]
    S = dec_w_rec.shape[1]
    probs = np.empty(T)
    mask = np.empty(T)
    s_seq = np.empty((T, S))
    c_seq = np.empty((T, S))
    gates = np.empty((T, 4 * S))
    s = np.zeros(S)
    c = np.zeros(S)
    for t in range(T):
        p = expit(zh[t] + sel_w_s @ s)
        if mode == MODE_SAMPLE:
            y = 1.0 if uniforms[t] < p else 0.0
        elif mode == MODE_GREEDY:
            y = 1.0 if p > 0.5 else 0.0
        else:
            y = forced[t]
        z = base[t] + dec_b + dec_w_rec @ s
        if y == 1.0:
            z = z + ycol[t]
        i = expit(z[:S])
        f = expit(z[S : 2 * S])
        g = np.tanh(z[2 * S : 3 * S])
        o = expit(z[3 * S :])
        c = f * c + i * g
        s = o * np.tanh(c)
        probs[t] = p
        mask[t] = y
        gates[t, :S] = i
        gates[t, S : 2 * S] = f
        gates[t, 2 * S : 3 * S] = g
        gates[t, 3 * S :] = o
        s_seq[t] = s
        c_seq[t] = c
    return probs, mask, s_seq, c_seq, gates


def select_loop_backward(dz_out, s_seq, c_seq, gates, sel_w_s, dec_w_rec):
    """Reverse pass of select_loop_forward.

    dz_out (T,) are gradients on the pre-sigmoid selection logits (the
    sampled decisions themselves are constants). Returns dzs (T, 4S),
    gradients on the tracking LSTM's pre-activation inputs. The selection
    logit at step t feeds gradient into the tracking state s_{t-1}, which
    is why this loop cannot be expressed as a plain LSTM backward.
    """
    T, S = s_seq.shape
    dzs = np.empty((T, 4 * S))
    ds = np.zeros(S)
    dc = np.zeros(S)
    for t in range(T - 1, -1, -1):
        i = gates[t, :S]
        f = gates[t, S : 2 * S]
        g = gates[t, 2 * S : 3 * S]
        o = gates[t, 3 * S :]
        tc = np.tanh(c_seq[t])
        do = ds * tc
        dc_total = dc + ds * o * (1.0 - tc * tc)
        c_prev = c_seq[t - 1] if t > 0 else np.zeros(S)
        dzs[t, :S] = dc_total * g * i * (1.0 - i)
        dzs[t, S : 2 * S] = dc_total * c_prev * f * (1.0 - f)
        dzs[t, 2 * S : 3 * S] = dc_total * i * (1.0 - g * g)
        dzs[t, 3 * S :] = do * o * (1.0 - o)
        ds = dec_w_rec.T @ dzs[t] + dz_out[t] * sel_w_s
        dc = dc_total * f
    return dzs
