"""Dense numeric engine: layer ops, the full model, and exact backprop.

One model layer is linear -> ReLU -> layer norm -> dropout; the head is a
bias-free linear map followed by a row-stable softmax. Every backward pass
is hand-derived and checked against central finite differences in the test
suite. All arithmetic is float64; linear maps carry no bias term (the layer
norm shift absorbs it).
"""

from dataclasses import dataclass

import numpy as np

LN_EPS = 1e-5


@dataclass
class LayerParams:
    weight: np.ndarray  # (fan_in, fan_out)
    ln_gain: np.ndarray  # (fan_out,)
    ln_bias: np.ndarray  # (fan_out,)


@dataclass
class ModelParams:
    layers: list
    head: np.ndarray  # (last width, classes)
    ln_eps: float = LN_EPS

    @property
    def in_dim(self):
        return self.layers[0].weight.shape[0]

    @property
    def widths(self):
        return [lp.weight.shape[1] for lp in self.layers]

    @property
    def classes(self):
        return self.head.shape[1]


def init_params(in_dim, widths, classes, rng, ln_eps=LN_EPS):
    """Uniform +-sqrt(6/(fan_in+fan_out)) weights, gain 1 / bias 0 norms."""
    if len(widths) < 1:
        raise ValueError("at least one layer is required")
    layers = []
    fan_in = in_dim
    for w in widths:
        lim = np.sqrt(6.0 / (fan_in + w))
        layers.append(
            LayerParams(
                weight=rng.uniform(-lim, lim, size=(fan_in, w)),
                ln_gain=np.ones(w),
                ln_bias=np.zeros(w),
            )
        )
        fan_in = w
    lim = np.sqrt(6.0 / (fan_in + classes))
    head = rng.uniform(-lim, lim, size=(fan_in, classes))
    return ModelParams(layers=layers, head=head, ln_eps=ln_eps)


# ---------------------------------------------------------------------------
# single-op forward passes


def linear_forward(x, w):
    if x.shape[1] != w.shape[0]:
        raise ValueError(f"inner dims mismatch: {x.shape} @ {w.shape}")
    return x @ w


def relu_forward(x):
    return np.maximum(x, 0.0)


def layernorm_forward(x, gain, bias, eps=LN_EPS):
    """Row-wise normalization: (x - mean)/sqrt(var + eps) * gain + bias.

    Returns the output plus (xhat, inv_std) needed by the backward pass.
    Variance is the population variance of the row.
    """
    mu = x.mean(axis=1, keepdims=True)
    var = ((x - mu) ** 2).mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (x - mu) * inv_std
    return xhat * gain + bias, (xhat, inv_std)


def dropout_forward(x, rate, rng, training):
    """Inverted dropout: zero with prob `rate`, scale survivors at train time.

    Inference is an exact identity (mask of ones), which is what makes the
    deployed forward pass a pure feed-forward map.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x, np.ones_like(x)
    mask = (rng.random(x.shape) >= rate).astype(np.float64)
    return x * mask / (1.0 - rate), mask


def head_forward(z, w):
    """Row-wise softmax of z @ w, stabilized by max subtraction."""
    scores = linear_forward(z, w)
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# full model


@dataclass
class LayerCache:
    x_in: np.ndarray
    pre_act: np.ndarray
    ln_stats: tuple
    mask: np.ndarray
    rate: float


def mlp_forward(params, x, rng=None, training=False, dropout_rate=0.0):
    """Apply every layer in order; returns final embeddings and the cache.

    `rng` is consumed only when training with dropout_rate > 0, so
    training and inference are bitwise identical at rate 0.
    """
    if x.shape[1] != params.in_dim:
        raise ValueError(
            f"input width {x.shape[1]} != model input width {params.in_dim}"
        )
    rate = dropout_rate if training else 0.0
    cache = []
    z = x
    for lp in params.layers:
        pre = linear_forward(z, lp.weight)
        act = relu_forward(pre)
        normed, stats = layernorm_forward(act, lp.ln_gain, lp.ln_bias, params.ln_eps)
        out, mask = dropout_forward(normed, rate, rng, training)
        cache.append(LayerCache(x_in=z, pre_act=pre, ln_stats=stats, mask=mask, rate=rate))
        z = out
    return z, cache


# ---------------------------------------------------------------------------
# backward passes (exact, one per forward op)


def linear_backward(x, w, g_out):
    return g_out @ w.T, x.T @ g_out


def relu_backward(pre_act, g_out):
    return g_out * (pre_act > 0.0)


def layernorm_backward(ln_stats, gain, g_out):
    """Gradient through row-wise layer norm.

    With xhat the normalized rows and s the inverse std:
      dL/dx = s * (g*gain - mean(g*gain) - xhat * mean(g*gain * xhat))
    where the means run over the feature axis.
    """
    xhat, inv_std = ln_stats
    g_gain = (g_out * xhat).sum(axis=0)
    g_bias = g_out.sum(axis=0)
    g_xhat = g_out * gain
    m1 = g_xhat.mean(axis=1, keepdims=True)
    m2 = (g_xhat * xhat).mean(axis=1, keepdims=True)
    g_x = inv_std * (g_xhat - m1 - xhat * m2)
    return g_x, g_gain, g_bias


def dropout_backward(mask, rate, g_out):
    if rate == 0.0:
        return g_out
    return g_out * mask / (1.0 - rate)


def softmax_ce_backward(scores, y_onehot, mask_idx):
    """Fused gradient of masked mean cross-entropy at the raw scores.

    Equals (softmax(scores) - y) / |mask| on masked rows, zero elsewhere.
    """
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    p = e / e.sum(axis=1, keepdims=True)
    g = np.zeros_like(scores)
    g[mask_idx] = (p[mask_idx] - y_onehot[mask_idx]) / len(mask_idx)
    return g


@dataclass
class ParamGrads:
    layers: list  # LayerParams-shaped gradient triples
    head: np.ndarray


def mlp_backward(params, cache, g_z):
    """Backprop g_z (gradient at the final embeddings) through every layer.

    Returns per-parameter gradients and the gradient at the model input.
    """
    if len(cache) != len(params.layers):
        raise ValueError("cache does not match the model: rerun the forward pass")
    layer_grads = [None] * len(params.layers)
    g = g_z
    for i in range(len(params.layers) - 1, -1, -1):
        lp, lc = params.layers[i], cache[i]
        g = dropout_backward(lc.mask, lc.rate, g)
        g, g_gain, g_bias = layernorm_backward(lc.ln_stats, lp.ln_gain, g)
        g = relu_backward(lc.pre_act, g)
        g, g_w = linear_backward(lc.x_in, lp.weight, g)
        layer_grads[i] = LayerParams(weight=g_w, ln_gain=g_gain, ln_bias=g_bias)
    return layer_grads, g


# ---------------------------------------------------------------------------
# flat parameter views (optimizer-facing)


def params_to_list(params):
    out = []
    for lp in params.layers:
        out.extend([lp.weight, lp.ln_gain, lp.ln_bias])
    out.append(params.head)
    return out


def list_to_params(template, arrays):
    layers = []
    it = iter(arrays)
    for _ in template.layers:
        layers.append(LayerParams(weight=next(it), ln_gain=next(it), ln_bias=next(it)))
    return ModelParams(layers=layers, head=next(it), ln_eps=template.ln_eps)


def grads_to_list(layer_grads, head_grad):
    out = []
    for lg in layer_grads:
        out.extend([lg.weight, lg.ln_gain, lg.ln_bias])
    out.append(head_grad)
    return out
