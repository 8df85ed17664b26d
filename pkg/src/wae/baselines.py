"""Comparison methods: color histogram, component matching, FC autoencoder.

The histogram baseline ranks by low-level color statistics of the rendered
wireframe. The component-matching baseline scores screens by a maximum
weight bipartite matching over per-component position/size awards. The
fully-connected baseline is a six-layer perceptron autoencoder over a
2-channel text/non-text raster.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import nn
from .model import TEXT_TYPES, UIComponent, UIScreen
from .prng import SplitMix64
from .wirify import WireframeImage, map_bounds

# --- color histogram ---------------------------------------------------------

HISTOGRAM_BINS = 32


def histogram_feature(image: WireframeImage | np.ndarray, bins: int = HISTOGRAM_BINS) -> np.ndarray:
    """Per-channel L1-normalized histogram, (channels, bins)."""
    values = image.values if isinstance(image, WireframeImage) else image
    if values.ndim != 3 or values.shape[2] != 3:
        raise ValueError("histogram_feature expects a 3-channel raster")
    idx = np.clip((values * bins).astype(np.int64), 0, bins - 1)
    out = np.zeros((3, bins), dtype=np.float64)
    total = values.shape[0] * values.shape[1]
    for c in range(3):
        out[c] = np.bincount(idx[:, :, c].reshape(-1), minlength=bins) / total
    return out


def histogram_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Sum over channels of the L2 distance between the histograms."""
    if a.shape != b.shape:
        raise ValueError("histogram shape mismatch")
    return float(np.sqrt(((a - b) ** 2).sum(axis=1)).sum())


# --- component matching ------------------------------------------------------

REFERENCE_EXTENT = (1080, 1920)
PAIR_AWARD = 10
PAIR_MAX = 40


@dataclass(frozen=True)
class GuiFetchConfig:
    """Per-factor pixel thresholds at the reference resolution."""

    threshold_x: float = 10.0
    threshold_y: float = 10.0
    threshold_w: float = 10.0
    threshold_h: float = 10.0

    def __post_init__(self):
        for t in (self.threshold_x, self.threshold_y, self.threshold_w, self.threshold_h):
            if t <= 0:
                raise ValueError("thresholds must be positive")


def _component_xywh(comp: UIComponent, sx: float = 1.0, sy: float = 1.0):
    b = comp.bounds
    return (b.left * sx, b.top * sy, b.width * sx, b.height * sy)


def _score_xywh(t1, t2, code1: int, code2: int, cfg: GuiFetchConfig) -> int:
    if code1 != code2:
        return 0
    score = 0
    if abs(t1[0] - t2[0]) <= cfg.threshold_x:
        score += PAIR_AWARD
    if abs(t1[1] - t2[1]) <= cfg.threshold_y:
        score += PAIR_AWARD
    if abs(t1[2] - t2[2]) <= cfg.threshold_w:
        score += PAIR_AWARD
    if abs(t1[3] - t2[3]) <= cfg.threshold_h:
        score += PAIR_AWARD
    return score


def pair_score(c1: UIComponent, c2: UIComponent, cfg: GuiFetchConfig | None = None) -> int:
    """0 for different types, else 10 per factor (x, y, w, h) within threshold."""
    cfg = cfg or GuiFetchConfig()
    return _score_xywh(
        _component_xywh(c1), _component_xywh(c2), c1.ctype.code, c2.ctype.code, cfg
    )


def _screen_arrays(screen: UIScreen) -> tuple[np.ndarray, np.ndarray]:
    """(n, 4) x/y/w/h at the reference resolution, plus (n,) type codes."""
    sx = REFERENCE_EXTENT[0] / screen.width
    sy = REFERENCE_EXTENT[1] / screen.height
    coords = np.array(
        [
            (c.bounds.left * sx, c.bounds.top * sy, c.bounds.width * sx, c.bounds.height * sy)
            for c in screen.components
        ],
        dtype=np.float64,
    ).reshape(len(screen.components), 4)
    codes = np.array([c.ctype.code for c in screen.components], dtype=np.int64)
    return coords, codes


def _score_matrix_arrays(
    q: tuple[np.ndarray, np.ndarray], cand: tuple[np.ndarray, np.ndarray], cfg: GuiFetchConfig
) -> np.ndarray:
    qc, qcode = q
    cc, ccode = cand
    thresholds = np.array(
        [cfg.threshold_x, cfg.threshold_y, cfg.threshold_w, cfg.threshold_h]
    )
    deltas = np.abs(qc[:, None, :] - cc[None, :, :])
    awards = (deltas <= thresholds).sum(axis=2) * PAIR_AWARD
    same_type = qcode[:, None] == ccode[None, :]
    return np.where(same_type, awards, 0).astype(np.float64)


def _score_matrix(query: UIScreen, candidate: UIScreen, cfg: GuiFetchConfig) -> np.ndarray:
    # both screens are normalized to the reference resolution so the pixel
    # thresholds mean the same thing regardless of capture device
    return _score_matrix_arrays(_screen_arrays(query), _screen_arrays(candidate), cfg)


def _similarity_from_matrix(mat: np.ndarray, nq: int) -> float:
    rows, cols = linear_sum_assignment(mat, maximize=True)
    matched = mat[rows, cols].sum()
    return float(matched) / (PAIR_MAX * nq)


def guifetch_similarity(
    query: UIScreen, candidate: UIScreen, cfg: GuiFetchConfig | None = None
) -> float:
    """Matched award sum over the best bipartite matching, / (40 * |query|)."""
    cfg = cfg or GuiFetchConfig()
    nq = len(query.components)
    if nq == 0:
        raise ValueError("query screen has no components")
    if len(candidate.components) == 0:
        return 0.0
    return _similarity_from_matrix(_score_matrix(query, candidate, cfg), nq)


def guifetch_similarities(
    query: UIScreen,
    candidates: list[tuple[np.ndarray, np.ndarray]],
    cfg: GuiFetchConfig | None = None,
) -> np.ndarray:
    """Similarity of one query against pre-extracted candidate arrays."""
    cfg = cfg or GuiFetchConfig()
    nq = len(query.components)
    if nq == 0:
        raise ValueError("query screen has no components")
    q = _screen_arrays(query)
    sims = np.zeros(len(candidates))
    for j, cand in enumerate(candidates):
        if cand[0].shape[0] == 0:
            continue
        sims[j] = _similarity_from_matrix(_score_matrix_arrays(q, cand, cfg), nq)
    return sims


# --- fully-connected autoencoder ----------------------------------------------

FCAE_RASTER = (50, 64)  # (width, height)
FCAE_LAYERS = (2048, 256, 64, 256, 2048)  # hidden sizes between input and output


def render_text_nontext(screen: UIScreen, size: tuple[int, int] = FCAE_RASTER) -> np.ndarray:
    """2-channel binary raster: channel 0 text components, channel 1 the rest."""
    out_w, out_h = size
    canvas = np.zeros((out_h, out_w, 2), dtype=np.float32)
    sx = out_w / screen.width
    sy = out_h / screen.height
    for comp in screen.components:
        left, top, right, bottom = map_bounds(comp.bounds, sx, sy, out_w, out_h)
        if right <= left or bottom <= top:
            continue
        channel = 0 if comp.ctype in TEXT_TYPES else 1
        canvas[top:bottom, left:right, channel] = 1.0
    return canvas


class FcAeModel:
    """Six fully-connected layers, ReLU between; latent is layer 3's output."""

    def __init__(self, input_dim: int, seed: int = 0):
        sizes = (input_dim, *FCAE_LAYERS, input_dim)
        rng = SplitMix64(seed ^ 0xFCAE)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            self.weights.append(nn.init_uniform((fan_in, fan_out), fan_in, rng))
            self.biases.append(np.zeros(fan_out, dtype=np.float32))
        self.input_dim = input_dim

    def forward(self, x: np.ndarray):
        caches = []
        out = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            pre = out @ w + b
            if i < len(self.weights) - 1:
                post, mask = nn.relu_forward(pre)
            else:
                post, mask = pre, None
            caches.append((out, mask))
            out = post
        return out, caches

    def backward(self, grad: np.ndarray, caches):
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.weights)
        g = grad
        for i in reversed(range(len(self.weights))):
            inp, mask = caches[i]
            if mask is not None:
                g = nn.relu_backward(g, mask)
            grads_w[i] = inp.T @ g
            grads_b[i] = g.sum(axis=0)
            g = g @ self.weights[i].T
        return grads_w, grads_b

    def encode(self, x: np.ndarray) -> np.ndarray:
        out = x
        for i in range(3):
            pre = out @ self.weights[i] + self.biases[i]
            out = np.maximum(pre, 0)
        return out


def fcae_encode(model: FcAeModel, screen: UIScreen) -> np.ndarray:
    """64-dim latent of the screen's text/non-text raster."""
    raster = render_text_nontext(screen)
    return model.encode(raster.reshape(1, -1).astype(np.float32))[0]


def train_fcae(
    screens: list[UIScreen],
    epochs: int = 50,
    lr: float = 0.01,
    momentum: float = 0.9,
    batch_size: int = 32,
    seed: int = 0,
) -> tuple[FcAeModel, list[float]]:
    """Same minibatch-SGD reconstruction training as the convolutional model."""
    rasters = np.stack([render_text_nontext(s) for s in screens])
    x_all = rasters.reshape(rasters.shape[0], -1).astype(np.float32)
    n, dim = x_all.shape
    if batch_size > n:
        raise ValueError("batch size exceeds corpus size")
    model = FcAeModel(dim, seed=seed)
    velocities_w = [np.zeros_like(w) for w in model.weights]
    velocities_b = [np.zeros_like(b) for b in model.biases]
    shuffler = SplitMix64(seed ^ 0x5AFE)
    history = []
    for epoch in range(epochs):
        order = list(range(n))
        shuffler.shuffle(order)
        losses = []
        for start in range(0, n, batch_size):
            xb = x_all[order[start : start + batch_size]]
            out, caches = model.forward(xb)
            loss, diff = nn.mse_loss(out, xb)
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}; the learning rate ({lr}) "
                    "is the most likely cause"
                )
            losses.append(loss)
            grads_w, grads_b = model.backward(nn.mse_loss_backward(diff), caches)
            for i in range(len(model.weights)):
                model.weights[i], velocities_w[i] = nn.sgd_step(
                    model.weights[i], grads_w[i], velocities_w[i], lr, momentum
                )
                model.biases[i], velocities_b[i] = nn.sgd_step(
                    model.biases[i], grads_b[i], velocities_b[i], lr, momentum
                )
        history.append(float(np.mean(losses)))
    return model, history
