"""The wireframe autoencoder: encoder, decoder, training loop, saliency.

The encoder is four blocks of (3x3 conv -> ReLU -> 2x2 max-pool -> batch
norm) with 16/32/32/64 kernels; the decoder mirrors it with four blocks of
(2x nearest upsample -> 3x3 transposed conv) producing 32/32/16/c channels.
Four pool halvings require the input raster to be a multiple of 16 on each
side. The flattened final encoder feature map is the latent vector used
for search: dimension 64 * (w/16) * (h/16).

Training minimizes the MSE between the input wireframe and its
reconstruction with minibatch SGD; everything is seed-deterministic.
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import nn
from .prng import SplitMix64
from .wirify import WireframeImage

CHECKPOINT_MAGIC = b"WAENET1"

ENCODER_CHANNELS = (16, 32, 32, 64)


@dataclass
class WaeConfig:
    width: int = 48
    height: int = 64
    channels: int = 3
    lr: float = 0.01
    momentum: float = 0.9
    batch_size: int = 32
    epochs: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.width % 16 != 0 or self.height % 16 != 0:
            raise ValueError(
                f"raster size {self.width}x{self.height} must be divisible by 16 "
                "(four 2x pool halvings)"
            )
        if self.channels not in (1, 3):
            raise ValueError("channels must be 1 (grey) or 3 (color/texture)")

    @property
    def encoder_channels(self) -> tuple[int, ...]:
        return ENCODER_CHANNELS

    @property
    def decoder_channels(self) -> tuple[int, ...]:
        return (32, 32, 16, self.channels)

    @property
    def latent_dim(self) -> int:
        return 64 * (self.width // 16) * (self.height // 16)


class WaeModel:
    """Parameters for the four encoder blocks and four decoder blocks."""

    def __init__(self, config: WaeConfig):
        self.config = config
        self.train_mode = False
        rng = SplitMix64(config.seed ^ 0xAE0_1D)

        self.enc_kernels: list[np.ndarray] = []
        self.enc_biases: list[np.ndarray] = []
        self.bn: list[nn.BatchNormState] = []
        in_c = config.channels
        for out_c in config.encoder_channels:
            fan_in = in_c * 9
            self.enc_kernels.append(nn.init_uniform((out_c, in_c, 3, 3), fan_in, rng))
            self.enc_biases.append(np.zeros(out_c, dtype=np.float32))
            self.bn.append(nn.BatchNormState(out_c))
            in_c = out_c

        self.dec_kernels: list[np.ndarray] = []
        self.dec_biases: list[np.ndarray] = []
        for out_c in config.decoder_channels:
            fan_in = in_c * 9
            self.dec_kernels.append(nn.init_uniform((in_c, out_c, 3, 3), fan_in, rng))
            self.dec_biases.append(np.zeros(out_c, dtype=np.float32))
            in_c = out_c
        # start reconstructions at the white canvas, the dominant pixel value
        self.dec_biases[-1][:] = 1.0

    # --- parameter plumbing -------------------------------------------------

    def parameters(self) -> list[np.ndarray]:
        """Learnable parameters in checkpoint order."""
        params = []
        for i in range(4):
            params += [self.enc_kernels[i], self.enc_biases[i], self.bn[i].gamma, self.bn[i].beta]
        for i in range(4):
            params += [self.dec_kernels[i], self.dec_biases[i]]
        return params

    def _set_parameters(self, params: list[np.ndarray]) -> None:
        it = iter(params)
        for i in range(4):
            self.enc_kernels[i] = next(it)
            self.enc_biases[i] = next(it)
            self.bn[i].gamma = next(it)
            self.bn[i].beta = next(it)
        for i in range(4):
            self.dec_kernels[i] = next(it)
            self.dec_biases[i] = next(it)

    def _state_arrays(self) -> list[np.ndarray]:
        """All persisted arrays: parameters plus batch-norm running stats."""
        arrays = []
        for i in range(4):
            arrays += [
                self.enc_kernels[i],
                self.enc_biases[i],
                self.bn[i].gamma,
                self.bn[i].beta,
                self.bn[i].running_mean,
                self.bn[i].running_var,
            ]
        for i in range(4):
            arrays += [self.dec_kernels[i], self.dec_biases[i]]
        return arrays

    def _load_state_arrays(self, arrays: list[np.ndarray]) -> None:
        it = iter(arrays)
        for i in range(4):
            self.enc_kernels[i] = next(it)
            self.enc_biases[i] = next(it)
            self.bn[i].gamma = next(it)
            self.bn[i].beta = next(it)
            self.bn[i].running_mean = next(it)
            self.bn[i].running_var = next(it)
        for i in range(4):
            self.dec_kernels[i] = next(it)
            self.dec_biases[i] = next(it)

    # --- forward passes -----------------------------------------------------

    def _encode_batch(self, x: np.ndarray, train: bool):
        caches = []
        out = x
        for i in range(4):
            out, c_conv = nn.conv2d_forward(out, self.enc_kernels[i], self.enc_biases[i])
            out, c_relu = nn.relu_forward(out)
            out, c_pool = nn.maxpool2x2_forward(out)
            bn = self.bn[i]
            out, c_bn, (new_rm, new_rv) = nn.batchnorm_forward(
                out, bn.gamma, bn.beta, bn.running_mean, bn.running_var, train=train
            )
            if train:
                bn.running_mean, bn.running_var = new_rm, new_rv
            caches.append((c_conv, c_relu, c_pool, c_bn))
        return out, caches

    def _decode_batch(self, z: np.ndarray):
        caches = []
        out = z
        for i in range(4):
            out, c_up = nn.upsample2x_forward(out)
            out, c_conv = nn.transposed_conv2d_forward(out, self.dec_kernels[i], self.dec_biases[i])
            c_relu = None
            if i < 3:
                out, c_relu = nn.relu_forward(out)
            caches.append((c_up, c_conv, c_relu))
        return out, caches

    def _backward(self, grad: np.ndarray, enc_caches, dec_caches, need_input_grad: bool = False):
        """Gradient of the loss w.r.t. every parameter (and the input)."""
        grads: dict[str, np.ndarray] = {}
        g = grad
        for i in reversed(range(4)):
            c_up, c_conv, c_relu = dec_caches[i]
            if c_relu is not None:
                g = nn.relu_backward(g, c_relu)
            g, dk, db = nn.transposed_conv2d_backward(g, c_conv)
            grads[f"dec_k{i}"] = dk
            grads[f"dec_b{i}"] = db
            g = nn.upsample2x_backward(g, c_up)
        for i in reversed(range(4)):
            c_conv, c_relu, c_pool, c_bn = enc_caches[i]
            g, dgamma, dbeta = nn.batchnorm_backward(g, c_bn)
            grads[f"bn_g{i}"] = dgamma
            grads[f"bn_b{i}"] = dbeta
            g = nn.maxpool2x2_backward(g, c_pool)
            g = nn.relu_backward(g, c_relu)
            if i == 0 and not need_input_grad:
                dk, db = nn.conv2d_backward_params(g, c_conv)
                g = None
            else:
                g, dk, db = nn.conv2d_backward(g, c_conv)
            grads[f"enc_k{i}"] = dk
            grads[f"enc_b{i}"] = db
        return grads, g

    # --- persistence ----------------------------------------------------------

    def save(self, path) -> None:
        desc = json.dumps(asdict(self.config), sort_keys=True).encode()
        payload = b"".join(a.astype("<f4").tobytes() for a in self._state_arrays())
        body = CHECKPOINT_MAGIC + struct.pack("<I", len(desc)) + desc + payload
        crc = zlib.crc32(body) & 0xFFFFFFFF
        Path(path).write_bytes(body + struct.pack("<I", crc))

    @classmethod
    def load(cls, path) -> "WaeModel":
        raw = Path(path).read_bytes()
        if len(raw) < len(CHECKPOINT_MAGIC) + 8 or raw[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
            raise ValueError("not a model checkpoint (bad magic)")
        body, crc_bytes = raw[:-4], raw[-4:]
        if struct.unpack("<I", crc_bytes)[0] != (zlib.crc32(body) & 0xFFFFFFFF):
            raise ValueError("checkpoint CRC mismatch (corrupt file)")
        off = len(CHECKPOINT_MAGIC)
        (desc_len,) = struct.unpack_from("<I", body, off)
        off += 4
        desc = json.loads(body[off : off + desc_len])
        off += desc_len
        config = WaeConfig(**desc)
        model = cls(config)
        arrays = []
        for template in model._state_arrays():
            nbytes = template.size * 4
            arr = np.frombuffer(body[off : off + nbytes], dtype="<f4").reshape(template.shape).copy()
            if arr.size != template.size:
                raise ValueError("checkpoint payload truncated")
            arrays.append(arr)
            off += nbytes
        if off != len(body):
            raise ValueError("checkpoint payload has trailing bytes")
        model._load_state_arrays(arrays)
        return model

    def fingerprint(self) -> bytes:
        """32-byte digest over config and all persisted arrays."""
        h = hashlib.sha256()
        h.update(json.dumps(asdict(self.config), sort_keys=True).encode())
        for a in self._state_arrays():
            h.update(a.astype("<f4").tobytes())
        return h.digest()


def _to_nchw(image: WireframeImage | np.ndarray) -> np.ndarray:
    arr = image.values if isinstance(image, WireframeImage) else image
    if arr.ndim != 3:
        raise ValueError(f"expected (h, w, c) raster, got shape {arr.shape}")
    return arr.transpose(2, 0, 1).astype(np.float32)


def _check_size(model: WaeModel, x: np.ndarray) -> None:
    cfg = model.config
    if x.shape[1:] != (cfg.channels, cfg.height, cfg.width):
        raise ValueError(
            f"image shape {x.shape[1:]} does not match config "
            f"({cfg.channels}, {cfg.height}, {cfg.width})"
        )


def encode(model: WaeModel, image: WireframeImage | np.ndarray) -> np.ndarray:
    """Latent vector of one wireframe (eval mode; deterministic)."""
    if model.train_mode:
        raise RuntimeError("encode requires eval mode")
    x = _to_nchw(image)[None]
    _check_size(model, x)
    feat, _ = model._encode_batch(x, train=False)
    return feat.reshape(-1)


def encode_batch(model: WaeModel, images: np.ndarray) -> np.ndarray:
    """Latents for a (n, h, w, c) stack of rasters."""
    if model.train_mode:
        raise RuntimeError("encode requires eval mode")
    x = images.transpose(0, 3, 1, 2).astype(np.float32)
    _check_size(model, x)
    feat, _ = model._encode_batch(x, train=False)
    return feat.reshape(feat.shape[0], -1)


def decode(model: WaeModel, latent: np.ndarray) -> np.ndarray:
    """Reconstruct an (h, w, c) raster-shaped tensor from a latent vector."""
    cfg = model.config
    if latent.size != cfg.latent_dim:
        raise ValueError(f"latent dim {latent.size} does not match config {cfg.latent_dim}")
    z = latent.reshape(1, 64, cfg.height // 16, cfg.width // 16).astype(np.float32)
    out, _ = model._decode_batch(z)
    return out[0].transpose(1, 2, 0)


@dataclass
class TrainResult:
    model: WaeModel
    loss_history: list[float] = field(default_factory=list)


def train(
    config: WaeConfig,
    corpus: list[WireframeImage] | np.ndarray,
    checkpoint_dir=None,
    log=None,
) -> TrainResult:
    """Minibatch SGD on reconstruction MSE; deterministic given config.seed."""
    if isinstance(corpus, np.ndarray):
        stack = corpus.astype(np.float32)
    else:
        if len(corpus) == 0:
            raise ValueError("corpus must be nonempty")
        stack = np.stack([img.values for img in corpus]).astype(np.float32)
    n = stack.shape[0]
    if n == 0:
        raise ValueError("corpus must be nonempty")
    if config.batch_size > n:
        raise ValueError(f"batch size {config.batch_size} exceeds corpus size {n}")

    x_all = stack.transpose(0, 3, 1, 2)
    model = WaeModel(config)
    _check_size(model, x_all)
    model.train_mode = True

    def params_by_name() -> dict[str, np.ndarray]:
        d = {}
        for i in range(4):
            d[f"enc_k{i}"] = model.enc_kernels[i]
            d[f"enc_b{i}"] = model.enc_biases[i]
            d[f"bn_g{i}"] = model.bn[i].gamma
            d[f"bn_b{i}"] = model.bn[i].beta
            d[f"dec_k{i}"] = model.dec_kernels[i]
            d[f"dec_b{i}"] = model.dec_biases[i]
        return d

    def write_back(d: dict[str, np.ndarray]) -> None:
        for i in range(4):
            model.enc_kernels[i] = d[f"enc_k{i}"]
            model.enc_biases[i] = d[f"enc_b{i}"]
            model.bn[i].gamma = d[f"bn_g{i}"]
            model.bn[i].beta = d[f"bn_b{i}"]
            model.dec_kernels[i] = d[f"dec_k{i}"]
            model.dec_biases[i] = d[f"dec_b{i}"]

    velocities = {k: np.zeros_like(v) for k, v in params_by_name().items()}

    shuffler = SplitMix64(config.seed ^ 0x5AFE)
    history: list[float] = []
    for epoch in range(config.epochs):
        order = list(range(n))
        shuffler.shuffle(order)
        epoch_losses = []
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            xb = x_all[idx]
            if xb.shape[0] == 1:
                # batch norm needs >= 2 rows; a duplicated sample yields the
                # same statistics, loss and gradients as the single sample
                xb = np.concatenate([xb, xb], axis=0)
            feat, enc_caches = model._encode_batch(xb, train=True)
            recon, dec_caches = model._decode_batch(feat)
            loss, diff = nn.mse_loss(recon, xb)
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}; the learning rate "
                    f"({config.lr}) is the most likely cause"
                )
            epoch_losses.append(loss)
            grad = nn.mse_loss_backward(diff)
            grads, _ = model._backward(grad, enc_caches, dec_caches)
            params = params_by_name()
            for name, p in params.items():
                params[name], velocities[name] = nn.sgd_step(
                    p, grads[name], velocities[name], config.lr, config.momentum
                )
            write_back(params)
        mean_loss = float(np.mean(epoch_losses))
        history.append(mean_loss)
        if log is not None:
            log(epoch, mean_loss)
        if checkpoint_dir is not None:
            ckpt_dir = Path(checkpoint_dir)
            ckpt_dir.mkdir(parents=True, exist_ok=True)
            model.save(ckpt_dir / f"epoch-{epoch:04d}.wae")

    model.train_mode = False
    return TrainResult(model=model, loss_history=history)


def evaluate_loss(model: WaeModel, corpus: list[WireframeImage] | np.ndarray) -> float:
    """Mean reconstruction MSE in eval mode (no parameter updates)."""
    if isinstance(corpus, np.ndarray):
        stack = corpus.astype(np.float32)
    else:
        stack = np.stack([img.values for img in corpus]).astype(np.float32)
    x = stack.transpose(0, 3, 1, 2)
    feat, _ = model._encode_batch(x, train=False)
    recon, _ = model._decode_batch(feat)
    loss, _ = nn.mse_loss(recon, x)
    return loss


def smoothed_loss_violations(history: list[float], window: int = 5, tol: float = 0.10) -> list[int]:
    """Epochs where the window-smoothed loss rose more than tol relative."""
    if len(history) < window + 1:
        return []
    smooth = np.convolve(history, np.ones(window) / window, mode="valid")
    bad = []
    for i in range(1, len(smooth)):
        if smooth[i] > smooth[i - 1] * (1 + tol):
            bad.append(i + window - 1)
    return bad


def saliency(model: WaeModel, image: WireframeImage | np.ndarray) -> np.ndarray:
    """Pixel attribution: |d MSE(x, decode(encode(x))) / dx|, channel-max,
    min-max normalized to [0, 1]. All-zero gradients map to all zeros."""
    x = _to_nchw(image)[None].astype(np.float64)
    _check_size(model, x)
    feat, enc_caches = model._encode_batch(x, train=False)
    recon, dec_caches = model._decode_batch(feat)
    _, diff = nn.mse_loss(recon, x)
    grad = nn.mse_loss_backward(diff)
    _, dx_network = model._backward(grad, enc_caches, dec_caches, need_input_grad=True)
    # the input is also the reconstruction target; include that path
    dx_total = dx_network - grad
    heat = np.abs(dx_total[0]).max(axis=0)
    span = heat.max() - heat.min()
    if span == 0:
        return np.zeros_like(heat)
    return (heat - heat.min()) / span
