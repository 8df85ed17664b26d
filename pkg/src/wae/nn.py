"""Dense-tensor kernels with reverse-mode gradients.

Exactly the layer set the wireframe autoencoder needs: 3x3 same-padded
convolution and its transpose, 2x2 max pooling, nearest-neighbor 2x
upsampling, ReLU, batch normalization, MSE loss and SGD with momentum.
Forward functions return (output, cache); the matching backward function
consumes (grad_output, cache). Convolutions lower to im2col + GEMM.

transposed_conv2d is the exact adjoint of conv2d under shared kernels:
<conv(x), y> == <x, transposed_conv(y)> for all x, y.
"""

from __future__ import annotations

import math

import numpy as np

from .prng import SplitMix64

_check_finite = False


def set_debug_checks(enabled: bool) -> None:
    """Toggle NaN/Inf assertions after every forward/backward."""
    global _check_finite
    _check_finite = enabled


def _finite(name: str, *arrays: np.ndarray) -> None:
    if _check_finite:
        for a in arrays:
            if not np.all(np.isfinite(a)):
                raise FloatingPointError(f"non-finite values after {name}")


def _corr_core(x: np.ndarray, kernels: np.ndarray):
    """Cross-correlation with zero same-padding, stride 1.

    x: (n, ci, h, w); kernels: (co, ci, kh, kw) with odd kh == kw.
    Computed as kh*kw shifted pointwise GEMMs over a padded channels-last
    copy of the input, which avoids materializing the kh*kw-fold im2col
    matrix. Returns (out (n, co, h, w), xp) where xp is the padded
    channels-last input (n, h+2p, w+2p, ci), reused by weight gradients.
    """
    n, ci, h, w = x.shape
    co, ci2, kh, kw = kernels.shape
    if ci != ci2:
        raise ValueError(f"kernel depth {ci2} does not match input channels {ci}")
    if kh != kw or kh % 2 != 1:
        raise ValueError(f"kernels must be square with odd size, got {kh}x{kw}")
    p = kh // 2
    xp = np.pad(x.transpose(0, 2, 3, 1), ((0, 0), (p, p), (p, p), (0, 0)))
    kt = np.ascontiguousarray(kernels.transpose(2, 3, 1, 0)).astype(x.dtype, copy=False)
    rows = n * h * w
    out2d = np.zeros((rows, co), dtype=x.dtype)
    tmp = np.empty_like(out2d)
    for u in range(kh):
        for v in range(kw):
            block = xp[:, u : u + h, v : v + w, :].reshape(rows, ci)
            np.matmul(block, kt[u, v], out=tmp)
            out2d += tmp
    out = out2d.reshape(n, h, w, co).transpose(0, 3, 1, 2)
    return out, xp


def _kernel_grad(xp: np.ndarray, grad: np.ndarray, kshape: tuple[int, ...], x_shape) -> np.ndarray:
    """d<out, grad>/d kernels for _corr_core, from the cached padded input."""
    n, ci, h, w = x_shape
    co, _, kh, kw = kshape
    rows = n * h * w
    g2 = np.ascontiguousarray(grad.transpose(0, 2, 3, 1)).reshape(rows, co)
    dk = np.empty(kshape, dtype=grad.dtype)
    for u in range(kh):
        for v in range(kw):
            block = xp[:, u : u + h, v : v + w, :].reshape(rows, ci)
            dk[:, :, u, v] = (block.T @ g2).T
    return dk


def _adjoint_kernels(kernels: np.ndarray) -> np.ndarray:
    # (co, ci, kh, kw) -> (ci, co, kh, kw) flipped: the kernel of the adjoint map
    return np.flip(kernels, axis=(2, 3)).transpose(1, 0, 2, 3)


def conv2d_forward(x: np.ndarray, kernels: np.ndarray, bias: np.ndarray):
    out, xp = _corr_core(x, kernels)
    out = out + bias[None, :, None, None]
    _finite("conv2d_forward", out)
    return out, (xp, kernels, x.shape)


def conv2d_backward(grad: np.ndarray, cache):
    xp, kernels, x_shape = cache
    dk = _kernel_grad(xp, grad, kernels.shape, x_shape)
    db = grad.sum(axis=(0, 2, 3))
    dx, _ = _corr_core(grad, _adjoint_kernels(kernels))
    _finite("conv2d_backward", dx, dk, db)
    return dx, dk, db


def conv2d_backward_params(grad: np.ndarray, cache):
    """Kernel/bias gradients only, when the input gradient is not needed."""
    xp, kernels, x_shape = cache
    dk = _kernel_grad(xp, grad, kernels.shape, x_shape)
    db = grad.sum(axis=(0, 2, 3))
    _finite("conv2d_backward_params", dk, db)
    return dk, db


def transposed_conv2d_forward(x: np.ndarray, kernels: np.ndarray, bias: np.ndarray):
    """Adjoint of conv2d. kernels: (c_in, c_out, kh, kw); x channels = c_in."""
    out, xp = _corr_core(x, _adjoint_kernels(kernels))
    out = out + bias[None, :, None, None]
    _finite("transposed_conv2d_forward", out)
    return out, (xp, kernels, x.shape)


def transposed_conv2d_backward(grad: np.ndarray, cache):
    xp, kernels, x_shape = cache
    c_in, c_out, kh, kw = kernels.shape
    # gradient of the adjoint-layout kernels, then map back to conv layout
    dk_adj = _kernel_grad(xp, grad, (c_out, c_in, kh, kw), x_shape)
    dk = np.flip(dk_adj, axis=(2, 3)).transpose(1, 0, 2, 3)
    db = grad.sum(axis=(0, 2, 3))
    dx, _ = _corr_core(grad, kernels)
    _finite("transposed_conv2d_backward", dx, dk, db)
    return dx, dk, db


def maxpool2x2_forward(x: np.ndarray):
    """2x2 non-overlapping max; trailing odd row/column dropped.

    The argmax record stores the within-window winner 0..3 in row-major
    window order; ties go to the earliest position.
    """
    n, c, h, w = x.shape
    if h < 2 or w < 2:
        raise ValueError(f"maxpool2x2 needs h, w >= 2, got {h}x{w}")
    h2, w2 = h // 2, w // 2
    x00 = x[:, :, 0 : 2 * h2 : 2, 0 : 2 * w2 : 2]
    x01 = x[:, :, 0 : 2 * h2 : 2, 1 : 2 * w2 : 2]
    x10 = x[:, :, 1 : 2 * h2 : 2, 0 : 2 * w2 : 2]
    x11 = x[:, :, 1 : 2 * h2 : 2, 1 : 2 * w2 : 2]
    top = np.maximum(x00, x01)
    bottom = np.maximum(x10, x11)
    out = np.maximum(top, bottom)
    # strict comparisons keep ties at the earliest row-major position
    arg = np.where(
        bottom > top,
        np.where(x11 > x10, 3, 2),
        np.where(x01 > x00, 1, 0),
    ).astype(np.int8)
    _finite("maxpool2x2_forward", out)
    return out, (x.shape, arg)


def maxpool2x2_backward(grad: np.ndarray, cache):
    x_shape, arg = cache
    n, c, h, w = x_shape
    h2, w2 = h // 2, w // 2
    dx = np.zeros(x_shape, dtype=grad.dtype)
    zero = np.zeros((), dtype=grad.dtype)
    for k, (dy, dxo) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        view = dx[:, :, dy : dy + 2 * h2 : 2, dxo : dxo + 2 * w2 : 2]
        view[...] = np.where(arg == k, grad, zero)
    _finite("maxpool2x2_backward", dx)
    return dx


def relu_forward(x: np.ndarray):
    out = np.maximum(x, 0)
    return out, (x > 0)


def relu_backward(grad: np.ndarray, cache):
    return grad * cache


def upsample2x_forward(x: np.ndarray):
    out = np.repeat(np.repeat(x, 2, axis=2), 2, axis=3)
    return out, x.shape


def upsample2x_backward(grad: np.ndarray, cache):
    n, c, h, w = cache
    return grad.reshape(n, c, h, 2, w, 2).sum(axis=(3, 5))


class BatchNormState:
    """Learnable scale/shift plus running statistics for one channel axis."""

    def __init__(self, channels: int, dtype=np.float32):
        self.gamma = np.ones(channels, dtype=dtype)
        self.beta = np.zeros(channels, dtype=dtype)
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)


def batchnorm_forward(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    train: bool,
    momentum: float = 0.1,
    eps: float = 1e-5,
):
    """Normalize per channel (axis 1 for 4-d input, axis 1 for 2-d input).

    Train mode uses biased batch statistics and returns updated running
    stats; eval mode normalizes with the running stats unchanged.
    """
    if x.ndim == 4:
        axes = (0, 2, 3)
        expand = (None, slice(None), None, None)
    elif x.ndim == 2:
        axes = (0,)
        expand = (None, slice(None))
    else:
        raise ValueError(f"batchnorm expects 2-d or 4-d input, got {x.ndim}-d")
    bshape = tuple(1 if i != 1 else x.shape[1] for i in range(x.ndim))
    g = gamma.reshape(bshape)
    b = beta.reshape(bshape)
    if train:
        if x.shape[0] < 2:
            raise ValueError("batchnorm train mode needs a batch of at least 2")
        mu = x.mean(axis=axes)
        var = x.var(axis=axes)
        new_rm = (1 - momentum) * running_mean + momentum * mu
        new_rv = (1 - momentum) * running_var + momentum * var
        inv = 1.0 / np.sqrt(var + eps)
        xhat = (x - mu.reshape(bshape)) * inv.reshape(bshape)
        out = g * xhat + b
        _finite("batchnorm_forward", out)
        return out, (xhat, inv, gamma, axes, bshape, True), (new_rm, new_rv)
    inv = 1.0 / np.sqrt(running_var + eps)
    xhat = (x - running_mean.reshape(bshape)) * inv.reshape(bshape)
    out = g * xhat + b
    _finite("batchnorm_forward", out)
    return out, (xhat, inv, gamma, axes, bshape, False), (running_mean, running_var)


def batchnorm_backward(grad: np.ndarray, cache):
    xhat, inv, gamma, axes, bshape, trained = cache
    dgamma = (grad * xhat).sum(axis=axes)
    dbeta = grad.sum(axis=axes)
    dxhat = grad * gamma.reshape(bshape)
    if not trained:
        dx = dxhat * inv.reshape(bshape)
        return dx, dgamma, dbeta
    m = grad.size // grad.shape[1] if grad.ndim == 4 else grad.shape[0]
    sum_dxhat = dxhat.sum(axis=axes).reshape(bshape)
    sum_dxhat_xhat = (dxhat * xhat).sum(axis=axes).reshape(bshape)
    dx = (inv.reshape(bshape) / m) * (m * dxhat - sum_dxhat - xhat * sum_dxhat_xhat)
    _finite("batchnorm_backward", dx)
    return dx, dgamma, dbeta


def mse_loss(x: np.ndarray, y: np.ndarray):
    if x.shape != y.shape:
        raise ValueError(f"mse_loss shape mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    loss = float(np.mean(diff * diff))
    return loss, diff


def mse_loss_backward(cache: np.ndarray):
    """Gradient w.r.t. the first argument: 2(x - y) / N."""
    return (2.0 / cache.size) * cache


def sgd_step(param: np.ndarray, grad: np.ndarray, velocity: np.ndarray, lr: float, momentum: float):
    """v <- momentum*v + g; p <- p - lr*v. Returns (new param, new velocity)."""
    if param.shape != grad.shape or param.shape != velocity.shape:
        raise ValueError("sgd_step shape mismatch")
    v = momentum * velocity + grad
    return param - lr * v, v


def init_uniform(shape: tuple[int, ...], fan_in: int, rng: SplitMix64, dtype=np.float32) -> np.ndarray:
    """Uniform on +/- sqrt(6 / fan_in)."""
    limit = math.sqrt(6.0 / fan_in)
    n = int(np.prod(shape))
    vals = -limit + 2 * limit * rng.random_array(n)
    return vals.reshape(shape).astype(dtype)
