import numpy as np
import pytest

from wae import nn
from gradcheck import max_rel_err, numeric_grad

rng = np.random.default_rng(1234)


def test_conv2d_identity_kernel():
    x = rng.standard_normal((1, 1, 3, 3))
    k = np.zeros((1, 1, 3, 3))
    k[0, 0, 1, 1] = 1.0
    out, _ = nn.conv2d_forward(x, k, np.zeros(1))
    np.testing.assert_allclose(out, x)


def test_conv2d_all_ones_center():
    x = np.ones((1, 2, 3, 3))
    k = np.ones((1, 2, 3, 3))
    out, _ = nn.conv2d_forward(x, k, np.zeros(1))
    # center position sees the full 3x3x2 window
    assert out[0, 0, 1, 1] == pytest.approx(18.0)


def test_conv2d_shape_mismatch():
    x = np.ones((1, 2, 4, 4))
    k = np.ones((1, 3, 3, 3))
    with pytest.raises(ValueError, match="channels"):
        nn.conv2d_forward(x, k, np.zeros(1))


def test_conv2d_linearity():
    x1 = rng.standard_normal((2, 2, 5, 5))
    x2 = rng.standard_normal((2, 2, 5, 5))
    k = rng.standard_normal((3, 2, 3, 3))
    b = np.zeros(3)
    y1, _ = nn.conv2d_forward(x1, k, b)
    y2, _ = nn.conv2d_forward(x2, k, b)
    y12, _ = nn.conv2d_forward(x1 + x2, k, b)
    np.testing.assert_allclose(y12, y1 + y2, atol=1e-12)


def test_conv2d_gradients():
    x = rng.standard_normal((2, 2, 5, 4))
    k = rng.standard_normal((3, 2, 3, 3))
    b = rng.standard_normal(3)
    r = rng.standard_normal((2, 3, 5, 4))

    out, cache = nn.conv2d_forward(x, k, b)
    dx, dk, db = nn.conv2d_backward(r, cache)

    def loss():
        return float(np.sum(nn.conv2d_forward(x, k, b)[0] * r))

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-6
    assert max_rel_err(dk, numeric_grad(loss, k)) < 1e-6
    assert max_rel_err(db, numeric_grad(loss, b)) < 1e-6


def test_transposed_conv2d_identity_kernel():
    x = rng.standard_normal((1, 1, 4, 4))
    k = np.zeros((1, 1, 3, 3))
    k[0, 0, 1, 1] = 1.0
    out, _ = nn.transposed_conv2d_forward(x, k, np.zeros(1))
    np.testing.assert_allclose(out, x)


def test_adjoint_identity():
    for _ in range(20):
        x = rng.standard_normal((1, 2, 6, 5))
        y = rng.standard_normal((1, 3, 6, 5))
        k = rng.standard_normal((3, 2, 3, 3))
        zero_co = np.zeros(3)
        zero_ci = np.zeros(2)
        conv_x, _ = nn.conv2d_forward(x, k, zero_co)
        tconv_y, _ = nn.transposed_conv2d_forward(y, k, zero_ci)
        lhs = float(np.sum(conv_x * y))
        rhs = float(np.sum(x * tconv_y))
        assert abs(lhs - rhs) < 1e-4 * max(1.0, abs(lhs))


def test_transposed_conv2d_gradients():
    x = rng.standard_normal((2, 3, 4, 5))
    k = rng.standard_normal((3, 2, 3, 3))
    b = rng.standard_normal(2)
    r = rng.standard_normal((2, 2, 4, 5))

    out, cache = nn.transposed_conv2d_forward(x, k, b)
    assert out.shape == (2, 2, 4, 5)
    dx, dk, db = nn.transposed_conv2d_backward(r, cache)

    def loss():
        return float(np.sum(nn.transposed_conv2d_forward(x, k, b)[0] * r))

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-6
    assert max_rel_err(dk, numeric_grad(loss, k)) < 1e-6
    assert max_rel_err(db, numeric_grad(loss, b)) < 1e-6


def test_maxpool_basic():
    x = np.array([[1.0, 2.0], [3.0, 4.0]]).reshape(1, 1, 2, 2)
    out, _ = nn.maxpool2x2_forward(x)
    assert out.reshape(-1).tolist() == [4.0]


def test_maxpool_odd_shape():
    x = rng.standard_normal((1, 1, 5, 5))
    out, _ = nn.maxpool2x2_forward(x)
    assert out.shape == (1, 1, 2, 2)


def test_maxpool_backward_routes_to_argmax():
    x = np.array([[1.0, 2.0], [3.0, 4.0]]).reshape(1, 1, 2, 2)
    out, cache = nn.maxpool2x2_forward(x)
    dx = nn.maxpool2x2_backward(np.array([[[[7.0]]]]), cache)
    np.testing.assert_array_equal(dx.reshape(-1), [0, 0, 0, 7.0])


def test_maxpool_gradients():
    x = rng.standard_normal((2, 2, 6, 6))
    r = rng.standard_normal((2, 2, 3, 3))
    out, cache = nn.maxpool2x2_forward(x)
    dx = nn.maxpool2x2_backward(r, cache)

    def loss():
        return float(np.sum(nn.maxpool2x2_forward(x)[0] * r))

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-6


def test_relu():
    x = np.array([-1.0, 0.0, 2.0])
    out, cache = nn.relu_forward(x)
    np.testing.assert_array_equal(out, [0.0, 0.0, 2.0])
    again, _ = nn.relu_forward(out)
    np.testing.assert_array_equal(again, out)
    g = nn.relu_backward(np.ones(3), cache)
    np.testing.assert_array_equal(g, [0.0, 0.0, 1.0])


def test_upsample():
    x = np.array([[[[5.0]]]])
    out, cache = nn.upsample2x_forward(x)
    np.testing.assert_array_equal(out.reshape(2, 2), [[5, 5], [5, 5]])
    # stride-2 subsampling inverts the upsampling on the lattice
    orig = rng.standard_normal((1, 2, 3, 4))
    big, _ = nn.upsample2x_forward(orig)
    np.testing.assert_array_equal(big[:, :, ::2, ::2], orig)


def test_upsample_gradients():
    x = rng.standard_normal((2, 2, 3, 4))
    r = rng.standard_normal((2, 2, 6, 8))
    out, cache = nn.upsample2x_forward(x)
    dx = nn.upsample2x_backward(r, cache)

    def loss():
        return float(np.sum(nn.upsample2x_forward(x)[0] * r))

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-6


def test_batchnorm_eval_identity():
    x = rng.standard_normal((3, 4, 2, 2))
    gamma = np.ones(4)
    beta = np.zeros(4)
    out, _, _ = nn.batchnorm_forward(x, gamma, beta, np.zeros(4), np.ones(4), train=False, eps=0.0)
    np.testing.assert_allclose(out, x, atol=1e-12)


def test_batchnorm_train_statistics():
    x = rng.standard_normal((8, 3, 5, 5)) * 3 + 2
    out, _, _ = nn.batchnorm_forward(x, np.ones(3), np.zeros(3), np.zeros(3), np.ones(3), train=True)
    np.testing.assert_allclose(out.mean(axis=(0, 2, 3)), 0.0, atol=1e-5)
    np.testing.assert_allclose(out.var(axis=(0, 2, 3)), 1.0, atol=1e-3)


def test_batchnorm_batch_of_one_errors():
    x = rng.standard_normal((1, 3, 5, 5))
    with pytest.raises(ValueError, match="at least 2"):
        nn.batchnorm_forward(x, np.ones(3), np.zeros(3), np.zeros(3), np.ones(3), train=True)


def test_batchnorm_gradients():
    x = rng.standard_normal((4, 3, 4, 4))
    gamma = rng.standard_normal(3) + 1.5
    beta = rng.standard_normal(3)
    r = rng.standard_normal((4, 3, 4, 4))
    rm, rv = np.zeros(3), np.ones(3)

    out, cache, _ = nn.batchnorm_forward(x, gamma, beta, rm, rv, train=True)
    dx, dgamma, dbeta = nn.batchnorm_backward(r, cache)

    def loss():
        return float(np.sum(nn.batchnorm_forward(x, gamma, beta, rm, rv, train=True)[0] * r))

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-3
    assert max_rel_err(dgamma, numeric_grad(loss, gamma)) < 1e-3
    assert max_rel_err(dbeta, numeric_grad(loss, beta)) < 1e-3


def test_mse():
    x = np.array([0.0, 0.0])
    y = np.array([2.0, 0.0])
    loss, cache = nn.mse_loss(x, y)
    assert loss == pytest.approx(2.0)
    loss_sym, _ = nn.mse_loss(y, x)
    assert loss_sym == pytest.approx(loss)
    zero, _ = nn.mse_loss(y, y)
    assert zero == 0.0
    grad = nn.mse_loss_backward(cache)
    np.testing.assert_allclose(grad, [-2.0, 0.0])
    with pytest.raises(ValueError, match="shape"):
        nn.mse_loss(np.zeros(2), np.zeros(3))


def test_mse_gradients():
    x = rng.standard_normal((3, 7))
    y = rng.standard_normal((3, 7))
    _, cache = nn.mse_loss(x, y)
    dx = nn.mse_loss_backward(cache)

    def loss():
        return nn.mse_loss(x, y)[0]

    assert max_rel_err(dx, numeric_grad(loss, x)) < 1e-6


def test_sgd_step():
    p, v = nn.sgd_step(np.array([0.0]), np.array([0.0]), np.array([0.0]), lr=1.0, momentum=0.9)
    np.testing.assert_array_equal(p, [0.0])

    p, v = nn.sgd_step(np.array([0.0]), np.array([1.0]), np.array([0.0]), lr=1.0, momentum=0.0)
    np.testing.assert_array_equal(p, [-1.0])

    # two momentum steps with constant gradient: v1=1, p1=-1; v2=1.9, p2=-2.9
    p = np.array([0.0])
    v = np.array([0.0])
    for _ in range(2):
        p, v = nn.sgd_step(p, np.array([1.0]), v, lr=1.0, momentum=0.9)
    np.testing.assert_allclose(p, [-2.9])


def test_init_uniform_bounds_and_determinism():
    from wae.prng import SplitMix64

    k1 = nn.init_uniform((4, 3, 3, 3), fan_in=27, rng=SplitMix64(5))
    k2 = nn.init_uniform((4, 3, 3, 3), fan_in=27, rng=SplitMix64(5))
    np.testing.assert_array_equal(k1, k2)
    limit = np.sqrt(6.0 / 27)
    assert np.all(np.abs(k1) <= limit)
