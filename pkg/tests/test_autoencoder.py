import numpy as np
import pytest

from wae.autoencoder import (
    WaeConfig,
    WaeModel,
    decode,
    encode,
    evaluate_loss,
    saliency,
    smoothed_loss_violations,
    train,
)
from wae.corpus import TemplateKind, generate_corpus, generate_screen
from wae.wirify import RepresentationMode, render


def test_config_validates_divisibility():
    with pytest.raises(ValueError, match="divisible by 16"):
        WaeConfig(width=50, height=64)
    with pytest.raises(ValueError, match="divisible by 16"):
        WaeConfig(width=180, height=228)  # the nearest even-ish size must be adjusted


def test_latent_dims():
    assert WaeConfig(width=176, height=224).latent_dim == 9856
    assert WaeConfig(width=48, height=64).latent_dim == 768


def test_encode_shape_and_determinism():
    model = WaeModel(WaeConfig(width=48, height=64, seed=1))
    img = render(generate_screen(1, TemplateKind.Form), RepresentationMode.Color, (48, 64))
    z1 = encode(model, img)
    z2 = encode(model, img)
    assert z1.shape == (768,)
    np.testing.assert_array_equal(z1, z2)


def test_encode_size_mismatch():
    model = WaeModel(WaeConfig(width=48, height=64, seed=1))
    img = render(generate_screen(1, TemplateKind.Form), RepresentationMode.Color, (32, 48))
    with pytest.raises(ValueError, match="does not match config"):
        encode(model, img)


def test_encode_requires_eval_mode():
    model = WaeModel(WaeConfig(width=48, height=64, seed=1))
    model.train_mode = True
    img = render(generate_screen(1, TemplateKind.Form), RepresentationMode.Color, (48, 64))
    with pytest.raises(RuntimeError, match="eval"):
        encode(model, img)


def test_decode_shape_roundtrip():
    cfg = WaeConfig(width=48, height=64, seed=4)
    model = WaeModel(cfg)
    img = render(generate_screen(2, TemplateKind.List), RepresentationMode.Color, (48, 64))
    z = encode(model, img)
    out = decode(model, z)
    assert out.shape == img.values.shape
    assert np.all(np.isfinite(out))


def test_decode_dimension_mismatch():
    model = WaeModel(WaeConfig(width=48, height=64, seed=4))
    with pytest.raises(ValueError, match="latent dim"):
        decode(model, np.zeros(100))


def test_decode_random_latent_finite():
    model = WaeModel(WaeConfig(width=48, height=64, seed=4))
    rng = np.random.default_rng(0)
    out = decode(model, rng.standard_normal(768).astype(np.float32))
    assert np.all(np.isfinite(out))


def test_grey_mode_config():
    cfg = WaeConfig(width=48, height=64, channels=1, seed=5)
    model = WaeModel(cfg)
    img = render(generate_screen(3, TemplateKind.Grid), RepresentationMode.Grey, (48, 64))
    z = encode(model, img)
    assert z.shape == (cfg.latent_dim,)


def test_train_empty_corpus_rejected():
    with pytest.raises(ValueError, match="nonempty"):
        train(WaeConfig(width=48, height=64), [])


def test_train_batch_exceeds_corpus():
    img = render(generate_screen(1, TemplateKind.Form), RepresentationMode.Color, (48, 64))
    with pytest.raises(ValueError, match="batch size"):
        train(WaeConfig(width=48, height=64, batch_size=8), [img])


def test_train_divergence_names_learning_rate():
    imgs = np.stack(
        [
            render(generate_screen(i, TemplateKind.Form), RepresentationMode.Color, (48, 64)).values
            for i in range(4)
        ]
    )
    with pytest.raises(RuntimeError, match="learning rate"):
        train(WaeConfig(width=48, height=64, lr=1e6, batch_size=4, epochs=30, seed=1), imgs)


def test_train_loss_decreases_and_checkpoints(tmp_path):
    imgs = np.stack(
        [
            render(generate_screen(i, TemplateKind.Settings), RepresentationMode.Color, (48, 64)).values
            for i in range(6)
        ]
    )
    res = train(
        WaeConfig(width=48, height=64, batch_size=3, epochs=4, seed=9),
        imgs,
        checkpoint_dir=tmp_path,
    )
    assert len(res.loss_history) == 4
    assert res.loss_history[-1] < res.loss_history[0]
    assert (tmp_path / "epoch-0003.wae").exists()


def test_all_white_epoch0_loss_not_above_noise():
    """Direct evaluation: an all-white corpus must reconstruct no worse than
    random noise under the same untrained parameters."""
    model = WaeModel(WaeConfig(width=48, height=64, seed=21))
    white = np.ones((4, 64, 48, 3), dtype=np.float32)
    rng = np.random.default_rng(0)
    noise = rng.uniform(size=(4, 64, 48, 3)).astype(np.float32)
    assert evaluate_loss(model, white) <= evaluate_loss(model, noise)


def test_checkpoint_roundtrip(tmp_path):
    cfg = WaeConfig(width=48, height=64, seed=13)
    model = WaeModel(cfg)
    path = tmp_path / "model.wae"
    model.save(path)
    back = WaeModel.load(path)
    assert back.config == cfg
    for a, b in zip(model._state_arrays(), back._state_arrays()):
        np.testing.assert_array_equal(a, b)
    assert back.fingerprint() == model.fingerprint()


def test_checkpoint_corruption_detected(tmp_path):
    model = WaeModel(WaeConfig(width=48, height=64, seed=13))
    path = tmp_path / "model.wae"
    model.save(path)
    data = bytearray(path.read_bytes())
    data[100] ^= 0x5A
    path.write_bytes(bytes(data))
    with pytest.raises(ValueError, match="CRC"):
        WaeModel.load(path)


def test_checkpoint_magic(tmp_path):
    model = WaeModel(WaeConfig(width=48, height=64, seed=13))
    path = tmp_path / "model.wae"
    model.save(path)
    assert path.read_bytes()[:7] == b"WAENET1"


def test_saliency_shape_range_and_zero_case():
    model = WaeModel(WaeConfig(width=48, height=64, seed=2))
    img = render(generate_screen(5, TemplateKind.Form), RepresentationMode.Color, (48, 64))
    heat = saliency(model, img)
    assert heat.shape == (64, 48)
    assert heat.min() >= 0.0 and heat.max() <= 1.0


def test_smoothed_loss_violations():
    falling = [1.0 / (i + 1) for i in range(20)]
    assert smoothed_loss_violations(falling) == []
    spiky = falling[:10] + [5.0] * 10
    assert smoothed_loss_violations(spiky) != []
    assert smoothed_loss_violations([1.0, 0.5]) == []
