"""Shared fixtures: the seed-fixed acceptance corpus and trained models.

Training the 50-epoch models takes minutes, so results are cached on disk
keyed by a digest of the relevant source files, the training config and
the corpus; any code or data change invalidates the cache.
"""

import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wae import autoencoder as ae
from wae.baselines import FcAeModel, train_fcae
from wae.corpus import generate_corpus
from wae.model import screen_to_json
from wae.wirify import RepresentationMode, render

PKG_ROOT = Path(__file__).resolve().parent.parent
CACHE_DIR = PKG_ROOT / ".cache" / "test-artifacts"

CORPUS_SEED = 7
CORPUS_SIZE = 500
RASTER = (48, 64)
TREATMENT_SEED = 99
TRAIN_SEED = 11
EPOCHS = 50

_SOURCE_FILES = [
    "model.py",
    "prng.py",
    "corpus.py",
    "wirify.py",
    "nn.py",
    "autoencoder.py",
    "baselines.py",
    "treatments.py",
]


def _source_digest() -> str:
    h = hashlib.sha256()
    src = PKG_ROOT / "src" / "wae"
    for name in _SOURCE_FILES:
        h.update((src / name).read_bytes())
    return h.hexdigest()


def _corpus_digest(screens) -> str:
    h = hashlib.sha256()
    for s in screens:
        h.update(screen_to_json(s).encode())
    return h.hexdigest()


def _cache_slot(kind: str, config_repr: str, corpus_dig: str) -> Path:
    key = hashlib.sha256(
        f"{_source_digest()}|{kind}|{config_repr}|{corpus_dig}".encode()
    ).hexdigest()[:16]
    slot = CACHE_DIR / f"{kind}-{key}"
    slot.mkdir(parents=True, exist_ok=True)
    return slot


@pytest.fixture(scope="session")
def acceptance_corpus():
    return generate_corpus(CORPUS_SEED, CORPUS_SIZE)


@pytest.fixture(scope="session")
def corpus_rasters_color(acceptance_corpus):
    return np.stack(
        [render(s, RepresentationMode.Color, RASTER).values for s in acceptance_corpus]
    )


@pytest.fixture(scope="session")
def corpus_rasters_grey(acceptance_corpus):
    return np.stack(
        [render(s, RepresentationMode.Grey, RASTER).values for s in acceptance_corpus]
    )


def _train_wae_cached(config: ae.WaeConfig, rasters: np.ndarray, corpus_dig: str, kind: str):
    slot = _cache_slot(kind, repr(config), corpus_dig)
    model_path = slot / "model.wae"
    history_path = slot / "history.json"
    if model_path.exists() and history_path.exists():
        model = ae.WaeModel.load(model_path)
        history = json.loads(history_path.read_text())
        return model, history
    result = ae.train(config, rasters)
    result.model.save(model_path)
    history_path.write_text(json.dumps(result.loss_history))
    return result.model, result.loss_history


@pytest.fixture(scope="session")
def color_model(acceptance_corpus, corpus_rasters_color):
    config = ae.WaeConfig(
        width=RASTER[0], height=RASTER[1], channels=3, epochs=EPOCHS, seed=TRAIN_SEED
    )
    return _train_wae_cached(
        config, corpus_rasters_color, _corpus_digest(acceptance_corpus), "color"
    )


@pytest.fixture(scope="session")
def grey_model(acceptance_corpus, corpus_rasters_grey):
    config = ae.WaeConfig(
        width=RASTER[0], height=RASTER[1], channels=1, epochs=EPOCHS, seed=TRAIN_SEED
    )
    return _train_wae_cached(
        config, corpus_rasters_grey, _corpus_digest(acceptance_corpus), "grey"
    )


@pytest.fixture(scope="session")
def fcae_model(acceptance_corpus):
    corpus_dig = _corpus_digest(acceptance_corpus)
    config_repr = f"epochs={EPOCHS},seed={TRAIN_SEED}"
    slot = _cache_slot("fcae", config_repr, corpus_dig)
    weights_path = slot / "weights.npz"
    if weights_path.exists():
        data = np.load(weights_path)
        model = FcAeModel(int(data["input_dim"]), seed=TRAIN_SEED)
        model.weights = [data[f"w{i}"] for i in range(6)]
        model.biases = [data[f"b{i}"] for i in range(6)]
        return model
    model, _history = train_fcae(acceptance_corpus, epochs=EPOCHS, seed=TRAIN_SEED)
    np.savez(
        weights_path,
        input_dim=model.input_dim,
        **{f"w{i}": w for i, w in enumerate(model.weights)},
        **{f"b{i}": b for i, b in enumerate(model.biases)},
    )
    return model
