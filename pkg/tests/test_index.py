import numpy as np
import pytest

from wae.autoencoder import WaeConfig, WaeModel, encode
from wae.corpus import generate_corpus
from wae.index import (
    LatentIndex,
    build_index,
    knn,
    load_index,
    rank_of,
    save_index,
    verify_fingerprint,
)
from wae.wirify import RepresentationMode, render


@pytest.fixture(scope="module")
def small_setup():
    model = WaeModel(WaeConfig(width=48, height=64, seed=2))
    corpus = generate_corpus(31, 25)
    index = build_index(model, corpus, RepresentationMode.Color)
    return model, corpus, index


def test_build_index_one_entry_per_screen(small_setup):
    model, corpus, index = small_setup
    assert len(index) == len(corpus)
    assert index.dim == model.config.latent_dim
    assert index.ids == [s.id for s in corpus]


def test_build_index_deterministic(small_setup):
    model, corpus, index = small_setup
    again = build_index(model, corpus, RepresentationMode.Color)
    np.testing.assert_array_equal(index.vectors, again.vectors)


def test_build_index_duplicate_ids_error(small_setup):
    model, corpus, _ = small_setup
    with pytest.raises(ValueError, match="duplicate"):
        build_index(model, [corpus[0], corpus[0]], RepresentationMode.Color)


def test_empty_index_searchable():
    model = WaeModel(WaeConfig(width=48, height=64, seed=2))
    index = build_index(model, [], RepresentationMode.Color)
    assert len(index) == 0
    assert knn(index, np.zeros(model.config.latent_dim), 5) == []


def test_self_retrieval(small_setup):
    model, corpus, index = small_setup
    for screen in corpus[:5]:
        latent = encode(model, render(screen, RepresentationMode.Color, (48, 64)))
        hits = knn(index, latent, 10)
        assert hits[0].screen_id == screen.id
        assert hits[0].distance == 0.0
        assert hits[0].rank == 1


def test_knn_k_larger_than_index(small_setup):
    _, _, index = small_setup
    hits = knn(index, index.vectors[0], k=100)
    assert len(hits) == len(index)
    assert [h.rank for h in hits] == list(range(1, len(index) + 1))


def test_knn_distances_nondecreasing(small_setup):
    _, _, index = small_setup
    hits = knn(index, index.vectors[3], k=len(index))
    dists = [h.distance for h in hits]
    assert dists == sorted(dists)


def test_knn_dimension_mismatch(small_setup):
    _, _, index = small_setup
    with pytest.raises(ValueError, match="dim"):
        knn(index, np.zeros(index.dim + 1), 5)


def test_knn_equals_brute_force_random_indexes():
    rng = np.random.default_rng(7)
    for trial in range(5):
        n, dim = 200, 16
        vectors = rng.standard_normal((n, dim)).astype(np.float32)
        ids = [f"id-{i:03d}" for i in range(n)]
        index = LatentIndex(ids, vectors, b"\x00" * 32, (48, 64), RepresentationMode.Color)
        q = rng.standard_normal(dim).astype(np.float32)
        brute = sorted(
            ((float(((v.astype(np.float64) - q.astype(np.float64)) ** 2).sum()), sid) for sid, v in zip(ids, vectors)),
        )
        for k in (1, 5, 10, 50):
            hits = knn(index, q, k)
            assert [h.screen_id for h in hits] == [sid for _, sid in brute[:k]]
            assert [h.distance for h in hits] == pytest.approx([d for d, _ in brute[:k]])


def test_knn_monotone_in_k(small_setup):
    _, _, index = small_setup
    q = index.vectors[5] + 0.01
    top5 = [h.screen_id for h in knn(index, q, 5)]
    top20 = [h.screen_id for h in knn(index, q, 20)]
    assert top20[:5] == top5


def test_knn_tie_break_lexicographic():
    vectors = np.zeros((3, 4), dtype=np.float32)
    index = LatentIndex(["b", "a", "c"], vectors, b"\x00" * 32, (48, 64), RepresentationMode.Color)
    hits = knn(index, np.zeros(4), 3)
    assert [h.screen_id for h in hits] == ["a", "b", "c"]


def test_save_load_roundtrip(tmp_path, small_setup):
    _, _, index = small_setup
    path = tmp_path / "index.bin"
    save_index(index, path)
    back = load_index(path)
    assert back.ids == index.ids
    np.testing.assert_array_equal(back.vectors, index.vectors)
    assert back.model_checksum == index.model_checksum
    assert back.raster_size == index.raster_size
    assert back.mode == index.mode
    # byte-identical re-save
    path2 = tmp_path / "index2.bin"
    save_index(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_load_truncated_fails(tmp_path, small_setup):
    _, _, index = small_setup
    path = tmp_path / "index.bin"
    save_index(index, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(ValueError):
        load_index(path)


def test_load_corrupt_crc_fails(tmp_path, small_setup):
    _, _, index = small_setup
    path = tmp_path / "index.bin"
    save_index(index, path)
    data = bytearray(path.read_bytes())
    data[40] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(ValueError, match="CRC"):
        load_index(path)


def test_fingerprint_mismatch(small_setup):
    model, corpus, index = small_setup
    verify_fingerprint(index, model)
    other = WaeModel(WaeConfig(width=48, height=64, seed=99))
    with pytest.raises(ValueError, match="fingerprint"):
        verify_fingerprint(index, other)


def test_rank_of(small_setup):
    _, corpus, index = small_setup
    assert rank_of(index, index.vectors[4], corpus[4].id) == 1
