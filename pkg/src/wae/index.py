"""Latent-space index and exact kNN retrieval.

The index is a flat list of (screen id, latent vector) pairs plus a
fingerprint tying it to the encoding model and raster settings. Search is
an exhaustive scan under squared Euclidean distance: at desk scale a
full scan of a few thousand ~1e3-dim vectors takes milliseconds, so no
approximate structure is warranted.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .autoencoder import WaeModel, encode_batch
from .model import UIScreen
from .wirify import RepresentationMode, render

INDEX_MAGIC = b"WAEIDX1"


@dataclass(frozen=True)
class SearchHit:
    screen_id: str
    distance: float
    rank: int


@dataclass
class LatentIndex:
    ids: list[str]
    vectors: np.ndarray  # (n, dim) float32
    model_checksum: bytes  # 32 bytes
    raster_size: tuple[int, int]  # (width, height)
    mode: RepresentationMode

    def __post_init__(self):
        if len(self.ids) != len(set(self.ids)):
            raise ValueError("duplicate screen ids in index")
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.ids):
            raise ValueError("vectors must be (n, dim) matching ids")
        if len(self.model_checksum) != 32:
            raise ValueError("model checksum must be 32 bytes")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.ids)


def build_index(
    model: WaeModel,
    corpus: list[UIScreen],
    mode: RepresentationMode,
    raster_size: tuple[int, int] | None = None,
    batch: int = 64,
) -> LatentIndex:
    """Encode every screen's wireframe; one entry per screen."""
    cfg = model.config
    size = raster_size or (cfg.width, cfg.height)
    ids = [s.id for s in corpus]
    if len(ids) != len(set(ids)):
        raise ValueError("corpus contains duplicate screen ids")
    if len(corpus) == 0:
        vectors = np.zeros((0, cfg.latent_dim), dtype=np.float32)
        return LatentIndex(ids, vectors, model.fingerprint(), size, mode)
    chunks = []
    for start in range(0, len(corpus), batch):
        stack = np.stack(
            [render(s, mode, size).values for s in corpus[start : start + batch]]
        )
        chunks.append(encode_batch(model, stack))
    vectors = np.concatenate(chunks).astype(np.float32)
    return LatentIndex(ids, vectors, model.fingerprint(), size, mode)


def knn(index: LatentIndex, query: np.ndarray, k: int = 10) -> list[SearchHit]:
    """Top-min(k, n) entries by squared L2 distance; ties break by id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query, dtype=np.float32).reshape(-1)
    if len(index) == 0:
        return []
    if q.shape[0] != index.dim:
        raise ValueError(f"query dim {q.shape[0]} != index dim {index.dim}")
    diffs = index.vectors.astype(np.float64) - q.astype(np.float64)
    dists = np.einsum("ij,ij->i", diffs, diffs)
    order = sorted(range(len(index)), key=lambda i: (dists[i], index.ids[i]))
    top = order[: min(k, len(index))]
    return [
        SearchHit(screen_id=index.ids[i], distance=float(dists[i]), rank=r + 1)
        for r, i in enumerate(top)
    ]


def rank_of(index: LatentIndex, query: np.ndarray, target_id: str) -> int:
    """1-based rank of target_id in the full ranking for this query."""
    hits = knn(index, query, k=len(index))
    for hit in hits:
        if hit.screen_id == target_id:
            return hit.rank
    raise KeyError(f"{target_id!r} not in index")


def save_index(index: LatentIndex, path) -> None:
    parts = [INDEX_MAGIC]
    parts.append(struct.pack("<II", index.dim, len(index)))
    parts.append(index.model_checksum)
    parts.append(struct.pack("<II", index.raster_size[0], index.raster_size[1]))
    mode_name = index.mode.value.encode()
    parts.append(struct.pack("<B", len(mode_name)))
    parts.append(mode_name)
    for sid, vec in zip(index.ids, index.vectors):
        sid_b = sid.encode()
        parts.append(struct.pack("<I", len(sid_b)))
        parts.append(sid_b)
        parts.append(vec.astype("<f4").tobytes())
    body = b"".join(parts)
    crc = zlib.crc32(body) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(body)
        fh.write(struct.pack("<I", crc))


def load_index(path) -> LatentIndex:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < len(INDEX_MAGIC) + 4 or raw[: len(INDEX_MAGIC)] != INDEX_MAGIC:
        raise ValueError("not an index file (bad magic)")
    body, crc_bytes = raw[:-4], raw[-4:]
    if struct.unpack("<I", crc_bytes)[0] != (zlib.crc32(body) & 0xFFFFFFFF):
        raise ValueError("index CRC mismatch (corrupt file)")
    off = len(INDEX_MAGIC)
    dim, count = struct.unpack_from("<II", body, off)
    off += 8
    checksum = body[off : off + 32]
    off += 32
    rw, rh = struct.unpack_from("<II", body, off)
    off += 8
    (mode_len,) = struct.unpack_from("<B", body, off)
    off += 1
    mode = RepresentationMode(body[off : off + mode_len].decode())
    off += mode_len
    ids = []
    vectors = np.zeros((count, dim), dtype=np.float32)
    for i in range(count):
        (sid_len,) = struct.unpack_from("<I", body, off)
        off += 4
        ids.append(body[off : off + sid_len].decode())
        off += sid_len
        nbytes = dim * 4
        vectors[i] = np.frombuffer(body[off : off + nbytes], dtype="<f4")
        off += nbytes
    if off != len(body):
        raise ValueError("index payload has trailing bytes")
    return LatentIndex(ids, vectors, checksum, (rw, rh), mode)


def verify_fingerprint(index: LatentIndex, model: WaeModel) -> None:
    if index.model_checksum != model.fingerprint():
        raise ValueError("index was built with a different model (fingerprint mismatch)")
