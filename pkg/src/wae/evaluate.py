"""Retrieval experiments and their metrics.

An experiment treats every corpus screen (component scaling or removal),
queries the index of untouched originals with each treated variant, and
scores how well the original is retrieved: the original is the single
ground truth. Agreement statistics for human annotation studies (Cohen's
and Fleiss's kappa) live here too.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .autoencoder import WaeModel, encode
from .baselines import (
    FcAeModel,
    GuiFetchConfig,
    _screen_arrays,
    fcae_encode,
    guifetch_similarities,
    histogram_feature,
)
from .index import build_index, knn
from .model import UIScreen
from .treatments import TreatmentSpec, make_pairs
from .wirify import RepresentationMode, render

METHODS = ("wae", "hist", "guifetch", "fcae")


# --- metrics -------------------------------------------------------------------


def precision_at_k(ranked_ids: list[str], relevant: set[str], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for sid in ranked_ids[:k] if sid in relevant)
    return hits / k


def mrr(ranks: list[int | None]) -> float:
    """Mean reciprocal rank; queries with no relevant result contribute 0."""
    if not ranks:
        return 0.0
    total = 0.0
    for r in ranks:
        if r is not None:
            if r < 1:
                raise ValueError("ranks must be >= 1")
            total += 1.0 / r
    return total / len(ranks)


def cohen_kappa(rater_a, rater_b) -> float:
    a = np.asarray(rater_a, dtype=bool)
    b = np.asarray(rater_b, dtype=bool)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("raters must be equal-length vectors")
    if a.size == 0:
        raise ValueError("need at least one item")
    p_o = float(np.mean(a == b))
    p_a1 = float(np.mean(a))
    p_b1 = float(np.mean(b))
    p_e = p_a1 * p_b1 + (1 - p_a1) * (1 - p_b1)
    if p_e == 1.0:
        if p_o == 1.0:
            return 1.0
        raise ValueError("kappa undefined: expected agreement is 1 but observed is not")
    return (p_o - p_e) / (1 - p_e)


def fleiss_kappa(matrix) -> float:
    """Fleiss's kappa for an items x raters boolean matrix (two categories)."""
    m = np.asarray(matrix, dtype=bool)
    if m.ndim != 2:
        raise ValueError("matrix must be items x raters")
    n_items, n_raters = m.shape
    if n_raters < 2 or n_items < 2:
        raise ValueError("need at least 2 raters and 2 items")
    pos = m.sum(axis=1).astype(np.float64)
    neg = n_raters - pos
    p_i = (pos * (pos - 1) + neg * (neg - 1)) / (n_raters * (n_raters - 1))
    p_bar = float(np.mean(p_i))
    p1 = float(pos.sum()) / (n_items * n_raters)
    p_e = p1 * p1 + (1 - p1) * (1 - p1)
    if p_e == 1.0:
        raise ValueError("kappa undefined: all ratings fall in one category")
    return (p_bar - p_e) / (1 - p_e)


def aggregate_relevance(matrix, strategy: str) -> np.ndarray:
    """Combine per-rater labels: strict=all, moderate=majority, relaxed=any."""
    m = np.asarray(matrix, dtype=bool)
    if m.ndim != 2 or m.shape[1] < 1:
        raise ValueError("matrix must be items x raters with >= 1 rater")
    votes = m.sum(axis=1)
    n_raters = m.shape[1]
    if strategy == "strict":
        return votes == n_raters
    if strategy == "moderate":
        return votes * 2 > n_raters
    if strategy == "relaxed":
        return votes >= 1
    raise ValueError(f"unknown strategy {strategy!r}")


# --- experiments ----------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    method: str  # wae | hist | guifetch | fcae
    treatment: TreatmentSpec
    k: int = 10
    seed: int = 0
    mode: RepresentationMode = RepresentationMode.Color

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


@dataclass
class QueryLog:
    query_id: str
    ground_truth: str
    rank: int
    ranking: list[str]  # full ranking, best first


@dataclass
class ReportRow:
    treatment: str
    method: str
    pre1: float
    pre5: float
    pre10: float
    mrr: float
    query_count: int
    wall_time_s: float

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "treatment": self.treatment,
            "method": self.method,
            "pre@1": self.pre1,
            "pre@5": self.pre5,
            "pre@10": self.pre10,
            "mrr": self.mrr,
            "query_count": self.query_count,
        }
        if include_timing:
            d["wall_time_s"] = self.wall_time_s
        return d


def _rank_by_distance(ids: list[str], dists: np.ndarray) -> list[str]:
    order = sorted(range(len(ids)), key=lambda i: (dists[i], ids[i]))
    return [ids[i] for i in order]


def _rank_by_similarity(ids: list[str], sims: np.ndarray) -> list[str]:
    order = sorted(range(len(ids)), key=lambda i: (-sims[i], ids[i]))
    return [ids[i] for i in order]


def run_experiment(
    corpus: list[UIScreen],
    spec: ExperimentSpec,
    wae_model: WaeModel | None = None,
    fcae_model: FcAeModel | None = None,
    guifetch_cfg: GuiFetchConfig | None = None,
    raster_size: tuple[int, int] | None = None,
) -> tuple[ReportRow, list[QueryLog]]:
    """Index the originals, query with each treated variant, aggregate."""
    if spec.method == "wae" and wae_model is None:
        raise ValueError("method 'wae' needs a trained model")
    if spec.method == "fcae" and fcae_model is None:
        raise ValueError("method 'fcae' needs a trained model")

    treatment = spec.treatment
    if treatment.seed != spec.seed:
        treatment = TreatmentSpec(treatment.kind, treatment.amount, seed=spec.seed)
    pair_report = make_pairs(corpus, treatment)

    start = time.perf_counter()
    ids = [s.id for s in corpus]
    logs: list[QueryLog] = []

    if spec.method == "wae":
        size = raster_size or (wae_model.config.width, wae_model.config.height)
        index = build_index(wae_model, corpus, spec.mode, size)
        for pair in pair_report.pairs:
            latent = encode(wae_model, render(pair.treated, spec.mode, size))
            hits = knn(index, latent, k=len(index))
            ranking = [h.screen_id for h in hits]
            logs.append(_make_log(pair.treated.id, pair.original_id, ranking))
    elif spec.method == "hist":
        size = raster_size or (48, 64)
        feats = np.stack([histogram_feature(render(s, spec.mode, size)) for s in corpus])
        for pair in pair_report.pairs:
            q = histogram_feature(render(pair.treated, spec.mode, size))
            dists = np.sqrt(((feats - q) ** 2).sum(axis=2)).sum(axis=1)
            ranking = _rank_by_distance(ids, dists)
            logs.append(_make_log(pair.treated.id, pair.original_id, ranking))
    elif spec.method == "fcae":
        feats = np.stack([fcae_encode(fcae_model, s) for s in corpus])
        for pair in pair_report.pairs:
            q = fcae_encode(fcae_model, pair.treated)
            diffs = feats.astype(np.float64) - q.astype(np.float64)
            dists = np.einsum("ij,ij->i", diffs, diffs)
            ranking = _rank_by_distance(ids, dists)
            logs.append(_make_log(pair.treated.id, pair.original_id, ranking))
    else:  # guifetch
        cfg = guifetch_cfg or GuiFetchConfig()
        candidate_arrays = [_screen_arrays(s) for s in corpus]
        for pair in pair_report.pairs:
            sims = guifetch_similarities(pair.treated, candidate_arrays, cfg)
            ranking = _rank_by_similarity(ids, sims)
            logs.append(_make_log(pair.treated.id, pair.original_id, ranking))

    wall = time.perf_counter() - start
    row = summarize(logs, treatment.name, spec.method, wall)
    return row, logs


def _make_log(query_id: str, ground_truth: str, ranking: list[str]) -> QueryLog:
    rank = ranking.index(ground_truth) + 1
    return QueryLog(query_id=query_id, ground_truth=ground_truth, rank=rank, ranking=ranking)


def summarize(logs: list[QueryLog], treatment: str, method: str, wall: float = 0.0) -> ReportRow:
    """Aggregate per-query logs into a report row (re-scorable from logs)."""
    if not logs:
        return ReportRow(treatment, method, 0.0, 0.0, 0.0, 0.0, 0, wall)
    pre1 = float(np.mean([precision_at_k(l.ranking, {l.ground_truth}, 1) for l in logs]))
    pre5 = float(np.mean([precision_at_k(l.ranking, {l.ground_truth}, 5) for l in logs]))
    pre10 = float(np.mean([precision_at_k(l.ranking, {l.ground_truth}, 10) for l in logs]))
    rr = mrr([l.rank for l in logs])
    return ReportRow(treatment, method, pre1, pre5, pre10, rr, len(logs), wall)


def write_report_json(rows: list[ReportRow], path, include_timing: bool = False) -> None:
    """Canonical report JSON; timing is excluded by default so repeated runs
    of the same seeded pipeline produce byte-identical files."""
    payload = {"rows": [r.to_dict(include_timing=include_timing) for r in rows]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_ranking_log(logs: list[QueryLog], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for log in logs:
            fh.write(
                json.dumps(
                    {
                        "query_id": log.query_id,
                        "ground_truth": log.ground_truth,
                        "rank": log.rank,
                        "ranking": log.ranking,
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
            fh.write("\n")


def format_report_table(rows: list[ReportRow]) -> str:
    header = f"{'treatment':<10} {'method':<9} {'pre@1':>7} {'pre@5':>7} {'pre@10':>7} {'mrr':>7} {'queries':>8} {'time_s':>8}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.treatment:<10} {r.method:<9} {r.pre1:>7.3f} {r.pre5:>7.3f} "
            f"{r.pre10:>7.3f} {r.mrr:>7.3f} {r.query_count:>8d} {r.wall_time_s:>8.2f}"
        )
    return "\n".join(lines)
