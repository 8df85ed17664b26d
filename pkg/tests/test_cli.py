import json

import pytest

from wae.cli import main
from wae.model import read_manifest


def run(argv):
    return main(argv)


def test_gen_corpus_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "m1.jsonl"
    out2 = tmp_path / "m2.jsonl"
    assert run(["gen-corpus", "--seed", "3", "--count", "12", "--out", str(out1)]) == 0
    assert run(["gen-corpus", "--seed", "3", "--count", "12", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    screens = list(read_manifest(out1))
    assert len(screens) == 12


def test_gen_corpus_mix(tmp_path):
    out = tmp_path / "m.jsonl"
    assert run(["gen-corpus", "--seed", "3", "--count", "6", "--out", str(out), "--mix", "form=1.0"]) == 0
    assert all(s.category == "form" for s in read_manifest(out))


def test_treat_scale(tmp_path):
    manifest = tmp_path / "m.jsonl"
    pairs = tmp_path / "pairs.jsonl"
    run(["gen-corpus", "--seed", "3", "--count", "8", "--out", str(manifest)])
    assert run(["treat", "--spec", "scale:10", "--seed", "5", "--in", str(manifest), "--out", str(pairs)]) == 0
    lines = [json.loads(l) for l in pairs.read_text().splitlines()]
    assert len(lines) == 8
    assert lines[0]["treated"]["id"].endswith("::scale10")


def test_treat_remove(tmp_path):
    manifest = tmp_path / "m.jsonl"
    pairs = tmp_path / "pairs.jsonl"
    run(["gen-corpus", "--seed", "4", "--count", "8", "--out", str(manifest)])
    assert run(["treat", "--spec", "remove:20", "--seed", "5", "--in", str(manifest), "--out", str(pairs)]) == 0
    lines = [json.loads(l) for l in pairs.read_text().splitlines()]
    assert 0 < len(lines) <= 8


def test_train_encode_index_eval_pipeline(tmp_path):
    manifest = tmp_path / "m.jsonl"
    run(["gen-corpus", "--seed", "5", "--count", "10", "--out", str(manifest)])

    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"width": 48, "height": 64, "epochs": 2, "batch_size": 5, "seed": 1}))
    model_path = tmp_path / "model.wae"
    assert run(["train", "--config", str(config), "--manifest", str(manifest), "--out", str(model_path)]) == 0
    assert model_path.exists()

    latents = tmp_path / "latents.jsonl"
    assert run(["encode", "--model", str(model_path), "--in", str(manifest), "--out", str(latents)]) == 0
    rows = [json.loads(l) for l in latents.read_text().splitlines()]
    assert len(rows) == 10 and len(rows[0]["latent"]) == 768

    index_path = tmp_path / "index.bin"
    assert run(["build-index", "--model", str(model_path), "--manifest", str(manifest), "--out", str(index_path)]) == 0

    spec = tmp_path / "eval.json"
    spec.write_text(
        json.dumps(
            {
                "manifest": str(manifest),
                "method": "wae",
                "model": str(model_path),
                "treatments": ["scale:5"],
                "seed": 9,
            }
        )
    )
    report = tmp_path / "report.json"
    log = tmp_path / "rankings.jsonl"
    assert run(["eval", "--spec", str(spec), "--out", str(report), "--log", str(log)]) == 0
    payload = json.loads(report.read_text())
    assert payload["rows"][0]["treatment"] == "scale5"
    assert payload["rows"][0]["query_count"] == 10
    assert len(log.read_text().splitlines()) == 10


def test_eval_hist_method(tmp_path):
    manifest = tmp_path / "m.jsonl"
    run(["gen-corpus", "--seed", "6", "--count", "6", "--out", str(manifest)])
    spec = tmp_path / "eval.json"
    spec.write_text(json.dumps({"manifest": str(manifest), "method": "hist", "treatments": ["remove:10"], "seed": 2}))
    report = tmp_path / "report.json"
    assert run(["eval", "--spec", str(spec), "--out", str(report)]) == 0
    assert json.loads(report.read_text())["rows"][0]["method"] == "hist"
