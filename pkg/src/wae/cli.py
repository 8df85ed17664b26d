"""Command-line entry points.

One multiplexed command with subcommands covering the whole pipeline:

    wae gen-corpus --seed 7 --count 500 --out manifest.jsonl
    wae treat --spec scale:10 --seed 99 --in manifest.jsonl --out pairs.jsonl
    wae train --config train.json --manifest manifest.jsonl --out model.wae
    wae encode --model model.wae --in manifest.jsonl --out latents.jsonl
    wae build-index --model model.wae --manifest manifest.jsonl --out index.bin
    wae eval --spec eval.json --out report.json --log rankings.jsonl
    wae serve --model model.wae --index index.bin --manifest manifest.jsonl --port 8000
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import DEFAULT_MIX, TemplateKind, generate_corpus
from .model import read_manifest, screen_to_json, write_manifest
from .treatments import TreatmentSpec, make_pairs
from .wirify import RepresentationMode


def _parse_mix(text: str) -> dict[TemplateKind, float]:
    mix = {}
    for part in text.split(","):
        name, _, weight = part.partition("=")
        kind = TemplateKind(name.strip().lower())
        mix[kind] = float(weight)
    return mix


def _parse_treatment(text: str, seed: int) -> TreatmentSpec:
    kind, _, amount = text.partition(":")
    return TreatmentSpec(kind.strip().lower(), int(amount), seed=seed)


def cmd_gen_corpus(args) -> int:
    mix = _parse_mix(args.mix) if args.mix else DEFAULT_MIX
    screens = generate_corpus(args.seed, args.count, mix=mix, extent=(args.width, args.height))
    write_manifest(screens, args.out)
    print(f"wrote {len(screens)} screens to {args.out}")
    return 0


def cmd_treat(args) -> int:
    spec = _parse_treatment(args.spec, args.seed)
    corpus = list(read_manifest(getattr(args, "in")))
    report = make_pairs(corpus, spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        for pair in report.pairs:
            fh.write(
                json.dumps(
                    {
                        "original_id": pair.original_id,
                        "treated": json.loads(screen_to_json(pair.treated)),
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
            fh.write("\n")
    for sid, reason in report.skipped:
        print(f"skipped {sid}: {reason}", file=sys.stderr)
    print(f"wrote {len(report.pairs)} pairs to {args.out} ({len(report.skipped)} skipped)")
    return 0


def _load_config(path) -> dict:
    text = Path(path).read_bytes()
    if str(path).endswith(".toml"):
        import tomllib

        return tomllib.loads(text.decode())
    return json.loads(text)


def cmd_train(args) -> int:
    import numpy as np

    from .autoencoder import WaeConfig, train
    from .wirify import render

    raw = _load_config(args.config) if args.config else {}
    mode = RepresentationMode[raw.pop("mode", "Color")]
    config = WaeConfig(**raw)
    if mode is RepresentationMode.Grey and config.channels != 1:
        raise SystemExit("grey mode needs channels=1 in the config")
    corpus = list(read_manifest(args.manifest))
    if not corpus:
        raise SystemExit("manifest is empty")
    stack = np.stack(
        [render(s, mode, (config.width, config.height)).values for s in corpus]
    )
    result = train(
        config,
        stack,
        checkpoint_dir=args.checkpoints,
        log=lambda epoch, loss: print(f"epoch {epoch}: loss {loss:.6f}", file=sys.stderr),
    )
    result.model.save(args.out)
    if args.history:
        Path(args.history).write_text(json.dumps(result.loss_history))
    print(f"wrote model to {args.out} (final loss {result.loss_history[-1]:.6f})")
    return 0


def cmd_encode(args) -> int:
    from .autoencoder import WaeModel, encode
    from .wirify import render

    model = WaeModel.load(args.model)
    mode = RepresentationMode[args.mode]
    size = (model.config.width, model.config.height)
    with open(args.out, "w", encoding="utf-8") as fh:
        for screen in read_manifest(getattr(args, "in")):
            latent = encode(model, render(screen, mode, size))
            fh.write(json.dumps({"id": screen.id, "latent": latent.tolist()}))
            fh.write("\n")
    print(f"wrote latents to {args.out}")
    return 0


def cmd_build_index(args) -> int:
    from .autoencoder import WaeModel
    from .index import build_index, save_index

    model = WaeModel.load(args.model)
    corpus = list(read_manifest(args.manifest))
    index = build_index(model, corpus, RepresentationMode[args.mode])
    save_index(index, args.out)
    print(f"wrote index of {len(index)} entries to {args.out}")
    return 0


def cmd_eval(args) -> int:
    from .autoencoder import WaeModel
    from .baselines import train_fcae
    from .evaluate import (
        ExperimentSpec,
        format_report_table,
        run_experiment,
        write_ranking_log,
        write_report_json,
    )

    spec_doc = _load_config(args.spec)
    corpus = list(read_manifest(spec_doc["manifest"]))
    method = spec_doc.get("method", "wae")
    k = int(spec_doc.get("k", 10))
    seed = int(spec_doc.get("seed", 0))
    mode = RepresentationMode[spec_doc.get("mode", "Color")]

    wae_model = None
    fcae_model = None
    if method == "wae":
        if "model" not in spec_doc:
            raise SystemExit("method 'wae' needs a 'model' checkpoint path in the spec")
        wae_model = WaeModel.load(spec_doc["model"])
    elif method == "fcae":
        fcae_model, _ = train_fcae(
            corpus,
            epochs=int(spec_doc.get("fcae_epochs", 50)),
            seed=seed,
        )

    treatments = spec_doc.get("treatments")
    if not treatments:
        raise SystemExit("spec must list treatments, e.g. [\"scale:10\", \"remove:20\"]")
    rows = []
    all_logs = []
    for treatment_text in treatments:
        tspec = _parse_treatment(treatment_text, seed)
        espec = ExperimentSpec(method=method, treatment=tspec, k=k, seed=seed, mode=mode)
        row, logs = run_experiment(corpus, espec, wae_model=wae_model, fcae_model=fcae_model)
        rows.append(row)
        all_logs.extend(logs)
        print(f"{row.treatment} {row.method}: pre@1={row.pre1:.3f} mrr={row.mrr:.3f}", file=sys.stderr)
    write_report_json(rows, args.out)
    if args.log:
        write_ranking_log(all_logs, args.log)
    print(format_report_table(rows))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.model, args.index, args.manifest, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wae", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-corpus", help="generate a synthetic screen manifest")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mix", help="kind=weight list, e.g. form=0.3,list=0.2")
    p.add_argument("--width", type=int, default=1080)
    p.add_argument("--height", type=int, default=1920)
    p.set_defaults(func=cmd_gen_corpus)

    p = sub.add_parser("treat", help="apply a treatment to every screen in a manifest")
    p.add_argument("--spec", required=True, help="scale:R or remove:B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_treat)

    p = sub.add_parser("train", help="train the wireframe autoencoder")
    p.add_argument("--config", help="JSON/TOML file mirroring the training config")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--checkpoints", help="directory for per-epoch checkpoints")
    p.add_argument("--history", help="write the per-epoch loss history JSON here")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("encode", help="encode every manifest screen to a latent vector")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="Color", choices=[m.name for m in RepresentationMode])
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("build-index", help="build a latent index from a manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="Color", choices=[m.name for m in RepresentationMode])
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("eval", help="run treatment experiments from a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="per-query ranking log (JSONL)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the search service")
    p.add_argument("--model", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
