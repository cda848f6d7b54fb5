"""Command-line front end.

Every command resolves its full parameter set, writes it as config.json
next to its outputs, and can be replayed byte-identically with
``lglda rerun config.json``.  The default output directory comes from
``--out`` or the LGLDA_OUTPUT_DIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from lglda import metrics as metrics_mod
from lglda import synthgen
from lglda.baselines import train_lda, train_local_lda, train_tfidf_kmeans
from lglda.corpus import CorpusFormatError, ingest, split, write_canonical
from lglda.model import (
    Hyperparameters,
    ModelEstimate,
    rank_documents_by_locality,
    train,
)
from lglda.serialize import load_model, save_model

CSV_HEADER = "model,lambda,K,perplexity,topic_entropy,location_entropy,mean_pairwise_kl,seed,iterations"

CONFIG_FORMAT = "lglda-run-config"
CONFIG_VERSION = 1

HP_FIELDS = (
    "num_topics",
    "alpha_local",
    "alpha_global",
    "beta",
    "gamma_local",
    "gamma_global",
    "lam",
    "iterations",
    "seed",
    "global_counts_mode",
    "phi_mode",
    "average_last",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def _resolve_out(out) -> Path:
    if out is None:
        out = os.environ.get("LGLDA_OUTPUT_DIR")
    if out is None:
        raise ValueError("no output directory: pass --out or set LGLDA_OUTPUT_DIR")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_config(out_dir: Path, command: str, params: dict) -> None:
    payload = {
        "format": CONFIG_FORMAT,
        "version": CONFIG_VERSION,
        "command": command,
        "params": params,
    }
    with open(out_dir / "config.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _hp_from_params(params: dict, **overrides) -> Hyperparameters:
    kwargs = {name: params[name] for name in HP_FIELDS}
    kwargs.update(overrides)
    return Hyperparameters(**kwargs)


def _train_one(kind: str, corpus, hp: Hyperparameters):
    if kind == "lglda":
        _, estimate = train(corpus, hp)
        return estimate
    if kind == "lda":
        return train_lda(corpus, hp)
    if kind == "local_lda":
        return train_local_lda(corpus, hp)
    if kind == "tfidf_kmeans":
        return train_tfidf_kmeans(corpus, hp.num_topics, hp.seed)
    raise ValueError(f"unknown model kind {kind!r}")


def _metrics_row(kind: str, hp: Hyperparameters, report) -> str:
    lam = hp.lam if kind == "lglda" else None
    iterations = hp.iterations if kind != "tfidf_kmeans" else None
    cells = [
        kind,
        _fmt(lam),
        str(hp.num_topics),
        _fmt(report.perplexity),
        _fmt(report.topic_entropy),
        _fmt(report.location_entropy),
        _fmt(report.mean_pairwise_kl),
        str(hp.seed),
        _fmt(iterations),
    ]
    return ",".join(cells)


def _write_top_words(path: Path, per_topic_top_words) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("topic\trank\tword\tweight\n")
        for k, ranked in enumerate(per_topic_top_words):
            for rank, (word, weight) in enumerate(ranked, 1):
                fh.write(f"{k}\t{rank}\t{word}\t{weight!r}\n")


def run_train(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    corpus = ingest(params["corpus"], params["min_tokens"])
    hp = _hp_from_params(params)
    held = params["held_out_fraction"]
    if held > 0:
        train_corpus, eval_corpus = split(corpus, held, params["split_seed"])
    else:
        train_corpus = eval_corpus = corpus

    estimate = _train_one(params["model"], train_corpus, hp)
    report = metrics_mod.make_report(
        estimate, eval_corpus, vocabulary_words=corpus.vocabulary.words, top_n=params["top_n"]
    )

    save_model(out_dir / "model.json", estimate)
    with open(out_dir / "metrics.csv", "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write(_metrics_row(params["model"], hp, report) + "\n")
    with open(out_dir / "metrics.txt", "w", encoding="utf-8") as fh:
        fh.write(report.key_values())
    _write_top_words(out_dir / "top_words.tsv", report.per_topic_top_words)
    _write_config(out_dir, "train", params)
    print(f"trained {params['model']} on {corpus.num_documents} documents; outputs in {out_dir}")
    return 0


def _train_eval_split(corpus, params):
    held = params.get("held_out_fraction", 0.0)
    if held > 0:
        return split(corpus, held, params["split_seed"])
    return corpus, corpus


def _compare_worker(task):
    kind, train_corpus, eval_corpus, params = task
    hp = _hp_from_params(params)
    try:
        estimate = _train_one(kind, train_corpus, hp)
        report = metrics_mod.make_report(estimate, eval_corpus)
        return _metrics_row(kind, hp, report), None
    except Exception as exc:  # record and continue: one bad model must not sink the table
        return ",".join([kind] + ["error"] * 8), f"model {kind} failed: {exc}"


def run_compare(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    corpus = ingest(params["corpus"], params["min_tokens"])
    train_corpus, eval_corpus = _train_eval_split(corpus, params)
    tasks = [(kind, train_corpus, eval_corpus, params) for kind in params["models"]]
    if params.get("jobs", 1) > 1:
        with ProcessPoolExecutor(max_workers=params["jobs"]) as pool:
            results = list(pool.map(_compare_worker, tasks))
    else:
        results = [_compare_worker(task) for task in tasks]
    with open(out_dir / "compare.csv", "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for row, error in results:
            fh.write(row + "\n")
            if error:
                print(error, file=sys.stderr)
    _write_config(out_dir, "compare", params)
    print(f"compared {len(results)} models; outputs in {out_dir}")
    return 0


def _sweep_seed(base_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1)[0])


def _sweep_worker(task):
    train_corpus, eval_corpus, params, lam, index = task
    hp = _hp_from_params(params, lam=lam, seed=_sweep_seed(params["seed"], index))
    _, estimate = train(train_corpus, hp)
    report = metrics_mod.make_report(estimate, eval_corpus)
    return _metrics_row("lglda", hp, report)


def run_sweep_lambda(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    corpus = ingest(params["corpus"], params["min_tokens"])
    train_corpus, eval_corpus = _train_eval_split(corpus, params)
    grid = sorted(params["lambda_grid"])
    if not grid:
        raise ValueError("empty lambda grid")
    if any(lam <= 0 for lam in grid):
        raise ValueError("lambda grid values must be > 0")
    _write_config(out_dir, "sweep-lambda", params)

    tasks = [(train_corpus, eval_corpus, params, lam, i) for i, lam in enumerate(grid)]
    csv_path = out_dir / "sweep.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.flush()
        try:
            if params["jobs"] > 1:
                with ProcessPoolExecutor(max_workers=params["jobs"]) as pool:
                    for row in pool.map(_sweep_worker, tasks):
                        fh.write(row + "\n")
                        fh.flush()
            else:
                for task in tasks:
                    fh.write(_sweep_worker(task) + "\n")
                    fh.flush()
        except Exception as exc:
            print(f"sweep aborted, partial CSV retained: {exc}", file=sys.stderr)
            return 1
    print(f"swept {len(grid)} lambda values; outputs in {out_dir}")
    return 0


def run_locality(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    estimate = load_model(params["model"])
    if not isinstance(estimate, ModelEstimate):
        raise ValueError("locality scores require a local-global model artifact")
    corpus = ingest(params["corpus"], params["min_tokens"])
    if corpus.vocabulary.sha256() != estimate.vocab_sha256:
        raise ValueError("corpus vocabulary does not match the model artifact")
    scored = rank_documents_by_locality(estimate, corpus)
    with open(out_dir / "locality.tsv", "w", encoding="utf-8") as fh:
        fh.write("doc_id\tlocation\tscore\n")
        for doc_id, loc_name, score in scored:
            fh.write(f"{doc_id}\t{loc_name}\t{score!r}\n")
    _write_config(out_dir, "locality", params)
    print(f"scored {len(scored)} documents; outputs in {out_dir}")
    return 0


def run_topwords(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    estimate = load_model(params["model"])
    corpus = ingest(params["corpus"], params["min_tokens"])
    if corpus.vocabulary.sha256() != estimate.vocab_sha256:
        raise ValueError("corpus vocabulary does not match the model artifact")
    phi = estimate.phi if isinstance(estimate, ModelEstimate) else estimate.topic_words
    ranked = metrics_mod.top_words(phi, corpus.vocabulary.words, params["top_n"])
    _write_top_words(out_dir / "top_words.tsv", ranked)
    _write_config(out_dir, "topwords", params)
    print(f"wrote top words for {phi.shape[0]} topics; outputs in {out_dir}")
    return 0


def run_generate(params: dict) -> int:
    out_dir = _resolve_out(params["out"])
    spec = synthgen.make_spec(
        seed=params["seed"],
        num_topics=params["num_topics"],
        vocab_size=params["vocab_size"],
        num_locations=params["num_locations"],
        docs_per_location=params["docs_per_location"],
        tokens_per_doc=params["tokens_per_doc"],
        lam=params["lam"],
        doc_locality_rate=params["doc_locality"],
    )
    corpus, truth = synthgen.generate(spec)
    write_canonical(corpus, out_dir / "corpus.txt")
    synthgen.write_ground_truth(truth, out_dir / "truth.tsv")
    _write_config(out_dir, "generate", params)
    print(
        f"generated {corpus.num_documents} documents at {corpus.num_locations} "
        f"locations; outputs in {out_dir}"
    )
    return 0


def run_ingest_check(params: dict) -> int:
    corpus = ingest(params["corpus"], params["min_tokens"])
    print(
        f"documents={corpus.num_documents} locations={corpus.num_locations} "
        f"vocabulary={corpus.num_words} tokens={corpus.num_tokens}"
    )
    return 0


RUNNERS = {
    "train": run_train,
    "compare": run_compare,
    "sweep-lambda": run_sweep_lambda,
    "locality": run_locality,
    "topwords": run_topwords,
    "generate": run_generate,
    "ingest-check": run_ingest_check,
}


def run_rerun(params: dict) -> int:
    with open(params["config"], encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != CONFIG_FORMAT or payload.get("version") != CONFIG_VERSION:
        raise ValueError(f"{params['config']}: not a {CONFIG_FORMAT} v{CONFIG_VERSION} file")
    saved = payload["params"]
    if params["out"] is not None:
        saved = dict(saved, out=params["out"])
    return RUNNERS[payload["command"]](saved)


def _add_hp_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-K", "--num-topics", type=int, default=20, dest="num_topics")
    parser.add_argument("--alpha-local", type=float, default=0.1)
    parser.add_argument("--alpha-global", type=float, default=0.1)
    parser.add_argument("--beta", type=float, default=0.1)
    parser.add_argument("--gamma-local", type=float, default=0.5)
    parser.add_argument("--gamma-global", type=float, default=0.5)
    parser.add_argument("--lambda", type=float, default=0.6, dest="lam")
    parser.add_argument("--iterations", type=int, default=500)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument(
        "--global-counts-mode", choices=("corpus-wide", "per-location"), default="corpus-wide"
    )
    parser.add_argument("--phi-mode", choices=("shared", "split"), default="shared")
    parser.add_argument("--average-last", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lglda",
        description="Geographical topic modeling with local/global word filtering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a corpus file and print its stats")
    p.add_argument("corpus")
    p.add_argument("--min-tokens", type=int, default=3)

    p = sub.add_parser("train", help="train one model and write artifact + metrics")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument(
        "--model", choices=("lglda", "lda", "local_lda", "tfidf_kmeans"), default="lglda"
    )
    p.add_argument("--min-tokens", type=int, default=3)
    p.add_argument("--held-out-fraction", type=float, default=0.0)
    p.add_argument("--split-seed", type=int, default=1)
    p.add_argument("--top-n", type=int, default=5)
    _add_hp_args(p)

    p = sub.add_parser("compare", help="train several models and tabulate their metrics")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument("--models", default="lglda,local_lda,lda")
    p.add_argument("--min-tokens", type=int, default=3)
    p.add_argument("--held-out-fraction", type=float, default=0.0)
    p.add_argument("--split-seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    _add_hp_args(p)

    p = sub.add_parser("sweep-lambda", help="train across a grid of weight ratios")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument(
        "--lambda-grid",
        default=None,
        help="comma-separated values; default is 10 log-spaced points from 0.1 to 20",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--min-tokens", type=int, default=3)
    p.add_argument("--held-out-fraction", type=float, default=0.0)
    p.add_argument("--split-seed", type=int, default=1)
    _add_hp_args(p)

    p = sub.add_parser("locality", help="rank documents by local/global score")
    p.add_argument("model")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument("--min-tokens", type=int, default=3)

    p = sub.add_parser("topwords", help="write ranked top words per topic")
    p.add_argument("model")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument("--top-n", type=int, default=5)
    p.add_argument("--min-tokens", type=int, default=3)

    p = sub.add_parser("generate", help="emit a synthetic corpus with ground truth")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-K", "--num-topics", type=int, default=6, dest="num_topics")
    p.add_argument("--vocab-size", type=int, default=600)
    p.add_argument("--num-locations", type=int, default=12)
    p.add_argument("--docs-per-location", type=int, default=80)
    p.add_argument("--tokens-per-doc", type=int, default=12)
    p.add_argument("--lambda", type=float, default=0.6, dest="lam")
    p.add_argument(
        "--doc-locality",
        type=float,
        default=None,
        help="constant per-document locality rate; default draws Beta(1.5, 2.5)",
    )

    p = sub.add_parser("rerun", help="replay a command from its resolved config")
    p.add_argument("config")
    p.add_argument("--out")

    return parser


def _params_from_args(args: argparse.Namespace) -> dict:
    params = vars(args).copy()
    params.pop("command", None)
    return params


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = _params_from_args(args)
    command = args.command
    if command == "sweep-lambda":
        if params["lambda_grid"] is None:
            params["lambda_grid"] = [float(x) for x in np.geomspace(0.1, 20.0, 10)]
        elif isinstance(params["lambda_grid"], str):
            params["lambda_grid"] = [float(x) for x in params["lambda_grid"].split(",")]
    if command == "compare" and isinstance(params["models"], str):
        params["models"] = [m.strip() for m in params["models"].split(",") if m.strip()]
    runner = run_rerun if command == "rerun" else RUNNERS[command]
    try:
        return runner(params)
    except (ValueError, OSError, CorpusFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
