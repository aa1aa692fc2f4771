"""Command-line entry point wiring the pipeline stages together.

Exit codes: 0 success, 1 fatal error, 2 success with diagnostics.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import numpy as np

from . import balance, config, corpus, datafiles, evaluation, labeler, nnet, smellscan, textprep

log = logging.getLogger("smelltriage")

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_DIAGNOSTICS = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smelltriage",
        description="Label bug fixes by the code smells they introduced and "
                    "predict that label from new bug-report text.",
    )
    parser.add_argument("--config", help="JSON run-configuration file")
    parser.add_argument("--seed", type=int, help="top-level random seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--verbose", action="store_true")
    # every config key is also a flag, one-to-one
    for dotted, _ in config.flat_keys():
        if dotted in ("seed", "verbose"):
            continue
        parser.add_argument(f"--{dotted}", dest=dotted, metavar="VALUE")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build-dataset", help="corpus -> smell scan -> labeled dataset")
    sub.add_parser("scan-smells", help="emit per (commit, file) smell vectors")
    sub.add_parser("label", help="label a corpus from pre-computed smell vectors")
    sub.add_parser("train", help="train the classifier on a labeled dataset")
    sub.add_parser("evaluate", help="k-fold cross-validated report")
    p = sub.add_parser("predict", help="classify one bug report")
    p.add_argument("--summary", default="")
    p.add_argument("--description", default="")
    return parser


def _config_from_args(args) -> config.RunConfig:
    overrides = {}
    for dotted, _ in config.flat_keys():
        if dotted in ("seed", "verbose"):
            continue
        val = getattr(args, dotted, None)
        if val is not None:
            overrides[dotted] = val
    cfg = config.load_config(args.config, overrides)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.paths.out_dir = args.out
    if args.verbose:
        cfg.verbose = True
    return cfg


def _load_store(cfg: config.RunConfig) -> tuple[corpus.CorpusStore, list[str]]:
    required = {
        corpus.RecordKind.ISSUES: cfg.paths.issues,
        corpus.RecordKind.COMMITS: cfg.paths.commits,
        corpus.RecordKind.CHANGES: cfg.paths.changes,
        corpus.RecordKind.LINKS: cfg.paths.links,
    }
    for kind, p in required.items():
        if p is None:
            raise corpus.CorpusError(f"missing corpus path for {kind.value}")
        if not Path(p).exists():
            raise corpus.CorpusError(f"missing input file: {p}")
    store = corpus.CorpusStore(
        repo_path=Path(cfg.paths.repo) if cfg.paths.repo else None,
        source_extensions=cfg.extensions_tuple(),
    )
    diagnostics: list[str] = []
    for kind, p in required.items():
        result = store.ingest_records(p, kind)
        diagnostics.extend(result.diagnostics)
        log.info("ingested %d %s records", result.accepted, kind.value)
    return store, diagnostics


def _smell_source(cfg: config.RunConfig, store: corpus.CorpusStore):
    if cfg.paths.smell_vectors:
        _, records = datafiles.read_jsonl(cfg.paths.smell_vectors)
        rows = {}
        parents: dict[str, str | None] = {}
        for rec in records:
            key = (rec.get("Commit_Hash", ""), rec.get("File_path", ""))
            rows[key] = smellscan.SmellVector.from_record(rec)
            if rec.get("Parent_Hash"):
                parents[key[0]] = rec["Parent_Hash"]
        return labeler.VectorTableSource(rows=rows, parents=parents)
    if store.repo_path is None:
        raise corpus.CorpusError(
            "missing input: either paths.repo (built-in scanner) or "
            "paths.smell_vectors (pre-computed vectors) is required"
        )
    return labeler.GitScanSource(store=store, thresholds=cfg.smell)


def _write_dataset(cfg: config.RunConfig, dataset: labeler.LabeledDataset) -> Path:
    out_dir = Path(cfg.paths.out_dir)
    ds_path = Path(cfg.paths.dataset) if cfg.paths.dataset else out_dir / "dataset.jsonl"
    datafiles.write_jsonl(ds_path, [s.to_record() for s in dataset.samples],
                          seed=cfg.seed, kind="labeled-dataset")
    datafiles.write_jsonl(out_dir / "statistics.jsonl", [dataset.stats.to_record()],
                          seed=cfg.seed, kind="dataset-statistics")
    if dataset.skipped:
        datafiles.write_jsonl(out_dir / "skipped.jsonl",
                              [{"reason": r} for r in dataset.skipped],
                              seed=cfg.seed, kind="skip-report")
    return ds_path


def cmd_build_dataset(cfg: config.RunConfig) -> int:
    store, diagnostics = _load_store(cfg)
    source = _smell_source(cfg, store)
    dataset = labeler.build_labeled_dataset(store, source, project=cfg.project)
    _write_dataset(cfg, dataset)
    diagnostics.extend(dataset.diagnostics)
    log.info("dataset: %d samples, %d class-1 (%.1f%%), %d skipped",
             dataset.stats.total, dataset.stats.class1,
             dataset.stats.class1_percent, len(dataset.skipped))
    return EXIT_DIAGNOSTICS if (diagnostics or dataset.skipped) else EXIT_OK


def cmd_scan_smells(cfg: config.RunConfig) -> int:
    out_dir = Path(cfg.paths.out_dir)
    rows: list[dict] = []
    diagnostics: list[str] = []
    if cfg.paths.pmd_report:
        report_text = Path(cfg.paths.pmd_report).read_text(encoding="utf-8")
        result = smellscan.ingest_pmd_report(report_text, cfg.smell)
        diagnostics.extend(result.diagnostics)
        for rule, count in sorted(result.unmatched_rules.items()):
            diagnostics.append(f"unmatched PMD rule {rule}: {count} violation(s)")
        for fname, vec in result.vectors:
            rec = {"Commit_Hash": "", "File_path": fname}
            rec.update(vec.to_record())
            rows.append(rec)
    else:
        store, diags = _load_store(cfg)
        diagnostics.extend(diags)
        if store.repo_path is None:
            log.error("missing input: paths.repo is required to scan sources")
            return EXIT_FATAL
        commits = sorted({l.commit_hash for l in store.links})
        for commit in commits:
            parent = store.parent_of(commit)
            for cf in store.changed_files_with_contents(commit, diagnostics):
                for hash_, content, par in (
                    (commit, cf.content_at_commit, parent),
                    (parent, cf.content_at_parent, None),
                ):
                    if content is None or hash_ is None:
                        continue
                    vec = smellscan.scan_source(content, cf.file_path, cfg.smell)
                    rec = {"Commit_Hash": hash_, "File_path": cf.file_path}
                    if par:
                        rec["Parent_Hash"] = par
                    rec.update(vec.to_record())
                    rows.append(rec)
    datafiles.write_jsonl(out_dir / "smell_vectors.jsonl", rows,
                          seed=cfg.seed, kind="smell-vectors")
    return EXIT_DIAGNOSTICS if diagnostics else EXIT_OK


def cmd_label(cfg: config.RunConfig) -> int:
    if not cfg.paths.smell_vectors:
        log.error("missing input: paths.smell_vectors is required for `label`")
        return EXIT_FATAL
    return cmd_build_dataset(cfg)


def _load_dataset(cfg: config.RunConfig) -> list[labeler.LabeledSample]:
    if not cfg.paths.dataset:
        raise config.ConfigError("missing input: paths.dataset")
    if not Path(cfg.paths.dataset).exists():
        raise config.ConfigError(f"missing input file: {cfg.paths.dataset}")
    _, records = datafiles.read_jsonl(cfg.paths.dataset)
    return [labeler.LabeledSample.from_record(r) for r in records]


def _prepare_indices(samples, cfg: config.RunConfig,
                     dictionary: textprep.Dictionary | None = None):
    docs = [textprep.TokenDocument(s.issue_id, textprep.tokenize(s.text)) for s in samples]
    if dictionary is None:
        dictionary = textprep.build_vocabulary(docs, cfg.textprep.max_vocab)
    X = np.array([textprep.doc2indices(d, dictionary, cfg.textprep.seq_len) for d in docs],
                 dtype=np.int64)
    y = np.array([s.label for s in samples], dtype=int)
    return X, y, dictionary


def _model_config(cfg: config.RunConfig, vocab_size: int) -> nnet.ModelConfig:
    return dataclasses.replace(cfg.model, vocab_size=vocab_size,
                               seq_len=cfg.textprep.seq_len)


def cmd_train(cfg: config.RunConfig) -> int:
    samples = _load_dataset(cfg)
    labels = {s.label for s in samples}
    if len(labels) < 2:
        log.error("dataset has a single class %s; training refused", labels)
        return EXIT_FATAL
    X, y, dictionary = _prepare_indices(samples, cfg)
    model_cfg = _model_config(cfg, dictionary.vocab_size)
    if cfg.balance.enabled:
        res = balance.smote(X, y, k=cfg.balance.k, seed=cfg.seed,
                            rounding=cfg.balance.rounding,
                            max_index=model_cfg.vocab_size - 1)
        X, y = res.X, res.y
    model = nnet.init_model(model_cfg, seed=cfg.seed, dict_hash=dictionary.content_hash())
    model, history = nnet.train(model, X, y, seed=cfg.seed)
    out_dir = Path(cfg.paths.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = Path(cfg.paths.model) if cfg.paths.model else out_dir / "model.bin"
    nnet.save_model(model, model_path)
    dict_path = Path(cfg.paths.dictionary) if cfg.paths.dictionary else out_dir / "dictionary.tsv"
    dictionary.save(dict_path)
    datafiles.write_jsonl(out_dir / "history.jsonl", history.epochs,
                          seed=cfg.seed, kind="train-history")
    if history.epochs:
        log.info("final training accuracy %.1f%%, loss %.4f",
                 history.epochs[-1]["accuracy"], history.epochs[-1]["loss"])
    return EXIT_OK


def cmd_evaluate(cfg: config.RunConfig) -> int:
    samples = _load_dataset(cfg)
    X, y, dictionary = _prepare_indices(samples, cfg)
    model_cfg = _model_config(cfg, dictionary.vocab_size)
    if cfg.eval.folds < 2:
        log.error("eval.folds must be >= 2, got %d", cfg.eval.folds)
        return EXIT_FATAL
    scopes = ["train", "all"] if cfg.balance.scope == "both" else [cfg.balance.scope]
    out_dir = Path(cfg.paths.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    class1, total = int(np.sum(y == 1)), len(y)
    for scope in scopes:
        bal = dataclasses.replace(cfg.balance, scope=scope)
        report = evaluation.run_kfold_experiment(
            X, y, model_cfg, bal, k=cfg.eval.folds, seed=cfg.seed, project=cfg.project)
        suffix = f"_{scope}" if len(scopes) > 1 else ""
        (out_dir / f"report{suffix}.tsv").write_text(
            f"# seed={cfg.seed}\n" + evaluation.format_report(report, class1, total),
            encoding="utf-8")
        datafiles.write_jsonl(out_dir / f"report{suffix}.jsonl",
                              [r.to_record() for r in report.folds + [report.mean]],
                              seed=cfg.seed, kind="evaluation-report")
        log.info("scope=%s mean accuracy %.1f%%", scope, report.mean.accuracy)
    return EXIT_OK


def cmd_predict(cfg: config.RunConfig, summary: str, description: str) -> int:
    if not cfg.paths.model or not Path(cfg.paths.model).exists():
        log.error("model file not found: %s", cfg.paths.model)
        return EXIT_FATAL
    if not cfg.paths.dictionary or not Path(cfg.paths.dictionary).exists():
        log.error("dictionary file not found: %s", cfg.paths.dictionary)
        return EXIT_FATAL
    dictionary = textprep.Dictionary.load(cfg.paths.dictionary)
    try:
        model = nnet.load_model(cfg.paths.model, expected_dict_hash=dictionary.content_hash())
    except nnet.ModelFormatError as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    tokens = textprep.preprocess(summary, cfg.textprep.remove_stopwords) + \
        textprep.preprocess(description, cfg.textprep.remove_stopwords)
    doc = textprep.TokenDocument("<cli>", tokens)
    seq = textprep.doc2indices(doc, dictionary, model.cfg.seq_len)
    label, prob = nnet.predict(model, np.asarray(seq))
    verdict = "refer to designer" if label == 1 else "assign to programmer"
    print(f"label={label} probability={prob:.6f}")
    print(verdict)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except config.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    logging.basicConfig(
        level=logging.DEBUG if cfg.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "build-dataset":
            return cmd_build_dataset(cfg)
        if args.command == "scan-smells":
            return cmd_scan_smells(cfg)
        if args.command == "label":
            return cmd_label(cfg)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg)
        if args.command == "predict":
            return cmd_predict(cfg, args.summary, args.description)
    except (config.ConfigError, corpus.CorpusError, balance.BalanceError,
            evaluation.EvalError, smellscan.PmdReportError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL
    return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
