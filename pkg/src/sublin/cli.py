"""Command-line surface: dot, train, eval, synth, bench, protocol.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 infeasible synthetic
spec.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import data_io, matching, protocol
from .data_io import (GXL_PRESETS, GxlAttrConfig, SyntheticSpec, binary_examples,
                      generate_synthetic, read_examples_jsonl, read_jsonl, write_jsonl)
from .exceptions import InfeasibleSpecError, ValidationError
from .learning import TrainConfig, train_binary, train_one_vs_all, write_trace_jsonl
from .matching import MatcherConfig, exact_sdp, ga_sdp, sdp
from .model import OvaModel, classify, load_model, predict_multiclass, save_model
from .protocol import ProtocolConfig, run_protocol

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _matcher_from_args(args) -> MatcherConfig:
    return MatcherConfig(method=args.matcher, exact_max_order=args.exact_max_order)


def _load_graph(path, gxl_cfg: GxlAttrConfig | None):
    if str(path).endswith(".gxl"):
        cfg = gxl_cfg or GXL_PRESETS["letter"]
        return data_io.parse_gxl_file(path, cfg)
    examples = read_examples_jsonl(path)
    if not examples:
        raise ValidationError(f"{path} contains no graphs")
    return examples[0].graph


def _gxl_config(args) -> GxlAttrConfig | None:
    if getattr(args, "gxl_preset", None):
        try:
            return GXL_PRESETS[args.gxl_preset]
        except KeyError:
            raise ValidationError(
                f"unknown GXL preset {args.gxl_preset!r}; available: {sorted(GXL_PRESETS)}"
            )
    if getattr(args, "gxl_config", None):
        with open(args.gxl_config, "r", encoding="utf-8") as fh:
            return GxlAttrConfig.from_json(json.load(fh))
    return None


def _write_json(doc, path=None):
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)


def _cmd_dot(args) -> int:
    gxl_cfg = _gxl_config(args)
    a = _load_graph(args.file_a, gxl_cfg)
    b = _load_graph(args.file_b, gxl_cfg)
    result = sdp(a, b, _matcher_from_args(args))
    doc = {
        "value": result.value,
        "match": [list(p) for p in result.match.pairs],
        "exact": result.exact,
    }
    if args.json:
        _write_json(doc)
    else:
        print(f"value  {result.value!r}")
        print(f"match  {' '.join(f'{i}->{r}' for i, r in result.match.pairs) or '(empty)'}")
        print(f"mode   {'exact' if result.exact else 'heuristic'}")
    return EXIT_OK


def _cmd_train(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg_doc = json.load(fh)
    dataset = read_jsonl(cfg_doc["data"])
    split = cfg_doc.get("split", "train")
    examples = dataset.split(split)
    if not examples:
        raise ValidationError(f"split {split!r} of {dataset.name!r} is empty")
    matcher = MatcherConfig.from_json(cfg_doc["matcher"]) if "matcher" in cfg_doc else _matcher_from_args(args)
    tc = TrainConfig(
        learning_rate=float(cfg_doc.get("eta", 0.1)),
        margin=float(cfg_doc.get("lambda", 0.0)),
        max_epochs=int(cfg_doc.get("max_epochs", 200)),
        weight_order=cfg_doc.get("weight_order"),
        seed=int(cfg_doc.get("seed", args.seed)),
        matcher=matcher,
    )
    task = cfg_doc.get("task", "auto")
    if task == "auto":
        task = "binary" if len(dataset.class_set) == 2 else "ova"
    os.makedirs(args.out, exist_ok=True)
    if task == "binary":
        trained, trace = train_binary(
            binary_examples(dataset, split, cfg_doc.get("positive_class")), tc
        )
        trained.metadata["positive_class"] = str(
            cfg_doc.get("positive_class") or dataset.class_set[0]
        )
        write_trace_jsonl(trace, os.path.join(args.out, "trace.jsonl"))
        converged = trace.converged
    else:
        trained, traces = train_one_vs_all(examples, tc)
        for cls, tr in zip(trained.classes, traces):
            write_trace_jsonl(tr, os.path.join(args.out, f"trace-{cls}.jsonl"))
        converged = all(tr.converged for tr in traces)
    model_path = os.path.join(args.out, "model.json")
    save_model(trained, model_path)
    print(f"wrote {model_path} (converged={converged})")
    return EXIT_OK


def _cmd_eval(args) -> int:
    loaded = load_model(args.model)
    dataset = read_jsonl(args.data)
    examples = dataset.split(args.split)
    if not examples:
        raise ValidationError(f"split {args.split!r} is empty")
    classes = list(dataset.class_set)
    confusion = {str(t): {str(p): 0 for p in classes} for t in classes}
    hits = 0
    for ex in examples:
        if isinstance(loaded, OvaModel):
            pred = predict_multiclass(loaded, ex.graph)
        else:
            positive = loaded.metadata.get("positive_class", str(classes[0]))
            negative = next((str(c) for c in classes if str(c) != positive), positive)
            pred = positive if classify(loaded, ex.graph) == 1 else negative
        confusion[str(ex.y)][str(pred)] += 1
        hits += str(pred) == str(ex.y)
    doc = {"split": args.split, "n": len(examples),
           "accuracy": hits / len(examples), "confusion": confusion}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_json(doc, os.path.join(args.out, "eval.json"))
    if args.json:
        _write_json(doc)
        return EXIT_OK
    width = max(len(str(c)) for c in classes) + 2
    header = " " * width + "".join(f"{str(c):>{width}}" for c in classes)
    print(f"accuracy {doc['accuracy']:.4f} on {len(examples)} examples")
    print(header)
    for t in classes:
        row = "".join(f"{confusion[str(t)][str(p)]:>{width}}" for p in classes)
        print(f"{str(t):>{width}}{row}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = SyntheticSpec.from_json(json.load(fh))
    dataset, planted = generate_synthetic(spec)
    write_jsonl(dataset, args.out)
    save_model(planted, os.path.join(args.out, "planted_model.json"))
    cert = dataset.provenance["margin_certificate"]
    print(f"wrote {args.out}: {sum(len(v) for v in dataset.splits.values())} graphs, "
          f"margin certificate {cert:.6g}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    gaps = []
    times = {"exact": 0.0, "graduated": 0.0}
    attained = 0
    for _ in range(args.pairs):
        order = int(rng.integers(args.min_order, args.max_order + 1))
        a = data_io._random_graph(rng, order, args.attr_dim, 0.5, 1.0)
        b = data_io._random_graph(rng, int(rng.integers(args.min_order, args.max_order + 1)),
                                  args.attr_dim, 0.5, 1.0)
        t0 = time.perf_counter()
        exact = exact_sdp(a, b, max_order=max(args.max_order, 8))
        times["exact"] += time.perf_counter() - t0
        t0 = time.perf_counter()
        heur = ga_sdp(a, b)
        times["graduated"] += time.perf_counter() - t0
        gap = exact.value - heur.value
        gaps.append(gap)
        attained += gap <= 1e-9
    doc = {
        "pairs": args.pairs,
        "orders": [args.min_order, args.max_order],
        "attr_dim": args.attr_dim,
        "gap_mean": float(np.mean(gaps)),
        "gap_max": float(np.max(gaps)),
        "gap_min": float(np.min(gaps)),
        "optimum_attainment_rate": attained / args.pairs,
        "seconds_exact": times["exact"],
        "seconds_graduated": times["graduated"],
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_json(doc, os.path.join(args.out, "bench.json"))
    print(f"pairs {args.pairs}  gap mean {doc['gap_mean']:.3e}  max {doc['gap_max']:.3e}  "
          f"min {doc['gap_min']:.3e}")
    print(f"optimum attained {attained}/{args.pairs}")
    print(f"time  exact {times['exact']:.3f}s  graduated {times['graduated']:.3f}s")
    return EXIT_OK


def _cmd_protocol(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    dataset = read_jsonl(doc["dataset"])
    matcher = MatcherConfig.from_json(doc["matcher"]) if "matcher" in doc else _matcher_from_args(args)
    cfg = ProtocolConfig(
        dataset=dataset,
        algorithm=doc["algorithm"],
        eta_grid=tuple(doc.get("eta_grid", protocol.DEFAULT_ETA_GRID)),
        lambda_grid=tuple(doc.get("lambda_grid", protocol.DEFAULT_LAMBDA_GRID)),
        repeats=int(doc.get("repeats", 10)),
        seed=int(doc.get("seed", args.seed)),
        matcher=matcher,
        max_epochs=int(doc.get("max_epochs", 200)),
        weight_order=doc.get("weight_order"),
    )
    report = run_protocol(cfg)
    print(report.to_text())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_json(report.to_json(), os.path.join(args.out, "report.json"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sublin",
                     description="Graph classifiers built on the correspondence-maximized dot product")
    parser.add_argument("--matcher", choices=("exact", "graduated"), default="exact")
    parser.add_argument("--exact-max-order", type=int, default=matching.DEFAULT_EXACT_MAX_ORDER)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dot", help="dot product of two graph files (.jsonl or .gxl)")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--gxl-preset", default=None)
    p.add_argument("--gxl-config", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_dot)

    p = sub.add_parser("train", help="train from a JSON config; writes model + trace")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="accuracy and confusion matrix of a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", default="test")
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="materialize a synthetic dataset spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bench", help="time exact vs graduated matching on random pairs")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--min-order", type=int, default=3)
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--attr-dim", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("protocol", help="run the grid-search + repeated-test protocol")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_protocol)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
