"""Command-line front end.

Four subcommands: ``eval`` scores methods over sampled episodes, ``analyze``
measures feature-space geometry, ``synth`` writes a synthetic chain-graph
dataset, ``sweep`` traces accuracy against propagation depth. Machine-first
output (JSON/CSV files under the output directory) with a short table on
stdout. Exit code 0 only when every requested output was written.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import episodes, featio, geometry, synthgen
from .errors import ConfigError, KpropError

_OUT_ENV = "KPROP_OUT"


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(_OUT_ENV) or "kprop-runs"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_int_list(text: str, flag: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from exc


def _stamp(doc: dict) -> dict:
    doc["created_at"] = datetime.now(timezone.utc).isoformat()
    return doc


def _write_json(path: Path, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_eval(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in episodes.METHODS:
            raise ConfigError(f"unknown method {m!r} in --methods, expected {episodes.METHODS}")
    ds = featio.load_dataset(args.manifest, split=args.split)
    out = _out_dir(args)
    tasks = episodes.sample_tasks(
        ds.features, ds.labels, args.way, args.shot, args.queries_per_class, args.seed, args.tasks
    )
    extra = {"seed": args.seed, "manifest": str(args.manifest), "split": args.split}
    rows = []
    for m in methods:
        cfg = episodes.MethodConfig(
            method=m,
            sigma=args.sigma,
            q=args.q,
            extra_per_class=args.extra_labels,
            transductive=args.transductive,
            normalize_features=args.normalize_features,
            subspace_dim=args.subspace_dim,
        )
        report = episodes.evaluate_method(
            cfg, tasks, ds.features, workers=args.workers, config_extra=extra
        )
        featio.write_report(report, out / f"eval_{m}.json")
        rows.append((m, report.mean, report.se))
        if m == "kprop" and args.compare_raw_kernel_eigvecs:
            raw = episodes.evaluate_method(
                episodes.MethodConfig(
                    method="kprop",
                    sigma=args.sigma,
                    q=args.q,
                    extra_per_class=args.extra_labels,
                    transductive=args.transductive,
                    normalize_features=args.normalize_features,
                    eigvec_source="raw",
                ),
                tasks,
                ds.features,
                workers=args.workers,
                config_extra=extra,
            )
            featio.write_report(raw, out / "eval_kprop_raweig.json")
            rows.append(("kprop[raw-eigvecs]", raw.mean, raw.se))
    width = max(len(r[0]) for r in rows)
    print(f"{args.way}-way {args.shot}-shot, {args.tasks} tasks, seed {args.seed}")
    for name, mean, se in rows:
        print(f"  {name:<{width}}  {100 * mean:6.2f} +/- {100 * se:.2f} %")
    return 0


def cmd_analyze(args) -> int:
    ds = featio.load_dataset(args.manifest, split=args.split)
    out = _out_dir(args)
    stats = geometry.pairwise_distance_stats(ds.features, ds.labels)
    print(
        f"intra: {stats.intra_mean:.2f} +/- {stats.intra_sd:.2f} ({stats.intra_count} pairs)\n"
        f"inter: {stats.inter_mean:.2f} +/- {stats.inter_sd:.2f} ({stats.inter_count} pairs)"
    )
    pnn_entries = []
    for m in _parse_int_list(args.classes_per_trial, "--classes-per-trial"):
        if m > ds.n_classes:
            print(f"  skipping p_NN at {m} classes: dataset has only {ds.n_classes}")
            continue
        est = geometry.estimate_pnn(ds.features, ds.labels, m, args.trials, args.seed)
        pnn_entries.append(asdict(est))
        print(f"  p_NN over {m} classes: {est.mean:.4f} +/- {est.sd:.4f} ({est.trials} trials)")
    doc = _stamp(
        {
            "distance_stats": asdict(stats),
            "pnn": pnn_entries,
            "config": {
                "manifest": str(args.manifest),
                "split": args.split,
                "trials": args.trials,
                "seed": args.seed,
            },
        }
    )
    _write_json(out / "analyze.json", doc)
    lines = ["metric,value"]
    for key, val in asdict(stats).items():
        lines.append(f"{key},{val!r}")
    for entry in pnn_entries:
        m = entry["classes_per_trial"]
        lines.append(f"pnn_{m}_mean,{entry['mean']!r}")
        lines.append(f"pnn_{m}_sd,{entry['sd']!r}")
    (out / "analyze.csv").write_text("\n".join(lines) + "\n")
    return 0


def cmd_synth(args) -> int:
    cfg = synthgen.SynthConfig(
        classes=args.classes,
        points_per_class=args.per_class,
        dim=args.dim,
        step=args.step,
        dispersion=args.dispersion,
        chains_per_class=args.chains,
        seed=args.seed,
    )
    ds = synthgen.generate_sparse_graph_dataset(cfg)
    out = _out_dir(args)
    manifest = featio.write_dataset(out, ds.features, ds.labels)
    _write_json(
        out / "synth_meta.json",
        _stamp({"config": asdict(cfg), "achieved_pnn": ds.achieved_pnn}),
    )
    print(
        f"wrote {ds.features.shape[0]} points ({cfg.classes} classes, dim {cfg.dim}) "
        f"to {manifest}\nachieved_pnn: {ds.achieved_pnn:.4f}"
    )
    return 0


def cmd_sweep(args) -> int:
    ds = featio.load_dataset(args.manifest, split=args.split)
    out = _out_dir(args)
    grid = (
        _parse_int_list(args.m_grid, "--m-grid")
        if args.m_grid
        else list(episodes.DEFAULT_SWEEP_GRID)
    )
    base = episodes.MethodConfig(
        method="kprop",
        sigma=args.sigma,
        q=args.q,
        normalize_features=args.normalize_features,
        transductive=args.transductive,
    )
    points = episodes.sweep_extra_labels(
        ds.features,
        ds.labels,
        args.way,
        args.shot,
        grid,
        args.tasks,
        args.seed,
        queries_per_class=args.queries_per_class,
        base=base,
        workers=args.workers,
    )
    lines = ["extra_per_class,mean,se"]
    print(f"{args.way}-way {args.shot}-shot sweep, {args.tasks} tasks per point")
    for pt in points:
        lines.append(f"{pt.extra_per_class},{pt.mean!r},{pt.se!r}")
        print(f"  M={pt.extra_per_class:<3d} {100 * pt.mean:6.2f} +/- {100 * pt.se:.2f} %")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    return 0


def _add_common_eval_flags(p, tasks_default: int = 1000) -> None:
    p.add_argument("--manifest", required=True, help="dataset manifest JSON")
    p.add_argument("--split", default="train")
    p.add_argument("--way", "--n", dest="way", type=int, default=5)
    p.add_argument("--shot", "--k", dest="shot", type=int, default=1)
    p.add_argument("--tasks", type=int, default=tasks_default, help="episodes to sample")
    p.add_argument("--queries-per-class", type=int, default=15)
    p.add_argument("--sigma", type=float, default=16.0)
    p.add_argument("--q", type=int, default=None, help="components per class (default 2k/3+1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help=f"output dir (or ${_OUT_ENV})")
    p.add_argument("--transductive", action="store_true")
    p.add_argument("--normalize-features", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kprop",
        description="Few-shot evaluation with label propagation and kernel PCA scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate methods over sampled episodes")
    _add_common_eval_flags(p_eval)
    p_eval.add_argument("--methods", default="kprop", help="comma list of methods")
    p_eval.add_argument(
        "--extra-labels", "-M", type=int, default=None, help="propagation depth per class"
    )
    p_eval.add_argument("--subspace-dim", type=int, default=None)
    p_eval.add_argument("--compare-raw-kernel-eigvecs", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_an = sub.add_parser("analyze", help="distance stats and nearest-neighbor purity")
    p_an.add_argument("--manifest", required=True)
    p_an.add_argument("--split", default="train")
    p_an.add_argument("--trials", type=int, default=100)
    p_an.add_argument("--seed", type=int, default=1)
    p_an.add_argument("--classes-per-trial", default="5,10")
    p_an.add_argument("--out", default=None)
    p_an.set_defaults(func=cmd_analyze)

    p_sy = sub.add_parser("synth", help="generate a synthetic chain-graph dataset")
    p_sy.add_argument("--classes", type=int, default=10)
    p_sy.add_argument("--per-class", type=int, default=100)
    p_sy.add_argument("--dim", type=int, default=32)
    p_sy.add_argument("--step", type=float, default=0.5)
    p_sy.add_argument("--dispersion", type=float, default=10.0)
    p_sy.add_argument("--chains", type=int, default=4)
    p_sy.add_argument("--seed", type=int, default=0)
    p_sy.add_argument("--out", default=None)
    p_sy.set_defaults(func=cmd_synth)

    p_sw = sub.add_parser("sweep", help="accuracy vs propagation depth")
    _add_common_eval_flags(p_sw, tasks_default=200)
    p_sw.add_argument("--m-grid", default=None, help="comma list of depths")
    p_sw.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KpropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
