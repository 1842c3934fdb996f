"""Command-line entry point.

Subcommands: ingest (corpus directory -> manifest), gen-synthetic (corpus +
gold triples), simulate (full runs -> CSVs), plot (CSVs -> SVG), check
(quick invariant report).  Exit codes: 0 success, 1 validation failure,
2 runtime error, 64 usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from . import agents as agents_mod
from .config import ConfigInvalid
from .corpus import (
    CorpusTooSmall,
    MalformedManifest,
    load_documents,
    write_manifest,
)
from .svgplot import EmptySelection, write_svg
from .trajectory import (
    MI_SERIES,
    RunConfig,
    grammar_from_file,
    read_csv,
    rolling_mean,
    run_simulation,
    write_all_csv,
)

SEED_ENV_VAR = "SETINFO_SEED"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setinfo",
        description="MI trajectories over character n-gram random sets "
        "for simulated text-segmentation agents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="normalize a corpus directory into a JSONL manifest")
    p_ingest.add_argument("--in", dest="in_path", required=True, help="corpus directory")
    p_ingest.add_argument("--out", dest="out_path", required=True, help="manifest file to write")
    p_ingest.add_argument("--strip-headers", action="store_true", help="drop newsgroup-style headers")

    p_gen = sub.add_parser("gen-synthetic", help="write a synthetic corpus plus its gold triples")
    p_gen.add_argument("--out", dest="out_dir", required=True, help="output directory")
    p_gen.add_argument("--sentences", type=int, default=12000)
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--p-pref", type=float, default=0.8, help="preferred-object probability")
    p_gen.add_argument("--grammar", default=None, help="grammar config file (defaults to built-in pools)")

    p_sim = sub.add_parser("simulate", help="run the configured agents and write one CSV per agent")
    p_sim.add_argument("--config", required=True, help="run config file (flat key = value)")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--out", dest="out_dir", default=None, help="override the output directory")
    p_sim.add_argument("--workers", type=int, default=None, help="override run.workers")

    p_plot = sub.add_parser("plot", help="render rolling-mean curves from trajectory CSVs")
    p_plot.add_argument("--in", dest="in_path", required=True, help="CSV file or directory of CSVs")
    p_plot.add_argument("--series", default="i_xy,i_yz,i_xz", help="comma-separated series names")
    p_plot.add_argument("--out", dest="out_path", required=True, help="SVG file to write")
    p_plot.add_argument("--window", type=int, default=50, help="rolling-mean window")
    p_plot.add_argument("--title", default="", help="figure title")

    sub.add_parser("check", help="run the quick invariant suite and report pass/fail")
    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    docs = load_documents(args.in_path, strip_headers=args.strip_headers)
    if len(docs) == 0:
        print("ingest: no non-empty .txt documents found", file=sys.stderr)
        return 1
    write_manifest(docs, args.out_path)
    print(f"ingest: wrote {len(docs)} documents to {args.out_path}")
    labels = docs.labels()
    if labels and labels != [""]:
        print(f"ingest: source labels: {', '.join(label or '(none)' for label in labels)}")
    return 0


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    out = Path(args.out_dir)
    grammar = (
        grammar_from_file(args.grammar)
        if args.grammar
        else agents_mod.default_grammar(p_pref=args.p_pref)
    )
    rng = np.random.default_rng(args.seed)
    docs, gold = agents_mod.synth_corpus(args.sentences, rng, grammar)
    write_manifest(docs, out / "corpus.jsonl")
    agents_mod.write_triplets(gold, out / "gold.jsonl")
    print(f"gen-synthetic: {len(docs)} documents -> {out / 'corpus.jsonl'}")
    print(f"gen-synthetic: {len(gold)} gold triples -> {out / 'gold.jsonl'}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_file(args.config)
    seed = args.seed
    if seed is None and SEED_ENV_VAR in os.environ:
        seed = int(os.environ[SEED_ENV_VAR])
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    out_dir = Path(args.out_dir) if args.out_dir else Path(cfg.out_dir)
    results = run_simulation(cfg)
    paths = write_all_csv(results, out_dir)
    for (name, result), path in zip(results.items(), paths):
        meta = result.metadata
        ok = sum(1 for r in result.rewards["margin"] if r.satisfied)
        print(
            f"simulate: {name} ({result.label}) -> {path} | "
            f"steps={len(result.records)} ordering_ok={ok}/{len(result.records)} | "
            f"joint mass monitor: fraction="
            f"{meta['joint_mass_violation_fraction']:.6g} "
            f"({meta['joint_mass_violations']}/{meta['joint_mass_comparisons']} pairs) | "
            f"{meta['wall_time_s']:.1f}s"
        )
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    src = Path(args.in_path)
    files = sorted(src.glob("*.csv")) if src.is_dir() else [src]
    if not files:
        print(f"plot: no CSV files under {src}", file=sys.stderr)
        return 1
    bundles = []
    for file in files:
        meta, columns = read_csv(file)
        agent = meta.get("agent", file.stem)
        rolling = {
            name: rolling_mean(columns[name], args.window)
            for name in MI_SERIES
            if name in columns
        }
        bundles.append(SimpleNamespace(agent=agent, rolling=rolling))
    write_svg(bundles, args.series, args.out_path, title=args.title)
    print(f"plot: wrote {args.out_path} ({len(bundles)} agents)")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    from .checks import run_checks

    report = run_checks()
    for name, passed, detail in report:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    failed = [name for name, passed, _ in report if not passed]
    print(f"check: {len(report) - len(failed)}/{len(report)} invariants hold")
    return 1 if failed else 0


_HANDLERS = {
    "ingest": cmd_ingest,
    "gen-synthetic": cmd_gen_synthetic,
    "simulate": cmd_simulate,
    "plot": cmd_plot,
    "check": cmd_check,
}

_VALIDATION_ERRORS = (
    ConfigInvalid,
    MalformedManifest,
    agents_mod.MalformedLine,
    CorpusTooSmall,
    agents_mod.SourceExhausted,
    EmptySelection,
    FileNotFoundError,
    ValueError,
)


def cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 64
    try:
        return _HANDLERS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        print(f"setinfo {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"setinfo {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"setinfo {args.command}: unexpected error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
