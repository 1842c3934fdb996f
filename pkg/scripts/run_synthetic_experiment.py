#!/usr/bin/env python3
"""End-to-end synthetic experiment: simulate both agents, write CSVs and figures.

Runs the random splitter against the structured (gold-triple) agent on the
bundled synthetic corpus and reports whether the MI ordering
I(X,Y) > I(Y,Z) > I(X,Z) emerges for the structured agent but not for the
random one.  Outputs one CSV per agent plus SVG figures under --out.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from setinfo import (
    AgentSpec,
    EstimatorConfig,
    RunConfig,
    run_simulation,
    write_all_csv,
    write_svg,
)


def summarize(name: str, result) -> None:
    i_xy = result.rolling["i_xy"]
    i_yz = result.rolling["i_yz"]
    i_xz = result.rolling["i_xz"]
    points = len(i_xy)
    dominant = sum(
        1 for a, b, c in zip(i_xy, i_yz, i_xz) if a > b and a > c
    )
    mean_xy = sum(r.i_xy for r in result.records) / len(result.records)
    ok = sum(1 for r in result.rewards["margin"] if r.satisfied)
    print(
        f"  {name:<12} mean i_xy={mean_xy:.4f} | rolling i_xy dominant at "
        f"{dominant}/{points} points | full ordering at {ok}/{len(result.records)} steps | "
        f"joint-mass violations {result.metadata['joint_mass_violation_fraction']:.4g}"
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/synthetic", help="output directory")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--k-max", type=int, default=120)
    parser.add_argument("--per-step", type=int, default=100)
    parser.add_argument("--sentences", type=int, default=12000)
    parser.add_argument("--p-pref", type=float, default=0.8)
    parser.add_argument("--window", type=int, default=50)
    parser.add_argument("--bandwidth", type=float, default=5.0)
    parser.add_argument("--entropy-mode", default="raw", choices=("raw", "normalized"))
    parser.add_argument("--joint-mode", default="union", choices=("union", "concat"))
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    cfg = RunConfig(
        corpus_path="synthetic",
        synthetic_sentences=args.sentences,
        synthetic_p_pref=args.p_pref,
        k_max=args.k_max,
        per_step=args.per_step,
        window=args.window,
        seed=args.seed,
        workers=args.workers,
        estimator=EstimatorConfig(
            bandwidth=args.bandwidth,
            entropy_mode=args.entropy_mode,
            joint_mode=args.joint_mode,
        ),
        agents=(
            AgentSpec(kind="random"),
            AgentSpec(kind="gold_file", name="structured"),
        ),
    )

    out = Path(args.out)
    started = time.perf_counter()
    results = run_simulation(cfg)
    elapsed = time.perf_counter() - started
    write_all_csv(results, out)

    print(f"simulated {args.k_max} steps x {args.per_step} actions x 2 agents "
          f"in {elapsed:.1f}s ({args.entropy_mode}/{args.joint_mode})")
    for name, result in results.items():
        summarize(name, result)

    write_svg(
        list(results.values()),
        "i_xy,i_yz,i_xz",
        out / "pairwise_mi.svg",
        title=f"pairwise MI, rolling mean {args.window} ({args.entropy_mode} mode)",
    )
    write_svg(
        list(results.values()),
        "i_xy_z,i_xz_y",
        out / "joint_marginal_mi.svg",
        title=f"joint-marginal MI, rolling mean {args.window} ({args.entropy_mode} mode)",
    )
    print(f"wrote {out}/pairwise_mi.svg and {out}/joint_marginal_mi.svg")
    return 0


if __name__ == "__main__":
    sys.exit(main())
