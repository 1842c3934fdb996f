"""Full simulation runs: agents x steps x estimators, rolling stats, CSV output.

A run is described by a RunConfig (usually parsed from a flat key=value
file), produces one TrajectoryResult per configured agent, and is
deterministic given (config, seed): every step draws from its own generator
spawned off the master seed, so results do not depend on how many workers
evaluated the steps.
"""

from __future__ import annotations

import hashlib
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import fmean
from typing import Sequence

import numpy as np

from .agents import (
    AgentSpec,
    StepSample,
    SynthGrammar,
    Triplet,
    build_step_samples,
    default_grammar,
    synth_corpus,
)
from .config import (
    ConfigInvalid,
    as_bool,
    as_float,
    as_int,
    as_list,
    as_phrases,
    load_config,
)
from .corpus import DocumentCollection, load_documents
from .density import EstimatorConfig, MiRecord, compute_mi_record, joint_mass_monitor
from .reward import RewardSignal, demarcken_check, reward

MI_SERIES = ("i_xy", "i_yz", "i_xz", "i_xy_z", "i_xz_y")

CSV_HEADER = (
    "k,i_xy,i_yz,i_xz,i_xy_z,i_xz_y,h_x,h_y,h_z,"
    "reward_margin,reward_xy_dominance,demarcken_ok"
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a simulation run needs; defaults mirror the desk-scale setup."""

    corpus_path: str = "synthetic"
    strip_headers: bool = False
    groups: tuple[str, ...] | None = None
    context_length: int = 10
    per_step: int = 100
    k_max: int = 120
    window: int = 50
    seed: int = 0
    workers: int = 1
    out_dir: str = "out"
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    agents: tuple[AgentSpec, ...] = (
        AgentSpec(kind="random"),
        AgentSpec(kind="gold_file", name="structured"),
    )
    synthetic_sentences: int = 12000
    synthetic_p_pref: float = 0.8
    synthetic_sentences_per_doc: int = 50
    grammar_path: str | None = None

    def validate(self) -> None:
        if self.k_max < 1:
            raise ConfigInvalid(f"run.k_max must be >= 1, got {self.k_max}")
        if self.per_step < 1:
            raise ConfigInvalid(f"context.per_step must be >= 1, got {self.per_step}")
        if self.window < 1:
            raise ConfigInvalid(f"run.window must be >= 1, got {self.window}")
        if self.workers < 1:
            raise ConfigInvalid(f"run.workers must be >= 1, got {self.workers}")
        if self.context_length < 3:
            raise ConfigInvalid(
                f"context.length must be >= 3 so contexts can be split, got {self.context_length}"
            )
        if not self.agents:
            raise ConfigInvalid("at least one agent must be configured")
        names = [spec.name for spec in self.agents]
        if len(set(names)) != len(names):
            raise ConfigInvalid(f"agent names must be unique, got {names}")

    def to_flat_dict(self) -> dict[str, str]:
        est = self.estimator
        flat = {
            "corpus.path": str(self.corpus_path),
            "corpus.strip_headers": str(self.strip_headers).lower(),
            "context.length": str(self.context_length),
            "context.per_step": str(self.per_step),
            "run.k_max": str(self.k_max),
            "run.window": str(self.window),
            "run.seed": str(self.seed),
            "estimator.bandwidth": format(est.bandwidth, ".12g"),
            "estimator.entropy_mode": est.entropy_mode,
            "estimator.joint_mode": est.joint_mode,
            "ngram.n_min": str(est.n_min),
            "ngram.n_max": str(est.n_max),
            "ngram.include_space": str(est.include_space).lower(),
            "agents": ", ".join(spec.name for spec in self.agents),
        }
        if self.groups is not None:
            flat["corpus.groups"] = ", ".join(self.groups)
        for spec in self.agents:
            flat[f"agent.{spec.name}.kind"] = spec.kind
            if spec.path is not None:
                flat[f"agent.{spec.name}.path"] = str(spec.path)
        if self.corpus_path == "synthetic":
            flat["synthetic.sentences"] = str(self.synthetic_sentences)
            flat["synthetic.p_pref"] = format(self.synthetic_p_pref, ".12g")
            flat["synthetic.sentences_per_doc"] = str(self.synthetic_sentences_per_doc)
            if self.grammar_path:
                flat["synthetic.grammar"] = str(self.grammar_path)
        return flat

    def config_hash(self) -> str:
        canon = "\n".join(f"{k} = {v}" for k, v in sorted(self.to_flat_dict().items()))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]

    @classmethod
    def from_dict(cls, values: dict[str, str]) -> "RunConfig":
        est = EstimatorConfig(
            bandwidth=as_float(values.get("estimator.bandwidth", "5.0"), "estimator.bandwidth"),
            entropy_mode=values.get("estimator.entropy_mode", "normalized"),
            joint_mode=values.get("estimator.joint_mode", "union"),
            n_min=as_int(values.get("ngram.n_min", "1"), "ngram.n_min"),
            n_max=as_int(values.get("ngram.n_max", "3"), "ngram.n_max"),
            include_space=as_bool(values.get("ngram.include_space", "true"), "ngram.include_space"),
        )
        agent_names = as_list(values.get("agents", "random, structured"))
        specs = []
        for name in agent_names:
            kind = values.get(f"agent.{name}.kind", name)
            path = values.get(f"agent.{name}.path")
            lexicon = values.get(f"agent.{name}.lexicon")
            try:
                specs.append(AgentSpec(kind=kind, name=name, path=path, lexicon_path=lexicon))
            except ValueError as exc:
                raise ConfigInvalid(str(exc)) from exc
        groups = None
        if "corpus.groups" in values:
            groups = tuple(as_list(values["corpus.groups"]))
        cfg = cls(
            corpus_path=values.get("corpus.path", "synthetic"),
            strip_headers=as_bool(values.get("corpus.strip_headers", "false"), "corpus.strip_headers"),
            groups=groups,
            context_length=as_int(values.get("context.length", "10"), "context.length"),
            per_step=as_int(values.get("context.per_step", "100"), "context.per_step"),
            k_max=as_int(values.get("run.k_max", "120"), "run.k_max"),
            window=as_int(values.get("run.window", "50"), "run.window"),
            seed=as_int(values.get("run.seed", "0"), "run.seed"),
            workers=as_int(values.get("run.workers", "1"), "run.workers"),
            out_dir=values.get("run.out", "out"),
            estimator=est,
            agents=tuple(specs),
            synthetic_sentences=as_int(values.get("synthetic.sentences", "12000"), "synthetic.sentences"),
            synthetic_p_pref=as_float(values.get("synthetic.p_pref", "0.8"), "synthetic.p_pref"),
            synthetic_sentences_per_doc=as_int(
                values.get("synthetic.sentences_per_doc", "50"), "synthetic.sentences_per_doc"
            ),
            grammar_path=values.get("synthetic.grammar"),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        return cls.from_dict(load_config(path))


@dataclass
class TrajectoryResult:
    """Ordered per-step records plus rewards, rolling means, and run metadata."""

    agent: str
    label: str
    records: list[MiRecord]
    rewards: dict[str, list[RewardSignal]]
    rolling: dict[str, list[float]]
    metadata: dict[str, object]


def rolling_mean(series: Sequence[float], window: int) -> list[float]:
    """Sliding-window averages; output[i] covers series[i : i + window].

    A window longer than the series is clamped to its length (with a
    warning), so a nonempty series always yields at least one point.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    n = len(series)
    if n == 0:
        return []
    if window > n:
        warnings.warn(f"window {window} exceeds series length {n}; clamping", stacklevel=2)
        window = n
    return [fmean(series[i : i + window]) for i in range(n - window + 1)]


def grammar_from_file(path: str | Path) -> SynthGrammar:
    """Read phrase pools and preferences from a flat grammar config file."""
    values = load_config(path)
    for key in ("grammar.subjects", "grammar.verbs", "grammar.objects"):
        if key not in values:
            raise ConfigInvalid(f"grammar file is missing {key}")
    verbs = tuple(as_phrases(values["grammar.verbs"]))
    preferred: dict[str, tuple[str, ...]] = {}
    for verb in verbs:
        key = f"grammar.preferred.{verb}"
        if key not in values:
            raise ConfigInvalid(f"grammar file is missing {key}")
        preferred[verb] = tuple(as_phrases(values[key]))
    try:
        return SynthGrammar(
            subjects=tuple(as_phrases(values["grammar.subjects"])),
            verbs=verbs,
            objects=tuple(as_phrases(values["grammar.objects"])),
            preferred=preferred,
            p_pref=as_float(values.get("grammar.p_pref", "0.8"), "grammar.p_pref"),
        )
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc


def _step_series(records: Sequence[MiRecord], name: str) -> list[float]:
    return [getattr(rec, name) for rec in records]


def _compute_step(sample: StepSample, est: EstimatorConfig) -> tuple[MiRecord, int, int]:
    rec = compute_mi_record(sample.k, sample.triplets, est)
    violations, comparisons = joint_mass_monitor(sample.triplets, est)
    return rec, violations, comparisons


def run_simulation(
    cfg: RunConfig,
    docs: DocumentCollection | None = None,
    gold_pool: Sequence[Triplet] | None = None,
    grammar: SynthGrammar | None = None,
) -> dict[str, TrajectoryResult]:
    """Simulate every configured agent and return one trajectory per agent.

    ``docs``/``gold_pool`` bypass corpus loading for programmatic use; when
    the config names the synthetic corpus, both are generated here from the
    master seed.  Results are keyed by agent name in configuration order.
    """
    cfg.validate()
    est = cfg.estimator
    master = np.random.default_rng(cfg.seed)
    corpus_rng, *agent_rngs = master.spawn(1 + len(cfg.agents))

    if docs is None:
        if cfg.corpus_path == "synthetic":
            if grammar is None:
                grammar = (
                    grammar_from_file(cfg.grammar_path)
                    if cfg.grammar_path
                    else default_grammar(p_pref=cfg.synthetic_p_pref)
                )
            docs, synth_gold = synth_corpus(
                cfg.synthetic_sentences,
                corpus_rng,
                grammar,
                sentences_per_doc=cfg.synthetic_sentences_per_doc,
                n_min=est.n_min,
                n_max=est.n_max,
                include_space=est.include_space,
            )
            if gold_pool is None:
                gold_pool = synth_gold
        else:
            docs = load_documents(cfg.corpus_path, cfg.strip_headers, cfg.groups)

    results: dict[str, TrajectoryResult] = {}
    for spec, agent_rng in zip(cfg.agents, agent_rngs):
        started = time.perf_counter()
        if spec.kind == "gold_file" and spec.path is None and gold_pool is not None:
            spec = replace(spec, pool=tuple(gold_pool))
        samples = build_step_samples(
            spec,
            docs,
            k_max=cfg.k_max,
            per_step=cfg.per_step,
            rng=agent_rng,
            context_length=cfg.context_length,
            n_min=est.n_min,
            n_max=est.n_max,
            include_space=est.include_space,
        )
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                stepped = list(pool.map(lambda s: _compute_step(s, est), samples))
        else:
            stepped = [_compute_step(s, est) for s in samples]
        records = [rec for rec, _, _ in stepped]
        violations = sum(v for _, v, _ in stepped)
        comparisons = sum(c for _, _, c in stepped)

        window = cfg.window
        if window > cfg.k_max:
            warnings.warn(
                f"window {window} exceeds k_max {cfg.k_max}; clamping", stacklevel=2
            )
            window = cfg.k_max
        rolling = {
            name: rolling_mean(_step_series(records, name), window) for name in MI_SERIES
        }
        rewards = {
            scheme: [reward(rec, scheme) for rec in records]
            for scheme in ("margin", "xy_dominance")
        }
        results[spec.name] = TrajectoryResult(
            agent=spec.name,
            label=spec.kind,
            records=records,
            rewards=rewards,
            rolling=rolling,
            metadata={
                "agent": spec.name,
                "label": spec.kind,
                "seed": cfg.seed,
                "config_hash": cfg.config_hash(),
                "k_max": cfg.k_max,
                "per_step": cfg.per_step,
                "bandwidth": est.bandwidth,
                "entropy_mode": est.entropy_mode,
                "joint_mode": est.joint_mode,
                "window": window,
                "joint_mass_violations": violations,
                "joint_mass_comparisons": comparisons,
                "joint_mass_violation_fraction": (
                    violations / comparisons if comparisons else 0.0
                ),
                "wall_time_s": time.perf_counter() - started,
            },
        )
    return results


def _fmt(value: float) -> str:
    return format(value, ".12g")


# Metadata keys written as leading comments; wall time is deliberately
# excluded so identical (config, seed) runs stay byte-identical.
_CSV_META_KEYS = (
    "seed",
    "agent",
    "label",
    "config_hash",
    "k_max",
    "per_step",
    "bandwidth",
    "entropy_mode",
    "joint_mode",
    "window",
    "joint_mass_violation_fraction",
)


def write_csv(result: TrajectoryResult, path: str | Path) -> None:
    """One data row per step, with run metadata as leading '#' comments."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for key in _CSV_META_KEYS:
        value = result.metadata.get(key)
        if isinstance(value, float):
            value = _fmt(value)
        lines.append(f"# {key} = {value}")
    lines.append(CSV_HEADER)
    for rec, r_margin, r_xy in zip(
        result.records, result.rewards["margin"], result.rewards["xy_dominance"]
    ):
        ok, _ = demarcken_check(rec)
        lines.append(
            ",".join(
                [
                    str(rec.k),
                    _fmt(rec.i_xy),
                    _fmt(rec.i_yz),
                    _fmt(rec.i_xz),
                    _fmt(rec.i_xy_z),
                    _fmt(rec.i_xz_y),
                    _fmt(rec.h_x),
                    _fmt(rec.h_y),
                    _fmt(rec.h_z),
                    _fmt(r_margin.value),
                    _fmt(r_xy.value),
                    str(int(ok)),
                ]
            )
        )
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_all_csv(results: dict[str, TrajectoryResult], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    paths = []
    for name, result in results.items():
        path = out / f"{name}.csv"
        write_csv(result, path)
        paths.append(path)
    return paths


def read_csv(path: str | Path) -> tuple[dict[str, str], dict[str, list[float]]]:
    """Parse a trajectory CSV back into (metadata, column series)."""
    meta: dict[str, str] = {}
    columns: dict[str, list[float]] = {}
    header: list[str] | None = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = line.split(",")
            columns = {name: [] for name in header}
            continue
        for name, cell in zip(header, line.split(",")):
            columns[name].append(float(cell))
    if header is None:
        raise ValueError(f"no header row found in {path}")
    return meta, columns
