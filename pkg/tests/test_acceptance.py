"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test prints one `ACCEPTANCE n <name>: PASS` line on success (visible
with ``pytest -s`` or in the captured output); a failed assertion marks the
criterion FAIL.  The two trajectory criteria run the full bundled synthetic
configuration (seed 42, 120 steps x 100 actions) and therefore account for
most of the suite's runtime.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import stats

from setinfo import (
    AgentSpec,
    EstimatorConfig,
    MiRecord,
    RunConfig,
    capacity,
    demarcken_check,
    entropy,
    hamming,
    join,
    joint_entropy,
    kernel,
    make_triplet,
    mutual_information,
    random_split_agent,
    reward,
    run_simulation,
    triplet_likelihood,
    write_all_csv,
)
from setinfo.corpus import Context
from setinfo.trajectory import read_csv

from conftest import random_lingset

UNION = EstimatorConfig()  # bandwidth 5.0, normalized entropy, union joints
KERNEL_PEAK = 0.0797885


def report(num: int, name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num} {name}: PASS{suffix}")


def full_scale_config(joint_mode: str) -> RunConfig:
    return RunConfig(
        corpus_path="synthetic",
        synthetic_sentences=12000,
        synthetic_p_pref=0.8,
        context_length=10,
        per_step=100,
        k_max=120,
        window=50,
        seed=42,
        estimator=EstimatorConfig(
            bandwidth=5.0, entropy_mode="raw", joint_mode=joint_mode
        ),
        agents=(
            AgentSpec(kind="random"),
            AgentSpec(kind="gold_file", name="structured"),
        ),
    )


def test_criterion_1_metric_axioms():
    rng = np.random.default_rng(101)
    started = time.perf_counter()
    triples = [
        (random_lingset(rng, 40), random_lingset(rng, 40), random_lingset(rng, 40))
        for _ in range(1000)
    ]
    for a, b, c in triples:
        assert hamming(a, b) == hamming(b, a)
        assert hamming(a, c) <= hamming(a, b) + hamming(b, c)
        assert hamming(a, a) == 0
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    report(1, "metric axioms", f"1000 triples, exact, {elapsed:.2f}s")


def test_criterion_2_kernel_bounds_and_monotonicity():
    rng = np.random.default_rng(202)
    by_distance: dict[int, float] = {}
    for _ in range(1000):
        a, b = random_lingset(rng, 40), random_lingset(rng, 40)
        h = hamming(a, b)
        value = kernel(a, b, 5.0)
        assert 0.0 < value <= KERNEL_PEAK + 1e-9
        if h in by_distance:
            assert value == by_distance[h]
        else:
            by_distance[h] = value
    distances = sorted(by_distance)
    values = [by_distance[h] for h in distances]
    assert all(earlier > later for earlier, later in zip(values, values[1:]))
    report(
        2,
        "kernel bounds",
        f"1000 pairs, h in [{distances[0]}, {distances[-1]}], zero violations",
    )


def _random_sample(rng: np.random.Generator, max_size: int = 20) -> list:
    return [random_lingset(rng, 30) for _ in range(int(rng.integers(1, max_size + 1)))]


def test_criterion_3_estimator_identities():
    rng = np.random.default_rng(303)
    worst = {"symmetry": 0.0, "self_mi": 0.0, "chain": 0.0, "likelihood": 0.0}
    for _ in range(200):
        firsts = _random_sample(rng)
        seconds = [random_lingset(rng, 30) for _ in firsts]
        pairs = list(zip(firsts, seconds))

        delta = abs(
            mutual_information(pairs, UNION)
            - mutual_information([(b, a) for a, b in pairs], UNION)
        )
        worst["symmetry"] = max(worst["symmetry"], delta)
        assert delta <= 1e-12

        self_pairs = [(v, v) for v in firsts]
        delta = abs(mutual_information(self_pairs, UNION) - entropy(firsts, UNION))
        worst["self_mi"] = max(worst["self_mi"], delta)
        assert delta <= 1e-12

        h_cond = joint_entropy(pairs, UNION) - entropy(firsts, UNION)
        delta = abs(entropy(firsts, UNION) + h_cond - joint_entropy(pairs, UNION))
        worst["chain"] = max(worst["chain"], delta)
        assert delta <= 1e-12

        triplets = [
            make_triplet(a.source, random_lingset(rng, 10).source, b.source)
            for a, b in pairs
        ]
        target = triplets[int(rng.integers(len(triplets)))]
        factored = triplet_likelihood(target, triplets, UNION)
        joined = [join(join(t.x, t.y, "union"), t.z, "union") for t in triplets]
        direct = capacity(
            join(join(target.x, target.y, "union"), target.z, "union"), joined, UNION
        )
        rel = abs(factored - direct) / abs(direct)
        worst["likelihood"] = max(worst["likelihood"], rel)
        assert rel <= 1e-12
    report(
        3,
        "estimator identities",
        "200 samples; worst "
        + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()),
    )


def test_criterion_4_entropy_range():
    rng = np.random.default_rng(404)
    for _ in range(200):
        values = _random_sample(rng)
        h = entropy(values, UNION)
        assert 0.0 <= h <= math.log(len(values)) + 1e-12
    report(4, "normalized entropy range", "200 samples, 0 <= H <= ln(n)")


def test_criterion_5_splitter_uniformity():
    length = 10
    draws = 36000
    ctx = Context(tokens=tuple(f"t{i}" for i in range(length)), doc_id="d", offset=0)
    rng = np.random.default_rng(2024)
    counts: dict[tuple[int, int], int] = {}
    for _ in range(draws):
        t = random_split_agent(ctx, rng)
        i = len(t.x_text.split())
        j = i + len(t.y_text.split())
        counts[(i, j)] = counts.get((i, j), 0) + 1
    cells = [(i, j) for i in range(1, length) for j in range(i + 1, length)]
    assert len(cells) == 36
    expected = draws / len(cells)
    chi2 = sum((counts.get(cell, 0) - expected) ** 2 / expected for cell in cells)
    critical = stats.chi2.ppf(1 - 0.001, df=len(cells) - 1)
    assert chi2 < critical
    report(5, "splitter uniformity", f"chi2={chi2:.1f} < {critical:.1f} at p=0.001")


@pytest.fixture(scope="module")
def fidelity_run():
    started = time.perf_counter()
    results = run_simulation(full_scale_config("union"))
    return results, time.perf_counter() - started


def test_criterion_6_structured_mi_separation(fidelity_run):
    results, elapsed = fidelity_run
    structured = results["structured"]
    random_agent = results["random"]

    xy = structured.rolling["i_xy"]
    yz = structured.rolling["i_yz"]
    xz = structured.rolling["i_xz"]
    assert len(xy) == 120 - 50 + 1
    dominant = sum(1 for a, b, c in zip(xy, yz, xz) if a > b and a > c)
    fraction = dominant / len(xy)
    assert fraction >= 0.90

    mean_structured = fmean_records(structured.records)
    mean_random = fmean_records(random_agent.records)
    assert mean_structured > mean_random
    assert elapsed <= 120.0
    report(
        6,
        "structured MI separation",
        f"i_xy dominant at {dominant}/{len(xy)} rolling points; "
        f"mean i_xy {mean_structured:.3f} > {mean_random:.3f}; {elapsed:.0f}s",
    )


def fmean_records(records) -> float:
    return sum(rec.i_xy for rec in records) / len(records)


def test_criterion_7_joint_mass_monitor(tmp_path):
    results = run_simulation(full_scale_config("concat"))
    fractions = {}
    for name, result in results.items():
        meta = result.metadata
        assert "joint_mass_violation_fraction" in meta
        fraction = meta["joint_mass_violation_fraction"]
        assert 0.0 <= fraction <= 1.0
        assert meta["joint_mass_comparisons"] == 120 * 100 * 3 * 2
        fractions[name] = fraction
    paths = write_all_csv(results, tmp_path)
    for path in paths:
        meta, _ = read_csv(path)
        assert "joint_mass_violation_fraction" in meta
    report(
        7,
        "joint-mass monitor (concat)",
        "; ".join(f"{name}: {fraction:.4g}" for name, fraction in fractions.items()),
    )


def small_deterministic_config(**overrides) -> RunConfig:
    defaults = dict(
        corpus_path="synthetic",
        synthetic_sentences=600,
        k_max=6,
        per_step=25,
        window=3,
        seed=17,
        agents=(
            AgentSpec(kind="random"),
            AgentSpec(kind="gold_file", name="structured"),
        ),
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


def test_criterion_8_determinism(tmp_path):
    for tag in ("first", "second"):
        results = run_simulation(small_deterministic_config())
        write_all_csv(results, tmp_path / tag)
    for name in ("random", "structured"):
        a = (tmp_path / "first" / f"{name}.csv").read_bytes()
        b = (tmp_path / "second" / f"{name}.csv").read_bytes()
        assert a == b

    solo = run_simulation(small_deterministic_config(workers=1))
    multi = run_simulation(small_deterministic_config(workers=4))
    worst = 0.0
    for name in solo:
        for rec_a, rec_b in zip(solo[name].records, multi[name].records):
            for fieldname in ("i_xy", "i_yz", "i_xz", "i_xy_z", "i_xz_y"):
                va = getattr(rec_a, fieldname)
                vb = getattr(rec_b, fieldname)
                rel = abs(va - vb) / max(abs(va), 1e-30)
                worst = max(worst, rel)
                assert rel <= 1e-9
    report(
        8,
        "determinism",
        f"byte-identical CSVs; 1 vs 4 workers worst rel diff {worst:.1e}",
    )


def test_criterion_9_reward_consistency():
    rng = np.random.default_rng(909)
    for _ in range(1000):
        vals = rng.normal(size=3)
        rec = MiRecord(
            k=1,
            i_xy=float(vals[0]), i_yz=float(vals[1]), i_xz=float(vals[2]),
            i_xy_z=0.0, i_xz_y=0.0, h_x=0.0, h_y=0.0, h_z=0.0, sample_size=1,
        )
        satisfied, _ = demarcken_check(rec)
        assert (reward(rec, "margin").value > 0) == satisfied
    report(9, "reward consistency", "1000 records, margin > 0 iff ordering holds")
