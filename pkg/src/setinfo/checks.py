"""Quick self-checks over small random instances, used by the check subcommand.

These mirror the core invariants the test suite verifies at full scale;
here they run in a couple of seconds with a fixed seed so a deployment can
sanity-check itself without pytest.
"""

from __future__ import annotations

import math
import string

import numpy as np

from .density import (
    EstimatorConfig,
    MiRecord,
    capacity,
    entropy,
    joint_entropy,
    kernel,
    mutual_information,
    triplet_likelihood,
)
from .agents import make_triplet
from .ngrams import LingSet, hamming, join, ngram_set
from .reward import demarcken_check, reward

_ALPHABET = string.ascii_lowercase + " "


def _random_set(rng: np.random.Generator, max_len: int = 30) -> LingSet:
    length = int(rng.integers(1, max_len + 1))
    chars = "".join(_ALPHABET[int(i)] for i in rng.integers(len(_ALPHABET), size=length))
    text = chars.strip() or "a"
    return ngram_set(text, 1, 3)


def run_checks(seed: int = 20240915) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    cfg = EstimatorConfig()
    report: list[tuple[str, bool, str]] = []

    sets = [_random_set(rng) for _ in range(120)]
    sym_ok = all(
        hamming(a, b) == hamming(b, a)
        for a, b in zip(sets, sets[1:])
    )
    tri_ok = True
    for _ in range(400):
        a, b, c = (sets[int(i)] for i in rng.integers(len(sets), size=3))
        if hamming(a, c) > hamming(a, b) + hamming(b, c):
            tri_ok = False
            break
    report.append(("metric symmetry", sym_ok, "h(a,b) == h(b,a)"))
    report.append(("triangle inequality", tri_ok, "h(a,c) <= h(a,b) + h(b,c)"))

    peak = 1.0 / math.sqrt(2.0 * math.pi * cfg.bandwidth**2)
    kernel_ok = True
    for _ in range(300):
        a, b = (sets[int(i)] for i in rng.integers(len(sets), size=2))
        value = kernel(a, b, cfg.bandwidth)
        if not (0.0 < value <= peak + 1e-12):
            kernel_ok = False
            break
    report.append(("kernel bounds", kernel_ok, f"0 < f <= {peak:.6g}"))

    mi_ok = True
    chain_ok = True
    range_ok = True
    for _ in range(30):
        n = int(rng.integers(2, 13))
        pairs = [
            (sets[int(i)], sets[int(j)])
            for i, j in zip(rng.integers(len(sets), size=n), rng.integers(len(sets), size=n))
        ]
        i_ab = mutual_information(pairs, cfg)
        i_ba = mutual_information([(b, a) for a, b in pairs], cfg)
        if abs(i_ab - i_ba) > 1e-12:
            mi_ok = False
        h_joint = joint_entropy(pairs, cfg)
        h_cond = h_joint - entropy([a for a, _ in pairs], cfg)
        if abs(entropy([a for a, _ in pairs], cfg) + h_cond - h_joint) > 1e-12:
            chain_ok = False
        for values in ([a for a, _ in pairs], [b for _, b in pairs]):
            h = entropy(values, cfg)
            if not (-1e-12 <= h <= math.log(len(values)) + 1e-12):
                range_ok = False
    report.append(("MI symmetry (union mode)", mi_ok, "|I(a,b) - I(b,a)| <= 1e-12"))
    report.append(("entropy chain rule", chain_ok, "H(cond) + H(target|cond) == H(joint)"))
    report.append(("normalized entropy range", range_ok, "0 <= H <= ln(n)"))

    like_ok = True
    for _ in range(10):
        n = int(rng.integers(2, 8))
        triplets = [
            make_triplet(
                _random_set(rng, 12).source,
                _random_set(rng, 8).source,
                _random_set(rng, 12).source,
            )
            for _ in range(n)
        ]
        target = triplets[int(rng.integers(n))]
        factored = triplet_likelihood(target, triplets, cfg)
        direct_sets = [
            join(join(t.x, t.y, cfg.joint_mode, cfg.n_min, cfg.n_max),
                 t.z, cfg.joint_mode, cfg.n_min, cfg.n_max)
            for t in triplets
        ]
        direct_target = join(
            join(target.x, target.y, cfg.joint_mode, cfg.n_min, cfg.n_max),
            target.z, cfg.joint_mode, cfg.n_min, cfg.n_max,
        )
        direct = capacity(direct_target, direct_sets, cfg)
        if abs(factored - direct) > 1e-12 * max(abs(direct), 1e-300):
            like_ok = False
    report.append(("likelihood telescoping", like_ok, "factorized == direct joint capacity"))

    reward_ok = True
    for _ in range(300):
        vals = rng.normal(size=3)
        rec = MiRecord(
            k=1, i_xy=float(vals[0]), i_yz=float(vals[1]), i_xz=float(vals[2]),
            i_xy_z=0.0, i_xz_y=0.0, h_x=0.0, h_y=0.0, h_z=0.0, sample_size=1,
        )
        ok, _ = demarcken_check(rec)
        if (reward(rec, "margin").value > 0) != ok:
            reward_ok = False
            break
    report.append(("reward/ordering consistency", reward_ok, "margin > 0 iff ordering holds"))
    return report
