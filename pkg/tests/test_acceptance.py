"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Statistical checks use three-standard-error margins around the
one-sided analytic bounds; runtime budgets are asserted where stated.
"""

import math
import subprocess
import sys
import time

import numpy as np
from scipy import stats

from padpart.corpus import GeneratorSpec, generate
from padpart.graph import cluster_diameter
from padpart.harness import (
    Scheme,
    check_cut_bound,
    count_threateners,
    drift_check,
    drift_grid_configs,
    estimate_cut_fraction,
    estimate_padding_multi,
    filter_subsequence,
    run_scheme,
    verify_trace_invariants,
)
from padpart.genus import find_reducing_cycle, genus_from_embedding
from padpart.sampling import RandomStream, TexpParams, texp_cdf, texp_sample_array
from padpart.treewidth import treewidth_partition
from padpart.weak import WeakParams, weak_random_partition

SEEDS = range(20)
THREADS = 4


def report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {num:02d} {name}: {status} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _corpus():
    """(label, graph, td, rot, delta, schemes) rows for criterion 1."""
    rows = []

    def add(label, family, size, delta, schemes, weights="unit"):
        g, td, rot = generate(
            GeneratorSpec(family, size, weights), RandomStream(100)
        )
        rows.append((label, g, td, rot, delta, schemes))

    std = ("weak", "strong")
    add("grid5", "grid", (5, 5), 8.0, std + ("genus",))
    add("grid30", "grid", (30, 30), 8.0, std + ("genus",))
    add("grid10u", "grid", (10, 10), 8.0, std + ("genus",), weights="uniform")
    add("ktree1", "k_tree", (1, 50), 8.0, std + ("treewidth",))
    add("ktree2", "k_tree", (2, 100), 8.0, std + ("treewidth",))
    add("ktree3", "k_tree", (3, 150), 8.0, std + ("treewidth",))
    add("ktree4", "k_tree", (4, 200), 8.0, std + ("treewidth",))
    add("ktree2u", "k_tree", (2, 60), 8.0, std + ("treewidth",), weights="uniform")
    add("torus4", "toroidal_grid", (4, 4), 8.0, std + ("genus",))
    add("torus8", "toroidal_grid", (8, 8), 8.0, std + ("genus",))
    add("torus10", "toroidal_grid", (10, 10), 8.0, std + ("genus",))
    add("path10", "path", (10,), 8.0, std + ("treewidth", "genus"))
    add("path50", "path", (50,), 8.0, std + ("treewidth", "genus"))
    add("cycle10", "cycle", (10,), 8.0, std + ("treewidth", "genus"))
    add("cycle50", "cycle", (50,), 8.0, std + ("treewidth", "genus"))
    add("complete5", "complete", (5,), 2.0, std + ("treewidth",))
    add("complete20", "complete", (20,), 2.0, std + ("treewidth",))
    add("complete50", "complete", (50,), 2.0, std + ("treewidth",))
    return rows


def _minor_parameter(label):
    return {
        "grid5": 4, "grid30": 4, "grid10u": 4,
        "ktree1": 2, "ktree2": 3, "ktree3": 4, "ktree4": 5, "ktree2u": 3,
        "torus4": 7, "torus8": 7, "torus10": 7,
        "path10": 1, "path50": 1,
        "cycle10": 3, "cycle50": 3,
        "complete5": 4, "complete20": 19, "complete50": 49,
    }[label]


def test_criterion_01_partition_validity():
    t0 = time.time()
    runs = 0
    for label, g, td, rot, delta, schemes in _corpus():
        r = _minor_parameter(label)
        for name in schemes:
            scheme = Scheme(
                name,
                delta=delta,
                r=(5 if name == "genus" else r),
                genus_bound=(
                    genus_from_embedding(g, rot) if name == "genus" else None
                ),
                td=td,
                rotation=rot,
            )
            mode = "weak" if name == "weak" else "strong"
            for seed in SEEDS:
                part, _ = run_scheme(g, scheme, RandomStream(seed))
                part.validate(g)
                worst = max(
                    cluster_diameter(g, c, mode) for c in part.clusters
                )
                assert worst <= delta + 1e-9, (label, name, seed, worst)
                runs += 1
    elapsed = time.time() - t0
    report(
        1,
        "partition validity over corpus",
        elapsed < 300.0,
        f"({runs} runs, all diameters within delta, {elapsed:.1f}s < 300s)",
    )


def test_criterion_02_adjacency_invariants():
    t0 = time.time()
    traces = 0
    worst = {}
    cases = [
        ("weak", generate(GeneratorSpec("path", (40,)), RandomStream(100))[0], 1),
        ("weak", generate(GeneratorSpec("grid", (10, 10)), RandomStream(100))[0], 4),
        ("strong", generate(GeneratorSpec("path", (40,)), RandomStream(100))[0], 1),
        ("strong", generate(GeneratorSpec("grid", (10, 10)), RandomStream(100))[0], 4),
    ]
    for name, g, r in cases:
        scheme = Scheme(name, delta=8.0, r=r)
        for seed in range(30):
            _, trace = run_scheme(g, scheme, RandomStream(seed))
            rep = verify_trace_invariants(trace, r)
            assert rep.ok, rep.violations
            key = (name, r)
            worst[key] = max(worst.get(key, 0), rep.max_adjacent_supernodes)
            assert rep.max_adjacent_supernodes <= r
            traces += 1
    report(
        2,
        "pairwise-adjacency and supernode-count invariants",
        traces >= 100,
        f"({traces} traces, max adjacent counts {worst}, {time.time() - t0:.1f}s)",
    )


def test_criterion_03_weak_cut_probability_bound():
    t0 = time.time()
    g, _, _ = generate(GeneratorSpec("grid", (20, 20)), RandomStream(100))
    r, delta, trials = 4, 16.0, 10_000
    gammas = [1 / 320, 1 / 80, 1 / 40]
    gen = np.random.default_rng(777)
    zs = sorted(gen.choice(g.vertex_count, size=10, replace=False).tolist())
    scheme = Scheme("weak", delta=delta, r=r)
    est = estimate_padding_multi(
        g, scheme, zs, gammas, trials, RandomStream(4242), threads=THREADS
    )
    worst_margin = math.inf
    for (z, gamma), e in est.items():
        cut_freq = 1.0 - e.point_estimate
        stderr = math.sqrt(max(cut_freq * (1 - cut_freq), 0.0) / trials)
        bound = 1.0 - math.exp(-80.0 * r * gamma)
        margin = bound + 3 * stderr - cut_freq
        worst_margin = min(worst_margin, margin)
        assert margin >= 0, (z, gamma, cut_freq, bound)
    elapsed = time.time() - t0
    report(
        3,
        "weak-scheme cut probability within 1-exp(-80 r gamma)",
        elapsed < 600.0,
        f"(worst margin {worst_margin:.4f}, {elapsed:.1f}s < 600s)",
    )


def test_criterion_04_cut_bound_inequality_treewidth():
    t0 = time.time()
    g, td, _ = generate(GeneratorSpec("k_tree", (2, 100)), RandomStream(100))
    delta, gamma, trials, z = 12.0, 1 / 32, 10_000, 50
    master = RandomStream(2024)

    def traces():
        for t in range(trials):
            yield treewidth_partition(g, td, delta, master.split(t))[1]

    rep = check_cut_bound(traces(), z=z, gamma=gamma, l=0.0, u=0.5, b=12.0)
    report(
        4,
        "cut frequency within (1-shelter)(1+tau/(e^b-1)) on 2-trees",
        rep.passed,
        f"(freq {rep.cut_frequency:.4f} <= bound {rep.bound:.4f}, "
        f"tau_hat {rep.tau_hat:.2f}, {time.time() - t0:.1f}s)",
    )


def test_criterion_05_threatener_expectation_bound():
    t0 = time.time()
    g, _, _ = generate(GeneratorSpec("grid", (20, 20)), RandomStream(100))
    r, delta, gamma, u, trials = 4, 16.0, 1 / 40, 1 / 8, 300
    gen = np.random.default_rng(555)
    zs = sorted(gen.choice(g.vertex_count, size=3, replace=False).tolist())
    counts = {z: [] for z in zs}
    master = RandomStream(31337)
    for t in range(trials):
        _, trace = weak_random_partition(g, WeakParams(delta, r), master.split(t))
        for z in zs:
            counts[z].append(count_threateners(trace, z, gamma, u))
    bound = 3.0 * math.exp((2 * r + 1) * (1 + gamma / u))
    ok = True
    means = {}
    for z, vals in counts.items():
        arr = np.asarray(vals, dtype=np.float64)
        mean = arr.mean()
        stderr = arr.std(ddof=1) / math.sqrt(trials)
        means[z] = round(float(mean), 2)
        ok = ok and (mean <= bound + 3 * stderr)
    report(
        5,
        "expected threat count within 3 exp((2s+1)(1+gamma/u))",
        ok,
        f"(means {means} vs bound {bound:.0f}, {time.time() - t0:.1f}s)",
    )


def test_criterion_06_potential_drift_grid():
    t0 = time.time()
    configs = drift_grid_configs(RandomStream(90))
    assert len(configs) == 16
    failures = []
    for i, (state, h) in enumerate(configs):
        rep = drift_check(state, h, 100_000, RandomStream(91).split(i))
        if not rep.passed:
            failures.append((state.s, h, rep.mean, rep.bound))
    elapsed = time.time() - t0
    report(
        6,
        "potential drift above analytic bound on 16 configs",
        not failures and elapsed < 60.0,
        f"({elapsed:.2f}s < 60s, failures={failures})",
    )


def test_criterion_07_filtered_subsequence_exact():
    got = filter_subsequence([-0.4, -0.3, 0.7, 5, 6.9], 1.42)
    report(
        7,
        "filtered subsequence exact example",
        got == [-0.4, -0.3, 0.7, 1.42],
        f"(got {got})",
    )


def test_criterion_08_sampler_distribution():
    n = 100_000
    crit = stats.kstwobign.ppf(0.99) / math.sqrt(n)
    stats_seen = []
    ok = True
    for i, rate in enumerate((0.5, 2.0, 8.0, 32.0)):
        p = TexpParams(0.0, 1.0, rate)
        xs = texp_sample_array(p, RandomStream(808).split(i), n)
        stat = stats.kstest(xs, lambda y: np.vectorize(texp_cdf)(p, y)).statistic
        stats_seen.append(round(stat, 5))
        ok = ok and stat < crit and xs.min() >= 0.0 and xs.max() <= 1.0
    y = texp_sample_array(TexpParams(0.0, 1.0, 2.0), RandomStream(809), n)
    target = TexpParams(0.0, 1.0 / 8.0, 16.0)
    stat = stats.kstest(
        y / 8.0, lambda t: np.vectorize(texp_cdf)(target, t)
    ).statistic
    stats_seen.append(round(stat, 5))
    ok = ok and stat < crit
    report(
        8,
        "KS distribution tests at the 1% level",
        ok,
        f"(statistics {stats_seen} < critical {crit:.5f})",
    )


def test_criterion_09_genus_pipeline():
    results = []
    for size in ((4, 4), (8, 8)):
        g, _, rot = generate(
            GeneratorSpec("toroidal_grid", size), RandomStream(100)
        )
        results.append(genus_from_embedding(g, rot) == 1)
        cyc = find_reducing_cycle(g, rot, range(g.vertex_count))
        rest = sorted(set(range(g.vertex_count)) - set(cyc.order))
        results.append(genus_from_embedding(g, rot, rest) == 0)
    g8, _, rot8 = generate(GeneratorSpec("toroidal_grid", (8, 8)), RandomStream(100))
    scheme = Scheme("genus", delta=8.0, genus_bound=1, rotation=rot8)
    for seed in SEEDS:
        part, _ = run_scheme(g8, scheme, RandomStream(seed))
        part.validate(g8)
        worst = max(cluster_diameter(g8, c, "strong") for c in part.clusters)
        results.append(worst <= 8.0 + 1e-9)
    report(
        9,
        "genus pipeline (embedded genus, reducing cycles, partitions)",
        all(results),
        f"({len(results)} checks)",
    )


def _cli(args, cwd):
    res = subprocess.run(
        [sys.executable, "-m", "padpart", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, (args, res.stderr)
    return res.stdout


def test_criterion_10_cli_determinism(tmp_path):
    t0 = time.time()
    _cli(["generate", "--family", "grid", "--rows", "6", "--cols", "6",
          "--out", "g1"], tmp_path)
    _cli(["generate", "--family", "grid", "--rows", "6", "--cols", "6",
          "--out", "g2"], tmp_path)
    same = [
        (tmp_path / "g1.gr").read_bytes() == (tmp_path / "g2.gr").read_bytes()
    ]

    base = ["partition", "g1.gr", "--scheme", "weak", "--delta", "8",
            "--r", "4", "--seed", "3"]
    out_a = _cli(base + ["--output", "pa.csv", "--trace", "ta.json"], tmp_path)
    out_b = _cli(base + ["--output", "pb.csv", "--trace", "tb.json"], tmp_path)
    same.append(out_a == out_b)
    same.append((tmp_path / "pa.csv").read_bytes() == (tmp_path / "pb.csv").read_bytes())
    same.append((tmp_path / "ta.json").read_bytes() == (tmp_path / "tb.json").read_bytes())

    est = ["estimate", "g1.gr", "--scheme", "weak", "--delta", "8", "--r", "4",
           "--metric", "padding", "--gamma", "0.03", "--trials", "40",
           "--seed", "5"]
    _cli(est + ["--threads", "1", "--output", "e1.csv"], tmp_path)
    _cli(est + ["--threads", "8", "--output", "e8.csv"], tmp_path)
    _cli(est + ["--threads", "1", "--output", "e1b.csv"], tmp_path)
    same.append((tmp_path / "e1.csv").read_bytes() == (tmp_path / "e8.csv").read_bytes())
    same.append((tmp_path / "e1.csv").read_bytes() == (tmp_path / "e1b.csv").read_bytes())

    ver = ["verify", "g1.gr", "--scheme", "strong", "--delta", "8", "--r", "4",
           "--trials", "4", "--seed", "6"]
    same.append(_cli(ver, tmp_path) == _cli(ver, tmp_path))

    dr = ["drift", "--s", "2", "--h", "0.25", "--trials", "20000", "--seed", "7"]
    same.append(_cli(dr, tmp_path) == _cli(dr, tmp_path))

    report(
        10,
        "CLI byte-identical across reruns and thread counts",
        all(same),
        f"({len(same)} comparisons, {time.time() - t0:.1f}s)",
    )


def test_criterion_11_cut_fraction_trend():
    t0 = time.time()
    g, _, _ = generate(GeneratorSpec("grid", (30, 30)), RandomStream(100))
    trials = 500
    z = 1.959963984540054
    out = {}
    for delta in (16.0, 32.0):
        scheme = Scheme("weak", delta=delta, r=4)
        mean, stderr = estimate_cut_fraction(
            g, scheme, trials, RandomStream(int(delta)), threads=THREADS
        )
        out[delta] = (mean, mean - z * stderr, mean + z * stderr)
    lo16 = out[16.0][1]
    hi32 = out[32.0][2]
    ok = out[32.0][0] < out[16.0][0] and hi32 < lo16
    report(
        11,
        "cut fraction shrinks with delta (disjoint 95% CIs)",
        ok,
        f"(delta16 {out[16.0][0]:.4f}, delta32 {out[32.0][0]:.4f}, "
        f"{time.time() - t0:.1f}s)",
    )
