"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import csv
import itertools
import time

import numpy as np

import oracles
from rdoskit.baselines import lof_scores, score
from rdoskit.cli import main
from rdoskit.core import Dataset, minmax_normalize
from rdoskit.datagen import gen_cosine, gen_two_gaussians
from rdoskit.density import KernelSpec
from rdoskit.evaluation import roc_auc
from rdoskit.neighbors import build_knn_graph, build_knn_graph_bruteforce, build_knn_graph_kdtree
from rdoskit.theory import BoundInput, sample_ball, validate_theorem1, validate_theorem2


def rdos_pipeline(data, k=21, h=0.01):
    data = minmax_normalize(data)
    return score(data, build_knn_graph(data, k), "rdos", KernelSpec(h, data.dim))


def test_two_gaussians_outliers_on_top(criterion):
    data = gen_two_gaussians()
    t0 = time.perf_counter()
    report = rdos_pipeline(data)
    elapsed = time.perf_counter() - t0
    out, inl = report.scores[data.labels], report.scores[~data.labels]
    top3 = sorted(report.order[:3].tolist())
    ratio = out.min() / inl.max()
    ok = top3 == [200, 201, 202] and ratio >= 2.0 and elapsed < 1.0
    criterion("1 two_gaussians", ok, f"top3={top3} ratio={ratio:.3f} time={elapsed:.3f}s")


def test_cosine_outliers_on_top(criterion):
    data = gen_cosine()
    t0 = time.perf_counter()
    report = rdos_pipeline(data)
    auc = roc_auc(report.scores, data.labels).auc
    elapsed = time.perf_counter() - t0
    top4 = sorted(report.order[:4].tolist())
    ok = top4 == [400, 401, 402, 403] and auc == 1.0 and elapsed < 1.0
    criterion("2 cosine", ok, f"top4={top4} auc={auc} time={elapsed:.3f}s")


def test_theorem1_desk_scale(criterion):
    t0 = time.perf_counter()
    means = [validate_theorem1(5000, 21, seed=s).mean_rdos for s in range(10)]
    elapsed = time.perf_counter() - t0
    good = sum(0.9 <= m <= 1.1 for m in means)
    ok = good >= 9 and elapsed < 30.0
    criterion("3 theorem1", ok, f"in_range={good}/10 min={min(means):.4f} max={max(means):.4f} time={elapsed:.1f}s")


def test_theorem2_grid(criterion):
    grid = itertools.product([1.5, 2.0, 3.0], [10, 30], [1, 2], [0.1, 0.5], [0.5, 1.0])
    t0 = time.perf_counter()
    bad = []
    for i, (gamma, s, d, h, r) in enumerate(grid):
        res = validate_theorem2(10_000, BoundInput(gamma, s, d, h, r), seed=i)
        if res.empirical_rate > res.bound:
            bad.append((gamma, s, d, h, r, res.empirical_rate, res.bound))
    elapsed = time.perf_counter() - t0
    ok = not bad and i == 47 and elapsed < 120.0
    criterion("4 theorem2", ok, f"cells={i + 1} violations={bad} time={elapsed:.1f}s")


def test_oracle_equivalence(criterion):
    rng = np.random.default_rng(2024)
    worst, graph_mismatch = 0.0, 0
    for _ in range(100):
        n = int(rng.integers(7, 31))
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, 6))
        h = float(rng.choice([0.05, 0.1, 0.3]))
        x = rng.random((n, d))
        data = Dataset(x)
        kd, bf = build_knn_graph_kdtree(data, k), build_knn_graph_bruteforce(data, k)
        if not (np.array_equal(kd.out_edges, bf.out_edges) and np.array_equal(kd.out_dist, bf.out_dist)):
            graph_mismatch += 1
        got = score(data, kd, "rdos", KernelSpec(h, d)).scores
        want = np.array(oracles.rdos(x.tolist(), k, h)[0])
        worst = max(worst, float(np.max(np.abs(got - want) / np.abs(want))))
    ok = worst <= 1e-9 and graph_mismatch == 0
    criterion("5 oracle", ok, f"max_rel_err={worst:.2e} graph_mismatches={graph_mismatch}")


def test_roc_matches_mann_whitney(criterion):
    rng = np.random.default_rng(7)
    worst, with_ties = 0.0, 0
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        scores = rng.integers(0, 8, n).astype(float) if rng.random() < 0.5 else rng.random(n)
        labels = rng.random(n) < 0.3
        labels[0], labels[1] = True, False
        with_ties += len(np.unique(scores)) < n
        err = abs(roc_auc(scores, labels).auc - float(oracles.mann_whitney_auc(scores.tolist(), labels.tolist())))
        worst = max(worst, err)
    ok = worst <= 1e-12 and with_ties > 0
    criterion("6 roc", ok, f"max_abs_err={worst:.2e} vectors_with_ties={with_ties}")


def test_baseline_sanity(criterion):
    misses = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        data = minmax_normalize(Dataset(np.vstack([sample_ball(rng, (50,), 2, 1.0), [[20.0, 0.0]]])))
        g = build_knn_graph(data, 10)
        for method in ("odin", "lof", "inflo", "mnn"):
            if score(data, g, method).order[0] != 50:
                misses.append((seed, method))
    uniform = Dataset(np.random.default_rng(99).random((2000, 2)))
    lof = lof_scores(uniform, build_knn_graph(uniform, 10))
    frac = float(np.mean((lof >= 0.8) & (lof <= 1.3)))
    ok = not misses and frac >= 0.95
    criterion("7 baselines", ok, f"far_outlier_misses={misses} lof_uniform_in_band={frac:.3f}")


def test_sweep_on_table_shaped_file(tmp_path, criterion):
    rng = np.random.default_rng(5)
    n, d, n_out = 357, 30, 10
    x = rng.normal(size=(n, d))
    x[-n_out:] += rng.choice([-6.0, 6.0], size=(n_out, d))
    path = tmp_path / "table_like.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{j}" for j in range(d)] + ["label"])
        for i, row in enumerate(x):
            w.writerow([repr(float(v)) for v in row] + [int(i >= n - n_out)])
    out = tmp_path / "sweep.csv"
    code = main(["sweep", str(path), "--out", str(out)])
    with out.open(newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    pairs = [(int(r[0]), r[1]) for r in rows]
    expected = [(k, m) for k in range(3, 32, 2) for m in ("rdos", "odin", "lof", "inflo", "mnn")]
    aucs_ok = all(0.0 <= float(r[2]) <= 1.0 for r in rows)
    ok = code == 0 and pairs == expected and aucs_ok
    criterion("8 sweep protocol", ok, f"exit={code} rows={len(rows)} expected={len(expected)}")
