"""Release checklist for the whole pipeline.

Every test prints one ``check NN ...: PASS/FAIL`` line (visible with
``pytest -s``) and asserts the same condition, so a red run names the
failing item directly.  Checks 4, 5 and 6 share one set of solver runs
on the standard synthetic family through a module fixture.
"""

import itertools
import json
import os
import time

import numpy as np
import pytest

from mvtclust.construct import build_tensor, synth_generate
from mvtclust.io import run_cluster, run_synth
from mvtclust.metrics import accuracy, ari, nmi, pair_scores
from mvtclust.prox import prox_f1, prox_tnn
from mvtclust.solver import SolverConfig, solve
from mvtclust.spectral import cluster_pipeline
from mvtclust.tensor3 import (
    fft_mode3,
    identity_tensor,
    norm_f1,
    norm_fro,
    norm_tnn,
    tproduct,
    tproduct_reference,
)

FAMILY = dict(per_cluster=20, view_dims=(30, 25), subspace_dim=3, noise_sigma=0.01)
CLUSTERS = 3


def announce(num, name, ok, detail):
    print("check %02d %s: %s (%s)" % (num, name, "PASS" if ok else "FAIL", detail))
    return ok


@pytest.fixture(scope="module")
def family_runs():
    runs = {}
    for seed in range(10):
        data = synth_generate(CLUSTERS, seed=seed, **FAMILY)
        x = build_tensor(data)
        c, trace = solve(x, SolverConfig())
        runs[seed] = (data, x, c, trace)
    return runs


def test_01_tensor_product_equivalence():
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        n1, n2, m = rng.integers(2, 9, size=3)
        n3 = int(rng.integers(2, 7))
        a = rng.standard_normal((n1, m, n3))
        b = rng.standard_normal((m, n2, n3))
        fast = tproduct(a, b)
        slow = tproduct_reference(a, b)
        worst = max(worst, norm_fro(fast - slow) / norm_fro(slow))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5.0
    assert announce(
        1,
        "tensor-product equivalence",
        ok,
        "max rel err %.2e over 100 instances in %.2fs" % (worst, elapsed),
    )


def test_02_transform_energy_and_identity_norm():
    rng = np.random.default_rng(12)
    worst_energy = 0.0
    worst_identity = 0.0
    for n, n3 in ((2, 3), (4, 5)):
        a = rng.standard_normal((n, n, n3))
        lhs = norm_fro(a) ** 2
        rhs = np.linalg.norm(fft_mode3(a)) ** 2 / n3
        worst_energy = max(worst_energy, abs(lhs - rhs) / max(1.0, lhs))
        tnn = norm_tnn(identity_tensor(n, n3))
        worst_identity = max(worst_identity, abs(tnn - n * n3))
    ok = worst_energy <= 1e-10 and worst_identity <= 1e-9
    assert announce(
        2,
        "transform energy and identity norm",
        ok,
        "energy err %.2e, identity err %.2e" % (worst_energy, worst_identity),
    )


def _tnn_objective(z, a, tau):
    return tau * norm_tnn(z) + 0.5 * a.shape[2] * norm_fro(z - a) ** 2


def _f1_objective(y, a, tau):
    return tau * norm_f1(y) + 0.5 * norm_fro(y - a) ** 2


def test_03_prox_sampled_optimality():
    rng = np.random.default_rng(13)
    worst = np.inf
    for _ in range(50):
        shape = tuple(rng.integers(2, 6, size=3))
        a = rng.standard_normal(shape)
        tau = float(rng.uniform(0.05, 0.5))
        for prox, objective in ((prox_tnn, _tnn_objective), (prox_f1, _f1_objective)):
            out = prox(a, tau)
            base = objective(out, a, tau)
            worst = min(worst, objective(a, a, tau) - base)
            for _ in range(200):
                delta = rng.standard_normal(shape)
                delta *= rng.uniform(1e-3, 0.3) / norm_fro(delta)
                worst = min(worst, objective(out + delta, a, tau) - base)
    ok = worst >= 0.0
    assert announce(
        3, "prox sampled optimality", ok, "worst margin %.2e" % worst
    )


def test_04_solver_convergence(family_runs):
    _, _, _, trace = family_runs[0]
    final = trace.residuals[-1]
    worst = max(final.values())
    ok = (
        trace.converged
        and trace.iterations <= 200
        and worst <= 1e-6
        and trace.seconds < 60.0
    )
    assert announce(
        4,
        "solver convergence",
        ok,
        "status %s, %d iterations, worst residual %.2e, %.2fs"
        % (trace.status, trace.iterations, worst, trace.seconds),
    )


def test_05_clustering_quality_across_seeds(family_runs):
    accs = []
    nmis = []
    for seed in range(10):
        data, _, c, _ = family_runs[seed]
        labels = cluster_pipeline(c, CLUSTERS, restarts=20, seed=seed)
        accs.append(accuracy(data.labels, labels))
        nmis.append(nmi(data.labels, labels))
    acc_mean = float(np.mean(accs))
    nmi_mean = float(np.mean(nmis))
    ok = acc_mean >= 0.95 and nmi_mean >= 0.90
    assert announce(
        5,
        "clustering quality across 10 seeds",
        ok,
        "acc mean %.4f, nmi mean %.4f" % (acc_mean, nmi_mean),
    )


def test_05b_external_dataset_smoke(tmp_path):
    manifest = os.environ.get("MVTCLUST_UCI_MANIFEST")
    if not manifest:
        pytest.skip("set MVTCLUST_UCI_MANIFEST to a manifest path to enable")
    report = run_cluster(manifest, out_path=tmp_path / "uci.json")
    acc = report.get("metrics", {}).get("acc", {}).get("mean")
    if acc is None:
        print("check 05b external dataset smoke: ran without labels, no score")
        return
    flag = "  [LOW: below 0.75]" if acc < 0.75 else ""
    print("check 05b external dataset smoke: acc mean %.4f%s" % (acc, flag))


def _max_slice_gap(c):
    k = c.shape[2]
    gaps = [
        np.linalg.norm(c[:, :, i] - c[:, :, j])
        for i, j in itertools.combinations(range(k), 2)
    ]
    return max(gaps)


def test_06_consensus_weight_tightens_views(family_runs):
    _, x, _, _ = family_runs[0]
    gaps = []
    for beta in (0.0, 1.1, 100.0):
        c, _ = solve(x, SolverConfig(beta=beta))
        gaps.append(_max_slice_gap(c))
    ok = all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    assert announce(
        6,
        "consensus weight tightens views",
        ok,
        "max inter-slice gap %s" % ", ".join("%.3f" % g for g in gaps),
    )


def _brute_pairs(truth, pred):
    n = len(truth)
    same_both = same_truth = same_pred = 0
    for i in range(n):
        for j in range(i + 1, n):
            st = truth[i] == truth[j]
            sp = pred[i] == pred[j]
            same_truth += st
            same_pred += sp
            same_both += st and sp
    precision = same_both / same_pred if same_pred else 0.0
    recall = same_both / same_truth if same_truth else 0.0
    if same_truth == 0 and same_pred == 0:
        f = 1.0
    elif precision + recall == 0.0:
        f = 0.0
    else:
        f = 2 * precision * recall / (precision + recall)
    total = n * (n - 1) // 2
    expected = same_truth * same_pred / total
    maximum = 0.5 * (same_truth + same_pred)
    adj = 1.0 if maximum == expected else (same_both - expected) / (maximum - expected)
    return (precision, recall, f), adj


def _brute_accuracy(truth, pred):
    t_vals = sorted(set(truth))
    p_vals = sorted(set(pred))
    m = max(len(t_vals), len(p_vals))
    counts = np.zeros((m, m), dtype=int)
    for t, p in zip(truth, pred):
        counts[t_vals.index(t), p_vals.index(p)] += 1
    best = max(
        sum(counts[perm[j], j] for j in range(m))
        for perm in itertools.permutations(range(m))
    )
    return best / len(truth)


def test_07_metric_oracles():
    rng = np.random.default_rng(17)
    worst_pair = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        truth = rng.integers(0, rng.integers(1, 5) + 1, size=n).tolist()
        pred = rng.integers(0, rng.integers(1, 5) + 1, size=n).tolist()
        want_pairs, want_ari = _brute_pairs(truth, pred)
        for g, w in zip(pair_scores(truth, pred), want_pairs):
            worst_pair = max(worst_pair, abs(g - w))
        worst_pair = max(worst_pair, abs(ari(truth, pred) - want_ari))
    worst_acc = 0.0
    for _ in range(60):
        n = int(rng.integers(2, 13))
        c = int(rng.integers(1, 6))
        truth = rng.integers(0, c, size=n).tolist()
        pred = rng.integers(0, c, size=n).tolist()
        worst_acc = max(
            worst_acc, abs(accuracy(truth, pred) - _brute_accuracy(truth, pred))
        )
    ok = worst_pair <= 1e-12 and worst_acc == 0.0
    assert announce(
        7,
        "metric oracles",
        ok,
        "pair/ari dev %.2e, accuracy dev %.2e" % (worst_pair, worst_acc),
    )


def test_08_report_determinism(tmp_path):
    manifest = run_synth(
        clusters=CLUSTERS, per_cluster=20, view_dims=(30, 25), subspace_dim=3,
        noise=0.01, seed=0, out_dir=tmp_path,
    )
    (tmp_path / "run1").mkdir()
    (tmp_path / "run2").mkdir()
    run_cluster(manifest, overrides={"seed": 7}, out_path=tmp_path / "run1" / "r.json")
    run_cluster(manifest, overrides={"seed": 7}, out_path=tmp_path / "run2" / "r.json")
    a = json.loads((tmp_path / "run1" / "r.json").read_text())
    b = json.loads((tmp_path / "run2" / "r.json").read_text())
    a.pop("timings")
    b.pop("timings")
    ok = json.dumps(a, indent=2).encode() == json.dumps(b, indent=2).encode()
    assert announce(
        8, "report determinism", ok, "byte-identical after dropping timings"
    )


def test_09_scaling_smoke(tmp_path):
    times = {}
    statuses = {}
    for per in (40, 80):
        out = tmp_path / ("n%d" % (3 * per))
        manifest = run_synth(
            clusters=CLUSTERS, per_cluster=per, view_dims=(30, 25),
            subspace_dim=3, noise=0.01, seed=0, out_dir=out,
        )
        report = run_cluster(manifest, out_path=out / "r.json")
        times[3 * per] = report["timings"]["solve"]
        statuses[3 * per] = report["status"]
    factor = times[240] / times[120]
    ok = times[240] > times[120] and statuses[240] in ("ok", "NOT_CONVERGED")
    assert announce(
        9,
        "scaling smoke",
        ok,
        "solve %.2fs at n=120, %.2fs at n=240, factor %.2f, status %s"
        % (times[120], times[240], factor, statuses[240]),
    )
