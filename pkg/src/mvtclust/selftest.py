"""Built-in oracle checks runnable from the installed package.

Each suite re-derives a result along a second, independent route and
compares: the fast t-product against its block-circulant definition, the
proximal operators against sampled perturbations of their objectives, and
the pair-counting metrics against brute-force pair enumeration.  The
suites are deliberately small so a full run stays under a minute.
"""

import time

import numpy as np

from . import tensor3
from .metrics import ari, pair_scores
from .prox import prox_f1, prox_tnn


def _suite_tproduct(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 25
    for _ in range(count):
        n1, n2, n3 = rng.integers(2, 7, size=3)
        m = int(rng.integers(2, 7))
        a = rng.standard_normal((n1, m, n3))
        b = rng.standard_normal((m, n2, n3))
        fast = tensor3.tproduct(a, b)
        slow = tensor3.tproduct_reference(a, b)
        denom = max(1.0, tensor3.norm_fro(slow))
        worst = max(worst, tensor3.norm_fro(fast - slow) / denom)
    ok = worst <= 1e-10
    return ok, "max relative error %.2e over %d instances" % (worst, count)


def _tnn_objective(z, a, tau):
    n3 = a.shape[2]
    return tau * tensor3.norm_tnn(z) + 0.5 * n3 * tensor3.norm_fro(z - a) ** 2


def _f1_objective(y, a, tau):
    return tau * tensor3.norm_f1(y) + 0.5 * tensor3.norm_fro(y - a) ** 2


def _suite_prox(seed):
    rng = np.random.default_rng(seed)
    worst_margin = np.inf
    for _ in range(10):
        shape = tuple(rng.integers(2, 6, size=3))
        a = rng.standard_normal(shape)
        tau = float(rng.uniform(0.05, 0.5))
        for prox, objective in ((prox_tnn, _tnn_objective), (prox_f1, _f1_objective)):
            out = prox(a, tau)
            base = objective(out, a, tau)
            worst_margin = min(worst_margin, objective(a, a, tau) - base)
            for _ in range(50):
                delta = rng.standard_normal(shape)
                delta *= rng.uniform(1e-3, 0.3) / tensor3.norm_fro(delta)
                worst_margin = min(
                    worst_margin, objective(out + delta, a, tau) - base
                )
    ok = worst_margin >= -1e-12
    return ok, "worst perturbation margin %.2e" % worst_margin


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


def _suite_metrics(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 60
    for _ in range(count):
        n = int(rng.integers(2, 13))
        truth = rng.integers(0, rng.integers(1, 5) + 1, size=n).tolist()
        pred = rng.integers(0, rng.integers(1, 5) + 1, size=n).tolist()
        want_pairs, want_ari = _brute_pairs(truth, pred)
        got_pairs = pair_scores(truth, pred)
        for g, w in zip(got_pairs, want_pairs):
            worst = max(worst, abs(g - w))
        worst = max(worst, abs(ari(truth, pred) - want_ari))
    ok = worst <= 1e-12
    return ok, "max deviation %.2e over %d label pairs" % (worst, count)


def run_selftest(seed=0):
    """Run every suite and collect outcomes.

    Returns
    -------
    dict
        ``{"ok": bool, "suites": [{"name", "ok", "seconds", "detail"}, ...]}``
    """
    suites = [
        ("t-product", _suite_tproduct),
        ("prox", _suite_prox),
        ("metrics", _suite_metrics),
    ]
    results = []
    for name, fn in suites:
        t0 = time.perf_counter()
        ok, detail = fn(seed)
        results.append(
            {
                "name": name,
                "ok": bool(ok),
                "seconds": time.perf_counter() - t0,
                "detail": detail,
            }
        )
    return {"ok": all(r["ok"] for r in results), "suites": results}
