"""External clustering quality measures.

All functions take a ground-truth label vector and a predicted label vector
of equal length.  Label values are arbitrary integers; only the induced
partitions matter.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "accuracy",
    "nmi",
    "pair_scores",
    "ari",
    "evaluate_trials",
    "MetricReport",
]


def _check_labels(truth, pred):
    truth = np.asarray(truth).ravel()
    pred = np.asarray(pred).ravel()
    if truth.size == 0:
        raise ValueError("label vectors must be non-empty")
    if truth.shape != pred.shape:
        raise ValueError(
            "label vectors disagree in length: %d vs %d" % (truth.size, pred.size)
        )
    return truth, pred


def _contingency(truth, pred):
    _, ti = np.unique(truth, return_inverse=True)
    _, pi = np.unique(pred, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(table, (ti, pi), 1)
    return table


def accuracy(truth, pred):
    """Fraction of samples matched under the best one-to-one label mapping."""
    truth, pred = _check_labels(truth, pred)
    table = _contingency(truth, pred)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum()) / truth.size


def nmi(truth, pred):
    """Mutual information normalized by the geometric mean of the entropies.

    Natural logarithms throughout.  Two single-cluster partitions score 1;
    if exactly one side has zero entropy the score is 0.
    """
    truth, pred = _check_labels(truth, pred)
    table = _contingency(truth, pred).astype(np.float64)
    n = truth.size
    joint = table / n
    pt = joint.sum(axis=1)
    pp = joint.sum(axis=0)
    ht = -np.sum(pt[pt > 0] * np.log(pt[pt > 0]))
    hp = -np.sum(pp[pp > 0] * np.log(pp[pp > 0]))
    if ht == 0.0 and hp == 0.0:
        return 1.0
    if ht == 0.0 or hp == 0.0:
        return 0.0
    mask = joint > 0
    outer = pt[:, None] * pp[None, :]
    info = np.sum(joint[mask] * np.log(joint[mask] / outer[mask]))
    return float(info / np.sqrt(ht * hp))


def _pair_counts(truth, pred):
    table = _contingency(truth, pred)
    same_both = (table * (table - 1) // 2).sum()
    t_sizes = table.sum(axis=1)
    p_sizes = table.sum(axis=0)
    same_truth = (t_sizes * (t_sizes - 1) // 2).sum()
    same_pred = (p_sizes * (p_sizes - 1) // 2).sum()
    return int(same_both), int(same_truth), int(same_pred)


def pair_scores(truth, pred):
    """Pairwise precision, recall and F measure over sample pairs.

    A pair counts as detected when the prediction puts it in one cluster
    and as relevant when the truth does.  Ratios with zero denominator are
    0, except that two all-singleton partitions agree perfectly and score
    F = 1.
    """
    truth, pred = _check_labels(truth, pred)
    if truth.size < 2:
        raise ValueError("pair scores need at least two samples")
    same_both, same_truth, same_pred = _pair_counts(truth, pred)
    precision = same_both / same_pred if same_pred else 0.0
    recall = same_both / same_truth if same_truth else 0.0
    if same_truth == 0 and same_pred == 0:
        f = 1.0
    elif precision + recall == 0.0:
        f = 0.0
    else:
        f = 2.0 * precision * recall / (precision + recall)
    return float(precision), float(recall), float(f)


def ari(truth, pred):
    """Adjusted Rand index: pair agreement corrected for chance.

    1 for identical partitions, about 0 for independent ones; the two
    degenerate zero-denominator cases (both sides single-cluster, both
    sides all-singleton) are identical partitions and score 1.
    """
    truth, pred = _check_labels(truth, pred)
    if truth.size < 2:
        raise ValueError("the adjusted Rand index needs at least two samples")
    same_both, same_truth, same_pred = _pair_counts(truth, pred)
    total = truth.size * (truth.size - 1) // 2
    expected = same_truth * same_pred / total
    maximum = 0.5 * (same_truth + same_pred)
    if maximum == expected:
        return 1.0
    return float((same_both - expected) / (maximum - expected))


@dataclass
class MetricReport:
    """Mean and population standard deviation of each measure across trials."""

    acc: tuple
    nmi: tuple
    precision: tuple
    recall: tuple
    f_score: tuple
    ari: tuple
    trials: int

    def as_dict(self):
        out = {}
        for key in ("acc", "nmi", "precision", "recall", "f_score", "ari"):
            mean, std = getattr(self, key)
            out[key] = {"mean": mean, "std": std}
        out["trials"] = self.trials
        return out


def evaluate_trials(truth, predictions):
    """Score every predicted labelling against the truth and aggregate.

    Returns a :class:`MetricReport` whose spreads are population standard
    deviations across the trials.
    """
    if not predictions:
        raise ValueError("need at least one predicted labelling")
    rows = []
    for pred in predictions:
        p, r, f = pair_scores(truth, pred)
        rows.append((accuracy(truth, pred), nmi(truth, pred), p, r, f, ari(truth, pred)))
    arr = np.asarray(rows)
    stats = [(float(m), float(s)) for m, s in zip(arr.mean(axis=0), arr.std(axis=0))]
    return MetricReport(*stats, trials=len(predictions))
