import numpy as np
import pytest

from mvtclust.metrics import ari
from mvtclust.spectral import (
    _lloyd,
    affinity_from_c,
    cluster_pipeline,
    cluster_trials,
    kmeans,
    markov_spectral_embed,
    stationary_distribution,
    transition_aggregate,
)


def block_affinity_tensor(sizes, strength=1.0, seed=0):
    """Representation tensor with dense within-block entries, one view."""
    rng = np.random.default_rng(seed)
    n = sum(sizes)
    c = np.zeros((n, n, 1))
    start = 0
    for s in sizes:
        block = strength * (0.5 + rng.random((s, s)))
        c[start : start + s, start : start + s, 0] = block
        start += s
    return c


def test_affinity_is_symmetric_nonnegative():
    rng = np.random.default_rng(1)
    c = rng.standard_normal((6, 6, 3))
    for w in affinity_from_c(c):
        assert np.allclose(w, w.T)
        assert (w >= 0.0).all()


def test_affinity_rejects_non_square():
    with pytest.raises(ValueError):
        affinity_from_c(np.zeros((3, 4, 2)))


def test_transition_rows_sum_to_one_with_zero_degree_rows():
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 1.0  # rows 2 and 3 have no mass at all
    p = transition_aggregate([w], teleport=0.0)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(p[2], 0.25)
    assert np.allclose(p[3], 0.25)


def test_transition_average_of_identical_views_is_single_view():
    rng = np.random.default_rng(2)
    w = rng.random((5, 5))
    w = 0.5 * (w + w.T)
    single = transition_aggregate([w], teleport=0.01)
    triple = transition_aggregate([w, w, w], teleport=0.01)
    assert np.allclose(single, triple, atol=1e-12)


def test_transition_teleport_bounds():
    w = np.eye(3)
    with pytest.raises(ValueError):
        transition_aggregate([w], teleport=1.0)
    with pytest.raises(ValueError):
        transition_aggregate([w], teleport=-0.1)
    with pytest.raises(ValueError):
        transition_aggregate([], teleport=0.0)


def test_stationary_distribution_is_stationary():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = rng.random((6, 6)) + 0.05
        p /= p.sum(axis=1, keepdims=True)
        pi = stationary_distribution(p)
        assert np.abs(pi @ p - pi).sum() <= 1e-10
        assert pi.sum() == pytest.approx(1.0)
        assert (pi > 0).all()


def test_stationary_distribution_identity_chain_is_uniform():
    pi = stationary_distribution(np.eye(5))
    assert np.allclose(pi, 0.2)


def test_markov_embed_identity_chain_gives_orthonormal_columns():
    emb = markov_spectral_embed(np.eye(6), 3, row_normalize=False)
    assert emb.shape == (6, 3)
    assert np.allclose(emb.T @ emb, np.eye(3), atol=1e-10)


def test_markov_embed_row_normalization():
    rng = np.random.default_rng(4)
    p = rng.random((6, 6)) + 0.05
    p /= p.sum(axis=1, keepdims=True)
    emb = markov_spectral_embed(p, 2)
    assert np.allclose(np.linalg.norm(emb, axis=1), 1.0, atol=1e-12)


def test_markov_embed_dimension_bounds():
    with pytest.raises(ValueError):
        markov_spectral_embed(np.eye(4), 0)
    with pytest.raises(ValueError):
        markov_spectral_embed(np.eye(4), 5)


def test_lloyd_wcss_never_increases():
    rng = np.random.default_rng(5)
    points = rng.standard_normal((40, 3))
    centers = points[rng.choice(40, size=4, replace=False)].copy()
    _, _, history = _lloyd(points, centers, max_iter=50)
    for a, b in zip(history, history[1:]):
        assert b <= a + 1e-9


def test_lloyd_revives_empty_clusters():
    rng = np.random.default_rng(6)
    blob1 = rng.standard_normal((10, 2))
    blob2 = rng.standard_normal((10, 2)) + 50.0
    points = np.vstack([blob1, blob2])
    # the third center is so remote that nothing is assigned to it at first
    centers = np.array([[0.0, 0.0], [50.0, 50.0], [1e6, 1e6]])
    labels, _, history = _lloyd(points, centers, max_iter=50)
    assert len(np.unique(labels)) == 3
    for a, b in zip(history, history[1:]):
        assert b <= a + 1e-9


def test_kmeans_recovers_separated_blobs():
    rng = np.random.default_rng(7)
    blobs = [rng.standard_normal((12, 2)) + off for off in ((0, 0), (40, 0), (0, 40))]
    points = np.vstack(blobs)
    truth = np.repeat([0, 1, 2], 12)
    labels = kmeans(points, 3, restarts=5, seed=0)
    assert ari(truth, labels) == 1.0


def test_kmeans_deterministic_and_tie_break():
    rng = np.random.default_rng(8)
    points = rng.standard_normal((30, 2))
    a = kmeans(points, 4, restarts=6, seed=3)
    b = kmeans(points, 4, restarts=6, seed=3)
    assert np.array_equal(a, b)


def test_kmeans_validates_arguments():
    pts = np.zeros((5, 2))
    with pytest.raises(ValueError):
        kmeans(pts, 0)
    with pytest.raises(ValueError):
        kmeans(pts, 6)
    with pytest.raises(ValueError):
        kmeans(pts, 2, restarts=0)
    with pytest.raises(ValueError):
        kmeans(np.zeros(5), 2)


def test_pipeline_recovers_block_structure():
    c = block_affinity_tensor([8, 8, 8], seed=9)
    labels = cluster_pipeline(c, 3, seed=0)
    truth = np.repeat([0, 1, 2], 8)
    assert ari(truth, labels) == 1.0


def test_pipeline_scale_invariant():
    c = block_affinity_tensor([6, 6], seed=10)
    a = cluster_pipeline(c, 2, seed=1)
    b = cluster_pipeline(5.0 * c, 2, seed=1)
    assert np.array_equal(a, b)


def test_pipeline_permutation_equivariant():
    c = block_affinity_tensor([7, 7], seed=11)
    rng = np.random.default_rng(12)
    perm = rng.permutation(14)
    c_perm = c[perm][:, perm, :]
    base = cluster_pipeline(c, 2, seed=2)
    permuted = cluster_pipeline(c_perm, 2, seed=2)
    # same partition after undoing the permutation, up to label names
    assert ari(base[perm], permuted) == 1.0


def test_cluster_trials_shape_and_determinism():
    c = block_affinity_tensor([5, 5], seed=13)
    runs1 = cluster_trials(c, 2, trials=6, seed=4)
    runs2 = cluster_trials(c, 2, trials=6, seed=4)
    assert len(runs1) == 6
    for a, b in zip(runs1, runs2):
        assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        cluster_trials(c, 2, trials=0)
