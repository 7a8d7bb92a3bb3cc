"""Clustering of a representation tensor through a Markov chain embedding.

Each frontal slice of the representation tensor yields a symmetric affinity
matrix; the per-slice random-walk transition matrices are averaged into one
chain, smoothed by a small teleport term, and the chain's stationary
distribution symmetrizes it into an operator whose leading eigenvectors
embed the samples for k-means.
"""

import numpy as np

__all__ = [
    "affinity_from_c",
    "transition_aggregate",
    "stationary_distribution",
    "markov_spectral_embed",
    "kmeans",
    "cluster_pipeline",
    "cluster_trials",
]


def affinity_from_c(c):
    """Symmetric nonnegative affinity per frontal slice: (|C_v| + |C_v|') / 2."""
    c = np.asarray(c)
    if c.ndim != 3 or c.shape[0] != c.shape[1]:
        raise ValueError("representation tensor must be n x n x k")
    out = []
    for v in range(c.shape[2]):
        a = np.abs(c[:, :, v])
        out.append(0.5 * (a + a.T))
    return out


def transition_aggregate(affinities, teleport=0.01):
    """Average the row-normalized affinities into one stochastic matrix.

    Rows with zero degree become uniform.  A teleport weight ``t`` mixes the
    result with the uniform matrix, ``(1 - t) P + t / n``, keeping the chain
    irreducible so its stationary distribution is unique and positive.
    """
    if not affinities:
        raise ValueError("need at least one affinity matrix")
    if not 0.0 <= teleport < 1.0:
        raise ValueError("teleport must lie in [0, 1)")
    n = affinities[0].shape[0]
    p = np.zeros((n, n))
    for wv in affinities:
        wv = np.asarray(wv, dtype=np.float64)
        if wv.shape != (n, n):
            raise ValueError("affinity matrices must share one shape")
        deg = wv.sum(axis=1)
        rows = np.where(deg[:, None] > 0.0, wv / np.where(deg, deg, 1.0)[:, None], 1.0 / n)
        p += rows
    p /= len(affinities)
    if teleport > 0.0:
        p = (1.0 - teleport) * p + teleport / n
    return p


def stationary_distribution(p, tol=1e-10, max_steps=10_000):
    """Stationary row vector of a stochastic matrix by power iteration.

    Iterates ``pi <- pi P`` from the uniform vector until
    ``||pi P - pi||_1 <= tol``; raises after ``max_steps`` without
    convergence.
    """
    p = np.asarray(p, dtype=np.float64)
    n = p.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_steps):
        nxt = pi @ p
        nxt /= nxt.sum()
        if np.abs(nxt - pi).sum() <= tol:
            return nxt
        pi = nxt
    raise RuntimeError("stationary distribution did not converge in %d steps" % max_steps)


def markov_spectral_embed(p, m, row_normalize=True):
    """Embed the chain's states by the top eigenvectors of its additive reversibilization.

    With stationary distribution ``pi`` and ``D = diag(sqrt(pi))`` the
    operator ``(D P D^-1 + (D P D^-1)') / 2`` is symmetric; its ``m``
    leading eigenvectors become the embedding rows, each scaled to unit
    norm when ``row_normalize`` is set.
    """
    p = np.asarray(p, dtype=np.float64)
    n = p.shape[0]
    if not 1 <= m <= n:
        raise ValueError("embedding dimension must lie in 1..%d" % n)
    pi = stationary_distribution(p)
    root = np.sqrt(pi)
    s = (root[:, None] / root[None, :]) * p
    sym = 0.5 * (s + s.T)
    _, vecs = np.linalg.eigh(sym)
    emb = vecs[:, -m:][:, ::-1].copy()
    if row_normalize:
        norms = np.linalg.norm(emb, axis=1)
        emb /= np.where(norms > 0.0, norms, 1.0)[:, None]
    return emb


def _kmeans_pp(points, c, rng):
    n = points.shape[0]
    centers = np.empty((c, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, c):
        total = d2.sum()
        if total > 0.0:
            probs = d2 / total
            idx = rng.choice(n, p=probs)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _lloyd(points, centers, max_iter):
    """Lloyd iterations; returns labels, final WCSS and the WCSS history."""
    n, c = points.shape[0], centers.shape[0]
    labels = np.full(n, -1)
    history = []
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        closest = d2[np.arange(n), new_labels]
        for j in range(c):
            mask = new_labels == j
            if mask.any():
                continue
            # revive an empty cluster with the point farthest from its center
            far = closest.argmax()
            centers[j] = points[far]
            new_labels[far] = j
            d2[:, j] = ((points - centers[j]) ** 2).sum(axis=1)
            closest = d2[np.arange(n), new_labels]
        history.append(float(closest.sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(c):
            centers[j] = points[labels == j].mean(axis=0)
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    wcss = float(d2[np.arange(n), labels].sum())
    history.append(wcss)
    return labels, wcss, history


def kmeans(points, c, restarts=1, seed=0, max_iter=300):
    """Best-of-``restarts`` k-means with plus-plus seeding.

    Each restart draws from its own stream derived from ``seed``; the
    restart with the lowest within-cluster sum of squares wins, earlier
    restarts winning ties.  Deterministic for a fixed seed.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a matrix")
    n = points.shape[0]
    if not 1 <= c <= n:
        raise ValueError("cluster count must lie in 1..%d" % n)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        centers = _kmeans_pp(points, c, rng)
        labels, wcss, _ = _lloyd(points, centers, max_iter)
        if best is None or wcss < best[0]:
            best = (wcss, labels)
    return best[1]


def cluster_pipeline(c_tensor, n_clusters, teleport=0.01, restarts=20, seed=0):
    """Affinity, chain aggregation, embedding and k-means in one call."""
    p = transition_aggregate(affinity_from_c(c_tensor), teleport=teleport)
    emb = markov_spectral_embed(p, n_clusters)
    return kmeans(emb, n_clusters, restarts=restarts, seed=seed)


def cluster_trials(c_tensor, n_clusters, trials=20, teleport=0.01, seed=0):
    """Independent single-start k-means runs on one shared embedding.

    Returns a list of ``trials`` label vectors, one per run, for spread
    reporting across k-means initializations.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = transition_aggregate(affinity_from_c(c_tensor), teleport=teleport)
    emb = markov_spectral_embed(p, n_clusters)
    trial_seeds = np.random.SeedSequence(seed).generate_state(trials)
    return [
        kmeans(emb, n_clusters, restarts=1, seed=int(s)) for s in trial_seeds
    ]
