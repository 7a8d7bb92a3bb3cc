"""Scikit-learn style front end for the full clustering pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array

from .construct import MultiViewDataset, build_tensor
from .solver import SolverConfig, solve
from .spectral import cluster_pipeline


class MultiViewTensorClustering(ClusterMixin, BaseEstimator):
    """Cluster samples observed through several feature views.

    The views are stacked into a third-order tensor, a sparse plus
    low-rank self-expressive representation is learned by an ADMM
    solver, and the labels come from a Markov-chain spectral embedding
    of the learned affinities followed by k-means.

    Parameters
    ----------
    n_clusters : int, optional
        Number of clusters to extract.
    alpha : float, optional
        Weight of the tube-wise sparsity term.
    lam : float, optional
        Weight of the tensor nuclear norm term.
    beta : float, optional
        Weight of the inter-view consensus term.
    normalize : bool, optional
        Scale every sample to unit Euclidean norm per view before
        building the tensor.
    teleport : float, optional
        Uniform restart weight mixed into the transition matrix so the
        chain has a unique stationary distribution.
    n_init : int, optional
        Number of k-means restarts; the lowest-inertia run wins.
    eps : float, optional
        Solver stopping tolerance applied to all residuals.
    max_outer : int, optional
        Cap on outer ADMM iterations.
    random_state : int, optional
        Seed for the k-means restarts. The rest of the pipeline is
        deterministic.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
        Cluster label of each sample.
    representation_ : ndarray of shape (n_samples, n_samples, n_views)
        Learned self-expressive tensor.
    trace_ : SolverTrace
        Objective and residual history of the solver run.
    n_iter_ : int
        Outer iterations the solver performed.

    Examples
    --------
    >>> from mvtclust import MultiViewTensorClustering, synth_generate
    >>> data = synth_generate(2, 10, (6, 5), 2, 0.01, seed=0)
    >>> model = MultiViewTensorClustering(n_clusters=2, random_state=0)
    >>> labels = model.fit_predict(data.views_as_samples())
    >>> labels.shape
    (20,)
    """

    def __init__(
        self,
        n_clusters=3,
        alpha=0.1,
        lam=1e-3,
        beta=1.1,
        normalize=True,
        teleport=0.01,
        n_init=20,
        eps=1e-6,
        max_outer=200,
        random_state=0,
    ):
        self.n_clusters = n_clusters
        self.alpha = alpha
        self.lam = lam
        self.beta = beta
        self.normalize = normalize
        self.teleport = teleport
        self.n_init = n_init
        self.eps = eps
        self.max_outer = max_outer
        self.random_state = random_state

    def _validate_views(self, X):
        if not isinstance(X, (list, tuple)) or len(X) == 0:
            raise ValueError(
                "X must be a non-empty list of per-view arrays, one entry "
                "per view, each shaped (n_samples, n_features_view)"
            )
        views = [
            check_array(v, dtype=np.float64, ensure_all_finite=True) for v in X
        ]
        counts = {v.shape[0] for v in views}
        if len(counts) != 1:
            raise ValueError(
                "all views must describe the same samples; got row counts %s"
                % sorted(counts)
            )
        return views

    def fit(self, X, y=None):
        """Learn the representation tensor and cluster the samples.

        Parameters
        ----------
        X : list of ndarray
            One array per view, each of shape (n_samples, n_features_view)
            with rows aligned across views.
        y : ignored
            Present for scikit-learn API compatibility.

        Returns
        -------
        self
        """
        views = self._validate_views(X)
        if self.n_clusters < 1 or self.n_clusters > views[0].shape[0]:
            raise ValueError("n_clusters must be in [1, n_samples]")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")

        dataset = MultiViewDataset(views=[v.T.copy() for v in views])
        x = build_tensor(dataset, normalize=self.normalize)
        cfg = SolverConfig(
            alpha=self.alpha,
            lam=self.lam,
            beta=self.beta,
            eps=self.eps,
            max_outer=self.max_outer,
            seed=self.random_state,
        ).validate()
        c, trace = solve(x, cfg)
        labels = cluster_pipeline(
            c,
            self.n_clusters,
            teleport=self.teleport,
            restarts=self.n_init,
            seed=self.random_state,
        )

        self.representation_ = c
        self.trace_ = trace
        self.n_iter_ = trace.iterations
        self.labels_ = labels
        return self

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        # views arrive as a list of matrices, not a single 2-d array
        tags.input_tags.two_d_array = False
        return tags
