"""Multi-view datasets and their arrangement as a third-order tensor.

A dataset holds one feature matrix per view, each of shape ``(d_v, n)`` with
samples in columns.  :func:`build_tensor` stacks the views into a single
``(sum d_v, n, n_views)`` tensor whose frontal slice ``v`` carries view ``v``
in its own block of rows and is zero elsewhere, so the slices share the
column (sample) axis while keeping the feature blocks disjoint.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["MultiViewDataset", "build_tensor", "synth_generate"]


@dataclass
class MultiViewDataset:
    """Feature matrices for one collection of samples observed in several views.

    Attributes
    ----------
    views : list of ndarray
        One ``(d_v, n)`` float matrix per view; every view must have the
        same number of columns.
    labels : ndarray or None
        Optional integer ground-truth labels of length ``n``.
    names : list of str or None
        Optional view names, parallel to ``views``.
    """

    views: list
    labels: np.ndarray | None = None
    names: list | None = None

    def __post_init__(self):
        if not self.views:
            raise ValueError("a dataset needs at least one view")
        self.views = [np.asarray(v, dtype=np.float64) for v in self.views]
        for v in self.views:
            if v.ndim != 2:
                raise ValueError("each view must be a matrix, got ndim=%d" % v.ndim)
            if not np.isfinite(v).all():
                raise ValueError("views must be finite")
        n = self.views[0].shape[1]
        if any(v.shape[1] != n for v in self.views):
            raise ValueError(
                "views disagree on sample count: %s"
                % [v.shape[1] for v in self.views]
            )
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (n,):
                raise ValueError(
                    "labels length %d does not match %d samples"
                    % (self.labels.size, n)
                )
        if self.names is not None and len(self.names) != len(self.views):
            raise ValueError("names must parallel views")

    @property
    def n_samples(self):
        return self.views[0].shape[1]

    @property
    def n_views(self):
        return len(self.views)

    @property
    def view_dims(self):
        return [v.shape[0] for v in self.views]

    def views_as_samples(self):
        """Views transposed to the (n_samples, n_features) orientation."""
        return [v.T.copy() for v in self.views]


def build_tensor(dataset, normalize=True):
    """Stack the views of ``dataset`` into a block-structured tensor.

    View ``v`` occupies rows ``offset_v .. offset_v + d_v`` of frontal slice
    ``v``, where ``offset_v`` is the cumulative feature count of the earlier
    views; all other entries are zero.  With ``normalize`` each sample column
    is scaled to unit Euclidean norm per view first (zero columns are kept
    as zero).

    Returns
    -------
    ndarray of shape (sum d_v, n, n_views)
    """
    total = sum(dataset.view_dims)
    n = dataset.n_samples
    k = dataset.n_views
    out = np.zeros((total, n, k))
    offset = 0
    for v, mat in enumerate(dataset.views):
        if normalize:
            mat = _unit_columns(mat)
        out[offset : offset + mat.shape[0], :, v] = mat
        offset += mat.shape[0]
    return out


def _unit_columns(mat):
    norms = np.linalg.norm(mat, axis=0)
    scale = np.where(norms > 0.0, norms, 1.0)
    return mat / scale


def synth_generate(clusters, per_cluster, view_dims, subspace_dim, noise_sigma, seed):
    """Draw a labelled multi-view dataset with one low-dimensional subspace per cluster.

    For every view a fresh orthonormal basis of ``subspace_dim`` columns is
    drawn per cluster; samples are random combinations of the basis columns
    plus isotropic Gaussian noise of scale ``noise_sigma``.  Samples are
    ordered by cluster and the draw is a pure function of ``seed``.

    Returns
    -------
    MultiViewDataset
        With ``labels`` set to the generating cluster of each sample.
    """
    if clusters < 1 or per_cluster < 1:
        raise ValueError("clusters and per_cluster must be positive")
    if subspace_dim < 1:
        raise ValueError("subspace_dim must be positive")
    view_dims = [int(d) for d in view_dims]
    if not view_dims:
        raise ValueError("need at least one view dimension")
    for d in view_dims:
        if subspace_dim > d:
            raise ValueError(
                "subspace_dim %d exceeds view dimension %d" % (subspace_dim, d)
            )
    if noise_sigma < 0.0:
        raise ValueError("noise_sigma must be >= 0")

    rng = np.random.default_rng(seed)
    views = []
    for d in view_dims:
        blocks = []
        for _ in range(clusters):
            basis, _ = np.linalg.qr(rng.standard_normal((d, subspace_dim)))
            coeff = rng.standard_normal((subspace_dim, per_cluster))
            block = basis @ coeff
            if noise_sigma > 0.0:
                block = block + noise_sigma * rng.standard_normal((d, per_cluster))
            blocks.append(block)
        views.append(np.concatenate(blocks, axis=1))
    labels = np.repeat(np.arange(clusters), per_cluster)
    return MultiViewDataset(views=views, labels=labels)
