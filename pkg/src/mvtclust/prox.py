"""Closed-form proximal maps used by the splitting solver.

Every operator takes a nonnegative, finite threshold.  The tensor operators
work slice-wise or tube-wise as documented; thresholds are applied exactly as
given, so callers are responsible for folding any transform scaling into the
threshold (the solver passes ``n3 * weight / penalty`` to :func:`prox_tnn`,
which makes the slice-wise shrinkage in the DFT domain equal to the proximal
map of the weighted tensor nuclear norm under the unnormalized transform).
"""

import numpy as np

from .tensor3 import fft_mode3, ifft_mode3, mirror_spectrum, spectral_slice_count

__all__ = ["svt", "prox_tnn", "prox_f1"]


def _check_threshold(tau):
    tau = float(tau)
    if not np.isfinite(tau) or tau < 0.0:
        raise ValueError("shrinkage threshold must be finite and >= 0, got %r" % tau)
    return tau


def svt(m, tau):
    """Singular value thresholding of a matrix.

    Shrinks every singular value by ``tau``, dropping those that fall to
    zero or below; the unique minimizer of
    ``tau * ||W||_* + 0.5 * ||W - m||_F^2``.
    """
    tau = _check_threshold(tau)
    m = np.asarray(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (u * s) @ vh


def prox_tnn(a, tau):
    """Slice-wise singular value thresholding in the DFT domain.

    Applies :func:`svt` with threshold ``tau`` to every DFT-domain frontal
    slice of the real tensor ``a`` and transforms back.  Conjugate symmetry
    is exploited: only the first ``n3 // 2 + 1`` slices are decomposed and
    the rest are mirrored.
    """
    tau = _check_threshold(tau)
    a = np.asarray(a)
    ahat = fft_mode3(a)
    for l in range(spectral_slice_count(a.shape[2])):
        ahat[:, :, l] = svt(ahat[:, :, l], tau)
    mirror_spectrum(ahat)
    return ifft_mode3(ahat)


def prox_f1(a, tau):
    """Tube-wise group shrinkage.

    Scales each tube fiber ``a[i, j, :]`` by ``max(0, 1 - tau / ||a[i, j, :]||)``,
    sending tubes with norm at most ``tau`` to zero; the minimizer of
    ``tau * sum_ij ||W[i, j, :]|| + 0.5 * ||W - a||_F^2``.  Zero tubes stay
    zero for every threshold.
    """
    tau = _check_threshold(tau)
    a = np.asarray(a)
    norms = np.sqrt((a * a).sum(axis=2))
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0.0, np.maximum(1.0 - tau / norms, 0.0), 0.0)
    return a * scale[:, :, None]
