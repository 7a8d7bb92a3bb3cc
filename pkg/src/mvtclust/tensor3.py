"""Third-order tensor algebra built on tube-wise circular convolution.

Tensors are plain ``numpy.ndarray`` objects of shape ``(n1, n2, n3)`` indexed
as ``A[i, j, l]``: ``A[:, :, l]`` is the l-th frontal slice, ``A[i, :, :]``
the i-th horizontal slice and ``A[i, j, :]`` the (i, j) tube fiber.

The mode-3 transform of a tensor is a complex array of the same shape holding
the unnormalized DFT of every tube; the inverse carries the ``1 / n3`` factor,
so ``norm_fro(A) ** 2 == norm_fro(fft_mode3(A)) ** 2 / n3``.  For real input
the transform is conjugate symmetric across slices,
``Ahat[:, :, l] == conj(Ahat[:, :, n3 - l])`` for ``l >= 1``, which lets
slice-wise consumers process only slices ``0 .. n3 // 2`` and mirror the rest
(see :func:`spectral_slice_count` and :func:`mirror_spectrum`).
"""

import numpy as np

__all__ = [
    "ImaginaryResidueError",
    "twist",
    "untwist",
    "unfold",
    "fold",
    "bcirc",
    "bdiag",
    "fft_mode3",
    "ifft_mode3",
    "tproduct",
    "tproduct_reference",
    "identity_tensor",
    "spectral_slice_count",
    "mirror_spectrum",
    "norm_fro",
    "norm_f1",
    "norm_ff1",
    "norm_tnn",
]

# Relative tolerance for discarding the imaginary part after an inverse
# transform of data that should be real.
IMAG_RESIDUE_RTOL = 1e-6


class ImaginaryResidueError(ValueError):
    """Inverse mode-3 transform left imaginary parts above tolerance."""


def _as_tensor(a):
    a = np.asarray(a)
    if a.ndim != 3:
        raise ValueError("expected a third-order tensor, got ndim=%d" % a.ndim)
    return a


def twist(m):
    """Stand a matrix up as an m x 1 x n tensor, rows becoming tube fibers."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("twist expects a matrix, got ndim=%d" % m.ndim)
    return m[:, None, :].copy()


def untwist(t):
    """Inverse of :func:`twist`; requires a tensor with a single column."""
    t = _as_tensor(t)
    if t.shape[1] != 1:
        raise ValueError("untwist expects shape (m, 1, n), got %s" % (t.shape,))
    return t[:, 0, :].copy()


def unfold(a):
    """Stack the frontal slices of ``a`` vertically into an (n1*n3) x n2 matrix."""
    a = _as_tensor(a)
    n1, n2, n3 = a.shape
    return a.transpose(2, 0, 1).reshape(n1 * n3, n2)


def fold(m, n3):
    """Inverse of :func:`unfold`; the row count of ``m`` must be divisible by ``n3``."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("fold expects a matrix, got ndim=%d" % m.ndim)
    if n3 < 1 or m.shape[0] % n3 != 0:
        raise ValueError(
            "cannot fold %d rows into %d frontal slices" % (m.shape[0], n3)
        )
    n1 = m.shape[0] // n3
    return m.reshape(n3, n1, m.shape[1]).transpose(1, 2, 0).copy()


def bcirc(a):
    """Block-circulant matrix of ``a``.

    Block column ``c`` holds the frontal slices cyclically shifted down by
    ``c``, so the first block column equals ``unfold(a)`` and block ``(r, c)``
    is frontal slice ``(r - c) mod n3``.
    """
    a = _as_tensor(a)
    n1, n2, n3 = a.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=a.dtype)
    for r in range(n3):
        for c in range(n3):
            out[r * n1 : (r + 1) * n1, c * n2 : (c + 1) * n2] = a[:, :, (r - c) % n3]
    return out


def bdiag(a):
    """Block-diagonal matrix with the frontal slices of ``a`` on the diagonal."""
    a = _as_tensor(a)
    n1, n2, n3 = a.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=a.dtype)
    for l in range(n3):
        out[l * n1 : (l + 1) * n1, l * n2 : (l + 1) * n2] = a[:, :, l]
    return out


def fft_mode3(a):
    """Unnormalized DFT along the third mode."""
    return np.fft.fft(_as_tensor(a), axis=2)


def ifft_mode3(ahat):
    """Inverse DFT along the third mode, returning a real tensor.

    Raises
    ------
    ImaginaryResidueError
        If the imaginary residue after inversion exceeds
        ``IMAG_RESIDUE_RTOL * (1 + max |Re|)``, signalling that the input was
        not the transform of a real tensor.
    """
    a = np.fft.ifft(_as_tensor(ahat), axis=2)
    imag_peak = np.abs(a.imag).max() if a.size else 0.0
    real_peak = np.abs(a.real).max() if a.size else 0.0
    if imag_peak > IMAG_RESIDUE_RTOL * (1.0 + real_peak):
        raise ImaginaryResidueError(
            "imaginary residue %.3e exceeds tolerance for real inversion" % imag_peak
        )
    return np.ascontiguousarray(a.real)


def spectral_slice_count(n3):
    """Number of DFT slices that determine the rest by conjugate symmetry."""
    return n3 // 2 + 1


def mirror_spectrum(ahat):
    """Fill slices ``n3 // 2 + 1 ..`` of ``ahat`` in place from the conjugates.

    Assumes slices ``0 .. n3 // 2`` hold the transform of a real tensor;
    returns ``ahat`` for convenience.
    """
    ahat = _as_tensor(ahat)
    n3 = ahat.shape[2]
    for l in range(1, (n3 + 1) // 2):
        ahat[:, :, n3 - l] = np.conj(ahat[:, :, l])
    return ahat


def tproduct(a, b):
    """Tensor-tensor product: per-slice matrix products in the DFT domain.

    Parameters
    ----------
    a : ndarray of shape (n1, n2, n3)
    b : ndarray of shape (n2, n4, n3)

    Returns
    -------
    ndarray of shape (n1, n4, n3)
    """
    a = _as_tensor(a)
    b = _as_tensor(b)
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ValueError(
            "incompatible shapes for tensor product: %s and %s"
            % (a.shape, b.shape)
        )
    ahat = np.fft.fft(a, axis=2).transpose(2, 0, 1)
    bhat = np.fft.fft(b, axis=2).transpose(2, 0, 1)
    chat = np.matmul(ahat, bhat).transpose(1, 2, 0)
    return ifft_mode3(chat)


def tproduct_reference(a, b):
    """Tensor-tensor product via the block-circulant matrix, no transforms.

    Slower than :func:`tproduct` but structurally independent of it; used as
    the equivalence oracle in the self test.
    """
    a = _as_tensor(a)
    b = _as_tensor(b)
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ValueError(
            "incompatible shapes for tensor product: %s and %s"
            % (a.shape, b.shape)
        )
    return fold(bcirc(a) @ unfold(b), a.shape[2])


def identity_tensor(n, n3):
    """Tensor whose first frontal slice is I_n and whose others are zero."""
    if n < 1 or n3 < 1:
        raise ValueError("identity tensor needs positive dimensions")
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def norm_fro(a):
    """Frobenius norm, the square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(a)))


def norm_f1(a):
    """Sum of the Euclidean norms of all tube fibers."""
    a = _as_tensor(a)
    return float(np.sqrt((a * a.conj()).real.sum(axis=2)).sum())


def norm_ff1(a):
    """Sum of the Frobenius norms of the horizontal slices."""
    a = _as_tensor(a)
    return float(np.sqrt((a * a.conj()).real.sum(axis=(1, 2))).sum())


def norm_tnn(a):
    """Sum of the nuclear norms of every DFT-domain frontal slice."""
    ahat = fft_mode3(a)
    total = 0.0
    for l in range(ahat.shape[2]):
        total += np.linalg.svd(ahat[:, :, l], compute_uv=False).sum()
    return float(total)
