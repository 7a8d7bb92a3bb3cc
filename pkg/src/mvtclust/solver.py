"""Two-level splitting solver for the tensor self-representation problem.

Given a data tensor ``X`` of shape ``(d, n, k)`` the solver seeks a
representation tensor ``C`` of shape ``(n, n, k)`` minimizing

    alpha * norm_f1(C) + lam * norm_tnn(C)
    + 0.5 * norm_fro(X - X * C) ** 2
    + 0.5 * beta * sum over ordered pairs (i, j), i != j, of
      ||C[:, :, i] - C[:, :, j]||_F ** 2

where ``*`` is the tensor-tensor product.  The outer loop is an augmented
Lagrangian scheme with two auxiliary copies of ``C``: a low-rank copy ``Z``
handled by slice-wise singular value shrinkage and a tube-sparse copy ``Y``
handled by group shrinkage, each with its own dual tensor.  The coupled
``C`` update is itself solved by a small inner consensus scheme in the DFT
domain: every DFT slice solves a regularized least-squares system against a
shared set of consensus targets ``Q`` with scaled duals ``W``, which makes
the slice systems independent and lets the Gram matrix of every data slice
be eigendecomposed once per solve and reused at every penalty value.

The solver is deterministic: no randomness is consumed anywhere, and the
``seed`` carried by :class:`SolverConfig` only feeds the clustering stages
downstream.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .prox import prox_f1, prox_tnn
from .tensor3 import (
    fft_mode3,
    ifft_mode3,
    mirror_spectrum,
    norm_f1,
    norm_fro,
    norm_tnn,
    spectral_slice_count,
    tproduct,
)

__all__ = [
    "SolverConfig",
    "SolverTrace",
    "objective",
    "update_z",
    "update_y",
    "update_c",
    "update_duals",
    "check_convergence",
    "solve",
]

RESIDUAL_KEYS = ("z_primal", "y_primal", "z_change", "y_change", "c_change")


@dataclass
class SolverConfig:
    """Weights, penalty schedule and iteration limits for :func:`solve`.

    Parameters
    ----------
    alpha : float
        Weight of the tube-wise sparsity term.
    lam : float
        Weight of the tensor nuclear norm term.
    beta : float
        Weight of the inter-slice consensus term.
    rho0, mu, rho_max : float
        Initial outer penalty, its growth factor per iteration and its cap.
    tau : float
        Penalty of the inner consensus scheme.
    eps : float
        Outer stopping tolerance applied to all five residuals.
    max_outer, max_inner : int
        Iteration caps for the outer loop and the inner consensus loop.
    inner_tol : float
        Stopping tolerance of the inner consensus loop.
    seed : int
        Seed handed to the downstream clustering stages; unused here.
    dual_step : str
        "rho" scales dual ascent by the current penalty (default); "mu"
        replicates the fixed-step variant that uses the growth factor as
        the step size.
    zero_diagonal : bool
        Project the diagonal of every frontal slice of ``C`` to zero after
        each update, forbidding self-representation.
    cache_gram : bool
        Reuse one eigendecomposition of each data slice Gram matrix for all
        inner solves instead of factoring per iteration.
    half_spectrum : bool
        Solve only the first ``k // 2 + 1`` DFT slices and mirror the rest
        by conjugate symmetry.
    """

    alpha: float = 0.1
    lam: float = 1e-3
    beta: float = 1.1
    rho0: float = 0.01
    tau: float = 0.01
    mu: float = 1.9
    rho_max: float = 1e6
    eps: float = 1e-6
    max_outer: int = 200
    max_inner: int = 30
    inner_tol: float = 1e-6
    seed: int = 0
    dual_step: str = "rho"
    zero_diagonal: bool = False
    cache_gram: bool = True
    half_spectrum: bool = True

    def validate(self):
        if self.alpha < 0 or self.lam < 0 or self.beta < 0:
            raise ValueError("term weights must be >= 0")
        if self.rho0 <= 0 or self.tau <= 0:
            raise ValueError("penalties must be > 0")
        if self.mu < 1.0:
            raise ValueError("penalty growth factor must be >= 1")
        if self.rho_max < self.rho0:
            raise ValueError("rho_max must be >= rho0")
        if self.eps <= 0 or self.inner_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be >= 1")
        if self.dual_step not in ("rho", "mu"):
            raise ValueError("dual_step must be 'rho' or 'mu'")
        return self


@dataclass
class SolverTrace:
    """Per-iteration record of a solve."""

    objective: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    status: str = "max-iterations"
    seconds: float = 0.0

    @property
    def iterations(self):
        return len(self.objective)

    @property
    def converged(self):
        return self.status == "converged"

    def summary(self):
        """Compact JSON-friendly digest of the run."""
        out = {
            "status": self.status,
            "iterations": self.iterations,
            "final_objective": self.objective[-1] if self.objective else None,
            "final_residuals": dict(self.residuals[-1]) if self.residuals else None,
            "final_rho": self.rho[-1] if self.rho else None,
        }
        return out


def objective(x, c, cfg):
    """Value of the full objective at representation ``c``."""
    k = c.shape[2]
    fit = 0.5 * norm_fro(x - tproduct(x, c)) ** 2
    value = cfg.alpha * norm_f1(c) + cfg.lam * norm_tnn(c) + fit
    if cfg.beta > 0 and k > 1:
        consensus = 0.0
        for i in range(k):
            for j in range(i + 1, k):
                consensus += 2.0 * np.sum((c[:, :, i] - c[:, :, j]) ** 2)
        value += 0.5 * cfg.beta * consensus
    return float(value)


def update_z(c, g2, rho, lam):
    """Low-rank auxiliary update: slice shrinkage of ``C - G2 / rho``.

    The threshold passed down is ``n3 * lam / rho``; with the unnormalized
    DFT this makes the slice-wise shrinkage the exact proximal map of
    ``(lam / rho) * norm_tnn``.
    """
    return prox_tnn(c - g2 / rho, c.shape[2] * lam / rho)


def update_y(c, g1, rho, alpha):
    """Tube-sparse auxiliary update: group shrinkage of ``C - G1 / rho``."""
    return prox_f1(c - g1 / rho, alpha / rho)


class _SliceSystems:
    """Gram matrices of the DFT data slices with optional eigendecomposition.

    Only the leading ``k // 2 + 1`` slices are stored when mirroring is on;
    conjugate symmetry supplies the rest.
    """

    def __init__(self, xhat, half_spectrum=True, cache_gram=True):
        k = xhat.shape[2]
        self.k = k
        self.n = xhat.shape[1]
        self.n_solve = spectral_slice_count(k) if half_spectrum else k
        self.grams = []
        for m in range(self.n_solve):
            xm = xhat[:, :, m]
            g = xm.conj().T @ xm
            self.grams.append(0.5 * (g + g.conj().T))
        if cache_gram:
            self.eigs = [np.linalg.eigh(g) for g in self.grams]
        else:
            self.eigs = None

    def shifted_solve(self, m, sigma, rhs):
        """Solve ``(sigma * I + Gram_m) out = rhs``."""
        if self.eigs is not None:
            evals, evecs = self.eigs[m]
            return evecs @ ((evecs.conj().T @ rhs) / (evals + sigma)[:, None])
        return np.linalg.solve(
            self.grams[m] + sigma * np.eye(self.n, dtype=self.grams[m].dtype), rhs
        )


def update_c(xhat, p1hat, p2hat, q, w, rho, cfg, systems=None, inner_trace=None):
    """Representation update via the inner consensus scheme in the DFT domain.

    Parameters
    ----------
    xhat : ndarray
        DFT of the data tensor, shape ``(d, n, k)``.
    p1hat, p2hat : ndarray
        DFT of the two pull targets ``Y + G1 / rho`` and ``Z + G2 / rho``.
    q, w : ndarray
        Consensus targets and their scaled duals, shape ``(n, n, k)``
        complex; updated in place across outer iterations.
    rho : float
        Current outer penalty.
    cfg : SolverConfig
    systems : _SliceSystems, optional
        Precomputed Gram systems; built from ``xhat`` when omitted.
    inner_trace : list, optional
        When given, the largest pairwise distance between DFT slices of the
        iterate is appended once per inner iteration.

    Returns
    -------
    c : ndarray
        Updated real representation tensor.
    q, w : ndarray
        The updated inner state.
    """
    if systems is None:
        systems = _SliceSystems(xhat, cfg.half_spectrum, cfg.cache_gram)
    k = systems.k
    n = systems.n
    sigma = cfg.beta * (k - 1) + cfg.tau + 2.0 * rho
    denom_q = cfg.beta * (k - 1) + cfg.tau
    chat = np.zeros((n, n, k), dtype=np.complex128)

    for _ in range(cfg.max_inner):
        qsum = q.sum(axis=2)
        for m in range(systems.n_solve):
            rhs = (
                cfg.beta * (qsum - q[:, :, m])
                + cfg.tau * q[:, :, m]
                + w[:, :, m]
                + systems.grams[m]
                + rho * (p1hat[:, :, m] + p2hat[:, :, m])
            )
            chat[:, :, m] = systems.shifted_solve(m, sigma, rhs)
        if systems.n_solve < k:
            mirror_spectrum(chat)
        if inner_trace is not None:
            worst = 0.0
            for i in range(k):
                for j in range(i + 1, k):
                    worst = max(worst, np.linalg.norm(chat[:, :, i] - chat[:, :, j]))
            inner_trace.append(worst)
        csum = chat.sum(axis=2)
        q = (cfg.beta * (csum[:, :, None] - chat) + cfg.tau * chat - w) / denom_q
        w = w + cfg.tau * (q - chat)
        gap = 0.0
        for m in range(k):
            scale = max(1.0, np.linalg.norm(chat[:, :, m]))
            gap = max(gap, np.linalg.norm(q[:, :, m] - chat[:, :, m]) / scale)
        if gap <= cfg.inner_tol:
            break

    c = ifft_mode3(chat)
    if cfg.zero_diagonal:
        idx = np.arange(n)
        c[idx, idx, :] = 0.0
    return c, q, w


def update_duals(y, z, c, g1, g2, rho, cfg):
    """Dual ascent followed by penalty growth.

    Returns the updated duals and the next penalty value.  The ascent step
    is the current penalty unless ``cfg.dual_step == "mu"``.
    """
    step = rho if cfg.dual_step == "rho" else cfg.mu
    g1 = g1 + step * (y - c)
    g2 = g2 + step * (z - c)
    return g1, g2, min(cfg.rho_max, cfg.mu * rho)


def _relative(num, den):
    if num == 0.0:
        return 0.0
    if den == 0.0:
        return num
    return num / den


def check_convergence(x_norm, prev, curr, eps):
    """Evaluate the five stopping residuals.

    ``prev`` and ``curr`` are ``(c, y, z)`` triples from consecutive outer
    iterations.  Returns ``(converged, residuals)`` where the residuals map
    gap and change measures to relative values; a zero denominator counts
    as one unless the numerator is also zero.
    """
    c_prev, y_prev, z_prev = prev
    c, y, z = curr
    res = {
        "z_primal": _relative(norm_fro(z - c), x_norm),
        "y_primal": _relative(norm_fro(y - c), x_norm),
        "z_change": _relative(norm_fro(z - z_prev), norm_fro(z_prev)),
        "y_change": _relative(norm_fro(y - y_prev), norm_fro(y_prev)),
        "c_change": _relative(norm_fro(c - c_prev), norm_fro(c_prev)),
    }
    return max(res.values()) <= eps, res


def solve(x, cfg=None):
    """Run the full solver on a data tensor.

    Parameters
    ----------
    x : ndarray of shape (d, n, k)
        Data tensor; frontal slice per view, samples in columns.
    cfg : SolverConfig, optional

    Returns
    -------
    c : ndarray of shape (n, n, k)
        The representation tensor at the last iteration.
    trace : SolverTrace
    """
    cfg = (cfg or SolverConfig()).validate()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ValueError("data tensor must be third order, got ndim=%d" % x.ndim)
    if not np.isfinite(x).all():
        raise ValueError("data tensor must be finite")
    n, k = x.shape[1], x.shape[2]
    started = time.perf_counter()

    xhat = fft_mode3(x)
    systems = _SliceSystems(xhat, cfg.half_spectrum, cfg.cache_gram)
    x_norm = norm_fro(x)
    c = np.zeros((n, n, k))
    y = np.zeros((n, n, k))
    z = np.zeros((n, n, k))
    g1 = np.zeros((n, n, k))
    g2 = np.zeros((n, n, k))
    q = np.zeros((n, n, k), dtype=np.complex128)
    w = np.zeros((n, n, k), dtype=np.complex128)
    rho = cfg.rho0

    trace = SolverTrace()
    for _ in range(cfg.max_outer):
        z_new = update_z(c, g2, rho, cfg.lam)
        y_new = update_y(c, g1, rho, cfg.alpha)
        p1hat = fft_mode3(y_new + g1 / rho)
        p2hat = fft_mode3(z_new + g2 / rho)
        c_new, q, w = update_c(xhat, p1hat, p2hat, q, w, rho, cfg, systems=systems)
        g1, g2, rho_next = update_duals(y_new, z_new, c_new, g1, g2, rho, cfg)
        done, residuals = check_convergence(
            x_norm, (c, y, z), (c_new, y_new, z_new), cfg.eps
        )
        trace.objective.append(objective(x, c_new, cfg))
        trace.residuals.append(residuals)
        trace.rho.append(rho)
        c, y, z, rho = c_new, y_new, z_new, rho_next
        if done:
            trace.status = "converged"
            break

    trace.seconds = time.perf_counter() - started
    return c, trace
