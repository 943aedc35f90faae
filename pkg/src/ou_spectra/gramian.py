"""Drift-diffusion models, covariance Gramians, and the restricted flow.

A model is the linear stochastic system ``dX = A X dt + Q^(1/2) dW`` on
``R^d``.  Two covariance matrices organize everything this package computes:
the finite-horizon Gramian

    Q_t = integral_0^t exp(sA) Q exp(sA') ds,

and, when the drift is stable (spectral abscissa < 0), its steady-state
limit ``Q_inf``, the unique solution of ``A X + X A' + Q = 0``.  The
invariant Gaussian measure has covariance ``Q_inf``; its reproducing-kernel
space is ``range(Q_inf)`` with the norm that makes the columns of any factor
``R`` with ``R R' = Q_inf`` an isometry.  In the orthonormal coordinates
supplied by such a factor, the flow ``exp(tA)`` restricted to that space
becomes an ordinary ``r x r`` matrix (:func:`smu_matrix`), a contraction
whose norm is tied to the generalized Rayleigh quotient

    K(t) = sup_x <Q_inf x, x> / <Q_t x, x>

by ``norm^2 = 1 - 1/K(t)``.

Numerical choices: ``Q_t`` comes from one block matrix exponential (exact up
to expm accuracy, no quadrature grid), ``Q_inf`` from a dense solve of the
vectorized steady-state equation, and all rank decisions use relative
eigenvalue thresholds from :class:`~ou_spectra.config.Tolerances`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import DEFAULT, Tolerances
from .errors import (
    AsymmetricQ,
    CriteriaDisagree,
    DimensionMismatch,
    EigFailure,
    ExpmFailure,
    InputError,
    NotPSD,
    RangeNotInvariant,
    Unstable,
)

__all__ = [
    "OUModel", "validate", "spectral_abscissa", "is_stable", "flow",
    "gramian_t", "gramian_inf", "RKHSFactor", "rkhs_factor", "smu_matrix",
    "smu_norm", "quadratic_form_ratio_sup", "contractivity_constant",
    "psd_sqrt", "rank_psd", "controllability_matrix", "controllability_rank",
    "strong_feller_check", "GramianReport", "gramian_report",
    "InvertibilityReport", "invertibility_equivalence_report",
]


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class OUModel:
    """A validated drift-diffusion pair with its tolerance settings.

    Construct through :func:`validate`; the dataclass itself only
    normalizes dtypes and freezes the arrays.
    """

    A: np.ndarray
    Q: np.ndarray
    name: str = ""
    tol: Tolerances = field(default=DEFAULT)

    def __post_init__(self):
        object.__setattr__(self, "A", _readonly(self.A))
        object.__setattr__(self, "Q", _readonly(self.Q))

    @property
    def dim(self):
        return self.A.shape[0]


def validate(A, Q, name="", tol=None):
    """Check a drift-diffusion pair and return it as an :class:`OUModel`.

    Parameters
    ----------
    A : (d, d) array_like
        Drift matrix.
    Q : (d, d) array_like
        Diffusion matrix; must be symmetric within ``tol.sym_tol`` and
        positive semidefinite within ``tol.psd_tol``.  The stored copy is
        exactly symmetrized.
    name : str, optional
        Label carried into reports.
    tol : Tolerances, optional

    Raises
    ------
    DimensionMismatch
        If the matrices are not square with equal shape.
    AsymmetricQ
        If ``max|Q - Q.T|`` exceeds ``sym_tol * max(1, max|Q|)``.
    NotPSD
        If an eigenvalue of the symmetrized Q falls below
        ``-psd_tol * max(1, max eigenvalue)``.
    """
    tol = DEFAULT if tol is None else tol
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch("A must be square, got shape %r" % (A.shape,))
    if Q.shape != A.shape:
        raise DimensionMismatch(
            "Q must match A: got %r versus %r" % (Q.shape, A.shape))
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(Q))):
        raise InputError("model matrices must have finite entries")
    scale = max(1.0, float(np.abs(Q).max(initial=0.0)))
    skew = float(np.abs(Q - Q.T).max(initial=0.0))
    if skew > tol.sym_tol * scale:
        raise AsymmetricQ(
            "Q is not symmetric: max|Q - Q.T| = %.3e (allowed %.3e)"
            % (skew, tol.sym_tol * scale))
    Qs = 0.5 * (Q + Q.T)
    lam = np.linalg.eigvalsh(Qs)
    floor = -tol.psd_tol * max(1.0, float(lam[-1]))
    if lam[0] < floor:
        raise NotPSD(
            "Q has eigenvalue %.3e below the PSD tolerance %.3e"
            % (lam[0], floor))
    return OUModel(A=A, Q=Qs, name=name, tol=tol)


def spectral_abscissa(A):
    """Largest real part of the eigenvalues of A."""
    try:
        w = np.linalg.eigvals(np.asarray(A, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise EigFailure("eigenvalue computation failed: %s" % exc) from exc
    if not np.all(np.isfinite(w.view(float))):
        raise EigFailure("eigenvalue computation returned non-finite values")
    return float(w.real.max())


def is_stable(model):
    """True when the spectral abscissa clears the stability margin."""
    return spectral_abscissa(model.A) < -model.tol.stab_tol


def _expm(M):
    E = scipy.linalg.expm(M)
    if not np.all(np.isfinite(E)):
        raise ExpmFailure("matrix exponential produced non-finite values")
    return E


def flow(model, t):
    """The propagator ``exp(tA)``."""
    return _expm(float(t) * model.A)


def gramian_t(model, t):
    """Finite-horizon covariance ``Q_t``.

    Computed from a single exponential of the block matrix
    ``[[A, Q], [0, -A.T]] * t``: writing its exponential as
    ``[[F, G], [0, H]]``, one has ``F = exp(tA)`` and
    ``G = exp(tA) * integral_0^t exp(-sA) Q exp(-sA') ds``, hence
    ``Q_t = G F.T`` after the change of variable ``s -> t - s``.  No
    quadrature grid is involved.  ``t = 0`` returns the zero matrix.
    """
    t = float(t)
    if t < 0:
        raise InputError("gramian_t needs t >= 0, got %g" % t)
    d = model.dim
    if t == 0.0:
        return np.zeros((d, d))
    H = np.zeros((2 * d, 2 * d))
    H[:d, :d] = model.A
    H[:d, d:] = model.Q
    H[d:, d:] = -model.A.T
    E = _expm(t * H)
    Qt = E[:d, d:] @ E[:d, :d].T
    return 0.5 * (Qt + Qt.T)


def gramian_inf(model):
    """Steady-state covariance ``Q_inf`` for a stable drift.

    Solves the vectorized equation
    ``(kron(A, I) + kron(I, A)) vec(X) = -vec(Q)`` (row-major vec) with a
    dense LU factorization; the result is symmetrized and its residual in
    the original equation is checked against ``lyap_tol * (1 + max|Q|)``.

    Raises
    ------
    Unstable
        If the spectral abscissa is not below ``-stab_tol``.
    """
    alpha = spectral_abscissa(model.A)
    if alpha >= -model.tol.stab_tol:
        raise Unstable(
            "no steady-state covariance: spectral abscissa %.6g is not "
            "below the stability margin -%g" % (alpha, model.tol.stab_tol))
    d = model.dim
    eye = np.eye(d)
    lhs = np.kron(model.A, eye) + np.kron(eye, model.A)
    x = np.linalg.solve(lhs, -model.Q.ravel())
    X = x.reshape(d, d)
    X = 0.5 * (X + X.T)
    resid = float(np.abs(model.A @ X + X @ model.A.T + model.Q).max())
    allowed = model.tol.lyap_tol * (1.0 + float(np.abs(model.Q).max()))
    if resid > allowed:
        raise EigFailure(
            "steady-state covariance residual %.3e exceeds %.3e; the "
            "vectorized solve is unreliable for this model" % (resid, allowed))
    return X


@dataclass(frozen=True)
class RKHSFactor:
    """Orthonormal coordinates for the reproducing-kernel space of the
    invariant measure.

    Attributes
    ----------
    rank : int
        Numerical rank r of the covariance.
    factor : (d, r) ndarray
        Columns are an orthogonal eigenbasis scaled by sqrt-eigenvalues,
        so ``factor @ factor.T`` reproduces the covariance and the columns
        are an orthonormal basis of the kernel space in its own inner
        product.
    basis : (d, r) ndarray
        Orthonormal (Euclidean) eigenvectors spanning the range.
    inv_sqrt : (r, d) ndarray
        Pseudo-inverse of ``factor``; maps a vector to its coordinates.
    eigenvalues : (r,) ndarray
        Kept eigenvalues, descending.
    """

    rank: int
    factor: np.ndarray
    basis: np.ndarray
    inv_sqrt: np.ndarray
    eigenvalues: np.ndarray

    def projector(self):
        """Euclidean orthogonal projector onto the range."""
        return self.basis @ self.basis.T


def rkhs_factor(Q_inf, rank_tol=DEFAULT.rank_tol):
    """Spectral square-root factor of a PSD covariance, rank-truncated.

    Eigenvalues at or below ``rank_tol`` times the largest one are treated
    as zero; the kept eigenpairs (sorted descending, deterministic up to
    column signs) define the factor.
    """
    S = np.asarray(Q_inf, dtype=float)
    S = 0.5 * (S + S.T)
    lam, U = np.linalg.eigh(S)
    lam, U = lam[::-1], U[:, ::-1]
    lmax = max(float(lam[0]) if lam.size else 0.0, 0.0)
    keep = lam > rank_tol * lmax if lmax > 0 else np.zeros(lam.shape, bool)
    lam_k = lam[keep]
    U_k = U[:, keep]
    sq = np.sqrt(lam_k)
    return RKHSFactor(
        rank=int(keep.sum()),
        factor=_readonly(U_k * sq),
        basis=_readonly(U_k),
        inv_sqrt=_readonly((U_k / sq).T if lam_k.size else U_k.T),
        eigenvalues=_readonly(lam_k),
    )


def smu_matrix(model, factor, t):
    """The flow restricted to the kernel space, in factor coordinates.

    Returns the ``r x r`` matrix ``B(t) = pinv(R) exp(tA) R`` where ``R``
    is ``factor.factor``.  Before compressing, the residual of
    ``exp(tA) R`` outside ``range(R)`` is checked: the restriction only
    means anything if the flow maps the space into itself.

    Raises
    ------
    RangeNotInvariant
        If ``exp(tA)`` leaks out of the range beyond
        ``inv_tol * (1 + norm of the image)``.
    """
    t = float(t)
    if t < 0:
        raise InputError("smu_matrix needs t >= 0, got %g" % t)
    if factor.rank == 0:
        return np.zeros((0, 0))
    R = factor.factor
    img = flow(model, t) @ R
    leak = img - factor.basis @ (factor.basis.T @ img)
    resid = float(np.linalg.norm(leak, 2))
    allowed = model.tol.inv_tol * (1.0 + float(np.linalg.norm(img, 2)))
    if resid > allowed:
        raise RangeNotInvariant(
            "exp(tA) moves the kernel space out of itself at t=%g: "
            "residual %.3e exceeds %.3e" % (t, resid, allowed))
    return factor.inv_sqrt @ img


def smu_norm(model, factor, t):
    """Operator norm of :func:`smu_matrix` (0 for a rank-0 factor)."""
    B = smu_matrix(model, factor, t)
    if B.size == 0:
        return 0.0
    return float(np.linalg.norm(B, 2))


def quadratic_form_ratio_sup(P, R, rank_tol=DEFAULT.rank_tol):
    """Supremum of ``<Px, x> / <Rx, x>`` over the range of R.

    Both arguments must be symmetric PSD.  When P has mass outside
    ``range(R)`` the supremum is infinite and ``math.inf`` is returned
    (the caller decides whether that is an error).  Otherwise this is the
    largest eigenvalue of the compression of P by ``R^(-1/2)`` on the
    range.
    """
    P = np.asarray(P, dtype=float)
    R = np.asarray(R, dtype=float)
    lam, V = np.linalg.eigh(0.5 * (R + R.T))
    lam, V = lam[::-1], V[:, ::-1]
    lmax = max(float(lam[0]) if lam.size else 0.0, 0.0)
    keep = lam > rank_tol * lmax if lmax > 0 else np.zeros(lam.shape, bool)
    pscale = max(1.0, float(np.abs(P).max(initial=0.0)))
    if not keep.all():
        W = V[:, ~keep]
        outside = float(np.abs(W.T @ P @ W).max(initial=0.0))
        if outside > rank_tol * pscale:
            return math.inf
    if not keep.any():
        return 0.0
    Vk = V[:, keep]
    inv_sq = 1.0 / np.sqrt(lam[keep])
    M = (Vk * inv_sq).T @ P @ (Vk * inv_sq)
    M = 0.5 * (M + M.T)
    return float(max(np.linalg.eigvalsh(M)[-1], 0.0))


def contractivity_constant(model, t):
    """The generalized Rayleigh quotient ``K(t)`` of (Q_inf, Q_t).

    Always at least 1 (the steady-state covariance dominates every
    finite-horizon one); returns ``math.inf`` if Q_inf has mass outside
    ``range(Q_t)``, which cannot happen for a valid stable model but is the
    honest answer for hand-built covariance pairs.
    """
    t = float(t)
    if t <= 0:
        raise InputError("contractivity_constant needs t > 0, got %g" % t)
    Qt = gramian_t(model, t)
    Qi = gramian_inf(model)
    return quadratic_form_ratio_sup(Qi, Qt, model.tol.rank_tol)


def psd_sqrt(M):
    """Symmetric PSD square root via the spectral decomposition.

    Negative eigenvalues (roundoff) are clipped to zero.
    """
    S = np.asarray(M, dtype=float)
    lam, U = np.linalg.eigh(0.5 * (S + S.T))
    lam = np.clip(lam, 0.0, None)
    return (U * np.sqrt(lam)) @ U.T


def rank_psd(M, rank_tol=DEFAULT.rank_tol):
    """Numerical rank of a symmetric PSD matrix by relative eigenvalue cut."""
    lam = np.linalg.eigvalsh(0.5 * (M + M.T))
    lmax = max(float(lam[-1]) if lam.size else 0.0, 0.0)
    if lmax <= 0:
        return 0
    return int((lam > rank_tol * lmax).sum())


def controllability_matrix(A, B):
    """Kalman block row ``[B, AB, ..., A^(d-1) B]``."""
    A = np.asarray(A, dtype=float)
    blocks = [np.asarray(B, dtype=float)]
    for _ in range(A.shape[0] - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(A, Q, rank_tol=DEFAULT.rank_tol):
    """Rank of the Kalman matrix built from the PSD square root of Q."""
    C = controllability_matrix(A, psd_sqrt(Q))
    s = np.linalg.svd(C, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax <= 0:
        return 0
    return int((s > rank_tol * smax).sum())


def strong_feller_check(model, t):
    """Whether the transition kernel at time t has a density (full-rank Q_t).

    Two independent criteria are evaluated: the eigenvalue rank of the
    computed ``Q_t``, and the rank of the Kalman controllability matrix of
    ``(A, Q^(1/2))``, which equals ``rank(Q_t)`` for every ``t > 0``.

    Raises
    ------
    CriteriaDisagree
        If the two ranks differ: one of the computations cannot be
        trusted, and guessing would silently corrupt downstream results.
    """
    t = float(t)
    if t <= 0:
        raise InputError("strong_feller_check needs t > 0, got %g" % t)
    r_gram = rank_psd(gramian_t(model, t), model.tol.rank_tol)
    r_kalman = controllability_rank(model.A, model.Q, model.tol.rank_tol)
    if r_gram != r_kalman:
        raise CriteriaDisagree(
            "rank(Q_t) = %d but the controllability rank is %d at t=%g"
            % (r_gram, r_kalman, t))
    return r_gram == model.dim


@dataclass(frozen=True)
class GramianReport:
    """Covariance summary of a model at one horizon."""

    t: float
    spectral_abscissa: float
    stable: bool
    Q_t: np.ndarray
    rank_Q_t: int
    strong_feller: bool
    Q_inf: np.ndarray | None
    rank_Q_inf: int | None
    q_inf_invertible: bool

    def to_dict(self):
        return {
            "t": self.t,
            "spectral_abscissa": self.spectral_abscissa,
            "stable": self.stable,
            "Q_t": self.Q_t.tolist(),
            "rank_Q_t": self.rank_Q_t,
            "strong_feller": self.strong_feller,
            "Q_inf": None if self.Q_inf is None else self.Q_inf.tolist(),
            "rank_Q_inf": self.rank_Q_inf,
            "q_inf_invertible": self.q_inf_invertible,
        }


def gramian_report(model, t):
    """Gramian facts at horizon t: ranks, stability, smoothing.

    ``Q_inf`` fields are present only when the drift is stable.  At
    ``t = 0`` the kernel is a point mass, so ``strong_feller`` is False by
    convention and the rank cross-check (which needs ``t > 0``) is skipped.
    """
    t = float(t)
    if t < 0:
        raise InputError("gramian_report needs t >= 0, got %g" % t)
    alpha = spectral_abscissa(model.A)
    stable = alpha < -model.tol.stab_tol
    Qt = gramian_t(model, t)
    rank_t = rank_psd(Qt, model.tol.rank_tol)
    feller = strong_feller_check(model, t) if t > 0 else False
    if stable:
        Qi = gramian_inf(model)
        rank_i = rank_psd(Qi, model.tol.rank_tol)
        invertible = rank_i == model.dim
    else:
        Qi, rank_i, invertible = None, None, False
    return GramianReport(
        t=t,
        spectral_abscissa=alpha,
        stable=stable,
        Q_t=Qt,
        rank_Q_t=rank_t,
        strong_feller=feller,
        Q_inf=Qi,
        rank_Q_inf=rank_i,
        q_inf_invertible=invertible,
    )


@dataclass(frozen=True)
class InvertibilityReport:
    """Cross-check of the equivalence: for a stable drift, ``Q_inf`` is
    invertible iff ``Q_t`` is invertible for every t > 0."""

    stable: bool
    q_inf_invertible: bool | None
    q_t_invertible: dict
    equivalent: bool | None
    note: str

    def to_dict(self):
        return {
            "stable": self.stable,
            "q_inf_invertible": self.q_inf_invertible,
            "q_t_invertible": {repr(k): v for k, v in
                               self.q_t_invertible.items()},
            "equivalent": self.equivalent,
            "note": self.note,
        }


def invertibility_equivalence_report(model, t_grid=(0.1, 1.0, 5.0)):
    """Check that ``Q_inf`` and all ``Q_t`` agree on invertibility.

    The rank of ``Q_t`` is constant over ``t > 0`` (it equals the Kalman
    rank), so for a stable drift invertibility of ``Q_inf`` must match the
    verdict at every grid point.  A mismatch is reported with
    ``equivalent=False``, never hidden; for an unstable drift the
    equivalence is vacuous and ``equivalent`` is None.
    """
    if len(t_grid) == 0 or any(float(t) <= 0 for t in t_grid):
        raise InputError("t_grid must be nonempty with positive entries")
    stable = is_stable(model)
    per_t = {float(t): rank_psd(gramian_t(model, float(t)),
                                model.tol.rank_tol) == model.dim
             for t in t_grid}
    if stable:
        inv = rank_psd(gramian_inf(model), model.tol.rank_tol) == model.dim
        equivalent = all(v == inv for v in per_t.values())
        note = "" if equivalent else (
            "invertibility of Q_inf disagrees with Q_t on the grid; "
            "rank decisions near the tolerance threshold are suspect")
    else:
        inv, equivalent = None, None
        note = "drift is not stable; no steady-state covariance exists"
    return InvertibilityReport(
        stable=stable,
        q_inf_invertible=inv,
        q_t_invertible=per_t,
        equivalent=equivalent,
        note=note,
    )
