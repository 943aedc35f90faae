"""The generator on polynomial cores: Galerkin matrix, exact transition
action, chaos projections, and a path sampler.

Everything here exploits one structural fact: because the drift is linear,
polynomials of total degree at most N form an invariant subspace of both the
generator ``L f = 1/2 Tr(Q D^2 f) + <Ax, Df>`` and its transition semigroup.
The Galerkin matrix of L on monomials is therefore exact (no projection
error), block upper triangular in graded order, and its eigenvalues are
honest eigenvalues of L.  The transition action is computed in closed form
from the substitution ``x -> exp(tA) x + G`` with ``G ~ N(0, Q_t)``, taking
expectations termwise with Gaussian moments (Isserlis recursion).  The chaos
decomposition orthogonalizes the monomials in the inner product of the
invariant measure and yields the projections onto each polynomial chaos
layer, plus the occupation-indexed Hermite family that matches coordinates
on symmetric tensor powers of the kernel space.

The path sampler is deliberately crude (Euler-Maruyama): it is a
statistical cross-check of the exact formulas above, not a production
integrator, and its step bias is O(dt).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iter_product
from math import comb, factorial, prod, sqrt

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateMeasure,
    DimensionMismatch,
    InputError,
    InvalidStep,
)
from .gramian import (
    flow,
    gramian_inf,
    gramian_t,
    psd_sqrt,
    rkhs_factor,
    smu_matrix,
)
from .tensor_fock import multi_indices, sym_power

__all__ = [
    "PolyBasis", "poly_basis", "Polynomial", "poly_mul", "MomentTable",
    "assemble_L", "mehler_apply", "mehler_matrix", "ChaosDecomposition",
    "chaos_decomposition", "SecondQuantizationReport",
    "verify_second_quantization", "PathStats", "simulate_paths",
    "euler_mean_cov",
]


# --- polynomial plumbing ----------------------------------------------------

@dataclass(frozen=True)
class PolyBasis:
    """Monomials of total degree <= N in d variables, graded order.

    Within each degree the multi-indices are in descending lexicographic
    order, matching the occupation-number ordering of the tensor levels, so
    level-by-level transports line up index for index.
    """

    d: int
    N: int
    monomials: tuple

    @property
    def dim(self):
        return len(self.monomials)

    def position(self, alpha):
        return _poly_position_table(self.d, self.N)[tuple(alpha)]

    def degree_slice(self, n):
        """Slice of coordinates of total degree exactly n."""
        start = sum(comb(self.d + k - 1, k) for k in range(n))
        return slice(start, start + comb(self.d + n - 1, n))


@lru_cache(maxsize=None)
def _poly_position_table(d, N):
    return {alpha: i for i, alpha in enumerate(poly_basis(d, N).monomials)}


@lru_cache(maxsize=None)
def poly_basis(d, N):
    if d < 1 or N < 0:
        raise InputError("poly_basis needs d >= 1 and N >= 0")
    monomials = tuple(alpha for n in range(N + 1)
                      for alpha in multi_indices(d, n))
    assert len(monomials) == comb(d + N, N)
    return PolyBasis(d=d, N=N, monomials=monomials)


@dataclass(frozen=True)
class Polynomial:
    """Coefficient vector over a :class:`PolyBasis`."""

    basis: PolyBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (self.basis.dim,):
            raise DimensionMismatch(
                "coefficient vector has length %d, basis has dimension %d"
                % (c.size, self.basis.dim))
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def degree(self):
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return 0
        return sum(self.basis.monomials[nz[-1]])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = 0.0 * self.coeffs[0]
        for alpha, c in zip(self.basis.monomials, self.coeffs):
            if c != 0:
                total += c * prod(xi ** a for xi, a in zip(x, alpha))
        return total

    def to_json_dict(self):
        out = {}
        for alpha, c in zip(self.basis.monomials, self.coeffs):
            if c != 0:
                if np.iscomplexobj(self.coeffs):
                    raise InputError(
                        "only real polynomials serialize to JSON")
                out[",".join(str(a) for a in alpha)] = float(c)
        return out

    @classmethod
    def from_json_dict(cls, data, basis=None):
        parsed = {tuple(int(s) for s in key.split(",")): float(val)
                  for key, val in data.items()}
        if basis is None:
            if not parsed:
                raise InputError("cannot infer a basis from an empty "
                                 "polynomial; pass one explicitly")
            d = len(next(iter(parsed)))
            basis = poly_basis(d, max(sum(a) for a in parsed))
        coeffs = np.zeros(basis.dim)
        for alpha, val in parsed.items():
            coeffs[basis.position(alpha)] = val
        return cls(basis=basis, coeffs=coeffs)


def monomial(basis, alpha, coeff=1.0):
    """The single-term polynomial ``coeff * x^alpha``."""
    c = np.zeros(basis.dim, dtype=type(coeff) if not isinstance(
        coeff, int) else float)
    c[basis.position(alpha)] = coeff
    return Polynomial(basis=basis, coeffs=c)


def poly_mul(f, g, basis=None):
    """Product of two polynomials, in `basis` (default: f's basis).

    Raises ``InputError`` when the product degree does not fit.
    """
    basis = f.basis if basis is None else basis
    out = np.zeros(basis.dim, dtype=np.result_type(f.coeffs, g.coeffs))
    for alpha, ca in zip(f.basis.monomials, f.coeffs):
        if ca == 0:
            continue
        for beta, cb in zip(g.basis.monomials, g.coeffs):
            if cb == 0:
                continue
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            if sum(gamma) > basis.N:
                raise InputError(
                    "product has degree %d, basis holds %d"
                    % (sum(gamma), basis.N))
            out[basis.position(gamma)] += ca * cb
    return Polynomial(basis=basis, coeffs=out)


# Dict-of-exponents polynomial algebra used internally where the target
# basis is not fixed in advance.

def _dict_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def _linear_form(row):
    d = len(row)
    form = {}
    for i, c in enumerate(row):
        if c != 0:
            form[tuple(1 if k == i else 0 for k in range(d))] = float(c)
    if not form:
        form[(0,) * d] = 0.0
    return form


def _linear_powers(row, n_max):
    """Powers 0..n_max of the linear form <row, x>, as exponent dicts."""
    d = len(row)
    powers = [{(0,) * d: 1.0}]
    base = _linear_form(row)
    for _ in range(n_max):
        powers.append(_dict_mul(powers[-1], base))
    return powers


# --- Gaussian moments -------------------------------------------------------

class MomentTable:
    """Memoized moments ``E[x^alpha]`` for ``x ~ N(0, Sigma)``.

    Uses the pairing recursion
    ``E[x^a] = sum_j Sigma[i, j] (a - e_i)_j E[x^(a - e_i - e_j)]``
    (integration by parts against the Gaussian), which is exact up to
    float arithmetic and costs one dictionary lookup per reduction.
    """

    def __init__(self, Sigma):
        S = np.asarray(Sigma, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise DimensionMismatch("covariance must be square")
        self.Sigma = 0.5 * (S + S.T)
        self._cache = {}

    def __call__(self, alpha):
        alpha = tuple(int(a) for a in alpha)
        if any(a < 0 for a in alpha):
            raise InputError("multi-index entries must be nonnegative")
        if sum(alpha) % 2 == 1:
            return 0.0
        return self._moment(alpha)

    def _moment(self, alpha):
        total_deg = sum(alpha)
        if total_deg == 0:
            return 1.0
        cached = self._cache.get(alpha)
        if cached is not None:
            return cached
        i = next(k for k, a in enumerate(alpha) if a > 0)
        reduced = list(alpha)
        reduced[i] -= 1
        total = 0.0
        for j, count in enumerate(reduced):
            if count == 0 or self.Sigma[i, j] == 0:
                continue
            nxt = list(reduced)
            nxt[j] -= 1
            total += self.Sigma[i, j] * count * self._moment(tuple(nxt))
        self._cache[alpha] = total
        return total


# --- the Galerkin matrix ----------------------------------------------------

def assemble_L(model, basis):
    """Matrix of ``f -> 1/2 Tr(Q D^2 f) + <Ax, Df>`` on the monomials.

    The assembly differentiates monomials symbolically, so the matrix is
    exact up to float products of entries of A, Q with small integers.  The
    drift term preserves total degree and the diffusion term lowers it by
    two, making the matrix block upper triangular in the graded order; that
    structure is exact, not a numerical accident, and is asserted by the
    tests.
    """
    if basis.d != model.dim:
        raise DimensionMismatch(
            "basis is over %d variables, model has dimension %d"
            % (basis.d, model.dim))
    d, dim = basis.d, basis.dim
    A, Q = model.A, model.Q
    L = np.zeros((dim, dim))
    for col, alpha in enumerate(basis.monomials):
        # drift: sum_ij A[i, j] x_j d_i
        for i in range(d):
            if alpha[i] == 0:
                continue
            for j in range(d):
                if A[i, j] == 0:
                    continue
                target = list(alpha)
                target[i] -= 1
                target[j] += 1
                L[basis.position(tuple(target)), col] += A[i, j] * alpha[i]
        # diffusion: 1/2 sum_ij Q[i, j] d_i d_j
        for i in range(d):
            if alpha[i] == 0:
                continue
            for j in range(d):
                if Q[i, j] == 0:
                    continue
                factor = alpha[i] * (alpha[j] - (1 if i == j else 0))
                if factor == 0:
                    continue
                target = list(alpha)
                target[i] -= 1
                target[j] -= 1
                if target[j] < 0:
                    continue
                L[basis.position(tuple(target)), col] += 0.5 * Q[i, j] * factor
    return L


# --- exact transition action ------------------------------------------------

class _MehlerContext:
    """Shared tables for expanding E[(exp(tA) x + G)^alpha]."""

    def __init__(self, model, t, basis):
        self.basis = basis
        self.moments = MomentTable(gramian_t(model, t))
        M = flow(model, t)
        self.row_powers = [_linear_powers(M[i], basis.N)
                           for i in range(basis.d)]

    def column(self, alpha):
        """Coefficients of the transition action on ``x^alpha``."""
        basis = self.basis
        out = np.zeros(basis.dim)
        ranges = [range(a + 1) for a in alpha]
        for k in _iter_product(*ranges):
            m = self.moments(tuple(a - ki for a, ki in zip(alpha, k)))
            if m == 0.0:
                continue
            w = m * prod(comb(a, ki) for a, ki in zip(alpha, k))
            term = {(0,) * basis.d: 1.0}
            for i, ki in enumerate(k):
                if ki:
                    term = _dict_mul(term, self.row_powers[i][ki])
            for exps, c in term.items():
                out[basis.position(exps)] += w * c
        return out


def mehler_apply(model, t, f):
    """Exact transition action on a polynomial.

    Substitutes ``x -> exp(tA) x + G`` with ``G ~ N(0, Q_t)`` and takes the
    expectation termwise; the result is again a polynomial of no higher
    degree on the same basis.  ``t = 0`` is the identity.
    """
    t = float(t)
    if t < 0:
        raise InputError("mehler_apply needs t >= 0, got %g" % t)
    if t == 0.0:
        return Polynomial(basis=f.basis, coeffs=f.coeffs.copy())
    if f.basis.d != model.dim:
        raise DimensionMismatch(
            "polynomial is over %d variables, model has dimension %d"
            % (f.basis.d, model.dim))
    ctx = _MehlerContext(model, t, f.basis)
    out = np.zeros(f.basis.dim, dtype=f.coeffs.dtype)
    for idx, c in enumerate(f.coeffs):
        if c != 0:
            out = out + c * ctx.column(f.basis.monomials[idx])
    return Polynomial(basis=f.basis, coeffs=out)


def mehler_matrix(model, t, basis):
    """Matrix of the transition action on all basis monomials at once."""
    t = float(t)
    if t < 0:
        raise InputError("mehler_matrix needs t >= 0, got %g" % t)
    if t == 0.0:
        return np.eye(basis.dim)
    if basis.d != model.dim:
        raise DimensionMismatch(
            "basis is over %d variables, model has dimension %d"
            % (basis.d, model.dim))
    ctx = _MehlerContext(model, t, basis)
    P = np.empty((basis.dim, basis.dim))
    for col, alpha in enumerate(basis.monomials):
        P[:, col] = ctx.column(alpha)
    return P


# --- chaos decomposition ----------------------------------------------------

@dataclass(frozen=True)
class ChaosDecomposition:
    """Orthogonal layers of the polynomial space under the invariant
    measure.

    Attributes
    ----------
    basis : PolyBasis
    Q_inf : ndarray
        Covariance of the invariant measure.
    factor : RKHSFactor
        The kernel-space coordinates all layers are expressed in.
    gram : ndarray
        Monomial Gram matrix ``E[x^a x^b]``; the inner product.
    hermite : ndarray
        Upper-triangular change of basis: column k holds the monomial
        coefficients of the k-th orthonormal polynomial produced by graded
        Gram-Schmidt.
    occupation_hermite : ndarray
        The product-form orthonormal family: column for multi-index alpha
        holds ``prod_i He_(alpha_i)(xi_i) / sqrt(alpha!)`` where ``xi`` are
        the whitened coordinates from `factor`.  Spans the same layers as
        `hermite` but matches the occupation-number indexing of symmetric
        tensor powers, which is what level-by-level transports need.
    projections : tuple of ndarray
        ``projections[n]`` projects onto the degree-n layer, in monomial
        coordinates.
    """

    basis: PolyBasis
    Q_inf: np.ndarray
    factor: object
    gram: np.ndarray
    hermite: np.ndarray
    occupation_hermite: np.ndarray
    projections: tuple

    def project(self, n, f):
        """Apply the n-th layer projection to a Polynomial (or raw
        coefficient vector)."""
        P = self.projections[n]
        if isinstance(f, Polynomial):
            return Polynomial(basis=f.basis, coeffs=P @ f.coeffs)
        return P @ np.asarray(f)


@lru_cache(maxsize=None)
def _hermite_1d(k):
    """Coefficient list of the k-th probabilists' Hermite polynomial."""
    if k == 0:
        return (1.0,)
    if k == 1:
        return (0.0, 1.0)
    prev2, prev1 = _hermite_1d(k - 2), _hermite_1d(k - 1)
    out = [0.0] * (k + 1)
    for i, c in enumerate(prev1):       # x * He_{k-1}
        out[i + 1] += c
    for i, c in enumerate(prev2):       # - (k-1) He_{k-2}
        out[i] -= (k - 1) * c
    return tuple(out)


def _occupation_hermite_matrix(basis, factor):
    """Columns: normalized Hermite products in the whitened coordinates."""
    d, dim = basis.d, basis.dim
    W = factor.inv_sqrt          # xi = W x, i.i.d. standard normal under mu
    lin_powers = [_linear_powers(W[i], basis.N) for i in range(d)]
    he_of_xi = []
    for i in range(d):
        per_degree = []
        for k in range(basis.N + 1):
            poly = {}
            for m, c in enumerate(_hermite_1d(k)):
                if c == 0:
                    continue
                for exps, pc in lin_powers[i][m].items():
                    poly[exps] = poly.get(exps, 0.0) + c * pc
            per_degree.append(poly)
        he_of_xi.append(per_degree)
    Phi = np.zeros((dim, dim))
    for col, alpha in enumerate(basis.monomials):
        term = {(0,) * d: 1.0}
        for i, a in enumerate(alpha):
            if a:
                term = _dict_mul(term, he_of_xi[i][a])
        scale = 1.0 / sqrt(prod(factorial(a) for a in alpha))
        for exps, c in term.items():
            Phi[basis.position(exps), col] += scale * c
    return Phi


def chaos_decomposition(model, basis):
    """Orthogonalize the monomials under the invariant measure.

    Gram-Schmidt runs in graded order with a second re-orthogonalization
    pass, using the exact Gaussian moment Gram matrix; the resulting
    change of basis is upper triangular, so the layer projections follow
    from a triangular solve.  A warning is issued when the covariance is
    ill-conditioned (eigenvalue ratio beyond 1e12).

    Raises
    ------
    DegenerateMeasure
        When ``Q_inf`` is singular: a full polynomial basis in d variables
        necessarily contains kernel directions, along which no L2 inner
        product exists.  Analyze a reduced model on the range instead.
    """
    if basis.d != model.dim:
        raise DimensionMismatch(
            "basis is over %d variables, model has dimension %d"
            % (basis.d, model.dim))
    Qi = gramian_inf(model)
    lam = np.linalg.eigvalsh(Qi)
    if lam[0] <= model.tol.rank_tol * max(lam[-1], 0.0):
        raise DegenerateMeasure(
            "invariant covariance is singular (eigenvalues %s); polynomials "
            "in kernel directions have no square-integrable normalization"
            % np.array2string(lam, precision=3))
    if lam[-1] / lam[0] > 1e12:
        warnings.warn(
            "invariant covariance is ill-conditioned (ratio %.3e); "
            "orthogonalization may lose digits" % (lam[-1] / lam[0]),
            RuntimeWarning, stacklevel=2)
    factor = rkhs_factor(Qi, model.tol.rank_tol)
    dim = basis.dim
    moments = MomentTable(Qi)
    G = np.empty((dim, dim))
    for i, alpha in enumerate(basis.monomials):
        for j in range(i, dim):
            beta = basis.monomials[j]
            G[i, j] = G[j, i] = moments(
                tuple(a + b for a, b in zip(alpha, beta)))
    R = np.zeros((dim, dim))
    for k in range(dim):
        v = np.zeros(dim)
        v[k] = 1.0
        for _ in range(2):      # re-orthogonalize: twice is enough
            coeffs = R[:, :k].T @ (G @ v)
            v = v - R[:, :k] @ coeffs
        nrm = float(v @ G @ v)
        if nrm <= 0:
            raise DegenerateMeasure(
                "monomial %r collapsed during orthogonalization"
                % (basis.monomials[k],))
        R[:, k] = v / sqrt(nrm)
    R_inv = scipy.linalg.solve_triangular(R, np.eye(dim))
    projections = []
    for n in range(basis.N + 1):
        sel = basis.degree_slice(n)
        projections.append(R[:, sel] @ R_inv[sel, :])
    Phi = _occupation_hermite_matrix(basis, factor)
    return ChaosDecomposition(
        basis=basis,
        Q_inf=Qi,
        factor=factor,
        gram=G,
        hermite=R,
        occupation_hermite=Phi,
        projections=tuple(projections),
    )


# --- three-way consistency --------------------------------------------------

@dataclass(frozen=True)
class SecondQuantizationReport:
    """Pairwise deviations between three routes to the transition matrix:
    the exponential of the Galerkin generator, the exact Gaussian
    substitution, and the level-by-level lift of the restricted flow
    transported through the chaos decomposition."""

    t: float
    N: int
    tol: float
    residual_generator_vs_mehler: float
    residual_generator_vs_lift: float
    residual_mehler_vs_lift: float
    max_residual: float
    passed: bool

    def to_dict(self):
        return {
            "t": self.t,
            "N": self.N,
            "tol": self.tol,
            "residual_generator_vs_mehler": self.residual_generator_vs_mehler,
            "residual_generator_vs_lift": self.residual_generator_vs_lift,
            "residual_mehler_vs_lift": self.residual_mehler_vs_lift,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def verify_second_quantization(model, t, N, tol=1e-8):
    """Compute the transition matrix three independent ways and compare.

    (a) ``expm(t L)`` with L the Galerkin matrix; (b) the exact Gaussian
    substitution applied to every monomial; (c) the block-diagonal lift
    acting as the n-th symmetric power of the adjoint restricted flow on
    the n-th chaos layer, conjugated back to monomial coordinates by the
    occupation-indexed Hermite family.  All three must agree entrywise;
    the largest pairwise deviation is reported.
    """
    t = float(t)
    if t < 0:
        raise InputError("verify_second_quantization needs t >= 0")
    basis = poly_basis(model.dim, N)
    P_gen = scipy.linalg.expm(t * assemble_L(model, basis))
    P_meh = mehler_matrix(model, t, basis)
    chaos = chaos_decomposition(model, basis)
    B = smu_matrix(model, chaos.factor, t)
    blocks = [sym_power(B.T, n) for n in range(N + 1)]
    lift = scipy.linalg.block_diag(*blocks)
    Phi = chaos.occupation_hermite
    P_lift = Phi @ lift @ np.linalg.solve(Phi, np.eye(basis.dim))
    r_ab = float(np.abs(P_gen - P_meh).max())
    r_ac = float(np.abs(P_gen - P_lift).max())
    r_bc = float(np.abs(P_meh - P_lift).max())
    worst = max(r_ab, r_ac, r_bc)
    return SecondQuantizationReport(
        t=t,
        N=N,
        tol=float(tol),
        residual_generator_vs_mehler=r_ab,
        residual_generator_vs_lift=r_ac,
        residual_mehler_vs_lift=r_bc,
        max_residual=worst,
        passed=worst <= tol,
    )


# --- sampling cross-check ---------------------------------------------------

@dataclass(frozen=True)
class PathStats:
    """Empirical moments of an Euler-Maruyama ensemble at the horizon."""

    mean: np.ndarray
    cov: np.ndarray
    stderr_mean: np.ndarray
    stderr_cov: np.ndarray
    n_paths: int
    steps: int
    dt: float
    effective_t: float
    seed: int

    def to_dict(self):
        return {
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
            "stderr_mean": self.stderr_mean.tolist(),
            "stderr_cov": self.stderr_cov.tolist(),
            "n_paths": self.n_paths,
            "steps": self.steps,
            "dt": self.dt,
            "effective_t": self.effective_t,
            "seed": self.seed,
        }


def simulate_paths(model, x0, t, dt, n_paths, seed):
    """Euler-Maruyama ensemble started at x0, summarized at time t.

    The number of steps is ``round(t / dt)``; the exact horizon actually
    integrated is reported as ``effective_t``.  Increments use a seeded
    generator, so results are reproducible bit for bit.  Standard errors
    are the usual Gaussian ones (for the covariance,
    ``sqrt((C_ii C_jj + C_ij^2) / n)``).
    """
    t, dt = float(t), float(dt)
    if dt <= 0:
        raise InvalidStep("dt must be positive, got %g" % dt)
    if t <= 0 or dt >= t:
        raise InvalidStep("need 0 < dt < t, got dt=%g, t=%g" % (dt, t))
    if n_paths < 1:
        raise InvalidStep("n_paths must be at least 1, got %d" % n_paths)
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.shape != (model.dim,):
        raise DimensionMismatch(
            "x0 has length %d, model has dimension %d"
            % (x0.size, model.dim))
    steps = max(int(round(t / dt)), 1)
    rng = np.random.default_rng(seed)
    X = np.tile(x0, (n_paths, 1))
    noise = psd_sqrt(model.Q) * sqrt(dt)
    At = model.A.T
    for _ in range(steps):
        X = X + (X @ At) * dt + rng.standard_normal(X.shape) @ noise
    mean = X.mean(axis=0)
    if n_paths > 1:
        cov = np.atleast_2d(np.cov(X.T, ddof=1))
    else:
        cov = np.zeros((model.dim, model.dim))
    var = np.clip(np.diag(cov), 0.0, None)
    stderr_mean = np.sqrt(var / n_paths)
    stderr_cov = np.sqrt(
        (np.outer(var, var) + cov ** 2) / max(n_paths - 1, 1))
    return PathStats(
        mean=mean,
        cov=cov,
        stderr_mean=stderr_mean,
        stderr_cov=stderr_cov,
        n_paths=int(n_paths),
        steps=steps,
        dt=dt,
        effective_t=steps * dt,
        seed=int(seed),
    )


def euler_mean_cov(model, x0, t, dt):
    """Exact mean and covariance of the Euler-Maruyama scheme itself.

    Iterates ``m -> (I + dt A) m`` and ``C -> (I + dt A) C (I + dt A)' +
    dt Q`` for ``round(t / dt)`` steps.  The difference between this
    covariance and the true one quantifies the O(dt) discretization bias
    separately from Monte-Carlo noise.
    """
    t, dt = float(t), float(dt)
    if dt <= 0 or dt >= t:
        raise InvalidStep("need 0 < dt < t, got dt=%g, t=%g" % (dt, t))
    steps = max(int(round(t / dt)), 1)
    d = model.dim
    F = np.eye(d) + dt * model.A
    m = np.asarray(x0, dtype=float).ravel().copy()
    C = np.zeros((d, d))
    for _ in range(steps):
        m = F @ m
        C = F @ C @ F.T + dt * model.Q
    return m, C, steps * dt
