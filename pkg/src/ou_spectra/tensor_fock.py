"""Symmetric tensor powers, ladder operators, and truncated second
quantization over a finite-dimensional base space.

Level n of the symmetric tensor algebra over ``R^d`` is coordinatized by
occupation vectors: multi-indices ``alpha`` with ``|alpha| = n``, where the
basis vector ``e_alpha`` is the normalized symmetrization of the word with
``alpha_i`` copies of the i-th base vector.  The isometric embedding ``J_n``
of level n into the full n-fold tensor power makes every construction here a
compression of a Kronecker product:

    sym_power(T, n)  =  J_n' (T (x) ... (x) T) J_n,
    dgamma(M, n)     =  J_n' (sum_j I (x)...(x) M (x)...(x) I) J_n,

and ladder operators act on occupation numbers directly
(``creation(h)`` sends ``e_alpha`` to ``sum_i h_i sqrt(alpha_i + 1)
e_(alpha + delta_i)``).  ``annihilation`` is the transpose of ``creation``,
so the adjoint relation holds exactly, not up to roundoff.

A :class:`FockTruncation` keeps the blocks of all levels up to a cap N.  Its
``spectrum`` is the union of the block spectra; ``embedded_spectrum`` adds
the point 0, which is the action on all discarded levels when the truncation
is viewed inside the full algebra, and is the right object for comparing
truncations of different depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iter_product
from math import comb, factorial, prod

import numpy as np
import scipy.linalg

from .config import DEFAULT
from .errors import DimensionMismatch, InputError, NotContraction, SizeCap
from .spectra import DEFAULT_CLUSTER_RADIUS, SpectrumSet, eig

__all__ = [
    "multi_indices", "sym_dim", "SymBasis", "sym_basis", "embedding",
    "tensor_power", "sym_power", "creation", "annihilation", "dgamma",
    "FockTruncation", "second_quantization",
]

DEFAULT_SIZE_CAP = DEFAULT.size_cap


@lru_cache(maxsize=None)
def multi_indices(d, n):
    """All multi-indices of length d summing to n, in descending
    lexicographic order (e.g. d=2, n=2: (2,0), (1,1), (0,2))."""
    if d < 1:
        raise InputError("multi_indices needs d >= 1")
    if n < 0:
        raise InputError("multi_indices needs n >= 0")
    if d == 1:
        return ((n,),)
    out = []
    for k in range(n, -1, -1):
        for rest in multi_indices(d - 1, n - k):
            out.append((k,) + rest)
    return tuple(out)


def sym_dim(d, n):
    """Dimension of level n over R^d: C(d + n - 1, n)."""
    return comb(d + n - 1, n)


@dataclass(frozen=True)
class SymBasis:
    """Occupation basis of one level: the ordered multi-indices and the
    inverse lookup table."""

    d: int
    n: int
    indices: tuple

    @property
    def dim(self):
        return len(self.indices)

    def position(self, alpha):
        return _position_table(self.d, self.n)[tuple(alpha)]


@lru_cache(maxsize=None)
def _position_table(d, n):
    return {alpha: i for i, alpha in enumerate(multi_indices(d, n))}


@lru_cache(maxsize=None)
def sym_basis(d, n):
    return SymBasis(d=d, n=n, indices=multi_indices(d, n))


def _check_cap(side, cap, what):
    if side > cap:
        raise SizeCap("%s would have side %d, above the cap %d"
                      % (what, side, cap))


def _readonly(a):
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def _embedding_cached(d, n):
    dim = sym_dim(d, n)
    J = np.zeros((d ** n, dim))
    if n == 0:
        J[0, 0] = 1.0
        return _readonly(J)
    basis = sym_basis(d, n)
    nfact = factorial(n)
    weights = [np.sqrt(prod(factorial(a) for a in alpha) / nfact)
               for alpha in basis.indices]
    for word in _iter_product(range(d), repeat=n):
        flat = 0
        alpha = [0] * d
        for letter in word:
            flat = flat * d + letter
            alpha[letter] += 1
        col = basis.position(tuple(alpha))
        J[flat, col] = weights[col]
    return J


def embedding(d, n, cap=DEFAULT_SIZE_CAP):
    """Isometry from level n (occupation coordinates) into the plain n-fold
    tensor power, as a ``(d**n, sym_dim(d, n))`` matrix with orthonormal
    columns."""
    _check_cap(d ** n, cap, "embedding of level %d" % n)
    return _embedding_cached(d, n)


def _square(T, name):
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise DimensionMismatch("%s must be square, got shape %r"
                                % (name, T.shape))
    return T


def tensor_power(T, n, cap=DEFAULT_SIZE_CAP):
    """Plain n-fold Kronecker power of T (n = 0 gives the 1x1 identity)."""
    T = _square(T, "tensor_power argument")
    if n < 0:
        raise InputError("tensor_power needs n >= 0")
    d = T.shape[0]
    _check_cap(d ** n, cap, "tensor power %d" % n)
    out = np.eye(1, dtype=T.dtype)
    for _ in range(n):
        out = np.kron(out, T)
    return out


def sym_power(T, n, cap=DEFAULT_SIZE_CAP):
    """Restriction of the n-fold tensor power to the symmetric subspace,
    in occupation coordinates.

    The Kronecker power is materialized as an intermediate, so the cap
    applies to ``d**n`` as well as to the symmetric dimension.
    """
    T = _square(T, "sym_power argument")
    if n < 0:
        raise InputError("sym_power needs n >= 0")
    d = T.shape[0]
    _check_cap(max(d ** n, sym_dim(d, n)), cap, "symmetric power %d" % n)
    J = embedding(d, n, cap)
    return J.T @ tensor_power(T, n, cap) @ J


def creation(h, n, cap=DEFAULT_SIZE_CAP):
    """Creation by the vector h, mapping level n to level n + 1.

    Sends ``e_alpha`` to ``sum_i h_i sqrt(alpha_i + 1) e_(alpha+delta_i)``.
    """
    h = np.asarray(h).ravel()
    if n < 0:
        raise InputError("creation needs a level n >= 0")
    d = h.shape[0]
    if d < 1:
        raise DimensionMismatch("creation needs a nonempty vector")
    _check_cap(sym_dim(d, n + 1), cap, "creation target level %d" % (n + 1))
    src = sym_basis(d, n)
    dst = sym_basis(d, n + 1)
    M = np.zeros((dst.dim, src.dim), dtype=h.dtype)
    for col, alpha in enumerate(src.indices):
        for i in range(d):
            if h[i] == 0:
                continue
            beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
            M[dst.position(beta), col] += h[i] * np.sqrt(alpha[i] + 1.0)
    return M


def annihilation(h, n, cap=DEFAULT_SIZE_CAP):
    """Annihilation by the vector h, mapping level n to level n - 1.

    Defined as the adjoint of :func:`creation`, taken literally: the
    returned matrix is the conjugate transpose of ``creation(h, n - 1)``,
    so the duality holds exactly by construction.
    """
    if n < 1:
        raise InputError("annihilation needs a level n >= 1")
    return creation(h, n - 1, cap).conj().T.copy()


def dgamma(M, n, cap=DEFAULT_SIZE_CAP):
    """Derivation (number-operator style lift) of M on level n:
    the compression of ``sum_j I (x)...(x) M (x)...(x) I``.

    Level 0 gives the 1x1 zero matrix.  The eigenvalues of the result are
    all sums of n eigenvalues of M (with repetition).
    """
    M = _square(M, "dgamma argument")
    if n < 0:
        raise InputError("dgamma needs n >= 0")
    d = M.shape[0]
    if n == 0:
        return np.zeros((1, 1), dtype=M.dtype)
    _check_cap(d ** n, cap, "dgamma on level %d" % n)
    eye = np.eye(d, dtype=M.dtype)
    total = np.zeros((d ** n, d ** n), dtype=M.dtype)
    for j in range(n):
        term = np.eye(1, dtype=M.dtype)
        for k in range(n):
            term = np.kron(term, M if k == j else eye)
        total += term
    J = embedding(d, n, cap)
    return J.T @ total @ J


@dataclass(frozen=True)
class FockTruncation:
    """Block-diagonal truncation of a second quantization at level cap N.

    ``levels[n]`` is the block acting on level n (symmetric occupation
    coordinates when ``symmetric``, plain tensor coordinates otherwise);
    ``levels[0]`` is the 1x1 identity block of the vacuum.
    """

    base_dim: int
    symmetric: bool
    levels: tuple

    @property
    def N(self):
        return len(self.levels) - 1

    @property
    def dim(self):
        return sum(block.shape[0] for block in self.levels)

    def matrix(self):
        """The full block-diagonal matrix on the truncated algebra."""
        return scipy.linalg.block_diag(*self.levels)

    def spectrum(self, cluster_radius=DEFAULT_CLUSTER_RADIUS):
        """Union of the block spectra (always contains 1, from the
        vacuum)."""
        pts = np.concatenate([eig(block, cluster_radius).points
                              for block in self.levels])
        return SpectrumSet(pts, cluster_radius)

    def embedded_spectrum(self, cluster_radius=DEFAULT_CLUSTER_RADIUS):
        """Spectrum of the truncation viewed inside the full algebra.

        Extending by zero on every discarded level adds the point 0; with
        it, truncations at different caps of the same contraction are
        comparable in Hausdorff distance (the missing levels contribute
        points of modulus at most ``norm(T)**(N+1)``, all within that
        distance of 0).
        """
        return self.spectrum(cluster_radius).union([0.0 + 0.0j])


def second_quantization(T, N, *, symmetric=True, cap=DEFAULT_SIZE_CAP,
                        contraction_tol=1e-12, allow_noncontraction=False):
    """All (symmetric) tensor powers of T up to level N, as one truncation.

    T must be a contraction (operator norm at most ``1 + contraction_tol``)
    unless ``allow_noncontraction`` is set; without the contraction
    property the discarded levels are not small and the truncation does not
    approximate anything.
    """
    T = _square(T, "second_quantization argument")
    if N < 0:
        raise InputError("second_quantization needs N >= 0")
    norm = float(np.linalg.norm(T, 2))
    if norm > 1.0 + contraction_tol and not allow_noncontraction:
        raise NotContraction(
            "operator norm %.12g exceeds 1; pass allow_noncontraction=True "
            "to lift anyway" % norm)
    build = sym_power if symmetric else tensor_power
    levels = tuple(build(T, n, cap) for n in range(N + 1))
    return FockTruncation(base_dim=T.shape[0], symmetric=symmetric,
                          levels=levels)
