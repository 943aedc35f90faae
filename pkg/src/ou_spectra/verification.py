"""Named residual checks for every structural identity the package
promises, runnable on a concrete model or on randomly generated ones.

Each check returns a :class:`CheckResult` with the measured residual and
the tolerance it was held to; the CLI turns a failed list into exit code 3.
Checks that do not apply to a model (no steady state for an unstable drift,
no chaos layers for a singular invariant covariance) are skipped with a
note rather than silently passed.

The module also hosts the random generators for stable models and strict
contractions used by the property tests, so the CLI's ``--random`` mode and
the test suite draw from the same distributions.  Defective (Jordan-type)
test matrices are always produced in exactly triangular form: the dense
eigensolver returns triangular eigenvalues exactly, whereas a similarity
transform of a defective matrix perturbs them at the k-th root of roundoff,
which would drown every tight spectral tolerance in this suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from . import gramian as _gr
from .config import DEFAULT
from .errors import CriteriaDisagree, DegenerateMeasure, OUSpectraError
from .gramian import (
    OUModel,
    controllability_rank,
    flow,
    gramian_t,
    invertibility_equivalence_report,
    rkhs_factor,
    smu_matrix,
    smu_norm,
    strong_feller_check,
    validate,
)
from .ou_operator import (
    MomentTable,
    assemble_L,
    chaos_decomposition,
    mehler_matrix,
    poly_basis,
    verify_second_quantization,
)
from .spectra import (
    LatticeWindow,
    SpectrumSet,
    eig,
    hausdorff,
    lattice_spectrum,
    product_set,
)
from .tensor_fock import (
    annihilation,
    creation,
    dgamma,
    embedding,
    second_quantization,
    sym_dim,
    sym_power,
    tensor_power,
)

__all__ = [
    "CheckResult", "UNTESTED_THEORY", "model_suite", "contraction_suite",
    "spectra_suite", "random_suite", "summarize", "random_stable_model",
    "random_contraction",
]

#: Claims from the underlying theory that desk-scale computation cannot
#: exercise; reported verbatim in verify output so nobody mistakes the
#: passing suite for evidence about them.
UNTESTED_THEORY = (
    "L^p independence for p != 2: only the L^2 realization is computed; "
    "the p-independence of the spectrum is reported, not tested.",
    "Infinite-dimensional state spaces: every statement is exercised on "
    "finite-dimensional truncations only.",
    "Spectral closure: with finitely many eigenvalues no closure points "
    "exist inside a bounded window, so windowed set equality is the whole "
    "testable content.",
    "Hypercontractivity constants of the transition semigroup are not "
    "computed.",
)


@dataclass(frozen=True)
class CheckResult:
    """One named invariant with its measured residual."""

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _check(name, residual, tolerance, detail=""):
    residual = float(residual)
    return CheckResult(name=name, passed=residual <= tolerance,
                       residual=residual, tolerance=float(tolerance),
                       detail=detail)


def _skip(name, detail):
    return CheckResult(name=name, passed=True, residual=0.0, tolerance=0.0,
                       detail="skipped: " + detail)


def _q_inf(model):
    # Small indirection so tests can inject a corrupted steady-state
    # covariance and watch the suite fail (negative control).
    return _gr.gramian_inf(model)


def _quadrature_gramian(model, t):
    integrand = lambda s: scipy.linalg.expm(s * model.A) @ model.Q \
        @ scipy.linalg.expm(s * model.A).T
    val, _ = scipy.integrate.quad_vec(integrand, 0.0, t,
                                      epsabs=1e-12, epsrel=1e-12)
    return val


def model_suite(model, *, degree=3, levels=3, t_grid=(0.1, 0.5, 1.0, 2.0),
                seed=0):
    """All model-applicable invariants, as a list of check results."""
    rng = np.random.default_rng(seed)
    out = []
    t_grid = tuple(float(t) for t in t_grid)
    d = model.dim

    # -- horizon Gramian versus an independent quadrature oracle ---------
    resid = 0.0
    for t in t_grid:
        Qt = gramian_t(model, t)
        oracle = _quadrature_gramian(model, t)
        resid = max(resid, np.abs(Qt - oracle).max()
                    / (1.0 + np.abs(Qt).max()))
    out.append(_check("gramian_t_quadrature_agreement", resid, 1e-8))

    # -- PSD and monotonicity of the Gramian family ----------------------
    psd_floor = 0.0
    mono_floor = 0.0
    grams = {t: gramian_t(model, t) for t in t_grid}
    scale = max(max(np.abs(g).max() for g in grams.values()), 1.0)
    for t in t_grid:
        psd_floor = max(psd_floor, -np.linalg.eigvalsh(grams[t])[0])
    for s, t in zip(t_grid, t_grid[1:]):
        mono_floor = max(
            mono_floor, -np.linalg.eigvalsh(grams[t] - grams[s])[0])
    out.append(_check("gramian_t_psd", psd_floor, 1e-10 * scale))
    out.append(_check("gramian_monotone_in_t", mono_floor, 1e-10 * scale))

    # -- rank criteria must agree ----------------------------------------
    try:
        feller = strong_feller_check(model, t_grid[0])
        out.append(_check("strong_feller_rank_agreement", 0.0, 0.0,
                          detail="strong_feller=%s" % feller))
    except CriteriaDisagree as exc:
        feller = None
        out.append(CheckResult("strong_feller_rank_agreement", False,
                               math.inf, 0.0, str(exc)))

    inv_rep = invertibility_equivalence_report(model, t_grid=t_grid[:3])
    if inv_rep.equivalent is None:
        out.append(_skip("invertibility_equivalence", inv_rep.note))
    else:
        out.append(_check("invertibility_equivalence",
                          0.0 if inv_rep.equivalent else math.inf, 0.0,
                          detail=inv_rep.note))

    if not _gr.is_stable(model):
        out.append(_skip("steady_state_checks",
                         "drift not stable, no invariant measure"))
        return out

    # -- steady-state identities ------------------------------------------
    Qi = _q_inf(model)
    lyap = np.abs(model.A @ Qi + Qi @ model.A.T + model.Q).max()
    out.append(_check("lyapunov_residual", lyap,
                      1e-10 * (1.0 + np.abs(model.Q).max())))

    split = 0.0
    for t in (0.1, 1.0, 5.0):
        F = flow(model, t)
        split = max(split, np.linalg.norm(
            Qi - gramian_t(model, t) - F @ Qi @ F.T, 2))
    out.append(_check("splitting_identity", split,
                      1e-8 * max(np.linalg.norm(Qi, 2), 1e-300)))

    mono_inf = max(-np.linalg.eigvalsh(Qi - grams[t])[0] for t in t_grid)
    out.append(_check("gramian_dominated_by_steady_state", mono_inf,
                      1e-10 * scale))

    factor = rkhs_factor(Qi, model.tol.rank_tol)
    fact_resid = np.abs(Qi - factor.factor @ factor.factor.T).max()
    out.append(_check("rkhs_factorization", fact_resid,
                      1e-10 * (1.0 + np.abs(Qi).max()),
                      detail="rank=%d" % factor.rank))

    # -- restricted flow: contraction, semigroup law, norm identity ------
    worst_norm = max(smu_norm(model, factor, t) for t in t_grid)
    out.append(_check("restricted_flow_contraction", worst_norm - 1.0, 1e-10))
    if feller:
        strict = max(smu_norm(model, factor, t) for t in t_grid)
        out.append(_check("restricted_flow_strict_contraction",
                          strict - 1.0, -1e-15,
                          detail="norm must stay below 1"))

    semi = np.abs(smu_matrix(model, factor, 0.3) @
                  smu_matrix(model, factor, 0.7) -
                  smu_matrix(model, factor, 1.0)).max()
    out.append(_check("restricted_flow_semigroup_law", semi, 1e-8))

    ident = 0.0
    for t in t_grid:
        K = _gr.quadratic_form_ratio_sup(Qi, gramian_t(model, t),
                                         model.tol.rank_tol)
        if not math.isfinite(K) or K <= 0:
            continue
        lhs = smu_norm(model, factor, t) ** 2
        rhs = 1.0 - 1.0 / K
        ident = max(ident, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-12))
    out.append(_check("norm_identity_vs_rayleigh_quotient", ident, 1e-6))

    # -- generator-level identities ---------------------------------------
    basis = poly_basis(d, degree)
    L = assemble_L(model, basis)
    tri = 0.0
    for i, alpha in enumerate(basis.monomials):
        for j, beta in enumerate(basis.monomials):
            if sum(alpha) > sum(beta):
                tri = max(tri, abs(L[i, j]))
    out.append(_check("galerkin_block_triangular", tri, 0.0))

    window = _covering_window(eig(model.A).points, degree)
    predicted = lattice_spectrum(eig(model.A), window)
    out.append(_check("galerkin_spectrum_lattice_match",
                      hausdorff(eig(L), predicted), 1e-6,
                      detail="degree=%d" % degree))

    P = {t: mehler_matrix(model, t, basis) for t in (0.3, 0.7, 1.0)}
    out.append(_check("transition_semigroup_law",
                      np.abs(P[0.3] @ P[0.7] - P[1.0]).max(), 1e-9))

    try:
        chaos = chaos_decomposition(model, basis)
    except DegenerateMeasure as exc:
        out.append(_skip("chaos_checks", str(exc)))
        return out

    eye = np.eye(basis.dim)
    out.append(_check("chaos_resolution_of_identity",
                      np.abs(sum(chaos.projections) - eye).max(), 1e-10))
    ortho = 0.0
    idem = 0.0
    for n, Pn in enumerate(chaos.projections):
        idem = max(idem, np.abs(Pn @ Pn - Pn).max())
        for m in range(n + 1, len(chaos.projections)):
            ortho = max(ortho, np.abs(Pn @ chaos.projections[m]).max())
    out.append(_check("chaos_projections_idempotent", idem, 1e-10))
    out.append(_check("chaos_projections_orthogonal", ortho, 1e-10))

    inv = np.abs(chaos.projections[0] @ (P[1.0] - eye)).max()
    out.append(_check("invariant_measure_fixed_mean", inv, 1e-10))

    out.append(_check("chaos_covariance_permanent",
                      _chaos_covariance_residual(model, chaos, rng), 1e-9))

    rep = verify_second_quantization(model, 1.0, min(levels, degree),
                                     tol=1e-8)
    out.append(_check("second_quantization_three_way", rep.max_residual,
                      rep.tol, detail="t=1, N=%d" % rep.N))

    out.append(_eigenvector_degree_check(model, basis, L, window))
    return out


def _covering_window(points, n_terms, slack=1e-6):
    re_min = n_terms * float(points.real.min()) - slack
    im_max = max(n_terms * float(np.abs(points.imag).max()), slack)
    return LatticeWindow(re_min=re_min, im_max=im_max, max_terms=n_terms)


def _chaos_covariance_residual(model, chaos, rng):
    """Pairing identity for the covariance of projected products of linear
    functionals: the second-layer inner product of phi_h1 phi_h2 and
    phi_k1 phi_k2 equals the permanent of the kernel-space Gram matrix."""
    basis = chaos.basis
    if basis.N < 2:
        return 0.0
    Qi_inv = np.linalg.inv(chaos.Q_inf)
    worst = 0.0
    for _ in range(3):
        h = rng.standard_normal((2, model.dim))
        k = rng.standard_normal((2, model.dim))
        fs = []
        for pair in (h, k):
            lin0 = _linear_poly(basis, Qi_inv @ pair[0])
            lin1 = _linear_poly(basis, Qi_inv @ pair[1])
            fs.append(_poly_product(basis, lin0, lin1))
        I2 = chaos.projections[2]
        lhs = float((I2 @ fs[0]) @ chaos.gram @ (I2 @ fs[1]))
        ip = lambda a, b: float(a @ Qi_inv @ b)
        rhs = ip(h[0], k[0]) * ip(h[1], k[1]) + ip(h[0], k[1]) * ip(h[1], k[0])
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1.0))
    return worst


def _linear_poly(basis, coeffs):
    v = np.zeros(basis.dim)
    for i, c in enumerate(coeffs):
        alpha = tuple(1 if j == i else 0 for j in range(basis.d))
        v[basis.position(alpha)] = c
    return v


def _poly_product(basis, a, b):
    out = np.zeros(basis.dim)
    nza = np.nonzero(a)[0]
    nzb = np.nonzero(b)[0]
    for i in nza:
        for j in nzb:
            gamma = tuple(x + y for x, y in zip(basis.monomials[i],
                                                basis.monomials[j]))
            out[basis.position(gamma)] += a[i] * b[j]
    return out


def _eigenvector_degree_check(model, basis, L, window):
    """Eigenvalues realized by a unique sum of n drift eigenvalues must
    have eigenvectors supported in degrees <= n."""
    name = "eigenvector_degree_support"
    depths = _lattice_depths(eig(model.A).points, window)
    vals, vecs = np.linalg.eig(L)
    sep = 1e-5
    worst = 0.0
    tested = 0
    for idx, lam in enumerate(vals):
        others = np.abs(np.delete(vals, idx) - lam)
        if others.size and others.min() < sep:
            continue
        near = [(v, n) for v, n in depths if abs(v - lam) <= 1e-6]
        if len(near) != 1:
            continue
        n = near[0][1]
        v = vecs[:, idx]
        hi = basis.degree_slice(n).stop
        tail = np.abs(v[hi:]).max() if hi < basis.dim else 0.0
        worst = max(worst, tail / np.abs(v).max())
        tested += 1
    if tested == 0:
        return _skip(name, "no isolated, uniquely represented eigenvalues")
    return _check(name, worst, 1e-8, detail="%d eigenvalues tested" % tested)


def _lattice_depths(points, window):
    """Lattice values with the total count that produced them; values
    reachable at several counts are reported once per count."""
    from collections import deque
    z = points
    m = len(z)
    start = (0,) * m
    seen = {start}
    queue = deque([(start, 0.0 + 0.0j)])
    values = []
    while queue:
        counts, val = queue.popleft()
        values.append((val, sum(counts)))
        if sum(counts) >= window.max_terms:
            continue
        for j in range(m):
            nxt = counts[:j] + (counts[j] + 1,) + counts[j + 1:]
            if nxt in seen:
                continue
            nval = val + z[j]
            if nval.real < window.re_min - 1e-9:
                continue
            seen.add(nxt)
            queue.append((nxt, nval))
    return values


def contraction_suite(T, *, levels=3, seed=0, prefix="", spectral=True):
    """Tensor-algebra invariants for one contraction matrix.

    ``spectral=False`` skips the eigenvalue-set comparisons; callers do
    that for matrices whose eigenproblem is ill-conditioned (a defective
    matrix that is not triangular), where eigensolver output is meaningless
    at these tolerances.
    """
    rng = np.random.default_rng(seed)
    T = np.asarray(T, dtype=float)
    d = T.shape[0]
    out = []
    tnorm = np.linalg.norm(T, 2)

    norm_resid = 0.0
    sym_resid = 0.0
    for n in range(1, levels + 1):
        norm_resid = max(norm_resid, abs(
            np.linalg.norm(tensor_power(T, n), 2) - tnorm ** n))
        sym_resid = max(sym_resid, abs(
            np.linalg.norm(sym_power(T, n), 2) - tnorm ** n))
    out.append(_check(prefix + "tensor_norm_law", norm_resid, 1e-10))
    out.append(_check(prefix + "sym_norm_law", sym_resid, 1e-8))

    S = random_contraction(rng, d=d, kind="diagonalizable")
    snorm = np.linalg.norm(S, 2)
    tele = 0.0
    for n in range(1, levels + 1):
        diff = np.linalg.norm(tensor_power(T, n) - tensor_power(S, n), 2)
        bound = np.linalg.norm(T - S, 2) * sum(
            snorm ** j * tnorm ** (n - 1 - j) for j in range(n))
        tele = max(tele, diff - bound)
    out.append(_check(prefix + "telescoping_bound", tele, 1e-10))

    homo = 0.0
    for n in range(1, levels + 1):
        homo = max(homo, np.abs(
            sym_power(T @ S, n) - sym_power(T, n) @ sym_power(S, n)).max())
    out.append(_check(prefix + "sym_power_homomorphism", homo, 1e-10))

    emb = max(np.abs(embedding(d, n).T @ embedding(d, n)
                     - np.eye(sym_dim(d, n))).max()
              for n in range(levels + 1))
    out.append(_check(prefix + "embedding_isometry", emb, 1e-12))

    comm = 0.0
    lower = 0.0
    dual = 0.0
    for n in range(0, 4):
        h = rng.standard_normal(d)
        up = annihilation(h, n + 1) @ creation(h, n)
        down = creation(h, n - 1) @ annihilation(h, n) if n >= 1 \
            else np.zeros_like(up)
        comm = max(comm, np.abs(
            up - down - (h @ h) * np.eye(up.shape[0])).max())
        dual = max(dual, np.abs(
            annihilation(h, n + 1) - creation(h, n).T).max())
        g = rng.standard_normal(creation(h, n).shape[1])
        lower = max(lower, np.linalg.norm(g) * np.linalg.norm(h)
                    - np.linalg.norm(creation(h, n) @ g))
    out.append(_check(prefix + "ladder_commutation", comm, 1e-12))
    out.append(_check(prefix + "ladder_duality_exact", dual, 0.0))
    out.append(_check(prefix + "ladder_lower_bound", lower, 1e-12))

    M = rng.standard_normal((d, d))
    side = sym_dim(d, 2)
    errs = []
    for h_step in (1e-4, 1e-5):
        approx = (sym_power(scipy.linalg.expm(h_step * M), 2)
                  - np.eye(side)) / h_step
        errs.append(np.abs(approx - dgamma(M, 2)).max())
    # First-order error must shrink linearly with h (ratio near 0.1) and
    # already be small at the coarse step.
    scale = max(np.linalg.norm(M, 2) ** 2, 1.0)
    out.append(_check(prefix + "dgamma_fd_error_small",
                      errs[0], 1e-2 * scale))
    out.append(_check(prefix + "dgamma_fd_error_linear_in_h",
                      errs[1] / max(errs[0], 1e-300), 0.2))

    if spectral:
        base = eig(T)
        spec_resid = 0.0
        for n in range(1, levels + 1):
            prods = product_set(base, n)
            spec_resid = max(
                spec_resid,
                hausdorff(eig(tensor_power(T, n)), prods),
                hausdorff(eig(sym_power(T, n)), prods))
        out.append(_check(prefix + "tensor_sym_product_spectra", spec_resid,
                          1e-7))

        if np.all(base.points.real < 0):
            dg_resid = 0.0
            for n in range(1, levels + 1):
                sums = SpectrumSet(
                    [sum(c) for c in _combos(base.points, n)])
                dg_resid = max(dg_resid, hausdorff(eig(dgamma(T, n)), sums))
            out.append(_check(prefix + "dgamma_sum_spectrum", dg_resid, 1e-7))

        if tnorm < 1:
            trunc = second_quantization(T, levels)
            spec = trunc.spectrum()
            pred = SpectrumSet([1.0 + 0.0j])
            for n in range(1, levels + 1):
                pred = pred.union(product_set(base, n))
            out.append(_check(prefix + "second_quantization_spectrum",
                              hausdorff(spec, pred), 1e-7))
            bigger = second_quantization(T, levels + 1)
            out.append(_check(
                prefix + "truncation_stability",
                hausdorff(trunc.embedded_spectrum(),
                          bigger.embedded_spectrum()),
                tnorm ** (levels + 1) + 1e-9))
    return out


def _combos(points, n):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(points, n)


def spectra_suite(seed=0):
    """Metric and enumeration properties of the spectrum-set algebra."""
    rng = np.random.default_rng(seed)
    out = []

    tri = 0.0
    sym = 0.0
    for _ in range(5):
        a, b, c = (SpectrumSet(rng.standard_normal(4)
                               + 1j * rng.standard_normal(4))
                   for _ in range(3))
        sym = max(sym, abs(hausdorff(a, b) - hausdorff(b, a)))
        tri = max(tri, hausdorff(a, c) - hausdorff(a, b) - hausdorff(b, c))
    out.append(_check("hausdorff_symmetry", sym, 0.0))
    out.append(_check("hausdorff_triangle_inequality", tri, 1e-12))

    z = -0.5 - rng.random(2) - 1j * rng.standard_normal(2)
    z = np.concatenate([z, z.conj()])
    window = LatticeWindow(re_min=-4.0, im_max=8.0, max_terms=12)
    lat = lattice_spectrum(SpectrumSet(z), window)
    zero_gap = np.abs(lat.points).min()
    out.append(_check("lattice_contains_zero", zero_gap, 1e-12))

    closure = 0.0
    pts = lat.points
    for u in pts:
        for v in pts:
            w = u + v
            if w.real >= window.re_min and abs(w.imag) <= window.im_max:
                closure = max(closure, np.abs(pts - w).min())
    out.append(_check("lattice_additive_closure", closure, 1e-9))

    big = lattice_spectrum(SpectrumSet(z), LatticeWindow(
        re_min=-6.0, im_max=12.0, max_terms=16))
    missing = max(np.abs(big.points - u).min() for u in pts)
    out.append(_check("lattice_window_monotone", missing, 1e-9))
    return out


def random_stable_model(rng, d=2, kind=None, tol=None):
    """A random validated stable model with a controlled eigenproblem.

    ``kind`` is one of ``"real"``, ``"complex"``, ``"defective"`` (drawn at
    random when omitted).  Diagonalizable drifts are built as V D V^-1
    with a similarity of condition number at most ~10 so that downstream
    eigenvalue comparisons hold at tight tolerance; defective drifts are
    exactly triangular for the same reason.  The diffusion is a random
    full-rank PSD matrix, so the pair is controllable.
    """
    kind = kind or rng.choice(["real", "complex", "defective"])
    if kind == "defective":
        A = np.zeros((d, d))
        lam = -0.3 - 1.5 * rng.random()
        for i in range(d):
            A[i, i] = lam
            if i:
                A[i, i - 1] = 0.5 + rng.random()
    else:
        if kind == "complex" and d >= 2:
            D = np.zeros((d, d))
            a, b = -0.3 - 1.5 * rng.random(), 0.3 + rng.random()
            D[0, 0] = D[1, 1] = a
            D[0, 1], D[1, 0] = b, -b
            for i in range(2, d):
                D[i, i] = -0.3 - 1.5 * rng.random()
        else:
            D = np.diag(-0.3 - 1.5 * rng.random(d))
        U, _ = np.linalg.qr(rng.standard_normal((d, d)))
        V = U @ np.diag(1.0 + 2.0 * rng.random(d))
        A = V @ D @ np.linalg.inv(V)
    R = rng.standard_normal((d, d))
    Q = R @ R.T + 0.1 * np.eye(d)
    return validate(A, Q, name="random-%s" % kind, tol=tol)


def random_contraction(rng, d=2, kind=None, norm=None):
    """A random strict contraction; defective draws are exactly
    triangular."""
    kind = kind or rng.choice(["diagonalizable", "defective"])
    target = norm if norm is not None else 0.3 + 0.6 * rng.random()
    if kind == "defective":
        T = np.triu(rng.standard_normal((d, d)), 1)
        T += np.eye(d) * (0.2 + 0.5 * rng.random()) * rng.choice([-1.0, 1.0])
    else:
        U, _ = np.linalg.qr(rng.standard_normal((d, d)))
        V = U @ np.diag(1.0 + 1.5 * rng.random(d))
        D = np.diag(rng.uniform(-1.0, 1.0, d))
        T = V @ D @ np.linalg.inv(V)
    return T * (target / max(np.linalg.norm(T, 2), 1e-12))


def random_suite(seed, count, *, degree=3, levels=3):
    """Model suites on `count` random stable models plus algebra suites on
    random contractions, with per-item derived seeds."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        model = random_stable_model(rng, d=2)
        out.extend(model_suite(model, degree=degree, levels=levels,
                               seed=int(rng.integers(2 ** 31))))
    for i in range(max(count // 2, 1)):
        kind = "defective" if i % 2 else "diagonalizable"
        T = random_contraction(rng, d=2, kind=kind)
        out.extend(contraction_suite(
            T, levels=min(levels, 3), seed=int(rng.integers(2 ** 31)),
            prefix="contraction_%d_" % i))
    out.extend(spectra_suite(seed=int(rng.integers(2 ** 31))))
    return out


def summarize(checks):
    """JSON-ready digest: every check, the failures, and the untested
    theory notes."""
    failures = [c for c in checks if not c.passed]
    return {
        "schema": 1,
        "checks": [c.to_dict() for c in checks],
        "n_checks": len(checks),
        "n_failed": len(failures),
        "all_passed": not failures,
        "failures": [c.to_dict() for c in failures],
        "untested_theory": list(UNTESTED_THEORY),
    }
