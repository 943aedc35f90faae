"""Finite spectra as point sets: clustering, lattice sums, set distances.

Spectra computed by different routes (dense eigensolver, closed-form sums,
block assembly) agree only up to roundoff and up to multiplicity bookkeeping.
:class:`SpectrumSet` normalizes both issues away: points are merged by
single-linkage clustering at a fixed radius and stored sorted, so two sets
describing the same spectrum compare equal under the Hausdorff metric at
roundoff scale.

The lattice walk (:func:`lattice_spectrum`) enumerates all sums
``sum_j k_j * z_j`` with nonnegative integer counts ``k_j`` inside a window.
It prunes on the real part only: for spectra in the open left half plane the
real part is monotone along the walk while the imaginary part is not
(conjugate pairs cancel), so pruning on the imaginary part would lose valid
points.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from math import comb
from collections import deque
from itertools import combinations_with_replacement

import numpy as np

from .errors import EigFailure, EmptySet, EnumCap, InputError, NonStableInput

DEFAULT_CLUSTER_RADIUS = 1e-7

#: Default cap on the number of enumerated points in product sets.
DEFAULT_ENUM_CAP = 200_000


def _as_complex_array(points):
    pts = np.asarray(list(points), dtype=complex).ravel()
    return pts


def _single_linkage_merge(pts, radius):
    """Merge points at mutual distance <= radius (single linkage).

    Returns one centroid per cluster.  Points are swept in order of real
    part, so only pairs whose real parts differ by at most the radius are
    compared; this is exact because |z - w| >= |Re z - Re w|.
    """
    n = len(pts)
    if n <= 1:
        return pts.copy()
    order = np.argsort(pts.real, kind="stable")
    spts = pts[order]
    parent = list(range(n))

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    lo = 0
    for i in range(n):
        while spts[i].real - spts[lo].real > radius:
            lo += 1
        for j in range(lo, i):
            if abs(spts[i] - spts[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    clusters = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(spts[i])
    return np.array([np.mean(members) for members in clusters.values()],
                    dtype=complex)


class SpectrumSet:
    """A finite set of complex spectrum points with a clustering radius.

    On construction, points at mutual distance within ``cluster_radius`` are
    merged by single linkage and replaced by their centroid; the survivors
    are stored sorted by (real, imaginary) part.  The resulting array is
    read-only.
    """

    __slots__ = ("points", "cluster_radius")

    def __init__(self, points, cluster_radius=DEFAULT_CLUSTER_RADIUS):
        if cluster_radius < 0:
            raise InputError("cluster_radius must be nonnegative")
        pts = _as_complex_array(points)
        if not np.all(np.isfinite(pts.view(float))):
            raise InputError("spectrum points must be finite")
        merged = _single_linkage_merge(pts, cluster_radius)
        order = np.lexsort((merged.imag, merged.real))
        merged = merged[order]
        merged.flags.writeable = False
        object.__setattr__(self, "points", merged)
        object.__setattr__(self, "cluster_radius", float(cluster_radius))

    def __setattr__(self, name, value):
        raise AttributeError("SpectrumSet is immutable")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return "SpectrumSet(%d points, radius=%g)" % (
            len(self.points), self.cluster_radius)

    def union(self, other):
        """Union with another set (or iterable), re-clustered at this radius."""
        other_pts = other.points if isinstance(other, SpectrumSet) else other
        return SpectrumSet(np.concatenate([
            self.points, _as_complex_array(other_pts)]), self.cluster_radius)

    def restricted(self, re_min=-np.inf, im_max=np.inf):
        """Points with ``Re >= re_min`` and ``|Im| <= im_max`` (small slack
        of one cluster radius is allowed on both cuts)."""
        r = self.cluster_radius
        keep = (self.points.real >= re_min - r) & (
            np.abs(self.points.imag) <= im_max + r)
        return SpectrumSet(self.points[keep], self.cluster_radius)

    def to_json_dict(self):
        return {
            "cluster_radius": self.cluster_radius,
            "points": [{"re": float(z.real), "im": float(z.imag)}
                       for z in self.points],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)

    def write_csv(self, path):
        """Write the points to `path` as CSV with columns ``re,im``."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["re", "im"])
            for z in self.points:
                writer.writerow([repr(float(z.real)), repr(float(z.imag))])

    @classmethod
    def from_json_dict(cls, data):
        pts = [complex(p["re"], p["im"]) for p in data["points"]]
        return cls(pts, data.get("cluster_radius", DEFAULT_CLUSTER_RADIUS))


def eig(matrix, cluster_radius=DEFAULT_CLUSTER_RADIUS):
    """Eigenvalues of a dense matrix as a :class:`SpectrumSet`.

    Raises
    ------
    EigFailure
        If the QR iteration fails to converge or produces non-finite values.
    """
    M = np.asarray(matrix)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("eig expects a square matrix, got shape %r"
                         % (M.shape,))
    try:
        w = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigFailure("eigenvalue computation failed: %s" % exc) from exc
    if not np.all(np.isfinite(w.view(float))):
        raise EigFailure("eigenvalue computation returned non-finite values")
    return SpectrumSet(w, cluster_radius)


def product_set(base, n, cap=DEFAULT_ENUM_CAP):
    """All products of exactly `n` points of `base`, drawn with repetition.

    This is the spectrum of the n-fold (symmetric) tensor power of an
    operator whose spectrum is `base`.  The number of combinations
    ``C(m + n - 1, n)`` is checked against `cap` before enumerating.
    """
    if not isinstance(base, SpectrumSet):
        base = SpectrumSet(base)
    if n < 1:
        raise InputError("product_set needs n >= 1, got %d" % n)
    m = len(base)
    if m == 0:
        raise EmptySet("product_set of an empty spectrum")
    count = comb(m + n - 1, n)
    if count > cap:
        raise EnumCap(
            "product_set would enumerate %d points (cap %d)" % (count, cap))
    prods = [np.prod(combo) for combo in
             combinations_with_replacement(base.points, n)]
    return SpectrumSet(prods, base.cluster_radius)


@dataclass(frozen=True)
class LatticeWindow:
    """Search window for :func:`lattice_spectrum`.

    ``re_min`` must be negative (the walk starts at 0 and moves left),
    ``im_max`` positive, and ``max_terms`` caps the total count
    ``sum_j k_j`` as a backstop against slow leftward drift.
    """

    re_min: float
    im_max: float
    max_terms: int = 64

    def __post_init__(self):
        if not self.re_min < 0:
            raise InputError("re_min must be negative (got %g)" % self.re_min)
        if not self.im_max > 0:
            raise InputError("im_max must be positive (got %g)" % self.im_max)
        if self.max_terms < 1:
            raise InputError("max_terms must be >= 1")


def lattice_spectrum(base, window):
    """All sums ``sum_j k_j * z_j`` over nonnegative integer count vectors,
    restricted to the window.

    `base` must lie in the open left half plane (otherwise the walk would
    not terminate); the empty sum contributes 0, which is always inside the
    window.  The walk over count vectors prunes a branch only when its real
    part has already left the window, never on the imaginary part, and the
    imaginary cut is applied as a final filter.  Count vectors whose total
    exceeds ``window.max_terms`` are not expanded; with a valid window the
    real-part pruning terminates the walk well before a reasonable cap.
    """
    if not isinstance(base, SpectrumSet):
        base = SpectrumSet(base)
    z = base.points
    if len(z) == 0:
        raise EmptySet("lattice_spectrum of an empty spectrum")
    if np.any(z.real >= 0):
        raise NonStableInput(
            "lattice_spectrum needs all points in the open left half plane; "
            "max real part is %g" % z.real.max())
    m = len(z)
    start = (0,) * m
    seen = {start}
    queue = deque([(start, 0.0 + 0.0j)])
    values = []
    while queue:
        counts, val = queue.popleft()
        values.append(val)
        if sum(counts) >= window.max_terms:
            continue
        for j in range(m):
            nxt = counts[:j] + (counts[j] + 1,) + counts[j + 1:]
            if nxt in seen:
                continue
            nval = val + z[j]
            # Adding further points only decreases the real part, so a
            # branch below re_min can be cut for good.
            if nval.real < window.re_min - base.cluster_radius:
                continue
            seen.add(nxt)
            queue.append((nxt, nval))
    values = np.array(values, dtype=complex)
    keep = np.abs(values.imag) <= window.im_max + base.cluster_radius
    return SpectrumSet(values[keep], base.cluster_radius)


def hausdorff(a, b):
    """Hausdorff distance between two nonempty spectrum sets."""
    pa = a.points if isinstance(a, SpectrumSet) else _as_complex_array(a)
    pb = b.points if isinstance(b, SpectrumSet) else _as_complex_array(b)
    if len(pa) == 0 or len(pb) == 0:
        raise EmptySet("hausdorff distance needs two nonempty sets")
    dist = np.abs(pa[:, None] - pb[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


@dataclass(frozen=True)
class MatchReport:
    """Result of matching a computed spectrum against a predicted one."""

    tol: float
    hausdorff: float
    n_computed: int
    n_predicted: int
    unmatched_computed: tuple
    unmatched_predicted: tuple
    passed: bool

    def to_dict(self):
        as_pairs = lambda zs: [{"re": float(z.real), "im": float(z.imag)}
                               for z in zs]
        return {
            "tol": self.tol,
            "hausdorff": self.hausdorff,
            "n_computed": self.n_computed,
            "n_predicted": self.n_predicted,
            "unmatched_computed": as_pairs(self.unmatched_computed),
            "unmatched_predicted": as_pairs(self.unmatched_predicted),
            "passed": self.passed,
        }


def match_report(computed, predicted, tol):
    """Match two spectra at tolerance `tol` and report the discrepancies.

    A point is unmatched when no point of the other set lies within `tol`.
    The report passes when the Hausdorff distance is at most `tol`
    (equivalently, when both unmatched lists are empty).
    """
    pc = computed.points if isinstance(computed, SpectrumSet) \
        else _as_complex_array(computed)
    pp = predicted.points if isinstance(predicted, SpectrumSet) \
        else _as_complex_array(predicted)
    if len(pc) == 0 or len(pp) == 0:
        raise EmptySet("match_report needs two nonempty sets")
    dist = np.abs(pc[:, None] - pp[None, :])
    un_c = tuple(pc[dist.min(axis=1) > tol])
    un_p = tuple(pp[dist.min(axis=0) > tol])
    h = float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))
    return MatchReport(
        tol=float(tol),
        hausdorff=h,
        n_computed=len(pc),
        n_predicted=len(pp),
        unmatched_computed=un_c,
        unmatched_predicted=un_p,
        passed=h <= tol,
    )
