"""Spectrum-set container, lattice enumeration, and Hausdorff matching."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ou_spectra.errors import EmptySet, EnumCap, InputError, NonStableInput
from ou_spectra.spectra import (
    LatticeWindow,
    SpectrumSet,
    eig,
    hausdorff,
    lattice_spectrum,
    match_report,
    product_set,
)


# ---------------------------------------------------------------------------
# hand oracles
# ---------------------------------------------------------------------------

# two points 1e-9 apart must merge at radius 1e-7; 1 apart must not
CLUSTER_IN = [0.0 + 0.0j, 1e-9 + 0.0j, 1.0 + 0.0j]
CLUSTER_OUT = [0.0, 1.0]

# products of {-1, -2} taken twice, by hand: 1, 2, 4
PRODUCT2_ORACLE = sorted([1.0, 2.0, 4.0])

# lattice of {-1, -0.5} up to 3 terms, by hand (sums k1*(-1)+k2*(-0.5),
# k1+k2 <= 3): 0, -0.5, -1 (two ways), -1.5 (two ways), -2 (two ways),
# -2.5, -3
LATTICE_ORACLE = sorted([0.0, -0.5, -1.0, -1.5, -2.0, -2.5, -3.0])

# hausdorff({0, 3}, {1}) = max(max(1, 2), max(1)) = 2, by hand
HAUSDORFF_ORACLE = 2.0


def test_clustering_merges_close_points():
    s = SpectrumSet(CLUSTER_IN, cluster_radius=1e-7)
    assert_allclose(sorted(s.points.real), CLUSTER_OUT, atol=1e-8)
    assert len(s) == 2


def test_points_sorted_and_read_only():
    s = SpectrumSet([1.0 + 1.0j, -2.0, 1.0 - 1.0j, 0.5])
    re = s.points.real
    assert np.all(np.diff(re) >= 0)
    # equal real parts tie-break on imaginary part
    both = s.points[np.isclose(re, 1.0)]
    assert both[0].imag < both[1].imag
    with pytest.raises(ValueError):
        s.points[0] = 99.0


def test_spectrum_set_empty_and_len():
    # empty sets are constructible; consumers that need points raise
    empty = SpectrumSet([])
    assert len(empty) == 0
    with pytest.raises(EmptySet):
        hausdorff(empty, SpectrumSet([1.0]))
    with pytest.raises(EmptySet):
        product_set(empty, 2)
    assert len(SpectrumSet([1.0, 2.0, 3.0])) == 3


def test_union_reclusters():
    a = SpectrumSet([0.0])
    b = SpectrumSet([1e-9, 5.0])
    u = a.union(b)
    assert len(u) == 2
    assert_allclose(sorted(u.points.real), [0.0, 5.0], atol=1e-8)


def test_restricted_window():
    s = SpectrumSet([-3.0, -1.0 + 2.0j, -1.0 - 2.0j, -0.5])
    r = s.restricted(re_min=-2.0, im_max=1.0)
    assert_allclose(r.points, [-0.5 + 0.0j])


def test_eig_matches_numpy_on_diagonal():
    D = np.diag([-1.0, -2.0, -3.5])
    s = eig(D)
    assert_allclose(sorted(s.points.real), [-3.5, -2.0, -1.0], atol=0)
    assert_allclose(s.points.imag, 0.0, atol=0)


def test_product_set_hand_oracle():
    base = SpectrumSet([-1.0, -2.0])
    p = product_set(base, 2)
    assert_allclose(sorted(p.points.real), PRODUCT2_ORACLE, atol=1e-12)


def test_product_set_rejects_n_zero():
    with pytest.raises(InputError):
        product_set(SpectrumSet([-3.0, 4.0]), 0)


def test_product_set_cap():
    base = SpectrumSet(np.linspace(1, 2, 40))
    with pytest.raises(EnumCap):
        product_set(base, 6, cap=1000)


def test_lattice_hand_oracle():
    base = SpectrumSet([-1.0, -0.5])
    win = LatticeWindow(re_min=-3.0, im_max=0.5, max_terms=3)
    lat = lattice_spectrum(base, win)
    assert_allclose(sorted(lat.points.real), LATTICE_ORACLE, atol=1e-12)
    assert_allclose(lat.points.imag, 0.0, atol=1e-12)


def test_lattice_conjugate_pair_real_sums():
    # z = -1 +- 2j: the sum z + conj(z) = -2 must survive an im_max
    # window that excludes the individual eigenvalues
    base = SpectrumSet([-1.0 + 2.0j, -1.0 - 2.0j])
    win = LatticeWindow(re_min=-2.5, im_max=0.1, max_terms=2)
    lat = lattice_spectrum(base, win)
    assert_allclose(sorted(lat.points.real), [-2.0, 0.0], atol=1e-12)


def test_lattice_rejects_unstable_base():
    with pytest.raises(NonStableInput):
        lattice_spectrum(SpectrumSet([0.5, -1.0]),
                         LatticeWindow(re_min=-2.0, im_max=1.0, max_terms=2))


def test_lattice_window_validation():
    with pytest.raises(InputError):
        LatticeWindow(re_min=1.0, im_max=1.0, max_terms=2)
    with pytest.raises(InputError):
        LatticeWindow(re_min=-1.0, im_max=-1.0, max_terms=2)
    with pytest.raises(InputError):
        LatticeWindow(re_min=-1.0, im_max=1.0, max_terms=0)


def test_hausdorff_hand_oracle():
    a = SpectrumSet([0.0, 3.0])
    b = SpectrumSet([1.0])
    assert_allclose(hausdorff(a, b), HAUSDORFF_ORACLE, atol=1e-15)
    assert hausdorff(a, a) == 0.0


def test_hausdorff_symmetric_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = SpectrumSet(rng.standard_normal(5) + 1j * rng.standard_normal(5))
        b = SpectrumSet(rng.standard_normal(7) + 1j * rng.standard_normal(7))
        assert hausdorff(a, b) == hausdorff(b, a)
        assert hausdorff(a, b) >= 0.0


def test_match_report_pass_and_fail():
    a = SpectrumSet([0.0, -1.0])
    b = SpectrumSet([1e-9, -1.0 + 1e-9])
    rep = match_report(a, b, tol=1e-6)
    assert rep.passed
    assert rep.hausdorff <= 1e-6
    assert len(rep.unmatched_computed) == 0
    assert len(rep.unmatched_predicted) == 0

    c = SpectrumSet([0.0, -1.0, -7.0])
    rep = match_report(c, b, tol=1e-6)
    assert not rep.passed
    assert any(abs(z - (-7.0)) < 1e-9 for z in rep.unmatched_computed)


def test_json_round_trip():
    s = SpectrumSet([1.0 + 2.0j, -0.5])
    d = s.to_json_dict()
    back = SpectrumSet.from_json_dict(d)
    assert_allclose(back.points, s.points)


def test_csv_write(tmp_path):
    s = SpectrumSet([1.0 + 2.0j, -0.5])
    path = tmp_path / "spec.csv"
    s.write_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 3
