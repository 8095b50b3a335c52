import numpy as np
import pytest

from spectral_gamma import holocalc as hc
from spectral_gamma import ktheory as kt
from spectral_gamma.errors import (DomainError, MembershipError, ResolutionError,
                                   StructuralError)

OC0 = kt.analyze_components(hc.omega0(), bbox=(-3, 3, -3, 3), resolution=0.1)
OC1 = kt.analyze_components(hc.omega1(), bbox=(-3, 3, -3, 3), resolution=0.1)


def random_matrix_with_eigs(diag, rng, cond_cap=50):
    n = len(diag)
    while True:
        S = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(S) < cond_cap:
            return S @ np.diag(np.array(diag, dtype=complex)) @ np.linalg.inv(S)


def random_omega0_diag(rng, n):
    # eigenvalues clear of the Re = 1/2 line by at least 0.1
    diag = []
    for _ in range(n):
        if rng.random() < 0.5:
            diag.append(complex(rng.uniform(-1.5, 0.4), rng.uniform(-1, 1)))
        else:
            diag.append(complex(rng.uniform(0.6, 2.0), rng.uniform(-1, 1)))
    return diag


# ---------------------------------------------------------------------------
# component analysis

def test_canonical_region_components():
    assert OC0.n_components == 2 and OC0.k == 1
    assert OC1.n_components == 1 and OC1.k == 0
    disk = kt.analyze_components(hc.disk(0, 1.0), bbox=(-1.2, 1.2, -1.2, 1.2),
                                 resolution=0.05)
    assert disk.k == 0
    two = kt.analyze_components(hc.runion(hc.disk(0, 0.45), hc.disk(1, 0.45)),
                                bbox=(-1, 2, -1, 1), resolution=0.05)
    assert two.k == 1


def test_component_analysis_preconditions():
    with pytest.raises(DomainError):
        kt.analyze_components(hc.disk(3 + 0j, 0.5), bbox=(-4, 4, -4, 4))
    with pytest.raises(DomainError):
        kt.analyze_components(hc.omega0(), bbox=(1, 2, -1, 1))
    with pytest.raises(ResolutionError):
        kt.analyze_components(hc.runion(hc.disk(0, 0.05), hc.disk(1, 0.5)),
                              bbox=(-1, 2, -1, 1), resolution=0.05)


def test_component_of_separates_sides():
    left = kt.component_of(OC0, 0.2 - 1j)
    right = kt.component_of(OC0, 0.9 + 1j)
    assert left == OC0.base_index
    assert right != OC0.base_index
    with pytest.raises(MembershipError):
        kt.component_of(OC0, 0.5 + 0j)
    with pytest.raises(MembershipError):
        kt.component_of(OC1, -1 + 0j)


def test_component_counts_examples():
    m = np.diag([0, 1, 1]).astype(complex)
    assert kt.component_counts(m, OC0).counts == (2,)
    assert kt.component_counts(np.eye(3, dtype=complex), OC0).counts == (3,)
    disk = kt.analyze_components(hc.disk(0, 3.0), bbox=(-3.2, 3.2, -3.2, 3.2),
                                 resolution=0.1)
    assert kt.component_counts(m, disk).counts == ()
    assert kt.component_counts(m, OC0).k == 1


def test_counts_total_matches_size():
    rng = np.random.default_rng(0)
    for _ in range(20):
        diag = random_omega0_diag(rng, 5)
        m = random_matrix_with_eigs(diag, rng)
        counts = kt.component_counts(m, OC0)
        base = sum(1 for z in diag if z.real < 0.5)
        assert counts.counts[0] + base == 5


def test_v_add_examples():
    assert kt.v_add(kt.CountVector((2,)), kt.CountVector((1,))).counts == (3,)
    c = kt.CountVector((4,))
    assert kt.v_add(c, kt.CountVector((0,))) == c
    with pytest.raises(StructuralError):
        kt.v_add(kt.CountVector((1,)), kt.CountVector((1, 2)))


def test_additivity_on_block_sums():
    rng = np.random.default_rng(1)
    for _ in range(50):
        d1 = random_omega0_diag(rng, 3)
        d2 = random_omega0_diag(rng, 2)
        m1 = random_matrix_with_eigs(d1, rng)
        m2 = random_matrix_with_eigs(d2, rng)
        big = np.zeros((5, 5), dtype=complex)
        big[:3, :3] = m1
        big[3:, 3:] = m2
        lhs = kt.component_counts(big, OC0)
        rhs = kt.v_add(kt.component_counts(m1, OC0), kt.component_counts(m2, OC0))
        assert lhs == rhs


def test_conjugation_invariance():
    rng = np.random.default_rng(2)
    for _ in range(50):
        diag = random_omega0_diag(rng, 4)
        m = random_matrix_with_eigs(diag, rng)
        while True:
            S = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            if np.linalg.cond(S) < 50:
                break
        assert kt.component_counts(S @ m @ np.linalg.inv(S), OC0) == \
            kt.component_counts(m, OC0)


def test_stabilization_padding():
    rng = np.random.default_rng(3)
    diag = random_omega0_diag(rng, 3)
    m = random_matrix_with_eigs(diag, rng)
    counts = kt.component_counts(m, OC0)
    for pad in (1, 2, 5):
        big = np.zeros((3 + pad, 3 + pad), dtype=complex)
        big[:3, :3] = m
        assert kt.component_counts(big, OC0) == counts


def test_k_group_rank():
    assert kt.k_group_rank(OC0) == 1    # K_0(C) = Z
    assert kt.k_group_rank(OC1) == 0    # K_1(C) = 0
    two = kt.analyze_components(hc.runion(hc.disk(0, 0.45), hc.disk(1, 0.45)),
                                bbox=(-1, 2, -1, 1), resolution=0.05)
    assert kt.k_group_rank(two) == 1    # the two-disk picture of K_0


def test_chi_compatibility():
    rng = np.random.default_rng(4)
    for _ in range(25):
        diag = random_omega0_diag(rng, 4)
        m = random_matrix_with_eigs(diag, rng)
        counts = kt.component_counts(m, OC0)
        proj = hc.holo_calc_auto(hc.chi_fn(), m, hc.omega0())
        rank = int(round(float(np.trace(proj).real)))
        assert counts.counts == (rank,)


def test_normal_form():
    m = np.diag([0.9, 0.8, 0.1]).astype(complex)
    nf = kt.normal_form(m, OC0, [1.0 + 0j])
    assert np.allclose(nf, np.diag([1.0, 1.0, 0.0]))
    assert kt.component_counts(nf, OC0) == kt.component_counts(m, OC0)
    already = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(kt.normal_form(already, OC0, [1.0 + 0j]), already)
    base_only = np.diag([0.1, -0.3]).astype(complex)
    assert np.allclose(kt.normal_form(base_only, OC0, [1.0 + 0j]), np.zeros((2, 2)))
    with pytest.raises(DomainError):
        kt.normal_form(m, OC0, [0.2 + 0j])   # basepoint in the base component
    with pytest.raises(DomainError):
        kt.normal_form(m, OC0, [])


def test_same_class():
    a = np.diag([0, 1.0]).astype(complex)
    b = np.diag([1.0, 0, 0]).astype(complex)
    assert kt.same_class(a, b, OC0)          # both count (1,)
    c = np.diag([1.0, 1.0]).astype(complex)
    assert not kt.same_class(c, np.diag([1.0, 0]).astype(complex), OC0)
    rng = np.random.default_rng(5)
    m = random_matrix_with_eigs(random_omega0_diag(rng, 4), rng)
    S = rng.normal(size=(4, 4))
    assert kt.same_class(m, S @ m @ np.linalg.inv(S), OC0)


def test_k_zero_regions_have_constant_class():
    rng = np.random.default_rng(6)
    mats = []
    for _ in range(10):
        diag = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3)]
        if all(abs(z + 1) > 0.1 for z in diag):
            mats.append(random_matrix_with_eigs(diag, rng))
    for m1 in mats:
        for m2 in mats:
            assert kt.same_class(m1, m2, OC1)
