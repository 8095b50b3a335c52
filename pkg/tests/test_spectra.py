import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import alg_element_strategy
from spectral_gamma import algebra, groups, spectra
from spectral_gamma.errors import DomainError, StructuralError

Z = groups.integer_lattice(1)
Z2 = groups.integer_lattice(2)
F2 = groups.free_group(2)
H = groups.heisenberg()

XPX = algebra.element(Z, {(1,): 1, (-1,): 1})                    # x + x^-1
A_PAPER = algebra.element(F2, {(): 1, (1,): 1j, (-1,): 1j})      # 1 + ix + ix^-1
YX = algebra.element(F2, {(2, 1): 1})
A_SHIFTED = algebra.convolve(YX, A_PAPER)                        # (yx)(1+ix+ix^-1)


# ---------------------------------------------------------------------------
# oracles

def exact_l1_of_power(a, n):
    """Brute-force ||a^n||_1 by exact convolution."""
    power = algebra.delta(a.spec, exact=True)
    ax = algebra.to_exact(a)
    for _ in range(n):
        power = algebra.convolve(power, ax)
    return algebra.l1_norm(power)


def exact_tau_of_power(a, n):
    power = algebra.delta(a.spec, exact=True)
    ax = algebra.to_exact(a)
    for _ in range(n):
        power = algebra.convolve(power, ax)
    t = algebra.tau(power)
    return complex(t.to_complex())


def torus_sup_oracle(coeffs, grid=200001):
    """Dense 1-d grid search for sup |sum c_k e^(ik theta)|."""
    theta = np.linspace(0.0, 2 * math.pi, grid)
    vals = np.zeros_like(theta, dtype=complex)
    for k, c in coeffs.items():
        vals += c * np.exp(1j * k * theta)
    return float(np.abs(vals).max())


# ---------------------------------------------------------------------------
# l1 Gelfand radius

def test_l1_radius_x_plus_xinv_binomial_oracle():
    # ||a^n||_1 = sum_k C(n, k) = 2^n, so every root is exactly 2
    for n in range(1, 9):
        assert exact_l1_of_power(XPX, n) == pytest.approx(2.0**n)
    est = spectra.l1_spectral_radius(XPX, 1024)
    assert all(v == pytest.approx(2.0, abs=1e-12) for _, v in est.trace)
    engine = spectra.l1_spectral_radius(XPX, 256, use_certificates=False)
    assert all(v == pytest.approx(2.0, abs=1e-10) for _, v in engine.trace)


def test_l1_radius_identity_element():
    est = spectra.l1_spectral_radius(algebra.delta(F2), 16)
    assert est.value == pytest.approx(1.0)
    assert est.lower == pytest.approx(1.0)


def test_l1_radius_shifted_paper_element():
    # free-subsemigroup support: ||a^n||_1 = 3^n exactly; cross-check n <= 8
    for n in range(1, 9):
        assert exact_l1_of_power(A_SHIFTED, n) == pytest.approx(3.0**n)
    est = spectra.l1_spectral_radius(A_SHIFTED, 1024)
    assert est.method == "free-subsemigroup"
    assert all(v == pytest.approx(3.0) for _, v in est.trace)
    assert est.lower == pytest.approx(3.0)


def test_l1_radius_preconditions():
    with pytest.raises(DomainError):
        spectra.l1_spectral_radius(algebra.zero_element(Z), 16)
    with pytest.raises(DomainError):
        spectra.l1_spectral_radius(XPX, 17)


def test_trace_nonincreasing_fekete():
    a = algebra.element(Z, {(0,): 1, (1,): 1, (-1,): -1})
    est = spectra.l1_spectral_radius(a, 256, use_certificates=False)
    vals = [v for _, v in est.trace]
    assert all(b <= a_ * (1 + 1e-9) for a_, b in zip(vals, vals[1:]))


def test_scale_equivariance():
    a = algebra.element(Z, {(0,): 1, (1,): 1, (-1,): -1})
    base = spectra.l1_spectral_radius(a, 64, use_certificates=False)
    doubled = spectra.l1_spectral_radius(algebra.scale(2.0, a), 64, use_certificates=False)
    for (_, v), (_, w) in zip(base.trace, doubled.trace):
        assert w == pytest.approx(2 * v, rel=1e-12)
    lam = 0.7 - 1.9j
    scaled = spectra.l1_spectral_radius(algebra.scale(lam, a), 64, use_certificates=False)
    for (_, v), (_, w) in zip(base.trace, scaled.trace):
        assert w == pytest.approx(abs(lam) * v, rel=1e-9)


def test_scale_equivariance_other_estimators():
    a = algebra.element(Z, {(0,): 1, (1,): 1, (-1,): -1})
    lam = -1.5 + 0.5j
    red = spectra.reduced_norm_trace(a, 64)
    red_s = spectra.reduced_norm_trace(algebra.scale(lam, a), 64)
    assert red_s.value == pytest.approx(abs(lam) * red.value, rel=1e-9)
    fo = spectra.fourier_opnorm_lattice(a, 512)
    fo_s = spectra.fourier_opnorm_lattice(algebra.scale(lam, a), 512)
    assert fo_s.value == pytest.approx(abs(lam) * fo.value, rel=1e-12)
    assert fo_s.upper == pytest.approx(abs(lam) * fo.upper, rel=1e-12)


# ---------------------------------------------------------------------------
# reduced norm trace moments

def test_reduced_trace_x_plus_xinv_catalan_oracle():
    # tau(a^{2n}) = C(2n, n); at the trace index n the moment is tau((a*a)^n)
    for n in range(1, 6):
        assert exact_tau_of_power(XPX, 2 * n).real == pytest.approx(math.comb(2 * n, n))
    est = spectra.reduced_norm_trace(XPX, 512)
    at = dict(est.trace)
    oracle = math.exp(math.log(math.comb(1024, 512)) / 1024)
    assert at[512] == pytest.approx(oracle, rel=1e-9)
    assert 1.98 <= at[512] <= 2.0
    assert est.upper == pytest.approx(2.0)  # ||a||_1


def test_reduced_trace_paper_element():
    # a*a = 3 + x^2 + x^-2 lives in the Z-subalgebra; sup |3 + 2cos(2t)| = 5
    prod = algebra.convolve(algebra.involution(A_PAPER), A_PAPER)
    assert prod.terms == {(): 3 + 0j, (1, 1): 1 + 0j, (-1, -1): 1 + 0j}
    assert torus_sup_oracle({0: 3, 2: 1, -2: 1}) == pytest.approx(5.0, abs=1e-8)
    est = spectra.reduced_norm_trace(A_PAPER, 512)
    assert est.value == pytest.approx(math.sqrt(5), rel=0.02)
    assert est.lower <= math.sqrt(5)


def test_reduced_trace_point_mass_is_unitary():
    est = spectra.reduced_norm_trace(algebra.element(F2, {(1, 2): 1}), 64)
    assert est.value == pytest.approx(1.0)
    assert est.upper == pytest.approx(1.0)


def test_cstar_identity_between_estimates():
    b = algebra.convolve(algebra.involution(XPX), XPX)
    est_a = spectra.reduced_norm_trace(XPX, 256)
    est_b = spectra.reduced_norm_trace(b, 256)
    assert est_a.value**2 == pytest.approx(est_b.value, rel=0.05)


# ---------------------------------------------------------------------------
# Fourier oracles

def test_fourier_x_plus_xinv():
    est = spectra.fourier_opnorm_lattice(XPX, 1024)
    assert abs(est.lower - 2.0) <= 1e-4
    assert est.upper >= 2.0
    assert est.lower <= 2.0 + 1e-12


def test_fourier_z_subalgebra_witness():
    b = algebra.element(Z, {(0,): 3, (2,): 1, (-2,): 1})
    est = spectra.fourier_opnorm_lattice(b, 4096)
    assert est.value == pytest.approx(5.0, abs=1e-6)
    assert est.upper >= 5.0


def test_fourier_identity_exact():
    est = spectra.fourier_opnorm_lattice(algebra.delta(Z2), 64)
    assert est.value == pytest.approx(1.0)
    assert est.upper == pytest.approx(1.0, abs=1e-12)


def test_fourier_requires_lattice():
    with pytest.raises(StructuralError):
        spectra.fourier_opnorm_lattice(A_PAPER, 64)
    with pytest.raises(DomainError):
        spectra.fourier_opnorm_lattice(XPX, 4)


def test_fourier_agrees_with_dense_grid_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        ks = rng.integers(-3, 4, size=3)
        cs = rng.normal(size=3) + 1j * rng.normal(size=3)
        terms = {}
        for k, c in zip(ks, cs):
            terms[(int(k),)] = terms.get((int(k),), 0) + c
        a = algebra.element(Z, terms)
        if algebra.is_zero(a):
            continue
        est = spectra.fourier_opnorm_lattice(a, 2048)
        oracle = torus_sup_oracle({k[0]: c for k, c in a.terms.items()})
        assert est.lower <= oracle * (1 + 1e-9)
        assert est.upper >= oracle * (1 - 1e-9)


# ---------------------------------------------------------------------------
# tree walk counts (free-group radial oracle)

def test_tree_walks_match_exact_convolution():
    chi = algebra.indicator(set(groups.generators(F2)), F2)
    power = algebra.delta(F2)
    for n in range(1, 11):
        power = algebra.convolve(power, chi)
        tau = algebra.tau(power)
        assert spectra.tree_walk_count(2, n) == int(round(tau.real))


def test_tree_walks_rank3():
    chi = algebra.indicator(set(groups.generators(groups.free_group(3))), groups.free_group(3))
    power = algebra.delta(groups.free_group(3))
    for n in range(1, 7):
        power = algebra.convolve(power, chi)
        assert spectra.tree_walk_count(3, n) == int(round(algebra.tau(power).real))


# ---------------------------------------------------------------------------
# sigma1 verdicts

def test_sigma1_consistent_on_z():
    v = spectra.sigma1_verdict(XPX, 256)
    assert v.verdict == "consistent-with-sigma1"


def test_sigma1_violation_witness():
    v = spectra.sigma1_verdict(A_SHIFTED, 512, grid=32768)
    assert v.verdict == "violation-witness"
    assert v.r_l1.lower > v.opnorm.upper
    assert v.margin >= 0.7


def test_sigma1_point_mass_consistent():
    v = spectra.sigma1_verdict(algebra.element(F2, {(1,): 1}), 64)
    assert v.verdict == "consistent-with-sigma1"
    assert v.r_l1.value == pytest.approx(1.0)
    assert v.opnorm.value == pytest.approx(1.0)


def test_sigma1_inconclusive_without_certified_gap():
    a = algebra.element(F2, {(): 2, (1,): 1, (2,): 1})  # 2 + x + y
    v = spectra.sigma1_verdict(a, 16, cap_support=600)
    assert v.verdict == "inconclusive"


def test_sigma1_generator_indicator_witnesses_free_group():
    # r_l1(chi_S) = 4 by positivity, ||chi_S|| ~ 2 sqrt(3): certified violation
    chi = algebra.indicator(set(groups.generators(F2)), F2)
    v = spectra.sigma1_verdict(chi, 512)
    assert v.verdict == "violation-witness"
    assert v.r_l1.lower == pytest.approx(4.0)
    assert v.opnorm.upper < 3.5


# ---------------------------------------------------------------------------
# Kesten checks

def test_kesten_z2():
    report = spectra.kesten_check(set(groups.generators(Z2)), Z2, grid=4096)
    est = report.radius
    assert est.lower <= 4.0 <= est.upper
    assert est.width() <= 0.01
    assert report.amenable_consistent


def test_kesten_free_group():
    report = spectra.kesten_check(set(groups.generators(F2)), F2, n_max=512)
    est = report.radius
    target = 2 * math.sqrt(3)
    assert est.value == pytest.approx(target, rel=0.02)
    assert est.upper < 4.0
    assert not report.amenable_consistent


def test_kesten_cyclic():
    spec = groups.cyclic(12)
    report = spectra.kesten_check({1, 11}, spec)
    assert report.radius.value == pytest.approx(2.0)
    assert report.amenable_consistent


def test_kesten_requires_symmetric_set():
    with pytest.raises(DomainError):
        spectra.kesten_check({(1,)}, F2)


# ---------------------------------------------------------------------------
# free semigroup probe

def test_probe_examples():
    assert spectra.free_semigroup_l1_probe(A_SHIFTED, 6)
    a = algebra.element(Z, {(0,): 1, (1,): 1, (-1,): -1})   # 1 + x - x^-1
    assert not spectra.free_semigroup_l1_probe(a, 2)
    assert spectra.free_semigroup_l1_probe(XPX, 2)          # ||a^2||_1 = 4 = 2^2
    assert spectra.free_semigroup_l1_probe(algebra.element(F2, {(1, 2): 2j}), 8)
    with pytest.raises(DomainError):
        spectra.free_semigroup_l1_probe(XPX, 13)


def test_certificate_details():
    assert spectra.free_subsemigroup_certificate(A_SHIFTED.support(), F2)
    assert not spectra.free_subsemigroup_certificate({(1,), (-1,)}, F2)
    assert not spectra.free_subsemigroup_certificate({(), (1,)}, F2)
    assert not spectra.free_subsemigroup_certificate({(1,)}, Z)
    # prefix codes without cancellation pass Sardinas-Patterson
    assert spectra.free_subsemigroup_certificate({(2,), (2, 1), (2, 1, 1)}, F2)
    # {x, xy, yx} is not uniquely decodable over the letters: x.yx = xy.x
    assert not spectra.free_subsemigroup_certificate({(1,), (1, 2), (2, 1)}, F2)


def test_cyclic_subgroup_image():
    b = algebra.element(F2, {(): 3, (1, 1): 1, (-1, -1): 1})
    image = spectra.cyclic_subgroup_image(b)
    assert image is not None
    z_elem, root = image
    assert root == (1,)
    assert z_elem.terms == {(0,): 3 + 0j, (2,): 1 + 0j, (-2,): 1 + 0j}
    assert spectra.cyclic_subgroup_image(algebra.element(F2, {(1,): 1, (2,): 1})) is None
    # conjugates are not cyclically reduced: stay conservative
    assert spectra.cyclic_subgroup_image(algebra.element(F2, {(2, 1, -2): 1})) is None


# ---------------------------------------------------------------------------
# subexponential sandwich

def test_sandwich_x_plus_xinv():
    est = spectra.subexp_sandwich_radius(XPX, 1024)
    assert est.value == pytest.approx(2.0, abs=1e-9)
    # growth factor (2n+1)^(1/2n) -> 1
    factors = [(2 * n + 1) ** (1 / (2 * n)) for n in (1, 64, 1024)]
    assert factors[0] > factors[1] > factors[2] > 1.0
    gelfand = spectra.l1_spectral_radius(XPX, 1024)
    assert est.value == pytest.approx(gelfand.value, rel=0.05)


def test_sandwich_identity():
    est = spectra.subexp_sandwich_radius(algebra.delta(Z2), 64)
    assert est.value == pytest.approx(1.0, abs=1e-9)


def test_sandwich_chi_z2():
    chi = algebra.indicator(set(groups.generators(Z2)), Z2)
    est = spectra.subexp_sandwich_radius(chi, 64)
    assert est.value == pytest.approx(4.0, abs=1e-9)


def test_sandwich_rejects_exponential_growth():
    with pytest.raises(DomainError):
        spectra.subexp_sandwich_radius(A_PAPER, 64)


def test_sandwich_trace_upper_bounds_radius():
    a = algebra.element(Z2, {(1, 0): 1, (0, 1): -1j, (0, 0): 0.5})
    est = spectra.subexp_sandwich_radius(a, 256)
    fourier = spectra.fourier_opnorm_lattice(a, 2048)
    # r_l1 = r_reduced on Z^2, so every sandwich term must clear the norm
    assert all(v >= fourier.lower * (1 - 1e-9) for _, v in est.trace)


# ---------------------------------------------------------------------------
# interval ordering invariants

@given(data=st.data())
@settings(max_examples=25)
def test_ordering_chain_selfadjoint_on_z(data):
    a = data.draw(alg_element_strategy(Z, max_terms=3, max_len=3))
    a = algebra.add(a, algebra.involution(a))  # self-adjoint
    if algebra.is_zero(a):
        return
    reduced = spectra.reduced_norm_trace(a, 64)
    radius = spectra.l1_spectral_radius(a, 64, use_certificates=False)
    l1 = algebra.l1_norm(a)
    assert reduced.lower <= radius.upper * (1 + 1e-9)
    assert radius.upper <= l1 * (1 + 1e-9)


@given(data=st.data())
@settings(max_examples=15)
def test_selfadjoint_lattice_fourier_vs_moments(data):
    a = data.draw(alg_element_strategy(Z, max_terms=3, max_len=3))
    a = algebra.add(a, algebra.involution(a))
    if algebra.is_zero(a):
        return
    fourier = spectra.fourier_opnorm_lattice(a, 2048)
    moments = spectra.reduced_norm_trace(a, 256)
    assert moments.lower <= fourier.upper * (1 + 1e-9)
    assert moments.value == pytest.approx(fourier.value, rel=0.05)
