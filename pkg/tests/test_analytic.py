import numpy as np
import pytest

import oemsim as om
from oemsim.analytic import EIT_REGIME, NMS_REGIME


def coeffs_for(params, c1, c2):
    return om.RwaCoefficients.from_cooperativities(
        c1, c2, params.kappa1, params.kappa2, params.gamma_m
    )


def test_empty_cavity_response(params):
    c = coeffs_for(params, 0.0, 0.0)
    assert om.response_rwa(0.0, c) == pytest.approx(2.0, rel=1e-14)
    x = 0.7 * params.kappa1
    assert om.response_rwa(x, c) == pytest.approx(2j * params.kappa1 / (x + 1j * params.kappa1))


def test_single_coupling_dip(params):
    c = coeffs_for(params, 40.0, 0.0)
    assert om.response_rwa(0.0, c) == pytest.approx(2.0 / 41.0, rel=1e-12)


def test_double_coupling_peak(params):
    c = coeffs_for(params, 40.0, 40.0)
    assert om.response_rwa(0.0, c) == pytest.approx(82.0 / 81.0, rel=1e-12)


def test_response_vectorized(params):
    c = coeffs_for(params, 40.0, 40.0)
    xs = np.linspace(-10, 10, 7) * params.gamma_m
    arr = om.response_rwa(xs, c)
    assert arr.shape == xs.shape
    for x, v in zip(xs, arr):
        assert v == om.response_rwa(float(x), c)


def test_decoupled_roots(params):
    c = coeffs_for(params, 0.0, 0.0)
    ps = om.denominator_roots(c)
    widths = ps.widths
    assert widths[0] == pytest.approx(params.kappa2, rel=1e-10)
    assert widths[1] == pytest.approx(params.gamma_m / 2.0, rel=1e-10)
    assert widths[2] == pytest.approx(params.kappa1, rel=1e-10)
    assert ps.classification == EIT_REGIME


def test_single_coupling_roots_match_quadratic_oracle(params):
    # with s2 = 0 the cubic factors into (x + i*kappa2) and a quadratic
    c = coeffs_for(params, 40.0, 0.0)
    k1, gh = c.kappa1, c.gamma_m / 2.0
    disc = (k1 - gh) ** 2 - 4.0 * c.s1  # positive below the critical drive
    assert disc > 0
    gam_fast = ((k1 + gh) + np.sqrt(disc)) / 2.0
    gam_slow = ((k1 + gh) - np.sqrt(disc)) / 2.0
    ps = om.denominator_roots(c)
    widths = sorted(ps.widths)
    assert widths[0] == pytest.approx(c.kappa2, rel=1e-9)
    assert widths[1] == pytest.approx(gam_slow, rel=1e-9)
    assert widths[2] == pytest.approx(gam_fast, rel=1e-9)
    assert ps.classification == EIT_REGIME
    # the slow pole approaches (1+C1)*gamma_m/2 in the Gamma_EIT << kappa1 limit
    assert gam_slow == pytest.approx(om.eit_width(40.0, c.gamma_m), rel=0.03)


def test_vieta_relations(params):
    for c1, c2 in ((0.0, 0.0), (40.0, 0.0), (40.0, 40.0), (7.0, 93.0)):
        c = coeffs_for(params, c1, c2)
        r = om.denominator_roots(c).roots
        s_sum = r[0] + r[1] + r[2]
        s_pairs = r[0] * r[1] + r[0] * r[2] + r[1] * r[2]
        s_prod = r[0] * r[1] * r[2]
        k1, k2, gh = c.kappa1, c.kappa2, c.gamma_m / 2.0
        expect_sum = -1j * (k1 + k2 + gh)
        expect_pairs = -(k1 * gh + k1 * k2 + gh * k2 + c.s1 + c.s2)
        expect_prod = 1j * (k1 * gh * k2 + c.s1 * k2 + c.s2 * k1)
        assert abs(s_sum - expect_sum) < 1e-9 * abs(expect_sum)
        assert abs(s_pairs - expect_pairs) < 1e-9 * abs(expect_pairs)
        assert abs(s_prod - expect_prod) < 1e-9 * abs(expect_prod)


def test_partial_fraction_reconstruction(params):
    # E_L = 2i*kappa1*N(x)/p(x) reconstructed from poles and residues
    c = coeffs_for(params, 40.0, 40.0)
    roots = np.array(om.denominator_roots(c).roots)
    g = c.gamma_m

    def numerator(x):
        return (x + 0.5j * g) * (x + 1j * c.kappa2) - c.s2

    def dpoly(x):
        total = 0.0
        for k in range(3):
            others = [roots[j] for j in range(3) if j != k]
            total += (x - others[0]) * (x - others[1])
        return total

    residues = [2j * c.kappa1 * numerator(r) / dpoly(r) for r in roots]
    rng = np.random.default_rng(5)
    for x in rng.uniform(-25 * g, 25 * g, 64):
        rebuilt = sum(res / (x - r) for res, r in zip(residues, roots))
        assert abs(rebuilt - om.response_rwa(float(x), c)) <= 1e-8 * abs(om.response_rwa(float(x), c))


def test_eit_regime_purity(params):
    c = coeffs_for(params, 40.0, 0.0)
    for r in om.denominator_roots(c).roots:
        assert abs(r.real) < 1e-6 * abs(r.imag)


def test_nms_regime_above_critical(params):
    # drive weight past the pole-collision threshold s1* = (kappa1 - gamma_m/2)^2/4
    s1_critical = (params.kappa1 - params.gamma_m / 2.0) ** 2 / 4.0
    c = om.RwaCoefficients(
        kappa1=params.kappa1, kappa2=params.kappa2, gamma_m=params.gamma_m,
        s1=2.0 * s1_critical, s2=0.0,
    )
    ps = om.denominator_roots(c)
    assert ps.classification == NMS_REGIME
    reals = sorted(r.real for r in ps.roots)
    assert reals[0] < 0 < reals[-1]  # conjugate-pair split


def test_root_continuity_in_s2(params):
    for ratio in (0.1, 0.5, 1.0):
        c_a = coeffs_for(params, 40.0, 40.0 * ratio)
        c_b = om.RwaCoefficients(
            kappa1=c_a.kappa1, kappa2=c_a.kappa2, gamma_m=c_a.gamma_m,
            s1=c_a.s1, s2=c_a.s2 * 1.001,
        )
        ra = np.array(om.denominator_roots(c_a).roots)
        rb = np.array(om.denominator_roots(c_b).roots)
        for root in ra:
            nearest = rb[np.argmin(np.abs(rb - root))]
            assert abs(nearest - root) < 0.01 * abs(root)


def test_trajectories_are_continuous(params):
    ratios = np.linspace(0.0, 1.0, 101)
    sets = [coeffs_for(params, 40.0, 40.0 * r) for r in ratios]
    traj = om.root_trajectories(sets)
    steps = np.abs(np.diff(traj, axis=0)) / np.abs(traj[:-1])
    assert steps.max() < 0.01
    # narrow branch grows from kappa2 toward ~2*kappa2
    narrow = -traj[:, 0].imag
    assert narrow[0] == pytest.approx(params.kappa2, rel=1e-6)
    assert 1.9 < narrow[-1] / params.kappa2 < 2.05
    assert np.all(np.diff(narrow) > 0)


def test_eia_splitting_trivial_and_degenerate(params):
    gamma_eit = om.eit_width(40.0, params.gamma_m)
    off = om.eia_splitting(gamma_eit, 0.0, params.kappa2)
    assert off.gamma_plus == gamma_eit
    assert off.gamma_minus == 0.0
    assert off.gamma_eia_approx == params.kappa2
    deg = om.eia_splitting(gamma_eit, gamma_eit**2 / 4.0, params.kappa2)
    assert deg.gamma_plus == pytest.approx(gamma_eit / 2.0)
    assert deg.gamma_minus == pytest.approx(gamma_eit / 2.0)


def test_eia_splitting_reference_point(params, wp_c40):
    coeffs = om.RwaCoefficients.from_working_point(wp_c40, params)
    gamma_eit = om.eit_width(40.0, params.gamma_m)
    split = om.eia_splitting(gamma_eit, coeffs.s2, params.kappa2)
    assert split.narrow_coupling
    assert 4.0 * coeffs.s2 / gamma_eit**2 == pytest.approx(0.019, abs=0.002)
    # kappa2 * (1 + C2/(1+C1)) = kappa2 * (1 + 40/41)
    assert split.gamma_eia_approx == pytest.approx(params.kappa2 * 81.0 / 41.0, rel=1e-9)
    assert split.gamma_eia_approx == pytest.approx(0.198 * params.gamma_m, abs=0.001 * params.gamma_m)


def test_eia_splitting_complex_branch(params):
    gamma_eit = om.eit_width(40.0, params.gamma_m)
    split = om.eia_splitting(gamma_eit, gamma_eit**2, params.kappa2)
    assert split.gamma_plus.imag != 0.0
    assert split.gamma_minus == np.conj(split.gamma_plus)
    assert not split.narrow_coupling


def test_peak_height_formulas():
    perfect = om.peak_height(40.0, 40.0)
    assert perfect.exact == pytest.approx(82.0 / 81.0, rel=1e-14)
    assert perfect.large_c_approx == pytest.approx(1.0, rel=1e-14)
    dip = om.peak_height(40.0, 0.0)
    assert dip.exact == pytest.approx(2.0 / 41.0, rel=1e-14)
    assert dip.large_c_approx is None
    half = om.peak_height(40.0, 20.0)
    assert half.exact == pytest.approx(42.0 / 61.0, rel=1e-14)
    assert half.large_c_approx == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_peak_height_matches_response_at_zero(params):
    rng = np.random.default_rng(19)
    for _ in range(32):
        c1 = rng.uniform(0.0, 200.0)
        c2 = rng.uniform(0.0, 200.0)
        c = coeffs_for(params, c1, c2)
        assert om.peak_height(c1, c2).exact == pytest.approx(
            om.response_rwa(0.0, c).real, rel=1e-12, abs=1e-12
        )
        assert abs(om.response_rwa(0.0, c).imag) < 1e-12


def test_large_c_approx_converges():
    errors = []
    for c1 in (10.0, 100.0, 1000.0):
        c2 = c1 / 2.0
        ph = om.peak_height(c1, c2)
        errors.append(abs(ph.large_c_approx - ph.exact))
    assert errors[0] > errors[1] > errors[2]
