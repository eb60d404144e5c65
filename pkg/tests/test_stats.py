import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeperc.clusters import label_components
from cubeperc.cube import CubeDim
from cubeperc.gen import SeedSpec, coupled_sample, sample_subgraph
from cubeperc.stats import (
    Estimate,
    RadialProfile,
    chi_hat,
    chi_sample,
    n_alpha,
    p_geq_k_hat,
    radial_convolution,
    theta_alpha_hat,
    triangle_diagram_hat,
    two_point_radial_hat,
    z_concentration_check,
)

from _reference import direct_radial_convolution, enumerate_chi


def _labelings(n, p, replicates, master=0):
    dim = CubeDim(n)
    return [label_components(sample_subgraph(dim, p, SeedSpec(master, r)))
            for r in range(replicates)]


def test_estimate_from_samples():
    e = Estimate.from_samples(np.array([1.0, 2.0, 3.0]))
    assert e.mean == 2.0
    assert e.std_error == pytest.approx(1.0 / math.sqrt(3))
    assert e.replicates == 3
    single = Estimate.from_samples(np.array([5.0]))
    assert single.std_error == 0.0
    with pytest.raises(ValueError):
        Estimate.from_samples(np.array([]))


def test_chi_boundary_exact():
    for n in (2, 8):
        labs0 = _labelings(n, 0.0, 5)
        labs1 = _labelings(n, 1.0, 5)
        assert chi_hat(labs0) == Estimate(1.0, 0.0, 5)
        assert chi_hat(labs1) == Estimate(float(2**n), 0.0, 5)


def test_chi_against_enumeration_oracle():
    # frozen oracle values; 2.5625 at (n=2, p=0.5) checked by hand
    for n in (2, 3):
        for p in (0.1, 0.3, 0.5, 0.7):
            exact = enumerate_chi(n, p)
            if (n, p) == (2, 0.5):
                assert exact == 2.5625
            est = chi_hat(_labelings(n, p, 800, master=5))
            assert abs(est.mean - exact) <= 4 * est.std_error, (n, p, est, exact)


def test_chi_requires_consistent_input():
    with pytest.raises(ValueError):
        chi_hat([])
    with pytest.raises(ValueError):
        chi_hat(_labelings(3, 0.5, 1) + _labelings(4, 0.5, 1))


def test_p_geq_k_trivial_and_monotone():
    labs = _labelings(4, 0.4, 30)
    assert p_geq_k_hat(labs, 0).mean == 1.0
    assert p_geq_k_hat(labs, 17).mean == 0.0
    means = [p_geq_k_hat(labs, k).mean for k in range(18)]
    assert all(a >= b for a, b in zip(means, means[1:]))


def test_p_geq_k_against_enumeration():
    # P(|C(0)| >= 4) for n=2, p=0.5 from the 16-configuration census: 5/16
    labs = _labelings(2, 0.5, 2000, master=9)
    est = p_geq_k_hat(labs, 4)
    assert abs(est.mean - 5.0 / 16.0) <= 4 * est.std_error


def test_n_alpha_formulas():
    n = 12
    p_c = 0.08
    eps = 2.0 ** (-n / 3)
    p = p_c + eps / n
    val = n_alpha(p_c, p, n, 0.5)
    assert val == pytest.approx(2.0 ** (2 * n / 3), rel=1e-9)  # eps^-2 at the window edge
    tiny_alpha = n_alpha(p_c, p, n, 1e-9)
    assert tiny_alpha == pytest.approx(eps**-2.0, rel=1e-6)
    with pytest.raises(ValueError):
        n_alpha(p_c, p_c, n, 0.5)
    with pytest.raises(ValueError):
        n_alpha(p_c, p, n, 1.5)


@given(eps=st.floats(0.05, 1.0), alpha=st.floats(0.05, 0.95))
@settings(deadline=None, max_examples=100)
def test_n_alpha_lower_bound(eps, alpha):
    # cutoff >= 2^(alpha n / 3) whenever eps <= 1
    n = 15
    val = n_alpha(0.05, 0.05 + eps / n, n, alpha)
    assert val >= 2.0 ** (alpha * n / 3) * (1 - 1e-12)


def test_theta_alpha_trivials():
    labs = _labelings(4, 1.0, 10)
    assert theta_alpha_hat(labs, 1.0).mean == 1.0
    assert theta_alpha_hat(labs, 16.0).mean == 1.0
    with pytest.raises(ValueError):
        theta_alpha_hat(labs, 0.5)


def test_two_point_trivials():
    dim = CubeDim(6)
    profile0 = two_point_radial_hat(_labelings(6, 0.0, 3))
    assert profile0.values[0] == 1.0
    assert (profile0.values[1:] == 0.0).all()
    profile1 = two_point_radial_hat(_labelings(6, 1.0, 3))
    assert (profile1.values == 1.0).all()
    mid = two_point_radial_hat(_labelings(6, 0.3, 10))
    assert mid.values[0] == 1.0
    assert ((0.0 <= mid.values) & (mid.values <= 1.0)).all()
    # connectivity cannot rise with distance on average at subcritical densities;
    # just sanity-check the profile is finite and starts at 1
    assert np.isfinite(mid.values).all()


def test_two_point_sampled_matches_exact():
    labs = _labelings(8, 0.2, 6, master=3)
    exact = two_point_radial_hat(labs, method="exact")
    sampled = two_point_radial_hat(labs, method="sampled", pair_samples=200_000, seed=1)
    assert sampled.values[0] == 1.0
    assert np.allclose(exact.values, sampled.values, atol=0.02)


def test_radial_profile_validation():
    dim = CubeDim(3)
    with pytest.raises(ValueError):
        RadialProfile(dim, np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        RadialProfile(dim, np.array([1.0, -0.1, 0.0, 0.0]))


@given(n=st.integers(1, 6), seed=st.integers(0, 10**6))
@settings(deadline=None, max_examples=80)
def test_radial_convolution_matches_direct_sum(n, seed):
    dim = CubeDim(n)
    rng = np.random.default_rng(seed)
    t1 = RadialProfile(dim, rng.random(n + 1))
    t2 = RadialProfile(dim, rng.random(n + 1))
    got = radial_convolution(t1, t2).values
    want = direct_radial_convolution(n, t1.values, t2.values)
    assert np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)) <= 1e-12


@given(n=st.integers(1, 6), seed=st.integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_radial_convolution_commutes(n, seed):
    dim = CubeDim(n)
    rng = np.random.default_rng(seed)
    t1 = RadialProfile(dim, rng.random(n + 1))
    t2 = RadialProfile(dim, rng.random(n + 1))
    a = radial_convolution(t1, t2).values
    b = radial_convolution(t2, t1).values
    assert np.allclose(a, b, rtol=1e-12)


def test_radial_convolution_identity_element():
    dim = CubeDim(5)
    rng = np.random.default_rng(4)
    t1 = RadialProfile(dim, rng.random(6))
    delta = RadialProfile(dim, np.eye(6)[0])
    assert np.allclose(radial_convolution(t1, delta).values, t1.values, rtol=1e-14)
    with pytest.raises(ValueError):
        radial_convolution(t1, RadialProfile(CubeDim(4), np.ones(5)))


def test_triangle_diagram_trivials():
    dim = CubeDim(5)
    at_zero = triangle_diagram_hat(RadialProfile(dim, np.eye(6)[0]), chi=1.0, p=0.0)
    assert at_zero.nabla_diag == pytest.approx(1.0)
    assert at_zero.nabla_offdiag == pytest.approx(0.0)
    at_one = triangle_diagram_hat(RadialProfile(dim, np.ones(6)), chi=32.0, p=1.0)
    assert at_one.nabla_diag == pytest.approx(2.0**10)
    assert at_one.nabla_offdiag == pytest.approx(2.0**10)
    assert at_one.a0 == pytest.approx(1.0 / 5 + 32.0**3 / 32)


def test_z_concentration_trivials():
    labs1 = _labelings(5, 1.0, 20)
    rep = z_concentration_check(labs1, 4.0, 0.3)
    assert rep.exceed_frequency == 0.0
    assert rep.mean_z == 32.0
    labs0 = _labelings(5, 0.0, 20)
    rep0 = z_concentration_check(labs0, 2.0, 0.3)
    assert rep0.exceed_frequency == 0.0
    assert rep0.mean_z == 0.0


def test_chi_monotone_under_coupling():
    dim = CubeDim(8)
    for rep in range(20):
        graphs = coupled_sample(dim, [0.05, 0.1, 0.2, 0.5], SeedSpec(55, rep))
        stats = [chi_sample(label_components(g)) for g in graphs]
        assert stats == sorted(stats)
