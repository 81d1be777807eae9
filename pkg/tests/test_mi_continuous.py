import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from awgnshape.channel import awgn_capacity, snr_from_sigma
from awgnshape.constellation import Constellation, entropy, make_constellation, uniform
from awgnshape.mi_continuous import McConfig, mc_estimate, mi_mc_general, mi_mc_uniform


def quadrature_mi(points, probs, sigma):
    """I(X;Y) for a 1-D constellation by adaptive quadrature over y."""
    points = np.asarray(points, dtype=float)
    probs = np.asarray(probs, dtype=float)

    def f(y, mean):
        return norm.pdf(y, loc=mean, scale=sigma)

    total = 0.0
    for x, p in zip(points, probs):
        if p == 0:
            continue

        def integrand(y, x=x):
            fx = f(y, x)
            fy = np.sum(probs * f(y, points))
            return fx * math.log2(fx / fy) if fx > 0 else 0.0

        lo, hi = x - 12 * sigma, x + 12 * sigma
        val, _ = quad(integrand, lo, hi, limit=400, points=list(points[(points > lo) & (points < hi)]))
        total += p * val
    return total


class TestUniform:
    def test_single_point(self):
        assert mi_mc_uniform(Constellation([[0.3, -0.2]]), 0.5) == 0.0

    def test_high_snr_saturates(self, pam2):
        assert mi_mc_uniform(pam2, 0.05) >= 0.999

    def test_pam2_quadrature(self, pam2):
        ref = quadrature_mi([-1, 1], [0.5, 0.5], 1.0)
        assert abs(mi_mc_uniform(pam2, 1.0, McConfig(100_000, 0)) - ref) <= 0.005

    def test_small_sigma_no_overflow(self, qam16):
        v = mi_mc_uniform(qam16, 0.01, McConfig(2000, 1))
        assert math.isfinite(v) and v == pytest.approx(4.0, abs=1e-9)


class TestGeneral:
    def test_uniform_bit_identical(self, qam16):
        cfg = McConfig(20_000, 5)
        assert mi_mc_general(qam16, uniform(16), 0.7, cfg) == mi_mc_uniform(qam16, 0.7, cfg)

    def test_point_mass(self, pam8):
        d = np.zeros(8)
        d[3] = 1.0
        assert mi_mc_general(pam8, d, 0.3) == 0.0

    def test_skewed_plateau(self, pam2):
        h = entropy([0.9, 0.1])
        assert h == pytest.approx(0.469, abs=1e-3)
        assert abs(mi_mc_general(pam2, [0.9, 0.1], 0.1) - h) <= 0.005

    @pytest.mark.parametrize("sigma", [0.3, 0.7, 1.5])
    def test_skewed_quadrature(self, pam2, sigma):
        ref = quadrature_mi([-1, 1], [0.8, 0.2], sigma)
        assert abs(mi_mc_general(pam2, [0.8, 0.2], sigma) - ref) <= 0.005

    def test_pam4_nonuniform_quadrature(self):
        c = make_constellation("pam", 4)
        d = np.array([0.1, 0.4, 0.4, 0.1])
        ref = quadrature_mi(c.points[:, 0], d, 1.2)
        assert abs(mi_mc_general(c, d, 1.2) - ref) <= 0.005

    def test_deterministic(self, qam16):
        cfg = McConfig(5000, 42)
        assert mi_mc_uniform(qam16, 0.5, cfg) == mi_mc_uniform(qam16, 0.5, cfg)

    def test_bounds(self, qam16):
        rng = np.random.default_rng(0)
        for sigma in (0.2, 0.5, 1.0, 2.0):
            d = rng.dirichlet(np.ones(16))
            est = mc_estimate(qam16, d, sigma, McConfig(20_000, 3))
            cap = awgn_capacity(snr_from_sigma(d @ qam16.energies, sigma, 2))
            assert 0 <= est.mi <= min(entropy(d), cap + 3 * est.stderr)

    def test_monotone_in_sigma(self, qam16):
        sigmas = np.linspace(0.2, 1.5, 8)
        ests = [mc_estimate(qam16, uniform(16), s, McConfig(20_000, 0)) for s in sigmas]
        for a, b in zip(ests, ests[1:]):
            assert a.mi >= b.mi - 3 * b.stderr

    def test_seed_variance(self):
        c = make_constellation("psk", 8)
        vals = [mi_mc_uniform(c, 0.6, McConfig(100_000, s)) for s in range(30)]
        assert np.var(vals) <= 1e-4

    def test_sigma_positive(self, pam2):
        with pytest.raises(ValueError):
            mi_mc_uniform(pam2, 0.0)
