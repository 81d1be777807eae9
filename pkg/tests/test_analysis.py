import math

import numpy as np
import pytest

from awgnshape.analysis import (
    capacity_gap_report,
    check_same_grid,
    curve_difference_energy,
    kl_commutative,
    kl_divergence,
)
from awgnshape.channel import snr_from_sigma
from awgnshape.constrained_ba import GainSearchConfig, cba_sweep
from awgnshape.curve import CurvePoint, MiCurve
from awgnshape.errors import DimensionMismatch, GridMismatch, SupportMismatch
from awgnshape.quantizer import QuantSettings
from awgnshape.shaping_mb import mb_envelope


def curve(mis, sigmas=None, dimension=1, method="x"):
    sigmas = sigmas if sigmas is not None else np.linspace(0.1, 1.0, len(mis))
    return MiCurve(method, dimension, [
        CurvePoint(sigma=s, snr_db=snr_from_sigma(1.0, s, dimension).snr_db, mi_bits=m,
                   probabilities=np.array([1.0]), power=1.0)
        for s, m in zip(sigmas, mis)])


class TestKl:
    def test_identical(self):
        assert kl_divergence([0.2, 0.8], [0.2, 0.8]) == 0.0

    def test_point_mass(self):
        assert kl_divergence([1, 0], [0.5, 0.5]) == 1.0

    def test_direct_sum(self):
        ref = 0.5 * math.log2(0.5 / 0.9) + 0.5 * math.log2(0.5 / 0.1)
        assert kl_divergence([0.5, 0.5], [0.9, 0.1]) == pytest.approx(ref, abs=1e-15)
        assert ref == pytest.approx(0.736966, abs=1e-6)

    def test_support_mismatch(self):
        with pytest.raises(SupportMismatch):
            kl_divergence([0.5, 0.5], [1.0, 0.0])
        with pytest.raises(SupportMismatch):
            kl_commutative([0.5, 0.5], [1.0, 0.0])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            kl_divergence([1.0], [0.5, 0.5])

    def test_commutative(self):
        P, Q = [0.1, 0.6, 0.3], [0.3, 0.3, 0.4]
        assert kl_commutative(P, Q) == kl_commutative(Q, P)
        assert kl_commutative(P, P) == 0.0
        assert kl_commutative(P, Q) == pytest.approx((kl_divergence(P, Q) + kl_divergence(Q, P)) / 2)


class TestCurves:
    def test_identical(self):
        a = curve([0.1, 0.4, 0.9])
        assert curve_difference_energy(a, a) == 0.0

    def test_constant_offset(self):
        eps, K = 1e-3, 7
        base = np.linspace(0.2, 0.9, K)
        a, b = curve(base), curve(base + eps)
        assert curve_difference_energy(a, b) == pytest.approx(K * eps**2, rel=1e-9)
        assert curve_difference_energy(a, b) == curve_difference_energy(b, a)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            curve_difference_energy(curve([0.1, 0.2]), curve([0.1, 0.2], [0.1, 0.3]))
        with pytest.raises(GridMismatch):
            check_same_grid(curve([0.1]), curve([0.1, 0.2]))

    def test_gap_at_capacity(self):
        sigma = 0.5
        cap = 0.5 * math.log2(1 + 1 / sigma**2)
        ((s, gap),) = capacity_gap_report(curve([cap], [sigma]))
        assert s == sigma and gap == pytest.approx(0.0, abs=1e-12)

    def test_gap_2d_zero_mi(self):
        sigma = math.sqrt(1 / 6)  # SNR 3 in 2-D
        ((_, gap),) = capacity_gap_report(curve([0.0], [sigma], dimension=2), power=1.0)
        assert gap == pytest.approx(2.0, abs=1e-12)

    def test_cba_gap_closer_than_mb(self, pam8):
        sigmas = [0.3, 0.6, 1.0]
        quant = QuantSettings(9)
        cba = cba_sweep(pam8, sigmas, GainSearchConfig(depth=3, inner_epsilon=1e-7), quant)
        mb = mb_envelope(pam8, np.linspace(0, 10, 201), sigmas, quant)
        for (_, g_cba), (_, g_mb) in zip(capacity_gap_report(cba), capacity_gap_report(mb)):
            assert g_cba >= -2e-3 and g_mb >= -2e-3
            assert g_cba <= g_mb + 1e-4
