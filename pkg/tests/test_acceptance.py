"""End-to-end acceptance checks; each test reports one PASS/FAIL line."""

import math

import numpy as np
import pytest

from awgnshape.analysis import curve_difference_energy, kl_commutative
from awgnshape.blahut_arimoto import ba_capacity, ba_sweep, numerical_capacity_oracle
from awgnshape.constellation import uniform
from awgnshape.constrained_ba import GainSearchConfig, cba_sweep, gain_search
from awgnshape.mi_continuous import McConfig, mi_mc_general
from awgnshape.mi_discrete import mi_discrete, mi_entropy_decomposition
from awgnshape.quantizer import QuantSettings, channel_matrix
from awgnshape.shaping_mb import mb_envelope, negative_lambda_grid

from . import test_properties as props

REFERENCE_MI = {2: 0.49203, 4: 0.57735, 5: 0.58168, 6: 0.58277, 7: 0.58304}
PAM8_SIGMAS = np.round(np.arange(1, 16) / 10, 10)


def awgn_1d(sigma, power=1.0):
    return 0.5 * math.log2(1 + power / sigma**2)


def test_c1_quantization_table(qam16, report):
    got = {b: mi_discrete(channel_matrix(qam16, 1.0, QuantSettings(b, 2.0, "half-open")), uniform(16))
           for b in REFERENCE_MI}
    centered = {b: mi_discrete(channel_matrix(qam16, 1.0, QuantSettings(b, 2.0, "centered")), uniform(16))
                for b in REFERENCE_MI}
    worst = max(abs(got[b] - REFERENCE_MI[b]) for b in REFERENCE_MI)
    detail = ", ".join(f"b={b}: {got[b]:.5f}" for b in REFERENCE_MI)
    detail += f" | max err {worst:.2e} (tol 2e-3, half-open grid)"
    detail += " | centered grid: " + ", ".join(f"{centered[b]:.5f}" for b in REFERENCE_MI)
    report("C1 16-QAM MI vs quantizer bits", worst <= 2e-3, detail)


def test_c2_bsc_closed_form(report):
    p = 0.1
    W = np.array([[1 - p, p], [p, 1 - p]])
    ref = 1 + p * math.log2(p) + (1 - p) * math.log2(1 - p)
    res = ba_capacity(W)
    err = abs(res.capacity_bits - ref)
    tv = 0.5 * np.abs(res.distribution - 0.5).sum()
    report("C2 BA on BSC(0.1)", err <= 1e-6 and tv <= 1e-6,
           f"capacity {res.capacity_bits:.9f} vs {ref:.9f} (err {err:.1e}), TV {tv:.1e}")


def test_c3_ba_vs_numerical_optimizer(pam8, report):
    quant = QuantSettings(9, 2.0)
    diffs, ba_vals, opt_vals = [], [], []
    for sigma in PAM8_SIGMAS[:10]:
        W = channel_matrix(pam8, sigma, quant)
        ba = ba_capacity(W, epsilon=1e-12).capacity_bits
        opt = numerical_capacity_oracle(W, tolerance=1e-11).capacity_bits
        ba_vals.append(ba)
        opt_vals.append(opt)
        diffs.append(abs(ba - opt))
    energy = float(np.sum((np.array(ba_vals) - np.array(opt_vals)) ** 2))
    report("C3 BA vs projected-gradient optimizer, 8-PAM", max(diffs) <= 1e-6,
           f"max |dMI| {max(diffs):.2e} (tol 1e-6), difference energy {energy:.1e}")


def test_c4_mb_negative_lambda_vs_ba(qam16, report):
    sigmas = np.round(np.arange(30, 81) / 100, 10)
    quant = QuantSettings(5, 2.0)
    mb = mb_envelope(qam16, negative_lambda_grid(1500), sigmas, quant, unit_energy=False)
    ba = ba_sweep(qam16, sigmas, quant, epsilon=1e-7)
    dmi = np.abs(mb.mi - ba.mi)
    kl = np.array([kl_commutative(a.probabilities, b.probabilities) for a, b in zip(mb, ba)])
    k = int(np.argmin(np.abs(sigmas - 0.56)))
    spike = kl[k] / np.median(kl)
    lam = {round(p.sigma, 2): p.lam for p in mb}
    ok = dmi.max() <= 1e-3 and spike >= 5
    report("C4 MB(lambda<=0) envelope vs BA, 16-QAM", ok,
           f"max |dMI| {dmi.max():.2e} (tol 1e-3), KL(0.56)/median {spike:.0f}x (need 5x), "
           f"lambda {lam[0.55]:.2f} -> {lam[0.56]:.2f}, energy {curve_difference_energy(mb, ba):.1e}")


@pytest.fixture(scope="module")
def pam8_cba(pam8):
    quant = QuantSettings(9, 2.0)
    cfg = GainSearchConfig(0.5, 4.0, points_per_depth=50, depth=5, inner_epsilon=1e-6)
    cba = cba_sweep(pam8, PAM8_SIGMAS, cfg, quant)
    mb = mb_envelope(pam8, np.round(np.arange(0, 1001) / 100, 10), PAM8_SIGMAS, quant)
    uni = [mi_discrete(channel_matrix(pam8, s, quant), uniform(8)) for s in PAM8_SIGMAS]
    return cba, mb, np.array(uni)


def test_c5_constrained_ba(pam8_cba, report):
    cba, mb, uni = pam8_cba
    power_err = max(abs(p.power - 1.0) for p in cba)
    bound_excess = max(p.mi_bits - awgn_1d(p.sigma) for p in cba)
    vs_uni = float(np.min(cba.mi - uni))
    vs_mb = float(np.min(cba.mi - mb.mi))
    ok = power_err <= 1e-6 and bound_excess <= 2e-3 and vs_uni >= -1e-9 and vs_mb >= -1e-4
    k = int(np.argmax(cba.mi - mb.mi))
    report("C5 constrained BA on 8-PAM", ok,
           f"|power-1| {power_err:.1e} (tol 1e-6), max(MI-capacity) {bound_excess:.2e} (<= 2e-3), "
           f"min(CBA-uniform) {vs_uni:.1e} (>= -1e-9), min(CBA-MB) {vs_mb:.1e} (>= -1e-4), "
           f"max(CBA-MB) {np.max(cba.mi - mb.mi):.2e} at sigma {cba.points[k].sigma:.1f}")


def test_c6_gain_interval_pathology(pam8, report):
    sigma = 0.75
    quant = QuantSettings(9, 2.0)
    cfg = GainSearchConfig(0.5, 5.0, points_per_depth=50, depth=5, inner_epsilon=1e-6)
    bound = awgn_1d(sigma) + 2e-3
    naive = gain_search(pam8, sigma, cfg, quant, exclude_infeasible=False)
    shipped = gain_search(pam8, sigma, cfg, quant)
    ok = (naive.at_boundary and naive.alpha == 5.0 and naive.mi_bits > bound
          and not shipped.at_boundary and shipped.mi_bits <= bound
          and abs(shipped.achieved_power - 1) <= 1e-6)
    report("C6 infeasible-gain guard at sigma=0.75", ok,
           f"without exclusion alpha={naive.alpha:.2f} MI {naive.mi_bits:.6f} power "
           f"{naive.achieved_power:.3f} > bound {bound:.6f}; with exclusion alpha={shipped.alpha:.3f} "
           f"MI {shipped.mi_bits:.6f}")


def test_c7_estimator_agreement(pam2, report):
    worst_mc, worst_dec = 0.0, 0.0
    for sigma in (0.3, 0.5, 1.0):
        W = channel_matrix(pam2, sigma, QuantSettings(9, 2.0))
        dec = mi_discrete(W, uniform(2))
        mc = mi_mc_general(pam2, uniform(2), sigma, McConfig(100_000, 0))
        worst_mc = max(worst_mc, abs(mc - dec))
        worst_dec = max(worst_dec, abs(mi_entropy_decomposition(W, uniform(2)) - dec))
    report("C7 Monte-Carlo vs quantized MI, 2-PAM", worst_mc <= 0.01 and worst_dec <= 1e-10,
           f"max |MC-discrete| {worst_mc:.2e} (tol 0.01), max |decomposition-discrete| "
           f"{worst_dec:.1e} (tol 1e-10)")


PROPERTY_SUITES = [
    ("transition rows sum to 1", props.test_rows_sum_to_one),
    ("KL >= 0, zero iff equal", props.test_nonnegative_and_identity),
    ("0 <= MI <= min(H, log2 |Q|)", props.test_between_zero_and_entropy),
    ("BA I* monotone", props.test_i_star_nondecreasing),
    ("MB(0) exactly uniform", props.test_zero_lambda_exact),
    ("entropy bounds", props.test_bounds),
    ("gain interval contraction", props.test_width_formula),
]


def test_c8_invariant_suites(report):
    failures = []
    for name, suite in PROPERTY_SUITES:
        try:
            suite()
        except Exception as exc:  # noqa: BLE001
            failures.append(f"{name}: {type(exc).__name__}")
    report("C8 property suites (1000 cases each)", not failures,
           f"{len(PROPERTY_SUITES) - len(failures)}/{len(PROPERTY_SUITES)} suites hold"
           + (f"; failing: {failures}" if failures else ""))
