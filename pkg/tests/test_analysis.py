import math

import numpy as np
import pytest

from ratgabor import analysis, windows
from ratgabor.analysis import DomainMode, GridSpec, Verdict
from ratgabor.errors import DomainError, ParityError
from ratgabor.gramian import LatticeParams, ReducedFraction
from ratgabor.windows import DecayForm, Envelope, Parity

ROOT35 = math.sqrt(3 / 5)


def params(alpha, p, q):
    return LatticeParams.from_alpha(alpha, ReducedFraction(p, q))


def odd_custom():
    t = np.linspace(-6, 6, 2401)
    return windows.custom_window(t, t * np.exp(-t * t), Envelope(DecayForm.GAUSSIAN, 0.61, 0.5),
                                 Parity.ODD, "odd-custom")


def test_fundamental_domain():
    assert analysis.fundamental_domain(1, 1) == ((0, 1), (0, 1))
    assert analysis.fundamental_domain(1, 3) == ((0, 1 / 3), (0, 1))
    assert analysis.fundamental_domain(2, 3) == ((0, 2 / 3), (0, 1 / 2))


def test_grid_contains_origin_and_nests():
    coarse = analysis.grid_points(1.0, 3, GridSpec(8, 8))
    fine = analysis.grid_points(1.0, 3, GridSpec(16, 16))
    assert coarse[0][0] == 0 and coarse[1][0] == 0
    np.testing.assert_allclose(fine[0][::2], coarse[0])
    np.testing.assert_allclose(fine[1][::2], coarse[1])
    half = analysis.grid_points(1.0, 3, GridSpec(8, 8, DomainMode.HALF))
    assert half[0][0] == 0 and half[0][-1] == pytest.approx(1 / 6)


def test_scan_h1_half_is_not_frame():
    res = analysis.scan(windows.hermite1(), params(1, 1, 2), GridSpec(32, 32))
    assert res.global_min < 1e-10
    assert (res.argmin.x, res.argmin.omega) == (0.0, 0.0)
    assert res.verdict is Verdict.NOT_FRAME


def test_scan_gaussian_half_is_frame():
    res = analysis.scan(windows.gaussian(), params(1, 1, 2), GridSpec(32, 32))
    assert res.global_min > 0 and res.verdict is Verdict.FRAME_LIKELY


def test_scan_h1_three_fifths():
    res = analysis.scan(windows.hermite1(), params(1, 3, 5), GridSpec(64, 64))
    assert res.verdict is Verdict.FRAME_LIKELY


def test_scan_rejects_supercritical():
    with pytest.raises(DomainError):
        analysis.scan(windows.gaussian(), LatticeParams(1.0, 1.5, ReducedFraction(3, 2)))


def test_half_domain_needs_parity():
    spec = windows.custom_window([-1, 0, 2], [0.1, 0.5, 0.001],
                                 Envelope(DecayForm.GAUSSIAN, 1.0, 1.0))
    with pytest.raises(DomainError):
        analysis.scan(spec, params(1, 1, 2), GridSpec(4, 4, DomainMode.HALF))


@pytest.mark.parametrize("name", ["hermite1", "gauss", "sech"])
def test_half_domain_agrees_with_full(name):
    spec = windows.window_from_string(name)
    pr = params(1.1, 3, 5)
    full = analysis.scan(spec, pr, GridSpec(32, 32))
    half = analysis.scan(spec, pr, GridSpec(17, 32, DomainMode.HALF))
    assert half.global_min == pytest.approx(full.global_min, rel=1e-12)


def test_verdict_thresholds():
    assert analysis.classify(np.array([1.0, 1e-9])) is Verdict.NOT_FRAME
    assert analysis.classify(np.array([1.0, 1e-3])) is Verdict.FRAME_LIKELY
    assert analysis.classify(np.array([1.0, 1e-6])) is Verdict.INCONCLUSIVE
    assert analysis.classify(np.zeros(3)) is Verdict.NOT_FRAME


def test_monotone_refinement():
    spec = windows.hermite1()
    for p, q in [(2, 3), (3, 5), (4, 7)]:
        pr = params(0.9, p, q)
        coarse = analysis.scan(spec, pr, GridSpec(8, 8)).global_min
        fine = analysis.scan(spec, pr, GridSpec(16, 16)).global_min
        assert fine <= coarse + 2e-12


def test_scan_threads_deterministic():
    pr = params(1.0, 3, 5)
    a = analysis.scan(windows.hermite1(), pr, GridSpec(40, 24), threads=1)
    b = analysis.scan(windows.hermite1(), pr, GridSpec(40, 24), threads=4)
    np.testing.assert_array_equal(a.sigma_min_field, b.sigma_min_field)
    assert a.argmin == b.argmin


@pytest.mark.parametrize("spec", [windows.hermite1(), odd_custom()], ids=["hermite1", "custom"])
@pytest.mark.parametrize("n", range(2, 9))
def test_odd_window_deficiency(spec, n):
    for alpha in (1.0, 1.3):
        cert = analysis.odd_window_deficiency(spec, n, alpha)
        assert cert.passed
        assert cert.details["ratio"] < 1e-10


def test_odd_window_deficiency_examples():
    cert = analysis.odd_window_deficiency(windows.hermite1(), 2, 1.0)
    assert cert.passed and cert.details["sigma_max"] < 1e-11
    assert "symmetry_max_violation" in cert.details
    assert analysis.odd_window_deficiency(windows.hermite1(), 4, 1.3).passed
    with pytest.raises(ParityError):
        analysis.odd_window_deficiency(windows.gaussian(), 3)


def test_even_window_is_not_deficient():
    # the same matrix for the Gaussian has full rank
    from ratgabor.gramian import build_Q
    from ratgabor.numerics import rank_with_tol
    from ratgabor.zak import ZakPoint
    Q = build_Q(windows.gaussian(), params(1, 2, 3), ZakPoint(0, 0))
    assert rank_with_tol(Q).rank == 2


@pytest.mark.parametrize("alpha", [ROOT35, 0.9, 1.0, 1.5, 2.0])
def test_three_fifths_certificate(alpha):
    cert = analysis.certify_three_fifths(alpha, 64)
    assert cert.passed
    assert cert.details["low_min_certified_margin"] > 0
    assert cert.details["high_min_certified_margin"] > 0
    expected_mode = "PairwiseProduct" if alpha < 1 else "RowDominance"
    assert cert.details["low_mode"] == expected_mode
    assert cert.details["tail_constant"] == pytest.approx(2.0)
    if alpha >= 1:
        assert cert.details["row_bound"] == pytest.approx(
            1 - 6 * 23 / 13 * math.exp(-5 * math.pi * alpha**2 / 2))
        assert cert.details["row_bound"] > 0


def test_three_fifths_domain():
    with pytest.raises(DomainError):
        analysis.certify_three_fifths(0.7)


def test_three_fifths_slack_is_charged():
    cert = analysis.certify_three_fifths(1.0, 4)
    fine = analysis.certify_three_fifths(1.0, 256)
    assert cert.details["low_min_certified_margin"] < cert.details["low_min_margin"]
    assert cert.details["low_min_certified_margin"] < fine.details["low_min_certified_margin"]


def test_envelope_matrix_bounds_true_zak_moduli():
    """H bounds |P| entrywise: diagonal from below, off-diagonal from above."""
    from ratgabor.gramian import build_P
    from ratgabor.zak import ZakPoint
    h = windows.hermite1()
    for alpha in (ROOT35, 1.0, 1.7):
        pr = params(alpha, 3, 5)
        for x in np.linspace(0, alpha / 12, 5):
            H, _ = analysis.envelope_matrix(alpha, x)
            for w in np.linspace(0, 1 / alpha, 7, endpoint=False):
                P = np.abs(build_P(h, pr, ZakPoint(x, w)))
                sub = P[[0, 2, 1]][:, [1, 2, 3]]
                assert np.all(np.diag(sub) >= np.diag(H) - 1e-15)
                off = ~np.eye(3, dtype=bool)
                assert np.all(sub[off] <= H[off] + 1e-15)


@pytest.mark.parametrize("alpha", [ROOT35, 1.0])
def test_certificate_implies_scan_verdict(alpha):
    assert analysis.certify_three_fifths(alpha).passed
    res = analysis.scan(windows.hermite1(), params(alpha, 3, 5), GridSpec(32, 32))
    assert res.verdict is Verdict.FRAME_LIKELY


def test_sweep_small():
    recs = analysis.sweep(windows.hermite1(), 5, 9, 1.0, GridSpec(16, 16))
    assert len(recs) == sum(n - 1 for n in range(5, 10))
    for r in recs:
        assert r.reduced == ReducedFraction.reduce(r.n - r.j, r.n)
        assert r.min_eig >= -1e-10
        if r.reduced.q - r.reduced.p == 1:
            assert r.min_eig < 1e-8
        else:
            assert r.min_eig > 1e-4
    (six_two,) = [r for r in recs if (r.n, r.j) == (6, 2)]
    assert six_two.reduced == ReducedFraction(2, 3) and six_two.min_eig < 1e-8


def test_sweep_bad_range():
    with pytest.raises(DomainError):
        analysis.sweep(windows.hermite1(), 1, 4)


def test_fourier_duality_normalized():
    h = windows.hermite1()
    assert analysis.fourier_dual_consistency(h, 1.0, 0.6, normalized=True) < 1e-6
    assert analysis.fourier_dual_consistency(windows.gaussian(), 1.0, 0.6, GridSpec(32, 32),
                                             normalized=True) < 1e-6
    assert analysis.fourier_dual_consistency(h, ROOT35, ROOT35) == 0.0


def test_raw_minima_scale_by_sqrt_beta_over_alpha():
    h = windows.hermite1()
    a = analysis.scan(h, LatticeParams(1.0, 0.6, ReducedFraction(3, 5)))
    b = analysis.scan(h, LatticeParams(0.6, 1.0, ReducedFraction(3, 5)))
    assert b.global_min == pytest.approx(a.global_min * math.sqrt(1.0 / 0.6), rel=1e-9)
