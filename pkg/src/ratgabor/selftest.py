"""Quick invariant checks bundled with the package (``ratgabor selftest``)."""

from __future__ import annotations

import math

import numpy as np

from . import analysis, gramian, numerics, windows, zak


def _zak_quasi_periodic():
    rng = np.random.default_rng(0)
    worst = 0.0
    for spec in (windows.gaussian(), windows.hermite1()):
        for _ in range(20):
            a, x, w = rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(0, 2)
            lhs = zak.zak(spec, a, zak.ZakPoint(x + a, w))
            rhs = np.exp(2j * np.pi * a * w) * zak.zak(spec, a, zak.ZakPoint(x, w))
            worst = max(worst, abs(lhs - rhs))
    return worst < 2 * zak.DEFAULT_TOL, f"max deviation {worst:.2e}"


def _gauss_zak_zero():
    v = abs(zak.zak(windows.gaussian(), 1.0, zak.ZakPoint(0.5, 0.5)))
    return v < 1e-10, f"|Z g(1/2, 1/2)| = {v:.2e}"


def _index_maps():
    for p, q in [(3, 5), (2, 3), (5, 8), (7, 12)]:
        maps = gramian.index_maps(gramian.ReducedFraction(p, q))
        if any(k * p % q != t for t, k in enumerate(maps.k)):
            return False, f"k fails for {p}/{q}"
        if any(m * q % p != s for s, m in enumerate(maps.m)):
            return False, f"m fails for {p}/{q}"
    return True, "congruences hold"


def _factorization():
    rng = np.random.default_rng(1)
    spec = windows.hermite1()
    worst = 0.0
    for p, q in [(1, 2), (2, 3), (3, 5), (4, 7)]:
        params = gramian.LatticeParams.from_alpha(rng.uniform(0.6, 1.6),
                                                  gramian.ReducedFraction(p, q))
        pt = zak.ZakPoint(rng.uniform(0, params.alpha / p), rng.uniform(0, 1 / params.alpha))
        Q = gramian.build_Q(spec, params, pt)
        P = gramian.build_P(spec, params, pt)
        worst = max(worst, float(np.abs(Q - gramian.q_from_p(P, params, pt)).max()))
    return worst < 1e-10, f"max chain residual {worst:.2e}"


def _odd_deficiency():
    spec = windows.hermite1()
    ok = all(analysis.odd_window_deficiency(spec, n).passed for n in range(2, 7))
    return ok, "n = 2..6"


def _three_fifths():
    cert = analysis.certify_three_fifths(1.0, 16)
    return cert.passed, f"min certified margin {cert.details['low_min_certified_margin']:.3g}"


def _taussky_sound():
    rng = np.random.default_rng(2)
    for _ in range(500):
        n = int(rng.integers(2, 6))
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        M += np.diag(rng.uniform(0, 4, n))
        for mode in numerics.TausskyMode:
            if numerics.taussky_check(M, mode).passed and abs(numerics.determinant(M)) == 0:
                return False, "pass with singular matrix"
    return True, "500 random matrices"


def _scan_half():
    spec = windows.hermite1()
    params = gramian.LatticeParams.from_alpha(1.0, gramian.ReducedFraction(1, 2))
    res = analysis.scan(spec, params, analysis.GridSpec(8, 8))
    return res.verdict is analysis.Verdict.NOT_FRAME, res.verdict.value


CHECKS = [
    ("zak quasi-periodicity", _zak_quasi_periodic),
    ("gaussian zak zero", _gauss_zak_zero),
    ("index map congruences", _index_maps),
    ("Q = D1 P~ D2 W", _factorization),
    ("odd window deficiency", _odd_deficiency),
    ("3/5 Taussky certificate", _three_fifths),
    ("Taussky soundness", _taussky_sound),
    ("h1 fails at 1/2", _scan_half),
]


def run(out=print) -> bool:
    ok_all = True
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        ok_all &= bool(ok)
        out(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return ok_all
