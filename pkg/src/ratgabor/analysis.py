"""Frame-property drivers: grid scans, certificates and the density sweep."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, ParityError
from .gramian import (Certificate, LatticeParams, ReducedFraction, build_Q, p_grid,
                      symmetry_check)
from .numerics import (DEFAULT_REL_TOL, TausskyMode, min_eig_hermitian, singular_values)
from .windows import Parity, WindowSpec, _hermite1
from .zak import DEFAULT_TOL, ZakPoint, hermite1_tail_constant

NOT_FRAME_REL = 1e-8
FRAME_LIKELY_REL = 1e-4
_CHUNK = 16


class DomainMode(enum.Enum):
    FULL = "FullDomain"
    HALF = "HalfDomain"


class Verdict(enum.Enum):
    FRAME_LIKELY = "FrameLikely"
    NOT_FRAME = "NotFrame"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GridSpec:
    nx: int = 64
    nw: int = 64
    x_mode: DomainMode = DomainMode.FULL

    def __post_init__(self):
        if self.nx < 2 or self.nw < 2:
            raise DomainError("grid resolution must be at least 2 x 2")


@dataclass
class ScanResult:
    params: LatticeParams
    grid: GridSpec
    xs: np.ndarray
    omegas: np.ndarray
    sigma_min_field: np.ndarray
    global_min: float
    argmin: ZakPoint
    argmin_index: tuple
    verdict: Verdict


@dataclass(frozen=True)
class SweepRecord:
    n: int
    j: int
    ab: Fraction
    reduced: ReducedFraction
    min_eig: float


def fundamental_domain(alpha: float, p: int):
    """Q_{alpha,p} = [0, alpha/p) x [0, 1/alpha) as ((x0, x1), (w0, w1))."""
    if alpha <= 0 or p < 1:
        raise DomainError("alpha must be positive and p a positive integer")
    return (0.0, alpha / p), (0.0, 1.0 / alpha)


def grid_points(alpha: float, p: int, grid: GridSpec):
    """Sample points over the (half) fundamental domain.

    FullDomain uses left endpoints of [0, alpha/p), HalfDomain the closed
    interval [0, alpha/(2p)] (its right end is the symmetry centre and is
    needed).  omega always uses left endpoints of [0, 1/alpha).  The origin is
    always sampled; doubling a FullDomain resolution refines the grid.
    """
    (_, x1), (_, w1) = fundamental_domain(alpha, p)
    if grid.x_mode is DomainMode.HALF:
        xs = np.linspace(0.0, x1 / 2, grid.nx)
    else:
        xs = x1 * np.arange(grid.nx) / grid.nx
    return xs, w1 * np.arange(grid.nw) / grid.nw


def _resolve_threads(threads):
    return max(1, threads or os.cpu_count() or 1)


def _chunked(fn, n_rows: int, threads=None):
    """Apply fn to row slices; results concatenated in row order."""
    slices = [slice(i, min(i + _CHUNK, n_rows)) for i in range(0, n_rows, _CHUNK)]
    workers = _resolve_threads(threads)
    if workers == 1 or len(slices) == 1:
        parts = [fn(s) for s in slices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, slices))
    return np.concatenate(parts, axis=0)


def sigma_min_field(spec: WindowSpec, params: LatticeParams, xs, omegas,
                    tol: float = DEFAULT_TOL, threads=None) -> np.ndarray:
    """Smallest singular value of P on the tensor grid xs x omegas."""
    xs = np.asarray(xs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)

    def rows(sl):
        P = p_grid(spec, params, xs[sl, None], omegas[None, :], tol)
        return singular_values(P)[..., -1]

    return _chunked(rows, xs.size, threads)


def min_eig_field(spec: WindowSpec, params: LatticeParams, xs, omegas,
                  tol: float = DEFAULT_TOL, threads=None) -> np.ndarray:
    """Smallest eigenvalue of P P^H on the tensor grid xs x omegas."""
    xs = np.asarray(xs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)

    def rows(sl):
        P = p_grid(spec, params, xs[sl, None], omegas[None, :], tol)
        return min_eig_hermitian(P @ np.swapaxes(P.conj(), -1, -2))

    return _chunked(rows, xs.size, threads)


def classify(field_values: np.ndarray, not_frame_rel: float = NOT_FRAME_REL,
             frame_rel: float = FRAME_LIKELY_REL) -> Verdict:
    top = float(np.max(field_values))
    low = float(np.min(field_values))
    if top <= 0 or low < not_frame_rel * top:
        return Verdict.NOT_FRAME
    if low > frame_rel * top:
        return Verdict.FRAME_LIKELY
    return Verdict.INCONCLUSIVE


def _check_density(frac: ReducedFraction):
    if frac.p > frac.q:
        raise DomainError(f"alpha*beta = {frac} exceeds 1; no frame is possible")
    if frac.p == frac.q and frac.p != 1:
        raise DomainError(f"{frac} is not reduced")


def scan(spec: WindowSpec, params: LatticeParams, grid: GridSpec = GridSpec(),
         tol: float = DEFAULT_TOL, threads=None,
         not_frame_rel: float = NOT_FRAME_REL, frame_rel: float = FRAME_LIKELY_REL) -> ScanResult:
    """Evaluate sigma_min(P) over the fundamental domain and classify.

    HalfDomain restricts x to [0, alpha/(2p)]; it is only sound for windows
    with declared parity, for which P(alpha/p - x, -w) is a row/column
    permutation of P(x, w) up to unimodular diagonal factors.
    """
    _check_density(params.frac)
    if grid.x_mode is DomainMode.HALF and spec.parity is Parity.NONE:
        raise DomainError("HalfDomain scans need a window with declared parity")
    xs, omegas = grid_points(params.alpha, params.p, grid)
    values = sigma_min_field(spec, params, xs, omegas, tol, threads)
    # np.argmin returns the first minimum in row-major order: lowest (x, omega) index
    i, k = np.unravel_index(int(np.argmin(values)), values.shape)
    return ScanResult(params, grid, xs, omegas, values, float(values[i, k]),
                      ZakPoint(float(xs[i]), float(omegas[k])), (int(i), int(k)),
                      classify(values, not_frame_rel, frame_rel))


def default_grid(spec: WindowSpec, nx: int = 64, nw: int = 64) -> GridSpec:
    mode = DomainMode.FULL if spec.parity is Parity.NONE else DomainMode.HALF
    return GridSpec(nx, nw, mode)


def odd_window_deficiency(spec: WindowSpec, n: int, alpha: float = 1.0,
                          tol: float = DEFAULT_TOL,
                          rel_tol: float = DEFAULT_REL_TOL) -> Certificate:
    """Rank deficiency of Q(0, 0) at alpha*beta = (n-1)/n for an odd window."""
    if spec.parity is not Parity.ODD:
        raise ParityError(f"odd_window_deficiency needs an odd window, got {spec.parity.value}")
    if n < 2:
        raise DomainError("n must be at least 2")
    frac = ReducedFraction(n - 1, n)
    params = LatticeParams.from_alpha(alpha, frac)
    Q = build_Q(spec, params, ZakPoint(0.0, 0.0), tol)
    sv = singular_values(Q)
    smax, smin = float(sv[0]), float(sv[-1])
    # an identically vanishing matrix (up to truncation error) is maximally deficient
    zero_level = 10 * tol * math.sqrt(Q.size)
    ratio = 0.0 if smax <= zero_level else smin / smax
    details = {"n": n, "alpha": alpha, "beta": params.beta, "p": frac.p, "q": frac.q,
               "sigma_max": smax, "sigma_min": smin, "ratio": ratio,
               "rel_tol": rel_tol}
    passed = ratio < rel_tol
    if alpha == 1.0:
        sym = symmetry_check(spec, frac, alpha, tol)
        details["symmetry_max_violation"] = sym.details["max_violation"]
        passed = passed and sym.passed
    return Certificate("OddWindowDeficiency", bool(passed), details)


# ---------------------------------------------------------------------------
# alpha*beta = 3/5 with the first Hermite function
# ---------------------------------------------------------------------------

# Entries are (position / alpha of the main Zak term, inflation factor); the
# positions are already reduced mod 5 alpha into (-5 alpha/2, 5 alpha/2).
# Rows s = 0, 2, 1 and columns t = 1, 2, 3 of P on [0, alpha/12].
_LOW_BLOCK = (
    ((1.0, 1), (2.0, 3), (-2.0, 3)),
    ((-2 / 3, 1), (1 / 3, 1), (4 / 3, 1)),
    ((-7 / 3, 3), (-4 / 3, 1), (-1 / 3, 1)),
)
# Rows s = 0, 1, 2 against columns t = 0, 3, 2 of P on [alpha/12, alpha/6].
_HIGH_BLOCK = (
    ((0.0, 1), (-2.0, 1), (2.0, 1)),
    ((5 / 3, 1), (-1 / 3, 1), (-4 / 3, 1)),
    ((-5 / 3, 1), (4 / 3, 1), (1 / 3, 1)),
)

THREE_FIFTHS_ALPHA_MIN = math.sqrt(3 / 5)


def _h1_slope_bound(lo: float, hi: float) -> float:
    """sup |h1'(t)| for t in [lo, hi], with h1'(t) = (1 - 2 pi t^2) exp(-pi t^2)."""
    u = 0.0 if lo <= 0 <= hi else min(abs(lo), abs(hi))
    v = max(abs(lo), abs(hi))
    poly = max(abs(1 - 2 * math.pi * u * u), abs(1 - 2 * math.pi * v * v))
    return poly * math.exp(-math.pi * u * u)


def _entry_bounds(y: float, delta: float, factor: int, diagonal: bool,
                  period: float, c_tail: float):
    """(value at the cell centre, Lipschitz constant in x) of one envelope entry.

    Diagonal entries are lower bounds |h1(y)| - tail, off-diagonal entries upper
    bounds |h1(y)| + tail, where tail = c_tail * h1(period - |y|) bounds the
    non-maximal terms of Z_period h1.  Entries the proof inflates by 3 use
    max(3 |h1(y)|, |h1(y)| + tail).
    """
    if abs(y) + delta >= period / 2:
        raise DomainError("envelope entry leaves the range of the maximal-term bound")
    main = abs(float(_hermite1(y)))
    tail = c_tail * float(_hermite1(period - abs(y)))
    lip_main = _h1_slope_bound(y - delta, y + delta)
    w = period - abs(y)
    lip_tail = c_tail * _h1_slope_bound(w - delta, w + delta)
    if diagonal:
        return main - tail, lip_main + lip_tail
    if factor == 3:
        return max(3 * main, main + tail), max(3 * lip_main, lip_main + lip_tail)
    return main + tail, lip_main + lip_tail


def envelope_matrix(alpha: float, x: float, block=_LOW_BLOCK, delta: float = 0.0):
    """The 3x3 envelope matrix H at x, plus entrywise Lipschitz constants."""
    period = 5 * alpha
    c_tail = hermite1_tail_constant(period)
    H = np.empty((3, 3))
    L = np.empty((3, 3))
    for i, row in enumerate(block):
        for k, (pos, factor) in enumerate(row):
            H[i, k], L[i, k] = _entry_bounds(x + pos * alpha, delta, factor, i == k,
                                             period, c_tail)
    return H, L


def _cell_margins(alpha: float, lo: float, hi: float, n_cells: int, block, mode):
    """Certified (interval-covering) and pointwise margins on each cell of [lo, hi]."""
    width = (hi - lo) / n_cells
    delta = width / 2
    certified = np.empty(n_cells)
    pointwise = np.empty(n_cells)
    for c in range(n_cells):
        x = lo + (c + 0.5) * width
        H, L = envelope_matrix(alpha, x, block, delta)
        d = np.diag(H)
        Ld = np.diag(L)
        R = H.sum(axis=1) - d
        LR = L.sum(axis=1) - Ld
        d_lo = d - Ld * delta
        R_hi = R + LR * delta
        if mode is TausskyMode.ROW_DOMINANCE:
            pointwise[c] = np.min(d - R)
            certified[c] = np.min(d_lo - R_hi)
        else:
            off = ~np.eye(3, dtype=bool)
            pointwise[c] = np.min((np.outer(d, d) - np.outer(R, R))[off])
            if np.any(d_lo <= 0):
                certified[c] = -np.inf
            else:
                certified[c] = np.min((np.outer(d_lo, d_lo) - np.outer(R_hi, R_hi))[off])
    return certified, pointwise


def three_fifths_row_bound(alpha: float) -> float:
    """1 - 6 (23/13) exp(-5 pi alpha^2 / 2), the closed-form first-row bound for alpha >= 1."""
    return 1 - 6 * (23 / 13) * math.exp(-5 * math.pi * alpha**2 / 2)


def certify_three_fifths(alpha: float, grid_x: int = 64, tol: float = DEFAULT_TOL) -> Certificate:
    """Interval certificate that P has full rank for h1 at alpha*beta = 3/5.

    [0, alpha/12] is split into grid_x cells and checked on the rows s = 0, 2, 1
    and columns t = 1, 2, 3 (pairwise products for alpha < 1, row dominance
    otherwise); [alpha/12, alpha/6] uses columns t = 0, 2, 3 with row
    dominance.  Every margin carries the Lipschitz slack of its cell, so a
    pass covers the whole interval, and every omega, since the bounds only use
    moduli.  Symmetry of h1 extends the result to [alpha/6, alpha/3], and
    Fourier duality to beta >= sqrt(3/5).
    """
    if alpha < THREE_FIFTHS_ALPHA_MIN:
        raise DomainError(f"alpha must be at least sqrt(3/5) = {THREE_FIFTHS_ALPHA_MIN:.6f}")
    if grid_x < 1:
        raise DomainError("grid_x must be positive")
    low_mode = TausskyMode.PAIRWISE_PRODUCT if alpha < 1 else TausskyMode.ROW_DOMINANCE
    low_cert, low_point = _cell_margins(alpha, 0.0, alpha / 12, grid_x, _LOW_BLOCK, low_mode)
    high_mode = TausskyMode.ROW_DOMINANCE
    high_cert, high_point = _cell_margins(alpha, alpha / 12, alpha / 6, grid_x, _HIGH_BLOCK,
                                          high_mode)
    details = {
        "alpha": alpha,
        "tail_constant": hermite1_tail_constant(5 * alpha),
        "low_mode": low_mode.value,
        "low_min_margin": float(np.min(low_point)),
        "low_min_certified_margin": float(np.min(low_cert)),
        "high_mode": high_mode.value,
        "high_min_margin": float(np.min(high_point)),
        "high_min_certified_margin": float(np.min(high_cert)),
        "cells_per_interval": grid_x,
    }
    if alpha >= 1:
        details["row_bound"] = three_fifths_row_bound(alpha)
    passed = bool(np.all(low_cert > 0) and np.all(high_cert > 0))
    if "row_bound" in details:
        passed = passed and details["row_bound"] > 0
    return Certificate("ThreeFifthsTaussky", passed, details,
                       [(0.0, alpha / 12), (alpha / 12, alpha / 6)])


# ---------------------------------------------------------------------------
# density sweep
# ---------------------------------------------------------------------------

def sweep(spec: WindowSpec, n_min: int, n_max: int, alpha: float = 1.0,
          grid: GridSpec = GridSpec(32, 32, DomainMode.HALF), tol: float = DEFAULT_TOL,
          threads=None, progress=None) -> list:
    """min over x in [0, alpha/(2p)], omega in [0, 1/alpha) of lambda_min(P P^H).

    One record per (n, j) with 1 <= j < n; equal reduced fractions share one
    evaluation.
    """
    if not 2 <= n_min <= n_max:
        raise DomainError("need 2 <= n_min <= n_max")
    half = GridSpec(grid.nx, grid.nw, DomainMode.HALF)
    cache = {}
    records = []
    for n in range(n_min, n_max + 1):
        for j in range(1, n):
            frac = ReducedFraction.reduce(n - j, n)
            if frac not in cache:
                params = LatticeParams.from_alpha(alpha, frac)
                xs, omegas = grid_points(alpha, frac.p, half)
                cache[frac] = float(np.min(min_eig_field(spec, params, xs, omegas, tol,
                                                         threads)))
            records.append(SweepRecord(n, j, Fraction(n - j, n), frac, cache[frac]))
        if progress is not None:
            progress(n)
    return records


def lower_frame_bound_estimate(result: ScanResult) -> float:
    """alpha * q * global_min^2: the smallest sampled eigenvalue of A = alpha Q Q^H.

    Q = D1 P~ D2 W with unimodular diagonals and W W^H = q I, so the
    eigenvalues of A are alpha * q times the squared singular values of P.
    """
    return result.params.alpha * result.params.q * result.global_min**2


def fourier_dual_consistency(spec: WindowSpec, alpha: float, beta: float,
                             grid: GridSpec = GridSpec(), tol: float = DEFAULT_TOL,
                             threads=None, normalized: bool = False) -> float:
    """|global_min(scan(alpha, beta)) - global_min(scan(beta, alpha))|.

    With ``normalized=True`` the two minima are first converted to
    lower-frame-bound estimates, which are invariant under alpha <-> beta for
    windows that are Fourier eigenfunctions; the raw sigma_min(P) minima differ
    by the factor sqrt(beta/alpha).
    """
    frac = Fraction(alpha * beta).limit_denominator(10_000)
    reduced = ReducedFraction(frac.numerator, frac.denominator)
    if alpha == beta:
        return 0.0
    first = scan(spec, LatticeParams(alpha, beta, reduced), grid, tol, threads)
    second = scan(spec, LatticeParams(beta, alpha, reduced), grid, tol, threads)
    if normalized:
        return abs(lower_frame_bound_estimate(first) - lower_frame_bound_estimate(second))
    return abs(first.global_min - second.global_min)
