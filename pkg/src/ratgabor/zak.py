"""Scalar and vector-valued Zak transforms as certified truncated series.

    Z_a f(x, w) = sum_n f(x - a n) exp(2 pi i n a w)

The series is summed over a window of 2N+1 terms centred on the term nearest
to x; N is chosen so that the envelope tail of the omitted terms is below the
requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import DomainError, TailNotSummable
from .windows import DecayForm, Envelope, WindowSpec, _hermite1

DEFAULT_TOL = 1e-12
MAX_HALF_WIDTH = 100_000
# relative inflation of closed-form tails so rounding never undercuts the true sum
_TAIL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class ZakPoint:
    x: float
    omega: float


@dataclass(frozen=True)
class TruncationPlan:
    half_width: int
    tail_bound: float


def _side_tail(envelope: Envelope, d0: float, step: float) -> float:
    """Upper bound on sum_{k>=0} env(d0 + step*k).

    Terms with negative distance are summed explicitly; from the first
    nonnegative distance on the envelope is decreasing, so the rest is at most
    its first term plus the integral of the envelope beyond it.
    """
    total = 0.0
    k = 0
    if d0 < 0:
        k = math.ceil(-d0 / step)
        total += float(np.sum(envelope(d0 + step * np.arange(k))))
    d = d0 + step * k
    C, a = envelope.amplitude, envelope.rate
    if envelope.form is DecayForm.EXPONENTIAL:
        # geometric series, exact
        return (total + C * math.exp(-a * d) / -math.expm1(-a * step)) * _TAIL_SLACK
    integral = C / step * 0.5 * math.sqrt(math.pi / a) * float(erfc(math.sqrt(a) * d))
    return (total + C * math.exp(-a * d * d) + integral) * _TAIL_SLACK


def truncation_bound(spec: WindowSpec, alpha: float, x: float, N: int) -> float:
    """Bound on sum_{|n| > N} env(x - alpha n), the mass omitted by truncation."""
    if N < 1:
        raise DomainError("half-width N must be >= 1")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    env = spec.envelope
    right = _side_tail(env, alpha * (N + 1) - x, alpha)   # n = N+1, N+2, ...
    left = _side_tail(env, x + alpha * (N + 1), alpha)    # n = -N-1, -N-2, ...
    return right + left


def _uniform_bound(spec: WindowSpec, alpha: float, N: int) -> float:
    # Valid for every centred offset |x| <= alpha/2: both sides are dominated
    # by the nearer one, whose first distance is at least alpha (N + 1/2).
    return 2.0 * _side_tail(spec.envelope, alpha * (N + 0.5), alpha)


def _smallest_half_width(bound, tol: float) -> int:
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    hi = 1
    while bound(hi) >= tol:
        hi *= 2
        if hi > MAX_HALF_WIDTH:
            raise TailNotSummable(
                f"envelope cannot certify tolerance {tol:g} within "
                f"{MAX_HALF_WIDTH} terms per side")
    lo = hi // 2
    if lo >= 1 and bound(lo) < tol:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def plan_truncation(spec: WindowSpec, alpha: float, x: float,
                    tol: float = DEFAULT_TOL) -> TruncationPlan:
    """Smallest N (around the nearest lattice term to x) whose tail is below tol."""
    offset = x - alpha * round(x / alpha)
    N = _smallest_half_width(lambda n: truncation_bound(spec, alpha, offset, n), tol)
    return TruncationPlan(N, truncation_bound(spec, alpha, offset, N))


def uniform_plan(spec: WindowSpec, alpha: float, tol: float = DEFAULT_TOL) -> TruncationPlan:
    """A truncation plan valid simultaneously for every x."""
    N = _smallest_half_width(lambda n: _uniform_bound(spec, alpha, n), tol)
    return TruncationPlan(N, _uniform_bound(spec, alpha, N))


def zak_array(spec: WindowSpec, alpha: float, x, omega, tol: float = DEFAULT_TOL,
              plan: TruncationPlan | None = None) -> np.ndarray:
    """Vectorised Zak transform; x and omega broadcast against each other.

    Every entry is within ``tol`` of the exact series value.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    if plan is None:
        plan = uniform_plan(spec, alpha, tol)
    x, omega = np.broadcast_arrays(np.asarray(x, dtype=float),
                                   np.asarray(omega, dtype=float))
    centre = np.rint(x / alpha)
    n = centre[..., None] + np.arange(-plan.half_width, plan.half_width + 1)
    values = spec(x[..., None] - alpha * n)
    # reduce the phase argument mod 1 before scaling by 2 pi
    phase = np.mod(n * alpha * omega[..., None], 1.0)
    return np.sum(values * np.exp(2j * np.pi * phase), axis=-1)


def zak(spec: WindowSpec, alpha: float, point: ZakPoint, tol: float = DEFAULT_TOL) -> complex:
    plan = plan_truncation(spec, alpha, point.x, tol)
    return complex(zak_array(spec, alpha, point.x, point.omega, plan=plan))


def in_fundamental_domain(alpha: float, p: int, point: ZakPoint) -> bool:
    """Membership in Q_{alpha,p} = [0, alpha/p) x [0, 1/alpha)."""
    return 0.0 <= point.x < alpha / p and 0.0 <= point.omega < 1.0 / alpha


def vector_zak(spec: WindowSpec, alpha: float, p: int, point: ZakPoint,
               tol: float = DEFAULT_TOL) -> np.ndarray:
    """(Z_alpha g(x + alpha r / p, omega)) for r = 0..p-1."""
    if p < 1:
        raise DomainError("p must be a positive integer")
    if not in_fundamental_domain(alpha, p, point):
        raise DomainError(f"{point} lies outside [0, {alpha / p:g}) x [0, {1 / alpha:g})")
    x = point.x + alpha * np.arange(p) / p
    return zak_array(spec, alpha, x, point.omega, tol)


def vector_zak_normalization(alpha: float) -> float:
    """Constant c with  integral over Q_{alpha,p} of |vector Zak f|^2 = c ||f||^2.

    For fixed x the omega-integral over [0, 1/alpha) is (1/alpha) sum_n
    |f(x - alpha n)|^2 by orthogonality of the exponentials; the p shifted
    copies of [0, alpha/p) tile [0, alpha), and integrating the periodised
    energy over one period gives ||f||^2.  Hence c = 1/alpha, independent of p.
    """
    return 1.0 / alpha


def hermite1_tail_constant(period: float) -> float:
    """C_L = 2 + (1/h1(L)) * sum_{n>=2} [h1(L n) + h1(L (2n-1)/2)] for h1(t) = t exp(-pi t^2).

    With L = 5 alpha this is the constant of the maximal-term bound
    |h1(x) - Z_L h1(x, w)| <= C_L h1(L - |x|) for |x| < L/2.  The ratios are
    formed in log space so that large periods do not underflow to 0/0.
    """
    if period / 2 < 1 / math.sqrt(2 * math.pi):
        raise DomainError("the maximal-term bound needs h1 decreasing beyond L/2")

    def ratio(t):
        return (t / period) * math.exp(-math.pi * (t * t - period * period))

    total = 0.0
    n = 2
    while True:
        term = ratio(period * n) + ratio(period * (2 * n - 1) / 2)
        total += term
        if term <= 1e-17 * max(total, 1e-300) or term == 0.0:
            break
        n += 1
    return 2.0 + total


def hermite1_tail_bound(y, period: float):
    """Bound on |Z_L h1(y, w) - h1(y)| valid for |y| < L/2, every w."""
    y = np.abs(np.asarray(y, dtype=float))
    if np.any(y >= period / 2):
        raise DomainError("maximal-term bound requires |y| < L/2")
    return hermite1_tail_constant(period) * _hermite1(period - y)
