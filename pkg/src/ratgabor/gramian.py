"""Zibulskii-Zeevi matrices A, Q and the rational Gramian P.

For alpha*beta = p/q in lowest terms and a point (x, w) of the fundamental
domain [0, alpha/p) x [0, 1/alpha):

* Q is p x q with Q[r, j] = Z_alpha g(x + alpha r/p, w - beta j) exp(2 pi i j r/q),
* A = alpha * Q Q^H is the p x p Zibulskii-Zeevi matrix,
* P is p x q with P[s, t] = Z_{alpha q} g(x + (alpha/p)(t p + s q), w).

P and Q have the same rank; the system is a frame iff rank P = p everywhere.
Matrices are plain complex numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParityError
from .windows import Parity, WindowSpec
from .zak import DEFAULT_TOL, ZakPoint, in_fundamental_domain, uniform_plan, zak_array

CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class ReducedFraction:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise DomainError("p and q must be positive integers")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"{self.p}/{self.q} is not in lowest terms")

    @classmethod
    def reduce(cls, num: int, den: int) -> "ReducedFraction":
        d = math.gcd(num, den)
        return cls(num // d, den // d)

    def __float__(self):
        return self.p / self.q

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class LatticeParams:
    alpha: float
    beta: float
    frac: ReducedFraction

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("alpha and beta must be positive")
        if abs(self.alpha * self.beta - self.frac.p / self.frac.q) >= CONSISTENCY_TOL:
            raise DomainError(
                f"alpha*beta = {self.alpha * self.beta!r} does not match {self.frac}")

    @classmethod
    def from_alpha(cls, alpha: float, frac: ReducedFraction) -> "LatticeParams":
        return cls(alpha, frac.p / (frac.q * alpha), frac)

    @property
    def p(self) -> int:
        return self.frac.p

    @property
    def q(self) -> int:
        return self.frac.q


@dataclass(frozen=True)
class IndexMaps:
    """Solutions of k[t] p = t (mod q) and m[s] q = s (mod p)."""

    k: tuple
    m: tuple


@dataclass
class Certificate:
    kind: str
    passed: bool
    details: dict = field(default_factory=dict)
    x_intervals: list = field(default_factory=list)


def index_maps(frac: ReducedFraction) -> IndexMaps:
    p, q = frac.p, frac.q
    p_inv = pow(p, -1, q)
    q_inv = pow(q, -1, p)
    return IndexMaps(tuple(t * p_inv % q for t in range(q)),
                     tuple(s * q_inv % p for s in range(p)))


def _check_point(params: LatticeParams, point: ZakPoint):
    if not in_fundamental_domain(params.alpha, params.p, point):
        raise DomainError(
            f"{point} lies outside [0, {params.alpha / params.p:g}) x [0, {1 / params.alpha:g})")


def q_grid(spec: WindowSpec, params: LatticeParams, x, omega, tol=DEFAULT_TOL) -> np.ndarray:
    """Q at every (x, omega) pair (broadcast); result has shape (..., p, q)."""
    alpha, beta, p, q = params.alpha, params.beta, params.p, params.q
    x = np.asarray(x, dtype=float)[..., None, None]
    omega = np.asarray(omega, dtype=float)[..., None, None]
    r = np.arange(p)[:, None]
    j = np.arange(q)[None, :]
    zak = zak_array(spec, alpha, x + alpha * r / p, omega - beta * j, tol,
                    plan=uniform_plan(spec, alpha, tol))
    return zak * np.exp(2j * np.pi * ((j * r) % q) / q)


def p_grid(spec: WindowSpec, params: LatticeParams, x, omega, tol=DEFAULT_TOL) -> np.ndarray:
    """P at every (x, omega) pair (broadcast); result has shape (..., p, q)."""
    alpha, p, q = params.alpha, params.p, params.q
    x = np.asarray(x, dtype=float)[..., None, None]
    omega = np.asarray(omega, dtype=float)[..., None, None]
    s = np.arange(p)[:, None]
    t = np.arange(q)[None, :]
    step = alpha * q
    return zak_array(spec, step, x + alpha / p * (t * p + s * q), omega, tol,
                     plan=uniform_plan(spec, step, tol))


def build_Q(spec: WindowSpec, params: LatticeParams, point: ZakPoint,
            tol: float = DEFAULT_TOL) -> np.ndarray:
    _check_point(params, point)
    return q_grid(spec, params, point.x, point.omega, tol)


def build_A(spec: WindowSpec, params: LatticeParams, point: ZakPoint,
            tol: float = DEFAULT_TOL) -> np.ndarray:
    """A[r, s] = alpha * sum_j conj(Z(x+alpha s/p, w-beta j)) Z(x+alpha r/p, w-beta j) e^{2 pi i j (r-s)/q}."""
    _check_point(params, point)
    alpha, beta, p, q = params.alpha, params.beta, params.p, params.q
    j = np.arange(q)
    zak = zak_array(spec, alpha, point.x + alpha * np.arange(p)[:, None] / p,
                    point.omega - beta * j[None, :], tol)          # (p, q): [r, j]
    A = np.empty((p, p), dtype=complex)
    for r in range(p):
        for s in range(p):
            phase = np.exp(2j * np.pi * ((j * (r - s)) % q) / q)
            A[r, s] = alpha * np.sum(np.conj(zak[s]) * zak[r] * phase)
    return A


def build_P(spec: WindowSpec, params: LatticeParams, point: ZakPoint,
            tol: float = DEFAULT_TOL) -> np.ndarray:
    _check_point(params, point)
    return p_grid(spec, params, point.x, point.omega, tol)


def factorization_factors(params: LatticeParams, point: ZakPoint):
    """The factors of Q = D1 @ P[perm] @ D2 @ W.

    D1 = diag(exp(2 pi i alpha w (s - m_s q)/p)), D2 = diag(exp(-2 pi i alpha w tau)),
    W[tau, j] = exp(2 pi i tau j p/q) and perm[s] = m_s selects the rows of P.
    """
    alpha, p, q = params.alpha, params.p, params.q
    maps = index_maps(params.frac)
    m = np.array(maps.m)
    s = np.arange(p)
    tau = np.arange(q)
    aw = alpha * point.omega
    D1 = np.diag(np.exp(2j * np.pi * aw * (s - m * q) / p))
    D2 = np.diag(np.exp(-2j * np.pi * aw * tau))
    W = np.exp(2j * np.pi * ((np.outer(tau, tau) * p) % q) / q)
    return D1, m, D2, W


def q_from_p(P: np.ndarray, params: LatticeParams, point: ZakPoint) -> np.ndarray:
    D1, perm, D2, W = factorization_factors(params, point)
    return D1 @ P[perm] @ D2 @ W


def symmetry_check(spec: WindowSpec, frac: ReducedFraction, alpha: float = 1.0,
                   tol: float = DEFAULT_TOL, atol: float = 1e-11) -> Certificate:
    """Verify the odd-window relations among the entries X[s, j] of Q(0, 0).

    Checks X[s, j] = -X[-s mod p, -j mod q] for every entry and, depending on
    whether q is even (q = 2k+2) or odd (q = 2k+1), the listed zero-row,
    zero-column and middle row/column relations.
    """
    if spec.parity is not Parity.ODD:
        raise ParityError(f"symmetry relations need an odd window, got {spec.parity.value}")
    if frac.q - frac.p != 1:
        raise DomainError(f"symmetry relations need q - p = 1, got {frac}")
    if alpha != 1.0:
        raise DomainError("symmetry relations are stated for alpha = 1")
    p, q = frac.p, frac.q
    X = build_Q(spec, LatticeParams.from_alpha(alpha, frac), ZakPoint(0.0, 0.0), tol)

    def neg(s, j):
        return X[(-s) % p, (-j) % q]

    general = max(abs(X[s, j] + neg(s, j)) for s in range(p) for j in range(q))
    details = {"lemma": general}
    if q % 2 == 0:
        k = (q - 2) // 2
        details["zero_row"] = max([abs(X[0, 0]), abs(X[0, k + 1])]
                                  + [abs(X[0, j] + X[0, q - j]) for j in range(1, q)])
        details["zero_column"] = max([abs(X[s, 0] + X[p - s, 0]) for s in range(1, p)],
                                     default=0.0)
        details["middle_column"] = max(
            [abs(X[s, k + 1] + X[p - s, k + 1]) for s in range(1, p)], default=0.0)
    else:
        k = p // 2
        details["zero_row"] = max(abs(X[0, j] + X[0, (q - j) % q]) for j in range(q))
        details["zero_column"] = max([abs(X[s, 0] + X[p - s, 0]) for s in range(1, p)],
                                     default=0.0)
        details["middle_row"] = max(abs(X[k, j] + X[k, (q - j) % q]) for j in range(q))
    worst = max(details.values())
    details = {name: float(v) for name, v in details.items()}
    details["max_violation"] = float(worst)
    return Certificate("SymmetryRelations", bool(worst < atol), details)
