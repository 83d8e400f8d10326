"""Small dense complex linear algebra: singular values, rank, eigenvalues, Taussky tests.

Bulk work goes through LAPACK (batched over leading axes); a one-sided Jacobi
SVD is kept as an independent reference route for cross-checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DomainError, NotHermitian

DEFAULT_REL_TOL = 1e-8
HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class RankReport:
    rank: int
    singular_values: tuple
    threshold_used: float


class TausskyMode(enum.Enum):
    ROW_DOMINANCE = "RowDominance"
    PAIRWISE_PRODUCT = "PairwiseProduct"


@dataclass(frozen=True)
class TausskyReport:
    mode: TausskyMode
    passed: bool
    margin: float


def singular_values(M, method: str = "lapack") -> np.ndarray:
    """All min(rows, cols) singular values in descending order.

    Leading axes are treated as a batch for ``method="lapack"``.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape[-1] < 1 or M.shape[-2] < 1:
        raise DomainError("matrix must have at least one row and column")
    if method == "lapack":
        try:
            return np.linalg.svd(M, compute_uv=False)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from exc
    if method == "jacobi":
        return jacobi_singular_values(M)
    raise ValueError(f"unknown method {method!r}")


def jacobi_singular_values(M, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """One-sided (Hestenes) Jacobi SVD of a single complex matrix."""
    G = np.array(M, dtype=complex)
    if G.ndim != 2:
        raise DomainError("jacobi_singular_values expects a single matrix")
    if G.shape[0] < G.shape[1]:
        G = G.conj().T
    n = G.shape[1]
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                a = np.vdot(G[:, i], G[:, i]).real
                b = np.vdot(G[:, j], G[:, j]).real
                c = np.vdot(G[:, i], G[:, j])
                if abs(c) <= eps * np.sqrt(a * b) or abs(c) == 0.0:
                    continue
                rotated = True
                phase = c / abs(c)
                zeta = (b - a) / (2.0 * abs(c))
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                cs = 1.0 / np.hypot(1.0, t)
                sn = cs * t
                gi = G[:, i].copy()
                gj = G[:, j] / phase
                G[:, i] = cs * gi - sn * gj
                G[:, j] = (sn * gi + cs * gj) * phase
        if not rotated:
            return np.sort(np.linalg.norm(G, axis=0))[::-1]
    raise ConvergenceFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


def rank_with_tol(M, rel_tol: float = DEFAULT_REL_TOL, abs_tol: float = 0.0) -> RankReport:
    """Count singular values above max(rel_tol * sigma_max, abs_tol).

    ``abs_tol`` lets callers declare matrices whose entries are only known to
    some absolute accuracy (e.g. truncated Zak values) as zero.
    """
    if not 0 < rel_tol < 1:
        raise DomainError("rel_tol must lie in (0, 1)")
    sv = singular_values(M)
    smax = float(sv[0]) if sv.size else 0.0
    threshold = max(rel_tol * smax, abs_tol) if smax > 0 else max(rel_tol, abs_tol)
    return RankReport(int(np.count_nonzero(sv > threshold)), tuple(float(s) for s in sv),
                      threshold)


def min_eig_hermitian(M, herm_tol: float = HERMITIAN_TOL):
    """Smallest eigenvalue of a Hermitian matrix (batched over leading axes)."""
    M = np.asarray(M, dtype=complex)
    if M.shape[-1] != M.shape[-2]:
        raise NotHermitian("matrix is not square")
    if np.max(np.abs(M - np.swapaxes(M.conj(), -1, -2)), initial=0.0) > herm_tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        eig = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    low = eig[..., 0]
    return float(low) if low.ndim == 0 else low


def offdiag_row_sums(M) -> np.ndarray:
    a = np.abs(np.asarray(M))
    return a.sum(axis=1) - np.diag(a)


def taussky_check(M, mode: TausskyMode) -> TausskyReport:
    """Sufficient nonsingularity tests by diagonal dominance.

    Row dominance: |a_ii| > R_i for every i.  Pairwise product:
    |a_ii| |a_jj| > R_i R_j for every i != j.  R_i is the sum of the
    off-diagonal moduli in row i; margin is the smallest slack.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("taussky_check needs a square matrix")
    d = np.abs(np.diag(M))
    R = offdiag_row_sums(M)
    if mode is TausskyMode.ROW_DOMINANCE:
        margin = float(np.min(d - R))
    else:
        n = len(d)
        if n < 2:
            margin = float(d[0])
        else:
            prod = np.outer(d, d) - np.outer(R, R)
            margin = float(np.min(prod[~np.eye(n, dtype=bool)]))
    return TausskyReport(mode, margin > 0, margin)


def determinant(M) -> complex:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("determinant needs a square matrix")
    return complex(np.linalg.det(M))
