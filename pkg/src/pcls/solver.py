"""Weighted least-squares coefficient estimation and stability diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

RANK_RTOL = 1e-10


class RankDeficiencyError(ValueError):
    """The weighted measurement matrix is numerically rank deficient."""

    def __init__(self, rank: int, n_columns: int):
        self.rank = rank
        self.n_columns = n_columns
        super().__init__(f"numerical rank {rank} below column count {n_columns}")


@dataclass(frozen=True)
class StabilityReport:
    """Spectral diagnostics of the information matrix."""

    lambda_min: float
    lambda_max: float
    cond: float
    dist_identity: float


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    residual_norm: float
    stability: StabilityReport
    n_samples: int


def info_matrix(psi: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
    """Normalized Gram matrix (W Psi)^T (W Psi) / N."""
    psi = np.asarray(psi, dtype=float)
    a = psi if weights is None else psi * np.asarray(weights, dtype=float)[:, None]
    return a.T @ a / a.shape[0]


def stability_report(m: np.ndarray) -> StabilityReport:
    """Eigenvalue extremes, condition number, spectral distance to identity."""
    m = np.asarray(m, dtype=float)
    eigs = np.linalg.eigvalsh((m + m.T) / 2.0)
    lam_min, lam_max = float(eigs[0]), float(eigs[-1])
    cond = lam_max / lam_min if lam_min > 0 else np.inf
    dist = max(abs(lam_max - 1.0), abs(1.0 - lam_min))
    return StabilityReport(lam_min, lam_max, cond, dist)


def fit(psi: np.ndarray, weights: np.ndarray | None, u: np.ndarray) -> FitResult:
    """Least-squares coefficients of min |W u - W Psi c| by QR/SVD.

    Solves through an orthogonal factorization of the weighted system, never
    the assembled normal equations.  Raises RankDeficiencyError when the
    weighted matrix has numerical rank below its column count (singular
    values under RANK_RTOL times the largest).
    """
    psi = np.asarray(psi, dtype=float)
    u = np.asarray(u, dtype=float)
    n, p = psi.shape
    if u.shape != (n,):
        raise ValueError("response vector length must match the row count")
    if n < p:
        raise ValueError(f"need at least {p} samples, got {n}")
    if weights is None:
        a, b = psi, u
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,) or np.any(w <= 0.0):
            raise ValueError("weights must be a positive vector, one per sample")
        a = psi * w[:, None]
        b = u * w
    coef, _, rank, _ = linalg.lstsq(a, b, cond=RANK_RTOL, lapack_driver="gelsd")
    if rank < p:
        raise RankDeficiencyError(rank, p)
    residual = float(np.linalg.norm(b - a @ coef))
    report = stability_report(a.T @ a / n)
    return FitResult(coefficients=coef, residual_norm=residual, stability=report, n_samples=n)


def validation_error(coefficients: np.ndarray, psi_v: np.ndarray, u_v: np.ndarray) -> float:
    """Relative prediction error |u_v - Psi_v c| / |u_v| on held-out data."""
    u_v = np.asarray(u_v, dtype=float)
    denom = float(np.linalg.norm(u_v))
    if denom == 0.0:
        raise ValueError("validation response has zero norm; relative error undefined")
    resid = u_v - np.asarray(psi_v, dtype=float) @ np.asarray(coefficients, dtype=float)
    return float(np.linalg.norm(resid)) / denom


def pce_moments(coefficients: np.ndarray) -> tuple[float, float]:
    """Mean and variance implied by coefficients on an orthonormal basis."""
    c = np.asarray(coefficients, dtype=float)
    return float(c[0]), float(np.sum(c[1:] ** 2))


def fit_summary_csv(result: FitResult, path_or_buf) -> None:
    """Coefficients plus a one-line spectral summary."""
    if hasattr(path_or_buf, "write"):
        _write_fit(result, path_or_buf)
    else:
        with open(path_or_buf, "w", encoding="utf-8") as fh:
            _write_fit(result, fh)


def _write_fit(result: FitResult, fh) -> None:
    s = result.stability
    fh.write(
        "# residual = %r, lambda_min = %r, lambda_max = %r, cond = %r, dist_identity = %r\n"
        % (result.residual_norm, s.lambda_min, s.lambda_max, s.cond, s.dist_identity)
    )
    fh.write("coefficient\n")
    for c in result.coefficients:
        fh.write(repr(float(c)) + "\n")
