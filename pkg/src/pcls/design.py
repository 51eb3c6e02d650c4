"""Alphabetic design criteria and candidate-subset construction algorithms.

Criteria act on the information matrix M = (W Psi)^T (W Psi) / N; smaller is
better for every criterion.  The greedy construction grows a design row by
row, widening the active column set with the row count until the design is
square, and then augmenting with rank-one update formulas for the D and A
criteria.  A row-exchange pass driven by the determinant gain function can
refine a finished D design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .orthopoly import BasisSpec, eval_basis_matrix
from .sampling import COHERENCE_OPTIMAL, SampleSet, sample_coherence_optimal

CRITERIA = ("D", "A", "E", "K")

_SENTINEL = math.inf
_SINGULAR_REL_TOL = 1e-13


class ConstructionFailureError(RuntimeError):
    """Every candidate augmentation was singular at some greedy step."""


class SingularUpdateError(ValueError):
    """Rank-one update denominator is numerically zero."""


def resolve_criterion(criterion: str) -> str:
    crit = criterion.upper()
    if crit == "I":
        # Prediction-variance optimality coincides with A for an
        # orthonormal basis.
        crit = "A"
    if crit not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    return crit


@dataclass
class DesignState:
    """Rows selected from a candidate matrix plus criterion bookkeeping.

    inverse_cache holds the inverse of the information matrix of the final
    design (normalized by the row count) when it is nonsingular.
    """

    selected_rows: list[int]
    active_columns: int
    criterion: str
    phi: float
    inverse_cache: np.ndarray | None = None
    exchanges: int = 0

    @property
    def n(self) -> int:
        return len(self.selected_rows)

    def column_indices(self) -> np.ndarray:
        return np.arange(self.active_columns)

    def write_csv(self, path_or_buf, points: np.ndarray, weights: np.ndarray) -> None:
        """Selected points in sample-set layout plus their candidate indices."""
        rows = np.asarray(self.selected_rows)
        if hasattr(path_or_buf, "write"):
            fh = path_or_buf
            self._write(fh, points, weights, rows)
        else:
            with open(path_or_buf, "w", encoding="utf-8") as fh:
                self._write(fh, points, weights, rows)

    def _write(self, fh, points, weights, rows) -> None:
        fh.write(f"# criterion = {self.criterion}\n")
        fh.write(f"# phi = {self.phi!r}\n")
        d = points.shape[1]
        cols = [f"xi_{k + 1}" for k in range(d)] + ["w", "candidate"]
        fh.write(",".join(cols) + "\n")
        for i in rows:
            vals = [repr(float(v)) for v in points[i]] + [repr(float(weights[i])), str(int(i))]
            fh.write(",".join(vals) + "\n")


def _weighted_rows(psi: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 2:
        raise ValueError("candidate matrix must be 2-D")
    if weights is None:
        return psi
    w = np.asarray(weights, dtype=float)
    if w.shape != (psi.shape[0],):
        raise ValueError("weights must be one per candidate row")
    return psi * w[:, None]


def criterion_value(criterion: str, psi: np.ndarray, weights: np.ndarray | None = None) -> float:
    """Scalar design quality of the (weighted) measurement matrix.

    Returns +inf when the information matrix is singular; non-finite input
    raises instead, so genuine numerical failures stay distinguishable.
    """
    crit = resolve_criterion(criterion)
    a = _weighted_rows(psi, weights)
    if not np.all(np.isfinite(a)):
        raise ValueError("candidate matrix contains non-finite entries")
    n, p = a.shape
    m = a.T @ a / n
    return criterion_of_information_matrix(crit, m)


def criterion_of_information_matrix(criterion: str, m: np.ndarray) -> float:
    crit = resolve_criterion(criterion)
    p = m.shape[0]
    if crit == "D":
        logdet = _chol_logdet(m)
        if logdet is None:
            return _SENTINEL
        return math.exp(-logdet / p)
    if crit == "A":
        try:
            inv = np.linalg.inv(m)
        except np.linalg.LinAlgError:
            return _SENTINEL
        tr = float(np.trace(inv))
        return tr if tr > 0 and _chol_logdet(m) is not None else _SENTINEL
    eigs = np.linalg.eigvalsh((m + m.T) / 2.0)
    lam_min, lam_max = float(eigs[0]), float(eigs[-1])
    if lam_min <= max(lam_max, 0.0) * _SINGULAR_REL_TOL:
        return _SENTINEL
    if crit == "E":
        return 1.0 / lam_min
    return lam_max / lam_min


def _chol_logdet(m: np.ndarray) -> float | None:
    # Log-determinant through a Cholesky factor; None flags non-SPD input.
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None
    diag = np.diag(chol)
    if np.any(diag <= 0.0):
        return None
    return 2.0 * float(np.sum(np.log(diag)))


def det_update_ratio(a_inv: np.ndarray, vec: np.ndarray, sign: int = 1) -> float:
    """Determinant ratio |A +/- v v^T| / |A| from the inverse of A."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    v = np.asarray(vec, dtype=float)
    return float(1.0 + sign * v @ (a_inv @ v))


def trace_update(a_inv: np.ndarray, vec: np.ndarray, sign: int = 1) -> tuple[float, np.ndarray]:
    """Trace and inverse of A +/- v v^T from the inverse of A.

    Raises SingularUpdateError when the Sherman-Morrison denominator
    vanishes (the update would be singular).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    v = np.asarray(vec, dtype=float)
    u = a_inv @ v
    denom = 1.0 + sign * float(v @ u)
    if abs(denom) < 1e-12:
        raise SingularUpdateError(f"rank-one update denominator {denom:.3e} is numerically zero")
    new_inv = a_inv - sign * np.outer(u, u) / denom
    return float(np.trace(new_inv)), new_inv


def greedy_design(
    psi_c: np.ndarray,
    n_select: int,
    criterion: str,
    weights: np.ndarray | None = None,
    use_updates: bool = True,
) -> DesignState:
    """Sequential row selection minimizing the criterion at every step.

    While fewer rows than columns are selected, the active column set grows
    with the row count so the information matrix stays square.  Ties break
    toward the lowest candidate index.  With use_updates the D and A paths
    score candidates through determinant and trace update formulas; the
    naive path recomputes the criterion from scratch and exists as a
    reference for tests (E and K always use it).
    """
    crit = resolve_criterion(criterion)
    a = _weighted_rows(psi_c, weights)
    n_c, p = a.shape
    if not np.all(np.isfinite(a)):
        raise ValueError("candidate matrix contains non-finite entries")
    if n_select < p:
        raise ValueError(f"design needs at least {p} rows, requested {n_select}")
    if n_c < n_select:
        raise ValueError(f"candidate pool of {n_c} rows cannot fill a design of {n_select}")

    if use_updates and crit in ("D", "A"):
        selected = _greedy_fast(a, n_select, crit)
    else:
        selected = _greedy_naive(a, n_select, crit)

    return _finalize_state(a, selected, crit)


def _finalize_state(a: np.ndarray, selected: list[int], crit: str) -> DesignState:
    n, p = len(selected), a.shape[1]
    sub = a[selected]
    m = sub.T @ sub / n
    phi = criterion_of_information_matrix(crit, m)
    inv = None
    if math.isfinite(phi) or crit in ("E", "K"):
        try:
            inv = np.linalg.inv(m)
        except np.linalg.LinAlgError:
            inv = None
    return DesignState(
        selected_rows=list(selected),
        active_columns=p,
        criterion=crit,
        phi=phi,
        inverse_cache=inv,
    )


def _greedy_naive(a: np.ndarray, n_select: int, crit: str) -> list[int]:
    n_c, p = a.shape
    selected: list[int] = []
    available = np.ones(n_c, dtype=bool)
    for step in range(1, n_select + 1):
        cols = min(step, p)
        best_phi, best_idx = math.inf, -1
        for i in np.nonzero(available)[0]:
            rows = selected + [int(i)]
            phi = criterion_value(crit, a[rows][:, :cols])
            if phi < best_phi:
                best_phi, best_idx = phi, int(i)
        if best_idx < 0 or not math.isfinite(best_phi):
            raise ConstructionFailureError(f"all candidate augmentations singular at step {step}")
        selected.append(best_idx)
        available[best_idx] = False
    return selected


def _greedy_fast(a: np.ndarray, n_select: int, crit: str) -> list[int]:
    n_c, p = a.shape
    selected: list[int] = []
    available = np.ones(n_c, dtype=bool)

    # Growth phase: the selected submatrix stays square, so candidate scores
    # come from bordered determinant / inverse identities.
    sq_inv: np.ndarray | None = None  # inverse of the selected square block
    for step in range(1, p + 1):
        cols = step
        idx = np.nonzero(available)[0]
        if step == 1:
            scores = a[idx, 0]
            t = None
        else:
            u = a[selected, cols - 1]
            t = sq_inv @ u
            scores = a[idx, cols - 1] - a[idx, : cols - 1] @ t
        mags = np.abs(scores)
        scale = max(float(np.max(np.abs(a[:, :cols]))), 1.0)
        valid = mags > _SINGULAR_REL_TOL * scale
        if crit == "D":
            order = mags
        else:
            # A-criterion: minimize |S_new^-1|_F^2 assembled from the
            # bordered-inverse blocks of the square selected matrix.
            order = np.full(idx.shape, -math.inf)
            if step == 1:
                order[valid] = -1.0 / (scores[valid] ** 2)
            else:
                base = float(np.sum(sq_inv * sq_inv))
                tt = float(t @ t)
                vs = a[idx, : cols - 1]
                r_rows = vs @ sq_inv  # rows v^T B^-1
                cross = r_rows @ (sq_inv.T @ t)  # t^T B^-1 r per candidate
                rnorm = np.einsum("ij,ij->i", r_rows, r_rows)
                with np.errstate(divide="ignore", invalid="ignore"):
                    s2 = scores**2
                    total = (
                        base
                        + 2.0 * cross / scores
                        + (tt * rnorm) / s2
                        + (tt + rnorm + 1.0) / s2
                    )
                order[valid] = -total[valid]
        if not np.any(valid):
            raise ConstructionFailureError(f"all candidate augmentations singular at step {step}")
        masked = np.where(valid, order, -math.inf)
        best_local = int(np.argmax(masked))
        best = int(idx[best_local])
        s = float(scores[best_local])
        # Update the square-block inverse.
        if step == 1:
            sq_inv = np.array([[1.0 / s]])
        else:
            v = a[best, : cols - 1]
            r = v @ sq_inv
            new_inv = np.empty((cols, cols))
            new_inv[: cols - 1, : cols - 1] = sq_inv + np.outer(t, r) / s
            new_inv[: cols - 1, cols - 1] = -t / s
            new_inv[cols - 1, : cols - 1] = -r / s
            new_inv[cols - 1, cols - 1] = 1.0 / s
            sq_inv = new_inv
        selected.append(best)
        available[best] = False

    if n_select == p:
        return selected

    # Augmentation phase on the full column set: maintain (A^T A)^-1 and the
    # candidate quadratic forms q_i = a_i^T (A^T A)^-1 a_i.
    m_inv = sq_inv @ sq_inv.T
    q = np.einsum("ij,ij->i", a @ m_inv, a)
    refresh_every = 50
    for step in range(p + 1, n_select + 1):
        if (step - p) % refresh_every == 0:
            sub = a[selected]
            m_inv = np.linalg.inv(sub.T @ sub)
            q = np.einsum("ij,ij->i", a @ m_inv, a)
        if crit == "D":
            cand_scores = np.where(available, q, -math.inf)
            best = int(np.argmax(cand_scores))
        else:
            t_mat = a @ m_inv
            h = np.einsum("ij,ij->i", t_mat, t_mat)
            with np.errstate(divide="ignore", invalid="ignore"):
                reduction = h / (1.0 + q)
            cand_scores = np.where(available, reduction, -math.inf)
            best = int(np.argmax(cand_scores))
        if not available[best]:
            raise ConstructionFailureError(f"no candidate available at step {step}")
        v = a[best]
        u = m_inv @ v
        denom = 1.0 + float(v @ u)
        s = a @ u
        q = q - s * s / denom
        m_inv = m_inv - np.outer(u, u) / denom
        selected.append(best)
        available[best] = False
    return selected


def fedorov_exchange(
    design: DesignState,
    psi_c: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 1000,
    weights: np.ndarray | None = None,
) -> DesignState:
    """Pairwise row exchange maximizing the determinant gain function.

    At each pass the in-design row i and candidate row j with the largest
    gain Delta(i, j) are swapped; the determinant of the unnormalized
    information matrix grows by the factor 1 + Delta.  Stops when the best
    gain falls below tol or after max_iter swaps.  D-criterion designs only.
    """
    if resolve_criterion(design.criterion) != "D":
        raise ValueError("exchange refinement is defined for the D criterion")
    a = _weighted_rows(psi_c, weights)
    n_c, p = a.shape
    selected = list(design.selected_rows)
    if len(selected) < p:
        raise ValueError("design must have at least as many rows as columns")
    sub = a[selected]
    gram = sub.T @ sub
    try:
        m_inv = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise ValueError("exchange requires a nonsingular starting design") from exc

    exchanges = 0
    while exchanges < max_iter:
        in_design = np.zeros(n_c, dtype=bool)
        in_design[selected] = True
        out_idx = np.nonzero(~in_design)[0]
        if out_idx.size == 0:
            break
        a_in = a[selected]
        a_out = a[out_idx]
        t_in = a_in @ m_inv
        d_in = np.einsum("ij,ij->i", t_in, a_in)
        d_out = np.einsum("ij,ij->i", a_out @ m_inv, a_out)
        d_cross = t_in @ a_out.T
        delta = d_out[None, :] - (d_in[:, None] * d_out[None, :] - d_cross**2) - d_in[:, None]
        best_flat = int(np.argmax(delta))
        bi, bj = np.unravel_index(best_flat, delta.shape)
        best_delta = float(delta[bi, bj])
        if not best_delta > tol:
            break
        selected[bi] = int(out_idx[bj])
        exchanges += 1
        sub = a[selected]
        gram = sub.T @ sub
        m_inv = np.linalg.inv(gram)

    n = len(selected)
    m = gram / n
    phi = criterion_of_information_matrix("D", m)
    inv = m_inv * n if math.isfinite(phi) else None
    return DesignState(
        selected_rows=selected,
        active_columns=p,
        criterion="D",
        phi=phi,
        inverse_cache=inv,
        exchanges=exchanges,
    )


def hybrid_design(
    spec: BasisSpec,
    n: int,
    n_c: int,
    criterion: str,
    seed: int,
    **mcmc,
) -> tuple[SampleSet, DesignState]:
    """Alphabetic selection from a coherence-optimal candidate pool.

    Draws n_c weighted coherence-optimal candidates, runs the greedy
    construction on the weighted candidate matrix, and returns the selected
    points with their original weights alongside the design state.
    """
    crit = resolve_criterion(criterion)
    if n_c < n:
        raise ValueError("candidate pool must be at least the design size")
    candidates = sample_coherence_optimal(spec, n_c, seed, **mcmc)
    psi_c = eval_basis_matrix(spec, candidates.points)
    state = greedy_design(psi_c, n, crit, weights=candidates.weights)
    rows = np.asarray(state.selected_rows)
    metadata = dict(candidates.metadata)
    metadata.update({"criterion": crit, "n_candidates": n_c})
    chosen = SampleSet(
        points=candidates.points[rows].copy(),
        weights=candidates.weights[rows].copy(),
        strategy=f"{crit}_{COHERENCE_OPTIMAL}",
        seed=seed,
        metadata=metadata,
    )
    return chosen, state


def default_candidate_count(n_terms: int) -> int:
    """Candidate pool size floor(1.5 * P * log P) used by the experiments."""
    return int(math.floor(1.5 * n_terms * math.log(n_terms)))
