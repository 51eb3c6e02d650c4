"""Sample-set generators for least-squares polynomial chaos regression.

Each strategy returns a SampleSet whose weights are the ones the weighted
least-squares fit expects: 1 for plain strategies, the damping products for
asymptotic sampling, and sqrt(P)/B(xi) for coherence-optimal sampling.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .orthopoly import (
    HERMITE,
    LEGENDRE,
    BasisSpec,
    eval_basis_matrix,
    gauss_rule,
)

STANDARD = "standard"
LHS = "lhs"
ASYMPTOTIC_CHEBYSHEV = "asymptotic_chebyshev"
ASYMPTOTIC_BALL = "asymptotic_ball"
COHERENCE_OPTIMAL = "coherence_optimal"
RAND_QUADRATURE = "randomized_quadrature"
HALTON_QMC = "halton_qmc"

_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
]


class UnsupportedStrategyError(ValueError):
    """The sampling strategy does not apply to the given basis."""


class InsufficientGridError(ValueError):
    """The quadrature grid has fewer points than requested samples."""


@dataclass
class SampleSet:
    """Input points with least-squares weights and generation provenance."""

    points: np.ndarray
    weights: np.ndarray
    strategy: str
    seed: int | None
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def write_csv(self, path_or_buf) -> None:
        """One row per point: xi_1..xi_d, w; header comments carry provenance."""
        if hasattr(path_or_buf, "write"):
            self._write(path_or_buf)
        else:
            with open(path_or_buf, "w", encoding="utf-8") as fh:
                self._write(fh)

    def _write(self, fh) -> None:
        fh.write(f"# strategy = {self.strategy}\n")
        fh.write(f"# seed = {self.seed}\n")
        for key in sorted(self.metadata):
            fh.write(f"# {key} = {self.metadata[key]}\n")
        cols = [f"xi_{k + 1}" for k in range(self.d)] + ["w"]
        fh.write(",".join(cols) + "\n")
        for i in range(self.n):
            vals = [repr(float(v)) for v in self.points[i]] + [repr(float(self.weights[i]))]
            fh.write(",".join(vals) + "\n")

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self._write(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class CoherenceEstimate:
    """Empirical lower bound on the coherence parameter of a strategy."""

    mu_hat: float
    n_probe: int


@dataclass(frozen=True)
class DiscrepancyReport:
    star_discrepancy: float
    exact: bool


def sample_standard(spec: BasisSpec, n: int, seed: int) -> SampleSet:
    """n i.i.d. draws from the joint orthogonality density, unit weights."""
    if n < 1:
        raise ValueError("sample count must be positive")
    rng = np.random.default_rng(seed)
    pts = spec.sample_input(rng, n)
    return SampleSet(pts, np.ones(n), STANDARD, seed)


def sample_lhs(spec: BasisSpec, n: int, seed: int) -> SampleSet:
    """Latin hypercube draws: one point per equiprobable stratum and dimension.

    Per dimension the unit interval is cut into n strata, each stratum gets
    one uniform draw, the draws go through the marginal inverse CDF, and the
    per-dimension values are paired by independent random permutations.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    rng = np.random.default_rng(seed)
    pts = np.empty((n, spec.d))
    for k, fam in enumerate(spec.families):
        z = (np.arange(n) + rng.uniform(size=n)) / n
        vals = fam.ppf(z)
        pts[:, k] = vals[rng.permutation(n)]
    return SampleSet(pts, np.ones(n), LHS, seed)


def sample_asymptotic(spec: BasisSpec, n: int, seed: int) -> SampleSet:
    """High-order importance sampling for all-Legendre or all-Hermite bases.

    Legendre: i.i.d. Chebyshev (arcsine) draws on [-1,1]^d with weights
    prod_k (1-xi_k^2)^(1/4).  Hermite: uniform draws from the ball of radius
    sqrt(2)*sqrt(2p+1) with weights exp(-|xi|^2/4).
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    kinds = {fam.kind for fam in spec.families}
    if kinds == {LEGENDRE}:
        rng = np.random.default_rng(seed)
        pts = np.cos(math.pi * rng.uniform(size=(n, spec.d)))
        w = asymptotic_weight(spec, pts)
        return SampleSet(pts, w, ASYMPTOTIC_CHEBYSHEV, seed)
    if kinds == {HERMITE}:
        rng = np.random.default_rng(seed)
        pts = _uniform_ball(rng, n, spec.d, hermite_ball_radius(spec.p))
        w = asymptotic_weight(spec, pts)
        return SampleSet(pts, w, ASYMPTOTIC_BALL, seed)
    raise UnsupportedStrategyError(
        "asymptotic sampling requires an all-Legendre or all-Hermite basis"
    )


def hermite_ball_radius(p: int) -> float:
    return math.sqrt(2.0) * math.sqrt(2.0 * p + 1.0)


def asymptotic_weight(spec: BasisSpec, points) -> np.ndarray:
    """Least-squares weights matching the asymptotic sampling density."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    kinds = {fam.kind for fam in spec.families}
    if kinds == {LEGENDRE}:
        return np.prod(np.maximum(1.0 - pts**2, 0.0) ** 0.25, axis=1)
    if kinds == {HERMITE}:
        return np.exp(-np.sum(pts**2, axis=1) / 4.0)
    raise UnsupportedStrategyError(
        "asymptotic weights require an all-Legendre or all-Hermite basis"
    )


def _uniform_ball(rng: np.random.Generator, n: int, d: int, radius: float) -> np.ndarray:
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.uniform(size=(n, 1)) ** (1.0 / d)
    return g * r


def b_value(spec: BasisSpec, xi) -> float | np.ndarray:
    """Root of the summed squared basis values; at least 1 everywhere."""
    arr = np.asarray(xi, dtype=float)
    single = arr.ndim == 1
    psi = eval_basis_matrix(spec, arr)
    b = np.sqrt(np.sum(psi * psi, axis=1))
    return float(b[0]) if single else b


def coherence_optimal_weight(spec: BasisSpec, points) -> np.ndarray:
    """Weights sqrt(P)/B(xi), making every weighted row norm equal sqrt(P)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    return math.sqrt(spec.n_terms) / b_value(spec, pts)


def _proposal_kind(spec: BasisSpec) -> str:
    kinds = {fam.kind for fam in spec.families}
    if spec.p > spec.d:
        if kinds == {LEGENDRE}:
            return "chebyshev"
        if kinds == {HERMITE}:
            return "ball"
    return "orthogonality"


def sample_coherence_optimal(
    spec: BasisSpec,
    n: int,
    seed: int,
    burn_in: int = 1000,
    thinning: int | None = None,
    proposal: str | None = None,
    block: int = 4096,
) -> SampleSet:
    """Markov chain draws from the squared-row-norm tilted density.

    The target density is proportional to f(xi) * B(xi)^2.  An independence
    Metropolis chain is used: candidates come from f itself when d >= p, and
    from the matching asymptotic density when the order dominates.  One
    state is retained every `thinning` chain steps after burn-in; retention
    must count steps, not acceptances, because states are reweighted by
    their dwell time.  Weights are sqrt(P)/B(xi), so every returned point
    satisfies sum_j (w psi_j)^2 = P identically.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    if thinning is None:
        thinning = max(8, 2 * spec.d)
    if proposal is None:
        proposal = _proposal_kind(spec)
    rng = np.random.default_rng(seed)

    def draw_block(m: int) -> tuple[np.ndarray, np.ndarray]:
        # Returns candidates and their log target/proposal ratios
        # (up to a shared constant).
        if proposal == "orthogonality":
            pts = spec.sample_input(rng, m)
            psi = eval_basis_matrix(spec, pts)
            log_r = np.log(np.sum(psi * psi, axis=1))
        elif proposal == "chebyshev":
            pts = np.cos(math.pi * rng.uniform(size=(m, spec.d)))
            psi = eval_basis_matrix(spec, pts)
            log_r = np.log(np.sum(psi * psi, axis=1))
            log_r += 0.5 * np.sum(np.log1p(-pts**2), axis=1)
        elif proposal == "ball":
            pts = _uniform_ball(rng, m, spec.d, hermite_ball_radius(spec.p))
            psi = eval_basis_matrix(spec, pts)
            log_r = np.log(np.sum(psi * psi, axis=1))
            log_r -= 0.5 * np.sum(pts**2, axis=1)
        else:
            raise ValueError(f"unknown proposal {proposal!r}")
        return pts, log_r

    out = np.empty((n, spec.d))
    collected = 0
    steps = 0
    accepted = 0
    steps_since_keep = 0
    state, state_log_r = None, None
    while collected < n:
        cand, cand_log_r = draw_block(block)
        log_u = np.log(rng.uniform(size=block))
        for i in range(block):
            if state is None:
                state, state_log_r = cand[i], cand_log_r[i]
                continue
            steps += 1
            if log_u[i] < cand_log_r[i] - state_log_r:
                state, state_log_r = cand[i], cand_log_r[i]
                accepted += 1
            if steps > burn_in:
                steps_since_keep += 1
                if steps_since_keep >= thinning:
                    out[collected] = state
                    collected += 1
                    steps_since_keep = 0
                    if collected == n:
                        break
    rate = accepted / max(steps, 1)
    metadata = {
        "burn_in": burn_in,
        "thinning": thinning,
        "proposal": proposal,
        "acceptance_rate": round(rate, 6),
    }
    if not 0.05 <= rate <= 0.95:
        metadata["warning"] = f"acceptance rate {rate:.3f} outside [0.05, 0.95]"
    w = coherence_optimal_weight(spec, out)
    return SampleSet(out, w, COHERENCE_OPTIMAL, seed, metadata)


def sample_randomized_quadrature(spec: BasisSpec, n: int, level: int, seed: int) -> SampleSet:
    """n distinct points drawn uniformly from the tensor Gauss grid.

    Each dimension contributes `level` Gauss nodes of its own family; the
    subsample is without replacement, so every coordinate is a grid node and
    no grid point repeats.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    if level < 1:
        raise ValueError("level must be positive")
    total = level**spec.d
    if total >= 2**62:
        raise ValueError(
            f"tensor grid of {level}^{spec.d} points exceeds the representable index range"
        )
    if total < n:
        raise InsufficientGridError(
            f"grid of {level}^{spec.d} = {total} points cannot supply {n} distinct samples"
        )
    rng = np.random.default_rng(seed)
    if total <= 4_000_000:
        flat = rng.choice(total, size=n, replace=False)
    else:
        # huge grids: rejection keeps memory flat; dict keeps draw order stable
        chosen: dict[int, None] = {}
        while len(chosen) < n:
            for v in rng.integers(0, total, size=n):
                chosen.setdefault(int(v))
                if len(chosen) == n:
                    break
        flat = np.fromiter(chosen, dtype=np.int64, count=n)
    nodes = [gauss_rule(fam, level).nodes for fam in spec.families]
    pts = np.empty((n, spec.d))
    rem = flat.copy()
    for k in range(spec.d - 1, -1, -1):
        pts[:, k] = nodes[k][rem % level]
        rem //= level
    return SampleSet(pts, np.ones(n), RAND_QUADRATURE, seed, {"level": level})


def halton_points(n: int, d: int, skip: int = 0) -> np.ndarray:
    """First n Halton points in [0,1)^d after skipping `skip` of them."""
    if d > len(_PRIMES):
        raise ValueError(f"Halton bases precomputed only up to d = {len(_PRIMES)}")
    out = np.empty((n, d))
    idx = np.arange(skip + 1, skip + n + 1, dtype=np.int64)
    for k in range(d):
        out[:, k] = _radical_inverse(idx, _PRIMES[k])
    return out


def _radical_inverse(idx: np.ndarray, base: int) -> np.ndarray:
    result = np.zeros(idx.shape, dtype=float)
    frac = 1.0
    rem = idx.copy()
    while rem.any():
        frac /= base
        result += frac * (rem % base)
        rem //= base
    return result


def sample_qmc(spec: BasisSpec, n: int, skip: int = 0) -> SampleSet:
    """Halton low-discrepancy points mapped onto a uniform (Legendre) basis."""
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    if skip < 0:
        raise ValueError("skip must be nonnegative")
    if {fam.kind for fam in spec.families} != {LEGENDRE}:
        raise UnsupportedStrategyError("Halton sampling supports uniform inputs only")
    unit = halton_points(n, spec.d, skip)
    pts = 2.0 * unit - 1.0
    return SampleSet(pts, np.ones(n), HALTON_QMC, None, {"skip": skip})


def compute_star_discrepancy(
    points, n_random_boxes: int = 100_000, seed: int = 0
) -> DiscrepancyReport:
    """Star discrepancy of a point set in the half-open unit cube.

    Exact for d <= 2 by enumerating boxes anchored at sample coordinates;
    a randomized lower bound (flagged exact=False) otherwise.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.size and (pts.min() < 0.0 or pts.max() >= 1.0):
        raise ValueError("points must lie in [0, 1)^d")
    n, d = pts.shape
    if n == 0:
        return DiscrepancyReport(1.0, True)
    if d <= 2:
        return DiscrepancyReport(_star_discrepancy_exact(pts), True)
    rng = np.random.default_rng(seed)
    best = 0.0
    chunk = 4096
    remaining = n_random_boxes
    while remaining > 0:
        m = min(chunk, remaining)
        v = rng.uniform(size=(m, d))
        vol = np.prod(v, axis=1)
        open_count = np.sum(np.all(pts[None, :, :] < v[:, None, :], axis=2), axis=1)
        closed_count = np.sum(np.all(pts[None, :, :] <= v[:, None, :], axis=2), axis=1)
        best = max(
            best,
            float(np.max(vol - open_count / n)),
            float(np.max(closed_count / n - vol)),
        )
        remaining -= m
    return DiscrepancyReport(min(max(best, 0.0), 1.0), False)


def _star_discrepancy_exact(pts: np.ndarray) -> float:
    n, d = pts.shape
    if d == 1:
        x = np.sort(pts[:, 0])
        i = np.arange(1, n + 1)
        over = np.max(i / n - x)
        under = np.max(x - (i - 1) / n)
        return float(min(max(max(over, under), 0.0), 1.0))
    xs = np.unique(np.concatenate([pts[:, 0], [1.0]]))
    ys = np.unique(np.concatenate([pts[:, 1], [1.0]]))
    best = 0.0
    for vx in xs:
        in_x_open = pts[:, 0] < vx
        in_x_closed = pts[:, 0] <= vx
        for vy in ys:
            vol = vx * vy
            open_count = np.count_nonzero(in_x_open & (pts[:, 1] < vy))
            closed_count = np.count_nonzero(in_x_closed & (pts[:, 1] <= vy))
            best = max(best, vol - open_count / n, closed_count / n - vol)
    return float(min(max(best, 0.0), 1.0))


def estimate_coherence(
    spec: BasisSpec,
    strategy: str,
    n_probe: int,
    seed: int,
    chunk: int = 20_000,
    **params,
) -> CoherenceEstimate:
    """Empirical coherence: max weighted squared row norm over probe draws."""
    if n_probe < 1:
        raise ValueError("probe count must be positive")
    mu = 0.0
    remaining = n_probe
    part = 0
    while remaining > 0:
        m = min(chunk, remaining)
        ss = draw_samples(spec, strategy, m, seed + part, **params)
        psi = eval_basis_matrix(spec, ss.points)
        row = np.sum(psi * psi, axis=1) * ss.weights**2
        mu = max(mu, float(row.max()))
        remaining -= m
        part += 1
    return CoherenceEstimate(mu_hat=mu, n_probe=n_probe)


def draw_samples(spec: BasisSpec, strategy: str, n: int, seed: int, **params) -> SampleSet:
    """Dispatch a strategy name to its generator."""
    if strategy == STANDARD:
        return sample_standard(spec, n, seed)
    if strategy == LHS:
        return sample_lhs(spec, n, seed)
    if strategy in (ASYMPTOTIC_CHEBYSHEV, ASYMPTOTIC_BALL, "asymptotic"):
        return sample_asymptotic(spec, n, seed)
    if strategy == COHERENCE_OPTIMAL:
        return sample_coherence_optimal(spec, n, seed, **params)
    if strategy == RAND_QUADRATURE:
        level = params.pop("level", spec.p + 1)
        return sample_randomized_quadrature(spec, n, level, seed)
    if strategy == HALTON_QMC:
        return sample_qmc(spec, n, **params)
    raise UnsupportedStrategyError(f"unknown strategy {strategy!r}")
