"""Orthonormal polynomial families, total-degree tensor bases, Gauss rules.

All families are normalized against their *probability* density, so the
zeroth polynomial is identically 1, quadrature weights sum to 1, and
E[psi_i psi_j] = delta_ij under the family density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.linalg import eigh_tridiagonal

MAX_UNIVARIATE_ORDER = 64
MAX_BASIS_TERMS = 50_000_000

LEGENDRE = "legendre"
HERMITE = "hermite"
JACOBI = "jacobi"
LAGUERRE = "laguerre"


class CardinalityError(ValueError):
    """Total-degree basis would exceed the configured term budget."""


@dataclass(frozen=True)
class PolyFamily:
    """One univariate orthonormal family.

    kind is one of "legendre", "hermite", "jacobi", "laguerre".  For the
    Jacobi family the density is proportional to (1-x)^a (1+x)^b on
    [-1, 1]; that matches a Beta(b+1, a+1) variable mapped affinely from
    [0, 1].  For Laguerre the density is the Gamma(a+1) pdf on (0, inf).
    """

    kind: str
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in (LEGENDRE, HERMITE, JACOBI, LAGUERRE):
            raise ValueError(f"unknown polynomial family {self.kind!r}")
        if self.kind in (JACOBI, LAGUERRE) and self.a <= -1.0:
            raise ValueError("exponent a must exceed -1")
        if self.kind == JACOBI and self.b <= -1.0:
            raise ValueError("exponent b must exceed -1")

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == HERMITE:
            return (-math.inf, math.inf)
        if self.kind == LAGUERRE:
            return (0.0, math.inf)
        return (-1.0, 1.0)

    def _dist(self):
        if self.kind == LEGENDRE:
            return stats.uniform(loc=-1.0, scale=2.0)
        if self.kind == HERMITE:
            return stats.norm()
        if self.kind == LAGUERRE:
            return stats.gamma(self.a + 1.0)
        # Beta on [0, 1]; callers map between [0, 1] and [-1, 1].
        return stats.beta(self.b + 1.0, self.a + 1.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == JACOBI:
            return self._dist().pdf((x + 1.0) / 2.0) / 2.0
        return self._dist().pdf(x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == JACOBI:
            return self._dist().cdf((x + 1.0) / 2.0)
        return self._dist().cdf(x)

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        if self.kind == JACOBI:
            return 2.0 * self._dist().ppf(q) - 1.0
        return self._dist().ppf(q)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw from the orthogonality density."""
        if self.kind == LEGENDRE:
            return rng.uniform(-1.0, 1.0, size)
        if self.kind == HERMITE:
            return rng.standard_normal(size)
        if self.kind == LAGUERRE:
            return rng.gamma(self.a + 1.0, 1.0, size)
        return 2.0 * rng.beta(self.b + 1.0, self.a + 1.0, size) - 1.0


def legendre() -> PolyFamily:
    return PolyFamily(LEGENDRE)


def hermite() -> PolyFamily:
    return PolyFamily(HERMITE)


def jacobi(a: float, b: float) -> PolyFamily:
    return PolyFamily(JACOBI, a=a, b=b)


def laguerre(a: float) -> PolyFamily:
    return PolyFamily(LAGUERRE, a=a)


def recurrence_coefficients(family: PolyFamily, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Monic three-term recurrence coefficients (alpha_0..n-1, beta_0..n-1).

    beta_0 = 1 by the probability normalization of the density.
    """
    alpha = np.zeros(n)
    beta = np.zeros(n)
    beta[0] = 1.0
    k = np.arange(1, n, dtype=float)
    if family.kind == LEGENDRE:
        beta[1:] = k * k / (4.0 * k * k - 1.0)
    elif family.kind == HERMITE:
        beta[1:] = k
    elif family.kind == LAGUERRE:
        a = family.a
        alpha[:] = 2.0 * np.arange(n, dtype=float) + a + 1.0
        beta[1:] = k * (k + a)
    else:
        a, b = family.a, family.b
        apb = a + b
        alpha[0] = (b - a) / (apb + 2.0)
        if n > 1:
            alpha[1:] = (b * b - a * a) / ((2.0 * k + apb) * (2.0 * k + apb + 2.0))
            beta[1] = 4.0 * (a + 1.0) * (b + 1.0) / ((apb + 2.0) ** 2 * (apb + 3.0))
        if n > 2:
            kk = k[1:]
            beta[2:] = (
                4.0 * kk * (kk + a) * (kk + b) * (kk + apb)
                / ((2.0 * kk + apb) ** 2 * (2.0 * kk + apb + 1.0) * (2.0 * kk + apb - 1.0))
            )
    return alpha, beta


def eval_univariate_table(family: PolyFamily, max_order: int, x) -> np.ndarray:
    """Orthonormal polynomial values for orders 0..max_order at points x.

    Returns an array of shape (len(x), max_order + 1).  The recurrence is
    renormalized at every step, so high orders stay bounded in magnitude
    wherever the polynomials themselves are.
    """
    if max_order > MAX_UNIVARIATE_ORDER:
        raise ValueError(f"order {max_order} exceeds supported maximum {MAX_UNIVARIATE_ORDER}")
    return _eval_table(family, max_order, x)


def _eval_table(family: PolyFamily, max_order: int, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, max_order + 1))
    out[:, 0] = 1.0
    if max_order == 0:
        return out
    alpha, beta = recurrence_coefficients(family, max_order + 1)
    sqrt_beta = np.sqrt(beta)
    out[:, 1] = (x - alpha[0]) / sqrt_beta[1]
    for j in range(1, max_order):
        out[:, j + 1] = ((x - alpha[j]) * out[:, j] - sqrt_beta[j] * out[:, j - 1]) / sqrt_beta[j + 1]
    return out


def eval_univariate(family: PolyFamily, order: int, x) -> float | np.ndarray:
    """Value of the orthonormal polynomial of the given order at x."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = eval_univariate_table(family, order, xs)[:, order]
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(vals[0])
    return vals


def basis_cardinality(d: int, p: int) -> int:
    """Number of multi-indices of dimension d with total degree at most p."""
    return math.comb(p + d, d)


def multi_index_set(d: int, p: int, max_terms: int = MAX_BASIS_TERMS) -> np.ndarray:
    """All multi-indices with total degree <= p, graded-lexicographic.

    The ordering is by total degree first, then lexicographic ascending,
    so the all-zeros index always comes first.  Raises CardinalityError
    when the index count exceeds max_terms.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if p < 0:
        raise ValueError("total order must be nonnegative")
    total = basis_cardinality(d, p)
    if total > max_terms:
        raise CardinalityError(
            f"basis with d={d}, p={p} has {total} terms, exceeding the limit {max_terms}"
        )
    out = np.zeros((total, d), dtype=np.int64)
    row = 1
    for degree in range(1, p + 1):
        for comp in _compositions(degree, d):
            out[row] = comp
            row += 1
    return out


def _compositions(degree: int, d: int):
    # Lexicographically ascending compositions of `degree` into d parts.
    if d == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _compositions(degree - first, d - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Total-degree tensor-product basis over per-dimension families."""

    families: tuple[PolyFamily, ...]
    p: int
    indices: np.ndarray

    @classmethod
    def total_degree(cls, families, p: int, max_terms: int = MAX_BASIS_TERMS) -> "BasisSpec":
        families = tuple(families)
        if not families:
            raise ValueError("at least one family is required")
        idx = multi_index_set(len(families), p, max_terms=max_terms)
        return cls(families=families, p=p, indices=idx)

    @property
    def d(self) -> int:
        return len(self.families)

    @property
    def n_terms(self) -> int:
        return self.indices.shape[0]

    def sample_input(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n independent draws from the joint orthogonality density."""
        cols = [fam.sample(rng, n) for fam in self.families]
        return np.column_stack(cols)


def legendre_basis(d: int, p: int) -> BasisSpec:
    return BasisSpec.total_degree([legendre()] * d, p)


def hermite_basis(d: int, p: int) -> BasisSpec:
    return BasisSpec.total_degree([hermite()] * d, p)


def eval_basis_matrix(spec: BasisSpec, points) -> np.ndarray:
    """Measurement matrix of basis values: shape (n_points, n_terms)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[1] != spec.d:
        raise ValueError(f"points have dimension {pts.shape[1]}, basis expects {spec.d}")
    out = np.ones((pts.shape[0], spec.n_terms))
    for k, fam in enumerate(spec.families):
        table = eval_univariate_table(fam, spec.p, pts[:, k])
        out *= table[:, spec.indices[:, k]]
    return out


def eval_basis_row(spec: BasisSpec, xi) -> np.ndarray:
    """Basis values at a single point, as a length-n_terms vector."""
    return eval_basis_matrix(spec, np.asarray(xi, dtype=float).reshape(1, -1))[0]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for a family density; weights are positive and sum to 1."""

    nodes: np.ndarray
    weights: np.ndarray
    family: PolyFamily
    n: int


def gauss_rule(family: PolyFamily, n: int) -> QuadratureRule:
    """Gauss nodes and weights for the family density via Golub-Welsch."""
    if n < 1:
        raise ValueError("node count must be positive")
    alpha, beta = recurrence_coefficients(family, n)
    try:
        nodes, vecs = eigh_tridiagonal(alpha, np.sqrt(beta[1:]))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(f"quadrature eigensolve failed for {family}") from exc
    # Christoffel weights 1/sum_j psi_j(x_k)^2 keep relative accuracy at
    # extreme nodes where eigenvector first components underflow.
    table = _eval_table(family, n - 1, nodes)
    christoffel = (table * table).sum(axis=1)
    weights = vecs[0, :] ** 2
    good = np.isfinite(christoffel) & (christoffel > 0.0)
    weights[good] = 1.0 / christoffel[good]
    weights /= weights.sum()
    return QuadratureRule(nodes=nodes, weights=weights, family=family, n=n)
