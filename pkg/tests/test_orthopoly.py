import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcls import orthopoly as op


# ---------------------------------------------------------------------------
# Gram-Schmidt oracle: orthonormalize monomials under an externally supplied
# quadrature (numpy/scipy rules), fully independent of the recurrence path.


def _oracle_rule(family, n=200):
    if family.kind == op.LEGENDRE:
        x, w = np.polynomial.legendre.leggauss(n)
    elif family.kind == op.HERMITE:
        x, w = np.polynomial.hermite_e.hermegauss(n)
    elif family.kind == op.JACOBI:
        from scipy.special import roots_jacobi

        x, w = roots_jacobi(n, family.a, family.b)
    else:
        from scipy.special import roots_genlaguerre

        x, w = roots_genlaguerre(n, family.a)
    return x, w / w.sum()


def _gram_schmidt_coeffs(family, max_order):
    x, w = _oracle_rule(family)
    V = np.vander(x, max_order + 1, increasing=True)
    coeffs = np.eye(max_order + 1)
    for k in range(max_order + 1):
        vk = V @ coeffs[k]
        for j in range(k):
            vj = V @ coeffs[j]
            coeffs[k] -= np.sum(w * vk * vj) * coeffs[j]
            vk = V @ coeffs[k]
        norm = math.sqrt(np.sum(w * vk * vk))
        coeffs[k] /= norm
    return coeffs


def _oracle_eval(family, order, xi):
    coeffs = _gram_schmidt_coeffs(family, order)
    powers = np.array([xi**j for j in range(order + 1)])
    return float(coeffs[order] @ powers)


# ---------------------------------------------------------------------------
# Multi-index sets


def test_cardinality_examples():
    assert op.multi_index_set(3, 9).shape[0] == 220
    assert op.multi_index_set(4, 4).shape[0] == 70
    assert op.multi_index_set(15, 2).shape[0] == 136


def test_cardinality_matches_factorial_formula():
    budget = 200_000
    for d in range(1, 21):
        for p in range(0, 21):
            expected = op.basis_cardinality(d, p)
            if expected > budget:
                continue
            assert op.multi_index_set(d, p).shape[0] == expected


def test_term_budget_guard():
    with pytest.raises(op.CardinalityError):
        op.multi_index_set(20, 20)
    with pytest.raises(op.CardinalityError):
        op.multi_index_set(3, 9, max_terms=100)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 5), p=st.integers(0, 6))
def test_multi_index_properties(d, p):
    idx = op.multi_index_set(d, p)
    assert tuple(idx[0]) == (0,) * d
    sums = idx.sum(axis=1)
    assert sums.max() <= p
    assert np.all(np.diff(sums) >= 0)  # graded
    seen = {tuple(row) for row in idx}
    assert len(seen) == idx.shape[0]
    # lexicographic within each degree block
    for g in range(p + 1):
        block = [tuple(row) for row in idx[sums == g]]
        assert block == sorted(block)


def test_degenerate_inputs():
    assert op.multi_index_set(1, 0).tolist() == [[0]]
    with pytest.raises(ValueError):
        op.multi_index_set(0, 3)
    with pytest.raises(ValueError):
        op.multi_index_set(3, -1)


# ---------------------------------------------------------------------------
# Univariate evaluation


ALL_FAMILIES = [op.legendre(), op.hermite(), op.jacobi(30.8, 20.2), op.laguerre(2.5)]


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.kind)
def test_order_zero_is_one(family):
    for xi in (-0.3, 0.0, 1.7):
        assert op.eval_univariate(family, 0, xi) == 1.0


def test_legendre_first_order_matches_oracle():
    assert op.eval_univariate(op.legendre(), 1, 0.5) == pytest.approx(0.86602540, abs=1e-8)
    assert _oracle_eval(op.legendre(), 1, 0.5) == pytest.approx(0.86602540, abs=1e-8)


def test_hermite_second_order_matches_oracle():
    assert op.eval_univariate(op.hermite(), 2, 0.0) == pytest.approx(-0.70710678, abs=1e-8)
    assert _oracle_eval(op.hermite(), 2, 0.0) == pytest.approx(-0.70710678, abs=1e-8)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.kind)
def test_recurrence_matches_gram_schmidt_oracle(family):
    lo, hi = family.support
    pts = np.linspace(max(lo, -1.0), min(hi, 3.0), 7)
    for order in range(6):
        for xi in pts:
            ours = op.eval_univariate(family, order, float(xi))
            oracle = _oracle_eval(family, order, float(xi))
            assert ours == pytest.approx(oracle, rel=1e-8, abs=1e-8)


def test_evaluation_outside_density_support_is_finite():
    assert np.isfinite(op.eval_univariate(op.laguerre(0.5), 5, -2.0))
    assert np.isfinite(op.eval_univariate(op.legendre(), 8, 3.5))


def test_order_cap_enforced():
    with pytest.raises(ValueError):
        op.eval_univariate(op.legendre(), op.MAX_UNIVARIATE_ORDER + 1, 0.0)
    assert np.isfinite(op.eval_univariate(op.legendre(), 30, 0.3))


def test_family_parameter_validation():
    with pytest.raises(ValueError):
        op.jacobi(-1.0, 0.0)
    with pytest.raises(ValueError):
        op.jacobi(0.0, -1.5)
    with pytest.raises(ValueError):
        op.laguerre(-1.0)
    with pytest.raises(ValueError):
        op.PolyFamily("chebyshev")


# ---------------------------------------------------------------------------
# Basis rows


def test_basis_row_order_zero():
    spec = op.legendre_basis(3, 0)
    row = op.eval_basis_row(spec, [0.2, -0.4, 0.9])
    assert row.tolist() == [1.0]


def test_basis_row_frozen_values():
    spec = op.legendre_basis(1, 2)
    row = op.eval_basis_row(spec, [0.0])
    assert row == pytest.approx([1.0, 0.0, -1.11803399], abs=1e-8)

    spec2 = op.legendre_basis(2, 1)
    row2 = op.eval_basis_row(spec2, [1.0, 1.0])
    assert row2 == pytest.approx([1.0, 1.7320508, 1.7320508], abs=1e-7)


def test_basis_row_first_entry_always_one():
    spec = op.BasisSpec.total_degree([op.hermite(), op.legendre(), op.laguerre(1.0)], 3)
    rng = np.random.default_rng(0)
    pts = np.column_stack([rng.standard_normal(20), rng.uniform(-1, 1, 20), rng.gamma(2.0, 1.0, 20)])
    mat = op.eval_basis_matrix(spec, pts)
    assert np.allclose(mat[:, 0], 1.0)


def test_tensor_product_consistency():
    spec = op.BasisSpec.total_degree([op.legendre(), op.hermite(), op.jacobi(2.0, 1.0)], 4)
    rng = np.random.default_rng(3)
    pts = rng.uniform(-0.9, 0.9, (10, 3))
    mat = op.eval_basis_matrix(spec, pts)
    for i in range(10):
        for j, midx in enumerate(spec.indices):
            prod = 1.0
            for k, fam in enumerate(spec.families):
                prod *= op.eval_univariate(fam, int(midx[k]), pts[i, k])
            assert mat[i, j] == pytest.approx(prod, rel=1e-12, abs=1e-12)


def test_basis_dimension_mismatch():
    spec = op.legendre_basis(2, 1)
    with pytest.raises(ValueError):
        op.eval_basis_row(spec, [0.1, 0.2, 0.3])


# ---------------------------------------------------------------------------
# Gauss rules


def test_gauss_legendre_single_node():
    rule = op.gauss_rule(op.legendre(), 1)
    assert rule.nodes == pytest.approx([0.0], abs=1e-14)
    assert rule.weights == pytest.approx([1.0], abs=1e-14)


def test_gauss_hermite_two_nodes():
    rule = op.gauss_rule(op.hermite(), 2)
    assert np.sort(rule.nodes) == pytest.approx([-1.0, 1.0], abs=1e-12)
    assert rule.weights == pytest.approx([0.5, 0.5], abs=1e-12)


def test_gauss_legendre_variance():
    rule = op.gauss_rule(op.legendre(), 50)
    assert np.sum(rule.weights * rule.nodes**2) == pytest.approx(1.0 / 3.0, abs=1e-12)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.kind)
def test_weights_positive_and_sum_to_one(family):
    rule = op.gauss_rule(family, 24)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.kind)
def test_quadrature_orthonormality(family):
    rule = op.gauss_rule(family, 64)
    table = op.eval_univariate_table(family, 15, rule.nodes)
    gram = (table * rule.weights[:, None]).T @ table
    assert np.abs(gram - np.eye(16)).max() < 1e-10


def test_gauss_rule_rejects_nonpositive_count():
    with pytest.raises(ValueError):
        op.gauss_rule(op.legendre(), 0)
