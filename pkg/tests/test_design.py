import io
import math
from itertools import combinations

import numpy as np
import pytest

from pcls import design as dg
from pcls import orthopoly as op
from pcls import sampling as sp


def spd(rng, n, shift=1.0):
    b = rng.standard_normal((n, n))
    return b @ b.T + shift * np.eye(n)


# ---------------------------------------------------------------------------
# Criterion values


def test_identity_information_matrix_values():
    m = np.eye(6)
    assert dg.criterion_of_information_matrix("D", m) == pytest.approx(1.0)
    assert dg.criterion_of_information_matrix("A", m) == pytest.approx(6.0)
    assert dg.criterion_of_information_matrix("E", m) == pytest.approx(1.0)
    assert dg.criterion_of_information_matrix("K", m) == pytest.approx(1.0)


def test_diagonal_closed_form():
    m = np.diag([2.0, 0.5])
    assert dg.criterion_of_information_matrix("D", m) == pytest.approx(1.0)
    assert dg.criterion_of_information_matrix("A", m) == pytest.approx(2.5)
    assert dg.criterion_of_information_matrix("E", m) == pytest.approx(2.0)
    assert dg.criterion_of_information_matrix("K", m) == pytest.approx(4.0)


def test_prediction_criterion_aliases_to_average_variance():
    rng = np.random.default_rng(0)
    psi = rng.standard_normal((12, 4))
    assert dg.criterion_value("I", psi) == dg.criterion_value("A", psi)


def test_rank_deficient_rows_give_sentinel():
    psi = np.ones((3, 3))
    for crit in dg.CRITERIA:
        assert dg.criterion_value(crit, psi) == math.inf


def test_non_finite_input_raises():
    psi = np.ones((4, 2))
    psi[0, 0] = np.nan
    with pytest.raises(ValueError):
        dg.criterion_value("D", psi)


def test_criterion_scale_behavior():
    rng = np.random.default_rng(4)
    psi = rng.standard_normal((20, 5))
    gamma = 3.7
    for crit, power in (("D", -2.0), ("A", -2.0), ("E", -2.0), ("K", 0.0)):
        base = dg.criterion_value(crit, psi)
        scaled = dg.criterion_value(crit, gamma * psi)
        assert scaled == pytest.approx(base * gamma**power, rel=1e-9)


def test_greedy_row_choice_invariant_to_scaling():
    rng = np.random.default_rng(40)
    psi = rng.standard_normal((30, 4))
    base = dg.greedy_design(psi, 10, "D")
    scaled = dg.greedy_design(2.5 * psi, 10, "D")
    assert base.selected_rows == scaled.selected_rows


def test_weights_fold_into_rows():
    rng = np.random.default_rng(5)
    psi = rng.standard_normal((15, 3))
    w = rng.uniform(0.5, 2.0, 15)
    direct = dg.criterion_value("A", psi * w[:, None])
    assert dg.criterion_value("A", psi, weights=w) == pytest.approx(direct)


# ---------------------------------------------------------------------------
# Rank-one update formulas


def test_det_ratio_unit_examples():
    a_inv = np.eye(4)
    e1 = np.eye(4)[0]
    assert dg.det_update_ratio(a_inv, e1, +1) == pytest.approx(2.0)
    assert dg.det_update_ratio(a_inv, e1, -1) == pytest.approx(0.0)


def test_det_ratio_matches_direct_determinants():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = spd(rng, 5)
        a_inv = np.linalg.inv(a)
        v = rng.standard_normal(5)
        for sign in (+1, -1):
            ratio = dg.det_update_ratio(a_inv, v, sign)
            direct = np.linalg.det(a + sign * np.outer(v, v)) / np.linalg.det(a)
            assert ratio == pytest.approx(direct, rel=1e-10)


def test_trace_update_unit_example():
    a_inv = np.eye(5)
    e1 = np.eye(5)[0]
    tr, new_inv = dg.trace_update(a_inv, e1, +1)
    assert tr == pytest.approx(5.0 - 0.5)
    assert new_inv @ (np.eye(5) + np.outer(e1, e1)) == pytest.approx(np.eye(5))


def test_trace_update_zero_vector_is_identity_operation():
    rng = np.random.default_rng(7)
    a = spd(rng, 4)
    a_inv = np.linalg.inv(a)
    tr, new_inv = dg.trace_update(a_inv, np.zeros(4), +1)
    assert tr == pytest.approx(np.trace(a_inv))
    assert new_inv == pytest.approx(a_inv)


def test_trace_update_matches_direct_inverse():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = spd(rng, 6)
        a_inv = np.linalg.inv(a)
        v = rng.standard_normal(6)
        for sign in (+1, -1):
            tr, new_inv = dg.trace_update(a_inv, v, sign)
            target = a + sign * np.outer(v, v)
            assert new_inv @ target == pytest.approx(np.eye(6), abs=1e-8)
            assert tr == pytest.approx(np.trace(np.linalg.inv(target)), rel=1e-8)


def test_trace_update_singular_denominator_raises():
    a_inv = np.eye(3)
    with pytest.raises(dg.SingularUpdateError):
        dg.trace_update(a_inv, np.eye(3)[0], -1)


# ---------------------------------------------------------------------------
# Greedy construction


def test_selecting_every_candidate_returns_all_rows():
    rng = np.random.default_rng(9)
    psi = rng.standard_normal((6, 3))
    state = dg.greedy_design(psi, 6, "D")
    assert sorted(state.selected_rows) == list(range(6))
    assert state.active_columns == 3


def test_greedy_matches_exhaustive_per_step_oracle():
    rng = np.random.default_rng(10)
    psi = rng.standard_normal((5, 2))
    state = dg.greedy_design(psi, 2, "D")

    # oracle: at each step, evaluate the criterion of every augmented
    # design directly and keep the best (lowest index on ties).
    selected = []
    for step in (1, 2):
        cols = min(step, 2)
        best, best_phi = None, math.inf
        for i in range(5):
            if i in selected:
                continue
            phi = dg.criterion_value("D", psi[selected + [i]][:, :cols])
            if phi < best_phi:
                best, best_phi = i, phi
        selected.append(best)
    assert state.selected_rows == selected


@pytest.mark.parametrize("crit", ["D", "A"])
def test_update_path_equals_naive_path(crit):
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = int(rng.integers(2, 8))
        n_c = int(rng.integers(p + 2, 40))
        n = int(rng.integers(p, min(n_c, p + 8) + 1))
        psi = rng.standard_normal((n_c, p))
        fast = dg.greedy_design(psi, n, crit, use_updates=True)
        naive = dg.greedy_design(psi, n, crit, use_updates=False)
        assert fast.selected_rows == naive.selected_rows
        assert fast.phi == pytest.approx(naive.phi, rel=1e-8)


def test_update_path_final_value_matches_scratch_recomputation():
    rng = np.random.default_rng(12)
    psi = rng.standard_normal((50, 6))
    state = dg.greedy_design(psi, 18, "D")
    scratch = dg.criterion_value("D", psi[state.selected_rows])
    assert state.phi == pytest.approx(scratch, rel=1e-8)


def test_inverse_cache_matches_direct_inverse():
    rng = np.random.default_rng(13)
    psi = rng.standard_normal((40, 5))
    state = dg.greedy_design(psi, 12, "A")
    sub = psi[state.selected_rows]
    direct = np.linalg.inv(sub.T @ sub / 12)
    assert np.abs(state.inverse_cache - direct).max() <= 1e-8 * np.abs(direct).max()


def test_greedy_determinant_never_decreases_in_augmentation():
    rng = np.random.default_rng(14)
    psi = rng.standard_normal((60, 4))
    state = dg.greedy_design(psi, 20, "D")
    dets = []
    for k in range(4, 21):
        sub = psi[state.selected_rows[:k]]
        dets.append(np.linalg.det(sub.T @ sub))
    assert all(b >= a * (1 - 1e-12) for a, b in zip(dets, dets[1:]))


def test_greedy_weighted_selection_uses_weighted_rows():
    rng = np.random.default_rng(15)
    psi = rng.standard_normal((30, 3))
    w = rng.uniform(0.2, 3.0, 30)
    direct = dg.greedy_design(psi * w[:, None], 8, "D")
    weighted = dg.greedy_design(psi, 8, "D", weights=w)
    assert direct.selected_rows == weighted.selected_rows


def test_greedy_tie_break_and_rerun_determinism():
    rng = np.random.default_rng(16)
    psi = rng.standard_normal((25, 4))
    a = dg.greedy_design(psi, 10, "D")
    b = dg.greedy_design(psi, 10, "D")
    assert a.selected_rows == b.selected_rows


def test_greedy_expensive_eigen_criterion_small_instance():
    rng = np.random.default_rng(17)
    psi = rng.standard_normal((20, 3))
    state = dg.greedy_design(psi, 6, "E")
    assert len(state.selected_rows) == 6
    assert math.isfinite(state.phi)
    naive = dg.greedy_design(psi, 6, "E", use_updates=False)
    assert state.selected_rows == naive.selected_rows


def test_greedy_duplicate_candidates_fail_with_step_number():
    psi = np.ones((6, 3))
    with pytest.raises(dg.ConstructionFailureError, match="step 2"):
        dg.greedy_design(psi, 3, "D")


def test_greedy_size_validation():
    rng = np.random.default_rng(18)
    psi = rng.standard_normal((6, 3))
    with pytest.raises(ValueError):
        dg.greedy_design(psi, 2, "D")  # fewer rows than columns
    with pytest.raises(ValueError):
        dg.greedy_design(psi, 7, "D")  # more rows than candidates


# ---------------------------------------------------------------------------
# Exchange refinement


def _best_subset(psi, k):
    return max(
        combinations(range(psi.shape[0]), k),
        key=lambda rows: np.linalg.det(psi[list(rows)].T @ psi[list(rows)]),
    )


def test_exchange_gain_matches_determinant_ratio():
    rng = np.random.default_rng(19)
    psi = rng.standard_normal((12, 3))
    rows = list(range(3, 9))
    gram = psi[rows].T @ psi[rows]
    m_inv = np.linalg.inv(gram)
    for i_pos, j in [(0, 0), (2, 11), (5, 1)]:
        vi, vj = psi[rows[i_pos]], psi[j]
        d_i = vi @ m_inv @ vi
        d_j = vj @ m_inv @ vj
        d_ij = vi @ m_inv @ vj
        delta = d_j - (d_i * d_j - d_ij**2) - d_i
        swapped = list(rows)
        swapped[i_pos] = j
        ratio = np.linalg.det(psi[swapped].T @ psi[swapped]) / np.linalg.det(gram)
        assert ratio == pytest.approx(1.0 + delta, rel=1e-8)


def test_exchange_leaves_globally_optimal_design_alone():
    rng = np.random.default_rng(20)
    psi = rng.standard_normal((5, 2))
    best = list(_best_subset(psi, 3))
    state = dg.DesignState(best, 2, "D", dg.criterion_value("D", psi[best]))
    refined = dg.fedorov_exchange(state, psi)
    assert refined.exchanges == 0
    assert refined.selected_rows == best


def test_exchange_improves_poor_start_monotonically():
    rng = np.random.default_rng(21)
    psi = rng.standard_normal((10, 3))
    worst = min(
        combinations(range(10), 4),
        key=lambda rows: abs(np.linalg.det(psi[list(rows)].T @ psi[list(rows)])),
    )
    state = dg.DesignState(list(worst), 3, "D", math.inf)
    refined = dg.fedorov_exchange(state, psi)
    det0 = np.linalg.det(psi[list(worst)].T @ psi[list(worst)])
    det1 = np.linalg.det(psi[refined.selected_rows].T @ psi[refined.selected_rows])
    assert det1 >= det0
    assert refined.exchanges >= 1


def test_exchange_determinant_monotone_across_iterations():
    rng = np.random.default_rng(33)
    psi = rng.standard_normal((30, 4))
    start = list(range(4, 10))
    state = dg.DesignState(start, 4, "D", dg.criterion_value("D", psi[start]))
    dets = [np.linalg.det(psi[start].T @ psi[start])]
    rows = list(start)
    # replay single exchanges to observe the whole determinant sequence
    for _ in range(50):
        step = dg.fedorov_exchange(
            dg.DesignState(rows, 4, "D", 0.0), psi, max_iter=1
        )
        if step.exchanges == 0:
            break
        rows = step.selected_rows
        dets.append(np.linalg.det(psi[rows].T @ psi[rows]))
    assert len(dets) >= 3
    assert all(b >= a * (1 - 1e-12) for a, b in zip(dets, dets[1:]))
    # the replayed path lands where the one-shot refinement lands
    full = dg.fedorov_exchange(state, psi)
    assert sorted(full.selected_rows) == sorted(rows)


def test_exchange_infinite_threshold_is_a_noop():
    rng = np.random.default_rng(22)
    psi = rng.standard_normal((8, 2))
    rows = [0, 1, 2]
    state = dg.DesignState(rows, 2, "D", dg.criterion_value("D", psi[rows]))
    refined = dg.fedorov_exchange(state, psi, tol=math.inf)
    assert refined.selected_rows == rows
    assert refined.exchanges == 0


def test_exchange_requires_determinant_criterion():
    state = dg.DesignState([0, 1], 2, "A", 1.0)
    with pytest.raises(ValueError):
        dg.fedorov_exchange(state, np.eye(2))


# ---------------------------------------------------------------------------
# Hybrid scheme


def test_hybrid_selects_subset_with_matching_weights():
    spec = op.legendre_basis(2, 3)
    chosen, state = dg.hybrid_design(spec, 15, 60, "D", seed=5)
    assert chosen.n == 15
    assert len(state.selected_rows) == 15
    # every selected point satisfies the weighted row-norm identity
    psi = op.eval_basis_matrix(spec, chosen.points)
    rows = np.sum(psi**2, axis=1) * chosen.weights**2
    assert np.abs(rows - spec.n_terms).max() < 1e-8


def test_hybrid_beats_unselected_prefix():
    spec = op.legendre_basis(2, 4)
    seed = 9
    chosen, state = dg.hybrid_design(spec, 20, 100, "D", seed=seed)
    candidates = sp.sample_coherence_optimal(spec, 100, seed)
    psi_c = op.eval_basis_matrix(spec, candidates.points)
    prefix = dg.criterion_value("D", psi_c[:20], weights=candidates.weights[:20])
    assert state.phi <= prefix + 1e-12


def test_hybrid_candidate_pool_validation():
    spec = op.legendre_basis(1, 2)
    with pytest.raises(ValueError):
        dg.hybrid_design(spec, 10, 5, "D", seed=0)


def test_design_csv_export():
    spec = op.legendre_basis(2, 2)
    chosen, state = dg.hybrid_design(spec, 8, 40, "D", seed=3)
    candidates = sp.sample_coherence_optimal(spec, 40, 3)
    buf = io.StringIO()
    state.write_csv(buf, candidates.points, candidates.weights)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# criterion = D"
    assert lines[2] == "xi_1,xi_2,w,candidate"
    assert len(lines) == 3 + 8


def test_candidate_pool_rule():
    assert dg.default_candidate_count(220) == math.floor(1.5 * 220 * math.log(220))
