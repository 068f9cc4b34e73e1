import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wiretap.diag_lp import allocation_to_beamformer, solve_diagonal
from wiretap.linalg import quad_form
from wiretap.model import ConstraintThresholds, ModelError, RatePair, WiretapProblem, thresholds_gaussian


def thresholds(a, b=0.0, per_link=0.9):
    return ConstraintThresholds(a=a, b=b, per_link_prob=per_link,
                                user_power_target=a, eave_power_target=b)


def diag_problem(h_diags, z_diags=(), p_t=10.0):
    n = len(h_diags[0])
    return WiretapProblem(
        H=tuple(np.diag(np.asarray(d, dtype=float)).astype(complex) for d in h_diags),
        Z=tuple(np.diag(np.asarray(d, dtype=float)).astype(complex) for d in z_diags),
        N0=1.0,
        epsilon=0.1,
        P_T=p_t,
    )


def lp_vertex_oracle(h_diags, z_diags, a, b, p_t):
    """Brute force over all basic solutions of the small LP: optimum lies at a
    vertex where n of the inequalities (including P_m >= 0) are active."""
    h = np.asarray(h_diags, dtype=float)
    n = h.shape[1]
    z = np.asarray(z_diags, dtype=float).reshape(len(z_diags), n) if z_diags else np.zeros((0, n))
    rows = [(np.ones(n), p_t)]
    rows += [(-h[k], -a) for k in range(h.shape[0])]
    rows += [(z[j], b) for j in range(z.shape[0])]
    rows += [(-(np.eye(n)[m]), 0.0) for m in range(n)]
    best = None
    mat = np.array([r[0] for r in rows])
    rhs = np.array([r[1] for r in rows])
    for combo in itertools.combinations(range(len(rows)), n):
        sub = mat[list(combo)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, rhs[list(combo)])
        if np.all(x >= -1e-9) and np.all(mat @ x <= rhs + 1e-9):
            total = float(np.sum(x))
            if best is None or total < best:
                best = total
    return best


class TestSolveDiagonal:
    def test_single_antenna_binding_floor(self):
        p = diag_problem([[1.0]], p_t=10.0)
        alloc = solve_diagonal(p, thresholds(a=5.0))
        assert alloc is not None
        assert alloc.total == pytest.approx(5.0, abs=1e-8)
        assert alloc.P[0] == pytest.approx(5.0, abs=1e-8)

    def test_two_antennas_best_gain_wins(self):
        p = diag_problem([[2.0, 1.0]], p_t=10.0)
        alloc = solve_diagonal(p, thresholds(a=6.0))
        assert alloc is not None
        assert alloc.total == pytest.approx(3.0, abs=1e-8)
        oracle = lp_vertex_oracle([[2.0, 1.0]], [], 6.0, 0.0, 10.0)
        assert alloc.total == pytest.approx(oracle, abs=1e-8)

    def test_infeasible_when_floor_exceeds_budget(self):
        p = diag_problem([[1.0]], p_t=4.0)
        assert solve_diagonal(p, thresholds(a=5.0)) is None

    def test_rejects_non_diagonal(self):
        h = np.array([[1.0, 0.5], [0.5, 1.0]]).astype(complex)
        p = WiretapProblem(H=(h,), Z=(), N0=1.0, epsilon=0.1, P_T=10.0)
        with pytest.raises(ModelError):
            solve_diagonal(p, thresholds(a=1.0))

    def test_matches_vertex_oracle_with_eavesdroppers(self):
        h = [[2.0, 1.0, 0.5], [0.5, 1.5, 1.0]]
        z = [[0.05, 0.01, 0.02]]
        p = diag_problem(h, z, p_t=20.0)
        t = thresholds(a=6.0, b=0.2)
        alloc = solve_diagonal(p, t)
        oracle = lp_vertex_oracle(h, z, 6.0, 0.2, 20.0)
        assert alloc is not None and oracle is not None
        assert alloc.total == pytest.approx(oracle, abs=1e-8)

    def test_infeasible_matches_vertex_oracle(self):
        h = [[1.0, 1.0]]
        z = [[1.0, 1.0]]  # eavesdropper sees exactly what the user sees
        p = diag_problem(h, z, p_t=10.0)
        t = thresholds(a=5.0, b=1.0)
        assert solve_diagonal(p, t) is None
        assert lp_vertex_oracle(h, z, 5.0, 1.0, 10.0) is None


class TestAllocationToBeamformer:
    def test_square_roots(self):
        alloc_p = np.array([4.0, 0.0, 1.0])
        from wiretap.diag_lp import PowerAllocation

        w = allocation_to_beamformer(PowerAllocation(P=alloc_p, multipliers={}))
        assert np.allclose(w, [2.0, 0.0, 1.0])

    def test_zero_allocation(self):
        from wiretap.diag_lp import PowerAllocation

        w = allocation_to_beamformer(PowerAllocation(P=np.zeros(3), multipliers={}))
        assert np.allclose(w, 0.0)

    def test_quad_form_identity_for_diagonal_covariance(self):
        p = diag_problem([[2.0, 1.0, 0.5]], [[0.01, 0.02, 0.03]], p_t=50.0)
        t = thresholds(a=7.0, b=1.0)
        alloc = solve_diagonal(p, t)
        w = allocation_to_beamformer(alloc)
        for m in (*p.H, *p.Z):
            direct = float(np.sum(alloc.P * np.diag(m).real))
            assert quad_form(w, m) == pytest.approx(direct, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_total_power_monotone_in_thresholds(seed):
    rng = np.random.default_rng(seed)
    n, k, j = 3, 2, 1
    h = rng.uniform(0.2, 3.0, size=(k, n))
    z = rng.uniform(0.001, 0.05, size=(j, n))
    p = diag_problem(h, z, p_t=50.0)
    a = float(rng.uniform(0.5, 10.0))
    b = float(rng.uniform(0.05, 1.0))
    base = solve_diagonal(p, thresholds(a=a, b=b))
    if base is None:
        # feasibility is monotone: loosening must keep it infeasible or fix it;
        # tightening must keep it infeasible
        assert solve_diagonal(p, thresholds(a=a * 1.5, b=b * 0.5)) is None
        return
    harder = solve_diagonal(p, thresholds(a=a * 1.2, b=b))
    if harder is not None:
        assert harder.total >= base.total - 1e-9
    easier = solve_diagonal(p, thresholds(a=a, b=b * 2.0))
    assert easier is not None  # loosening b keeps feasibility
    assert easier.total <= base.total + 1e-9


def test_cross_solver_agreement_on_reference_diagonal(ref_j1):
    from wiretap.instances import reference_problem
    from wiretap.sdp import solve_rank_relaxed

    p = reference_problem(1, diagonal=True)
    r = RatePair(0.7, 0.3)
    t = thresholds_gaussian(p, r)
    alloc = solve_diagonal(p, t)
    sdp = solve_rank_relaxed(p, t)
    assert alloc is not None and sdp.status == "optimal"
    assert alloc.total == pytest.approx(sdp.objective, rel=1e-4)
