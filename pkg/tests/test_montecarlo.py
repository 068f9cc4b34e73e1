import math

import numpy as np
import pytest

from wiretap.instances import H1
from wiretap.mi import MiEvaluator, bpsk
from wiretap.model import ModelError, RatePair, WiretapProblem, thresholds_gaussian
from wiretap.montecarlo import (
    estimate_individual_probs,
    estimate_non_outage,
    exponentiality_check,
    sample_channels,
)
from wiretap.sdp import solve_general


def white_problem(k=1, j=0, n=3, p_t=100.0):
    return WiretapProblem(
        H=tuple(np.eye(n, dtype=complex) for _ in range(k)),
        Z=tuple(np.eye(n, dtype=complex) * 0.01 for _ in range(j)),
        N0=1.0, epsilon=0.1, P_T=p_t,
    )


class TestSampling:
    def test_white_sample_covariance(self):
        p = white_problem()
        n = 100_000
        acc = np.zeros((3, 3), dtype=complex)
        for smp in sample_channels(p, seed=1, count=n):
            acc += np.outer(smp.h[0], smp.h[0].conj())
        cov = acc / n
        assert np.max(np.abs(cov - np.eye(3))) <= 3.0 / math.sqrt(n) * 3.0

    def test_zero_covariance_gives_zero_samples(self):
        p = WiretapProblem(H=(np.zeros((2, 2), dtype=complex),), Z=(),
                           N0=1.0, epsilon=0.1, P_T=1.0)
        for smp in sample_channels(p, seed=3, count=10):
            assert np.allclose(smp.h, 0.0)

    def test_reference_covariance_convergence(self, ref_j1):
        n = 100_000
        acc = np.zeros((3, 3), dtype=complex)
        for smp in sample_channels(ref_j1, seed=5, count=n):
            acc += np.outer(smp.h[0], smp.h[0].conj())
        cov = acc / n
        band = 3.0 / math.sqrt(n)
        scale = np.sqrt(np.outer(np.diag(H1).real, np.diag(H1).real))
        assert np.all(np.abs(cov - H1) <= 3.0 * band * scale)

    def test_deterministic_in_seed_and_chunking(self, ref_j1):
        a = [s.h.copy() for s in sample_channels(ref_j1, seed=9, count=40, chunk_size=7)]
        b = [s.h.copy() for s in sample_channels(ref_j1, seed=9, count=40, chunk_size=4096)]
        for x, y in zip(a, b):
            assert np.array_equal(x, y)
        c = [s.h.copy() for s in sample_channels(ref_j1, seed=10, count=40)]
        assert not np.allclose(a[0], c[0])

    def test_sample_shapes(self, ref_j3):
        smp = next(sample_channels(ref_j3, seed=0, count=1))
        assert smp.h.shape == (2, 3)
        assert smp.z.shape == (3, 3)


class TestNonOutage:
    def test_zero_beamformer_never_succeeds(self):
        p = white_problem()
        est = estimate_non_outage(p, RatePair(0.5, 0.0), np.zeros(3),
                                  sample_channels(p, 0, 2000))
        assert est.p_hat == 0.0

    def test_vacuous_eavesdroppers_tiny_rate(self):
        p = white_problem(k=1, j=0)
        w = np.array([5.0, 0.0, 0.0], dtype=complex)
        est = estimate_non_outage(p, RatePair(1e-4, 0.0), w,
                                  sample_channels(p, 1, 5000))
        assert est.p_hat >= 0.99

    def test_empty_stream_rejected(self):
        p = white_problem()
        with pytest.raises(ModelError):
            estimate_non_outage(p, RatePair(0.5, 0.0), np.ones(3), iter(()))

    def test_over_budget_beamformer_rejected(self):
        p = white_problem(p_t=1.0)
        with pytest.raises(ModelError):
            estimate_non_outage(p, RatePair(0.5, 0.0), np.ones(3) * 5,
                                sample_channels(p, 0, 10))

    def test_solved_point_meets_target(self, ref_j1):
        r = RatePair(0.8, 0.4)
        sol = solve_general(ref_j1, r)
        assert sol.status == "optimal"
        est = estimate_non_outage(ref_j1, r, sol.w,
                                  sample_channels(ref_j1, 17, 100_000))
        assert est.p_hat >= (1.0 - ref_j1.epsilon) - 3.0 * est.ci_halfwidth

    def test_finite_alphabet_rate_map(self, ref_j1):
        ev = MiEvaluator(bpsk())
        r = RatePair(0.5, 0.2)
        sol = solve_general(ref_j1, r, input_model=ev)
        assert sol.status == "optimal"
        est = estimate_non_outage(ref_j1, r, sol.w,
                                  sample_channels(ref_j1, 23, 50_000), rate_map=ev)
        assert est.p_hat >= (1.0 - ref_j1.epsilon) - 3.0 * est.ci_halfwidth
        # the finite-alphabet design needs more power than the Gaussian one
        gauss = solve_general(ref_j1, r)
        assert sol.power >= gauss.power - 1e-9

    def test_determinism(self, ref_j1):
        r = RatePair(0.8, 0.4)
        sol = solve_general(ref_j1, r)
        e1 = estimate_non_outage(ref_j1, r, sol.w, sample_channels(ref_j1, 31, 20_000))
        e2 = estimate_non_outage(ref_j1, r, sol.w, sample_channels(ref_j1, 31, 20_000))
        assert e1.successes == e2.successes


class TestIndividualProbs:
    def test_against_exponential_cdf_oracle(self, ref_j1):
        r = RatePair(0.9, 0.3)
        sol = solve_general(ref_j1, r)
        t = sol.thresholds
        users, eaves = estimate_individual_probs(
            ref_j1, t, sol.w, sample_channels(ref_j1, 41, 100_000))
        from wiretap.linalg import quad_form

        for k, est in enumerate(users):
            expect = math.exp(-t.user_power_target / quad_form(sol.w, ref_j1.H[k]))
            assert abs(est.p_hat - expect) <= 3.0 * max(est.ci_halfwidth, 1e-4)
            assert est.p_hat >= t.per_link_prob - 3.0 * est.ci_halfwidth
        for j, est in enumerate(eaves):
            expect = 1.0 - math.exp(-t.eave_power_target / quad_form(sol.w, ref_j1.Z[j]))
            assert abs(est.p_hat - expect) <= 3.0 * max(est.ci_halfwidth, 1e-4)
            assert est.p_hat >= t.per_link_prob - 3.0 * est.ci_halfwidth

    def test_boundary_quad_form_hits_per_link_probability(self):
        # scale w so w* H w = a exactly: the success probability should sit at
        # the per-link target.
        p = white_problem()
        r = RatePair(1.0, 0.0)
        t = thresholds_gaussian(p, r)
        w = np.array([1.0, 0.0, 0.0], dtype=complex) * math.sqrt(t.a)
        users, _ = estimate_individual_probs(p, t, w, sample_channels(p, 43, 100_000))
        est = users[0]
        assert abs(est.p_hat - t.per_link_prob) <= 3.0 * est.ci_halfwidth

    def test_zero_ceiling_event_has_measure_zero(self):
        p = white_problem(k=1, j=1)
        t = thresholds_gaussian(p, RatePair(1.0, 1.0))  # b = 0
        w = np.array([2.0, 0.0, 0.0], dtype=complex)
        _, eaves = estimate_individual_probs(p, t, w, sample_channels(p, 47, 20_000))
        assert eaves[0].p_hat == 0.0


class TestExponentiality:
    def test_white_unit_mean(self):
        p = white_problem()
        rep = exponentiality_check(p, np.array([1.0, 0, 0]),
                                   sample_channels(p, 51, 100_000), 0)
        assert rep.expected_mean == pytest.approx(1.0)
        assert rep.passed, rep

    def test_scaled_covariance(self):
        p = WiretapProblem(H=(2.0 * np.eye(2, dtype=complex),), Z=(),
                           N0=1.0, epsilon=0.1, P_T=10.0)
        rep = exponentiality_check(p, np.array([1.0, 0.0]),
                                   sample_channels(p, 53, 100_000), 0)
        assert rep.expected_mean == pytest.approx(2.0)
        assert rep.passed, rep

    def test_reference_first_diagonal_entry(self, ref_j1):
        # mean of |h_1* w|^2 with w = e_1 is the (1,1) entry of the first
        # user covariance, 2.1670.
        rep = exponentiality_check(ref_j1, np.array([1.0, 0, 0]),
                                   sample_channels(ref_j1, 57, 100_000), 0)
        assert rep.expected_mean == pytest.approx(2.1670)
        assert abs(rep.sample_mean - 2.1670) / 2.1670 <= rep.stat_band
        assert rep.passed, rep

    def test_degenerate_direction_rejected(self):
        p = WiretapProblem(H=(np.diag([0.0, 1.0]).astype(complex),), Z=(),
                           N0=1.0, epsilon=0.1, P_T=10.0)
        with pytest.raises(ModelError):
            exponentiality_check(p, np.array([1.0, 0.0]),
                                 sample_channels(p, 0, 100), 0)
