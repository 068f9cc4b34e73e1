"""Optimality certification for candidate (W, duals) pairs.

Evaluates the stationarity and complementary-slackness system of the
rank-relaxed problem:

  K1  primal feasibility of W,
  K2  Lambda W = 0,
  K3  lam (Tr W - P_T) = 0,
  K4  mu_k (a - Tr(W F_k)) = 0,
  K5  nu_j (Tr(W G_j) - b) = 0,
  K6  Lambda = (1 + lam) I - sum_k mu_k F_k + sum_j nu_j G_j  is PSD,

plus the scalar identity (1+lam) Tr W = sum mu_k a_k - sum nu_j b_j implied
by K2/K4/K5/K6, and the rank bound rank(W) <= rank(sum mu_k F_k). The matrix
multiplier used everywhere is the one *defined* by K6 from the scalar duals:
a candidate passing here is optimal regardless of the Lambda it shipped with.

Matrix residuals are normalized by max(1, ||W||_F) so pass/fail thresholds
are scale-free across power budgets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eig, numerical_rank, trace_inner
from .model import STATISTICAL, ConstraintThresholds, CsiMode, ModelError, WiretapProblem
from .sdp import DualVariables, effective_constraints


@dataclass(frozen=True)
class KktReport:
    primal_feasible: bool
    feasibility_violations: tuple[str, ...]
    compl_slack_W: float          # ||Lambda W||_F / max(1, ||W||_F)
    slack_power: float            # |lam (Tr W - P_T)|
    slack_users: np.ndarray       # |mu_k (a_k - Tr(W F_k))|
    slack_eaves: np.ndarray       # |nu_j (Tr(W G_j) - b_j)|
    stationarity_min_eig: float   # min eigenvalue of the K6 matrix
    scalar_identity: float        # |(1+lam) Tr W - sum mu a + sum nu b| / max(1, (1+lam) Tr W)
    rank_W: int
    rank_muH: int

    def max_residual(self) -> float:
        parts = [self.compl_slack_W, self.slack_power, self.scalar_identity]
        parts += list(np.atleast_1d(self.slack_users))
        parts += list(np.atleast_1d(self.slack_eaves))
        return float(max(parts)) if parts else 0.0

    def passes(self, tol: float) -> bool:
        return (
            self.primal_feasible
            and self.max_residual() <= tol
            and self.stationarity_min_eig >= -tol
        )


def check_kkt(
    p: WiretapProblem,
    t: ConstraintThresholds,
    W: np.ndarray,
    duals: DualVariables,
    tol: float = 1e-5,
    mode: CsiMode = STATISTICAL,
) -> KktReport:
    """Evaluate every optimality residual for a candidate solution."""
    floors, ceils = effective_constraints(p, t, mode)
    if W.shape != (p.N, p.N):
        raise ModelError(f"W has shape {W.shape}, expected ({p.N}, {p.N})")
    if len(duals.mu) != len(floors) or len(duals.nu) != len(ceils):
        raise ModelError("dual multiplier counts do not match the constraint counts")
    w_scale = max(1.0, float(np.linalg.norm(W)))
    tr_w = float(np.real(np.trace(W)))

    violations = []
    eig_w = hermitian_eig(W).eigenvalues
    if eig_w.size and float(eig_w[0]) < -tol * max(1.0, float(eig_w[-1])):
        violations.append(f"W not PSD (min eigenvalue {eig_w[0]:.3e})")
    if tr_w > p.P_T + tol * max(1.0, p.P_T):
        violations.append(f"power budget violated: Tr W = {tr_w:.6g} > {p.P_T:.6g}")
    floor_vals = [trace_inner(W, mat) for mat, _ in floors]
    ceil_vals = [trace_inner(W, mat) for mat, _ in ceils]
    for k, (val, (_, a_k)) in enumerate(zip(floor_vals, floors)):
        if val < a_k - tol * max(1.0, abs(a_k)):
            violations.append(f"user floor {k} violated: {val:.6g} < {a_k:.6g}")
    for j, (val, (_, b_j)) in enumerate(zip(ceil_vals, ceils)):
        if val > b_j + tol * max(1.0, abs(b_j)):
            violations.append(f"eavesdropper ceiling {j} violated: {val:.6g} > {b_j:.6g}")

    lam, mu, nu = duals.lam, np.atleast_1d(duals.mu), np.atleast_1d(duals.nu)
    k6 = (1.0 + lam) * np.eye(p.N, dtype=complex)
    for m_k, (mat, _) in zip(mu, floors):
        k6 = k6 - m_k * mat
    for n_j, (mat, _) in zip(nu, ceils):
        k6 = k6 + n_j * mat
    k6 = (k6 + k6.conj().T) / 2.0

    scalar = (1.0 + lam) * tr_w
    scalar -= float(np.dot(mu, [a_k for _, a_k in floors])) if floors else 0.0
    scalar += float(np.dot(nu, [b_j for _, b_j in ceils])) if ceils else 0.0

    mu_h = np.zeros((p.N, p.N), dtype=complex)
    for m_k, (mat, _) in zip(mu, floors):
        mu_h = mu_h + m_k * mat

    return KktReport(
        primal_feasible=not violations,
        feasibility_violations=tuple(violations),
        compl_slack_W=float(np.linalg.norm(k6 @ W)) / w_scale,
        slack_power=abs(lam * (tr_w - p.P_T)),
        slack_users=np.array(
            [abs(m_k * (a_k - val)) for m_k, val, (_, a_k) in zip(mu, floor_vals, floors)]
        ),
        slack_eaves=np.array(
            [abs(n_j * (val - b_j)) for n_j, val, (_, b_j) in zip(nu, ceil_vals, ceils)]
        ),
        stationarity_min_eig=float(hermitian_eig(k6).eigenvalues[0]),
        scalar_identity=abs(scalar) / max(1.0, abs((1.0 + lam) * tr_w)),
        rank_W=numerical_rank(W),
        rank_muH=numerical_rank(mu_h),
    )


@dataclass(frozen=True)
class RankBoundReport:
    rank_W: int
    rank_muH: int
    mu_sum: float
    scalar_identity: float
    rank_bound_ok: bool
    mu_positive_ok: bool

    @property
    def ok(self) -> bool:
        return self.rank_bound_ok and self.mu_positive_ok


def rank_bound_check(
    W: np.ndarray,
    duals: DualVariables,
    p: WiretapProblem,
    t: ConstraintThresholds,
    rel_tol: float = 1e-6,
    tol: float = 1e-5,
    mode: CsiMode = STATISTICAL,
) -> RankBoundReport:
    """rank(W) <= rank(sum mu_k F_k), with sum mu_k > 0 whenever W != 0.

    A violation on a converged solution means the solver or the rank
    threshold failed, not the theory; surfacing rank_W vs rank_muH tells a
    user when the relaxation could in principle return a rank > 1 solution.
    """
    if float(np.linalg.norm(W)) == 0.0:
        raise ModelError("rank bound is vacuous for W = 0")
    floors, ceils = effective_constraints(p, t, mode)
    mu = np.atleast_1d(duals.mu)
    nu = np.atleast_1d(duals.nu)
    mu_h = np.zeros((p.N, p.N), dtype=complex)
    for m_k, (mat, _) in zip(mu, floors):
        mu_h = mu_h + m_k * mat
    rank_w = numerical_rank(W, rel_tol)
    rank_muh = numerical_rank(mu_h, rel_tol)
    scalar = (1.0 + duals.lam) * float(np.real(np.trace(W)))
    scalar -= float(np.dot(mu, [a_k for _, a_k in floors])) if floors else 0.0
    scalar += float(np.dot(nu, [b_j for _, b_j in ceils])) if ceils else 0.0
    scalar = abs(scalar) / max(1.0, abs((1.0 + duals.lam) * float(np.real(np.trace(W)))))
    mu_sum = float(np.sum(mu))
    return RankBoundReport(
        rank_W=rank_w,
        rank_muH=rank_muh,
        mu_sum=mu_sum,
        scalar_identity=scalar,
        rank_bound_ok=rank_w <= rank_muh and scalar <= tol,
        mu_positive_ok=mu_sum > 0.0,
    )
