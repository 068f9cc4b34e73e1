"""Rank-relaxed transmit-covariance optimization and rank-1 beamformer recovery.

The general (non-diagonal) problem is solved as a small dense SDP:

    min Tr(W)  s.t.  W >= 0 (PSD),  Tr(W) <= P_T,
                     Tr(W H_k) >= a,  Tr(W Z_j) <= b,

via a log-barrier path-following method written directly against this
structure: each Newton system is solved in closed form through the
Woodbury identity, because the Hessian is the PSD-cone term
X -> W^{-1} X W^{-1} plus one rank-one term per scalar constraint. A
phase-I stage either produces a strictly feasible starting point or a
Farkas-type certificate of infeasibility.

Feasibility of the beamformer follows from the relaxation whenever the
solution has numerical rank one (which it does on the bundled scenarios);
otherwise the principal eigendirection is kept and only the transmit power
is re-optimized, which is a one-dimensional closed-form problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import diag_lp
from .linalg import LinalgError, as_vector, hermitian_eig, numerical_rank, quad_form
from .model import (
    STATISTICAL,
    ConstraintThresholds,
    CsiMode,
    ModelError,
    RatePair,
    WiretapProblem,
    thresholds_finite_alphabet,
    thresholds_gaussian,
)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
RANK1_INFEASIBLE = "rank1_infeasible"
MAX_ITERATIONS = "max_iterations"

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class SolverOptions:
    gap_rel: float = 2e-7      # duality-gap target relative to max(1, primal)
    t0: float = 1.0            # initial barrier parameter
    t_growth: float = 10.0     # barrier parameter multiplier per centering stage
    newton_tol: float = 1e-8   # Newton decrement below which a point is centered
    max_newton: int = 800      # total Newton budget per solve (both phases)
    feas_margin_rel: float = 1e-9
    rank_rel_tol: float = 1e-6


@dataclass(frozen=True)
class DualVariables:
    """Multipliers of the rank-relaxed problem: lam for the power budget,
    mu_k for user floors, nu_j for eavesdropper ceilings, Lambda for W >= 0."""

    lam: float
    mu: np.ndarray
    nu: np.ndarray
    Lambda: np.ndarray


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Farkas certificate: with these non-negative multipliers,
    C = lam*I - sum mu_k F_k + sum nu_j G_j >= 0 while
    lam*P_T - sum mu_k a_k + sum nu_j b_j < 0, so no feasible W exists."""

    lam: float
    mu: np.ndarray
    nu: np.ndarray
    combo_min_eig: float
    margin: float


@dataclass(frozen=True)
class SdpSolution:
    status: str
    W: np.ndarray | None = None
    objective: float | None = None
    duals: DualVariables | None = None
    dual_objective: float | None = None
    newton_iterations: int = 0
    certificate: InfeasibilityCertificate | None = None


@dataclass(frozen=True)
class BeamformerSolution:
    status: str
    mode: CsiMode = STATISTICAL
    w: np.ndarray | None = None
    power: float | None = None
    W: np.ndarray | None = None
    rank1_exact: bool = False
    duals: DualVariables | None = None
    objective: float | None = None   # relaxed-problem optimum Tr(W)
    thresholds: ConstraintThresholds | None = None
    certificate: InfeasibilityCertificate | None = None


def effective_constraints(
    p: WiretapProblem, t: ConstraintThresholds, mode: CsiMode = STATISTICAL
) -> tuple[list[tuple[np.ndarray, float]], list[tuple[np.ndarray, float]]]:
    """Floor/ceiling constraint data (matrix, threshold) for the given CSI mode.

    Statistical CSI: (H_k, a) floors and (Z_j, b) ceilings. With perfect user
    CSI the floors become rank-one (h_k h_k*, (2^R_D - 1) N0) and the ceiling
    threshold is re-derived with tail exponent 1/J instead of 1/(K+J).
    """
    if mode.is_statistical:
        floors = [(h, t.a) for h in p.H]
        ceils = [(z, t.b) for z in p.Z]
        return floors, ceils
    channels = mode.user_channels
    if len(channels) != p.K:
        raise ModelError(f"perfect CSI needs {p.K} user channels, got {len(channels)}")
    floors = []
    for h in channels:
        h = as_vector(h)
        if h.size != p.N:
            raise ModelError(f"user channel has dimension {h.size}, expected {p.N}")
        floors.append((np.outer(h, h.conj()), t.user_power_target))
    if p.J == 0:
        return floors, []
    denom = -math.log(1.0 - (1.0 - p.epsilon) ** (1.0 / p.J))
    b = t.eave_power_target / denom
    return floors, [(z, b) for z in p.Z]


# ---------------------------------------------------------------------------
# Barrier kernel
# ---------------------------------------------------------------------------


class _NumericalTrouble(Exception):
    pass


class _NewtonBudget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise _NumericalTrouble("Newton iteration budget exhausted")


class _Barrier:
    """Log-barrier model for min t*(<C0,W> + cs*s) over the constraint set

        W > 0,   <A_i, W> - g*s <= u_i,   [s <= s_cap]

    where the scalar relaxation variable s exists only in phase I (relax=True,
    then g = 1 for every row). Newton steps are computed with the Woodbury
    identity: the PSD-cone Hessian block X -> W^{-1} X W^{-1} is inverted in
    closed form (X -> W X W) and each scalar constraint adds a rank-one term.
    """

    def __init__(self, A: np.ndarray, u: np.ndarray, *, C0: np.ndarray | None,
                 cs: float, relax: bool, s_cap: float | None):
        self.A = A                      # (m, N, N) Hermitian constraint matrices
        self.u = u                      # (m,)
        self.m, self.N = A.shape[0], A.shape[1]
        self.C0 = C0
        self.cs = cs
        self.relax = relax
        self.s_cap = s_cap
        # Barrier parameter count: logdet + m scalar logs (+ s_cap log).
        self.nu = self.N + self.m + (1 if relax else 0)

    def slacks(self, W: np.ndarray, s: float) -> np.ndarray:
        vals = np.real(np.einsum("mij,ij->m", self.A.conj(), W))
        sl = self.u - vals
        if self.relax:
            sl = sl + s
        return sl

    def value(self, t: float, W: np.ndarray, s: float) -> float:
        sl = self.slacks(W, s)
        if np.any(sl <= 0.0):
            return np.inf
        try:
            L = np.linalg.cholesky(W)
        except np.linalg.LinAlgError:
            return np.inf
        logdet = 2.0 * float(np.sum(np.log(np.real(np.diag(L)))))
        obj = 0.0
        if self.C0 is not None:
            obj += float(np.real(np.vdot(self.C0, W)))
        if self.relax:
            obj += self.cs * s
            if self.s_cap - s <= 0.0:
                return np.inf
        val = t * obj - logdet - float(np.sum(np.log(sl)))
        if self.relax:
            val -= math.log(self.s_cap - s)
        return val

    def newton_step(self, t: float, W: np.ndarray, s: float):
        """Returns (dW, ds, decrement^2, grad_W, grad_s)."""
        sl = self.slacks(W, s)
        if np.any(sl <= 0.0):
            raise _NumericalTrouble("iterate left the feasible region")
        Winv = np.linalg.inv(W)
        Winv = (Winv + Winv.conj().T) / 2.0
        grad_W = -Winv + np.einsum("m,mij->ij", 1.0 / sl, self.A)
        if self.C0 is not None:
            grad_W = grad_W + t * self.C0
        if self.relax:
            cap = self.s_cap - s
            grad_s = t * self.cs - float(np.sum(1.0 / sl)) + 1.0 / cap
            cap2 = cap * cap
        else:
            grad_s, cap2 = 0.0, 0.0

        # M^-1 applied to the gradient and to each constraint row.
        WgW = W @ grad_W @ W
        WAW = np.einsum("ab,mbc,cd->mad", W, self.A, W)
        v = np.real(np.einsum("mij,ij->m", self.A.conj(), WgW))
        S = np.real(np.einsum("mij,nij->mn", self.A.conj(), WAW))
        if self.relax:
            v = v - grad_s * cap2
            S = S + cap2
        core = np.diag(sl * sl) + S
        # Jacobi equilibration: the diagonal spans many orders of magnitude
        # once binding slacks shrink, and the raw solve loses the small rows.
        d = np.sqrt(np.diag(core))
        d[d <= 0.0] = 1.0
        scaled = core / np.outer(d, d)
        try:
            y = np.linalg.solve(scaled, v / d) / d
        except np.linalg.LinAlgError:
            y = np.linalg.lstsq(scaled, v / d, rcond=None)[0] / d
        dW = -WgW + np.einsum("m,mij->ij", y, WAW)
        dW = (dW + dW.conj().T) / 2.0
        if self.relax:
            ds = -cap2 * (grad_s + float(np.sum(y)))
        else:
            ds = 0.0
        dec2 = -(float(np.real(np.vdot(grad_W, dW))) + grad_s * ds)
        return dW, ds, dec2, grad_W, grad_s

    def center(self, t: float, W: np.ndarray, s: float, tol: float,
               budget: _NewtonBudget, stop_early=None):
        """Newton iterations at fixed t until the decrement falls below tol.

        stop_early(W, s) may abort centering as soon as some external goal is
        reached (used by phase I once s is strictly negative). Exits quietly
        when the decrement reaches the float64 noise floor: near the central
        point the gradient is a cancellation of O(t)-sized terms, so decrements
        much below t * eps are not resolvable and not needed.
        """
        f = self.value(t, W, s)
        for _ in range(80):
            if stop_early is not None and stop_early(W, s):
                return W, s, False
            dW, ds, dec2, _, _ = self.newton_step(t, W, s)
            if dec2 <= tol * tol:
                return W, s, True
            if dec2 <= 0.0:
                return W, s, False  # numerical noise floor
            budget.spend()
            # Backtracking search. dec2 can be overestimated by cancellation
            # noise right after a barrier-parameter jump, so the Armijo
            # condition is kept permissive and any strictly decreasing step is
            # accepted as a fallback.
            alpha, best_alpha, best_f = 1.0, None, f
            for _ls in range(60):
                f_new = self.value(t, W + alpha * dW, s + alpha * ds)
                if f_new <= f - 1e-3 * alpha * dec2:
                    best_alpha, best_f = alpha, f_new
                    break
                if f_new < best_f:
                    best_alpha, best_f = alpha, f_new
                alpha *= 0.5
            if best_alpha is None or (f - best_f) <= 4.0 * _EPS * max(1.0, abs(f)):
                # Progress is below float64 resolution of the barrier value
                # (the decrement itself is cancellation-limited at large t):
                # the point is as centered as the arithmetic allows.
                return W, s, False
            W, s, f = W + best_alpha * dW, s + best_alpha * ds, best_f
        raise _NumericalTrouble("centering did not converge")


# ---------------------------------------------------------------------------
# Phase I / phase II
# ---------------------------------------------------------------------------


@dataclass
class _ConstraintSystem:
    """Scalar trace constraints <A_i, W> <= u_i with dual bookkeeping."""

    A: np.ndarray              # (m, N, N)
    u: np.ndarray              # (m,)
    floor_rows: list           # row index per user floor (None if pruned)
    ceil_rows: list            # row index per eavesdropper ceiling
    floors: list               # effective (F_k, a_k)
    ceils: list                # effective (G_j, b_j)
    n: int
    p_t: float

    def duals_from_rows(self, y: np.ndarray):
        lam = float(y[0])
        mu = np.array([y[r] if r is not None else 0.0 for r in self.floor_rows])
        nu = np.array([y[r] if r is not None else 0.0 for r in self.ceil_rows])
        return lam, mu, nu

    def duals_from_slacks(self, t: float, slacks: np.ndarray):
        return self.duals_from_rows(1.0 / (t * slacks))

    def k6_matrix(self, lam: float, mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
        out = (1.0 + lam) * np.eye(self.n, dtype=complex)
        for m_k, (mat, _) in zip(mu, self.floors):
            out = out - m_k * mat
        for n_j, (mat, _) in zip(nu, self.ceils):
            out = out + n_j * mat
        return (out + out.conj().T) / 2.0

    def dual_objective(self, lam: float, mu: np.ndarray, nu: np.ndarray) -> float:
        val = -lam * self.p_t
        val += sum(m_k * a_k for m_k, (_, a_k) in zip(mu, self.floors))
        val -= sum(n_j * b_j for n_j, (_, b_j) in zip(nu, self.ceils))
        return val


def _build_system(p: WiretapProblem, floors, ceils) -> _ConstraintSystem | str:
    """Assemble constraint rows; returns INFEASIBLE for contradictions visible
    without solving (zero floor matrix with positive target, negative ceiling)."""
    n = p.N
    rows = [np.eye(n, dtype=complex)]
    u = [p.P_T]
    floor_rows, ceil_rows = [], []
    for mat, a_k in floors:
        if np.linalg.norm(mat) == 0.0:
            if a_k > 0.0:
                return INFEASIBLE
            floor_rows.append(None)  # vacuous 0 >= 0
            continue
        floor_rows.append(len(rows))
        rows.append(-mat)
        u.append(-a_k)
    for mat, b_j in ceils:
        if b_j < 0.0:
            return INFEASIBLE
        if np.linalg.norm(mat) == 0.0:
            ceil_rows.append(None)  # 0 <= b_j, vacuous
            continue
        ceil_rows.append(len(rows))
        rows.append(mat)
        u.append(b_j)
    return _ConstraintSystem(
        A=np.array(rows), u=np.array(u, dtype=float),
        floor_rows=floor_rows, ceil_rows=ceil_rows,
        floors=list(floors), ceils=list(ceils), n=n, p_t=p.P_T,
    )


def _certificate(sys_: _ConstraintSystem, lam, mu, nu) -> InfeasibilityCertificate | None:
    combo = lam * np.eye(sys_.n, dtype=complex)
    for m_k, (mat, _) in zip(mu, sys_.floors):
        combo = combo - m_k * mat
    for n_j, (mat, _) in zip(nu, sys_.ceils):
        combo = combo + n_j * mat
    eig_min = float(hermitian_eig(combo).eigenvalues[0])
    # margin = sum mu a - lam P_T - sum nu b; a feasible W would force it <= 0.
    margin = sys_.dual_objective(lam, mu, nu)
    if margin > max(0.0, -eig_min) * sys_.p_t:
        return InfeasibilityCertificate(
            lam=lam, mu=mu, nu=nu, combo_min_eig=eig_min, margin=margin
        )
    return None


def _interior_start(sys_: _ConstraintSystem) -> np.ndarray | None:
    """Try W = alpha*I with a safety margin; None if no such point exists."""
    n = sys_.n
    lo, hi = 0.0, sys_.p_t / n
    for mat, a_k in sys_.floors:
        tr = float(np.real(np.trace(mat)))
        if tr > 0.0:
            lo = max(lo, a_k / tr)
    for mat, b_j in sys_.ceils:
        tr = float(np.real(np.trace(mat)))
        if tr > 0.0:
            hi = min(hi, b_j / tr)
    if lo * 1.05 + 1e-12 < hi * 0.95:
        alpha = math.sqrt(max(lo, 1e-12 * hi) * hi) if lo > 0 else hi / 2.0
        alpha = min(max(alpha, lo * 1.05 + 1e-15), hi * 0.95)
        return alpha * np.eye(n, dtype=complex)
    return None


def _phase1(sys_: _ConstraintSystem, opts: SolverOptions, budget: _NewtonBudget):
    """Find a strictly feasible W or certify infeasibility.

    Minimizes the uniform relaxation s over { <A_i,W> - s <= u_i, W > 0 };
    s* < 0 yields an interior point, a positive dual bound proves there is
    none.
    """
    ref = max(1.0, float(np.max(np.abs(sys_.u))), sys_.p_t)
    margin = opts.feas_margin_rel * ref
    n = sys_.n
    W = (sys_.p_t / (2.0 * n)) * np.eye(n, dtype=complex)
    viol = float(np.max(np.real(np.einsum("mij,ij->m", sys_.A.conj(), W)) - sys_.u))
    s = max(0.0, viol) + 1.0 + 0.01 * ref
    s_cap = 10.0 * (s + ref)
    bar = _Barrier(sys_.A, sys_.u, C0=None, cs=1.0, relax=True, s_cap=s_cap)

    def feasible_enough(_W, _s):
        return _s < -margin

    t = opts.t0
    stalled_prev = False
    while True:
        used_before = budget.used
        W, s, converged = bar.center(t, W, s, opts.newton_tol, budget,
                                     stop_early=feasible_enough)
        if s < -margin:
            return "feasible", W, None
        gap = bar.nu / t
        if s - gap > 0.0:
            sl = bar.slacks(W, s)
            lam, mu, nu = sys_.duals_from_slacks(t, sl)
            return "infeasible", None, _certificate(sys_, lam, mu, nu)
        if gap <= max(1e-12, 1e-11 * ref):
            # No strict interior within resolution: treat as infeasible.
            return "infeasible", None, None
        stalled = not converged and budget.used == used_before
        if stalled and stalled_prev:
            raise _NumericalTrouble("phase-I feasibility could not be decided")
        stalled_prev = stalled
        t *= opts.t_growth


def _polish_duals(sys_: _ConstraintSystem, W: np.ndarray, t: float,
                  slacks: np.ndarray, rank_rel_tol: float, gap_est: float):
    """Candidate refinements of the central-path multipliers.

    At the solution, the matrix multiplier ((1+lam)I - sum mu F + sum nu G)
    must annihilate the range of W (complementary slackness). The slack-based
    duals 1/(t s_i) carry O(1/t) centering noise; a small non-negative
    least-squares fit of the near-binding multipliers against that condition
    removes it. A second fit adds a gently weighted strong-duality row (dual
    objective = Tr W - gap_est), which resolves dual degeneracy: several
    multiplier vectors can annihilate the face, and only the right one closes
    the gap. Both fits are returned as candidates; the caller keeps whichever
    valid dual point certifies the smallest gap. Multipliers of clearly
    inactive constraints keep their tiny central-path values.
    """
    from scipy.optimize import nnls

    y = 1.0 / (t * slacks)
    out = []
    vals, vecs = np.linalg.eigh(W)
    lam_max = float(vals[-1])
    if lam_max <= 0.0:
        return out
    # Numerical range of W. The central path leaves O(1/t) dust eigenvalues
    # outside the optimal face; for small-trace optima they can exceed a
    # relative threshold, so the face is cut at the largest spectral gap
    # when one clearly exists, falling back to the relative cut.
    desc = np.clip(vals[::-1], 1e-300, None)
    ratios = desc[:-1] / desc[1:]
    if ratios.size and float(np.max(ratios)) > 1e2:
        cut = int(np.argmax(ratios)) + 1
        span = vecs[:, ::-1][:, :cut]
    else:
        span = vecs[:, vals > rank_rel_tol * lam_max]
    primal = float(np.real(np.trace(W)))
    for cutoff in (1e-6 * max(1.0, float(np.max(y))), 0.0):
        active = np.flatnonzero(y >= cutoff) if cutoff else np.arange(y.size)
        if active.size == 0:
            continue
        inactive = np.flatnonzero(y < cutoff) if cutoff else np.array([], dtype=int)
        # Lambda @ span = span + sum_i y_i (A_i @ span) must vanish (row 0
        # carries A = I for the power budget, floors carry -F_k, ceilings
        # +G_j, matching the sign conventions already encoded in sys_.A).
        fixed = np.zeros(span.shape, dtype=complex)
        for i in inactive:
            fixed += y[i] * (sys_.A[i] @ span)
        target = -(span + fixed)
        cols = [sys_.A[i] @ span for i in active]
        C = np.stack(
            [np.concatenate([c.ravel().real, c.ravel().imag]) for c in cols], axis=1
        )
        q = np.concatenate([target.ravel().real, target.ravel().imag])

        def fit(C_fit, q_fit, rows=active):
            try:
                sol, _ = nnls(C_fit, q_fit)
            except Exception:
                return
            cand = y.copy()
            cand[rows] = sol
            out.append(cand)

        fit(C, q)
        # strong-duality tie-breaker: -u . y = Tr W - gap_est, weighted so it
        # steers the fit without overruling stationarity
        obj_target = (primal - gap_est) + float(np.dot(sys_.u[inactive], y[inactive]))
        row = -sys_.u[active]
        w_obj = 0.1 / max(1.0, float(np.linalg.norm(row)))
        fit(np.vstack([C, w_obj * row]), np.concatenate([q, [w_obj * obj_target]]))
    return out


def _phase2(sys_: _ConstraintSystem, W0: np.ndarray, opts: SolverOptions,
            budget: _NewtonBudget):
    """Path-following on the original objective from a strictly feasible W0."""
    n = sys_.n
    bar = _Barrier(sys_.A, sys_.u, C0=np.eye(n, dtype=complex), cs=0.0,
                   relax=False, s_cap=None)
    W = W0.copy()
    t = opts.t0
    stalled_prev = False
    while True:
        used_before = budget.used
        W, _, converged = bar.center(t, W, 0.0, opts.newton_tol, budget)
        primal = float(np.real(np.trace(W)))
        if bar.nu / t <= opts.gap_rel * max(1.0, primal):
            break
        stalled = not converged and budget.used == used_before
        if stalled and stalled_prev:
            break  # two silent stages: float64 floor of the path reached
        stalled_prev = stalled
        if t >= 1e12:
            break
        t *= opts.t_growth
    slacks = bar.slacks(W, 0.0)
    primal = float(np.real(np.trace(W)))
    y_raw = 1.0 / (t * slacks)
    polished = _polish_duals(sys_, W, t, slacks, opts.rank_rel_tol, bar.nu / t)

    def dual_quality(y):
        """(|gap|, repaired y) for a dual-feasible version of y, else None.

        If the K6 matrix of y dips slightly below PSD (the fits carry the
        same O(gap) noise as the gap itself), feasibility is restored exactly
        by shrinking the floor multipliers: with delta = -min eig, scaling mu
        by (1+lam)/(1+lam+delta) makes the new K6 matrix a convex combination
        of the old one and the PSD part, at a dual-objective cost of order
        delta. A candidate whose bound still exceeds the primal is invalid."""
        lam, mu, nu = sys_.duals_from_rows(y)
        lambda_mat = sys_.k6_matrix(lam, mu, nu)
        eig_min = float(np.linalg.eigvalsh(lambda_mat)[0])
        if eig_min < 0.0:
            c = (1.0 + lam) / (1.0 + lam - eig_min * (1.0 + 1e-9))
            y = y.copy()
            for k_idx, row in enumerate(sys_.floor_rows):
                if row is not None:
                    y[row] *= c
            lam, mu, nu = sys_.duals_from_rows(y)
            lambda_mat = sys_.k6_matrix(lam, mu, nu)
            eig_min = float(np.linalg.eigvalsh(lambda_mat)[0])
        if eig_min < -1e-11 * max(1.0, float(np.linalg.norm(lambda_mat))):
            return None
        gap = primal - sys_.dual_objective(lam, mu, nu)
        if gap < -1e-7 * max(1.0, primal):
            return None  # claims a bound above the primal: not a valid dual
        return abs(gap), y

    candidates = []
    for i, y in enumerate([*polished, y_raw]):
        quality = dual_quality(y)
        if quality is not None:
            candidates.append((quality[0], i, quality[1]))
    y = min(candidates)[2] if candidates else y_raw
    lam, mu, nu = sys_.duals_from_rows(y)
    Lambda = sys_.k6_matrix(lam, mu, nu)
    duals = DualVariables(lam=lam, mu=mu, nu=nu, Lambda=Lambda)
    return W, primal, duals, sys_.dual_objective(lam, mu, nu)


def solve_rank_relaxed(
    p: WiretapProblem,
    t: ConstraintThresholds,
    mode: CsiMode = STATISTICAL,
    options: SolverOptions | None = None,
) -> SdpSolution:
    """Solve the rank-relaxed minimum-power problem for the given thresholds."""
    opts = options or SolverOptions()
    floors, ceils = effective_constraints(p, t, mode)

    if all(a_k <= 0.0 for _, a_k in floors):
        # No active floor: W = 0 is optimal (every ceiling holds at zero).
        n = p.N
        duals = DualVariables(
            lam=0.0, mu=np.zeros(len(floors)), nu=np.zeros(len(ceils)),
            Lambda=np.eye(n, dtype=complex),
        )
        return SdpSolution(status=OPTIMAL, W=np.zeros((n, n), dtype=complex),
                           objective=0.0, duals=duals, dual_objective=0.0)

    sys_ = _build_system(p, floors, ceils)
    if sys_ == INFEASIBLE:
        return SdpSolution(status=INFEASIBLE)

    budget = _NewtonBudget(opts.max_newton)
    try:
        W0 = _interior_start(sys_)
        if W0 is None:
            verdict, W0, cert = _phase1(sys_, opts, budget)
            if verdict == "infeasible":
                return SdpSolution(status=INFEASIBLE, certificate=cert,
                                   newton_iterations=budget.used)
        W, primal, duals, dual_obj = _phase2(sys_, W0, opts, budget)
    except _NumericalTrouble:
        return SdpSolution(status=MAX_ITERATIONS, newton_iterations=budget.used)
    # The claimed status must be earned: certified by a valid dual point with a
    # small gap, not by the path having terminated.
    lam_min = float(np.linalg.eigvalsh(duals.Lambda)[0])
    dual_valid = (
        duals.lam >= -1e-9
        and np.all(duals.mu >= -1e-9)
        and np.all(duals.nu >= -1e-9)
        and lam_min >= -1e-8 * max(1.0, float(np.linalg.norm(duals.Lambda)))
    )
    gap_ok = abs(primal - dual_obj) <= 1e-6 * max(1.0, primal)
    if not (dual_valid and gap_ok):
        return SdpSolution(status=MAX_ITERATIONS, newton_iterations=budget.used)
    return SdpSolution(status=OPTIMAL, W=W, objective=primal, duals=duals,
                       dual_objective=dual_obj, newton_iterations=budget.used)


# ---------------------------------------------------------------------------
# Rank-1 recovery
# ---------------------------------------------------------------------------


def extract_principal_direction(W) -> np.ndarray:
    """Unit-norm eigendirection of the largest eigenvalue, with the first
    nonzero entry rotated to be real non-negative (rates are phase-invariant,
    a fixed convention keeps outputs deterministic)."""
    vals, vecs = hermitian_eig(W)
    lam_max = float(vals[-1])
    if lam_max <= 0.0:
        raise LinalgError("cannot extract a direction from the zero matrix")
    w0 = vecs[:, -1].copy()
    w0 /= np.linalg.norm(w0)
    idx = np.flatnonzero(np.abs(w0) > 1e-12 * np.max(np.abs(w0)))
    lead = w0[idx[0]]
    w0 *= np.conj(lead) / abs(lead)
    return w0


def power_rescale(
    p: WiretapProblem,
    t: ConstraintThresholds,
    w0,
    mode: CsiMode = STATISTICAL,
) -> float | None:
    """Cheapest power P with sqrt(P) w0 feasible, or None when no P works.

    Closed form: P = max_k a_k / (w0* F_k w0), subject to P <= P_T and
    P (w0* G_j w0) <= b_j; a ceiling with zero quadratic form imposes no
    bound, a floor with zero quadratic form and positive target is fatal.
    """
    w0 = as_vector(w0)
    if not math.isclose(float(np.linalg.norm(w0)), 1.0, rel_tol=1e-9, abs_tol=1e-12):
        raise ModelError("w0 must be unit norm")
    floors, ceils = effective_constraints(p, t, mode)
    power = 0.0
    for mat, a_k in floors:
        if a_k <= 0.0:
            continue
        qf = max(quad_form(w0, mat), 0.0)
        if qf == 0.0:
            return None
        power = max(power, a_k / qf)
    if power > p.P_T * (1.0 + 1e-12):
        return None
    for mat, b_j in ceils:
        qf = max(quad_form(w0, mat), 0.0)
        if qf > 0.0 and power * qf > b_j * (1.0 + 1e-12) + 1e-300:
            return None
    return power


def _lp_route(p, t, opts) -> BeamformerSolution:
    """Diagonal instances: solve the per-antenna LP and lift its duals.

    The LP yields W = w w* with [sqrt(P_m)] entries; its row duals satisfy
    the same stationarity/complementarity system (the K6 matrix is diagonal
    with the LP's reduced costs on the diagonal)."""
    alloc = diag_lp.solve_diagonal(p, t)
    if alloc is None:
        return BeamformerSolution(status=INFEASIBLE, thresholds=t)
    w = diag_lp.allocation_to_beamformer(alloc)
    W = np.outer(w, w.conj())
    lam = alloc.multipliers["power"]
    mu = alloc.multipliers["users"]
    nu = alloc.multipliers["eaves"]
    helper = _ConstraintSystem(A=np.zeros((0, p.N, p.N)), u=np.zeros(0),
                               floor_rows=[], ceil_rows=[],
                               floors=[(h, t.a) for h in p.H],
                               ceils=[(z, t.b) for z in p.Z],
                               n=p.N, p_t=p.P_T)
    duals = DualVariables(lam=lam, mu=mu, nu=nu, Lambda=helper.k6_matrix(lam, mu, nu))
    return BeamformerSolution(
        status=OPTIMAL, w=w, power=alloc.total, W=W,
        rank1_exact=numerical_rank(W, opts.rank_rel_tol) == 1,
        duals=duals, objective=alloc.total, thresholds=t,
    )


def solve_general(
    p: WiretapProblem,
    r: RatePair,
    mode: CsiMode = STATISTICAL,
    input_model="gaussian",
    options: SolverOptions | None = None,
) -> BeamformerSolution:
    """Full pipeline: thresholds, relaxed solve, rank-1 recovery.

    input_model is "gaussian" or a mutual-information evaluator for
    finite-alphabet signalling. All-diagonal statistical instances route to
    the per-antenna LP, whose optimum the relaxation provably matches.
    """
    opts = options or SolverOptions()
    if input_model == "gaussian":
        t = thresholds_gaussian(p, r)
    else:
        t = thresholds_finite_alphabet(p, r, input_model)

    if t.user_power_target <= 0.0:
        # R_D = 0: transmitting nothing satisfies every constraint.
        n = p.N
        duals = DualVariables(lam=0.0, mu=np.zeros(p.K), nu=np.zeros(p.J),
                              Lambda=np.eye(n, dtype=complex))
        return BeamformerSolution(
            status=OPTIMAL, mode=mode, w=np.zeros(n, dtype=complex), power=0.0,
            W=np.zeros((n, n), dtype=complex), rank1_exact=False, duals=duals,
            objective=0.0, thresholds=t,
        )

    if mode.is_statistical and diag_lp.all_diagonal(p):
        sol = _lp_route(p, t, opts)
        return BeamformerSolution(
            status=sol.status, mode=mode, w=sol.w, power=sol.power, W=sol.W,
            rank1_exact=sol.rank1_exact, duals=sol.duals, objective=sol.objective,
            thresholds=t, certificate=sol.certificate,
        )

    sdp = solve_rank_relaxed(p, t, mode, opts)
    if sdp.status != OPTIMAL:
        return BeamformerSolution(status=sdp.status, mode=mode, thresholds=t,
                                  certificate=sdp.certificate)
    rank = numerical_rank(sdp.W, opts.rank_rel_tol)
    w0 = extract_principal_direction(sdp.W)
    if rank == 1:
        lam_max = float(hermitian_eig(sdp.W).eigenvalues[-1])
        w = math.sqrt(lam_max) * w0
        return BeamformerSolution(
            status=OPTIMAL, mode=mode, w=w, power=lam_max, W=sdp.W,
            rank1_exact=True, duals=sdp.duals, objective=sdp.objective,
            thresholds=t,
        )
    power = power_rescale(p, t, w0, mode)
    if power is None:
        # Relaxation feasible but its principal direction is not: report a
        # distinct outcome so sweeps can treat the point conservatively.
        return BeamformerSolution(status=RANK1_INFEASIBLE, mode=mode, W=sdp.W,
                                  duals=sdp.duals, objective=sdp.objective,
                                  thresholds=t)
    w = math.sqrt(power) * w0
    return BeamformerSolution(
        status=OPTIMAL, mode=mode, w=w, power=power, W=sdp.W, rank1_exact=False,
        duals=sdp.duals, objective=sdp.objective, thresholds=t,
    )
