"""Per-antenna power allocation for the all-diagonal-covariance special case.

When every H_k and Z_j is diagonal, the beamformer phases are irrelevant and
the minimum-power problem reduces to a linear program in the per-antenna
powers P_m = |w_m|^2:

    min sum_m P_m   s.t.  P_m >= 0,  sum_m P_m <= P_T,
                          sum_m P_m H_k[mm] >= a,  sum_m P_m Z_j[mm] <= b.

The beamforming vector is then [sqrt(P_1), ..., sqrt(P_N)]^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .linalg import frob
from .model import ConstraintThresholds, ModelError, WiretapProblem

DIAGONAL_RTOL = 1e-12


@dataclass(frozen=True)
class PowerAllocation:
    """Non-negative per-antenna powers plus the dual multipliers of the LP.

    multipliers maps "power" -> budget-row dual, "users" -> K floor duals,
    "eaves" -> J ceiling duals (all >= 0), matching the SDP dual conventions.
    """

    P: np.ndarray
    multipliers: dict

    @property
    def total(self) -> float:
        return float(np.sum(self.P))


def is_diagonal(m: np.ndarray, rtol: float = DIAGONAL_RTOL) -> bool:
    off = m - np.diag(np.diag(m))
    return frob(off) <= rtol * max(1.0, frob(m))


def all_diagonal(p: WiretapProblem, rtol: float = DIAGONAL_RTOL) -> bool:
    return all(is_diagonal(m, rtol) for m in (*p.H, *p.Z))


def solve_diagonal(p: WiretapProblem, t: ConstraintThresholds) -> PowerAllocation | None:
    """Minimum-power allocation, or None when the LP is certified infeasible."""
    if not all_diagonal(p):
        raise ModelError("covariances are not diagonal; use the general solver")
    n, k, j = p.N, p.K, p.J
    h_diag = np.array([np.diag(m).real for m in p.H])  # (K, N)
    z_diag = np.array([np.diag(m).real for m in p.Z]).reshape(j, n)  # (J, N)

    # Rows: power budget, K user floors (negated to <=), J eavesdropper ceilings.
    a_ub = np.vstack([np.ones((1, n)), -h_diag, z_diag])
    b_ub = np.concatenate([[p.P_T], -t.a * np.ones(k), t.b * np.ones(j)])
    res = linprog(
        c=np.ones(n),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(0.0, None)] * n,
        method="highs",
    )
    if res.status == 2:
        return None
    if not res.success:
        raise RuntimeError(f"LP solver failed (status {res.status}): {res.message}")
    # HiGHS marginals for A_ub x <= b_ub are <= 0 at a minimum.
    marg = -np.asarray(res.ineqlin.marginals)
    multipliers = {
        "power": float(marg[0]),
        "users": marg[1 : 1 + k].copy(),
        "eaves": marg[1 + k :].copy(),
    }
    return PowerAllocation(P=np.clip(res.x, 0.0, None), multipliers=multipliers)


def allocation_to_beamformer(alloc: PowerAllocation) -> np.ndarray:
    """Real non-negative beamformer with |w_m|^2 = P_m."""
    return np.sqrt(np.clip(alloc.P, 0.0, None)).astype(np.complex128)
