"""Bundled reference scenarios: 3 antennas, 2 users, 1 to 3 eavesdroppers.

The covariance set below is the positive definite channel statistics used by
the shipped demo problem files (problems/paper_j*.json) and throughout the
test suite. Eavesdropper covariances are roughly 25 dB below the user ones,
so positive secrecy rates are achievable over a useful range of code rates.
"""

from __future__ import annotations

import numpy as np

from .model import WiretapProblem

H1 = np.array(
    [
        [2.1670, 0.1806 + 0.0183j, -0.1453 - 0.3101j],
        [0.1806 - 0.0183j, 1.9165, 0.0696 + 0.3374j],
        [-0.1453 + 0.3101j, 0.0696 - 0.3374j, 1.4180],
    ]
)

H2 = np.array(
    [
        [1.9834, -0.2001 + 0.0250j, 0.0470 - 0.3424j],
        [-0.2001 - 0.0250j, 1.3867, 0.0149 - 0.2083j],
        [0.0470 + 0.3424j, 0.0149 + 0.2083j, 1.4323],
    ]
)

Z1 = np.array(
    [
        [0.0043, 0.0010 - 0.0003j, 0.0013 + 0.0009j],
        [0.0010 + 0.0003j, 0.0074, -0.0011 - 0.0029j],
        [0.0013 - 0.0009j, -0.0011 + 0.0029j, 0.0079],
    ]
)

Z2 = np.array(
    [
        [0.0069, 0.0004 - 0.0029j, -0.0014 + 0.0014j],
        [0.0004 + 0.0029j, 0.0070, -0.0019 - 0.0002j],
        [-0.0014 - 0.0014j, -0.0019 + 0.0002j, 0.0086],
    ]
)

Z3 = np.array(
    [
        [0.0090, -0.0026 + 0.0006j, 0.0011 - 0.0009j],
        [-0.0026 - 0.0006j, 0.0064, -0.0013 + 0.0018j],
        [0.0011 + 0.0009j, -0.0013 - 0.0018j, 0.0054],
    ]
)

USER_COVS = (H1, H2)
EAVE_COVS = (Z1, Z2, Z3)

# Scenario constants: N0 = 1, epsilon = 0.1, P_T = 12 dB.
NOISE_POWER = 1.0
EPSILON = 0.1
POWER_BUDGET_DB = 12.0


def reference_problem(j: int, diagonal: bool = False) -> WiretapProblem:
    """The bundled scenario with j in {1, 2, 3} eavesdroppers.

    With diagonal=True the covariances are replaced by their diagonal
    approximations (off-diagonal entries zeroed), which routes the solve to
    the per-antenna linear program.
    """
    if j not in (1, 2, 3):
        raise ValueError(f"j must be 1, 2 or 3, got {j}")
    hs = USER_COVS
    zs = EAVE_COVS[:j]
    if diagonal:
        hs = tuple(np.diag(np.diag(m).real).astype(complex) for m in hs)
        zs = tuple(np.diag(np.diag(m).real).astype(complex) for m in zs)
    return WiretapProblem(
        H=hs,
        Z=zs,
        N0=NOISE_POWER,
        epsilon=EPSILON,
        P_T=10.0 ** (POWER_BUDGET_DB / 10.0),
    )
