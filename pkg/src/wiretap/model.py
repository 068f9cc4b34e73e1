"""Wiretap problem instances and outage-to-quadratic-form threshold conversion.

A problem instance bundles the channel statistics (user covariances H_k,
eavesdropper covariances Z_j), the noise power, the total power budget and the
outage tolerance. Given a target (R_D, R_s) pair, the K + J per-link outage
constraints reduce to deterministic quadratic-form constraints

    w* H_k w >= a      for every user k,
    w* Z_j w <= b      for every eavesdropper j,

because |h_k w|^2 and |z_j w|^2 are exponentially distributed. This module
computes (a, b) for Gaussian inputs and for finite-alphabet inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_PSD_TOL,
    LinalgError,
    as_vector,
    hermitian_eig,
    hermitian_part,
)


class ModelError(ValueError):
    """Raised for inputs that violate a documented precondition."""


class RateUnachievableError(ModelError):
    """Requested rate is at or above what the input alphabet can carry."""


def _ingest_covariances(mats, n: int, label: str) -> tuple[np.ndarray, ...]:
    out = []
    for i, m in enumerate(mats):
        m = hermitian_part(m)  # JSON round-trips may break exact symmetry
        if m.shape != (n, n):
            raise ModelError(f"{label}[{i}] has shape {m.shape}, expected ({n}, {n})")
        m.flags.writeable = False
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class WiretapProblem:
    """Instance data: K users, J non-colluding eavesdroppers, N transmit antennas.

    Covariances are symmetrized on ingestion and stored read-only. Instances
    are immutable and may be shared freely across worker threads.
    """

    H: tuple[np.ndarray, ...]  # K user channel covariances, N x N Hermitian PSD
    Z: tuple[np.ndarray, ...]  # J eavesdropper channel covariances
    N0: float = 1.0            # noise power, linear
    epsilon: float = 0.1       # outage tolerance, in (0, 1)
    P_T: float = 1.0           # total transmit power budget, linear

    def __post_init__(self):
        if len(self.H) < 1:
            raise ModelError("at least one user covariance is required")
        n = np.asarray(self.H[0]).shape[0]
        object.__setattr__(self, "H", _ingest_covariances(self.H, n, "H"))
        object.__setattr__(self, "Z", _ingest_covariances(self.Z, n, "Z"))
        object.__setattr__(self, "N0", float(self.N0))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "P_T", float(self.P_T))

    @property
    def N(self) -> int:
        return self.H[0].shape[0]

    @property
    def K(self) -> int:
        return len(self.H)

    @property
    def J(self) -> int:
        return len(self.Z)


@dataclass(frozen=True)
class RatePair:
    """Target code rate R_D and secrecy rate R_s, bits per channel use."""

    R_D: float
    R_s: float

    def __post_init__(self):
        if not (self.R_D >= self.R_s >= 0.0):
            raise ModelError(f"need R_D >= R_s >= 0, got R_D={self.R_D}, R_s={self.R_s}")

    @property
    def R_gap(self) -> float:
        """Rate sacrificed to confuse eavesdroppers."""
        return self.R_D - self.R_s


@dataclass(frozen=True)
class ConstraintThresholds:
    """Deterministic thresholds equivalent to the per-link outage constraints.

    user_power_target / eave_power_target are the raw received-power
    thresholds ((2^R - 1) N0, or I^{-1}(R) N0 for finite alphabets) before the
    exponential-tail inversion; they are what the perfect-CSI constraint swap
    and the Monte Carlo per-link estimators need.
    """

    a: float               # floor on w* H_k w
    b: float               # ceiling on w* Z_j w
    per_link_prob: float   # (1 - epsilon)^(1/(K+J))
    user_power_target: float
    eave_power_target: float


@dataclass(frozen=True)
class CsiMode:
    """Statistical CSI (default) or perfectly known user channels.

    With perfect user CSI the user outage constraints collapse to
    deterministic floors Tr(W h_k* h_k) >= user_power_target and the
    eavesdropper tail exponent tightens from 1/(K+J) to 1/J.
    """

    user_channels: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if self.user_channels is not None:
            vecs = tuple(as_vector(h) for h in self.user_channels)
            for v in vecs:
                v.flags.writeable = False
            object.__setattr__(self, "user_channels", vecs)

    @property
    def is_statistical(self) -> bool:
        return self.user_channels is None


STATISTICAL = CsiMode()


def perfect_users(channels) -> CsiMode:
    return CsiMode(user_channels=tuple(channels))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def validate_problem(p: WiretapProblem, psd_tol: float = DEFAULT_PSD_TOL) -> ValidationReport:
    """Check every instance invariant; collects violations instead of raising."""
    v: list[str] = []
    if p.K < 1:
        v.append("at least one user is required (K >= 1)")
    if p.N < 1:
        v.append("at least one antenna is required (N >= 1)")
    if not (0.0 < p.epsilon < 1.0):
        v.append(f"epsilon out of range (0, 1): {p.epsilon}")
    if not p.P_T > 0.0:
        v.append(f"power budget must be positive: {p.P_T}")
    if not p.N0 > 0.0:
        v.append(f"noise power must be positive: {p.N0}")
    for label, mats in (("H", p.H), ("Z", p.Z)):
        for i, m in enumerate(mats):
            try:
                vals, _ = hermitian_eig(m)
            except LinalgError as exc:
                v.append(f"{label}[{i}]: {exc}")
                continue
            lam_max = float(vals[-1])
            if float(vals[0]) < -psd_tol * max(1.0, lam_max):
                v.append(f"{label}[{i}]: covariance not PSD (min eigenvalue {vals[0]:.3e})")
    return ValidationReport(ok=not v, violations=tuple(v))


def _tail_denominators(p: WiretapProblem) -> tuple[float, float, float]:
    """per-link probability and the two exponential-tail log factors."""
    links = p.K + p.J
    if links < 1:
        raise ModelError("K + J must be at least 1")
    per_link = (1.0 - p.epsilon) ** (1.0 / links)
    # Pr{Exp(m) >= c} >= per_link  <=>  m >= c / denom_user
    denom_user = -math.log(1.0 - p.epsilon) / links
    # Pr{Exp(m) <= c} >= per_link  <=>  m <= c / denom_eave
    denom_eave = -math.log(1.0 - per_link)
    return per_link, denom_user, denom_eave


def thresholds_gaussian(p: WiretapProblem, r: RatePair) -> ConstraintThresholds:
    """Thresholds (a, b) for a circular Gaussian input codebook.

    a = (2^R_D - 1) N0 / (-ln (1-eps)^(1/(K+J)))
    b = (2^(R_D - R_s) - 1) N0 / (-ln (1 - (1-eps)^(1/(K+J))))
    """
    per_link, denom_user, denom_eave = _tail_denominators(p)
    c_user = (2.0 ** r.R_D - 1.0) * p.N0
    c_eave = (2.0 ** r.R_gap - 1.0) * p.N0
    return ConstraintThresholds(
        a=c_user / denom_user,
        b=c_eave / denom_eave,
        per_link_prob=per_link,
        user_power_target=c_user,
        eave_power_target=c_eave,
    )


def invert_monotone_rate(mi, rate: float, *, tol: float = 1e-8) -> float:
    """Invert a strictly increasing rate function by doubling + bisection.

    Works for any callable rho -> bits with mi(0) = 0. Raises
    RateUnachievableError if no rho <= 1e9 reaches the requested rate.
    """
    if rate < 0.0:
        raise ModelError(f"rate must be non-negative: {rate}")
    if rate == 0.0:
        return 0.0
    hi = 1.0
    while mi(hi) <= rate:
        hi *= 2.0
        if hi > 1e9:
            raise RateUnachievableError(
                f"rate {rate} not reached by the input model within numeric range"
            )
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mi(mid) < rate:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi) and abs(mi(hi) - rate) <= tol:
            break
    return hi


def thresholds_finite_alphabet(p: WiretapProblem, r: RatePair, mi) -> ConstraintThresholds:
    """Thresholds with 2^x - 1 replaced by the inverse mutual information I^{-1}(x).

    ``mi`` is a callable rho -> bits; an MiEvaluator (which also exposes
    ``inverse`` and ``max_rate``) is used directly. Rates at or above the
    alphabet capacity log2 M are rejected.
    """
    per_link, denom_user, denom_eave = _tail_denominators(p)
    max_rate = getattr(mi, "max_rate", None)
    if max_rate is not None and r.R_D >= max_rate:
        raise RateUnachievableError(
            f"R_D = {r.R_D} is unachievable by an alphabet with capacity {max_rate}"
        )
    inverse = getattr(mi, "inverse", None)
    if inverse is None:
        inverse = lambda rate: invert_monotone_rate(mi, rate)  # noqa: E731
    c_user = inverse(r.R_D) * p.N0
    c_eave = inverse(r.R_gap) * p.N0
    return ConstraintThresholds(
        a=c_user / denom_user,
        b=c_eave / denom_eave,
        per_link_prob=per_link,
        user_power_target=c_user,
        eave_power_target=c_eave,
    )
