"""Minimum-power transmit beamforming and achievable (code rate, secrecy rate)
regions for slow-fading MISO wiretap channels under statistical CSI."""

from .kkt import KktReport, RankBoundReport, check_kkt, rank_bound_check
from .mi import Alphabet, MiEvaluator, bpsk, load_alphabet, psk8, qam16, qpsk
from .model import (
    STATISTICAL,
    ConstraintThresholds,
    CsiMode,
    ModelError,
    RatePair,
    RateUnachievableError,
    ValidationReport,
    WiretapProblem,
    perfect_users,
    thresholds_finite_alphabet,
    thresholds_gaussian,
    validate_problem,
)
from .montecarlo import (
    ChannelSample,
    ExponentialityReport,
    OutageEstimate,
    estimate_individual_probs,
    estimate_non_outage,
    exponentiality_check,
    sample_channels,
)
from .diag_lp import PowerAllocation, allocation_to_beamformer, solve_diagonal
from .sdp import (
    BeamformerSolution,
    DualVariables,
    InfeasibilityCertificate,
    SdpSolution,
    SolverOptions,
    extract_principal_direction,
    power_rescale,
    solve_general,
    solve_rank_relaxed,
)
from .sweep import SweepResult, SweepRow, sweep_region

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
