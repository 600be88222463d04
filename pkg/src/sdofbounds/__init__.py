"""Secure degrees-of-freedom bounds for an active-RIS-assisted two-user MIMO
wiretap interference channel.

``lower_bound`` solves the elimination integer program, ``scheme`` builds and
verifies the matching beamformers, ``upper_bound`` minimizes cascaded-channel
ranks, ``cli`` runs the sweeps.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateChannels,
    DimensionMismatch,
    IdentityViolation,
    InfeasiblePlan,
    InvalidConfig,
    NegativeRisBudget,
    NonPositiveAntennaCount,
    PlanOutOfBounds,
    RankMismatch,
    SdofError,
    SingularSystem,
    SolverDiverged,
)
from .lower_bound import (  # noqa: E402
    EliminationPlan,
    LowerBoundResult,
    RankProfile,
    benchmark_prior,
    closed_form_symmetric,
    balancing_feasible,
    solve_p0,
    solve_p0_bnb,
    solve_p0_no_eve,
)
from .model import AntennaConfig, ChannelSet, cascade, synthesize_channels  # noqa: E402
from .scheme import certify, verify_solution  # noqa: E402
from .upper_bound import (  # noqa: E402
    RankMinParams,
    RankMinResult,
    UpperBoundResult,
    ic_upper_case_terms,
    min_rank,
    min_rank_constructive,
    min_rank_nuclear,
    upper_bound,
)
