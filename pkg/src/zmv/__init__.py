"""Numerical verification of the Mellin-transform proof of the zeta functional equation."""

__version__ = "0.1.0"

from zmv.errors import BoundExceeded, DivisionHazard, NonConvergence, PoleError
from zmv.fracfourier import (
    PartialSumSpec,
    fourier_partial_sum,
    partial_sum_sup,
    rho,
    telescoped,
)
from zmv.funceq import (
    GridSpec,
    Step,
    TolerancePolicy,
    VerificationRecord,
    chi,
    fe_residual,
    mellin_sin_closed,
    series_rhs_partial,
    verify_chain,
)
from zmv.mellin_engine import (
    QuadratureOutcome,
    TailStrategy,
    TruncationConfig,
    mellin_rho,
    mellin_sin_numeric,
    mellin_telescoped,
)
from zmv.specfun import OracleConfig, eta, gamma, pow_real_complex, zeta, zeta_via_eta

__all__ = [
    "BoundExceeded", "DivisionHazard", "NonConvergence", "PoleError",
    "PartialSumSpec", "fourier_partial_sum", "partial_sum_sup", "rho", "telescoped",
    "GridSpec", "Step", "TolerancePolicy", "VerificationRecord", "chi", "fe_residual",
    "mellin_sin_closed", "series_rhs_partial", "verify_chain",
    "QuadratureOutcome", "TailStrategy", "TruncationConfig", "mellin_rho",
    "mellin_sin_numeric", "mellin_telescoped",
    "OracleConfig", "eta", "gamma", "pow_real_complex", "zeta", "zeta_via_eta",
]
