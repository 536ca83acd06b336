"""Numerical laboratory for a closed-loop spatial growth equation on the
circle, with positive-cone non-invariance certificates."""

from .certify import (
    CertificateReport,
    DiniEstimate,
    dini_estimate,
    distance_to_cone,
    l2_certificate,
    sup_certificate,
)
from .counterexample import (
    BumpSpec,
    WitnessSpec,
    assemble_witness,
    build_counterexample,
    bump_f0,
    dip_halfwidth,
    middle_piece,
    nonneg_from_witness,
    nonneg_witness,
    scaled_initial,
    solve_quintic,
)
from .grid import (
    Field,
    GridMismatchError,
    TorusGrid,
    inner,
    integrate,
    negative_part,
    norm_l2,
    norm_sup,
    positive_part,
    second_derivative,
    torus_distance,
)
from .model import (
    AdmissibilityError,
    ModelParams,
    PolicyConstants,
    apply_F,
    compute_alpha,
    compute_psi,
    constant_params,
    consumption,
    consumption_closed_form,
    growth_rate,
    policy_constants,
)
from .solver import (
    NegativityEvent,
    NegativityReport,
    NumericalError,
    SimConfig,
    Trajectory,
    detrend,
    negativity_report,
    oracle_solution,
    simulate,
    simulate_sigma_zero,
)
from .spectral import ConvergenceError, EigenPair, principal_eigenpair, semigroup_apply

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "BumpSpec",
    "CertificateReport",
    "ConvergenceError",
    "DiniEstimate",
    "EigenPair",
    "Field",
    "GridMismatchError",
    "ModelParams",
    "NegativityEvent",
    "NegativityReport",
    "NumericalError",
    "PolicyConstants",
    "SimConfig",
    "TorusGrid",
    "Trajectory",
    "WitnessSpec",
    "apply_F",
    "assemble_witness",
    "build_counterexample",
    "bump_f0",
    "compute_alpha",
    "compute_psi",
    "constant_params",
    "consumption",
    "consumption_closed_form",
    "detrend",
    "dini_estimate",
    "dip_halfwidth",
    "distance_to_cone",
    "growth_rate",
    "inner",
    "integrate",
    "l2_certificate",
    "middle_piece",
    "negative_part",
    "negativity_report",
    "nonneg_from_witness",
    "nonneg_witness",
    "norm_l2",
    "norm_sup",
    "oracle_solution",
    "policy_constants",
    "positive_part",
    "principal_eigenpair",
    "scaled_initial",
    "second_derivative",
    "semigroup_apply",
    "simulate",
    "simulate_sigma_zero",
    "solve_quintic",
    "sup_certificate",
    "torus_distance",
]
