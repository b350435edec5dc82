"""Python bindings for the covswe cubed-sphere shallow water solver."""

from ._covswe import (
    EARTH_RADIUS,
    GRAVITY,
    ROTATION_RATE,
    AdmissibilityError,
    ConfigError,
    CovsweError,
    InitializationError,
    InvalidDegreeError,
    NonpositiveDepthError,
    Simulation,
    convergence_study,
    ec_flux,
    entropy,
    entropy_hessian,
    entropy_variables,
    es_flux,
    flux_potential,
    git_blob_hash,
    lgl_nodes_weights,
    nominal_resolution,
    run,
    sbp_operators,
)

__all__ = [
    "EARTH_RADIUS",
    "GRAVITY",
    "ROTATION_RATE",
    "AdmissibilityError",
    "ConfigError",
    "CovsweError",
    "InitializationError",
    "InvalidDegreeError",
    "NonpositiveDepthError",
    "Simulation",
    "convergence_study",
    "ec_flux",
    "entropy",
    "entropy_hessian",
    "entropy_variables",
    "es_flux",
    "flux_potential",
    "git_blob_hash",
    "lgl_nodes_weights",
    "nominal_resolution",
    "run",
    "sbp_operators",
]
