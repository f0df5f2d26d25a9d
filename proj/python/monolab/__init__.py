"""Numerical checks for singular monopoles on R x C.

Thin Python layer over the C++ core: model constructors, residual checks,
scattering, classification of singularities and the batch report runner.
"""

from ._core import (
    ConfigError,
    Error,
    Model,
    ModelDomainError,
    NumericalError,
    asymptotics_check,
    bogomolny_residual,
    classify_dirac,
    condition_d,
    constant_gauge,
    counterexample_model,
    default_radii,
    dirac_model,
    direct_sum,
    dual,
    extract_charges,
    geometric_radii,
    instanton_residual,
    metric_twist,
    run,
    scatter,
    scattering_pole_orders,
    sup_higgs_norm,
    zoo_document,
)

__all__ = [
    "ConfigError",
    "Error",
    "Model",
    "ModelDomainError",
    "NumericalError",
    "asymptotics_check",
    "bogomolny_residual",
    "classify_dirac",
    "condition_d",
    "constant_gauge",
    "counterexample_model",
    "default_radii",
    "dirac_model",
    "direct_sum",
    "dual",
    "extract_charges",
    "geometric_radii",
    "instanton_residual",
    "metric_twist",
    "run",
    "scatter",
    "scattering_pole_orders",
    "sup_higgs_norm",
    "zoo_document",
]
