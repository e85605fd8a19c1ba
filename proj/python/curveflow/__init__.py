"""Hamiltonian flows of closed space curves."""

from ._curveflow import (
    ArgumentError,
    ConfigError,
    DegenerateCurveError,
    Error,
    InvarianceError,
    UnsupportedVariantError,
    curvature_sq,
    format_scenario,
    h_grad,
    h_value,
    hgrad,
    length,
    make_curve,
    momentum,
    omega,
    run_scenario,
    simulate,
    theta,
    torsion,
    verify,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DegenerateCurveError",
    "Error",
    "InvarianceError",
    "UnsupportedVariantError",
    "curvature_sq",
    "format_scenario",
    "h_grad",
    "h_value",
    "hgrad",
    "length",
    "make_curve",
    "momentum",
    "omega",
    "run_scenario",
    "simulate",
    "theta",
    "torsion",
    "verify",
]
