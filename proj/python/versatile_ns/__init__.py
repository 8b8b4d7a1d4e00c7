"""Python bindings for the versatile-ns Navier-Stokes solver."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DiscreteField,
    FunctionSpace,
    NonlinearDivergence,
    SolverError,
    Topology,
    convection_matrix,
    default_eta,
    divergence_matrix,
    eval_kernel_field,
    format_error_table,
    function_space,
    interpolate,
    jump_seminorm,
    kinetic_energy,
    mass_matrix,
    max_cellwise_divergence,
    observed_order,
    structured_mesh,
    sym_triple_norm,
    viscous_matrix,
    write_field_output,
)


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def config(cfg=None):
    """Validated config (dict in, dict out) with defaults filled in."""
    return _json.loads(_core.normalize_config(_text(cfg)))


def run_case(cfg=None):
    """Run one case; returns errors, final fields and per-step diagnostics."""
    return _core.run_case(_text(cfg))


def run_convergence(cfg=None):
    """One run per nx in cfg["nx_list"]; returns table rows as dicts."""
    return _core.run_convergence(_text(cfg))


def verify():
    """Identity, kernel, coercivity and norm checks as a list of dicts."""
    return _core.verify()


__all__ = [
    "ConfigError",
    "DiscreteField",
    "FunctionSpace",
    "NonlinearDivergence",
    "SolverError",
    "Topology",
    "config",
    "convection_matrix",
    "default_eta",
    "divergence_matrix",
    "eval_kernel_field",
    "format_error_table",
    "function_space",
    "interpolate",
    "jump_seminorm",
    "kinetic_energy",
    "mass_matrix",
    "max_cellwise_divergence",
    "observed_order",
    "run_case",
    "run_convergence",
    "structured_mesh",
    "sym_triple_norm",
    "verify",
    "viscous_matrix",
    "write_field_output",
]
