"""Numerical toolkit for simple zeros of degree-two L-functions."""

from lzero._core import (  # noqa: F401
    G,
    H,
    Delta,
    L,
    Lambda,
    additive_twist_Lambda,
    argument_count,
    density_bound_exponents,
    density_c,
    density_experiment,
    explicit_formula_residual,
    fe_residual,
    hardy_Z,
    headline_exponent,
    kappa_threshold,
    lambda_coeff,
    load_registry,
    root_number,
    scan_zeros,
    set_cache_dir,
    set_coefficient_caps,
    twist_distinctness,
    vandermonde_weights,
)

__all__ = [
    "G",
    "H",
    "Delta",
    "L",
    "Lambda",
    "additive_twist_Lambda",
    "argument_count",
    "density_bound_exponents",
    "density_c",
    "density_experiment",
    "explicit_formula_residual",
    "fe_residual",
    "hardy_Z",
    "headline_exponent",
    "kappa_threshold",
    "lambda_coeff",
    "load_registry",
    "root_number",
    "scan_zeros",
    "set_cache_dir",
    "set_coefficient_caps",
    "twist_distinctness",
    "vandermonde_weights",
]
