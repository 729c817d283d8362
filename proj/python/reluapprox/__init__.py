"""Explicit deep ReLU network constructions and their verification."""

from ._core import (
    DataError,
    EnvelopeError,
    ErrorReport,
    FeasibilityError,
    FormatError,
    Network,
    build_analytic,
    build_bandlimited,
    build_cheb_series,
    build_chebyshev,
    build_mul2,
    build_muld,
    build_poly,
    build_sawtooth,
    build_square,
    build_target,
    cheb_coeffs,
    clenshaw_eval,
    compose,
    csv_header,
    exp_kernel_bound,
    linear_combine,
    parallel,
    quadrature_reference,
    run_sweep,
    runge_params,
    truncation_degree,
    verify_target,
)

__all__ = [name for name in dir() if not name.startswith("_")]
