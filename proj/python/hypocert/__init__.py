"""Hypocoercivity certificates for linearised BGK models on the torus."""

from ._hypocert import (
    UsageError,
    alpha3_1d,
    assemble_D_block,
    basis_change_matrix,
    bgk_P,
    build_L1,
    build_L2,
    certify,
    eigenvalues,
    gauss_hermite,
    hypocoercivity_index,
    lex_index,
    minors,
    modal_generator,
    multi_index,
    optimal_P,
    simulate,
    spectral_gap,
)

__all__ = [
    "UsageError",
    "alpha3_1d",
    "assemble_D_block",
    "basis_change_matrix",
    "bgk_P",
    "build_L1",
    "build_L2",
    "certify",
    "eigenvalues",
    "gauss_hermite",
    "hypocoercivity_index",
    "lex_index",
    "minors",
    "modal_generator",
    "multi_index",
    "optimal_P",
    "simulate",
    "spectral_gap",
]
