"""Homogeneous caloric polynomials: exact construction, verification and nodal-domain counting."""

from ._core import (
    Polynomial,
    basic_hcp,
    basis,
    bounds_report,
    chain_check,
    eigen_check,
    export_nodal_pointcloud,
    fixture,
    fixture_ids,
    harmonic_2d,
    heat_apply,
    hermite,
    high_dim,
    is_caloric,
    lewy_2mod4,
    nodal_count,
    odd_construction,
    parabola_factors,
    parabolic_degree,
    parse_poly,
    polar_chambers,
    product_hcp,
    product_lower,
    scalar_multiple,
    scan_epsilon,
    single_linkage_clusters,
    slice_count,
    weighted_inner_product,
    zero_mod4,
)

__all__ = [name for name in dir() if not name.startswith("_")]
