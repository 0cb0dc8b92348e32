"""Python bindings for genrob.

Thin wrappers over the C++ library: inertial parameters and consistency,
mass/Coriolis/gravity terms of planar and prismatic chains, and the
simulate/certify/verify commands driven by JSON scenario files.
"""

from ._core import (
    Chain,
    ConsistencyResult,
    InertialParams,
    InvalidInput,
    NumericFailure,
    box_params,
    certify,
    check_consistency,
    coriolis,
    gravity,
    h_matrix,
    jacobian,
    lemma5_factorization,
    load_chain,
    load_params,
    mass_matrix,
    planar_chain,
    prismatic_x_chain,
    pseudo_inertia,
    q_block,
    run_command,
    sigma_max,
    simulate,
    skew,
    sphere_params,
    unit_ball_params,
)

__all__ = [name for name in dir() if not name.startswith("_")]
