"""Stable-equilibrium state thermodynamics of discrete-level systems."""

from ._core import (
    SesError,
    Spectrum,
    State,
    beta_of_energy,
    build_box,
    build_finite,
    build_oscillator,
    canonical_state,
    compose,
    conduction_sigma,
    equilibrium_split,
    heat_allowed,
    ideal_gas_partitioning,
    max_work_interposed,
    run_cli,
    ses_curve,
    ses_energy_of_entropy,
    ses_entropy_of_energy,
    thermal_properties,
    transfer_bounds,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
