"""Inverse scattering solver for the derivative NLS equation."""

from ._core import (
    InputError,
    NumericError,
    Potential,
    SpectralPair,
    direct_map,
    evolve,
    gauge_forward,
    gauge_inverse,
    inverse_map,
    step_dnls2,
)

__all__ = [
    "InputError",
    "NumericError",
    "Potential",
    "SpectralPair",
    "direct_map",
    "evolve",
    "gauge_forward",
    "gauge_inverse",
    "inverse_map",
    "step_dnls2",
]
