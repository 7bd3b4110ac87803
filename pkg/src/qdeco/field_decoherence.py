"""Closed-form decoherence of macroscopic electric-field superpositions.

A superposition of two opposite field configurations, monitored by charged
matter over a volume V, keeps only an exponentially small interference term:
the off-diagonal element carries the factor exp(-V e^2 E^2 / (512 pi m)).
Inverting that factor at a fixed suppression threshold gives the coherence
length; the companion thermal model reproduces the photon-scattering
localization of free electrons (0.1 cm after one second, falling as
1/sqrt(t)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .units import (
    CONSTANTS,
    ELECTRIC_FIELD,
    LENGTH,
    NATURAL,
    TIME,
    VOLUME,
    PhysicalQuantity,
    si_length_cm,
    to_natural,
    to_si,
)

__all__ = [
    "ThermalModel",
    "decoherence_exponent",
    "decoherence_factor",
    "offdiagonal_element",
    "coherence_length",
    "validity_time",
    "thermal_coherence_length",
    "DEFAULT_THERMAL_MODEL",
]

_SUPPRESSION_DENOMINATOR = 512.0 * math.pi  # fixed by the underlying trace


@dataclass(frozen=True)
class ThermalModel:
    """Localization rate for free electrons in thermal radiation.

    ``localization_rate`` is Lambda in cm^-2 s^-1; the default is calibrated
    so the coherence length after one second is exactly 0.1 cm at the 300 K
    reference point.  Temperature enters only as a label.
    """

    localization_rate: float = 100.0
    reference_temperature_k: float = 300.0

    def __post_init__(self):
        if self.localization_rate <= 0:
            raise ValueError("localization rate must be positive")


DEFAULT_THERMAL_MODEL = ThermalModel()


def decoherence_exponent(volume, efield) -> float:
    """Positive exponent V e^2 E^2 / (512 pi m) in natural units."""
    v = to_natural(volume, VOLUME)
    e_field = to_natural(efield, ELECTRIC_FIELD)
    if v < 0:
        raise ValueError("volume must be nonnegative")
    c = CONSTANTS
    return v * c.e**2 * e_field**2 / (_SUPPRESSION_DENOMINATOR * c.m_electron)


def decoherence_factor(volume, efield) -> float:
    """Suppression of the field interference term, in (0, 1].

    Monotone nonincreasing in the volume and in the squared field; underflows
    to 0.0 for macroscopic arguments.
    """
    return math.exp(-decoherence_exponent(volume, efield))


def offdiagonal_element(volume, efield, vector_potential: float) -> complex:
    """Off-diagonal element exp(2i V A E) * suppression factor.

    The vector-potential amplitude is accepted in natural units only; its sole
    effect is the phase 2 V A E shared by the two interfering branches.
    """
    v = to_natural(volume, VOLUME)
    e_field = to_natural(efield, ELECTRIC_FIELD)
    a = float(vector_potential)
    phase = 2.0 * v * a * e_field
    return cmath.exp(1j * phase - decoherence_exponent(volume, efield))


def coherence_length(efield, threshold_exponent: float = 1.0) -> PhysicalQuantity:
    """Edge length of the cube over which the suppression reaches the threshold.

    Solves V e^2 E^2 / (512 pi m) = threshold for V = L^3; the cube root makes
    the answer insensitive to the exact threshold choice.  Returned in natural
    units; convert to cm on request.
    """
    e_field = to_natural(efield, ELECTRIC_FIELD)
    if e_field == 0:
        raise ValueError("coherence length diverges for zero field")
    if threshold_exponent <= 0:
        raise ValueError("threshold exponent must be positive")
    c = CONSTANTS
    l_cubed = _SUPPRESSION_DENOMINATOR * c.m_electron * threshold_exponent / (
        c.e**2 * e_field**2
    )
    return PhysicalQuantity(l_cubed ** (1.0 / 3.0), LENGTH, NATURAL)


def validity_time(efield) -> PhysicalQuantity:
    """Time m/(eE) beyond which the closed-form suppression applies."""
    e_field = to_natural(efield, ELECTRIC_FIELD)
    if e_field == 0:
        raise ValueError("validity time diverges for zero field")
    c = CONSTANTS
    return PhysicalQuantity(c.m_electron / (c.e * abs(e_field)), TIME, NATURAL)


def thermal_coherence_length(
    t, model: ThermalModel = DEFAULT_THERMAL_MODEL
) -> PhysicalQuantity:
    """Electron coherence length 1/sqrt(Lambda t) in thermal radiation.

    Bare floats are taken as seconds; the result is an SI length in cm.
    """
    t_s = to_si(t, TIME)
    if t_s <= 0:
        raise ValueError("time must be positive")
    return si_length_cm(1.0 / math.sqrt(model.localization_rate * t_s))
