"""Scalar thermodynamic primitives for a harmonic-oscillator working fluid.

Natural units hbar = k_B = 1 throughout, so frequencies and temperatures are
both energies and occupations are dimensionless mean quantum numbers. The
zero-temperature and zero-occupation cases are exact fixed points handled by
branching, never by evaluating a limit, so they stay computable (and exact)
in the purely mechanical T1 = T2 = 0 regime.
"""

from __future__ import annotations

import math

# exp(omega/T) overflows a double just above this; beyond it the occupation
# is indistinguishable from exp(-omega/T) anyway.
_EXP_OVERFLOW = 709.0


def _check_frequency(omega: float) -> float:
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0.0:
        raise ValueError(f"frequency must be a positive finite number, got {omega!r}")
    return omega


def _check_temperature(temperature: float) -> float:
    temperature = float(temperature)
    if not math.isfinite(temperature) or temperature < 0.0:
        raise ValueError(
            f"temperature must be a non-negative finite number, got {temperature!r}"
        )
    return temperature


def _check_occupation(n: float, name: str = "occupation") -> float:
    n = float(n)
    if not math.isfinite(n) or n < 0.0:
        raise ValueError(f"{name} must be a non-negative finite number, got {n!r}")
    return n


def occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(omega/T) - 1) of a thermal oscillator.

    Returns exactly 0 at T = 0.
    """
    omega = _check_frequency(omega)
    temperature = _check_temperature(temperature)
    if temperature == 0.0:
        return 0.0
    x = omega / temperature
    if x > _EXP_OVERFLOW:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def invert_occupation(omega: float, n: float) -> float:
    """Temperature at which a thermal oscillator of frequency omega holds n quanta.

    Exact inverse of :func:`occupation`: omega / ln(1 + 1/n), with the empty
    oscillator n = 0 mapping back to temperature 0.
    """
    omega = _check_frequency(omega)
    n = _check_occupation(n)
    if n == 0.0:
        return 0.0
    return omega / math.log1p(1.0 / n)


def oscillator_energy(omega: float, n: float) -> float:
    """Mean energy omega * (n + 1/2) of an oscillator holding n quanta."""
    omega = _check_frequency(omega)
    n = _check_occupation(n)
    return omega * (n + 0.5)


def fictitious_temperature(omega2: float, n2: float, delta_n: float) -> float:
    """Excitation parameter Theta of a working fluid holding n2 + delta_n quanta.

    Theta is the temperature a thermal oscillator at omega2 would need to
    match that excitation. For a non-passive working fluid it parameterises
    the excitation only, not the state; it exceeds the real bath temperature
    whenever delta_n > 0. delta_n may be negative (second-kind baths) as long
    as the total excitation stays non-negative.
    """
    omega2 = _check_frequency(omega2)
    n2 = _check_occupation(n2, "n2")
    delta_n = float(delta_n)
    if not math.isfinite(delta_n):
        raise ValueError(f"delta_n must be finite, got {delta_n!r}")
    total = n2 + delta_n
    if total < 0.0:
        raise ValueError(f"n2 + delta_n must be non-negative, got {total!r}")
    return invert_occupation(omega2, total)


def thermal_entropy(n: float) -> float:
    """Von Neumann entropy (n+1) ln(n+1) - n ln(n) of a thermal oscillator state."""
    n = _check_occupation(n)
    if n == 0.0:
        return 0.0
    return (n + 1.0) * math.log1p(n) - n * math.log(n)
