"""Minimum-time formulas for qubit gates and the physical-unit bridge.

All times are in natural units (hbar = 1) unless a function name says
otherwise.  Energies are measured from the ground state, so every
eigenvalue produced here is nonnegative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .linalg import PLANCK

TWO_PI = 2.0 * math.pi

# SI constants, exact by definition
SPEED_OF_LIGHT = 2.99792458e8  # m/s
PLANCK_SI = 6.62607015e-34  # J s
ELECTRON_VOLT = 1.602176634e-19  # J
HBAR_SI = PLANCK_SI / TWO_PI
# one natural time unit when energies are expressed in eV
NATURAL_TIME_UNIT_S = HBAR_SI / ELECTRON_VOLT


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


def normalize_phase(theta: float) -> float:
    """Map an angle into ``[0, 2*pi)``."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError("phase must be finite")
    r = theta % TWO_PI
    if r >= TWO_PI:  # -tiny % 2pi rounds up to 2pi
        r = 0.0
    return r


@dataclass(frozen=True)
class GatePhase:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_phase(self.theta))

    def __float__(self) -> float:
        return self.theta

    @property
    def reduced(self) -> float:
        """The phase modulo pi."""
        return self.theta - math.pi if self.theta >= math.pi else self.theta

    @property
    def branch(self) -> int:
        """0 for ``[0, pi)``, 1 for ``[pi, 2*pi)``."""
        return int(self.theta >= math.pi)


@dataclass(frozen=True)
class EnergyBudget:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"energy must be positive and finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SpeedLimitReport:
    theta: GatePhase
    energy: EnergyBudget
    tau_analytic: float
    e1: float
    e2: float
    achieved_fidelity: float
    phase_residual: float
    oracle_min_time: Optional[float] = None

    @property
    def margin(self) -> Optional[float]:
        if self.oracle_min_time is None:
            return None
        return self.oracle_min_time / self.tau_analytic - 1.0

    @property
    def oracle_consistent(self) -> Optional[bool]:
        """Whether the oracle time sits in ``[0.99, 1.02] * tau_analytic``."""
        m = self.margin
        if m is None:
            return None
        return -0.01 <= m <= 0.02


def _energy(energy) -> float:
    if isinstance(energy, EnergyBudget):
        return energy.value
    return EnergyBudget(energy).value


def _phase(theta) -> GatePhase:
    return theta if isinstance(theta, GatePhase) else GatePhase(theta)


def orthogonality_time(energy) -> float:
    """Margolus-Levitin time ``h / 4E`` to reach an orthogonal state."""
    return PLANCK / (4.0 * _energy(energy))


def gate_min_time(theta, energy) -> float:
    """Minimum duration of a NOT gate followed by the phase shift ``theta``.

    ``tau = h/(4E) * (1 + 2 (theta mod pi) / pi)``; a sawtooth with period
    pi that jumps back from ``3h/4E`` to ``h/4E`` at multiples of pi.
    """
    ph = _phase(theta)
    return orthogonality_time(energy) * (1.0 + 2.0 * ph.reduced / math.pi)


def eigenvalue_pair(theta, energy) -> tuple[float, float]:
    """Hamiltonian eigenvalues ``(e1, e2)`` realizing the optimal gate.

    Both are nonnegative and average to ``energy``.  ``theta = pi`` belongs
    to the second branch.
    """
    ph = _phase(theta)
    e = _energy(energy)
    th = ph.theta
    if ph.branch == 0:
        den = 2.0 * th + math.pi
        return 2.0 * e * th / den, 2.0 * e * (th + math.pi) / den
    den = 2.0 * th - math.pi
    return 2.0 * e * th / den, 2.0 * e * (th - math.pi) / den


def rotation_min_time(alpha: float, energy) -> float:
    """Minimum time to turn a known state by ``alpha`` (``|<psi(t)|psi(0)>| = cos alpha``)."""
    alpha = float(alpha)
    if not (0.0 <= alpha <= math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2], got {alpha!r}")
    return (2.0 * alpha / math.pi) * orthogonality_time(energy)


def _wavelength_m(wavelength_nm: float) -> float:
    w = float(wavelength_nm)
    if not math.isfinite(w) or w <= 0.0:
        raise DomainError(f"wavelength must be positive, got {wavelength_nm!r}")
    return w * 1e-9


def physical_gate_time(wavelength_nm: float) -> float:
    """Gate time ``lambda / 2c`` in seconds for a resonant transition."""
    return _wavelength_m(wavelength_nm) / (2.0 * SPEED_OF_LIGHT)


def resonant_gap_from_wavelength(wavelength_nm: float) -> float:
    """Transition energy ``hc / lambda`` in eV."""
    return PLANCK_SI * SPEED_OF_LIGHT / _wavelength_m(wavelength_nm) / ELECTRON_VOLT


def natural_time_to_seconds(t: float) -> float:
    """Convert a natural time to seconds, taking the energy unit as 1 eV."""
    return t * NATURAL_TIME_UNIT_S
