"""Time-optimal constant Hamiltonians for the phase-shifted NOT gate and
for rotating a known state.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .limits import (
    DomainError,
    EnergyBudget,
    GatePhase,
    eigenvalue_pair,
    gate_min_time,
    rotation_min_time,
)
from .linalg import HBAR, HermitianOperator2, QubitState, UnitaryOperator2

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GateSpec:
    theta: GatePhase
    energy: EnergyBudget

    @classmethod
    def make(cls, theta: float, energy: float) -> "GateSpec":
        return cls(GatePhase(theta), EnergyBudget(energy))


@dataclass(frozen=True)
class UnitaryFamilyParams:
    """Eigenvalues ``e1, e2`` and frame angles ``phi1, phi2`` of a qubit Hamiltonian."""

    e1: float
    e2: float
    phi1: float
    phi2: float

    def __post_init__(self):
        for name in ("e1", "e2", "phi1", "phi2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError("family parameters must be finite")
            object.__setattr__(self, name, v)
        if self.e1 < 0.0 or self.e2 < 0.0:
            raise DomainError("eigenvalues must be nonnegative")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.e1, self.e2, self.phi1, self.phi2)


@dataclass(frozen=True)
class RotationSpec:
    alpha: float
    energy: EnergyBudget
    initial_state: QubitState

    def __post_init__(self):
        if not (0.0 <= self.alpha <= math.pi / 2):
            raise DomainError(f"alpha must lie in [0, pi/2], got {self.alpha!r}")


def general_unitary(params: UnitaryFamilyParams, t: float) -> UnitaryOperator2:
    """The three-parameter family of evolution operators, entry by entry."""
    e1, e2, phi1, phi2 = params.as_tuple()
    x = (e2 - e1) * t / (2.0 * HBAR)
    glob = cmath.exp(-1j * (e1 + e2) * t / (2.0 * HBAR))
    c2, s2 = math.cos(phi1) ** 2, math.sin(phi1) ** 2
    sc = math.sin(phi1) * math.cos(phi1)
    ep, em = cmath.exp(1j * x), cmath.exp(-1j * x)
    off = 2j * sc * math.sin(x)
    u = np.array(
        [
            [c2 * ep + s2 * em, cmath.exp(1j * phi2) * off],
            [cmath.exp(-1j * phi2) * off, c2 * em + s2 * ep],
        ],
        dtype=complex,
    )
    return UnitaryOperator2(glob * u)


def family_frame(phi1: float, phi2: float) -> np.ndarray:
    """Unitary whose columns are the eigenvectors for ``e1`` and ``e2``."""
    c, s = math.cos(phi1), math.sin(phi1)
    return np.array(
        [[c, -cmath.exp(1j * phi2) * s], [cmath.exp(-1j * phi2) * s, c]],
        dtype=complex,
    )


def family_hamiltonian(params: UnitaryFamilyParams) -> HermitianOperator2:
    """Generator ``H`` with ``general_unitary(params, t) == exp(-iHt)``."""
    v = family_frame(params.phi1, params.phi2)
    h = v @ np.diag([params.e1, params.e2]).astype(complex) @ v.conj().T
    # exact symmetrization of rounding noise only
    h = 0.5 * (h + h.conj().T)
    return HermitianOperator2(h)


def family_params(h: HermitianOperator2) -> UnitaryFamilyParams:
    """Inverse of :func:`family_hamiltonian` with the convention ``e2 >= e1``.

    ``phi1`` is returned in ``[0, pi/2]`` and ``phi2`` in ``[0, 2*pi)``.
    """
    m = h.matrix
    mean = 0.5 * float((m[0, 0] + m[1, 1]).real)
    hx, hy = float(m[0, 1].real), float(-m[0, 1].imag)
    hz = 0.5 * float((m[0, 0] - m[1, 1]).real)
    half_gap = math.sqrt(hx * hx + hy * hy + hz * hz)
    e1, e2 = mean - half_gap, mean + half_gap
    if -1e-12 < e1 < 0.0:  # rounding below a zero ground level
        e1 = 0.0
    if half_gap == 0.0:
        return UnitaryFamilyParams(e1, e2, 0.0, 0.0)
    # H = mean*I - half_gap * n.sigma with n = (sin2p1 cos p2, -sin2p1 sin p2, cos2p1)
    nx, ny, nz = -hx / half_gap, -hy / half_gap, -hz / half_gap
    nxy = math.hypot(nx, ny)
    phi1 = 0.5 * math.atan2(nxy, nz)
    phi2 = (-math.atan2(ny, nx)) % TWO_PI if nxy > 0.0 else 0.0
    if phi2 >= TWO_PI:
        phi2 = 0.0
    return UnitaryFamilyParams(e1, e2, phi1, phi2)


def gate_hamiltonian(e1: float, e2: float) -> HermitianOperator2:
    """``(e1+e2)/2 * I + (e1-e2)/2 * sigma_x``."""
    return HermitianOperator2.from_pauli(0.5 * (e1 + e2), cx=0.5 * (e1 - e2))


def synthesize_gate(spec: GateSpec) -> tuple[HermitianOperator2, float]:
    """Optimal Hamiltonian and duration for the NOT gate with phase ``theta``."""
    e1, e2 = eigenvalue_pair(spec.theta, spec.energy)
    return gate_hamiltonian(e1, e2), gate_min_time(spec.theta, spec.energy)


def synthesize_rotation(spec: RotationSpec) -> tuple[HermitianOperator2, float]:
    """Hamiltonian with spectrum ``{0, 2E}`` holding the initial state in an
    equal superposition of its eigenvectors, plus the rotation time."""
    e = spec.energy.value
    psi = spec.initial_state.vector
    perp = spec.initial_state.orthogonal().vector
    v0 = (psi + perp) / math.sqrt(2.0)
    v1 = (psi - perp) / math.sqrt(2.0)
    lead = v0[0] if abs(v0[0]) > 1e-300 else v0[1]
    ph = cmath.exp(-1j * cmath.phase(lead))
    v0, v1 = v0 * ph, v1 * ph
    h = 0.0 * np.outer(v0, v0.conj()) + 2.0 * e * np.outer(v1, v1.conj())
    h = 0.5 * (h + h.conj().T)
    return HermitianOperator2(h), rotation_min_time(spec.alpha, spec.energy)


def family_hamiltonian_entries(e1, e2, phi1, phi2):
    """Vectorized :func:`family_hamiltonian`: returns ``(H00, H11, H01)`` arrays."""
    e1, e2 = np.asarray(e1, dtype=float), np.asarray(e2, dtype=float)
    c, s = np.cos(phi1), np.sin(phi1)
    h00 = c * c * e1 + s * s * e2
    h11 = s * s * e1 + c * c * e2
    h01 = c * s * np.exp(1j * np.asarray(phi2)) * (e1 - e2)
    return h00, h11, h01
