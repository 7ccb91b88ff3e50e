"""Closed-form complex 2x2 linear algebra for single-qubit dynamics.

Natural units are used throughout: hbar = 1, so Planck's constant is 2*pi.
Matrices are plain ``numpy`` arrays of shape (2, 2) and dtype complex128,
wrapped in light validating containers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

HBAR = 1.0
PLANCK = 2.0 * math.pi * HBAR

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
NORM_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


def _as_matrix(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class QubitState:
    """Normalized qubit state ``a|0> + b|1>``.

    ``|0>`` is the psi_2(0) slot and ``|1>`` the psi_1(0) slot.
    """

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if not all(math.isfinite(x) for x in (a.real, a.imag, b.real, b.imag)):
            raise ValueError("state amplitudes must be finite")
        norm2 = abs(a) ** 2 + abs(b) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|a|^2+|b|^2 = {norm2!r})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "QubitState":
        norm = math.hypot(abs(a), abs(b))
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(complex(a) / norm, complex(b) / norm)

    @classmethod
    def from_vector(cls, v) -> "QubitState":
        return cls(complex(v[0]), complex(v[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    def orthogonal(self) -> "QubitState":
        """The state orthogonal to this one, ``(-b*, a*)``."""
        return QubitState(-self.b.conjugate(), self.a.conjugate())


# psi_2(0) = (1, 0) and psi_1(0) = (0, 1)
PSI2 = QubitState(1.0, 0.0)
PSI1 = QubitState(0.0, 1.0)


@dataclass(frozen=True, eq=False)
class HermitianOperator2:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        residual = float(np.max(np.abs(m - m.conj().T)))
        if residual > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (residual {residual:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pauli(cls, c0: float, cx: float = 0.0, cy: float = 0.0, cz: float = 0.0):
        """Build ``c0*I + cx*X + cy*Y + cz*Z``."""
        return cls(c0 * IDENTITY + cx * SIGMA_X + cy * SIGMA_Y + cz * SIGMA_Z)

    def expectation(self, s: QubitState) -> float:
        v = s.vector
        return float(np.real(np.vdot(v, self.matrix @ v)))

    def eigenvalues(self) -> tuple[float, float]:
        lo, hi, _, _ = eig_hermitian(self)
        return lo, hi


@dataclass(frozen=True, eq=False)
class UnitaryOperator2:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        residual = float(np.max(np.abs(m.conj().T @ m - IDENTITY)))
        if residual > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (residual {residual:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "UnitaryOperator2") -> "UnitaryOperator2":
        return UnitaryOperator2(self.matrix @ other.matrix)

    def dagger(self) -> "UnitaryOperator2":
        return UnitaryOperator2(self.matrix.conj().T)


def _fix_phase(v0: complex, v1: complex) -> tuple[complex, complex]:
    # first nonzero component made real positive
    lead = v0 if abs(v0) > 1e-300 else v1
    ph = cmath.exp(-1j * cmath.phase(lead))
    return v0 * ph, v1 * ph


def eig_hermitian(h: HermitianOperator2):
    """Eigen-decomposition of a 2x2 Hermitian matrix in closed form.

    Returns ``(lam_low, lam_high, v_low, v_high)`` with ascending
    eigenvalues and an orthonormal eigenbasis.  A degenerate spectrum, or an
    already diagonal matrix, yields computational basis vectors.
    """
    m = h.matrix
    p = float(m[0, 0].real)
    r = float(m[1, 1].real)
    q = complex(m[0, 1])
    mean = 0.5 * (p + r)
    d = 0.5 * (p - r)
    rad = math.hypot(d, abs(q))
    lam_lo, lam_hi = mean - rad, mean + rad

    if q == 0:
        if p <= r:
            return lam_lo, lam_hi, PSI2, PSI1
        return lam_lo, lam_hi, PSI1, PSI2

    # pick the better-conditioned of the two null-space forms
    if d >= 0:
        x, y = d + rad, q.conjugate()
    else:
        x, y = q, rad - d
    s = max(abs(x), abs(y))  # pre-scale so tiny entries normalize cleanly
    x, y = x / s, y / s
    n = math.hypot(abs(x), abs(y))
    x, y = _fix_phase(x / n, y / n)
    v_hi = QubitState(x, y)
    lx, ly = _fix_phase(-y.conjugate(), x.conjugate())
    v_lo = QubitState(lx, ly)
    return lam_lo, lam_hi, v_lo, v_hi


def spectral_projectors(h: HermitianOperator2):
    """``(lam_low, lam_high, P_low, P_high)`` with rank-one projectors."""
    lo, hi, v_lo, v_hi = eig_hermitian(h)
    a, b = v_lo.vector, v_hi.vector
    return lo, hi, np.outer(a, a.conj()), np.outer(b, b.conj())


def expm_hermitian(h: HermitianOperator2, t: float) -> UnitaryOperator2:
    """``exp(-i h t / hbar)`` via the spectral form."""
    if not math.isfinite(t):
        raise ValueError("time must be finite")
    lo, hi, _, p_hi = spectral_projectors(h)
    z_lo, z_hi = cmath.exp(-1j * lo * t / HBAR), cmath.exp(-1j * hi * t / HBAR)
    # P_lo = I - P_hi; this form gives the identity exactly at t = 0
    return UnitaryOperator2(z_lo * IDENTITY + (z_hi - z_lo) * p_hi)


def apply(u: UnitaryOperator2, s: QubitState) -> QubitState:
    v = u.matrix @ s.vector
    return QubitState(complex(v[0]), complex(v[1]))


def inner(s1: QubitState, s2: QubitState) -> complex:
    """``<s1|s2>``, conjugate-linear in the first argument."""
    return s1.a.conjugate() * s2.a + s1.b.conjugate() * s2.b
