"""Gate and rotation checks that keep the global phase in view."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .limits import GatePhase, SpeedLimitReport, eigenvalue_pair
from .linalg import PSI1, PSI2, QubitState, UnitaryOperator2, apply, expm_hermitian, inner
from .synthesis import GateSpec, synthesize_gate

DEFAULT_TOL = 1e-9
TWO_PI = 2.0 * math.pi


def phase_distance(a: float, b: float) -> float:
    """Wrap-around distance between two angles, in ``[0, pi]``."""
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class GateCheckResult:
    fidelity1: float
    fidelity2: float
    phase1: float
    phase2: float
    phase_target: float
    passed: bool
    tol: float = DEFAULT_TOL

    @property
    def fidelity(self) -> float:
        return min(self.fidelity1, self.fidelity2)

    @property
    def phase_residual(self) -> float:
        return max(
            phase_distance(self.phase1, self.phase_target),
            phase_distance(self.phase2, self.phase_target),
        )


def gate_overlaps(u: UnitaryOperator2) -> tuple[complex, complex]:
    """``(<psi2|U psi1>, <psi1|U psi2>)``."""
    return inner(PSI2, apply(u, PSI1)), inner(PSI1, apply(u, PSI2))


def check_gate(u: UnitaryOperator2, theta, tol: float = DEFAULT_TOL) -> GateCheckResult:
    """Test whether ``u`` swaps the basis states and multiplies by ``exp(-i theta)``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    th = theta.theta if isinstance(theta, GatePhase) else GatePhase(theta).theta
    o1, o2 = gate_overlaps(u)
    target = -th
    f1, f2 = abs(o1), abs(o2)
    p1, p2 = cmath.phase(o1), cmath.phase(o2)
    passed = (
        f1 >= 1.0 - tol
        and f2 >= 1.0 - tol
        and phase_distance(p1, target) <= tol
        and phase_distance(p2, target) <= tol
    )
    return GateCheckResult(f1, f2, p1, p2, target, passed, tol)


def check_rotation(u: UnitaryOperator2, initial: QubitState, alpha: float, tol: float = DEFAULT_TOL) -> bool:
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 0.0 <= alpha <= math.pi / 2:
        raise ValueError("alpha must lie in [0, pi/2]")
    overlap = abs(inner(apply(u, initial), initial))
    return abs(overlap - math.cos(alpha)) < tol


def build_report(spec: GateSpec, oracle_result: Optional[float] = None) -> SpeedLimitReport:
    """Synthesize, evolve and check one gate, bundling the residuals."""
    h, tau = synthesize_gate(spec)
    u = expm_hermitian(h, tau)
    res = check_gate(u, spec.theta, DEFAULT_TOL)
    e1, e2 = eigenvalue_pair(spec.theta, spec.energy)
    return SpeedLimitReport(
        theta=spec.theta,
        energy=spec.energy,
        tau_analytic=tau,
        e1=e1,
        e2=e2,
        achieved_fidelity=res.fidelity,
        phase_residual=res.phase_residual,
        oracle_min_time=None if oracle_result is None else float(oracle_result),
    )
