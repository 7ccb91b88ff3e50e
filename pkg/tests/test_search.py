import math

import numpy as np
import pytest

from qslgate.limits import DomainError, EnergyBudget, GatePhase
from qslgate.linalg import PSI2, QubitState
from qslgate.search import (
    RotationTarget,
    SearchConfig,
    build_grid,
    earliest_time,
    search_min_gate_time,
    search_min_rotation_time,
    sweep_sawtooth,
)

PI = math.pi
SMALL = dict(grid_e=16, grid_mean=4, grid_phi1=9, grid_phi2=8, refine_iterations=12, refine_seeds=3)


def gate_config(theta, energy=1.0, **kw):
    opts = dict(SMALL)
    opts.update(kw)
    return SearchConfig(EnergyBudget(energy), GatePhase(theta), **opts)


def test_config_validation():
    with pytest.raises(DomainError):
        gate_config(0.0, grid_e=1)
    with pytest.raises(DomainError):
        gate_config(0.0, success_tol=0.2)
    with pytest.raises(DomainError):
        gate_config(0.0, time_resolution=0.0)
    with pytest.raises(DomainError):
        gate_config(0.0, refine_tol=1e-2)
    with pytest.raises(DomainError):
        RotationTarget(2.0)
    cfg = gate_config(0.0)
    assert cfg.dt == pytest.approx(PI / 400)
    assert cfg.horizon == pytest.approx(PI)


def test_grid_respects_constraints_and_contains_optimum():
    cfg = gate_config(PI / 2, energy=2.0)
    g, m, p1, p2, rows = build_grid(cfg)
    e1, e2 = m - g / 2, m + g / 2
    assert np.all(e1 >= -1e-12)
    assert np.all(rows[:, 0] <= 2.0 + 1e-12) and np.all(rows[:, 1] <= 2.0 + 1e-12)
    # optimal (e1, e2) = (1, 3) with phi1 = pi/4, phi2 = 0
    hit = np.isclose(e1, 1.0) & np.isclose(e2, 3.0) & np.isclose(p1, PI / 4) & (p2 == 0.0)
    assert hit.sum() == 1
    # lexicographic order in (g, m, phi1, phi2)
    keys = np.stack([g, m, p1, p2], axis=1)
    assert all(tuple(a) <= tuple(b) for a, b in zip(keys[:-1], keys[1:]))


def test_not_found_below_bound():
    res = search_min_gate_time(gate_config(0.0, time_horizon=0.1))
    assert not res.found
    assert res.best_params is None and res.margin is None
    assert res.evaluations > 0


@pytest.mark.parametrize("theta", [0.0, 0.4, PI / 2, 2.5, PI, 4.0, 5.9])
@pytest.mark.parametrize("energy", [0.5, 2.0])
def test_no_beat_and_achievability_small_grid(theta, energy):
    res = search_min_gate_time(gate_config(theta, energy))
    assert res.found
    assert res.min_time_found >= res.analytic_time * 0.99
    assert res.min_time_found <= res.analytic_time * 1.02
    assert res.coarse_time >= res.analytic_time * 0.99
    bp = res.best_params
    assert abs(bp.phi1 - PI / 4) < 0.05
    r = bp.phi2 % PI
    assert min(r, PI - r) < 0.05


def test_determinism():
    a = search_min_gate_time(gate_config(1.2))
    b = search_min_gate_time(gate_config(1.2))
    assert a == b


def test_refining_the_grid_does_not_lose_the_candidate():
    coarse = search_min_gate_time(gate_config(0.7))
    fine = search_min_gate_time(gate_config(0.7, grid_e=32, grid_mean=8, grid_phi1=17, grid_phi2=16))
    assert fine.min_time_found <= coarse.min_time_found * (1 + 1e-3)


def test_rotation_search():
    for alpha in (PI / 4, PI / 2):
        res = search_min_rotation_time(SearchConfig(EnergyBudget(1.0), RotationTarget(alpha), **SMALL))
        assert res.min_time_found == pytest.approx(alpha, rel=0.01)


def test_rotation_search_superposed_initial_state():
    target = RotationTarget(PI / 3, QubitState.normalized(1, 1j))
    res = search_min_rotation_time(SearchConfig(EnergyBudget(1.5), target, **SMALL))
    assert res.analytic_time * 0.99 <= res.min_time_found <= res.analytic_time * 1.02


def test_rotation_alpha_zero_is_first_step():
    cfg = SearchConfig(EnergyBudget(1.0), RotationTarget(0.0, PSI2), **SMALL)
    res = search_min_rotation_time(cfg)
    assert res.found
    assert 0 < res.min_time_found <= cfg.dt
    assert res.margin == 0.0


def test_target_kind_checked():
    with pytest.raises(DomainError):
        search_min_gate_time(SearchConfig(EnergyBudget(1.0), RotationTarget(0.3), **SMALL))
    with pytest.raises(DomainError):
        search_min_rotation_time(gate_config(0.3))


def test_earliest_time_finds_narrow_window():
    # dip of width ~1e-5 at t = 1.2345, far narrower than the sampling step
    f = lambda t: np.atleast_1d(np.abs(np.asarray(t) - 1.2345) * 1e3)
    t, resid = earliest_time(f, 0.05, 3.0, 1e-2)
    assert resid is None
    assert t == pytest.approx(1.2345 - 1e-5, abs=1e-9)
    t, resid = earliest_time(lambda t: np.atleast_1d(np.ones_like(np.asarray(t))), 0.05, 3.0, 1e-2)
    assert t is None and resid == 1.0


def test_sweep_sawtooth_analytic():
    reports = sweep_sawtooth([0.0, PI / 2, PI], 1.0)
    assert [r.tau_analytic for r in reports] == pytest.approx([PI / 2, PI, PI / 2])
    assert len(sweep_sawtooth([0.0], 1.0)) == 1
    with pytest.raises(DomainError):
        sweep_sawtooth([], 1.0)


def test_sweep_sawtooth_with_oracle():
    thetas = np.linspace(0, 2 * PI, 12, endpoint=False)
    reports = sweep_sawtooth(list(thetas), 1.0, with_oracle=True, **SMALL)
    assert [r.theta.theta for r in reports] == pytest.approx(list(thetas))
    for r in reports:
        assert r.margin > -0.01
        assert r.oracle_consistent
