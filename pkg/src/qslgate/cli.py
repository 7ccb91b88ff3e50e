"""Command-line front end.

Every command prints one JSON document on stdout, except ``sweep`` which
writes CSV.  Exit codes: 0 success, 2 usage or domain error, 3 invalid
physics input, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Optional

import numpy as np

from .limits import (
    NATURAL_TIME_UNIT_S,
    DomainError,
    EnergyBudget,
    GatePhase,
    eigenvalue_pair,
    gate_min_time,
    physical_gate_time,
    resonant_gap_from_wavelength,
)
from .linalg import PSI1, HermitianOperator2, QubitState, apply, expm_hermitian, inner
from .search import RotationTarget, SearchConfig, search_min_gate_time, search_min_rotation_time, sweep_sawtooth
from .synthesis import GateSpec, RotationSpec, synthesize_gate, synthesize_rotation
from .verification import check_rotation

EXIT_USAGE = 2
EXIT_PHYSICS = 3
EXIT_IO = 4

CLI_HERMITIAN_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_USAGE)


# ------------------------------------------------------------------ output


def fmt(x: float) -> str:
    """12 significant digits, lowercase scientific notation."""
    return f"{x:.11e}"


def _encode(obj: Any) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return _encode(doc) + "\n"


def envelope(command: str, inputs: dict, results: dict, units: str) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "units": units}


def matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    try:
        m = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in data], dtype=complex)
    except (TypeError, ValueError, IndexError, KeyError) as exc:
        raise CliError(f"malformed matrix: {exc}") from exc
    if m.shape != (2, 2) or not np.all(np.isfinite(m)):
        raise CliError("matrix must be 2x2 with finite [re, im] entries")
    return m


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _state(pair) -> QubitState:
    if pair is None:
        return PSI1
    try:
        return QubitState.normalized(pair[0], pair[1])
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _state_json(s: QubitState) -> list:
    return [[s.a.real, s.a.imag], [s.b.real, s.b.imag]]


# ------------------------------------------------------------------ units


def _energy(args) -> float:
    """Energy in the working unit: natural units, or eV when ``--units si``."""
    if args.units == "si":
        if args.energy_ev is None:
            raise CliError("--units si requires --energy-ev")
        return EnergyBudget(args.energy_ev).value
    if args.energy is None:
        raise CliError("--energy is required")
    return EnergyBudget(args.energy).value


def _time_out(args, t: float) -> float:
    return t * NATURAL_TIME_UNIT_S if args.units == "si" else t


def _time_in(args, t: float) -> float:
    return t / NATURAL_TIME_UNIT_S if args.units == "si" else t


def _units_label(args) -> str:
    return "SI" if args.units == "si" else "natural"


def _energy_inputs(args, energy: float) -> dict:
    return {"energy_ev": energy} if args.units == "si" else {"energy": energy}


# ------------------------------------------------------------------ commands


def cmd_bound(args) -> dict:
    e = _energy(args)
    phase = GatePhase(args.theta)
    e1, e2 = eigenvalue_pair(phase, e)
    results = {
        "tau": _time_out(args, gate_min_time(phase, e)),
        "e1": e1,
        "e2": e2,
        "theta_normalized": phase.theta,
        "theta_mod_pi": phase.reduced,
        "branch": "[0,pi)" if phase.branch == 0 else "[pi,2pi)",
    }
    return envelope("bound", {"theta": args.theta, **_energy_inputs(args, e)}, results, _units_label(args))


def cmd_synth(args) -> dict:
    e = _energy(args)
    spec = GateSpec(GatePhase(args.theta), EnergyBudget(e))
    h, tau = synthesize_gate(spec)
    e1, e2 = eigenvalue_pair(spec.theta, spec.energy)
    results = {"matrix": matrix_to_json(h.matrix), "e1": e1, "e2": e2, "tau": _time_out(args, tau)}
    return envelope("synth", {"theta": args.theta, **_energy_inputs(args, e)}, results, _units_label(args))


def _read_hamiltonian(path: str) -> np.ndarray:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc.msg}") from exc
    if isinstance(doc, dict) and isinstance(doc.get("results"), dict):
        doc = doc["results"]
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise CliError(f"{path}: expected an object with a 'matrix' field")
    return matrix_from_json(doc["matrix"])


def cmd_evolve(args) -> dict:
    m = _read_hamiltonian(args.hamiltonian)
    residual = float(np.max(np.abs(m - m.conj().T)))
    if residual > CLI_HERMITIAN_TOL:
        raise CliError(f"Hamiltonian is not Hermitian (residual {residual:.3e})", EXIT_PHYSICS)
    h = HermitianOperator2(0.5 * (m + m.conj().T))
    s0 = _state(args.state)
    u = expm_hermitian(h, _time_in(args, args.time))
    s1 = apply(u, s0)
    lead = s1.a if abs(s1.a) >= abs(s1.b) else s1.b
    norm = math.sqrt(abs(s1.a) ** 2 + abs(s1.b) ** 2)
    results = {
        "final_state": _state_json(s1),
        "norm_residual": abs(norm - 1.0),
        "leading_phase": math.atan2(lead.imag, lead.real),
        "overlap_with_initial": [inner(s0, s1).real, inner(s0, s1).imag],
    }
    inputs = {"hamiltonian": args.hamiltonian, "time": args.time, "state": _state_json(s0)}
    return envelope("evolve", inputs, results, _units_label(args))


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"--thetas must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"--thetas must be start:stop:count, got {text!r}") from exc
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise CliError("--thetas bounds must be finite")
    if count < 2:
        raise CliError("--thetas count must be at least 2")
    return np.linspace(start, stop, count)


def _search_options(args) -> dict:
    opts = {}
    for name in ("grid_e", "grid_phi1", "grid_phi2", "grid_mean", "refine_iterations", "refine_seeds"):
        v = getattr(args, name, None)
        if v is not None:
            opts[name] = v
    for name in ("success_tol", "refine_tol"):
        v = getattr(args, name, None)
        if v is not None:
            opts[name] = v
    if getattr(args, "time_resolution", None) is not None:
        opts["time_resolution"] = _time_in(args, args.time_resolution)
    if getattr(args, "horizon", None) is not None:
        opts["time_horizon"] = _time_in(args, args.horizon)
    return opts


SWEEP_COLUMNS = ["theta", "tau_analytic", "e1", "e2", "fidelity", "phase_residual"]


def cmd_sweep(args) -> Optional[str]:
    thetas = _parse_range(args.thetas)
    e = _energy(args)
    reports = sweep_sawtooth(list(thetas), e, with_oracle=args.oracle, **_search_options(args))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = SWEEP_COLUMNS + (["oracle_min_time", "margin"] if args.oracle else [])
    writer.writerow(header)
    for r in reports:
        row = [r.theta.theta, _time_out(args, r.tau_analytic), r.e1, r.e2, r.achieved_fidelity, r.phase_residual]
        if args.oracle:
            row += [
                "" if r.oracle_min_time is None else fmt(_time_out(args, r.oracle_min_time)),
                "" if r.margin is None else fmt(r.margin),
            ]
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    text = buf.getvalue()
    if args.out is None:
        return text
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror or exc}", EXIT_IO) from exc
    return None


def cmd_physical(args) -> dict:
    results = {
        "tau_seconds": physical_gate_time(args.wavelength_nm),
        "gap_eV": resonant_gap_from_wavelength(args.wavelength_nm),
    }
    return envelope("physical", {"wavelength_nm": args.wavelength_nm}, results, "SI")


def cmd_rotate(args) -> dict:
    e = _energy(args)
    s0 = _state(args.state)
    spec = RotationSpec(args.alpha, EnergyBudget(e), s0)
    h, tau = synthesize_rotation(spec)
    u = expm_hermitian(h, tau)
    overlap = abs(inner(apply(u, s0), s0))
    results = {
        "tau_alpha": _time_out(args, tau),
        "matrix": matrix_to_json(h.matrix),
        "overlap": overlap,
        "passed": check_rotation(u, s0, args.alpha, 1e-9),
    }
    inputs = {"alpha": args.alpha, **_energy_inputs(args, e), "state": _state_json(s0)}
    return envelope("rotate", inputs, results, _units_label(args))


def cmd_minsearch(args) -> dict:
    e = _energy(args)
    opts = _search_options(args)
    if args.alpha is not None:
        target = RotationTarget(args.alpha, _state(args.state))
        res = search_min_rotation_time(SearchConfig(EnergyBudget(e), target, **opts))
        inputs = {"alpha": args.alpha, "state": _state_json(target.initial_state)}
    else:
        theta = 0.0 if args.theta is None else args.theta
        res = search_min_gate_time(SearchConfig(EnergyBudget(e), GatePhase(theta), **opts))
        inputs = {"theta": theta}
    inputs.update(_energy_inputs(args, e))
    inputs.update(opts)
    bp = res.best_params
    results = {
        "found": res.found,
        "min_time_found": _time_out(args, res.min_time_found) if res.found else None,
        "analytic_time": _time_out(args, res.analytic_time),
        "margin": res.margin,
        "coarse_time": None if res.coarse_time is None else _time_out(args, res.coarse_time),
        "refined": res.refined,
        "evaluations": res.evaluations,
        "candidates": res.candidates,
        "best_params": None if bp is None else {"e1": bp.e1, "e2": bp.e2, "phi1": bp.phi1, "phi2": bp.phi2},
    }
    return envelope("minsearch", inputs, results, _units_label(args))


# ------------------------------------------------------------------ parser


def _add_energy(p):
    p.add_argument("--energy", type=_finite, help="average-energy budget (natural units)")
    p.add_argument("--energy-ev", type=_finite, help="energy budget in eV (with --units si)")


def _add_state(p):
    p.add_argument("--state", nargs=2, type=_complex, metavar=("A", "B"),
                   help="amplitudes on |0> and |1>, e.g. 0 1 or 0.6 0.8j; normalized on input")


def _add_search(p):
    p.add_argument("--grid-e", type=int)
    p.add_argument("--grid-phi1", type=int)
    p.add_argument("--grid-phi2", type=int)
    p.add_argument("--grid-mean", type=int)
    p.add_argument("--time-resolution", type=_finite)
    p.add_argument("--horizon", type=_finite)
    p.add_argument("--success-tol", type=_finite)
    p.add_argument("--refine-tol", type=_finite)
    p.add_argument("--refine-iterations", type=int)
    p.add_argument("--refine-seeds", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qslgate", description="Minimum-time qubit NOT gates with a phase shift.")
    parser.add_argument("--units", choices=["natural", "si"], default="natural")
    parser.add_argument("--output", help="write the JSON document to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="closed-form minimum gate time")
    p.add_argument("--theta", type=_finite, required=True)
    _add_energy(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("synth", help="optimal gate Hamiltonian")
    p.add_argument("--theta", type=_finite, required=True)
    _add_energy(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("evolve", help="evolve a state under a Hamiltonian read from JSON")
    p.add_argument("--hamiltonian", required=True, help="JSON file with a 'matrix' field, or - for stdin")
    p.add_argument("--time", type=_finite, required=True)
    _add_state(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="tau versus theta as CSV")
    p.add_argument("--thetas", required=True, help="start:stop:count (inclusive)")
    _add_energy(p)
    p.add_argument("--oracle", action="store_true", help="also run the minimality search per point")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    _add_search(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("physical", help="gate time for an optical transition")
    p.add_argument("--wavelength-nm", type=_finite, required=True)
    p.set_defaults(func=cmd_physical)

    p = sub.add_parser("rotate", help="fastest rotation of a known state by alpha")
    p.add_argument("--alpha", type=_finite, required=True)
    _add_energy(p)
    _add_state(p)
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("minsearch", help="brute-force minimum-time search")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--theta", type=_finite)
    group.add_argument("--alpha", type=_finite)
    _add_energy(p)
    _add_state(p)
    _add_search(p)
    p.set_defaults(func=cmd_minsearch)
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from exc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = args.func(args)
        if isinstance(out, dict):
            _emit(dumps(out), args.output)
        elif out is not None:
            _emit(out, args.output)
    except CliError as exc:
        print(f"qslgate: error: {exc}", file=sys.stderr)
        return exc.code
    except (DomainError, ValueError) as exc:
        print(f"qslgate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
