"""Command-line drivers: verify | evolve | bracket | reconstruct.

Each command loads a scenario file, runs its checks, writes a
deterministic JSON report (and CSV trajectory where applicable) into the
output directory, and exits 0 when every residual is within tolerance,
1 on failed checks, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .brackets import ObservableFunction, bracket_commutator_report
from .dynamics import integrate, phase_evolution_residual, trajectory_diagnostics
from .errors import NonConvergenceError, NormalizationError, SymqmError, ScenarioError
from .operators import spectral_decompose
from .quantum_function import (
    AxiomTolerances,
    from_operator,
    qfe_residual,
    reconstruction_map,
    verify_axioms,
    verify_reconstruction,
)
from .reports import write_report, write_trajectory_csv
from .scenario import Scenario, load_scenario
from .spaces import SymplecticSpace

__all__ = ["main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symqm",
        description="Verify quantum-function axioms, evolve states and test reconstructions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    common.add_argument("--out", default="./out", help="output directory (default ./out)")
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--tol-scale", type=float, default=1.0,
                        help="multiply every tolerance by this factor")
    common.add_argument("--quiet", action="store_true", help="suppress per-check output")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common],
                   help="check the quantum-function axioms (and bracket identity)")
    sub.add_parser("evolve", parents=[common],
                   help="integrate the Hamilton flow and compare with the spectral propagator")
    sub.add_parser("bracket", parents=[common],
                   help="bracket-commutator report for an operator pair")
    sub.add_parser("reconstruct", parents=[common],
                   help="verify the reconstruction map and the quantum-function equation")
    return parser


def _emit(quiet: bool, name: str, value: float, tol: float, ok: bool) -> None:
    if not quiet:
        print(f"{name}: residual={value:.6e} tol={tol:.3e} {'PASS' if ok else 'FAIL'}")


def _space(scenario: Scenario) -> SymplecticSpace:
    return SymplecticSpace(complex_dim=scenario.dimension, hbar=scenario.hbar)


def _axiom_tolerances(scenario: Scenario) -> AxiomTolerances:
    return AxiomTolerances(
        decomposition=scenario.tolerance("axiom_decomposition"),
        bracket=scenario.tolerance("axiom_bracket"),
        normalization=scenario.tolerance("axiom_normalization"),
        stationary_delta=scenario.tolerance("axiom_stationary_delta"),
        stationary_value=scenario.tolerance("axiom_stationary_value"),
    )


def _bracket_section(scenario: Scenario, space: SymplecticSpace, quiet: bool) -> dict:
    report = bracket_commutator_report(
        scenario.operator, scenario.second_operator, space,
        scenario.samples, scenario.seed,
    )
    tol_analytic = scenario.tolerance("bracket_analytic") * report.scale
    tol_fd = scenario.tolerance("bracket_finite_difference") * report.scale
    checks = {
        "analytic": report.analytic_max <= tol_analytic,
        "finite_difference": report.finite_difference_max <= tol_fd,
    }
    _emit(quiet, "bracket_commutator.analytic", report.analytic_max,
          tol_analytic, checks["analytic"])
    _emit(quiet, "bracket_commutator.finite_difference", report.finite_difference_max,
          tol_fd, checks["finite_difference"])
    return {**report.as_dict(), "checks": checks, "passed": all(checks.values())}


def _cmd_verify(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    space = _space(scenario)
    qf = from_operator(scenario.operator, space)
    axioms = verify_axioms(qf, scenario.samples, scenario.seed,
                           _axiom_tolerances(scenario))
    for name, ok in axioms.checks().items():
        _emit(quiet, f"axiom.{name}", getattr(axioms, name),
              getattr(axioms.tolerances, name), ok)
    report = {
        "command": "verify",
        "scenario": scenario.resolved_dict(),
        "axioms": axioms.as_dict(),
    }
    passed = axioms.passed
    if scenario.second_operator is not None:
        section = _bracket_section(scenario, space, quiet)
        report["bracket_commutator"] = section
        passed = passed and section["passed"]
    report["passed"] = passed
    write_report(report, out_dir / scenario.outputs.get("report", "verify_report.json"))
    return 0 if passed else 1


def _cmd_bracket(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    if scenario.second_operator is None:
        raise ScenarioError("the bracket command requires this field", "second_operator")
    space = _space(scenario)
    section = _bracket_section(scenario, space, quiet)
    report = {
        "command": "bracket",
        "scenario": scenario.resolved_dict(),
        "bracket_commutator": section,
        "passed": section["passed"],
    }
    write_report(report, out_dir / scenario.outputs.get("report", "bracket_report.json"))
    return 0 if section["passed"] else 1


def _exact_states(scenario: Scenario, times: np.ndarray) -> np.ndarray:
    spectral = spectral_decompose(scenario.operator)
    coeffs = spectral.eigenvectors.conj().T @ scenario.initial_state
    states = np.empty((times.shape[0], scenario.dimension), dtype=complex)
    for k, t in enumerate(times):
        phased = coeffs * np.exp(-1j * spectral.eigenvalues * (t / scenario.hbar))
        states[k] = spectral.eigenvectors @ phased
    return states


def _cmd_evolve(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    space = _space(scenario)
    qf = from_operator(scenario.operator, space)
    f = ObservableFunction.expectation_of(scenario.operator, space)
    report = {"command": "evolve", "scenario": scenario.resolved_dict()}
    report_path = out_dir / scenario.outputs.get("report", "evolve_report.json")
    try:
        traj = integrate(f, scenario.initial_state, scenario.integrator, scenario.hbar)
    except NonConvergenceError as exc:
        report["error"] = {"type": "NonConvergence", "step": exc.step,
                           "iterations": exc.iterations}
        report["passed"] = False
        write_report(report, report_path)
        if not quiet:
            print(f"integrator failed to converge at step {exc.step}")
        return 1

    exact = _exact_states(scenario, traj.times)
    deviation = float(np.max(np.linalg.norm(traj.states - exact, axis=1)))
    diagnostics = trajectory_diagnostics(traj, f)
    phase_residuals = [
        phase_evolution_residual(u, a, traj, scenario.hbar)
        for u, a in zip(qf.eigenfunctions, qf.eigenvalues)
    ]

    tol_dev = scenario.tolerance("evolve_deviation")
    tol_phase = scenario.tolerance("evolve_phase")
    checks = {
        "deviation_from_exact": deviation <= tol_dev,
        "phase_evolution": max(phase_residuals) <= tol_phase,
    }
    _emit(quiet, "evolve.deviation_from_exact", deviation, tol_dev,
          checks["deviation_from_exact"])
    _emit(quiet, "evolve.phase_evolution", max(phase_residuals), tol_phase,
          checks["phase_evolution"])

    csv_path = out_dir / scenario.outputs.get("trajectory", "trajectory.csv")
    write_trajectory_csv(traj, csv_path)

    report.update({
        "deviation_from_exact": deviation,
        "diagnostics": diagnostics.as_dict(),
        "phase_evolution": {
            "eigenvalues": [float(a) for a in qf.eigenvalues],
            "residuals": phase_residuals,
        },
        "trajectory_file": csv_path.name,
        "checks": checks,
        "passed": all(checks.values()),
    })
    write_report(report, report_path)
    return 0 if report["passed"] else 1


def _phi_candidate(scenario: Scenario, qf):
    if scenario.phi_map == "reconstruction":
        return reconstruction_map(qf)
    if scenario.phi_map == "identity":
        return lambda v: np.asarray(v, dtype=complex)
    constant = np.zeros(scenario.dimension, dtype=complex)
    constant[0] = 1.0
    return lambda v: constant


def _cmd_reconstruct(scenario: Scenario, out_dir: Path, quiet: bool) -> int:
    space = _space(scenario)
    qf = from_operator(scenario.operator, space)
    traj = integrate(qf.f, scenario.initial_state, scenario.integrator, scenario.hbar)
    rec = verify_reconstruction(qf, traj, scenario.hbar,
                                samples=scenario.samples, seed=scenario.seed)
    phi = _phi_candidate(scenario, qf)
    qfe = qfe_residual(scenario.operator, phi, space,
                       samples=scenario.samples, seed=scenario.seed, hbar=scenario.hbar)

    tol_an = scenario.tolerance("reconstruction_analytic")
    tol_fd = scenario.tolerance("reconstruction_finite_difference")
    tol_tw = scenario.tolerance("reconstruction_intertwining")
    tol_qfe = scenario.tolerance("qfe")
    checks = {
        "flow_equation_finite_difference": rec.flow_equation_residual_fd <= tol_fd,
        "value": rec.value_residual <= tol_an,
        "norm": rec.norm_residual <= tol_an,
        "stationary": rec.stationary_residual <= tol_an,
        "intertwining": rec.intertwining_residual <= tol_tw,
        "qfe": qfe <= tol_qfe,
    }
    if rec.flow_equation_residual_analytic is not None:
        checks["flow_equation_analytic"] = rec.flow_equation_residual_analytic <= tol_an
        _emit(quiet, "reconstruction.flow_equation_analytic",
              rec.flow_equation_residual_analytic, tol_an, checks["flow_equation_analytic"])
    _emit(quiet, "reconstruction.flow_equation_finite_difference",
          rec.flow_equation_residual_fd, tol_fd, checks["flow_equation_finite_difference"])
    _emit(quiet, "reconstruction.value", rec.value_residual, tol_an, checks["value"])
    _emit(quiet, "reconstruction.norm", rec.norm_residual, tol_an, checks["norm"])
    _emit(quiet, "reconstruction.stationary", rec.stationary_residual, tol_an,
          checks["stationary"])
    _emit(quiet, "reconstruction.intertwining", rec.intertwining_residual, tol_tw,
          checks["intertwining"])
    _emit(quiet, f"qfe[{scenario.phi_map}]", qfe, tol_qfe, checks["qfe"])

    report = {
        "command": "reconstruct",
        "scenario": scenario.resolved_dict(),
        "reconstruction": rec.as_dict(),
        "qfe": {"phi_map": scenario.phi_map, "residual": qfe},
        "degenerate_flag": qf.degenerate_flag,
        "checks": checks,
        "passed": all(checks.values()),
    }
    write_report(report, out_dir / scenario.outputs.get("report", "reconstruct_report.json"))
    return 0 if report["passed"] else 1


_COMMANDS = {
    "verify": _cmd_verify,
    "evolve": _cmd_evolve,
    "bracket": _cmd_bracket,
    "reconstruct": _cmd_reconstruct,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        if args.tol_scale <= 0:
            raise ScenarioError("--tol-scale must be positive")
        scenario = load_scenario(args.scenario)
        if args.seed is not None:
            if args.seed < 0:
                raise ScenarioError("--seed must be nonnegative")
            scenario.seed = args.seed
        if args.tol_scale != 1.0:
            scenario.scale_tolerances(args.tol_scale)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        code = _COMMANDS[args.command](scenario, out_dir, args.quiet)
    except (ScenarioError, NormalizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SymqmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        print("OK" if code == 0 else "FAILED")
    return code


if __name__ == "__main__":
    sys.exit(main())
