"""Hamiltonian flows on the phase space.

Four integrators:

* ``exact``: spectral propagation, expectation Hamiltonians only.
* ``midpoint``: implicit midpoint by fixed-point iteration; symplectic,
  conserves quadratic first integrals, works for any observable.
* ``cayley``: the closed-form midpoint solution for linear fields,
  ``(I - dt/2 K)^{-1} (I + dt/2 K)``; exactly norm-preserving.
* ``rk4``: classical explicit Runge-Kutta, the non-preserving baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .brackets import ComplexFunction, ObservableFunction, hamiltonian_vector_field
from .errors import (
    DimensionMismatchError,
    MethodUnsupportedError,
    NonConvergenceError,
)
from .operators import HermitianOperator, spectral_decompose
from .spaces import StatePoint, _as_complex_vector

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "TrajectoryDiagnostics",
    "exact_propagate",
    "integrate",
    "phase_evolution_residual",
    "trajectory_diagnostics",
]

METHODS = ("exact", "midpoint", "cayley", "rk4")
MAX_STORED_STEPS = 10**6


@dataclass(frozen=True)
class IntegratorConfig:
    """Time-stepping parameters.

    ``stride`` thins the stored output (every ``stride``-th step is kept);
    it must divide ``steps`` and the stored count may not exceed 10^6.
    """

    method: str
    dt: float
    steps: int
    solver_tol: float = 1e-13
    solver_max_iter: int = 50
    stride: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if int(self.steps) < 1:
            raise ValueError("steps must be a positive integer")
        if not self.solver_tol >= 1e-15:
            raise ValueError("solver_tol must be at least 1e-15")
        if int(self.solver_max_iter) < 1:
            raise ValueError("solver_max_iter must be a positive integer")
        if int(self.stride) < 1:
            raise ValueError("stride must be a positive integer")
        if int(self.steps) % int(self.stride) != 0:
            raise ValueError("stride must divide steps")
        if int(self.steps) // int(self.stride) > MAX_STORED_STEPS:
            raise ValueError(
                f"more than {MAX_STORED_STEPS} stored steps; increase stride"
            )
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "solver_tol", float(self.solver_tol))
        object.__setattr__(self, "solver_max_iter", int(self.solver_max_iter))
        object.__setattr__(self, "stride", int(self.stride))

    @property
    def total_time(self) -> float:
        return self.dt * self.steps

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "dt": self.dt,
            "steps": self.steps,
            "solver_tol": self.solver_tol,
            "solver_max_iter": self.solver_max_iter,
            "stride": self.stride,
        }


@dataclass(frozen=True)
class Trajectory:
    """Stored states of one integration run with per-step diagnostics.

    ``times`` is strictly increasing with constant spacing; row ``k`` of
    ``states`` is the amplitude vector at ``times[k]``.  ``norms``,
    ``energies`` and ``solver_iterations`` are per stored step.
    """

    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    energies: np.ndarray
    solver_iterations: np.ndarray
    method: str

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=complex)
        if s.shape[0] != t.shape[0]:
            raise DimensionMismatchError("states and times lengths differ")
        if t.shape[0] >= 2:
            steps = np.diff(t)
            if np.any(steps <= 0):
                raise ValueError("times must be strictly increasing")
            if np.max(steps) - np.min(steps) > 1e-12 * max(np.max(steps), 1.0):
                raise ValueError("times must advance with a constant step")
        for name in ("times", "states", "norms", "energies", "solver_iterations"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def state(self, k: int) -> StatePoint:
        return StatePoint(self.states[k])


@dataclass(frozen=True)
class TrajectoryDiagnostics:
    """Conservation and solver statistics of a trajectory."""

    max_norm_drift: float
    max_energy_drift: float
    max_solver_iterations: int
    mean_solver_iterations: float
    steps_stored: int
    method: str

    def as_dict(self) -> dict:
        return {
            "max_norm_drift": self.max_norm_drift,
            "max_energy_drift": self.max_energy_drift,
            "max_solver_iterations": self.max_solver_iterations,
            "mean_solver_iterations": self.mean_solver_iterations,
            "steps_stored": self.steps_stored,
            "method": self.method,
        }


def exact_propagate(h: HermitianOperator, psi0, t: float, hbar: float = 1.0) -> StatePoint:
    """Spectral solution of ``i*hbar*dpsi/dt = H psi`` at time ``t``.

    Expands ``psi0`` in the eigenbasis of ``H`` and advances each mode by
    its own phase ``exp(-i a_n t / hbar)``.
    """
    spectral = spectral_decompose(h)
    v = _as_complex_vector(psi0)
    if v.shape[0] != h.dim:
        raise DimensionMismatchError(f"state length {v.shape[0]} != operator dimension {h.dim}")
    coeffs = spectral.eigenvectors.conj().T @ v
    phased = coeffs * np.exp(-1j * spectral.eigenvalues * (float(t) / float(hbar)))
    return StatePoint(spectral.eigenvectors @ phased)


def _linear_generator(f: ObservableFunction, hbar: float) -> np.ndarray:
    return (-1j / hbar) * f.operator.matrix


def _field_evaluator(f: ObservableFunction, hbar: float):
    if f.operator is not None:
        k = _linear_generator(f, hbar)
        return lambda psi: k @ psi
    return lambda psi: np.asarray(hamiltonian_vector_field(f, psi))


def _midpoint_step(field, psi, dt, tol, max_iter, step_index):
    y = psi + dt * field(psi)  # explicit predictor
    for iteration in range(1, max_iter + 1):
        y_next = psi + dt * field(0.5 * (psi + y))
        delta = float(np.linalg.norm(y_next - y))
        y = y_next
        if delta <= tol:
            return y, iteration
    raise NonConvergenceError(step_index, max_iter)


def _rk4_step(field, psi, dt):
    k1 = field(psi)
    k2 = field(psi + 0.5 * dt * k1)
    k3 = field(psi + 0.5 * dt * k2)
    k4 = field(psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(f: ObservableFunction, xi0, cfg: IntegratorConfig,
              hbar: float | None = None) -> Trajectory:
    """Integrate the Hamilton equation ``dxi/dt = X_f(xi)``.

    ``hbar`` defaults to ``f.space.hbar``.  The ``exact`` and ``cayley``
    methods require an expectation observable (linear field); ``midpoint``
    and ``rk4`` accept any observable.  For generic observables the field
    carries finite-difference noise of order ``1e-8``, so the midpoint
    ``solver_tol`` must be chosen above ``dt`` times that noise or the
    fixed point cannot settle.
    """
    hbar = f.space.hbar if hbar is None else float(hbar)
    psi = _as_complex_vector(xi0).copy()
    f.space.check_dim(psi, "initial state")

    stored = cfg.steps // cfg.stride
    dt_store = cfg.dt * cfg.stride
    times = dt_store * np.arange(stored + 1)
    states = np.empty((stored + 1, psi.shape[0]), dtype=complex)
    iterations = np.zeros(stored + 1, dtype=int)
    states[0] = psi

    if cfg.method in ("exact", "cayley") and f.operator is None:
        raise MethodUnsupportedError(
            f"method {cfg.method!r} requires an expectation observable"
        )

    if cfg.method == "exact":
        spectral = spectral_decompose(f.operator)
        coeffs = spectral.eigenvectors.conj().T @ psi
        for k in range(1, stored + 1):
            phased = coeffs * np.exp(-1j * spectral.eigenvalues * (times[k] / hbar))
            states[k] = spectral.eigenvectors @ phased
    elif cfg.method == "cayley":
        k_mat = _linear_generator(f, hbar)
        eye = np.eye(psi.shape[0], dtype=complex)
        forward = eye + (cfg.dt / 2.0) * k_mat
        backward = scipy.linalg.lu_factor(eye - (cfg.dt / 2.0) * k_mat)
        idx = 0
        for step in range(1, cfg.steps + 1):
            psi = scipy.linalg.lu_solve(backward, forward @ psi)
            if step % cfg.stride == 0:
                idx += 1
                states[idx] = psi
    else:
        field = _field_evaluator(f, hbar)
        idx = 0
        for step in range(1, cfg.steps + 1):
            if cfg.method == "midpoint":
                psi, iters = _midpoint_step(
                    field, psi, cfg.dt, cfg.solver_tol, cfg.solver_max_iter, step
                )
            else:  # rk4
                psi = _rk4_step(field, psi, cfg.dt)
                iters = 0
            if step % cfg.stride == 0:
                idx += 1
                states[idx] = psi
                iterations[idx] = iters

    norms = np.linalg.norm(states, axis=1)
    energies = np.array([f(states[k]) for k in range(stored + 1)])
    return Trajectory(
        times=times,
        states=states,
        norms=norms,
        energies=energies,
        solver_iterations=iterations,
        method=cfg.method,
    )


def phase_evolution_residual(u: ComplexFunction, a: float, traj: Trajectory,
                             hbar: float = 1.0) -> float:
    """Max deviation of ``u`` along the trajectory from pure phase rotation.

    Measures ``max_k |u(xi(t_k)) - exp(-i a (t_k - t_0) / hbar) u(xi(t_0))|``,
    which vanishes when ``i*hbar*{f, u} = a u`` holds along the flow of
    ``f`` and grows to order one when ``a`` is wrong.
    """
    u0 = u(traj.states[0])
    elapsed = traj.times - traj.times[0]
    phases = np.exp(-1j * float(a) * elapsed / float(hbar))
    residual = 0.0
    for k in range(len(traj)):
        residual = max(residual, abs(u(traj.states[k]) - phases[k] * u0))
    return float(residual)


def trajectory_diagnostics(traj: Trajectory, f: ObservableFunction) -> TrajectoryDiagnostics:
    """Norm drift, energy drift along the flow of ``f``, and solver stats."""
    energies = np.array([f(traj.states[k]) for k in range(len(traj))])
    iters = traj.solver_iterations
    return TrajectoryDiagnostics(
        max_norm_drift=float(np.max(np.abs(traj.norms - 1.0))),
        max_energy_drift=float(np.max(np.abs(energies - energies[0]))),
        max_solver_iterations=int(np.max(iters)) if iters.size else 0,
        mean_solver_iterations=float(np.mean(iters)) if iters.size else 0.0,
        steps_stored=len(traj),
        method=traj.method,
    )
