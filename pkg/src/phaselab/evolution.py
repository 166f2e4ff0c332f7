"""Time-ordered propagation on a uniform grid.

The propagator is built step by step as U(t_{j+1}) = exp(-i H(t_j + dt/2) dt)
U(t_j): the midpoint-exponential product (lowest-order Magnus).  Every factor
is the exponential of a skew-Hermitian matrix, so unitarity is preserved by
construction and the global error is second order in dt.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .exceptions import ContractError, DimensionError, NumericError
from .linalg import frobenius_norm, mat_exp

UNITARITY_TOL = 1e-9
NORM_TOL = 1e-9
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of [t_start, t_end] into `steps` segments."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise DimensionError(f"steps must be >= 1, got {self.steps}")
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise NumericError("grid endpoints must be finite")
        if not self.t_end > self.t_start:
            raise DimensionError("t_end must exceed t_start")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps + 1)

    @cached_property
    def midpoints(self) -> np.ndarray:
        nodes = self.nodes
        return 0.5 * (nodes[:-1] + nodes[1:])

    @property
    def span(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class HamiltonianTrajectory:
    """Deterministic map t -> Hermitian matrix (natural units, hbar = 1).

    `evaluate` produces a single (dim, dim) matrix.  `evaluate_batch`, when
    given, maps an array of times to a (len(times), dim, dim) stack and lets
    the propagator avoid per-node Python calls.
    """

    dim: int
    evaluate: Callable[[float], np.ndarray]
    evaluate_batch: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def sample(self, times: np.ndarray, validate: bool = True) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        if self.evaluate_batch is not None:
            out = np.asarray(self.evaluate_batch(times), dtype=complex)
        else:
            out = np.stack([np.asarray(self.evaluate(t), dtype=complex) for t in times])
        if out.shape != (len(times), self.dim, self.dim):
            raise DimensionError(
                f"Hamiltonian samples have shape {out.shape}, "
                f"expected {(len(times), self.dim, self.dim)}"
            )
        if validate:
            if not (np.all(np.isfinite(out.real)) and np.all(np.isfinite(out.imag))):
                raise NumericError("Hamiltonian evaluation produced non-finite entries")
            defect = frobenius_norm(out - np.conj(np.swapaxes(out, -2, -1)))
            scale = max(frobenius_norm(out), 1.0)
            if defect > HERMITICITY_TOL * scale:
                raise ContractError(
                    f"Hamiltonian evaluation not Hermitian: defect {defect:.3e}"
                )
        return out


@dataclass(frozen=True)
class PropagatorPath:
    """Unitaries U(t_j) on a grid, with U(t_0) = I exactly.

    Gauge-transformed evolutions (which legitimately start at a non-identity
    diagonal phase matrix) set identity_start=False to skip the anchor check.
    """

    grid: TimeGrid
    matrices: np.ndarray  # (steps + 1, dim, dim)
    identity_start: bool = True

    def __post_init__(self):
        U = np.asarray(self.matrices)
        if U.ndim != 3 or U.shape[0] != self.grid.steps + 1 or U.shape[1] != U.shape[2]:
            raise DimensionError(f"propagator stack has shape {U.shape}")
        if self.identity_start and not np.array_equal(U[0], np.eye(U.shape[1], dtype=complex)):
            raise ContractError("U(t_0) must be the identity exactly")
        eye = np.eye(U.shape[1])
        defect = frobenius_norm(np.conj(np.swapaxes(U, -2, -1)) @ U - eye)
        if defect > UNITARITY_TOL:
            raise ContractError(f"propagator not unitary: defect {defect:.3e}")

    @property
    def dim(self) -> int:
        return self.matrices.shape[-1]

    @property
    def final(self) -> np.ndarray:
        return self.matrices[-1]


@dataclass(frozen=True)
class AmplitudePath:
    """Normalized state trajectory psi(t_j) on a grid."""

    grid: TimeGrid
    states: np.ndarray  # (steps + 1, dim)

    def __post_init__(self):
        psi = np.asarray(self.states)
        if psi.ndim != 2 or psi.shape[0] != self.grid.steps + 1:
            raise DimensionError(f"state stack has shape {psi.shape}")
        norms = np.linalg.norm(psi, axis=1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > NORM_TOL:
            raise ContractError(f"amplitude path not normalized: |norm-1| up to {worst:.3e}")

    @property
    def dim(self) -> int:
        return self.states.shape[-1]

    @property
    def initial(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def propagate(H: HamiltonianTrajectory, grid: TimeGrid) -> PropagatorPath:
    """Integrate the time-ordered exponential of -i H(t) over the grid."""
    dt = grid.dt
    samples = H.sample(grid.midpoints)
    steps = mat_exp(-1j * dt * samples)
    U = np.empty((grid.steps + 1, H.dim, H.dim), dtype=complex)
    U[0] = np.eye(H.dim, dtype=complex)
    for j in range(grid.steps):
        U[j + 1] = steps[j] @ U[j]
    return PropagatorPath(grid, U)


def amplitude_path(U: PropagatorPath, initial: np.ndarray) -> AmplitudePath:
    """Schroedinger amplitude psi(t_j) = U(t_j) psi(0) for a normalized start."""
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (U.dim,):
        raise DimensionError(
            f"initial state has shape {initial.shape}, expected ({U.dim},)"
        )
    if abs(np.linalg.norm(initial) - 1.0) > 1e-12:
        raise ContractError("initial state must be normalized to 1e-12")
    states = np.einsum("jab,b->ja", U.matrices, initial)
    return AmplitudePath(U.grid, states)
