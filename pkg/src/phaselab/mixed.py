"""Mixed-state machinery: density matrices, interference observables,
transport conditions, equivalence-class transforms, and purification.

The directly observable quantities are the total phase arg Tr[U(T) rho(0)]
and the visibility |Tr[U(T) rho(0)]|.  Per-path phase transforms
U -> U sum_k e^{i theta_k} |k><k| leave the density-matrix orbit fixed but
shift both observables in a way computed here exactly; the Singh combination
of endpoint overlaps and connection integrals is the invariant alternative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .evolution import AmplitudePath, PropagatorPath
from .exceptions import (
    CapacityError,
    ContractError,
    DimensionError,
    UndefinedPhaseError,
)
from .gauge import GaugeFunction
from .linalg import hermitian_eigen, hermiticity_defect, unitarity_defect
from .numerics import central_diff, trapezoid
from .phases import path_connection

TRACE_FLOOR = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionError(f"density matrix must be square, got {rho.shape}")
        if hermiticity_defect(rho) > 1e-10:
            raise ContractError("density matrix not Hermitian to 1e-10")
        if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
            raise ContractError(f"density matrix trace {np.trace(rho):.12g} != 1")
        eigenvalues = np.linalg.eigvalsh(rho)
        if np.min(eigenvalues) < -1e-10:
            raise ContractError(
                f"density matrix has negative eigenvalue {np.min(eigenvalues):.3e}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Ensemble:
    """Probabilities omega_k over orthonormal states |k>."""

    weights: np.ndarray
    states: np.ndarray  # (k, dim)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        s = np.asarray(self.states, dtype=complex)
        if w.ndim != 1 or s.ndim != 2 or s.shape[0] != w.shape[0]:
            raise DimensionError("ensemble weights and states are inconsistent")
        if np.min(w) < 0.0:
            raise ContractError("ensemble weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ContractError(f"ensemble weights sum to {w.sum():.15g}, not 1")
        gram = np.conj(s) @ s.T
        if np.max(np.abs(gram - np.eye(s.shape[0]))) > 1e-10:
            raise ContractError("ensemble states must be orthonormal to 1e-10")

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]


@dataclass(frozen=True)
class PurifiedState:
    """Coefficients a_{n,m} of a system (rows) + ancilla (columns) pure state."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coefficients, dtype=complex)
        if a.ndim != 2:
            raise DimensionError("purified state coefficients must be a 2-D array")
        total = float(np.sum(np.abs(a) ** 2))
        if abs(total - 1.0) > 1e-12:
            raise ContractError(f"purified state norm^2 = {total:.15g}, not 1")

    @property
    def system_dim(self) -> int:
        return self.coefficients.shape[0]

    @property
    def ancilla_dim(self) -> int:
        return self.coefficients.shape[1]


def density_from_ensemble(e: Ensemble) -> DensityMatrix:
    """rho = sum_k omega_k |k><k|."""
    rho = np.einsum("k,ka,kb->ab", e.weights, e.states, np.conj(e.states))
    return DensityMatrix(rho)


def ensemble_from_density(rho: DensityMatrix) -> Ensemble:
    """Diagonal form via the deterministic eigendecomposition, weights descending."""
    vals, vecs = hermitian_eigen(rho.matrix, tol=1e-8)
    order = np.argsort(vals)[::-1]
    weights = np.clip(vals[order], 0.0, None)
    weights = weights / weights.sum()
    return Ensemble(weights=weights, states=vecs[:, order].T.copy())


def evolve_density(rho0: DensityMatrix, U: np.ndarray) -> DensityMatrix:
    """rho -> U rho U^dagger for a unitary U."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (rho0.dim, rho0.dim):
        raise DimensionError(f"unitary shape {U.shape} != density dim {rho0.dim}")
    if unitarity_defect(U) > 1e-10:
        raise ContractError("evolution matrix not unitary to 1e-10")
    return DensityMatrix(U @ rho0.matrix @ np.conj(U.T))


def mixed_total_phase(rho0: DensityMatrix, U_T: np.ndarray):
    """(arg Tr[U_T rho0], |Tr[U_T rho0]|): fringe shift and visibility."""
    U_T = np.asarray(U_T, dtype=complex)
    if U_T.shape != (rho0.dim, rho0.dim):
        raise DimensionError(f"unitary shape {U_T.shape} != density dim {rho0.dim}")
    tr = complex(np.trace(U_T @ rho0.matrix))
    visibility = abs(tr)
    if visibility < TRACE_FLOOR:
        raise UndefinedPhaseError(
            f"visibility {visibility:.2e} is zero: the mixed total phase is undefined"
        )
    return float(np.angle(tr)), float(visibility)


def interference_curve(rho0: DensityMatrix, U_T: np.ndarray, chi_nodes) -> np.ndarray:
    """1 + v cos(chi - gamma_T) per node; zero visibility gives the flat curve."""
    chi = np.asarray(chi_nodes, dtype=float)
    tr = complex(np.trace(np.asarray(U_T, dtype=complex) @ rho0.matrix))
    if abs(tr) < TRACE_FLOOR:
        return np.ones_like(chi)
    return 1.0 + abs(tr) * np.cos(chi - np.angle(tr))


def mixed_dynamical_phase(
    rho0: DensityMatrix, U: PropagatorPath, with_diagnostic: bool = False
):
    """gamma_D = -i int Tr[rho0 U^dagger dU/dt] dt, real part.

    The imaginary residual of the integrand is a pure discretization artifact;
    request it with with_diagnostic=True.
    """
    if rho0.dim != U.dim:
        raise DimensionError("density matrix and propagator dims differ")
    dU = central_diff(U.matrices, U.grid.dt)
    integrand = -1j * np.einsum(
        "ab,jbc,jca->j", rho0.matrix, np.conj(np.swapaxes(U.matrices, -2, -1)), dU
    )
    value = float(trapezoid(integrand.real, U.grid.dt))
    residual = float(np.max(np.abs(integrand.imag)))
    if with_diagnostic:
        return value, residual
    return value


def transform_evolution(
    U: PropagatorPath, theta: GaugeFunction, basis: Ensemble
) -> PropagatorPath:
    """U(t) -> U(t) sum_k e^{i theta_k(t)} |k><k| over a complete basis."""
    if basis.size != U.dim:
        raise DimensionError(
            f"basis with {basis.size} states cannot span dimension {U.dim}"
        )
    if len(theta.labels) != basis.size:
        raise DimensionError("one gauge label per basis state required")
    nodes = U.grid.nodes
    phases = np.stack(
        [np.exp(1j * theta.value(label, nodes)) for label in theta.labels], axis=1
    )  # (steps+1, k)
    B = basis.states.T  # columns are |k>
    kernel = np.einsum("ak,jk,bk->jab", B, phases, np.conj(B))
    return PropagatorPath(U.grid, U.matrices @ kernel, identity_start=False)


def singh_phase(weights, paths: Sequence[AmplitudePath]) -> float:
    """arg sum_k w_k <psi_k(0), psi_k(T)> exp[i int <psi_k| i d/dt psi_k> dt].

    Invariant under independent time-dependent phase transforms of each path.
    """
    weights = np.asarray(weights, dtype=float)
    paths = list(paths)
    if weights.shape != (len(paths),):
        raise DimensionError("one weight per path required")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise ContractError("weights must be normalized")
    gram0 = np.array([[np.vdot(a.initial, b.initial) for b in paths] for a in paths])
    if np.max(np.abs(gram0 - np.eye(len(paths)))) > 1e-10:
        raise ContractError("paths must be orthonormal at t = 0")
    if any(path.grid != paths[0].grid for path in paths):
        raise DimensionError("paths live on different grids")
    total = 0.0 + 0.0j
    for w, path in zip(weights, paths):
        overlap = np.vdot(path.initial, path.final)
        phase = trapezoid(path_connection(path), path.grid.dt)
        total += w * overlap * np.exp(1j * phase)
    if abs(total) < TRACE_FLOOR:
        raise UndefinedPhaseError("Singh-phase sum has vanishing magnitude")
    return float(np.angle(total))


def transport_conditions(rho0: DensityMatrix | Ensemble, U: PropagatorPath):
    """(weak residual, per-state strong residuals) of the transport conditions.

    weak: max_j |Tr rho0 U^dagger dU/dt|; strong: per k, max_j of
    |<k| U^dagger dU/dt |k>| (equal to the energy expectation along psi_k).
    A DensityMatrix input is diagonalized deterministically first.
    """
    ensemble = rho0 if isinstance(rho0, Ensemble) else ensemble_from_density(rho0)
    if ensemble.dim != U.dim:
        raise DimensionError("state dimension does not match the propagator")
    dU = central_diff(U.matrices, U.grid.dt)
    D = np.conj(np.swapaxes(U.matrices, -2, -1)) @ dU  # (steps+1, d, d)
    per_state = np.einsum("ka,jab,kb->jk", np.conj(ensemble.states), D, ensemble.states)
    strong = np.max(np.abs(per_state), axis=0)
    weak = float(np.max(np.abs(per_state @ ensemble.weights)))
    return weak, strong


def reduce(pure: PurifiedState) -> DensityMatrix:
    """Partial trace over the ancilla index: rho_{n,l} = sum_m a_{n,m} conj(a_{l,m})."""
    a = pure.coefficients
    return DensityMatrix(a @ np.conj(a.T))


def purify(
    rho: DensityMatrix, ancilla_dim: int, ancilla_unitary: np.ndarray | None = None
) -> PurifiedState:
    """Canonical purification a = V sqrt(lambda) in the eigenbasis of rho.

    Eigenvalues are placed in descending order on the ancilla index, so the
    Schmidt coefficients come out sorted.  Any other purification is reachable
    by the optional right-unitary on the ancilla index.
    """
    vals, vecs = hermitian_eigen(rho.matrix, tol=1e-8)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    rank = int(np.sum(vals > 1e-12))
    if ancilla_dim < rank:
        raise CapacityError(
            f"ancilla dimension {ancilla_dim} < rank(rho) = {rank}"
        )
    keep = min(ancilla_dim, rho.dim)
    a = np.zeros((rho.dim, ancilla_dim), dtype=complex)
    a[:, :keep] = vecs[:, :keep] * np.sqrt(vals[:keep])[None, :]
    a /= np.sqrt(np.sum(np.abs(a) ** 2))
    if ancilla_unitary is not None:
        W = np.asarray(ancilla_unitary, dtype=complex)
        if W.shape != (ancilla_dim, ancilla_dim):
            raise DimensionError("ancilla unitary has the wrong shape")
        if unitarity_defect(W) > 1e-10:
            raise ContractError("ancilla transform must be unitary")
        a = a @ W
    return PurifiedState(a)


def hidden_gauge_transform(
    pure: PurifiedState, phases, basis: np.ndarray
) -> PurifiedState:
    """Multiply each ensemble member |n> by the constant phase e^{i alpha_n}.

    `basis` holds the member states as columns; the reduced density matrix is
    unchanged whenever it is diagonal in that basis.
    """
    phases = np.asarray(phases, dtype=float)
    B = np.asarray(basis, dtype=complex)
    if B.shape != (pure.system_dim, pure.system_dim) or phases.shape != (pure.system_dim,):
        raise DimensionError("need one phase per system basis column")
    D = B @ np.diag(np.exp(1j * phases)) @ np.conj(B.T)
    return PurifiedState(D @ pure.coefficients)
