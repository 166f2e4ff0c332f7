"""Shared builders for the test suite: spin scenarios, random matrices."""
from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest

from phaselab import SpinParams, TimeGrid, amplitude_path, propagate, spin_model
from phaselab.gauge import BasisFrame
from phaselab.mixed import DensityMatrix, Ensemble


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (A + np.conj(A.T))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))[None, :]


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ np.conj(A.T)
    return DensityMatrix(rho / np.trace(rho).real)


def build_spin_case(
    mu_b: float,
    omega: float,
    theta: float,
    big_theta: float = np.pi / 4,
    steps: int = 20000,
) -> SimpleNamespace:
    """Propagate one spin scenario over a period and package the pieces."""
    p = SpinParams(mu_b, omega, theta, big_theta)
    grid = TimeGrid(0.0, p.period, steps)
    H = spin_model.hamiltonian(p)
    U = propagate(H, grid)
    w_plus, w_minus = spin_model.w_basis(p, 0.0)
    path_plus = amplitude_path(U, w_plus)
    path_minus = amplitude_path(U, w_minus)
    weights = np.array([np.cos(big_theta / 2) ** 2, np.sin(big_theta / 2) ** 2])
    ensemble = Ensemble(weights=weights, states=np.array([w_plus, w_minus]))
    return SimpleNamespace(
        p=p,
        grid=grid,
        H=H,
        U=U,
        paths={"+": path_plus, "-": path_minus},
        weights=weights,
        ensemble=ensemble,
    )


def w_frame(p: SpinParams, grid: TimeGrid) -> BasisFrame:
    """BasisFrame of the closed-form w vectors sampled on the grid."""
    w_plus, w_minus = spin_model.w_basis(p, grid.nodes)
    return BasisFrame(grid, ("+", "-"), np.stack([w_plus, w_minus]))


@pytest.fixture(scope="session")
def generic_case():
    """Generic parameters: alpha away from 0 and pi/2, nonzero dynamics."""
    return build_spin_case(1.0, 1.0, np.pi / 3)


@pytest.fixture(scope="session")
def special_case():
    """The 2 mu_B + omega cos(theta) = 0 point: alpha = pi/2, pure transport."""
    return build_spin_case(1.0, 4.0, 2.0 * np.pi / 3, big_theta=np.pi / 3)
