"""Closed forms for a spin-1/2 in a uniformly rotating magnetic field.

The field direction traces a cone of opening angle theta at frequency omega;
the coupling strength is mu_B (angular-frequency units, hbar = 1).  The
mixing angle alpha = atan2(omega sin(theta), 2 mu_B + omega cos(theta))
diagonalizes the effective Hamiltonian, after which the amplitudes, phases,
solid angles and interference values are all elementary expressions.  Every
numerical module in the package is tested against these formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .evolution import AmplitudePath, HamiltonianTrajectory, TimeGrid
from .exceptions import DimensionError
from .numerics import wrap_angle

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

BRANCHES = ("+", "-")


def _branch_sign(branch: str) -> float:
    if branch not in BRANCHES:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    return 1.0 if branch == "+" else -1.0


@dataclass(frozen=True)
class SpinParams:
    """Rotating-field parameters; big_theta is the superposition mixing angle."""

    mu_b: float
    omega: float
    theta: float
    big_theta: float = 0.0

    @cached_property
    def alpha(self) -> float:
        return alpha_of(self)

    @property
    def period(self) -> float:
        if self.omega == 0.0:
            raise DimensionError("period undefined at omega = 0")
        return 2.0 * np.pi / self.omega

    @property
    def beta_rate(self) -> float:
        """Phase rate separating the two exact amplitudes: 2 mu_B cos(alpha) + omega cos(theta - alpha)."""
        return 2.0 * self.mu_b * np.cos(self.alpha) + self.omega * np.cos(self.theta - self.alpha)


def alpha_of(p: SpinParams) -> float:
    """Principal mixing angle; the vanishing-denominator branch gives pi/2."""
    return float(np.arctan2(p.omega * np.sin(p.theta), 2.0 * p.mu_b + p.omega * np.cos(p.theta)))


def hamiltonian(p: SpinParams) -> HamiltonianTrajectory:
    """H(t) = -mu_B B_hat(t) . sigma with B_hat on the theta-cone."""
    sin_t, cos_t = np.sin(p.theta), np.cos(p.theta)

    def batch(times: np.ndarray) -> np.ndarray:
        phi = p.omega * np.asarray(times, dtype=float)
        bx = sin_t * np.cos(phi)
        by = sin_t * np.sin(phi)
        out = (
            bx[..., None, None] * SIGMA_X
            + by[..., None, None] * SIGMA_Y
            + cos_t * np.ones_like(phi)[..., None, None] * SIGMA_Z
        )
        return -p.mu_b * out

    def single(t: float) -> np.ndarray:
        return batch(np.array([t]))[0]

    return HamiltonianTrajectory(dim=2, evaluate=single, evaluate_batch=batch)


def w_basis(p: SpinParams, t):
    """Rotated eigenbasis w_+/- of the diagonalized effective Hamiltonian.

    Accepts a scalar or array of times; vectors are returned on the last axis.
    """
    t = np.asarray(t, dtype=float)
    half = 0.5 * (p.theta - p.alpha)
    rot = np.exp(-1j * p.omega * t)
    w_plus = np.stack(
        [np.cos(half) * rot, np.sin(half) * np.ones_like(rot)], axis=-1
    )
    w_minus = np.stack(
        [np.sin(half) * rot, -np.cos(half) * np.ones_like(rot)], axis=-1
    )
    return w_plus, w_minus


def energy_expectation(p: SpinParams, branch: str) -> float:
    """<w_branch | H | w_branch> = -/+ mu_B cos(alpha), constant in t."""
    return -_branch_sign(branch) * p.mu_b * np.cos(p.alpha)


def connection_value(p: SpinParams, branch: str) -> float:
    """<w_branch | i d/dt w_branch> = (omega/2)(1 +/- cos(theta - alpha))."""
    s = _branch_sign(branch)
    return 0.5 * p.omega * (1.0 + s * np.cos(p.theta - p.alpha))


def exact_amplitudes(p: SpinParams, t):
    """Exact Schroedinger amplitudes psi_+/- with psi(0) = w(0)."""
    t = np.asarray(t, dtype=float)
    w_plus, w_minus = w_basis(p, t)
    phase_plus = np.exp(
        -1j * (energy_expectation(p, "+") - connection_value(p, "+")) * t
    )
    phase_minus = np.exp(
        -1j * (energy_expectation(p, "-") - connection_value(p, "-")) * t
    )
    return w_plus * phase_plus[..., None], w_minus * phase_minus[..., None]


def amplitude_paths(p: SpinParams, grid: TimeGrid):
    """Exact amplitudes sampled on a grid, as AmplitudePath objects."""
    psi_plus, psi_minus = exact_amplitudes(p, grid.nodes)
    return AmplitudePath(grid, psi_plus), AmplitudePath(grid, psi_minus)


def geometric_phase(p: SpinParams, branch: str) -> float:
    """One-period geometric phase -pi (1 -/+ cos(theta - alpha)), wrapped."""
    s = _branch_sign(branch)
    return float(wrap_angle(-np.pi * (1.0 - s * np.cos(p.theta - p.alpha))))


def solid_angle(p: SpinParams) -> float:
    """Solid angle 2 pi (1 - cos(theta - alpha)) swept by the w_+ Bloch vector."""
    return 2.0 * np.pi * (1.0 - np.cos(p.theta - p.alpha))


def bloch_vector(v) -> np.ndarray:
    """Expectation values of the Pauli vector for a normalized 2-component state."""
    v = np.asarray(v, dtype=complex)
    if v.shape[-1] != 2:
        raise DimensionError("bloch_vector requires 2-component states")
    conj = np.conj(v)
    return np.stack(
        [
            np.real(np.einsum("...a,ab,...b->...", conj, sigma, v))
            for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z)
        ],
        axis=-1,
    )


def spherical_polygon_area(points: np.ndarray) -> float:
    """Signed solid angle enclosed by a closed path of unit vectors.

    The path is fanned into triangles from the north pole; each triangle
    contributes its signed solid angle via the van Oosterom-Strackee formula.
    Counterclockwise circulation around +z (viewed from outside) is positive.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DimensionError("expected an (M, 3) array of unit vectors")
    if not np.allclose(pts[0], pts[-1], atol=1e-9):
        pts = np.vstack([pts, pts[0]])
    apex = np.array([0.0, 0.0, 1.0])
    a, b = pts[:-1], pts[1:]
    triple = np.einsum("ij,ij->i", a, np.cross(b, apex))
    denom = 1.0 + a @ apex + b @ apex + np.einsum("ij,ij->i", a, b)
    return float(np.sum(2.0 * np.arctan2(triple, denom)))


def interference_value(p: SpinParams) -> float:
    """One-period interference 1 + cos[(mu_B cos alpha) T - Omega_+/2]."""
    T = p.period
    return 1.0 + np.cos(p.mu_b * np.cos(p.alpha) * T - 0.5 * solid_angle(p))


def tilde_basis(p: SpinParams, t):
    """Mixing-angle superposition basis; periodic only at commensurate rates."""
    t = np.asarray(t, dtype=float)
    w_plus, w_minus = w_basis(p, t)
    c, s = np.cos(0.5 * p.big_theta), np.sin(0.5 * p.big_theta)
    beta_phase = np.exp(-1j * p.beta_rate * t)[..., None]
    tilde_plus = c * w_plus + s * w_minus * beta_phase
    tilde_minus = -s * w_plus / beta_phase + c * w_minus
    return tilde_plus, tilde_minus


def tilde_energy_expectation(p: SpinParams, branch: str, t):
    """<w~ | H | w~> along the tilde basis (time dependent through beta)."""
    sign = _branch_sign(branch)
    beta = p.beta_rate * np.asarray(t, dtype=float)
    a, big = p.alpha, p.big_theta
    return -sign * p.mu_b * (np.cos(a) * np.cos(big) - np.sin(a) * np.sin(big) * np.cos(beta))


def tilde_connection(p: SpinParams, branch: str, t):
    """<w~ | i d/dt w~> along the tilde basis."""
    sign = _branch_sign(branch)
    beta = p.beta_rate * np.asarray(t, dtype=float)
    a, big = p.alpha, p.big_theta
    term = sign * p.mu_b * (np.cos(a) * (1.0 - np.cos(big)) + np.sin(a) * np.sin(big) * np.cos(beta))
    return term + 0.5 * p.omega * (1.0 + sign * np.cos(p.theta - p.alpha))


def mixed_trace(p: SpinParams) -> complex:
    """Tr[U(T) rho_mix(0)] for the big_theta mixture of psi_+/-, closed form."""
    T = p.period
    psi0_plus, psi0_minus = exact_amplitudes(p, 0.0)
    psiT_plus, psiT_minus = exact_amplitudes(p, T)
    c2 = np.cos(0.5 * p.big_theta) ** 2
    s2 = np.sin(0.5 * p.big_theta) ** 2
    return complex(
        c2 * np.vdot(psi0_plus, psiT_plus) + s2 * np.vdot(psi0_minus, psiT_minus)
    )
