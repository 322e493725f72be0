"""
Energy-type functionals of wave states.

Radial derivatives use fourth-order central differences with the even reflection
u(-r) = u(r) at the origin and one-sided fourth-order stencils at the outer edge.
Integrals are trapezoidal in r with weight r^2; the 4*pi factor is dropped.
Beyond R_max the field is continued by its theta / r tail, theta = R_max u(R_max),
which contributes |theta|^2 / R_max to the gradient term and F(theta) / (3 R_max^3)
to the potential term.
"""

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity


def radial_derivative(values: np.ndarray, dr: float) -> np.ndarray:
    """d/dr of an even radial field sampled at r_i = i dr, shape (nr, m)."""
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    padded = np.concatenate([v[2:0:-1], v])
    # padded[k] = v(k - 2), so v_{i+j} = padded[i + 2 + j]
    n = v.shape[0]
    out[:n - 2] = (-padded[4:n + 2] + 8.0 * padded[3:n + 1] - 8.0 * padded[1:n - 1] + padded[0:n - 2]) / (12.0 * dr)
    out[0] = 0.0
    out[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * dr)
    out[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) / (12.0 * dr)
    return out


def _weighted(s: WaveState, density: np.ndarray) -> float:
    r = s.grid
    return float(trapezoid(density * r ** 2, dx=s.dr))


def tail_charge(s: WaveState) -> np.ndarray:
    return s.r_max * s.u[-1]


def gradient_norm_sq(s: WaveState, with_tail: bool = True) -> float:
    """int |d_r u|^2 r^2 dr."""
    du = radial_derivative(s.u, s.dr)
    total = _weighted(s, np.sum(du * du, axis=1))
    if with_tail:
        theta = tail_charge(s)
        total += float(theta @ theta) / s.r_max
    return total


def kinetic_norm_sq(s: WaveState) -> float:
    """int |u_t|^2 r^2 dr."""
    return _weighted(s, np.sum(s.ut * s.ut, axis=1))


def potential_energy(nl: VectorNonlinearity, s: WaveState, with_tail: bool = True) -> float:
    """int F(u) r^2 dr."""
    total = _weighted(s, nl.energy_density(s.u))
    if with_tail:
        theta = tail_charge(s)
        total += float(nl.energy_density(theta)) / (3.0 * s.r_max ** 3)
    return total


def energy(nl: VectorNonlinearity, s: WaveState) -> float:
    """
    E = 1/2 int |d_r u|^2 + 1/2 int |u_t|^2 - int F(u).

    Raises:
        MissingPotential: If nl has no potential
    """
    potential = potential_energy(nl, s)
    return 0.5 * gradient_norm_sq(s) + 0.5 * kinetic_norm_sq(s) - potential


def norm_HH(s: WaveState) -> float:
    """||(u, u_t)||^2 in H x L^2: int (|d_r u|^2 + |u_t|^2) r^2 dr."""
    return gradient_norm_sq(s) + kinetic_norm_sq(s)


def exterior_energy(s: WaveState, R: float) -> float:
    """int_{r > R} (|u_t|^2 + |d_r u|^2) r^2 dr, tail included."""
    if not 0.0 <= R < s.r_max:
        raise ValueError(f"Exterior radius must lie in [0, {s.r_max}), got {R}")
    du = radial_derivative(s.u, s.dr)
    r = s.grid
    density = (np.sum(du * du, axis=1) + np.sum(s.ut * s.ut, axis=1)) * r ** 2
    cumulative = cumulative_trapezoid(density, dx=s.dr, initial=0.0)
    theta = tail_charge(s)
    inside = float(np.interp(R, r, cumulative))
    return float(cumulative[-1] - inside) + float(theta @ theta) / s.r_max
