"""Deterministic point sets on the unit sphere of R^m."""

import numpy as np


def sphere_grid(m: int, count: int, seed: int = 0) -> np.ndarray:
    """
    Sample the unit sphere S^{m-1}.

    m = 1 gives {+1, -1}; m = 2 gives equally spaced angles; m = 3 gives a
    Fibonacci lattice; larger m falls back to seeded Gaussian directions.

    Args:
        m: Ambient dimension
        count: Requested number of points (ignored for m = 1)
        seed: Seed for m > 3

    Returns:
        Array of shape (n, m) of unit vectors
    """
    if m < 1:
        raise ValueError(f"Sphere dimension must be positive, got {m}")
    if count < 1:
        raise ValueError(f"Point count must be positive, got {count}")

    if m == 1:
        return np.array([[1.0], [-1.0]])

    if m == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(angles), np.sin(angles)], axis=-1)

    if m == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        golden_angle = np.pi * (3.0 - np.sqrt(5.0))
        phi = golden_angle * k
        return np.stack([radius * np.cos(phi), radius * np.sin(phi), z], axis=-1)

    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, m))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def sample_ball(rng: np.random.Generator, samples: int, m: int, radius: float = 10.0) -> np.ndarray:
    """Uniform samples in the closed ball of the given radius in R^m."""
    directions = rng.standard_normal((samples, m))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    radii = radius * rng.uniform(0.0, 1.0, size=(samples, 1)) ** (1.0 / m)
    return directions / norms * radii
