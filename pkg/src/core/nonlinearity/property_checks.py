"""
Sampled structural checks on vector nonlinearities.

Samples are drawn uniformly from the ball of radius 10; homogeneity makes the
radius immaterial and bounded samples keep degree-6 values far from overflow.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.core.errors import MissingPotential
from src.core.nonlinearity.sphere_grid import sample_ball, sphere_grid
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

logger = logging.getLogger(__name__)

SAMPLE_RADIUS = 10.0
# Sign flips of (f.w)(u.w) below this size are rounding, not violations.
DEFOCUSING_ROUNDING = 1e-14


@dataclass(frozen=True)
class DefocusingReport:
    direction: np.ndarray
    max_violation: float
    verdict: bool


def check_homogeneity(nl: VectorNonlinearity, samples: int, seed: int) -> float:
    """
    Largest relative defect of f(lambda u) = lambda^5 f(u) over seeded samples.

    Args:
        nl: Nonlinearity to test
        samples: Number of (lambda, u) pairs
        seed: Random seed

    Returns:
        max |f(lu) - l^5 f(u)| / (1 + l^5 |f(u)|)
    """
    if samples < 1:
        raise ValueError(f"Need at least one sample, got {samples}")
    rng = np.random.default_rng(seed)
    u = sample_ball(rng, samples, nl.m, SAMPLE_RADIUS)
    lam = rng.uniform(0.0, 4.0, size=(samples, 1))

    scaled = nl.eval(lam * u)
    reference = lam ** 5 * nl.eval(u)
    defect = np.linalg.norm(scaled - reference, axis=1)
    scale = 1.0 + np.linalg.norm(reference, axis=1)
    error = float(np.max(defect / scale))
    logger.debug(f"Homogeneity defect of {nl.name}: {error:.3e}")
    return error


def check_potential_gradient(nl: VectorNonlinearity, h: float, samples: int, seed: int) -> float:
    """
    Compare f with central differences of F, and u.f with 6F.

    Args:
        nl: Nonlinearity with a potential
        h: Finite-difference step, 0 < h < 1e-2
        samples: Number of sample points
        seed: Random seed

    Returns:
        The larger of the two relative errors over all samples

    Raises:
        MissingPotential: If nl has no potential
    """
    if not nl.has_potential:
        raise MissingPotential(f"Nonlinearity '{nl.name}' has no potential to differentiate")
    if not 0.0 < h < 1e-2:
        raise ValueError(f"Finite-difference step must lie in (0, 1e-2), got {h}")
    if samples < 1:
        raise ValueError(f"Need at least one sample, got {samples}")

    rng = np.random.default_rng(seed)
    u = sample_ball(rng, samples, nl.m, SAMPLE_RADIUS)
    f = nl.eval(u)

    gradient = np.empty_like(u)
    for k in range(nl.m):
        step = np.zeros(nl.m)
        step[k] = h
        gradient[:, k] = (nl.energy_density(u + step) - nl.energy_density(u - step)) / (2.0 * h)

    f_norm = np.linalg.norm(f, axis=1)
    gradient_error = np.linalg.norm(f - gradient, axis=1) / (1.0 + f_norm)

    euler_defect = np.abs(np.sum(u * f, axis=1) - 6.0 * nl.energy_density(u))
    euler_error = euler_defect / (1.0 + np.linalg.norm(u, axis=1) * f_norm)

    error = float(max(np.max(gradient_error), np.max(euler_error)))
    logger.debug(f"Potential gradient error of {nl.name} (h={h}): {error:.3e}")
    return error


def lipschitz_bound_fit(nl: VectorNonlinearity, samples: int, seed: int) -> float:
    """
    Smallest C with |f(u) - f(v)| <= C (|u|^4 + |v|^4) |u - v| over the sampled pairs.

    Half of the pairs are independent, the other half are close pairs, which
    test the derivative bound. Coincident pairs contribute 0.
    """
    if samples < 1:
        raise ValueError(f"Need at least one sample, got {samples}")
    rng = np.random.default_rng(seed)
    u = sample_ball(rng, samples, nl.m, SAMPLE_RADIUS)
    v = sample_ball(rng, samples, nl.m, SAMPLE_RADIUS)
    close = np.arange(samples) % 2 == 1
    jitter = 1e-3 * rng.standard_normal((samples, nl.m)) * np.linalg.norm(u, axis=1, keepdims=True)
    v[close] = u[close] + jitter[close]

    difference = np.linalg.norm(u - v, axis=1)
    weight = (np.linalg.norm(u, axis=1) ** 4 + np.linalg.norm(v, axis=1) ** 4) * difference
    numerator = np.linalg.norm(nl.eval(u) - nl.eval(v), axis=1)

    ratio = np.zeros(samples)
    positive = weight > 0.0
    ratio[positive] = numerator[positive] / weight[positive]
    return float(np.max(ratio))


def test_defocusing_direction(nl: VectorNonlinearity, omega, sphere_samples: int = 2000) -> DefocusingReport:
    """
    Check (f(u).omega)(u.omega) <= 0 on a sphere grid.

    Args:
        nl: Nonlinearity to test
        omega: Candidate defocusing direction, a unit vector
        sphere_samples: Number of grid points on the sphere

    Returns:
        DefocusingReport with the largest positive product found
    """
    omega = np.asarray(omega, dtype=float).reshape(nl.m)
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ValueError(f"Direction must be a unit vector, got norm {np.linalg.norm(omega)}")

    u = sphere_grid(nl.m, sphere_samples)
    f = nl.eval(u)
    products = (f @ omega) * (u @ omega)
    tolerance = DEFOCUSING_ROUNDING * (1.0 + np.linalg.norm(f, axis=1))
    violations = np.where(products > tolerance, products, 0.0)
    max_violation = float(np.max(violations))

    return DefocusingReport(direction=omega, max_violation=max_violation, verdict=max_violation <= 0.0)


# Not a pytest test despite its name.
test_defocusing_direction.__test__ = False
