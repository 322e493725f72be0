"""
Custom polynomial nonlinearities built from coefficient tables.

A table is either a field table (monomial multi-index of total degree 5 mapped to
a coefficient vector in R^m) or a potential table (multi-index of total degree 6
mapped to a scalar). Potentials are differentiated exactly; field tables get a
potential attached when they are a gradient, which is detected exactly through
Euler's identity F = u.f / 6.
"""

import logging
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

logger = logging.getLogger(__name__)

Powers = Tuple[int, ...]
VectorPolynomial = Dict[Powers, np.ndarray]
ScalarPolynomial = Dict[Powers, float]

GRADIENT_TOLERANCE = 1e-12


def _check_powers(powers: Sequence[int], m: int, degree: int) -> Powers:
    powers = tuple(int(p) for p in powers)
    if len(powers) != m:
        raise ValueError(f"Monomial {powers} has {len(powers)} exponents, expected {m}")
    if any(p < 0 for p in powers):
        raise ValueError(f"Monomial {powers} has a negative exponent")
    if sum(powers) != degree:
        raise ValueError(f"Monomial {powers} has total degree {sum(powers)}, expected {degree}")
    return powers


def _monomials(u: np.ndarray, exponents: Iterable[Powers]) -> Dict[Powers, np.ndarray]:
    values = {}
    for powers in exponents:
        term = np.ones(u.shape[:-1])
        for k, p in enumerate(powers):
            if p:
                term = term * u[..., k] ** p
        values[powers] = term
    return values


def _gradient(potential: ScalarPolynomial, m: int) -> VectorPolynomial:
    gradient: VectorPolynomial = {}
    for powers, coefficient in potential.items():
        for i, p in enumerate(powers):
            if p == 0:
                continue
            lowered = list(powers)
            lowered[i] -= 1
            key = tuple(lowered)
            gradient.setdefault(key, np.zeros(m))
            gradient[key][i] += coefficient * p
    return gradient


def _euler_potential(field_terms: VectorPolynomial, m: int) -> ScalarPolynomial:
    potential: ScalarPolynomial = {}
    for powers, coefficients in field_terms.items():
        for i in range(m):
            if coefficients[i] == 0.0:
                continue
            raised = list(powers)
            raised[i] += 1
            key = tuple(raised)
            potential[key] = potential.get(key, 0.0) + coefficients[i] / 6.0
    return potential


def _same_polynomial(a: VectorPolynomial, b: VectorPolynomial, m: int) -> bool:
    for key in set(a) | set(b):
        diff = a.get(key, np.zeros(m)) - b.get(key, np.zeros(m))
        scale = 1.0 + max(np.max(np.abs(a.get(key, np.zeros(m)))), np.max(np.abs(b.get(key, np.zeros(m)))))
        if np.max(np.abs(diff)) > GRADIENT_TOLERANCE * scale:
            return False
    return True


def _vector_evaluator(terms: VectorPolynomial, m: int):
    exponents = list(terms)
    coefficients = np.array([terms[k] for k in exponents]) if exponents else np.zeros((0, m))

    def evaluate(u: np.ndarray) -> np.ndarray:
        monomials = _monomials(u, exponents)
        out = np.zeros(u.shape)
        for idx, powers in enumerate(exponents):
            out = out + monomials[powers][..., None] * coefficients[idx]
        return out

    return evaluate


def _scalar_evaluator(terms: ScalarPolynomial):
    exponents = list(terms)

    def evaluate(u: np.ndarray) -> np.ndarray:
        monomials = _monomials(u, exponents)
        out = np.zeros(u.shape[:-1])
        for powers in exponents:
            out = out + terms[powers] * monomials[powers]
        return out

    return evaluate


def from_field_table(name: str, m: int, table: Iterable[Mapping]) -> VectorNonlinearity:
    """
    Build a nonlinearity from field monomials.

    Args:
        name: Identifier of the nonlinearity
        m: Number of components
        table: Entries {"powers": [...], "coefficients": [...]} of total degree 5

    Returns:
        The nonlinearity, with a potential attached if the field is a gradient

    Raises:
        ValueError: If an entry is not of total degree 5 or has the wrong size
    """
    terms: VectorPolynomial = {}
    for entry in table:
        powers = _check_powers(entry["powers"], m, 5)
        coefficients = np.asarray(entry["coefficients"], dtype=float)
        if coefficients.shape != (m,):
            raise ValueError(f"Monomial {powers} needs {m} coefficients, got {coefficients.shape}")
        terms[powers] = terms.get(powers, np.zeros(m)) + coefficients

    potential_terms = _euler_potential(terms, m)
    potential = None
    if _same_polynomial(_gradient(potential_terms, m), terms, m):
        potential = _scalar_evaluator(potential_terms)
    else:
        logger.info(f"Custom nonlinearity '{name}' is not a gradient field; no potential attached")

    return VectorNonlinearity(name=name, m=m, field_map=_vector_evaluator(terms, m), potential_map=potential)


def from_potential_table(name: str, m: int, table: Iterable[Mapping]) -> VectorNonlinearity:
    """
    Build a nonlinearity from potential monomials of total degree 6; f is the exact gradient.

    Raises:
        ValueError: If an entry is not of total degree 6
    """
    potential_terms: ScalarPolynomial = {}
    for entry in table:
        powers = _check_powers(entry["powers"], m, 6)
        potential_terms[powers] = potential_terms.get(powers, 0.0) + float(entry["coefficient"])

    field_terms = _gradient(potential_terms, m)
    return VectorNonlinearity(
        name=name,
        m=m,
        field_map=_vector_evaluator(field_terms, m),
        potential_map=_scalar_evaluator(potential_terms),
    )
