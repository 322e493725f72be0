"""
Registry of builtin nonlinearities and resolution of scenario references.

Sign convention: the focusing choice f(u) = |u|^4 u with F = +|u|^6 / 6 is used for
the Euclidean family, so that its stationary set is {omega W_(lambda)}.
"""

import re
from typing import Callable, Dict, List, Mapping

import numpy as np

from src.core.errors import UnknownName
from src.core.nonlinearity.polynomial import from_field_table, from_potential_table
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

_SIZED = re.compile(r"^(euclidean|decoupled|linear|f-u5u1)(?:-(\d+))?$")
_DEFAULT_M = {"euclidean": 2, "decoupled": 2, "linear": 1, "f-u5u1": 2}


def _norm(u: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(u * u, axis=-1))


def _scalar_focusing() -> VectorNonlinearity:
    return VectorNonlinearity("scalar-focusing", 1, lambda u: u ** 5, lambda u: u[..., 0] ** 6 / 6.0)


def _scalar_defocusing() -> VectorNonlinearity:
    return VectorNonlinearity("scalar-defocusing", 1, lambda u: -u ** 5, lambda u: -u[..., 0] ** 6 / 6.0)


def _euclidean(m: int) -> VectorNonlinearity:
    def field_map(u):
        return (_norm(u) ** 4)[..., None] * u

    def potential_map(u):
        return _norm(u) ** 6 / 6.0

    return VectorNonlinearity(f"euclidean-{m}", m, field_map, potential_map)


def _decoupled(m: int) -> VectorNonlinearity:
    return VectorNonlinearity(
        f"decoupled-{m}", m, lambda u: u ** 5, lambda u: np.sum(u ** 6, axis=-1) / 6.0
    )


def _linear(m: int) -> VectorNonlinearity:
    return VectorNonlinearity(
        f"linear-{m}", m, lambda u: np.zeros_like(u), lambda u: np.zeros(u.shape[:-1])
    )


def _mixed_cubic() -> VectorNonlinearity:
    def field_map(u):
        u1, u2 = u[..., 0], u[..., 1]
        return np.stack([u1 ** 2 * u2 ** 3, u1 ** 3 * u2 ** 2], axis=-1)

    def potential_map(u):
        return u[..., 0] ** 3 * u[..., 1] ** 3 / 3.0

    return VectorNonlinearity("mixed-cubic", 2, field_map, potential_map)


def _nonpotential_triangular() -> VectorNonlinearity:
    def field_map(u):
        u1, u2 = u[..., 0], u[..., 1]
        return np.stack([u1 ** 5, 5.0 * u1 ** 4 * u2], axis=-1)

    return VectorNonlinearity("nonpotential-triangular", 2, field_map, None)


def _f_u5u1(m: int) -> VectorNonlinearity:
    # F(u) = |u|^5 u_1 / 6, gradient (5/6)|u|^3 u_1 u + (1/6)|u|^5 e_1
    def field_map(u):
        norm = _norm(u)
        out = (5.0 / 6.0) * (norm ** 3 * u[..., 0])[..., None] * u
        out[..., 0] += norm ** 5 / 6.0
        return out

    def potential_map(u):
        return _norm(u) ** 5 * u[..., 0] / 6.0

    name = "f-u5u1" if m == 2 else f"f-u5u1-{m}"
    return VectorNonlinearity(name, m, field_map, potential_map)


_FIXED: Dict[str, Callable[[], VectorNonlinearity]] = {
    "scalar-focusing": _scalar_focusing,
    "scalar-defocusing": _scalar_defocusing,
    "mixed-cubic": _mixed_cubic,
    "nonpotential-triangular": _nonpotential_triangular,
}

_FAMILIES: Dict[str, Callable[[int], VectorNonlinearity]] = {
    "euclidean": _euclidean,
    "decoupled": _decoupled,
    "linear": _linear,
    "f-u5u1": _f_u5u1,
}


def builtin(name: str) -> VectorNonlinearity:
    """
    Look up a builtin nonlinearity.

    Sized families take an optional component count suffix, e.g. "euclidean-3".

    Args:
        name: Registry name

    Returns:
        The nonlinearity, with its potential attached where one exists

    Raises:
        UnknownName: If the name is not registered
    """
    if name in _FIXED:
        return _FIXED[name]()

    match = _SIZED.match(name)
    if match:
        family, size = match.group(1), match.group(2)
        m = int(size) if size else _DEFAULT_M[family]
        if m >= 1:
            return _FAMILIES[family](m)

    raise UnknownName(f"Unknown nonlinearity '{name}'. Available: {', '.join(list_builtins())}")


def list_builtins() -> List[str]:
    return sorted(_FIXED) + [f"{family}-m" for family in sorted(_FAMILIES)]


def resolve_nonlinearity(block: Mapping) -> VectorNonlinearity:
    """
    Resolve the "nonlinearity" block of a scenario document.

    Args:
        block: Either {"builtin": name} or {"custom": {"name", "m", "field" | "potential"}}

    Returns:
        The resolved nonlinearity

    Raises:
        UnknownName: For unregistered builtin names
        ValueError: For malformed custom tables
    """
    if "builtin" in block:
        return builtin(block["builtin"])

    custom = block.get("custom")
    if not custom:
        raise ValueError("Nonlinearity block needs either 'builtin' or 'custom'")

    name, m = custom["name"], int(custom["m"])
    if "potential" in custom:
        return from_potential_table(name, m, custom["potential"])
    if "field" in custom:
        return from_field_table(name, m, custom["field"])
    raise ValueError(f"Custom nonlinearity '{name}' needs a 'field' or 'potential' table")
