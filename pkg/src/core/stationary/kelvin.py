from src.core.errors import DomainError
from src.core.stationary.radial_profile import RadialProfile


def kelvin_transform(p: RadialProfile) -> RadialProfile:
    """
    Kelvin inversion v(r) = (1/r) p(1/r).

    The transformed profile lives on [1/r_{n-1}, 1/r_0]. Its nodes are the
    inverted nodes of p, so node values are exact and the map is an involution there.

    Raises:
        DomainError: If p is defined down to r = 0
    """
    if p.r_min <= 0.0:
        raise DomainError("Kelvin transform needs a profile bounded away from the origin")

    old = p.grid[::-1][:, None]
    values = old * p.values[::-1]
    # v'(1/r) = -r^2 p(r) - r^3 p'(r)
    derivs = -old ** 2 * p.values[::-1] - old ** 3 * p.derivs[::-1]
    return RadialProfile(1.0 / p.grid[::-1], values, derivs)
