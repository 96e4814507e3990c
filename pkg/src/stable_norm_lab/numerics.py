"""Single source of truth for floating point length comparisons."""

import math

#: relative tolerance used for every length comparison in the lab
REL_TOL = 1e-9


def tol_for(x: float, rel: float = REL_TOL) -> float:
    return rel * max(1.0, abs(x))


def leq(a: float, b: float, rel: float = REL_TOL) -> bool:
    """``a <= b`` up to the global relative tolerance."""
    return a <= b + tol_for(b, rel)


def close(a: float, b: float, rel: float = REL_TOL) -> bool:
    return abs(a - b) <= tol_for(max(abs(a), abs(b)), rel)


def trace_to_length(trace: float) -> float:
    """Translation length of a hyperbolic element with the given trace."""
    return 2.0 * math.acosh(abs(trace) / 2.0)


def length_to_trace(length: float) -> float:
    return 2.0 * math.cosh(length / 2.0)


def collar_halfwidth(length: float) -> float:
    """Half-width of the standard collar around a simple closed geodesic."""
    from .errors import InvalidInputError

    if not length > 0:
        raise InvalidInputError(f"collar half-width needs a positive length, got {length!r}")
    return math.asinh(1.0 / math.sinh(length / 2.0))
