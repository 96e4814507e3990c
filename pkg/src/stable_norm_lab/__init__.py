"""Counting homologically minimal closed geodesics on surfaces.

Modules: ``symplectic`` (integer symplectic lattices), ``surfaces`` (flat
tori, octagon and giraffe surfaces), ``enumeration`` (certified closed
geodesic catalogs), ``stable_norm`` (restricted stable norm tables),
``counting`` (N(T), N_Gamma, lattice counts, quadratic fits), ``giraffe``
(neck certificates and plane areas) and ``cli``.
"""

from .errors import (
    ConstructionError,
    DomainError,
    GiraffeCheckFailed,
    HorizonError,
    InvalidInputError,
    LabError,
    NonHyperbolicError,
    NotFoundError,
    PreconditionError,
    ResourceError,
)

__version__ = "0.1.0"
