"""Concrete surfaces: flat tori and genus-2 hyperbolic surfaces in SL(2, R).

Hyperbolic surfaces act on the upper half-plane by Moebius maps.  Words are
tuples of signed generator indices (see :mod:`stable_norm_lab.words`).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import ConstructionError, InvalidInputError, NonHyperbolicError
from .numerics import collar_halfwidth, trace_to_length  # noqa: F401  (re-export)
from .words import exponent_sums, make_word, parse_word, relation_word

#: generators must have determinant 1 to this accuracy
DET_TOL = 1e-12
#: the surface relation must hold to this accuracy
RELATION_TOL = 1e-9
#: |trace| must exceed 2 by this margin for an element to count as hyperbolic
HYPERBOLIC_MARGIN = 1e-9

LD = np.longdouble


@dataclass(frozen=True)
class FlatTorus:
    u: Tuple[float, float]
    v: Tuple[float, float]

    def __post_init__(self):
        if abs(self.u[0] * self.v[1] - self.u[1] * self.v[0]) == 0:
            raise InvalidInputError("torus basis vectors are linearly dependent")

    @property
    def area(self) -> float:
        return abs(self.u[0] * self.v[1] - self.u[1] * self.v[0])


def flat_class_length(t: FlatTorus, h) -> float:
    """Length of the shortest closed geodesic in class h = (p, q)."""
    p, q = h
    x = p * t.u[0] + q * t.v[0]
    y = p * t.u[1] + q * t.v[1]
    return math.hypot(x, y)


def inv2(m: np.ndarray) -> np.ndarray:
    """Inverse of a determinant-one 2x2 matrix."""
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def commutator(x, y):
    return x @ y @ inv2(x) @ inv2(y)


@dataclass(frozen=True)
class HyperbolicSurface:
    genus: int
    generators: Tuple[np.ndarray, ...]
    relation_residual: float
    kind: str = "custom"
    metadata: Dict = field(default_factory=dict)
    #: optional long double copies, used for single-word evaluation
    generators_ext: Tuple[np.ndarray, ...] = None

    @property
    def ngens(self) -> int:
        return 2 * self.genus

    def letter_matrix(self, x: int, extended: bool = False) -> np.ndarray:
        if x == 0 or abs(x) > self.ngens:
            raise InvalidInputError(f"bad generator index {x} for genus {self.genus}")
        gens = self.generators_ext if (extended and self.generators_ext is not None) else self.generators
        g = gens[abs(x) - 1]
        return g if x > 0 else inv2(g)

    @property
    def separating_words(self):
        return [parse_word(w) for w in self.metadata.get("separating_words", [])]


def make_surface(generators: Sequence, kind="custom", metadata=None) -> HyperbolicSurface:
    """Validate generators and measure the relation residual.

    Long double input is kept as the extended-precision copy.
    """
    ext = []
    for g in generators:
        g = np.array(g).reshape(2, 2)
        g = g.astype(LD if g.dtype == LD else float)
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        if abs(det - 1) > DET_TOL:
            raise ConstructionError(f"generator has determinant {float(det)!r}, not 1")
        ext.append(g)
    if len(ext) % 2 or not ext:
        raise ConstructionError("need an even, positive number of generators")
    genus = len(ext) // 2
    R = np.eye(2, dtype=ext[0].dtype)
    for i in range(genus):
        R = R @ commutator(ext[2 * i], ext[2 * i + 1])
    I = np.eye(2)
    R = R.astype(float)
    res = min(np.linalg.norm(R - I, 2), np.linalg.norm(R + I, 2))
    if res > RELATION_TOL:
        raise ConstructionError(f"surface relation fails, residual {res:.3e}")
    gens = []
    for g in ext:
        f = g.astype(float)
        f.setflags(write=False)
        g.setflags(write=False)
        gens.append(f)
    has_ext = ext[0].dtype == LD
    return HyperbolicSurface(genus, tuple(gens), float(res), kind, dict(metadata or {}),
                             tuple(ext) if has_ext else None)


def word_matrix(s: HyperbolicSurface, w: Sequence[int]) -> np.ndarray:
    """Product of generator matrices along the word (left to right).

    Surfaces carrying long double generators are evaluated in long double.
    """
    w = make_word(w, s.ngens)
    use_ext = s.generators_ext is not None
    M = np.eye(2, dtype=LD if use_ext else float)
    for x in w:
        M = M @ s.letter_matrix(x, extended=use_ext)
    return M


def word_trace(s: HyperbolicSurface, w) -> float:
    return float(np.trace(word_matrix(s, w)))


def word_geodesic_length(s: HyperbolicSurface, w) -> float:
    """Translation length 2 arccosh(|tr|/2) of the element spelled by w."""
    tr = abs(word_trace(s, w))
    if tr <= 2.0 + HYPERBOLIC_MARGIN:
        raise NonHyperbolicError(f"word has |trace| = {tr!r} <= 2, not a hyperbolic element")
    return trace_to_length(tr)


def word_homology(s: HyperbolicSurface, w) -> Tuple[int, ...]:
    return exponent_sums(w, s.ngens)


# --- the regular octagon -------------------------------------------------


def _rot(t):
    # elliptic of angle t about i
    return np.array([[np.cos(t / 2), np.sin(t / 2)], [-np.sin(t / 2), np.cos(t / 2)]])


def _tr(t):
    # translation by t along the imaginary axis
    return np.array([[np.exp(t / 2), LD(0)], [LD(0), np.exp(-t / 2)]])


#: distance from the centre i of the regular octagon to each side
OCTAGON_INRADIUS = math.acosh(1 + math.sqrt(2))
#: distance from the centre to each vertex
OCTAGON_CIRCUMRADIUS = math.acosh(3 + 2 * math.sqrt(2))

_PI_LD = 4 * np.arctan(LD(1))
_INRADIUS_LD = np.arccosh(1 + np.sqrt(LD(2)))


def _side_pairing(i, j):
    # maps side i of the octagon centred at i onto side j (long double)
    return _rot(j * _PI_LD / 4 + _PI_LD) @ _tr(-2 * _INRADIUS_LD) @ _rot(-i * _PI_LD / 4)


def build_octagon_surface() -> HyperbolicSurface:
    """Genus-2 surface from the regular octagon with sides glued a1 b1 A1 B1 a2 b2 A2 B2.

    The octagon centred at i is a Dirichlet domain; its eight side pairings
    are exactly the generators and their inverses.
    """
    gens = [
        inv2(_side_pairing(0, 2)),
        _side_pairing(1, 3),
        inv2(_side_pairing(4, 6)),
        _side_pairing(5, 7),
    ]
    meta = {"dirichlet_center": [0.0, 1.0], "circumradius": OCTAGON_CIRCUMRADIUS}
    return make_surface(gens, kind="octagon", metadata=meta)


# --- giraffes ------------------------------------------------------------


def _one_holed_torus(x, y, l_sep):
    """Generators A, B with traces x, y and tr[A,B] = -2 cosh(l_sep/2), in long double."""
    if x <= 2 or y <= 2:
        raise ConstructionError(f"torus traces must exceed 2, got ({x}, {y})")
    x, y, l_sep = LD(x), LD(y), LD(l_sep)
    c = x * x + y * y - 2 + 2 * np.cosh(l_sep / 2)
    disc = (x * y) ** 2 - 4 * c
    if disc < 0:
        raise ConstructionError(
            f"traces ({float(x)}, {float(y)}) admit no one-holed torus with boundary length "
            f"{float(l_sep)}: discriminant {float(disc):.6g} < 0"
        )
    z = (x * y + np.sqrt(disc)) / 2
    lam = (x + np.sqrt(x * x - 4)) / 2
    a = (z - y / lam) / (lam - 1 / lam)
    d = y - a
    bc = a * d - 1
    if bc > 0:
        b = cc = np.sqrt(bc)
    elif bc < 0:
        b, cc = np.sqrt(-bc), -np.sqrt(-bc)
    else:
        b, cc = LD(1), LD(0)
    A = np.array([[lam, 0], [0, 1 / lam]], dtype=LD)
    B = np.array([[a, b], [cc, d]], dtype=LD)
    return A, B, z


def _axis_frame(K):
    """Moebius N with N(0), N(inf) the repelling/attracting fixed points of K
    and N(i) the point of the axis nearest to i."""
    (a, b), (c, d) = K
    if abs(c) < 1e-14:
        raise ConstructionError("gluing curve has a fixed point at infinity")
    disc = np.sqrt((a + d) ** 2 - 4)
    p1 = (a - d + disc) / (2 * c)
    p2 = (a - d - disc) / (2 * c)
    # derivative at a fixed point is (c z + d)^-2, so attracting means |c z + d| > 1
    att, rep = (p1, p2) if abs(c * p1 + d) > 1 else (p2, p1)
    N0 = np.array([[att, rep], [1, 1]], dtype=LD)
    if att - rep < 0:
        N0 = np.array([[att, -rep], [1, -1]], dtype=LD)
    N0 = _unit_det(N0 * np.sign(_det(N0)))
    Ni = inv2(N0)
    # N0^-1 maps the axis to the imaginary axis; |N0^-1(i)| is the height of the foot
    num = complex(Ni[0, 0]) * 1j + complex(Ni[0, 1])
    den = complex(Ni[1, 0]) * 1j + complex(Ni[1, 1])
    k = LD(abs(num)) / LD(abs(den))
    return N0 @ np.diag([np.sqrt(k), 1 / np.sqrt(k)]).astype(LD)


def _det(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _unit_det(m):
    return m / np.sqrt(_det(m))


def _conj(n, m):
    return n @ m @ inv2(n)


def build_giraffe_genus2(l_sep: float, torus_params=((3.0, 3.0), (3.0, 3.0))) -> HyperbolicSurface:
    """Two one-holed tori glued with zero twist along a separating geodesic of length l_sep.

    ``torus_params`` gives the traces (tr a_i, tr b_i) for each torus.  The
    free trace tr(a_i b_i) is solved for from the commutator trace identity.
    The construction runs in long double; the generators are kept in both
    precisions.
    """
    if not l_sep > 0:
        raise ConstructionError(f"separating length must be positive, got {l_sep!r}")
    try:
        (x1, y1), (x2, y2) = torus_params
        x1, y1, x2, y2 = (float(t) for t in (x1, y1, x2, y2))
    except (TypeError, ValueError) as exc:
        raise ConstructionError(f"torus_params must be two pairs of traces: {exc}") from None
    A1, B1, z1 = _one_holed_torus(x1, y1, l_sep)
    A2, B2, z2 = _one_holed_torus(x2, y2, l_sep)
    K1 = commutator(A1, B1)
    K2 = commutator(A2, B2)
    # frame where the gluing axis is the imaginary axis with foot point i;
    # torus 2 is turned by a half turn about i, which is the zero-twist gluing
    S = np.array([[0, 1], [-1, 0]], dtype=LD)
    N1 = inv2(_axis_frame(K1))
    N2 = S @ inv2(_axis_frame(K2))
    gens = [_unit_det(_conj(N1, m)) for m in (A1, B1)] + [_unit_det(_conj(N2, m)) for m in (A2, B2)]
    meta = {
        "l_sep": l_sep,
        "torus_params": [[x1, y1], [x2, y2]],
        "torus_traces_ab": [float(z1), float(z2)],
        "twist": 0.0,
        "separating_words": ["a1 b1 A1 B1"],
        "factors": [[1, 2], [3, 4]],
        "planes": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]],
    }
    s = make_surface(gens, kind="giraffe", metadata=meta)
    measured = word_geodesic_length(s, relation_word(1))
    if abs(measured - l_sep) > 1e-9 * max(1.0, l_sep):
        raise ConstructionError(f"separating curve measures {measured!r}, wanted {l_sep!r}")
    return s


def surface_from_spec(spec: Dict):
    """Build a surface from a JSON-style dict with a ``kind`` key."""
    kind = spec.get("kind")
    if kind == "flat_torus":
        u = tuple(float(x) for x in spec.get("u", (1.0, 0.0)))
        v = tuple(float(x) for x in spec.get("v", (0.0, 1.0)))
        if len(u) != 2 or len(v) != 2:
            raise InvalidInputError("flat torus vectors must have two entries")
        return FlatTorus(u, v)
    if kind == "octagon":
        return build_octagon_surface()
    if kind == "giraffe":
        params = spec.get("torus_params", ((3.0, 3.0), (3.0, 3.0)))
        return build_giraffe_genus2(float(spec.get("l_sep", 0.1)), params)
    raise InvalidInputError(f"unknown surface kind {kind!r}")
