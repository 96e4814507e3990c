"""Enumeration-restricted stable norm on integer homology.

``SN_T(h)`` is the least total length of a nonnegative integer combination
of catalog geodesics whose homology adds up to ``h``.  It is computed by a
Dijkstra sweep over Z^{2g} whose edges are the catalog classes, and it is an
upper bound for the true stable norm that is exact for classes whose optimal
multicurve uses only catalog geodesics.
"""

import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

from .enumeration import Catalog, ConjugacyClass
from .errors import HorizonError, InvalidInputError, NotFoundError, PreconditionError
from .numerics import REL_TOL, leq, tol_for
from .surfaces import FlatTorus, flat_class_length
from .words import format_word

Witness = Tuple[Tuple[str, int], ...]


def class_key(c: ConjugacyClass) -> str:
    return c.key


def root_key(c: ConjugacyClass) -> str:
    if c.canonical_word is None:
        return c.key if c.power == 1 else _flat_label(tuple(v // c.power for v in c.homology))
    return format_word(c.root or c.canonical_word)


@dataclass(frozen=True)
class StableNormTable:
    catalog: Catalog
    horizon: float
    values: Dict[Tuple[int, ...], Tuple[float, Witness]]
    genericity_violations: Tuple[Tuple[int, ...], ...] = ()
    complete: bool = True
    stats: Dict = field(default_factory=dict)

    def sn(self, h) -> float:
        h = tuple(int(v) for v in h)
        try:
            return self.values[h][0]
        except KeyError:
            raise HorizonError(f"class {h} has no stored value below the horizon {self.horizon}") from None

    def witness(self, h) -> Witness:
        h = tuple(int(v) for v in h)
        if h not in self.values:
            raise HorizonError(f"class {h} has no stored value below the horizon {self.horizon}")
        return self.values[h][1]

    def __contains__(self, h):
        return tuple(int(v) for v in h) in self.values

    @property
    def dim(self) -> int:
        return len(next(iter(self.values)))


def _atoms(cat: Catalog, T: float):
    """Shortest class per nonzero homology, lengths <= T."""
    best = {}
    for c in cat.classes:
        if not any(c.homology) or c.length > T + tol_for(T):
            continue
        cur = best.get(c.homology)
        if cur is None or (c.length, c.key) < (cur.length, cur.key):
            best[c.homology] = c
    return sorted(best.values(), key=lambda c: (c.length, c.key))


def _merge(w: Witness, key: str, mult: int) -> Witness:
    d = dict(w)
    d[key] = d.get(key, 0) + mult
    return tuple(sorted(d.items()))


def build_stable_norm_table(cat: Catalog, T: float) -> StableNormTable:
    """Dijkstra sweep from 0 over homology with catalog classes as edges, up to distance T.

    Witnesses are stored as sorted (root word, multiplicity) pairs so that a
    multiply traversed geodesic and repeated copies of its root compare equal.
    Classes reached by two different witnesses at equal cost (within the
    global tolerance) are reported as genericity violations.
    """
    if not T > 0:
        raise InvalidInputError(f"horizon must be positive, got {T!r}")
    if T > cat.length_bound * (1 + REL_TOL):
        raise PreconditionError(f"table horizon {T} exceeds the catalog bound {cat.length_bound}")
    atoms = _atoms(cat, T)
    dim = len(cat.classes[0].homology) if cat.classes else 2 * getattr(cat.surface, "genus", 1)
    zero = (0,) * dim
    # node -> [dist, witness, ambiguous]
    best: Dict[tuple, list] = {zero: [0.0, (), False]}
    settled: Dict[tuple, list] = {}
    heap = [(0.0, (), zero)]
    cutoff = T + tol_for(T)
    atom_data = [(a.homology, a.length, root_key(a), a.power) for a in atoms]
    while heap:
        d, wit, h = heapq.heappop(heap)
        if h in settled:
            continue
        entry = best[h]
        if entry[1] != wit:
            continue
        settled[h] = entry
        for ah, al, rk, pw in atom_data:
            nd = d + al
            if nd > cutoff:
                continue
            v = tuple(x + y for x, y in zip(h, ah))
            if v in settled:
                continue
            nw = _merge(wit, rk, pw)
            cur = best.get(v)
            if cur is None or nd < cur[0] - tol_for(nd):
                best[v] = [nd, nw, entry[2]]
                heapq.heappush(heap, (nd, nw, v))
            elif abs(nd - cur[0]) <= tol_for(nd):
                amb = cur[2] or entry[2] or nw != cur[1]
                if (nd, nw) < (cur[0], cur[1]) and nw != cur[1]:
                    best[v] = [nd, nw, amb]
                    heapq.heappush(heap, (nd, nw, v))
                else:
                    cur[2] = amb
    values = {h: (e[0], e[1]) for h, e in settled.items()}
    violations = tuple(sorted(h for h, e in settled.items() if e[2]))
    stats = {"atoms": len(atoms), "classes_stored": len(values)}
    return StableNormTable(cat, float(T), values, violations, bool(cat.complete_flag), stats)


# --- flat tori ------------------------------------------------------------


def _flat_label(h) -> str:
    p, q = h
    return f"a1^{p} b1^{q}"


def flat_class(t: FlatTorus, h) -> ConjugacyClass:
    """The closed geodesics of a flat torus in class h, as a catalog entry."""
    p, q = (int(v) for v in h)
    g = math.gcd(p, q)
    return ConjugacyClass(
        canonical_word=None,
        length=flat_class_length(t, (p, q)),
        trace=float("nan"),
        homology=(p, q),
        root=None,
        power=g,
        label=_flat_label((p, q)),
    )


def _flat_lattice_points(t: FlatTorus, T: float):
    # |p u + q v| <= T implies |p|, |q| <= T |v| / area and T |u| / area
    nu, nv = math.hypot(*t.u), math.hypot(*t.v)
    P = int(math.floor(T * nv / t.area)) + 1
    Q = int(math.floor(T * nu / t.area)) + 1
    for p in range(-P, P + 1):
        for q in range(-Q, Q + 1):
            if (p, q) != (0, 0):
                ell = flat_class_length(t, (p, q))
                if ell <= T + tol_for(T):
                    yield (p, q), ell


def flat_catalog(t: FlatTorus, T: float, primitive_only: bool = True) -> Catalog:
    """Catalog of closed geodesics of a flat torus with length <= T.

    With ``primitive_only`` only primitive classes are listed, which is all a
    stable-norm sweep needs.
    """
    classes = []
    for h, ell in _flat_lattice_points(t, T):
        if primitive_only and math.gcd(*h) != 1:
            continue
        classes.append(flat_class(t, h))
    classes.sort(key=lambda c: (round(c.length, 9), c.homology))
    return Catalog(t, float(T), tuple(classes), True, "flat", {})


def flat_stable_norm_table(t: FlatTorus, T: float) -> StableNormTable:
    """Closed-form table: on a flat torus the stable norm is the Euclidean norm,
    realised by the straight geodesic (k times its primitive root)."""
    values = {(0, 0): (0.0, ())}
    for h, ell in _flat_lattice_points(t, T):
        g = math.gcd(*h)
        root = (h[0] // g, h[1] // g)
        values[h] = (ell, ((_flat_label(root), g),))
    cat = Catalog(t, float(T), (), True, "flat-analytic", {})
    return StableNormTable(cat, float(T), values, (), True, {"classes_stored": len(values)})


# --- queries ----------------------------------------------------------------


@dataclass(frozen=True)
class MinimalityReport:
    flags: Dict[str, str]
    margins: Dict[str, float]

    def minimal(self):
        return {k for k, v in self.flags.items() if v == "minimal"}

    def decided(self):
        return {k for k, v in self.flags.items() if v != "undecided"}


def minimality_flags(cat: Catalog, table: StableNormTable) -> MinimalityReport:
    """Flag each class: minimal iff its length is within tolerance of SN(its homology).

    Classes longer than the table horizon, and would-be minimal classes of an
    incomplete catalog, are undecided.
    """
    flags, margins = {}, {}
    for c in cat.classes:
        k = c.key
        if c.length > table.horizon + tol_for(table.horizon) or c.homology not in table.values:
            flags[k] = "undecided"
            margins[k] = math.nan
            continue
        sn = table.values[c.homology][0]
        margins[k] = c.length - sn
        if leq(c.length, sn):
            flags[k] = "minimal" if (cat.complete_flag and table.complete) else "undecided"
        else:
            flags[k] = "non-minimal"
    return MinimalityReport(flags, margins)


def is_minimizing_multicurve(table: StableNormTable, parts: Sequence[ConjugacyClass]) -> bool:
    """Length additivity test: sum of lengths equals SN of the summed homology."""
    parts = list(parts)
    if not parts:
        return True
    total = sum(p.length for p in parts)
    if total > table.horizon + tol_for(table.horizon):
        raise PreconditionError(f"multicurve length {total:.6g} exceeds the table horizon {table.horizon}")
    h = tuple(sum(v) for v in zip(*(p.homology for p in parts)))
    if h not in table.values:
        raise HorizonError(f"summed class {h} is missing from the table")
    return leq(total, table.values[h][0])


def unit_ball_radius(table: StableNormTable, direction) -> float:
    """Radius of the stable-norm unit ball along the ray through ``direction``."""
    h = tuple(int(v) for v in direction)
    if not any(h):
        raise InvalidInputError("direction must be nonzero")
    if h not in table.values:
        raise NotFoundError(f"class {h} is not reachable below the horizon {table.horizon}")
    return math.sqrt(sum(v * v for v in h)) / table.values[h][0]


def witness_consistent(table: StableNormTable, h, lengths: Dict[str, float], homologies: Dict[str, tuple]) -> bool:
    """Re-sum a stored witness from root lengths and homologies."""
    sn, wit = table.values[tuple(h)]
    L = sum(m * lengths[k] for k, m in wit)
    H = [0] * len(h)
    for k, m in wit:
        for i, v in enumerate(homologies[k]):
            H[i] += m * v
    return tuple(H) == tuple(h) and abs(L - sn) <= tol_for(sn)


def root_tables(cat: Catalog):
    """(lengths, homologies) of primitive roots keyed like witness entries."""
    lengths, homs = {}, {}
    for c in cat.classes:
        k = root_key(c)
        if k in lengths:
            continue
        lengths[k] = c.length / c.power
        homs[k] = tuple(v // c.power for v in c.homology)
    return lengths, homs
