"""Counting functions for minimal geodesics and lattice points in planar regions.

Polygon predicates run on ``fractions.Fraction`` so that small-``t`` counts
are exact; only the radial (star-shaped) representation uses floats.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .enumeration import Catalog, ConjugacyClass
from .errors import InvalidInputError, PreconditionError
from .numerics import REL_TOL, leq, tol_for
from .stable_norm import MinimalityReport, StableNormTable, is_minimizing_multicurve
from .symplectic import Sublattice, SymplecticSpace, project, quotient_lattice

Point = Tuple[Fraction, Fraction]


# --- planar regions ---------------------------------------------------------


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InvalidInputError(f"rational must be [num, den], got {x!r}")
        num, den = x
        if int(den) == 0:
            raise InvalidInputError("zero denominator")
        return Fraction(int(num), int(den))
    if isinstance(x, bool):
        raise InvalidInputError("booleans are not coordinates")
    if isinstance(x, float) and not math.isfinite(x):
        raise InvalidInputError(f"non-finite coordinate {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"cannot read {x!r} as a rational") from exc


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b) -> bool:
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments [a,b] and [c,d] share a point (exact)."""
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and d1 and d2 and ((d3 > 0) != (d4 > 0)) and d3 and d4:
        return True
    return _on_segment(a, c, d) or _on_segment(b, c, d) or _on_segment(c, a, b) or _on_segment(d, a, b)


def polygon_area(vertices: Sequence[Point]) -> Fraction:
    """Signed shoelace area (positive for counterclockwise order)."""
    n = len(vertices)
    s = Fraction(0)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2


def is_simple(vertices: Sequence[Point]) -> bool:
    n = len(vertices)
    if len(set(vertices)) != n:
        return False
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        # adjacent edges may only share their common vertex
        nxt = edges[(i + 1) % n][1]
        if _cross(a, b, nxt) == 0 and (nxt[0] - b[0]) * (a[0] - b[0]) + (nxt[1] - b[1]) * (a[1] - b[1]) > 0:
            return False
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = edges[j]
            if segments_intersect(a, b, c, d):
                return False
    return True


def boundary_lattice_points(vertices: Sequence[Tuple[int, int]]) -> int:
    """Number of integer points on the boundary of a lattice polygon."""
    n = len(vertices)
    return sum(
        math.gcd(int(vertices[(i + 1) % n][0] - vertices[i][0]), int(vertices[(i + 1) % n][1] - vertices[i][1]))
        for i in range(n)
    )


@dataclass(frozen=True)
class PlanarRegion:
    """Compact planar region: a simple rational polygon or a star-shaped radial region.

    A radial region is the star-shaped polygon through the points
    ``radius_k * d_k / |d_k|`` taken in angular order around the origin.
    """

    kind: str
    vertices: Tuple[Point, ...] = ()
    directions: Tuple[Tuple[int, int], ...] = ()
    radii: Tuple[float, ...] = ()

    @classmethod
    def polygon(cls, vertices) -> "PlanarRegion":
        pts = tuple((_frac(v[0]), _frac(v[1])) for v in vertices)
        if len(pts) < 3:
            raise InvalidInputError(f"a polygon needs at least 3 vertices, got {len(pts)}")
        if polygon_area(pts) == 0:
            raise InvalidInputError("degenerate polygon: zero area")
        if not is_simple(pts):
            raise InvalidInputError("polygon is not simple (edges cross, overlap or repeat a vertex)")
        if polygon_area(pts) < 0:
            pts = pts[::-1]
        return cls("polygon", vertices=pts)

    @classmethod
    def radial(cls, directions, radii) -> "PlanarRegion":
        dirs = tuple((int(p), int(q)) for p, q in directions)
        rs = tuple(float(r) for r in radii)
        if len(dirs) != len(rs) or len(dirs) < 3:
            raise InvalidInputError("radial region needs at least 3 directions with one radius each")
        if any(d == (0, 0) for d in dirs):
            raise InvalidInputError("zero direction")
        if not all(r > 0 and math.isfinite(r) for r in rs):
            raise InvalidInputError("radii must be positive and finite")
        order = sorted(range(len(dirs)), key=lambda k: math.atan2(dirs[k][1], dirs[k][0]) % (2 * math.pi))
        dirs = tuple(dirs[k] for k in order)
        rs = tuple(rs[k] for k in order)
        ang = [math.atan2(q, p) % (2 * math.pi) for p, q in dirs]
        gaps = [(ang[(k + 1) % len(ang)] - ang[k]) % (2 * math.pi) for k in range(len(ang))]
        if len(set(dirs)) != len(dirs) or len(set(round(a, 15) for a in ang)) != len(ang):
            raise InvalidInputError("repeated ray direction")
        if max(gaps) >= math.pi:
            raise InvalidInputError("rays must surround the origin (every angular gap below pi)")
        return cls("radial", directions=dirs, radii=rs)

    def tips(self) -> np.ndarray:
        d = np.array(self.directions, dtype=float)
        return d / np.hypot(d[:, 0], d[:, 1])[:, None] * np.array(self.radii)[:, None]

    @property
    def area(self):
        """Exact Fraction for polygons, float for radial regions."""
        if self.kind == "polygon":
            return polygon_area(self.vertices)
        P = self.tips()
        Q = np.roll(P, -1, axis=0)
        return float(0.5 * np.sum(P[:, 0] * Q[:, 1] - P[:, 1] * Q[:, 0]))

    @property
    def perimeter(self) -> float:
        if self.kind == "polygon":
            V = self.vertices
            return sum(
                math.hypot(V[(i + 1) % len(V)][0] - V[i][0], V[(i + 1) % len(V)][1] - V[i][1]) for i in range(len(V))
            )
        P = self.tips()
        return float(np.sum(np.hypot(*(np.roll(P, -1, axis=0) - P).T)))

    def bounding_box(self):
        if self.kind == "polygon":
            xs = [v[0] for v in self.vertices]
            ys = [v[1] for v in self.vertices]
            return min(xs), min(ys), max(xs), max(ys)
        P = self.tips()
        return P[:, 0].min(), P[:, 1].min(), P[:, 0].max(), P[:, 1].max()

    def contains(self, x, y) -> bool:
        """Closed-set membership of the point (x, y)."""
        if self.kind == "polygon":
            x, y = _frac(x), _frac(y)
            V = self.vertices
            n = len(V)
            inside = False
            for i in range(n):
                a, b = V[i], V[(i + 1) % n]
                if _on_segment((x, y), a, b):
                    return True
                if (a[1] > y) != (b[1] > y):
                    xi = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
                    if xi > x:
                        inside = not inside
            return inside
        return bool(_radial_contains(self, np.array([[float(x), float(y)]]), 1.0)[0])


def region_from_json(obj) -> PlanarRegion:
    """Build a region from ``{"polygon": [[x, y], ...]}`` or ``{"radial": {...}}``.

    Coordinates are integers, decimal strings or ``[num, den]`` pairs.
    """
    if isinstance(obj, list):
        obj = {"polygon": obj}
    if not isinstance(obj, dict):
        raise InvalidInputError("region must be a JSON object or a vertex list")
    if "polygon" in obj:
        verts = obj["polygon"]
        if not isinstance(verts, list) or not all(isinstance(v, list) and len(v) == 2 for v in verts):
            raise InvalidInputError("polygon must be a list of [x, y] vertices")
        return PlanarRegion.polygon(verts)
    if "radial" in obj:
        r = obj["radial"]
        return PlanarRegion.radial(r["directions"], r["radii"])
    raise InvalidInputError("region needs a 'polygon' or 'radial' entry")


def _scanline_count(V: Sequence[Point], y: Fraction) -> int:
    """Integer x with (x, y) in the closed polygon."""
    n = len(V)
    crossings = []
    spans = []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        if a[1] == y:
            spans.append((a[0], a[0]))
        if a[1] == b[1]:
            if a[1] == y:
                spans.append((min(a[0], b[0]), max(a[0], b[0])))
            continue
        lo, hi = (a, b) if a[1] < b[1] else (b, a)
        # half-open in y so every vertex is crossed an even number of times overall
        if lo[1] <= y < hi[1]:
            crossings.append(lo[0] + (y - lo[1]) * (hi[0] - lo[0]) / (hi[1] - lo[1]))
    crossings.sort()
    for k in range(0, len(crossings) - 1, 2):
        spans.append((crossings[k], crossings[k + 1]))
    if not spans:
        return 0
    spans.sort()
    total = 0
    cur_lo, cur_hi = spans[0]
    for lo, hi in spans[1:]:
        if lo <= cur_hi:
            cur_hi = max(cur_hi, hi)
            continue
        total += max(0, math.floor(cur_hi) - math.ceil(cur_lo) + 1)
        cur_lo, cur_hi = lo, hi
    total += max(0, math.floor(cur_hi) - math.ceil(cur_lo) + 1)
    return total


def _radial_contains(region: PlanarRegion, pts: np.ndarray, t: float) -> np.ndarray:
    tips = region.tips() * t
    ang = np.mod(np.arctan2(tips[:, 1], tips[:, 0]), 2 * np.pi)
    pa = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
    k = np.searchsorted(ang, pa, side="right") - 1  # tip at or before the point, cyclically
    k = np.mod(k, len(ang))
    A = tips[k]
    B = tips[(k + 1) % len(ang)]
    # inside iff the point is on the origin side of chord AB (closed)
    cr = (B[:, 0] - A[:, 0]) * (pts[:, 1] - A[:, 1]) - (B[:, 1] - A[:, 1]) * (pts[:, 0] - A[:, 0])
    scale = np.hypot(B[:, 0] - A[:, 0], B[:, 1] - A[:, 1]) * np.maximum(1.0, np.hypot(pts[:, 0], pts[:, 1]))
    origin = pts[:, 0] ** 2 + pts[:, 1] ** 2 == 0
    return origin | (cr >= -1e-12 * scale)


def lattice_count(region: PlanarRegion, t) -> int:
    """Number of integer points in the dilate ``t * region`` (closed set)."""
    if isinstance(t, bool) or not (isinstance(t, (int, float, Fraction)) and t > 0):
        raise InvalidInputError(f"dilation must be a positive number, got {t!r}")
    if region.kind == "polygon":
        tf = _frac(t)
        V = [(x * tf, y * tf) for x, y in region.vertices]
        ys = [v[1] for v in V]
        return sum(_scanline_count(V, Fraction(y)) for y in range(math.ceil(min(ys)), math.floor(max(ys)) + 1))
    x0, y0, x1, y1 = (float(v) * float(t) for v in region.bounding_box())
    xs = np.arange(math.floor(x0), math.ceil(x1) + 1)
    total = 0
    for y in range(math.floor(y0), math.ceil(y1) + 1):
        pts = np.column_stack([xs, np.full(len(xs), y)]).astype(float)
        total += int(np.count_nonzero(_radial_contains(region, pts, float(t))))
    return total


@dataclass(frozen=True)
class LatticeAsymptotic:
    samples: Tuple[Tuple[float, int, float], ...]  # (t, count, count / t^2)
    area: Fraction
    perimeter: float
    final_deviation: float


def lattice_asymptotic(region: PlanarRegion, t_grid: Sequence) -> LatticeAsymptotic:
    if region.kind != "polygon":
        raise InvalidInputError("lattice_asymptotic needs a polygon (exact area)")
    rows = []
    for t in t_grid:
        c = lattice_count(region, t)
        rows.append((float(t), c, c / float(t) ** 2))
    area = region.area
    dev = abs(rows[-1][2] - float(area)) if rows else math.nan
    return LatticeAsymptotic(tuple(rows), area, region.perimeter, dev)


# --- counting series ----------------------------------------------------------


@dataclass(frozen=True)
class CountSeries:
    samples: Tuple[Tuple[float, int], ...]
    kind: str  # "N" or "N_Gamma"
    provenance: Dict = field(default_factory=dict)
    diagnostics: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("N", "N_Gamma"):
            raise InvalidInputError(f"unknown series kind {self.kind!r}")
        s = sorted(self.samples)
        for (_, c0), (_, c1) in zip(s, s[1:]):
            if c1 < c0:
                raise InvalidInputError("counts must be nondecreasing in T")
        if any(c < 0 for _, c in s):
            raise InvalidInputError("counts must be nonnegative")
        object.__setattr__(self, "samples", tuple((float(T), int(c)) for T, c in s))

    @property
    def T(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def counts(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])


def default_grid(T_max: float, n: int = 20, T_min: Optional[float] = None) -> List[float]:
    """``n`` log-spaced values ending at ``T_max`` (default start ``T_max / 10``)."""
    if not T_max > 0:
        raise InvalidInputError("grid end must be positive")
    T_min = T_max / 10 if T_min is None else T_min
    if not 0 < T_min <= T_max:
        raise InvalidInputError("need 0 < T_min <= T_max")
    g = list(np.geomspace(T_min, T_max, n))
    g[-1] = float(T_max)
    return [float(x) for x in g]


def _provenance(cat: Catalog) -> Dict:
    s = cat.surface
    out = {"kind": getattr(s, "kind", "flat_torus"), "horizon": cat.length_bound, "method": cat.method}
    meta = getattr(s, "metadata", None) or {}
    for k in ("l_sep", "torus_params"):
        if k in meta:
            out[k] = meta[k]
    return out


def _check_grid(grid, bound, what):
    grid = sorted(float(T) for T in grid)
    if not grid:
        raise InvalidInputError("empty grid")
    if grid[0] < 0:
        raise InvalidInputError("grid values must be nonnegative")
    if grid[-1] > bound + tol_for(bound):
        raise PreconditionError(f"grid value {grid[-1]} exceeds the {what} {bound}")
    return grid


def count_minimal(report: MinimalityReport, cat: Catalog, T_grid: Sequence[float]) -> CountSeries:
    """N(T): number of homology classes carrying a flagged-minimal geodesic of length <= T."""
    grid = _check_grid(T_grid, cat.length_bound, "catalog horizon")
    first: Dict[tuple, float] = {}
    for c in cat.classes:
        if report.flags.get(c.key) == "minimal":
            if c.homology not in first or c.length < first[c.homology]:
                first[c.homology] = c.length
    lengths = np.sort(np.fromiter(first.values(), dtype=float, count=len(first)))
    samples = []
    for T in grid:
        samples.append((T, int(np.searchsorted(lengths, T + tol_for(T), side="right"))))
    undecided = sum(1 for c in cat.classes if report.flags.get(c.key, "undecided") == "undecided" and c.length <= grid[-1])
    return CountSeries(tuple(samples), "N", _provenance(cat), {"undecided_below_grid": undecided})


def count_G_Gamma(table: StableNormTable, Gamma: Sequence[ConjugacyClass], L_grid: Sequence[float], cat: Catalog = None) -> CountSeries:
    """N_Gamma(L): classes alpha with length <= L and Gamma + alpha minimizing,
    deduplicated by the projection of [alpha] to L(Gamma).

    Geodesics whose class lies in V(Gamma) (multiples of the components of
    Gamma) are not counted.  The diagnostics record an audit comparing
    projection-dedup with full-homology dedup; any disagreement is listed as
    a genericity violation.
    """
    cat = cat if cat is not None else table.catalog
    Gamma = list(Gamma)
    if not Gamma:
        raise InvalidInputError("Gamma must have at least one component")
    ell_G = sum(c.length for c in Gamma)
    if not is_minimizing_multicurve(table, Gamma):
        raise PreconditionError("Gamma is not a minimizing multicurve")
    grid = _check_grid(L_grid, table.horizon - ell_G, "table horizon minus length(Gamma)")
    dim = len(Gamma[0].homology)
    if dim % 2:
        raise InvalidInputError("homology must have even dimension")
    space = SymplecticSpace(dim // 2)
    V = Sublattice.saturated_span([c.homology for c in Gamma], dim)
    q = quotient_lattice(space, V)
    Lmax = grid[-1] + tol_for(grid[-1])
    hits = []  # (length, projection, homology, key)
    outside = []
    for c in cat.classes:
        if c.length > Lmax or c.homology in V:
            continue
        if not is_minimizing_multicurve(table, Gamma + [c]):
            continue
        if c.homology not in q.ambient:
            outside.append(c.key)
            continue
        hits.append((c.length, project(q, c.homology), c.homology, c.key))
    hits.sort()
    first_proj: Dict[tuple, float] = {}
    by_proj: Dict[tuple, set] = {}
    for ell, p, h, _ in hits:
        first_proj.setdefault(p, ell)
        by_proj.setdefault(p, set()).add(h)
    lengths = np.sort(np.fromiter(first_proj.values(), dtype=float, count=len(first_proj)))
    samples = [(L, int(np.searchsorted(lengths, L + tol_for(L), side="right"))) for L in grid]
    violations = sorted((p, tuple(sorted(hs))) for p, hs in by_proj.items() if len(hs) > 1)
    n_full = len({h for _, _, h, _ in hits})
    diag = {
        "dedup_projection": len(first_proj),
        "dedup_homology": n_full,
        "genericity_violations": violations,
        "outside_V_perp": outside,
        "projection_matrix": q.projection_matrix,
        "Gamma": [c.key for c in Gamma],
    }
    prov = _provenance(cat)
    prov["Gamma"] = [c.key for c in Gamma]
    return CountSeries(tuple(samples), "N_Gamma", prov, diag)


# --- growth fits --------------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    coefficient: float
    residual: float
    window: Tuple[float, float]
    n_samples: int


def quadratic_fit(series: CountSeries, window=None) -> GrowthFit:
    """Least squares ``count ~ c T^2`` over samples with T in the closed window.

    The residual is the RMS of ``(count - c T^2) / T^2``.
    """
    if window is None:
        Tm = series.samples[-1][0] if series.samples else 0.0
        window = (Tm / 2, Tm)
    lo, hi = float(window[0]), float(window[1])
    pts = [(T, c) for T, c in series.samples if lo - tol_for(lo) <= T <= hi + tol_for(hi) and T > 0]
    if len(pts) < 5:
        raise PreconditionError(f"quadratic fit needs at least 5 samples in the window, got {len(pts)}")
    T = np.array([p[0] for p in pts])
    N = np.array([p[1] for p in pts], dtype=float)
    c = float(np.sum(N * T**2) / np.sum(T**4))
    res = float(np.sqrt(np.mean(((N - c * T**2) / T**2) ** 2)))
    return GrowthFit(c, res, (lo, hi), len(pts))


def minkowski_upper_check(series: CountSeries, vol_b1: float, dim: int, slack: float = 0.05) -> bool:
    """True iff every sample obeys count <= vol_b1 * T^dim * (1 + slack)."""
    if not vol_b1 > 0 or dim < 1 or slack < 0:
        raise InvalidInputError("need vol_b1 > 0, dim >= 1 and slack >= 0")
    return all(c <= vol_b1 * T**dim * (1 + slack) for T, c in series.samples)
