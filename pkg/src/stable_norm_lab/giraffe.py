"""Giraffe surfaces: long thin necks, symplectic planes and the growth constant.

A giraffe is cut by separating geodesics with long thin necks into pieces of
genus at most one.  Each torus piece contributes a symplectic plane S_i and
the homologically minimal count grows like ``sum_i area(S_i ∩ B_1) T^2``
where ``B_1`` is the stable-norm unit ball.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .counting import CountSeries, GrowthFit, PlanarRegion, count_G_Gamma, count_minimal, default_grid, quadratic_fit
from .enumeration import Catalog, ConjugacyClass, enumerate_classes
from .errors import GiraffeCheckFailed, HorizonError, InvalidInputError, NotFoundError, PreconditionError
from .numerics import collar_halfwidth
from .stable_norm import StableNormTable, build_stable_norm_table, minimality_flags
from .surfaces import HyperbolicSurface, word_geodesic_length, word_homology, word_trace
from .symplectic import SymplecticSpace, determinant, intersection
from .words import canonical_cyclic, format_word, inverse, parse_word


@dataclass(frozen=True)
class NeckCertificate:
    curve: ConjugacyClass
    feasible_r: Optional[float]
    collar_bound: float
    criterion_value: float  # 2r - l cosh r at the best admissible r
    best_r: float

    @property
    def feasible(self) -> bool:
        return self.feasible_r is not None

    def to_json(self) -> Dict:
        return {
            "curve": self.curve.key,
            "length": self.curve.length,
            "feasible": self.feasible,
            "feasible_r": self.feasible_r,
            "collar_bound": self.collar_bound,
            "criterion_value": self.criterion_value,
        }


def neck_value(length: float, r: float) -> float:
    """2r minus the length of the boundary of the r-neighbourhood of the geodesic."""
    return 2.0 * r - length * math.cosh(r)


def _designated(s: HyperbolicSurface, curve: ConjugacyClass) -> bool:
    if curve.canonical_word is None:
        return False
    w = canonical_cyclic(curve.canonical_word)
    for sep in s.separating_words:
        if w in (canonical_cyclic(sep), canonical_cyclic(inverse(sep))):
            return True
    return False


def neck_criterion(s: HyperbolicSurface, curve: ConjugacyClass) -> NeckCertificate:
    """Check 2r >= l cosh r for some r in (0, collar half-width].

    ``2r - l cosh r`` is concave in r with its maximum at sinh r = 2 / l, so
    the best admissible radius is that point clipped to the collar.
    """
    if any(curve.homology):
        raise PreconditionError(f"curve {curve.key} has homology {curve.homology}; a neck must be separating")
    if not _designated(s, curve):
        raise PreconditionError(f"curve {curve.key} is not a designated separating curve of this surface")
    ell = curve.length
    w = collar_halfwidth(ell)
    r = min(math.asinh(2.0 / ell), w)
    val = neck_value(ell, r)
    return NeckCertificate(curve, r if val >= 0 else None, w, val, r)


@dataclass(frozen=True)
class GiraffeDecomposition:
    necks: Tuple[NeckCertificate, ...]
    planes: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    def to_json(self) -> Dict:
        return {"necks": [n.to_json() for n in self.necks], "planes": [[list(a), list(b)] for a, b in self.planes]}


def _separating_class(s: HyperbolicSurface, cat: Optional[Catalog], w) -> ConjugacyClass:
    if cat is not None:
        try:
            return cat.lookup(w)
        except (NotFoundError, KeyError):
            pass
    cw = canonical_cyclic(w)
    return ConjugacyClass(cw, word_geodesic_length(s, cw), word_trace(s, cw), word_homology(s, cw))


def decompose(s: HyperbolicSurface, cat: Optional[Catalog] = None) -> GiraffeDecomposition:
    """Neck certificates for the designated separating curves plus the planes S_i."""
    meta = getattr(s, "metadata", None) or {}
    seps = getattr(s, "separating_words", [])
    if not seps or "planes" not in meta:
        raise PreconditionError("surface has no designated separating curves; cannot certify a giraffe")
    necks = []
    for w in seps:
        cert = neck_criterion(s, _separating_class(s, cat, w))
        if not cert.feasible:
            raise GiraffeCheckFailed(f"neck {cert.curve.key} fails the long-thin-neck test", certificate=cert)
        necks.append(cert)
    planes = tuple((tuple(map(int, a)), tuple(map(int, b))) for a, b in meta["planes"])
    space = SymplecticSpace(s.genus)
    if len(planes) != s.genus:
        raise GiraffeCheckFailed(f"expected {s.genus} planes, got {len(planes)}")
    for i, (a, b) in enumerate(planes):
        if abs(intersection(space, a, b)) != 1:
            raise GiraffeCheckFailed(f"plane {i} basis does not have intersection +-1")
        for a2, b2 in planes[i + 1:]:
            if any(intersection(space, u, v) for u in (a, b) for v in (a2, b2)):
                raise GiraffeCheckFailed(f"plane {i} is not symplectically orthogonal to a later plane")
    if abs(determinant([v for p in planes for v in p])) != 1:
        raise GiraffeCheckFailed("plane bases do not span the integer homology")
    return GiraffeDecomposition(tuple(necks), planes)


# --- radial area of a plane section of the unit ball ---------------------------


@dataclass(frozen=True)
class AreaEstimate:
    area: float
    bound: float  # discretization bound
    inner: float  # area of the polygon through the computed boundary points
    outer: float  # convex outer bound from the same points
    n_directions: int
    n_rays: int


def primitive_directions(height: int) -> List[Tuple[int, int]]:
    """Primitive integer vectors with max(|p|, |q|) <= height, in angular order."""
    out = []
    for p in range(-height, height + 1):
        for q in range(-height, height + 1):
            if (p, q) != (0, 0) and math.gcd(p, q) == 1:
                out.append((p, q))
    out.sort(key=lambda v: math.atan2(v[1], v[0]) % (2 * math.pi))
    return out


def _height_for(n_rays: int) -> int:
    h = 1
    while len(primitive_directions(h)) < n_rays:
        h += 1
    return h


def _sn_function(source, plane) -> Callable[[int, int], Optional[float]]:
    if isinstance(source, StableNormTable):
        a, b = (tuple(map(int, v)) for v in plane)

        def f(p, q):
            h = tuple(p * x + q * y for x, y in zip(a, b))
            v = source.values.get(h)
            return None if v is None else v[0]

        return f
    if callable(source):
        return lambda p, q: float(source(p, q))
    raise InvalidInputError("sn source must be a StableNormTable or a callable (p, q) -> value")


def _clip(poly, a, b):
    """Keep the part of poly on the origin side of the line through a, b."""
    def side(p):
        return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])

    s0 = side((0.0, 0.0))
    if abs(s0) < 1e-300:
        return poly
    out = []
    n = len(poly)
    for i in range(n):
        P, Q = poly[i], poly[(i + 1) % n]
        sp, sq = side(P) * s0, side(Q) * s0
        if sp >= 0:
            out.append(P)
        if (sp >= 0) != (sq >= 0):
            t = sp / (sp - sq)
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    return out


def _poly_area(poly) -> float:
    if len(poly) < 3:
        return 0.0
    P = np.array(poly)
    Q = np.roll(P, -1, axis=0)
    return abs(0.5 * float(np.sum(P[:, 0] * Q[:, 1] - P[:, 1] * Q[:, 0])))


def _outer_excess(tips: np.ndarray) -> float:
    n = len(tips)
    R = 4.0 * float(np.max(np.hypot(tips[:, 0], tips[:, 1])))
    excess = 0.0
    for k in range(n):
        A, B = tips[k], tips[(k + 1) % n]
        P0, P3 = tips[k - 1], tips[(k + 2) % n]
        uA, uB = A / np.hypot(*A), B / np.hypot(*B)
        quad = [tuple(A), tuple(R * uA), tuple(R * uB), tuple(B)]
        # beyond the chord AB, inside both neighbouring chord lines (convexity)
        region = _clip(quad, tuple(P0), tuple(A))
        region = _clip(region, tuple(B), tuple(P3))
        excess += _poly_area(region)
    return excess


def plane_ball_area_estimate(source: Union[StableNormTable, Callable], plane=((1, 0), (0, 1)), n_rays: int = 360) -> AreaEstimate:
    """Area of the stable-norm unit ball inside a plane, by radial integration.

    Boundary points ``v / sn(v)`` are taken on primitive integer directions
    ``v = p*alpha + q*beta`` (the finest family with at least ``n_rays``
    members, restricted to classes the table covers).  The area is the
    trapezoidal value of ``∫ r(θ)^2 / 2 dθ`` on ``n_rays`` equally spaced
    angles, with r read off the polygon through those points.  The reported
    bound is the gap to a convex outer polygon plus twice the quadrature error.
    """
    if isinstance(n_rays, bool) or not isinstance(n_rays, (int, np.integer)) or n_rays < 8:
        raise InvalidInputError("n_rays must be an integer >= 8")
    f = _sn_function(source, plane)
    for basic in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        if f(*basic) is None:
            raise HorizonError(f"plane direction {basic} has no stable-norm value below the horizon")
    dirs, radii = [], []
    for p, q in primitive_directions(_height_for(int(n_rays))):
        v = f(p, q)
        if v is None:
            continue
        if not v > 0:
            raise InvalidInputError(f"stable norm of direction {(p, q)} is not positive: {v}")
        dirs.append((p, q))
        radii.append(math.hypot(p, q) / v)
    region = PlanarRegion.radial(dirs, radii)
    tips = region.tips()
    ang = np.mod(np.arctan2(tips[:, 1], tips[:, 0]), 2 * np.pi)
    theta = 2 * np.pi * np.arange(int(n_rays)) / int(n_rays)
    k = np.mod(np.searchsorted(ang, theta, side="right") - 1, len(ang))
    A, B = tips[k], tips[(k + 1) % len(ang)]
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    D = B - A
    r = (A[:, 0] * D[:, 1] - A[:, 1] * D[:, 0]) / (u[:, 0] * D[:, 1] - u[:, 1] * D[:, 0])
    trap = float(0.5 * np.sum(r**2) * (2 * np.pi / int(n_rays)))
    inner = float(region.area)
    outer = inner + _outer_excess(tips)
    bound = (outer - inner) + 2 * abs(trap - inner)
    return AreaEstimate(trap, bound, inner, outer, len(dirs), int(n_rays))


def plane_ball_area(source, plane=((1, 0), (0, 1)), n_rays: int = 360) -> float:
    return plane_ball_area_estimate(source, plane, n_rays).area


# --- growth theorem check -----------------------------------------------------


@dataclass(frozen=True)
class GiraffeTheoremReport:
    fit: GrowthFit
    sum_areas: float
    gap: float
    tol: float
    passed: bool

    def to_json(self) -> Dict:
        return {
            "fit": {"c": self.fit.coefficient, "residual": self.fit.residual, "window": list(self.fit.window)},
            "sum_areas": self.sum_areas,
            "gap": self.gap,
            "tol": self.tol,
            "pass": self.passed,
        }


def giraffe_theorem_check(series: CountSeries, areas: Sequence[float], tol: float = 0.15, window=None) -> GiraffeTheoremReport:
    """Compare the quadratic-fit constant of N(T) with the sum of plane areas.

    Only series from a giraffe (or synthetic series) are accepted.  The fit
    window defaults to the upper half of the sampled range.
    """
    kind = series.provenance.get("kind")
    if kind not in ("giraffe", "synthetic"):
        raise PreconditionError(f"giraffe areas say nothing about a series from a {kind!r} surface")
    if series.kind != "N":
        raise PreconditionError("the growth theorem concerns N(T) series")
    if not tol > 0:
        raise InvalidInputError("tolerance must be positive")
    total = float(sum(areas))
    if not total > 0:
        raise InvalidInputError("plane areas must sum to a positive value")
    fit = quadratic_fit(series, window)
    gap = abs(fit.coefficient - total) / total
    return GiraffeTheoremReport(fit, total, gap, float(tol), bool(gap <= tol))


@dataclass
class GiraffePipeline:
    """Everything produced by one end-to-end giraffe run."""

    surface: HyperbolicSurface
    catalog: Catalog
    table: StableNormTable
    decomposition: GiraffeDecomposition
    areas: List[AreaEstimate]
    series: CountSeries
    report: GiraffeTheoremReport
    gamma_series: Optional[CountSeries] = None
    timings: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        out = self.decomposition.to_json()
        out["areas"] = [a.area for a in self.areas]
        out["area_bounds"] = [a.bound for a in self.areas]
        out.update(self.report.to_json())
        out["horizon"] = self.catalog.length_bound
        out["classes"] = len(self.catalog)
        out["complete"] = bool(self.catalog.complete_flag)
        out["genericity_violations_table"] = len(self.table.genericity_violations)
        out["series"] = [list(s) for s in self.series.samples]
        if self.gamma_series is not None:
            d = self.gamma_series.diagnostics
            out["gamma_audit"] = {
                "Gamma": d["Gamma"],
                "dedup_projection": d["dedup_projection"],
                "dedup_homology": d["dedup_homology"],
                "genericity_violations": len(d["genericity_violations"]),
            }
        return out


def run_pipeline(s: HyperbolicSurface, T: float, n_rays: int = 360, tol: float = 0.15, grid=None, gamma_word="a1", budget=None) -> GiraffePipeline:
    """Enumerate, tabulate, certify and fit on a giraffe surface up to length T."""
    import time

    times = {}
    t0 = time.time()
    dec = decompose(s)
    kw = {} if budget is None else {"budget": budget}
    cat = enumerate_classes(s, T, **kw)
    times["enumerate"] = time.time() - t0
    dec = decompose(s, cat)
    table = build_stable_norm_table(cat, T)
    rep = minimality_flags(cat, table)
    times["table"] = time.time() - t0
    areas = [plane_ball_area_estimate(table, plane, n_rays) for plane in dec.planes]
    series = count_minimal(rep, cat, grid if grid is not None else default_grid(T))
    report = giraffe_theorem_check(series, [a.area for a in areas], tol)
    gs = None
    if gamma_word:
        G = cat.lookup(parse_word(gamma_word) if isinstance(gamma_word, str) else gamma_word)
        Lmax = T - G.length
        gs = count_G_Gamma(table, [G], default_grid(Lmax), cat)
    times["total"] = time.time() - t0
    return GiraffePipeline(s, cat, table, dec, areas, series, report, gs, times)
