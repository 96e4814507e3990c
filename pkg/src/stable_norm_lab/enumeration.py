"""Enumeration of closed geodesics of bounded length as conjugacy classes.

Two certified strategies are implemented:

* ``dirichlet`` (octagon): the regular octagon centred at ``o = i`` is a
  Dirichlet domain whose side pairings are the generators.  Every class of
  length <= T has a representative whose axis passes within ``r_F`` of ``o``,
  so it lies in an explicit hyperbolic ball that is swept by breadth first
  search over tiles.  Classes are identified by conjugating representatives
  with short elements and keeping a canonical one.
* ``schottky`` (giraffe): below four collar half-widths of the neck every
  closed geodesic stays inside one torus factor, whose free group acts with a
  ping-pong domain bounded by four disjoint geodesics.  A word's axis crosses
  one tile per letter, so the distance between the entry side and the exit
  side of a prefix bounds the length of every cyclic word containing it.
"""

import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError, NonHyperbolicError, NotFoundError, PreconditionError, ResourceError
from .numerics import REL_TOL, collar_halfwidth, tol_for, trace_to_length
from .surfaces import LD, HyperbolicSurface, inv2, word_matrix
from .words import (
    Word,
    canonical_cyclic,
    cyclic_reduce,
    exponent_sums,
    format_word,
    inverse,
    letter_key,
    min_rotation,
    primitive_root,
    word_key,
)

#: default cap on group elements held in memory by the ball sweep
DEFAULT_BUDGET = 6_000_000


@dataclass(frozen=True)
class ConjugacyClass:
    canonical_word: Word
    length: float
    trace: float
    homology: Tuple[int, ...]
    root: Word = ()
    power: int = 1
    #: display key for classes without a word (flat tori)
    label: str = None

    @property
    def word_length(self) -> int:
        return len(self.canonical_word) if self.canonical_word is not None else 0

    @property
    def key(self) -> str:
        return self.label if self.label is not None else format_word(self.canonical_word)


@dataclass(frozen=True)
class Catalog:
    surface: HyperbolicSurface
    length_bound: float
    classes: Tuple[ConjugacyClass, ...]
    complete_flag: bool
    method: str = ""
    stats: Dict = field(default_factory=dict)

    def __len__(self):
        return len(self.classes)

    def words(self):
        return {c.canonical_word for c in self.classes}

    def by_word(self) -> Dict[Word, ConjugacyClass]:
        return {c.canonical_word: c for c in self.classes}

    def lookup(self, word) -> ConjugacyClass:
        if isinstance(word, str):
            for c in self.classes:
                if c.key == word:
                    return c
            raise NotFoundError(f"class {word!r} is not in the catalog")
        w = tuple(word)
        for c in self.classes:
            if c.canonical_word == w:
                return c
        raise NotFoundError(f"class {format_word(w)!r} is not in the catalog")

    def restrict(self, T: float) -> "Catalog":
        """Sub-catalog of classes with length <= T (still complete if this one is)."""
        if T > self.length_bound * (1 + REL_TOL):
            raise PreconditionError(f"cannot restrict to T={T} beyond the horizon {self.length_bound}")
        cls = tuple(c for c in self.classes if c.length <= T + tol_for(T))
        return Catalog(self.surface, T, cls, self.complete_flag, self.method, dict(self.stats))


def _sort_classes(classes):
    return tuple(sorted(classes, key=lambda c: (round(c.length, 9), word_key(c.canonical_word))))



def systole(cat: Catalog) -> float:
    if not cat.classes:
        raise NotFoundError(f"catalog up to T={cat.length_bound} is empty, no systole below the horizon")
    return min(c.length for c in cat.classes)


def worker_count(requested: Optional[int] = None) -> int:
    if requested:
        return max(1, int(requested))
    env = os.environ.get("STABLE_NORM_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidInputError(f"STABLE_NORM_LAB_THREADS must be an integer, got {env!r}") from None
    return 1


# --- Dirichlet domain machinery (octagon) ---------------------------------


def _cosh_dist_i(m: np.ndarray) -> np.ndarray:
    """cosh d(i, g i) for a stack of matrices with shape (..., 4)."""
    return 0.5 * np.sum(m * m, axis=-1)


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product of 2x2 matrices stored flat as (a, b, c, d)."""
    return np.stack(
        [
            a[..., 0] * b[..., 0] + a[..., 1] * b[..., 2],
            a[..., 0] * b[..., 1] + a[..., 1] * b[..., 3],
            a[..., 2] * b[..., 0] + a[..., 3] * b[..., 2],
            a[..., 2] * b[..., 1] + a[..., 3] * b[..., 3],
        ],
        axis=-1,
    )


def _inv(a: np.ndarray) -> np.ndarray:
    return np.stack([a[..., 3], -a[..., 1], -a[..., 2], a[..., 0]], axis=-1)


def _sign_normalize(m: np.ndarray) -> np.ndarray:
    # PSL: fix the sign so the trace is nonnegative (no element has trace 0)
    s = np.where(m[..., 0] + m[..., 3] < 0, -1.0, 1.0)
    return m * s[..., None]


def _mobius(m, z: complex) -> complex:
    return (m[0] * z + m[1]) / (m[2] * z + m[3])


def _cosh_dist(z: complex, w: complex) -> float:
    return 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)


def _offset_from_axis(cosh_d, length):
    """Distance from o to the axis, from d(o, g o) and the translation length."""
    d = np.arccosh(np.maximum(cosh_d, 1.0))
    sh = np.sinh(np.asarray(length) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.sinh(d / 2.0) / sh
    return np.arccosh(np.maximum(c, 1.0))


class DirichletGroup:
    """Surface group with a Dirichlet domain at i whose side pairings are the generators."""

    #: representatives are kept if their axis passes this close to o; the odd
    #: offset keeps the cut away from any symmetric configuration
    REP_SLACK = 0.1234567

    def __init__(self, surface: HyperbolicSurface, budget: int = DEFAULT_BUDGET):
        if surface.kind != "octagon":
            raise InvalidInputError("the Dirichlet sweep needs a surface whose generators pair the sides of a Dirichlet domain")
        self.surface = surface
        self.r_F = float(surface.metadata["circumradius"])
        self.r_rep = self.r_F + self.REP_SLACK
        self.budget = budget
        self.letters = [x for k in range(1, surface.ngens + 1) for x in (k, -k)]
        self.letter_mats = np.array([surface.letter_matrix(x).ravel() for x in self.letters])
        self.o = 1j
        # centres of the neighbouring tiles
        self.nbr = [_mobius(m, self.o) for m in self.letter_mats]
        # generic interior point used to spell elements
        self.o_gen = complex(0.0371, 1.0529)
        self._ball = None
        self._ball_radius = -1.0

    # -- spelling --------------------------------------------------------

    def reduce_point(self, q: complex, max_steps: int = 100000):
        """Word u (as letters) with u^-1 q in the closed Dirichlet domain."""
        word = []
        for _ in range(max_steps):
            base = _cosh_dist(q, self.o)
            best, best_gain = None, 0.0
            for x, c in zip(self.letters, self.nbr):
                gain = base - _cosh_dist(q, c)
                if gain > best_gain * (1 + 1e-12) + 1e-12 * base:
                    best, best_gain = x, gain
            if best is None:
                return tuple(word), q
            word.append(best)
            m = self.surface.letter_matrix(-best).ravel()
            q = _mobius(m, q)
        raise ResourceError("point reduction did not terminate")

    def spell(self, m) -> Word:
        """A word in the generators whose matrix is +-m (m must be a group element)."""
        m = np.asarray(m, dtype=float).ravel()
        w, _ = self.reduce_point(_mobius(m, self.o_gen))
        check = word_matrix(self.surface, w).ravel() if w else np.array([1.0, 0, 0, 1.0])
        scale = max(1.0, np.abs(m).max())
        if min(np.abs(check - m).max(), np.abs(check + m).max()) > 1e-6 * scale:
            raise NotFoundError("matrix is not an element of the surface group")
        return w

    # -- balls -----------------------------------------------------------

    def predicted_ball_size(self, radius: float) -> float:
        # hyperbolic disc area over the area 4 pi of the octagon
        return (math.cosh(radius) - 1.0) / 2.0 + 1.0

    def ball(self, radius: float) -> np.ndarray:
        """Sign-normalised matrices of all elements g with d(o, g o) <= radius."""
        if self._ball is not None and radius <= self._ball_radius:
            m = self._ball
            return m[_cosh_dist_i(m) <= math.cosh(radius) * (1 + 1e-12)]
        sweep = radius + self.r_F
        if self.predicted_ball_size(sweep) > self.budget:
            raise ResourceError(
                f"ball of radius {sweep:.3f} needs about {self.predicted_ball_size(sweep):.3g} elements, "
                f"over the budget of {self.budget}"
            )
        cosh_sweep = math.cosh(sweep) * (1 + 1e-12)
        ident = np.array([[1.0, 0.0, 0.0, 1.0]])
        levels = [ident]
        prev = np.zeros((0, 4))
        cur = ident
        total = 1
        while len(cur):
            cand = _mul(np.repeat(cur, len(self.letters), axis=0), np.tile(self.letter_mats, (len(cur), 1)))
            cand = cand[_cosh_dist_i(cand) <= cosh_sweep]
            cand = _sign_normalize(cand)
            # in a breadth first sweep neighbours of level k live in levels k-1, k, k+1
            new = self._new_rows(cand, [prev, cur])
            prev, cur = cur, new
            levels.append(new)
            total += len(new)
            if total > self.budget:
                raise ResourceError(f"ball sweep exceeded the budget of {self.budget} elements")
        m = np.concatenate(levels)
        self._ball, self._ball_radius = m, sweep - self.r_F
        return m[_cosh_dist_i(m) <= math.cosh(radius) * (1 + 1e-12)]

    def _new_rows(self, cand, old_blocks):
        if not len(cand):
            return cand
        old = np.concatenate([b for b in old_blocks if len(b)]) if any(len(b) for b in old_blocks) else np.zeros((0, 4))
        allm = np.concatenate([old, cand])
        keys = np.round(allm * 1e4).astype(np.int64)
        _, first = np.unique(keys, axis=0, return_index=True)
        first = first[first >= len(old)] - len(old)
        first.sort()
        return cand[first]

    # -- classes -----------------------------------------------------------

    def _canonical_rep(self, h: np.ndarray, length: float, conj_ball: np.ndarray, conj_inv: np.ndarray):
        """Canonical conjugate of h and the set of keys of its near-o conjugates."""
        c = _sign_normalize(_mul(_mul(conj_inv, np.broadcast_to(h, conj_ball.shape)), conj_ball))
        delta = _offset_from_axis(_cosh_dist_i(c), length)
        keep = delta <= self.r_rep
        c, delta = c[keep], delta[keep]
        # closest axis first, ties broken lexicographically on the entries
        dmin = delta.min()
        tied = c[delta <= dmin + 1e-9]
        best = tied[0]
        for row in tied[1:]:
            for a, b in zip(row, best):
                if abs(a - b) > 1e-8 * max(1.0, abs(a)):
                    if a < b:
                        best = row
                    break
        return best, c

    def enumerate(self, T: float) -> Tuple[List[ConjugacyClass], Dict]:
        D = 2.0 * math.asinh(math.cosh(self.r_rep) * math.sinh(T / 2.0))
        ball = self.ball(D)
        tr = np.abs(ball[:, 0] + ball[:, 3])
        hyp = tr > 2.0 + 1e-9
        length = np.zeros(len(ball))
        length[hyp] = 2.0 * np.arccosh(tr[hyp] / 2.0)
        sel = hyp & (length <= T + tol_for(T))
        reps, rep_len = ball[sel], length[sel]
        delta = _offset_from_axis(_cosh_dist_i(reps), rep_len)
        keep = delta <= self.r_rep
        reps, rep_len = reps[keep], rep_len[keep]
        order = np.lexsort((np.round(reps, 6).T[::-1])) if len(reps) else np.zeros(0, dtype=int)
        order = order[np.argsort(rep_len[order], kind="stable")]
        reps, rep_len = reps[order], rep_len[order]
        conj_ball = self.ball(2 * self.r_rep + T / 2.0)
        conj_inv = _inv(conj_ball)
        rep_index = {tuple(k): i for i, k in enumerate(np.round(reps * 1e4).astype(np.int64))}
        assigned = np.zeros(len(reps), dtype=bool)
        found = []
        for i in range(len(reps)):
            if assigned[i]:
                continue
            best, conj = self._canonical_rep(reps[i], rep_len[i], conj_ball, conj_inv)
            for k in np.round(conj * 1e4).astype(np.int64):
                j = rep_index.get(tuple(k))
                if j is not None:
                    assigned[j] = True
            found.append((best, rep_len[i]))
        classes = [self._make_class(m, ell) for m, ell in found]
        stats = {"ball_elements": int(len(self._ball)), "representatives": int(len(reps))}
        return classes, stats

    def _make_class(self, m, ell):
        w = canonical_cyclic(self.spell(m))
        trace = float(word_matrix(self.surface, w).trace())
        ngen = self.surface.ngens
        return ConjugacyClass(w, trace_to_length(trace), trace, exponent_sums(w, ngen))

    def identify(self, m) -> Word:
        """Canonical word of the conjugacy class of the group element m."""
        m = np.asarray(m, dtype=float).ravel()
        tr = abs(m[0] + m[3])
        if tr <= 2.0 + 1e-9:
            raise NonHyperbolicError(f"element with |trace| = {tr} is not hyperbolic")
        ell = trace_to_length(tr)
        # move the foot of o on the axis into the Dirichlet domain
        foot = _axis_foot(m, self.o)
        u, _ = self.reduce_point(foot)
        g = word_matrix(self.surface, u).ravel() if u else np.array([1.0, 0, 0, 1.0])
        h = _sign_normalize(_mul(_mul(_inv(g), m), g))
        conj_ball = self.ball(2 * self.r_rep + ell / 2.0)
        best, _ = self._canonical_rep(h, ell, conj_ball, _inv(conj_ball))
        return canonical_cyclic(self.spell(best))

    def identify_word(self, w) -> Word:
        return self.identify(word_matrix(self.surface, w))


def _axis_foot(m, z: complex) -> complex:
    """Point of the axis of hyperbolic m nearest to z."""
    a, b, c, d = (float(x) for x in m)
    if abs(c) < 1e-300:
        # axis is vertical through b/(d-a)
        x0 = b / (d - a)
        return complex(x0, abs(z - x0))
    tr = a + d
    s = math.sqrt(tr * tr - 4.0)
    p, q = (a - d + s) / (2 * c), (a - d - s) / (2 * c)
    # send p -> 0, q -> inf, take the point of the imaginary axis nearest the image of z
    w = (z - p) / (z - q)
    # the map may swap the half-planes; stay on the side where w lives
    y = complex(0.0, math.copysign(abs(w), w.imag))
    return (q * y - p) / (y - 1)


# --- Schottky factors (giraffe) -------------------------------------------


def _sl_mul(A, B):
    return (
        A[0] * B[0] + A[1] * B[2],
        A[0] * B[1] + A[1] * B[3],
        A[2] * B[0] + A[3] * B[2],
        A[2] * B[1] + A[3] * B[3],
    )


def _sl_inv(A):
    return (A[3], -A[1], -A[2], A[0])


def _killing(X, Y):
    # one half of tr(XY): Minkowski product on traceless matrices
    return 0.5 * (X[0] * Y[0] + X[1] * Y[2] + X[2] * Y[1] + X[3] * Y[3])


def _conj(g, X):
    return _sl_mul(_sl_mul(g, X), _sl_inv(g))


def _lie(X, Y):
    P, Q = _sl_mul(X, Y), _sl_mul(Y, X)
    return tuple(p - q for p, q in zip(P, Q))


def _unit(X):
    n = _killing(X, X)
    s = 1.0 / math.sqrt(abs(n))
    return tuple(x * s for x in X)


def _axis(g):
    """Unit spacelike matrix of the axis of a hyperbolic element: (2g - tr I)/sqrt(tr^2 - 4)."""
    a, b, c, d = g
    tr = a + d
    k = 1.0 / math.sqrt(tr * tr - 4.0)
    return (k * (a - d), 2 * k * b, 2 * k * c, k * (d - a))


class SchottkyFactor:
    """Free factor <x, y> of a surface group with a certified ping-pong domain.

    ``letters`` are the two global generator indices; the factor's words are
    spelled with the global letters so its classes drop into the catalog
    unchanged.  Arithmetic happens in a frame centred on the crossing of the
    two generator axes, where the matrices are small.
    """

    def __init__(self, surface: HyperbolicSurface, letters: Tuple[int, int]):
        self.surface = surface
        x, y = letters
        ext = surface.generators_ext or surface.generators
        A = np.array(ext[x - 1], dtype=LD)
        B = np.array(ext[y - 1], dtype=LD)
        N = self._centre_frame(A, B)
        Ni = inv2(N)
        self.gen = {}
        for k, M in ((x, A), (y, B)):
            t = tuple(float(v) for v in (Ni @ M @ N).ravel())
            self.gen[k] = t
            self.gen[-k] = _sl_inv(t)
        self.letters = sorted(self.gen, key=letter_key)
        self.x, self.y = x, y
        self.sides = self._build_sides()

    @staticmethod
    def _centre_frame(A, B):
        fa = tuple(float(v) for v in A.ravel())
        fb = tuple(float(v) for v in B.ravel())
        P = _lie(_axis(fa), _axis(fb))
        n = _killing(P, P)
        if n >= 0:
            raise PreconditionError("generator axes of a torus factor do not cross")
        P = _unit(P)
        if P[2] < 0:
            P = tuple(-v for v in P)
        v = 1.0 / P[2]
        z = complex(P[0] * v, v)
        # frame sending i to z
        return np.array([[math.sqrt(z.imag), z.real / math.sqrt(z.imag)], [0.0, 1.0 / math.sqrt(z.imag)]], dtype=LD)

    def word_matrix(self, w):
        M = (1.0, 0.0, 0.0, 1.0)
        for a in w:
            M = _sl_mul(M, self.gen[a])
        return M

    def _build_sides(self):
        x, y = self.x, self.y
        rots = [(x, y, -x, -y), (y, -x, -y, x), (-x, -y, x, y), (-y, x, y, -x)]
        axes = [_axis(self.word_matrix(r)) for r in rots]
        perp = {}
        for i in range(4):
            for j in range(i + 1, 4):
                L = _lie(axes[i], axes[j])
                if _killing(L, L) <= 0:
                    raise PreconditionError("neck lifts are not pairwise disjoint")
                perp[(i, j)] = _unit(L)
        # each generator carries one common perpendicular onto another
        sides = {}
        for a in (x, -x, y, -y):
            hits = [
                (pi, pj)
                for pi, Ci in perp.items()
                for pj, Cj in perp.items()
                if pi != pj and abs(abs(_killing(_conj(self.gen[a], Ci), Cj)) - 1.0) < 1e-6
            ]
            if len(hits) != 1:
                raise PreconditionError("could not match ping-pong sides to the generators")
            sides[-a], sides[a] = perp[hits[0][0]], perp[hits[0][1]]
        # orient: the centre i (point matrix [[0,-1],[1,0]]) on the negative side
        Pi = (0.0, -1.0, 1.0, 0.0)
        for a in list(sides):
            if _killing(Pi, sides[a]) > 0:
                sides[a] = tuple(-v for v in sides[a])
        self._certify(sides, Pi)
        return sides

    def _certify(self, sides, Pi):
        keys = list(sides)
        for i, a in enumerate(keys):
            if not _killing(Pi, sides[a]) < 0:
                raise PreconditionError("ping-pong centre lies on the wrong side")
            for b in keys[i + 1 :]:
                if not abs(_killing(sides[a], sides[b])) > 1.0 + 1e-9:
                    raise PreconditionError("ping-pong sides are not disjoint")
            # the generator sends the centre across its own side
            if not _killing(_conj(self.gen[a], Pi), sides[a]) > 0:
                raise PreconditionError("generator does not play ping-pong with its sides")
        # half-planes not nested: the foot of the centre on one side stays outside the others
        for a in keys:
            Xa = sides[a]
            k = _killing(Pi, Xa)
            foot = tuple(p - k * q for p, q in zip(Pi, Xa))
            for b in keys:
                if b != a and _killing(foot, sides[b]) > 0:
                    raise PreconditionError("ping-pong half-planes are nested")

    def lower_bound(self, M, first, last) -> float:
        """Length lower bound for cyclic words with a prefix starting at ``first``
        whose matrix before the final letter ``last`` is M."""
        ex = _conj(M, self.sides[last])
        best = math.inf
        for y in self.letters:
            if y == first:
                continue
            c = abs(_killing(self.sides[y], ex))
            best = min(best, math.acosh(c) if c > 1.0 else 0.0)
        return best

    def enumerate(self, T: float, budget: int = DEFAULT_BUDGET):
        """All canonical cyclic words of the factor with geodesic length <= T."""
        tol = tol_for(T)
        found = []
        nodes = 0
        ident = (1.0, 0.0, 0.0, 1.0)
        stack = [((), ident)]
        while stack:
            word, M = stack.pop()
            nodes += 1
            if nodes > budget:
                raise ResourceError(f"factor search exceeded the budget of {budget} nodes")
            k = len(word)
            for a in reversed(self.letters):
                if k and (a == -word[-1] or letter_key(a) < letter_key(word[0])):
                    continue
                if self.lower_bound(M, word[0] if k else a, a) > T + tol:
                    continue
                w2 = word + (a,)
                M2 = _sl_mul(M, self.gen[a])
                if w2[-1] != -w2[0] and min_rotation(w2) == w2:
                    tr = M2[0] + M2[3]
                    if abs(tr) > 2.0 + 1e-12:
                        ell = trace_to_length(tr)
                        if ell <= T + tol:
                            found.append((w2, ell, tr))
                stack.append((w2, M2))
        return found, nodes


def _giraffe_enumerate(surface: HyperbolicSurface, T: float, budget: int):
    meta = surface.metadata
    factors = [tuple(f) for f in meta.get("factors", [])]
    l_sep = float(meta["l_sep"])
    w = collar_halfwidth(l_sep)
    complete = T < 4.0 * w
    ngen = surface.ngens
    seen = {}
    nodes = 0
    for fi, f in enumerate(factors):
        fac = SchottkyFactor(surface, f)
        found, n = fac.enumerate(T, budget)
        nodes += n
        x, y = f
        comm = min_rotation((x, y, -x, -y))
        comm_inv = min_rotation(inverse((x, y, -x, -y)))
        for word, ell, tr in found:
            root, p = primitive_root(word)
            if fi > 0 and root in (comm, comm_inv):
                # powers of the neck were already produced by the first factor
                continue
            seen[word] = ConjugacyClass(word, ell, tr, exponent_sums(word, ngen), root, p)
    stats = {"search_nodes": nodes, "neck_collar_halfwidth": w, "crossing_threshold": 4.0 * w}
    return list(seen.values()), complete, stats


def enumerate_classes(s: HyperbolicSurface, T: float, budget: int = DEFAULT_BUDGET, workers: int = None) -> Catalog:
    """Every oriented closed geodesic of length <= T, as canonical conjugacy classes.

    ``complete_flag`` is true when the sweep is certified to have covered
    every class up to T.  Exceeding ``budget`` raises ResourceError; no
    partial catalog is returned.
    """
    if not T > 0:
        raise InvalidInputError(f"length bound must be positive, got {T!r}")
    if s.kind == "octagon":
        G = DirichletGroup(s, budget)
        raw, stats = G.enumerate(T)
        classes = _attach_roots(G, raw)
        complete, method = True, "dirichlet"
    elif s.kind == "giraffe":
        classes, complete, stats = _giraffe_enumerate(s, T, budget)
        method = "schottky"
    else:
        raise InvalidInputError(f"no certified enumeration strategy for surfaces of kind {s.kind!r}")
    stats["workers"] = worker_count(workers)
    return Catalog(s, float(T), _sort_classes(classes), complete, method, stats)


def _attach_roots(G: DirichletGroup, classes: List[ConjugacyClass]) -> List[ConjugacyClass]:
    """Fill in primitive roots: c = r^n for a catalog class r of length l(c)/n."""
    if not classes:
        return []
    classes = sorted(classes, key=lambda c: c.length)
    sys_len = classes[0].length
    out = []
    for c in classes:
        root, power = c.canonical_word, 1
        nmax = int(c.length / sys_len + 1e-9)
        for n in range(nmax, 1, -1):
            target = c.length / n
            hits = [
                r
                for r in out
                if r.power == 1
                and abs(r.length - target) <= 1e-7 * max(1.0, target)
                and tuple(n * v for v in r.homology) == c.homology
            ]
            for r in hits:
                if G.identify_word(r.canonical_word * n) == c.canonical_word:
                    root, power = r.canonical_word, n
                    break
            if power > 1:
                break
        out.append(ConjugacyClass(c.canonical_word, c.length, c.trace, c.homology, root, power))
    return out


def catalog_inverse_pairs(cat: Catalog, identify=None) -> Dict[Word, Word]:
    """Map each class to the class of its orientation reverse."""
    out = {}
    words = cat.words()
    for c in cat.classes:
        inv = canonical_cyclic(inverse(c.canonical_word))
        if inv not in words and identify is not None:
            inv = identify(inverse(c.canonical_word))
        out[c.canonical_word] = inv
    return out
