"""Independent reference computations used by the tests."""

import math
from fractions import Fraction

import numpy as np
import sympy

from stable_norm_lab.symplectic import Sublattice, SymplecticSpace

from stable_norm_lab.words import canonical_cyclic

LETTERS = (1, -1, 2, -2, 3, -3, 4, -4)


def reduced_words_with_traces(surface, max_len):
    """Every freely reduced word of length 1..max_len with its trace.

    Words are grown level by level as numpy matrix stacks with parent links,
    then rebuilt letter by letter on demand.
    """
    L = np.array([surface.letter_matrix(x).ravel() for x in LETTERS])
    letters = np.array(LETTERS)
    mats, last, parent = [L.copy()], [np.arange(8)], [np.full(8, -1)]
    for _ in range(2, max_len + 1):
        M, la = mats[-1], last[-1]
        rows, ls, ps = [], [], []
        for j, x in enumerate(LETTERS):
            idx = np.nonzero(letters[la] != -x)[0]
            rows.append(np.einsum("nij,jk->nik", M[idx].reshape(-1, 2, 2), L[j].reshape(2, 2)).reshape(-1, 4))
            ls.append(np.full(len(idx), j))
            ps.append(idx)
        mats.append(np.concatenate(rows))
        last.append(np.concatenate(ls))
        parent.append(np.concatenate(ps))

    def word(k, i):
        w = []
        while k >= 0:
            w.append(LETTERS[last[k][i]])
            i = parent[k][i]
            k -= 1
        return tuple(reversed(w))

    return mats, word


def brute_force_canonical_words(surface, max_len, T):
    """Canonical cyclic words of all reduced words up to max_len letters with
    hyperbolic trace and geodesic length <= T."""
    mats, word = reduced_words_with_traces(surface, max_len)
    out = set()
    for k, M in enumerate(mats):
        tr = np.abs(M[:, 0] + M[:, 3])
        ok = (tr > 2 + 1e-6) & (2 * np.arccosh(np.maximum(tr, 2) / 2) <= T + 1e-9)
        for i in np.nonzero(ok)[0]:
            cw = canonical_cyclic(word(k, i))
            if cw:
                out.add(cw)
    return out


def naive_lattice_count(vertices, t):
    """Closed polygon point count by testing every integer point of the bounding box."""
    V = [(Fraction(x) * t, Fraction(y) * t) for x, y in vertices]
    xs = [v[0] for v in V]
    ys = [v[1] for v in V]
    n = len(V)
    total = 0
    for X in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for Y in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            on_edge = False
            wn = 0
            for i in range(n):
                (x0, y0), (x1, y1) = V[i], V[(i + 1) % n]
                cr = (x1 - x0) * (Y - y0) - (y1 - y0) * (X - x0)
                if cr == 0 and min(x0, x1) <= X <= max(x0, x1) and min(y0, y1) <= Y <= max(y0, y1):
                    on_edge = True
                    break
                # winding number
                if y0 <= Y < y1 and cr > 0:
                    wn += 1
                elif y1 <= Y < y0 and cr < 0:
                    wn -= 1
            total += on_edge or wn != 0
    return total


def pick_count(vertices):
    """A + B/2 + 1 for a lattice polygon, from shoelace area and edge gcds."""
    n = len(vertices)
    a2 = abs(sum(vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1] for i in range(n)))
    B = sum(
        math.gcd(abs(vertices[(i + 1) % n][0] - vertices[i][0]), abs(vertices[(i + 1) % n][1] - vertices[i][1]))
        for i in range(n)
    )
    # interior I = A - B/2 + 1, closed count = I + B
    return Fraction(a2, 2) + Fraction(B, 2) + 1


def random_simple_lattice_polygon(rng, max_vertices=12, box=8):
    """Star-shaped simple lattice polygon: random points sorted by angle about an interior centre."""
    while True:
        n = int(rng.integers(3, max_vertices + 1))
        pts = {(int(rng.integers(-box, box + 1)), int(rng.integers(-box, box + 1))) for _ in range(n)}
        if len(pts) < 3:
            continue
        cx = sum(p[0] for p in pts) / len(pts) + 0.01
        cy = sum(p[1] for p in pts) / len(pts) + 0.013
        poly = sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        yield poly


def random_isotropic(rng, g):
    """Saturated isotropic rank g-1 sublattice: image of span{e1..e_{g-1}} under a random symplectic matrix."""
    S = SymplecticSpace(g)
    n = 2 * g
    M = sympy.eye(n)
    for _ in range(10):
        i, j = rng.sample(range(g), 2) if g > 1 else (0, 0)
        k = rng.randint(-2, 2)
        E = sympy.eye(n)
        choice = rng.randrange(3)
        if choice == 0:  # transvection on one plane: e_i -> e_i + k f_i
            E[2 * i + 1, 2 * i] = k
        elif choice == 1:
            E[2 * i, 2 * i + 1] = k
        else:  # e_j -> e_j + k e_i and f_i -> f_i - k f_j keeps Int
            E[2 * i, 2 * j] = k
            E[2 * j + 1, 2 * i + 1] = -k
        M = E * M
    vecs = [tuple(int(x) for x in M * sympy.Matrix(S.e(i + 1))) for i in range(g - 1)]
    return S, Sublattice.span(vecs, n)
