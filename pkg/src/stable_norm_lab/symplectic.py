"""Exact integer symplectic linear algebra on H_1(M, Z) = Z^{2g}.

Coordinates are taken in a symplectic basis ordered ``a1, b1, ..., ag, bg``
with Int(a_i, b_i) = 1.  All arithmetic is on Python ints; sublattices are
stored saturated and in row Hermite normal form so equal lattices compare
equal.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DomainError, InvalidInputError, PreconditionError

Vector = Tuple[int, ...]
Matrix = Tuple[Vector, ...]


def hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int = None):
    """Row Hermite normal form ``H = U A`` with ``U`` unimodular.

    Returns ``(H, U, rank)``.  The first ``rank`` rows of ``H`` are nonzero,
    pivots strictly increase, pivots are positive and entries above a pivot
    lie in ``[0, pivot)``.  Rows ``rank:`` of ``U`` span the left kernel.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid down column c on rows r..m-1
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if all(A[i][c] == 0 for i in range(r, m)):
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return [tuple(x) for x in A], [tuple(x) for x in U], r


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> List[Vector]:
    """Basis of {x in Z^n : A x = 0}, A given by its rows."""
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    At = [tuple(row[j] for row in rows) for j in range(n)]
    _, U, rank = hnf_with_transform(At, ncols=len(rows))
    return list(U[rank:])


def _check_dim(v, n):
    if len(v) != n:
        raise InvalidInputError(f"expected a vector of dimension {n}, got {len(v)}")


@dataclass(frozen=True)
class SymplecticSpace:
    genus: int
    intersection_matrix: Matrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.genus < 1:
            raise InvalidInputError("genus must be positive")
        n = 2 * self.genus
        J = [[0] * n for _ in range(n)]
        for i in range(self.genus):
            J[2 * i][2 * i + 1] = 1
            J[2 * i + 1][2 * i] = -1
        object.__setattr__(self, "intersection_matrix", tuple(map(tuple, J)))

    @property
    def dim(self) -> int:
        return 2 * self.genus

    def basis_vector(self, k: int) -> Vector:
        return tuple(int(j == k) for j in range(self.dim))

    def e(self, i: int) -> Vector:
        """Class of a_i (1-based)."""
        return self.basis_vector(2 * (i - 1))

    def f(self, i: int) -> Vector:
        """Class of b_i (1-based)."""
        return self.basis_vector(2 * (i - 1) + 1)


def intersection(space: SymplecticSpace, a: Sequence[int], b: Sequence[int]) -> int:
    """Algebraic intersection number a^T J b."""
    n = space.dim
    _check_dim(a, n)
    _check_dim(b, n)
    s = 0
    for i in range(space.genus):
        s += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i]
    return s


def _row_times_J(space, v):
    # (v^T J)_k, so that (v^T J) . h = Int(v, h)
    out = [0] * space.dim
    for i in range(space.genus):
        out[2 * i] = -v[2 * i + 1]
        out[2 * i + 1] = v[2 * i]
    return tuple(out)


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^n given by a canonical (row HNF) basis."""

    dim: int
    basis: Matrix

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], dim: int) -> "Sublattice":
        for v in vectors:
            _check_dim(v, dim)
        if not vectors:
            return cls(dim, ())
        H, _, r = hnf_with_transform(vectors, ncols=dim)
        return cls(dim, tuple(H[:r]))

    @classmethod
    def saturated_span(cls, vectors: Sequence[Sequence[int]], dim: int) -> "Sublattice":
        """(span_Q V) intersected with Z^n."""
        return cls.span(vectors, dim).saturation()

    def saturation(self) -> "Sublattice":
        if not self.basis:
            return self
        K = integer_kernel(self.basis, self.dim)
        return Sublattice.span(integer_kernel(K, self.dim), self.dim)

    def is_saturated(self) -> bool:
        return self.saturation() == self

    def coordinates(self, h: Sequence[int]):
        """Integer coordinates of h in the basis, or None if h is not in the lattice."""
        _check_dim(h, self.dim)
        rest = list(map(int, h))
        coords = []
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            if rest[c] % row[c]:
                return None
            q = rest[c] // row[c]
            coords.append(q)
            rest = [x - q * y for x, y in zip(rest, row)]
        if any(rest):
            return None
        return tuple(coords)

    def __contains__(self, h) -> bool:
        return self.coordinates(h) is not None


def symplectic_complement(space: SymplecticSpace, V: Sublattice) -> Sublattice:
    """Integer vectors h with Int(v, h) = 0 for every v in V (always saturated)."""
    if V.dim != space.dim:
        raise InvalidInputError("sublattice lives in the wrong dimension")
    rows = [_row_times_J(space, v) for v in V.basis]
    return Sublattice.span(integer_kernel(rows, space.dim), space.dim)


def is_isotropic(space: SymplecticSpace, V: Sublattice) -> bool:
    return all(intersection(space, u, v) == 0 for u in V.basis for v in V.basis)


@dataclass(frozen=True)
class QuotientLattice:
    """L = (V^perp ∩ Z^2g) / (V ∩ Z^2g) with its induced symplectic form.

    ``projection_matrix`` is an integer (g+1) x 2 matrix acting on coordinates
    in the ``ambient`` basis; ``lifts`` are ambient vectors projecting to the
    standard basis of Z^2.
    """

    space: SymplecticSpace
    ambient: Sublattice
    kernel: Sublattice
    projection_matrix: Matrix
    induced_form: Tuple[Tuple[int, int], Tuple[int, int]]
    lifts: Tuple[Vector, Vector]


def quotient_lattice(space: SymplecticSpace, V: Sublattice) -> QuotientLattice:
    g = space.genus
    if V.dim != space.dim:
        raise InvalidInputError("sublattice lives in the wrong dimension")
    V = V.saturation()
    if V.rank != g - 1:
        raise PreconditionError(f"need rank g-1 = {g - 1}, got rank {V.rank}")
    if not is_isotropic(space, V):
        raise PreconditionError("sublattice is not isotropic: Int does not vanish on it")
    amb = symplectic_complement(space, V)
    # V in ambient coordinates, then kernel of that (as columns) gives the projection
    Vc = [amb.coordinates(v) for v in V.basis]
    k = amb.rank
    P_cols = integer_kernel(Vc, k) if Vc else [tuple(int(i == j) for j in range(k)) for i in range(k)]
    assert len(P_cols) == 2, "quotient of an isotropic rank g-1 lattice must have rank 2"
    P = [[P_cols[0][i], P_cols[1][i]] for i in range(k)]
    # lifts: rows of U with U P = I on top (P^T is surjective, so its HNF is identity)
    H, U, r = hnf_with_transform(P, ncols=2)
    assert r == 2 and H[0] == (1, 0) and H[1] == (0, 1), "projection not surjective"
    lifts = [tuple(sum(U[t][i] * amb.basis[i][j] for i in range(k)) for j in range(space.dim)) for t in (0, 1)]
    w = intersection(space, lifts[0], lifts[1])
    if w == -1:
        P = [[a, -b] for a, b in P]
        lifts[1] = tuple(-x for x in lifts[1])
        w = 1
    assert w == 1, "induced form must be unimodular"
    return QuotientLattice(
        space=space,
        ambient=amb,
        kernel=V,
        projection_matrix=tuple(map(tuple, P)),
        induced_form=((0, w), (-w, 0)),
        lifts=(lifts[0], lifts[1]),
    )


def project(q: QuotientLattice, h: Sequence[int]) -> Tuple[int, int]:
    """Image of an ambient class in Z^2; DomainError if h is not in V^perp."""
    _check_dim(h, q.space.dim)
    c = q.ambient.coordinates(h)
    if c is None:
        raise DomainError(f"class {tuple(h)} is not symplectically orthogonal to V")
    P = q.projection_matrix
    return (sum(ci * P[i][0] for i, ci in enumerate(c)), sum(ci * P[i][1] for i, ci in enumerate(c)))


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free elimination (Bareiss)."""
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    if any(len(r) != n for r in M):
        raise InvalidInputError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def solve_rational(rows: Sequence[Sequence[int]], h: Sequence[int]):
    """Rational coordinates of h in the row span, or None."""
    basis = [list(map(Fraction, r)) for r in rows]
    # least squares free: Gaussian elimination on the transposed system
    m, n = len(basis), len(h)
    aug = [[basis[i][j] for i in range(m)] + [Fraction(h[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    return tuple(x)
