"""Subspaces of F_p^n in canonical reduced row echelon form."""
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from ..errors import InvalidParameterError, UnsupportedFieldError
from ..exactnum import gauss
from ..kernels import _rank_mod_p

__all__ = ["Subspace", "Level", "rref_mod_p", "enumerate_subspaces",
           "intersect_dim", "span", "is_prime"]


def is_prime(q):
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q ** 0.5) + 1))


def _require_prime(q):
    if not is_prime(q):
        raise UnsupportedFieldError(
            f"explicit subspace enumeration needs prime q, got {q}")


def rref_mod_p(rows, p):
    """Reduced row echelon form over F_p with zero rows dropped."""
    m = np.array(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    m %= p
    nrows, ncols = m.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        for t in range(nrows):
            if t != r and m[t, c]:
                m[t] = (m[t] - m[t, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m[:r], tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n given by its RREF basis (rows)."""

    q: int
    n: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    @classmethod
    def from_rows(cls, rows, q, n):
        _require_prime(q)
        rows = list(rows)
        if not rows:
            return cls(q, n, ())
        m, _ = rref_mod_p(rows, q)
        return cls(q, n, tuple(tuple(int(x) for x in row) for row in m))

    def array(self):
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.n)

    def contains(self, other):
        return intersect_dim(self, other) == other.dim


def span(*vectors, q, n):
    return Subspace.from_rows(vectors, q, n)


def intersect_dim(x, y):
    """dim(x ∩ y) = dim x + dim y - rank of the stacked bases."""
    if (x.q, x.n) != (y.q, y.n):
        raise InvalidParameterError("subspaces live in different ambient spaces")
    if x.dim == 0 or y.dim == 0:
        return 0
    m = np.vstack([x.array(), y.array()])
    return x.dim + y.dim - int(_rank_mod_p(m, x.q))


def enumerate_subspaces(n, k, q):
    """All k-subspaces of F_q^n, ordered by pivot set then free entries."""
    _require_prime(q)
    if not 0 <= k <= n:
        raise InvalidParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    out = []
    for pivots in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n)
                if c not in pivots]
        for values in product(range(q), repeat=len(free)):
            m = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                m[r][c] = 1
            for (r, c), v in zip(free, values):
                m[r][c] = v
            out.append(Subspace(q, n, tuple(tuple(row) for row in m)))
    assert len(out) == gauss(n, k, q)
    return out


class Level:
    """The canonically indexed k-subspaces L_k of F_q^n."""

    def __init__(self, n, k, q):
        self.n, self.k, self.q = n, k, q
        self.subspaces = enumerate_subspaces(n, k, q)
        self._index = {s.basis: i for i, s in enumerate(self.subspaces)}
        self.bases = (np.array([s.basis for s in self.subspaces], dtype=np.int64)
                      .reshape(len(self.subspaces), k, n))

    def __len__(self):
        return len(self.subspaces)

    def __getitem__(self, i):
        return self.subspaces[i]

    def __iter__(self):
        return iter(self.subspaces)

    def index(self, subspace):
        if subspace.dim != self.k:
            raise InvalidParameterError(
                f"expected a {self.k}-space, got dimension {subspace.dim}")
        canon = Subspace.from_rows(subspace.basis, self.q, self.n)
        return self._index[canon.basis]

    def image(self, i, matrix):
        """Index of the image of subspace i under x -> x @ matrix."""
        rows = (self.bases[i] @ matrix) % self.q
        return self._index[Subspace.from_rows(rows, self.q, self.n).basis]


def gl_generators(n, p):
    """A generating set of GL(n, p): a transposition, an n-cycle, a transvection
    and a diagonal matrix with a primitive root."""
    gens = []
    eye = np.eye(n, dtype=np.int64)
    if n >= 2:
        gens.append(eye[[1, 0] + list(range(2, n))])
        gens.append(eye[list(range(1, n)) + [0]])
        t = eye.copy()
        t[0, 1] = 1
        gens.append(t)
    g = next(x for x in range(1, p) if all(pow(x, (p - 1) // r, p) != 1
                                           for r in _prime_factors(p - 1)))
    d = eye.copy()
    d[0, 0] = g
    if g != 1:
        gens.append(d)
    return gens


def _prime_factors(m):
    out, d = set(), 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


def orbit_representatives(level):
    """Smallest canonical index in each GL(n, p)-orbit on ``level``."""
    gens = gl_generators(level.n, level.q)
    seen = [-1] * len(level)
    reps = []
    for start in range(len(level)):
        if seen[start] >= 0:
            continue
        reps.append(start)
        seen[start] = start
        todo = [start]
        while todo:
            i = todo.pop()
            for g in gens:
                j = level.image(i, g)
                if seen[j] < 0:
                    seen[j] = start
                    todo.append(j)
    return reps
