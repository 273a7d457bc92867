"""Extremal cross-intersecting families and the primal side of the SDP.

Families are sets of canonical indices into a Level of a Lattice.  F lives on
L_k and G on L_l; when k == l they sit on two separate copies of L_k, which
is automatic here because F and G are never merged into one index set.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .certificate import DualCertificate
from .errors import InvalidParameterError
from .exactnum import QuadraticNumber, qn_sign
from .lattice.subspaces import Subspace

__all__ = ["Family", "PrimalSolution", "point_star", "hyperplane_family",
           "is_cross_intersecting", "is_intersecting", "primal_check",
           "slackness_check", "random_cross_intersecting_pair"]


@dataclass(frozen=True)
class Family:
    k: int
    members: frozenset

    def __len__(self):
        return len(self.members)

    def sorted(self):
        return sorted(self.members)

    def indicator(self, size):
        v = np.zeros(size, dtype=np.int64)
        v[self.sorted()] = 1
        return v

    def to_json(self, lattice):
        return {"n": lattice.n, "q": lattice.q, "k": self.k, "members": self.sorted()}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["k"]), frozenset(int(x) for x in obj["members"]))


def _check_level(lattice, k):
    if not 0 <= k <= lattice.n:
        raise InvalidParameterError(f"level {k} out of range for n={lattice.n}")


def point_star(lattice, z, k):
    """All k-subspaces containing the 1-space z."""
    if z.dim != 1:
        raise InvalidParameterError(f"point star needs a 1-space, got dimension {z.dim}")
    _check_level(lattice, k)
    zi = lattice.level(1).index(z)
    members = np.flatnonzero(lattice.W(k, 1)[:, zi])
    return Family(k, frozenset(int(x) for x in members))


def hyperplane_family(lattice, z, k):
    """All k-subspaces inside the (2k-1)-space z; requires n = 2k."""
    if lattice.n != 2 * k:
        raise InvalidParameterError(f"hyperplane family needs n = 2k, got n={lattice.n}, k={k}")
    if z.dim != 2 * k - 1:
        raise InvalidParameterError(f"z must have dimension {2 * k - 1}, got {z.dim}")
    zi = lattice.level(2 * k - 1).index(z)
    members = np.flatnonzero(lattice.W(k, 2 * k - 1)[:, zi])
    return Family(k, frozenset(int(x) for x in members))


def default_point(lattice):
    return Subspace.from_rows([[1] + [0] * (lattice.n - 1)], lattice.q, lattice.n)


def default_hyperplane(lattice):
    n = lattice.n
    rows = [[int(r == c) for c in range(n)] for r in range(n - 1)]
    return Subspace.from_rows(rows, lattice.q, n)


def _disjoint_count(lattice, F, G):
    """Number of pairs (x, y) in F x G with x ∩ y = 0."""
    if not F.members or not G.members:
        return 0
    blk = lattice.Wbar(F.k, G.k)
    return int(blk[np.ix_(F.sorted(), G.sorted())].sum())


def is_cross_intersecting(lattice, F, G):
    return _disjoint_count(lattice, F, G) == 0


def is_intersecting(lattice, F):
    return _disjoint_count(lattice, F, F) == 0


@dataclass(frozen=True)
class PrimalSolution:
    """X = v v^T with v = phi/|F|^(1/2) + psi/|G|^(1/2), stored blockwise.

    Over the radicand R = |F||G|: the F x F block is 1/|F|, the G x G block
    1/|G| and the cross blocks sqrt(R)/R on the support, zero elsewhere.
    """

    F: Family
    G: Family

    @property
    def radicand(self):
        return len(self.F) * len(self.G)

    def entry_ff(self):
        return QuadraticNumber(self.radicand, Fraction(1, len(self.F)))

    def entry_gg(self):
        return QuadraticNumber(self.radicand, Fraction(1, len(self.G)))

    def entry_fg(self):
        return QuadraticNumber(self.radicand, 0, Fraction(1, self.radicand))

    def dot(self, lattice, kind, rows, cols):
        """M • X for the block M = kind(rows, cols) placed at the matching
        (F-side or G-side) copies.  rows/cols are 'F' or 'G'."""
        fam = {"F": self.F, "G": self.G}
        R, C = fam[rows], fam[cols]
        blk = lattice.block(kind, R.k, C.k)
        total = int(blk[np.ix_(R.sorted(), C.sorted())].sum())
        entry = {("F", "F"): self.entry_ff, ("G", "G"): self.entry_gg}.get(
            (rows, cols), self.entry_fg)()
        return entry * total


def _require_nonempty(F, G):
    if not F.members or not G.members:
        raise InvalidParameterError("families must be nonempty")


def primal_check(lattice, F, G, D):
    """Exact feasibility and objective of X_{F,G}, plus |F||G| <= D."""
    _require_nonempty(F, G)
    X = PrimalSolution(F, G)
    R = X.radicand
    one = QuadraticNumber(R, 1)
    checks = {}
    checks["trace_F_side"] = X.dot(lattice, "I", "F", "F") == one
    checks["trace_G_side"] = X.dot(lattice, "I", "G", "G") == one
    disj = X.dot(lattice, "Wbar", "F", "G") + X.dot(lattice, "Wbar", "G", "F")
    checks["disjointness_zero"] = qn_sign(disj) == 0
    objective = (X.dot(lattice, "J", "F", "G") + X.dot(lattice, "J", "G", "F")) * Fraction(1, 2)
    checks["objective_is_sqrt_product"] = objective == QuadraticNumber.sqrt(R)
    checks["nonnegative"] = all(qn_sign(e) >= 0 for e in
                                (X.entry_ff(), X.entry_gg(), X.entry_fg()))
    checks["weak_duality"] = R <= D
    return {
        "sizes": [str(len(F)), str(len(G))],
        "product": str(R),
        "D": str(D),
        "objective": objective.to_json(),
        "equality": R == D,
        "checks": checks,
        "ok": all(checks.values()),
    }


def slackness_check(lattice, F, G, cert):
    """A•X = 0 and S•X = 0 for an extremal pair, evaluated in Q(sqrt(D))."""
    if not isinstance(cert, DualCertificate):
        raise InvalidParameterError("slackness_check needs a DualCertificate")
    _require_nonempty(F, G)
    p = cert.params
    if (F.k, G.k) != (p.k, p.l):
        raise InvalidParameterError(
            f"families have dimensions ({F.k}, {G.k}), certificate expects ({p.k}, {p.l})")
    if len(F) * len(G) != cert.D:
        raise InvalidParameterError(
            f"slackness needs |F||G| = D; got {len(F) * len(G)} vs {cert.D}")
    if not cert.feasible or cert.coefficients.lam <= 0:
        raise InvalidParameterError("slackness needs a feasible certificate with lambda > 0")
    X = PrimalSolution(F, G)
    c = cert.coefficients
    wkk = X.dot(lattice, "Wbar", "F", "F")
    wll = X.dot(lattice, "Wbar", "G", "G")
    a_dot = c.a_lambda * wkk + wll * c.lam
    s_dot = (c.alpha * X.dot(lattice, "I", "F", "F")
             + c.beta * X.dot(lattice, "I", "G", "G")
             - (X.dot(lattice, "J", "F", "G") + X.dot(lattice, "J", "G", "F")) * Fraction(1, 2)
             - c.b_lambda * (X.dot(lattice, "Wbar", "F", "G") + X.dot(lattice, "Wbar", "G", "F"))
             - a_dot)
    checks = {
        "F_intersecting": is_intersecting(lattice, F),
        "G_intersecting": is_intersecting(lattice, G),
        "Wbar_kk_dot_zero": qn_sign(wkk) == 0,
        "Wbar_ll_dot_zero": qn_sign(wll) == 0,
        "A_dot_X_zero": qn_sign(a_dot) == 0,
        "S_dot_X_zero": qn_sign(s_dot) == 0,
    }
    return {"A_dot_X": a_dot.to_json(), "S_dot_X": s_dot.to_json(),
            "checks": checks, "ok": all(checks.values())}


def random_cross_intersecting_pair(lattice, k, l, rng, perturb=3, density=None):
    """Subfamilies of a random point star, then up to ``perturb`` random
    outsiders added to each side while cross-intersection survives."""
    z_index = int(rng.integers(len(lattice.level(1))))
    z = lattice.level(1)[z_index]
    star_k = point_star(lattice, z, k).sorted()
    star_l = point_star(lattice, z, l).sorted()
    pk = rng.uniform(0.2, 1.0) if density is None else density
    pl = rng.uniform(0.2, 1.0) if density is None else density
    f = {x for x in star_k if rng.random() < pk} or {star_k[int(rng.integers(len(star_k)))]}
    g = {y for y in star_l if rng.random() < pl} or {star_l[int(rng.integers(len(star_l)))]}
    meets = lattice.dims(k, l) > 0
    for _ in range(perturb):
        x = int(rng.integers(len(lattice.level(k))))
        if x not in f and all(meets[x, y] for y in g):
            f.add(x)
        y = int(rng.integers(len(lattice.level(l))))
        if y not in g and all(meets[x2, y] for x2 in f):
            g.add(y)
    return Family(k, frozenset(f)), Family(l, frozenset(g))
