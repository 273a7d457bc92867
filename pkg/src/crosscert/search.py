"""Exhaustive maximisation of |F||G| on tiny instances (independent oracle)."""
from dataclasses import dataclass

from .errors import InvalidParameterError, SizeGuardError
from .exactnum import gauss
from .families import Family, is_cross_intersecting
from .kernels import BranchAndBound
from .lattice.subspaces import orbit_representatives

__all__ = ["SearchResult", "brute_force_max", "SEARCH_GUARD"]

SEARCH_GUARD = 80


@dataclass
class SearchResult:
    best_product: int
    F: Family
    G: Family
    nodes_explored: int
    exact: bool

    def to_json(self, lattice):
        return {
            "best_product": str(self.best_product),
            "F": self.F.to_json(lattice),
            "G": self.G.to_json(lattice),
            "nodes_explored": self.nodes_explored,
            "exact": self.exact,
        }


def brute_force_max(lattice, k, l, budget=None, use_numba=None):
    """Branch and bound over F; G is always the set of l-spaces meeting all of F.

    The first member of F ranges over GL(n, q)-orbit representatives only.
    ``budget`` is in seconds; when it runs out the incumbent is returned
    with exact=False.
    """
    q, n = lattice.q, lattice.n
    if not (1 <= l <= n and 1 <= k <= n):
        raise InvalidParameterError(f"need 1 <= k, l <= n, got k={k}, l={l}")
    size = gauss(n, k, q) + gauss(n, l, q)
    if size > SEARCH_GUARD:
        raise SizeGuardError(f"[n,k]+[n,l] = {size} exceeds the search guard {SEARCH_GUARD}",
                             estimate=size, limit=SEARCH_GUARD)
    meets = lattice.dims(k, l) > 0
    roots = orbit_representatives(lattice.level(k))
    bnb = BranchAndBound(meets, roots=roots, use_numba=use_numba).run(budget)
    f, g = bnb.witness()
    F, G = Family(k, frozenset(f)), Family(l, frozenset(g))
    if F.members and G.members:
        assert is_cross_intersecting(lattice, F, G)
        assert len(F) * len(G) == bnb.best
    return SearchResult(bnb.best, F, G, bnb.nodes, bnb.exact)
