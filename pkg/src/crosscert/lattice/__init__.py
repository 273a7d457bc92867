from .matrices import IncidenceMatrix, Lattice, build, read_triplets, write_triplets
from .subspaces import (Level, Subspace, enumerate_subspaces, intersect_dim,
                        orbit_representatives, rref_mod_p, span)
from .verify import (HarmonicBasis, harmonic_basis, spectrum_crosscheck,
                     verify_identities, verify_lemmas)

__all__ = [
    "IncidenceMatrix", "Lattice", "build", "read_triplets", "write_triplets",
    "Level", "Subspace", "enumerate_subspaces", "intersect_dim",
    "orbit_representatives", "rref_mod_p", "span",
    "HarmonicBasis", "harmonic_basis", "spectrum_crosscheck",
    "verify_identities", "verify_lemmas",
]
