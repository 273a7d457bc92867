"""Incidence matrices W, W-bar, I and J on the subspace lattice of F_q^n.

Blocks are kept per pair of levels (rows L_k, columns L_l) as int64 arrays;
``build`` embeds them into the full index set when asked.
"""
import os
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, SizeGuardError
from ..exactnum import gauss
from ..kernels import intersection_dims
from .subspaces import Level, _require_prime

__all__ = ["Lattice", "IncidenceMatrix", "build", "default_guard", "write_triplets"]

KINDS = ("W", "Wbar", "I", "J")


def default_guard():
    return int(float(os.environ.get("CROSSCERT_MAX_ENTRIES", "5e7")))


@dataclass(frozen=True)
class IncidenceMatrix:
    kind: str
    k: int
    l: int
    row_offset: int
    col_offset: int
    entries: np.ndarray

    @property
    def shape(self):
        return self.entries.shape


class Lattice:
    """All subspaces of F_q^n, one Level per dimension, plus cached blocks."""

    def __init__(self, n, q, guard=None):
        _require_prime(q)
        if n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {n}")
        self.n, self.q = n, q
        self.guard = default_guard() if guard is None else guard
        total = sum(gauss(n, k, q) for k in range(n + 1))
        if total * total > self.guard:
            raise SizeGuardError(
                f"lattice of F_{q}^{n} has {total} subspaces; {total * total} "
                f"matrix entries exceed the guard {self.guard}",
                estimate=total * total, limit=self.guard)
        self.levels = [Level(n, k, q) for k in range(n + 1)]
        self.offsets = np.concatenate([[0], np.cumsum([len(L) for L in self.levels])])
        self.size = int(self.offsets[-1])
        self._dims = {}
        self._cache = {}

    def level(self, k):
        return self.levels[k]

    def dims(self, k, l):
        """dim(x ∩ y) for x in L_k, y in L_l."""
        key = (k, l)
        if key not in self._dims:
            if (l, k) in self._dims:
                self._dims[key] = self._dims[(l, k)].T
            elif k == 0 or l == 0:
                self._dims[key] = np.zeros((len(self.levels[k]), len(self.levels[l])), np.int8)
            else:
                self._dims[key] = intersection_dims(
                    self.levels[k].bases, self.levels[l].bases, self.q)
        return self._dims[key]

    def block(self, kind, k, l=None):
        if kind not in KINDS:
            raise InvalidParameterError(f"unknown matrix kind {kind!r}")
        if l is None:
            l = k
        if not (0 <= k <= self.n and 0 <= l <= self.n):
            raise InvalidParameterError(f"levels out of range: k={k}, l={l}, n={self.n}")
        key = (kind, k, l)
        if key not in self._cache:
            if kind == "I":
                m = np.eye(len(self.levels[k]), len(self.levels[l]), dtype=np.int64) \
                    if k == l else np.zeros((len(self.levels[k]), len(self.levels[l])), np.int64)
            elif kind == "J":
                m = np.ones((len(self.levels[k]), len(self.levels[l])), np.int64)
            elif kind == "W":
                m = (self.dims(k, l) == min(k, l)).astype(np.int64)
            else:
                m = (self.dims(k, l) == 0).astype(np.int64)
            m.setflags(write=False)
            self._cache[key] = m
        return self._cache[key]

    def W(self, k, l):
        return self.block("W", k, l)

    def Wbar(self, k, l):
        return self.block("Wbar", k, l)

    def I(self, k):
        return self.block("I", k, k)

    def J(self, k, l):
        return self.block("J", k, l)


def build(lattice, kind, k, l=None, embed="block", duplicate=False):
    """An IncidenceMatrix for the requested kind.

    embed="block" gives the L_k x L_l block; embed="full" embeds it into the
    matrix indexed by all of L.  With duplicate=True (only for k == l) the
    index set is L followed by a second copy of L_l, and the columns refer to
    that copy.
    """
    if l is None:
        l = k
    blk = lattice.block(kind, k, l)
    if embed == "block":
        return IncidenceMatrix(kind, k, l, 0, 0, blk)
    if embed != "full":
        raise InvalidParameterError(f"embed must be 'block' or 'full', got {embed!r}")
    size = lattice.size
    r0 = int(lattice.offsets[k])
    c0 = int(lattice.offsets[l])
    if duplicate:
        if k != l:
            raise InvalidParameterError("duplicate index set is only used when k == l")
        c0 = size
        size += len(lattice.levels[l])
    full = np.zeros((size, size), np.int64)
    full[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = blk
    return IncidenceMatrix(kind, k, l, r0, c0, full)


def write_triplets(matrix, lattice, stream):
    """Sparse triplet text: header "n k l q kind rows cols", then "row col value"."""
    rows, cols = matrix.entries.shape
    stream.write(f"{lattice.n} {matrix.k} {matrix.l} {lattice.q} {matrix.kind} {rows} {cols}\n")
    for r, c in zip(*np.nonzero(matrix.entries)):
        stream.write(f"{r} {c} {matrix.entries[r, c]}\n")


def read_triplets(stream):
    header = stream.readline().split()
    n, k, l, q = (int(x) for x in header[:4])
    kind = header[4]
    rows, cols = int(header[5]), int(header[6])
    m = np.zeros((rows, cols), np.int64)
    for line in stream:
        if line.strip():
            r, c, v = (int(x) for x in line.split())
            m[r, c] = v
    return {"n": n, "k": k, "l": l, "q": q, "kind": kind, "entries": m}
