"""Hot loops: pairwise intersection dimensions and the branch-and-bound search.

Each kernel has a numba implementation and an independent fallback
(membership-matrix products for intersections, Python-int bitsets for the
search).  ``intersection_dims`` and ``BranchAndBound`` pick one according to
``_accel.USE_NUMBA``.
"""
import time

import numpy as np

from . import _accel
from ._accel import njit

# --- intersection dimensions -------------------------------------------------


@njit(cache=True)
def _inv_mod(x, p):
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True)
def _rank_mod_p(m, p):
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if m[r, c] % p != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for t in range(cols):
                tmp = m[piv, t]
                m[piv, t] = m[rank, t]
                m[rank, t] = tmp
        inv = _inv_mod(m[rank, c], p)
        for t in range(cols):
            m[rank, t] = (m[rank, t] * inv) % p
        for r in range(rank + 1, rows):
            f = m[r, c] % p
            if f != 0:
                for t in range(cols):
                    m[r, t] = (m[r, t] - f * m[rank, t]) % p
        rank += 1
    return rank


@njit(cache=True)
def intersection_dims_numba(X, Y, p):
    """dim(x ∩ y) for all x in X, y in Y; X is (NX, kx, n) of RREF bases."""
    nx, kx, n = X.shape
    ny, ky, _ = Y.shape
    out = np.empty((nx, ny), dtype=np.int8)
    buf = np.empty((kx + ky, n), dtype=np.int64)
    for a in range(nx):
        for b in range(ny):
            for r in range(kx):
                for c in range(n):
                    buf[r, c] = X[a, r, c]
            for r in range(ky):
                for c in range(n):
                    buf[kx + r, c] = Y[b, r, c]
            out[a, b] = kx + ky - _rank_mod_p(buf, p)
    return out


def span_membership(X, p):
    """0/1 matrix (N, p**n): row a marks every vector of span(X[a])."""
    N, k, n = X.shape
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    coeffs = np.array(np.meshgrid(*[np.arange(p)] * k, indexing="ij"),
                      dtype=np.int64).reshape(k, -1).T if k else np.zeros((1, 0), np.int64)
    vecs = np.einsum("ck,akn->acn", coeffs, X.astype(np.int64)) % p
    codes = vecs @ weights
    member = np.zeros((N, p ** n), dtype=np.int64)
    member[np.repeat(np.arange(N), codes.shape[1]), codes.ravel()] = 1
    return member


def intersection_dims_numpy(X, Y, p):
    """Same result as the numba kernel, via |span x ∩ span y| = p**dim."""
    n = X.shape[2]
    counts = span_membership(X, p) @ span_membership(Y, p).T
    lookup = {p ** d: d for d in range(n + 1)}
    dims = np.vectorize(lookup.__getitem__, otypes=[np.int8])(counts) if counts.size else \
        np.zeros(counts.shape, np.int8)
    return dims


def intersection_dims(X, Y, p):
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    if _accel.USE_NUMBA:
        return intersection_dims_numba(X, Y, p)
    return intersection_dims_numpy(X, Y, p)


# --- branch and bound --------------------------------------------------------
#
# Vertices u of the F side each carry inter[u], the bitset of G-side vertices
# meeting u.  A node is (next vertex j, |F|, G_avail bitset, F bitset).

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def _bnb_numba(inter, skip, st_j, st_fc, st_g, st_f, state, best_f, best_g, max_nodes):
    """Run up to max_nodes nodes.  state = [sp, best, nodes_total]."""
    nf, nwg = inter.shape
    nwf = st_f.shape[1]
    cand = np.empty(nf, dtype=np.int64)
    g = np.empty(nwg, dtype=np.uint64)
    gi = np.empty(nwg, dtype=np.uint64)
    f = np.empty(nwf, dtype=np.uint64)
    nodes = 0
    one = np.uint64(1)
    while state[0] > 0 and nodes < max_nodes:
        sp = state[0] - 1
        state[0] = sp
        nodes += 1
        j = st_j[sp]
        fc = st_fc[sp]
        for w in range(nwg):
            g[w] = st_g[sp, w]
        for w in range(nwf):
            f[w] = st_f[sp, w]
        gsize = 0
        for w in range(nwg):
            gsize += _popcount(g[w])
        if gsize == 0:
            continue
        # closure: every F-side vertex meeting all of G_avail
        cl = 0
        for u in range(nf):
            ok = True
            for w in range(nwg):
                if g[w] & ~inter[u, w] != np.uint64(0):
                    ok = False
                    break
            if ok:
                cl += 1
        if cl * gsize > state[1]:
            state[1] = cl * gsize
            for w in range(nwf):
                best_f[w] = np.uint64(0)
            for u in range(nf):
                ok = True
                for w in range(nwg):
                    if g[w] & ~inter[u, w] != np.uint64(0):
                        ok = False
                        break
                if ok:
                    best_f[u >> 6] |= one << np.uint64(u & 63)
            for w in range(nwg):
                best_g[w] = g[w]
        while j < nf and j == skip:
            j += 1
        if j >= nf:
            continue
        # bound: (fc + t) * (t-th largest |G_avail ∩ inter[u]|), u >= j
        m = 0
        for u in range(j, nf):
            if u == skip:
                continue
            c = 0
            for w in range(nwg):
                c += _popcount(g[w] & inter[u, w])
            # insertion into descending list
            pos = m
            while pos > 0 and cand[pos - 1] < c:
                cand[pos] = cand[pos - 1]
                pos -= 1
            cand[pos] = c
            m += 1
        bound = fc * gsize
        for t in range(m):
            v = (fc + t + 1) * cand[t]
            if v > bound:
                bound = v
        if bound <= state[1]:
            continue
        dominant = True
        for w in range(nwg):
            gi[w] = g[w] & inter[j, w]
            if gi[w] != g[w]:
                dominant = False
        if not dominant:
            st_j[sp] = j + 1
            st_fc[sp] = fc
            for w in range(nwg):
                st_g[sp, w] = g[w]
            for w in range(nwf):
                st_f[sp, w] = f[w]
            sp += 1
        st_j[sp] = j + 1
        st_fc[sp] = fc + 1
        for w in range(nwg):
            st_g[sp, w] = gi[w]
        for w in range(nwf):
            st_f[sp, w] = f[w]
        st_f[sp, j >> 6] |= one << np.uint64(j & 63)
        sp += 1
        state[0] = sp
    state[2] += nodes
    return nodes


def _to_words(bits, nwords):
    return np.array([(bits >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords)],
                    dtype=np.uint64)


def _from_words(words):
    return sum(int(x) << (64 * w) for w, x in enumerate(words))


class BranchAndBound:
    """Maximise |F| * |G| over cross-intersecting pairs.

    ``meets`` is a boolean (NF, NG) matrix, True where the F-side and G-side
    vertices intersect nontrivially.  ``roots`` lists F-side vertices that are
    forced into F at the top of separate subtrees (orbit representatives).
    """

    CHUNK = 200_000

    def __init__(self, meets, roots=(0,), use_numba=None):
        self.meets = np.asarray(meets, dtype=bool)
        self.nf, self.ng = self.meets.shape
        self.roots = list(roots)
        self.use_numba = _accel.USE_NUMBA if use_numba is None else use_numba
        self.best = 0
        self.best_f = 0
        self.best_g = 0
        self.nodes = 0
        self.exact = False

    def _inter_bits(self):
        return [sum(1 << int(v) for v in np.flatnonzero(row)) for row in self.meets]

    def run(self, budget_seconds=None):
        deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
        if self.use_numba:
            self.exact = self._run_numba(deadline)
        else:
            self.exact = self._run_python(deadline)
        return self

    def _run_numba(self, deadline):
        nwg = max(1, (self.ng + 63) // 64)
        nwf = max(1, (self.nf + 63) // 64)
        inter = np.stack([_to_words(b, nwg) for b in self._inter_bits()])
        cap = 2 * self.nf + 4
        best_f = np.zeros(nwf, np.uint64)
        best_g = np.zeros(nwg, np.uint64)
        state = np.array([0, self.best, 0], dtype=np.int64)
        for root in self.roots:
            st_j = np.zeros(cap, np.int64)
            st_fc = np.zeros(cap, np.int64)
            st_g = np.zeros((cap, nwg), np.uint64)
            st_f = np.zeros((cap, nwf), np.uint64)
            st_g[0] = inter[root]
            st_f[0] = _to_words(1 << root, nwf)
            st_fc[0] = 1
            state[0] = 1
            while state[0] > 0:
                if deadline is not None and time.monotonic() > deadline:
                    self._collect(state, best_f, best_g)
                    return False
                _bnb_numba(inter, root, st_j, st_fc, st_g, st_f, state,
                           best_f, best_g, self.CHUNK)
        self._collect(state, best_f, best_g)
        return True

    def _collect(self, state, best_f, best_g):
        if state[1] > self.best:
            self.best = int(state[1])
            self.best_f = _from_words(best_f)
            self.best_g = _from_words(best_g)
        self.nodes = int(state[2])

    def _run_python(self, deadline):
        inter = self._inter_bits()
        nf = self.nf
        popcount = int.bit_count if hasattr(int, "bit_count") else (lambda x: bin(x).count("1"))
        for root in self.roots:
            stack = [(0, 1, inter[root], 1 << root)]
            while stack:
                self.nodes += 1
                if deadline is not None and self.nodes % 4096 == 1 \
                        and time.monotonic() > deadline:
                    return False
                j, fc, g, f = stack.pop()
                gsize = popcount(g)
                if gsize == 0:
                    continue
                closure = [u for u in range(nf) if g & ~inter[u] == 0]
                if len(closure) * gsize > self.best:
                    self.best = len(closure) * gsize
                    self.best_f = sum(1 << u for u in closure)
                    self.best_g = g
                while j < nf and j == root:
                    j += 1
                if j >= nf:
                    continue
                cand = sorted((popcount(g & inter[u]) for u in range(j, nf) if u != root),
                              reverse=True)
                bound = max([fc * gsize] + [(fc + t + 1) * c for t, c in enumerate(cand)])
                if bound <= self.best:
                    continue
                gi = g & inter[j]
                if gi != g:
                    stack.append((j + 1, fc, g, f))
                stack.append((j + 1, fc + 1, gi, f | (1 << j)))
        return True

    def witness(self):
        f = [u for u in range(self.nf) if self.best_f >> u & 1]
        g = [v for v in range(self.ng) if self.best_g >> v & 1]
        return f, g
