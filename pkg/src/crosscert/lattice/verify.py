"""Exact verification of the incidence identities and harmonic-space lemmas.

All checks are integer matrix identities.  Harmonic vectors are integer
kernel vectors of W_{i-1,i} and are never normalised, so no square roots
appear.  Only ``spectrum_crosscheck`` uses floating point.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from ..exactnum import gauss, rational_str
from ..spectrum import Parameters, multiplicities, theta

__all__ = ["HarmonicBasis", "harmonic_basis", "integer_kernel", "verify_identities",
           "verify_lemmas", "spectrum_crosscheck"]

_INT64_SAFE = 2 ** 62


def exact_matmul(a, b):
    """a @ b without int64 overflow; falls back to Python ints."""
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    amax = int(np.abs(a).max())
    bmax = int(np.abs(b).max())
    if amax * bmax * a.shape[1] < _INT64_SAFE and a.dtype != object and b.dtype != object:
        return a @ b
    return a.astype(object) @ b.astype(object)


def _scaled(coef, m):
    """coef * m for an integer-valued Fraction coef."""
    coef = Fraction(coef)
    assert coef.denominator == 1
    c = coef.numerator
    if c == 0:
        return np.zeros(m.shape, dtype=np.int64)
    if m.size and abs(c) * int(np.abs(m).max()) >= _INT64_SAFE:
        return m.astype(object) * c
    return m * c


def _equal(a, b):
    return a.shape == b.shape and bool(np.all(a == b))


def _qcoef(q, sign, exponent, g):
    """sign * q**exponent * g; zero whenever g is zero."""
    if g == 0:
        return Fraction(0)
    return sign * Fraction(q) ** exponent * g


def integer_kernel(rows, ncols):
    """Integer basis of the rational null space of an integer matrix.

    Fraction-free elimination: row operations stay in the integers and each
    row is divided by the gcd of its entries.
    """
    a = [list(map(int, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((t for t in range(r, len(a)) if a[t][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        for t in range(len(a)):
            if t != r and a[t][c]:
                f, g = pr[c], a[t][c]
                row = [f * x - g * y for x, y in zip(a[t], pr)]
                d = 0
                for x in row:
                    d = gcd(d, x)
                a[t] = [x // d for x in row] if d > 1 else row
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        lcm = 1
        for t, pc in enumerate(pivots):
            if a[t][free]:
                lcm = lcm * abs(a[t][pc]) // gcd(lcm, abs(a[t][pc]))
        v = [0] * ncols
        v[free] = lcm
        for t, pc in enumerate(pivots):
            if a[t][free]:
                v[pc] = -a[t][free] * (lcm // a[t][pc])
        d = 0
        for x in v:
            d = gcd(d, x)
        basis.append([x // d for x in v])
    return basis


@dataclass(frozen=True)
class HarmonicBasis:
    i: int
    vectors: np.ndarray  # shape (|L_i|, d_i), one kernel vector per column

    @property
    def dim(self):
        return self.vectors.shape[1]


def harmonic_basis(lattice, i):
    """Integer basis of U_i = ker W_{i-1,i} on L_i."""
    size = len(lattice.level(i))
    if i == 0:
        return HarmonicBasis(0, np.ones((size, 1), dtype=np.int64))
    down = lattice.W(i - 1, i)
    vecs = integer_kernel(down.tolist(), size)
    arr = np.array(vecs, dtype=object).T.reshape(size, len(vecs))
    if arr.size and max(abs(int(x)) for x in arr.flat) < 2 ** 31:
        arr = arr.astype(np.int64)
    return HarmonicBasis(i, arr)


def _report(checked, violations):
    return {"checked": checked, "violations": violations, "ok": not violations}


def verify_identities(lattice, kmax=None):
    """Check the three incidence identities for all index triples up to kmax."""
    n, q = lattice.n, lattice.q
    top = n if kmax is None else min(kmax, n)
    W, Wb = lattice.W, lattice.Wbar
    out = {}

    checked, bad = 0, []
    for k in range(top + 1):
        for l in range(k + 1):
            for i in range(l + 1):
                lhs = exact_matmul(W(k, l), W(l, i))
                rhs = _scaled(gauss(k - i, l - i, q), W(k, i))
                checked += 1
                if not _equal(lhs, rhs):
                    bad.append({"i": i, "k": k, "l": l})
    out["down_composition"] = _report(checked, bad)

    checked, bad = 0, []
    for k in range(top + 1):
        for i in range(k + 1):
            for l in range(top + 1):
                lhs = exact_matmul(W(i, k), Wb(k, l))
                coef = _qcoef(q, 1, l * (k - i), gauss(n - i - l, k - i, q))
                rhs = _scaled(coef, Wb(i, l))
                checked += 1
                if not _equal(lhs, rhs):
                    bad.append({"i": i, "k": k, "l": l})
    out["incidence_times_disjointness"] = _report(checked, bad)

    checked, bad = 0, []
    for k in range(top + 1):
        for l in range(top + 1):
            acc = np.zeros(Wb(k, l).shape, dtype=np.int64)
            for h in range(min(k, l) + 1):
                term = _scaled((-1) ** h * q ** (h * (h - 1) // 2),
                               exact_matmul(W(k, h), W(h, l)))
                acc = acc + term
            checked += 1
            if not _equal(acc, Wb(k, l)):
                bad.append({"k": k, "l": l})
    out["disjointness_expansion"] = _report(checked, bad)

    out["ok"] = all(v["ok"] for v in out.values())
    return out


def verify_lemmas(lattice, bases=None):
    """Check the harmonic-space lemmas on unnormalised kernel vectors.

    Returns a report with one entry per lemma; each lists the index tuples
    that failed.
    """
    n, q = lattice.n, lattice.q
    W, Wb, J = lattice.W, lattice.Wbar, lattice.J
    half = n // 2
    params = Parameters(q, n, max(half, 1), max(half, 1))
    mult = multiplicities(params)
    if bases is None:
        bases = {i: harmonic_basis(lattice, i) for i in range(half + 1)}
    out = {}

    bad = [{"i": i, "found": bases[i].dim, "expected": mult[i]}
           for i in range(half + 1) if bases[i].dim != mult[i]]
    kernel_bad = [{"i": i} for i in range(1, half + 1)
                  if np.any(exact_matmul(W(i - 1, i), bases[i].vectors) != 0)]
    out["harmonic_dimension"] = _report(half + 1, bad + kernel_bad)

    # V[k, i] = W_{k,i} U_i
    V = {(k, i): exact_matmul(W(k, i), bases[i].vectors)
         for i in range(half + 1) for k in range(n + 1)}

    checked, bad = 0, []
    for i in range(half + 1):
        for k in range(n + 1):
            if k < i or k > n - i:
                checked += 1
                if np.any(V[k, i] != 0):
                    bad.append({"i": i, "k": k, "claim": "W_{k,i} u = 0"})
            lhs = exact_matmul(Wb(k, i), bases[i].vectors)
            rhs = _scaled((-1) ** i * q ** (i * (i - 1) // 2), V[k, i])
            checked += 1
            if not _equal(lhs, rhs):
                bad.append({"i": i, "k": k, "claim": "Wbar_{k,i} u = (-1)^i q^C(i,2) W_{k,i} u"})
    out["harmonic_annihilation"] = _report(checked, bad)

    checked, bad = 0, []
    for i in range(half + 1):
        for j in range(half + 1):
            for k in range(n + 1):
                lhs = exact_matmul(V[k, i].T, V[k, j])
                if i == j:
                    coef = _qcoef(q, 1, i * (k - i), gauss(n - 2 * i, k - i, q))
                    rhs = _scaled(coef, exact_matmul(bases[i].vectors.T, bases[i].vectors))
                else:
                    rhs = np.zeros(lhs.shape, dtype=np.int64)
                checked += 1
                if not _equal(lhs, rhs):
                    bad.append({"i": i, "j": j, "k": k})
    out["inner_products"] = _report(checked, bad)

    checked, bad = 0, []
    for i in range(half + 1):
        for k in range(n + 1):
            for l in range(n + 1):
                lhs = exact_matmul(Wb(k, l), V[l, i])
                coef = _qcoef(q, (-1) ** i, i * (i - 1) // 2 + k * (l - i),
                              gauss(n - k - i, l - i, q))
                rhs = _scaled(coef, V[k, i])
                checked += 1
                if not _equal(lhs, rhs):
                    bad.append({"i": i, "k": k, "l": l})
    out["disjointness_eigenvalues"] = _report(checked, bad)

    checked, bad = 0, []
    for k in range(n + 1):
        for l in range(n + 1):
            ones_l = np.ones((len(lattice.level(l)), 1), dtype=np.int64)
            ones_k = np.ones((len(lattice.level(k)), 1), dtype=np.int64)
            checked += 1
            if not _equal(J(k, l) @ ones_l, ones_k * gauss(n, l, q)):
                bad.append({"i": 0, "k": k, "l": l})
            for i in range(1, half + 1):
                checked += 1
                if np.any(exact_matmul(J(k, l), V[l, i]) != 0):
                    bad.append({"i": i, "k": k, "l": l})
    out["all_ones_action"] = _report(checked, bad)

    out["ok"] = all(v["ok"] for v in out.values())
    return out


def spectrum_crosscheck(lattice, k, rtol=1e-8):
    """Dense eigenvalues of the W-bar_{k,k} block against theta/multiplicities."""
    n, q = lattice.n, lattice.q
    params = Parameters(q, n, k, k)
    mult = multiplicities(Parameters(q, n, max(n // 2, 1), max(n // 2, 1)))
    table = []
    expected = []
    for i in range(min(k, n - k) + 1):
        t = theta(params, i, k, k)
        table.append({"i": i, "theta": rational_str(t.rational_value()),
                      "multiplicity": mult[i]})
        expected += [float(t.rational_value())] * mult[i]
    expected = np.sort(np.array(expected))
    found = np.sort(np.linalg.eigvalsh(lattice.Wbar(k, k).astype(float)))
    scale = max(1.0, float(np.abs(expected).max())) if expected.size else 1.0
    same_size = found.shape == expected.shape
    err = float(np.abs(found - expected).max()) if same_size and found.size else float("inf")
    ok = same_size and bool(np.allclose(found, expected, rtol=rtol, atol=rtol * scale))
    distinct = []
    for v in np.unique(np.round(found, 6)):
        distinct.append({"float_value": float(v),
                         "count": int(np.sum(np.abs(found - v) <= 1e-6 * scale))})
    return {
        "q": q, "n": n, "k": k,
        "expected": table,
        "float_eigenvalues": distinct,
        "float_max_abs_error": err,
        "float_rtol": rtol,
        "trace_zero": sum(Fraction(e["theta"]) * e["multiplicity"] for e in table) == 0,
        "ok": ok,
    }
