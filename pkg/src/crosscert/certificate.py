"""Exact dual certificates for the cross-intersecting bound.

The dual matrix S(lambda) splits into 2x2 blocks S_0..S_l and scalars
s_{l+1}..s_k.  Each 2x2 block is congruence-scaled by diag(1, t_i) with
t_i = sqrt(den_rad / num_rad) of theta_i^{k,l}; afterwards every entry lives
in Q(sqrt(D)), D = [n-1,k-1][n-1,l-1], and PSD-ness is decided with exact
signs.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import SearchExhaustedError
from .exactnum import QuadraticNumber, parse_rational, qn_sign, rational_str
from .spectrum import Parameters, theta

__all__ = [
    "DualCoefficients",
    "ReducedBlock",
    "ScalarCondition",
    "DualCertificate",
    "coeff_a",
    "coeff_b",
    "build_blocks",
    "psd_check_2x2",
    "lambda_search",
    "certify",
    "structure_checks",
    "verify_certificate_document",
    "LAMBDA_FLOOR",
]

LAMBDA_FLOOR = Fraction(1, 2 ** 64)


@dataclass(frozen=True)
class DualCoefficients:
    lam: Fraction
    alpha: QuadraticNumber
    beta: QuadraticNumber
    a_lambda: QuadraticNumber
    b_lambda: QuadraticNumber


@dataclass(frozen=True)
class ReducedBlock:
    i: int
    p: QuadraticNumber
    r: QuadraticNumber
    s: QuadraticNumber
    det: QuadraticNumber
    psd: bool

    def to_json(self):
        return {"i": self.i, "p": self.p.to_json(), "r": self.r.to_json(),
                "s": self.s.to_json(), "det": self.det.to_json(), "psd": self.psd}


@dataclass(frozen=True)
class ScalarCondition:
    i: int
    value: QuadraticNumber
    nonneg: bool

    def to_json(self):
        return {"i": self.i, "value": self.value.to_json(), "nonneg": self.nonneg}


@dataclass
class DualCertificate:
    params: Parameters
    coefficients: DualCoefficients
    blocks: list
    scalars: list
    bound: int
    D: int
    verdict: str
    lambda_bracket: Optional[tuple] = None
    structure: Optional[dict] = field(default=None)

    @property
    def feasible(self):
        return self.verdict == "feasible"

    def to_json(self):
        p = self.params
        c = self.coefficients
        doc = {
            "params": p.as_dict(),
            "swapped": p.swapped,
            "q_prime_power": p.q_prime_power,
            "bound": str(self.bound),
            "D": str(self.D),
            "lambda": rational_str(c.lam),
            "lambda_bracket": (None if self.lambda_bracket is None
                               else [rational_str(x) for x in self.lambda_bracket]),
            "alpha": c.alpha.to_json(),
            "beta": c.beta.to_json(),
            "a_lambda": c.a_lambda.to_json(),
            "b_lambda": c.b_lambda.to_json(),
            "blocks": [b.to_json() for b in self.blocks],
            "scalars": [s.to_json() for s in self.scalars],
            "verdict": self.verdict,
        }
        if self.structure is not None:
            doc["structure"] = self.structure
        return doc


class _Setup:
    """Per-parameter constants shared by every lambda evaluation."""

    def __init__(self, params):
        self.params = params
        q, n, k, l = params.q, params.n, params.k, params.l
        g = params.gauss
        self.A = g(n - 1, k - 1)
        self.B = g(n - 1, l - 1)
        self.D = self.A * self.B
        self.c = QuadraticNumber(self.D, 0, Fraction(1, 2))
        # a(lambda) = a_rad*sqrt(D) + a_lin*lambda
        a_den = q ** (k * k) * (q ** k - 1) * g(n - k, k)
        self.a_rad = Fraction(q ** l * (q ** (k - l) - 1), 2 * a_den)
        self.a_lin = Fraction(q ** (l * l) * (q ** l - 1) * g(n - l, l), a_den)
        # b(lambda) = b_const + b_lin*sqrt(D)*lambda
        b_den = q ** (k * l) * g(n - k, l)
        self.b_const = Fraction(-(q ** l) * g(n - 1, l), 2 * b_den)
        self.b_lin = Fraction(-(q ** (l * l)) * g(n - l, l), b_den * self.A)
        self.gauss_n_l = g(n, l)

    @cached_property
    def thetas(self):
        p = self.params
        out = []
        for i in range(p.l + 1):
            tkl = theta(p, i, p.k, p.l)
            out.append((theta(p, i, p.k, p.k).rational_value(),
                        theta(p, i, p.l, p.l).rational_value(),
                        tkl.rho, Fraction(tkl.den_rad, tkl.num_rad)))
        return out

    @cached_property
    def scalar_thetas(self):
        p = self.params
        return [theta(p, i, p.k, p.k).rational_value()
                for i in range(p.l + 1, p.k + 1)]

    def a(self, lam):
        return QuadraticNumber(self.D, self.a_lin * lam, self.a_rad)

    def b(self, lam):
        return QuadraticNumber(self.D, self.b_const, self.b_lin * lam)

    def block(self, i, lam, a, b):
        tkk, tll, rho, scale = self.thetas[i]
        p = self.c - a * tkk
        s = (self.c - tll * lam) * scale
        r = -(b * rho)
        if i == 0:
            r = r - Fraction(self.gauss_n_l, 2)
        det = p * s - r * r
        return ReducedBlock(i, p, r, s, det, psd_check(p, r, s, det))

    def scalar(self, i, a):
        value = self.c - a * self.scalar_thetas[i - self.params.l - 1]
        return ScalarCondition(i, value, qn_sign(value) >= 0)

    def evaluate(self, lam):
        a, b = self.a(lam), self.b(lam)
        blocks = [self.block(i, lam, a, b) for i in range(self.params.l + 1)]
        scalars = [self.scalar(i, a) for i in range(self.params.l + 1, self.params.k + 1)]
        return a, b, blocks, scalars

    def feasible(self, lam):
        """Short-circuiting feasibility test used by the search."""
        if lam <= 0:
            return False
        a, b = self.a(lam), self.b(lam)
        if qn_sign(a) <= 0:
            return False
        for i in range(self.params.l + 1):
            if not self.block(i, lam, a, b).psd:
                return False
        for i in range(self.params.l + 1, self.params.k + 1):
            if not self.scalar(i, a).nonneg:
                return False
        return True


_SETUPS = {}


def _setup(params):
    key = (params.q, params.n, params.k, params.l)
    s = _SETUPS.get(key)
    if s is None:
        if len(_SETUPS) > 4096:
            _SETUPS.clear()
        s = _SETUPS[key] = _Setup(params)
    return s


def coeff_a(params, lam):
    """a(lambda) from its defining linear relation, exactly."""
    return _setup(params).a(Fraction(lam))


def coeff_b(params, lam):
    """b(lambda) from its defining linear relation, exactly."""
    return _setup(params).b(Fraction(lam))


def psd_check(p, r, s, det=None):
    if det is None:
        det = p * s - r * r
    return qn_sign(p) >= 0 and qn_sign(s) >= 0 and qn_sign(det) >= 0


def psd_check_2x2(block):
    """PSD test of a symmetric 2x2 block [[p, r], [r, s]], exact."""
    return psd_check(block.p, block.r, block.s)


def build_blocks(params, lam):
    """Scaled blocks for i = 0..l and scalars s_i for i = l+1..k."""
    _, _, blocks, scalars = _setup(params).evaluate(Fraction(lam))
    return blocks, scalars


def _verdict(lam, a, blocks, scalars):
    ok = (lam > 0 and qn_sign(a) > 0
          and all(b.psd for b in blocks) and all(s.nonneg for s in scalars))
    return "feasible" if ok else "infeasible"


def lambda_search(params, refine_bits=0, floor=LAMBDA_FLOOR):
    """Find lambda* by halving from 1 and return (lambda*, bracket).

    The bracket is (lambda*, smallest infeasible lambda tried), or
    (lambda*, lambda*) when lambda = 1 is already feasible.  With
    refine_bits > 0 the bracket is bisected that many times; lambda* itself is
    not changed.
    """
    st = _setup(params)
    lam = Fraction(1)
    upper = None
    while True:
        if st.feasible(lam):
            break
        upper = lam
        if lam <= floor:
            raise SearchExhaustedError(
                f"no feasible lambda down to {rational_str(floor)} for "
                f"{params.as_dict()}", params=params, last_lambda=lam)
        lam /= 2
    if upper is None:
        return lam, (lam, lam)
    lo, hi = lam, upper
    for _ in range(refine_bits):
        mid = (lo + hi) / 2
        if st.feasible(mid):
            lo = mid
        else:
            hi = mid
    return lam, (lo, hi)


def certify(params, lam=None, refine_bits=0, with_structure=False):
    """Build the dual certificate; lam=None runs the halving search."""
    if not isinstance(params, Parameters):
        params = Parameters.make(*params)
    st = _setup(params)
    bracket = None
    if lam is None:
        lam, bracket = lambda_search(params, refine_bits=refine_bits)
    lam = parse_rational(lam)
    a, b, blocks, scalars = st.evaluate(lam)
    alpha = st.c
    bound_qn = (alpha + alpha) * (alpha + alpha)
    bound = bound_qn.to_rational()
    assert bound == st.D and bound.denominator == 1
    coeffs = DualCoefficients(lam, alpha, alpha, a, b)
    cert = DualCertificate(params, coeffs, blocks, scalars, int(bound), st.D,
                           _verdict(lam, a, blocks, scalars), bracket)
    if with_structure:
        cert.structure = structure_checks(params, lam)
    return cert


def verify_certificate_document(doc):
    """Re-derive the verdict from the serialised numbers alone.

    Returns (ok, reasons); ok means the stored verdict and every stored psd /
    nonneg flag and determinant are reproduced.
    """
    reasons = []
    D = int(doc["D"])
    lam = parse_rational(doc["lambda"])
    a = QuadraticNumber.from_json(doc["a_lambda"])
    all_psd = True
    for blk in doc["blocks"]:
        p, r, s = (QuadraticNumber.from_json(blk[x]) for x in "prs")
        if {p.d, r.d, s.d} != {D}:
            reasons.append(f"block {blk['i']}: radicand differs from D")
        det = p * s - r * r
        if det != QuadraticNumber.from_json(blk["det"]):
            reasons.append(f"block {blk['i']}: stored det does not match")
        psd = psd_check(p, r, s, det)
        if psd != blk["psd"]:
            reasons.append(f"block {blk['i']}: psd flag not reproduced")
        all_psd &= psd
    for sc in doc["scalars"]:
        v = QuadraticNumber.from_json(sc["value"])
        nonneg = qn_sign(v) >= 0
        if nonneg != sc["nonneg"]:
            reasons.append(f"scalar {sc['i']}: nonneg flag not reproduced")
        all_psd &= nonneg
    ok = lam > 0 and qn_sign(a) > 0 and all_psd
    verdict = "feasible" if ok else "infeasible"
    if verdict != doc["verdict"]:
        reasons.append(f"verdict {doc['verdict']!r} not reproduced ({verdict!r})")
    if D != int(doc["bound"]):
        reasons.append("bound differs from D")
    return not reasons, reasons


# --- structure checks --------------------------------------------------------

def _rank_one_check(name, blk, scale, r11, r22, r12_sq):
    """Is the raw block (undo scaling) a multiple of [[r11, -sqrt(r12_sq)], .., r22]]?

    scale = den_rad/num_rad used for the second coordinate.
    """
    p, r, s = blk.p, blk.r, blk.s
    raw22 = s / scale
    raw12_sq = (r * r) / scale
    failures = []
    if qn_sign(blk.det) != 0:
        failures.append("determinant is not zero")
    if p * r22 != raw22 * r11:
        failures.append("diagonal ratio differs from the rank-1 matrix")
    if raw12_sq * (r11 * r11) != (p * p) * r12_sq:
        failures.append("off-diagonal magnitude differs from the rank-1 matrix")
    if qn_sign(r) != -qn_sign(p):
        failures.append("off-diagonal sign differs from the rank-1 matrix")
    return {"name": name, "i": blk.i, "ok": not failures, "failures": failures}


def structure_checks(params, lam):
    """Exact checks of the algebraic facts behind feasibility.

    Groups: rank-one structure of S_0 and S_1 at the given lambda; closed form
    and bounds for |theta_i^{k,k} a(0)|; the off-diagonal chain for
    (theta_i^{k,l} b(0))^2; and det S_i(0) > 0 for i >= 2.
    """
    lam = parse_rational(lam)
    st = _setup(params)
    q, n, k, l = params.q, params.n, params.k, params.l
    g = params.gauss
    D = st.D
    checks = []

    _, _, blocks, _ = st.evaluate(lam)
    scale0 = st.thetas[0][3]
    checks.append(_rank_one_check("rank_one_S0", blocks[0], scale0,
                                  q ** l - 1, q ** k - 1, (q ** k - 1) * (q ** l - 1)))
    scale1 = st.thetas[1][3]
    checks.append(_rank_one_check(
        "rank_one_S1", blocks[1], scale1,
        q ** l * (q ** (n - l) - 1), q ** k * (q ** (n - k) - 1),
        q ** (k + l) * (q ** (n - k) - 1) * (q ** (n - l) - 1)))

    # |theta_i^{k,k} a(0)| = coef_i * sqrt(D)
    a0 = st.a_rad
    for i in range(k + 1):
        tkk = theta(params, i, k, k).rational_value()
        coef = abs(tkk * a0)
        closed = (Fraction(1, 2) * Fraction(q) ** (i * (i - 1) // 2 + l - i * k)
                  * Fraction(q ** (k - l) - 1, q ** k - 1)
                  * Fraction(g(n - k - i, k - i), g(n - k, k)))
        checks.append({"name": "diag_closed_form", "i": i, "ok": coef == closed,
                       "failures": [] if coef == closed else ["closed form mismatch"]})
        # intermediate: coef <= 1/2 q^{l - ik/2} (q^{k-l}-1)/(q^k-1), by squares
        mid_sq = (Fraction(1, 4) * Fraction(q) ** (2 * l - i * k)
                  * Fraction(q ** (k - l) - 1, q ** k - 1) ** 2)
        ok = coef * coef <= mid_sq
        checks.append({"name": "diag_intermediate_bound", "i": i, "ok": ok,
                       "failures": [] if ok else ["coef^2 exceeds intermediate bound"]})
        limit = Fraction(1, 2) if i <= 1 else Fraction(1, 2 * q)
        ok = coef < limit
        checks.append({"name": "diag_strict_bound", "i": i, "ok": ok,
                       "failures": [] if ok else [f"coef {coef} not < {limit}"]})

    if l >= 2:
        b0 = st.b_const
        chain = {i: theta(params, i, k, l).squared() * b0 * b0 for i in range(2, l + 1)}
        top = chain[2]
        for i in range(2, l + 1):
            ok = chain[i] <= top
            checks.append({"name": "offdiag_monotone", "i": i, "ok": ok,
                           "failures": [] if ok else ["(theta_i b0)^2 > (theta_2 b0)^2"]})
        closed2 = (Fraction(1, 4) * Fraction(q) ** (2 - 2 * k)
                   * Fraction(q ** (k - 1) - 1, q ** (n - k - 1) - 1)
                   * Fraction(q ** (l - 1) - 1, q ** (n - l - 1) - 1)
                   * Fraction(q ** (n - l) - 1, q ** (n - k) - 1) * D)
        ok = top == closed2
        checks.append({"name": "offdiag_theta2_closed_form", "i": 2, "ok": ok,
                       "failures": [] if ok else ["closed form mismatch"]})
        ok = top < Fraction(D, 4 * q)
        checks.append({"name": "offdiag_final_bound", "i": 2, "ok": ok,
                       "failures": [] if ok else ["(theta_2 b0)^2 not < D/(4q)"]})

        _, _, blocks0, _ = st.evaluate(Fraction(0))
        for i in range(2, l + 1):
            tkk = st.thetas[i][0]
            lhs_coef = Fraction(1, 4) - Fraction(1, 2) * tkk * a0
            ok = lhs_coef > Fraction(1, 4) * (1 - Fraction(1, q))
            checks.append({"name": "det_lhs_bound", "i": i, "ok": ok,
                           "failures": [] if ok else ["LHS not > (1-1/q) D / 4"]})
            ok = qn_sign(blocks0[i].det) > 0
            checks.append({"name": "det_positive_at_zero", "i": i, "ok": ok,
                           "failures": [] if ok else ["det S_i(0) not > 0"]})

    failed = [c for c in checks if not c["ok"]]
    return {
        "params": params.as_dict(),
        "lambda": rational_str(lam),
        "ok": not failed,
        "n_checks": len(checks),
        "check_names": sorted({c["name"] for c in checks}),
        "failed": failed,
    }
