import json
from fractions import Fraction

import mpmath
import pytest

from crosscert.certificate import (LAMBDA_FLOOR, ReducedBlock, build_blocks, certify,
                                   coeff_a, coeff_b, lambda_search, psd_check_2x2,
                                   structure_checks, verify_certificate_document)
from crosscert.errors import InvalidParameterError, SearchExhaustedError
from crosscert.exactnum import QuadraticNumber, qn_sign
from crosscert.spectrum import Parameters

from oracles import gauss_pascal, raw_block_det_mp


def P(q, n, k, l):
    return Parameters.make(q, n, k, l)


def sweep(qs=(2, 3, 4, 5, 7, 8, 9), n_max=14):
    for q in qs:
        for n in range(2, n_max + 1):
            for k in range(1, n // 2 + 1):
                for l in range(1, k + 1):
                    yield P(q, n, k, l)


SMALL = [P(2, 4, 2, 2), P(2, 6, 3, 2), P(3, 8, 4, 2), P(5, 9, 4, 1), P(2, 10, 5, 5),
         P(4, 7, 3, 3), P(9, 12, 6, 3)]


def test_coeff_a_equal_dimensions_is_lambda():
    p = P(3, 6, 3, 3)
    for lam in [Fraction(0), Fraction(1, 7), Fraction(5)]:
        assert coeff_a(p, lam) == lam


def test_coeff_a_example():
    p = P(2, 6, 3, 2)
    assert gauss_pascal(5, 2, 2) * gauss_pascal(5, 1, 2) == 155 * 31 == 4805
    assert 2 ** 9 * 7 * 1 == 3584
    a0 = coeff_a(p, 0)
    assert (a0.d, a0.a, a0.b) == (4805, 0, Fraction(2, 3584))
    assert a0.b == Fraction(1, 1792)


@pytest.mark.parametrize("p", SMALL)
@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1, 3), Fraction(17, 4)])
def test_coefficients_satisfy_defining_relations(p, lam):
    q, n, k, l = p.q, p.n, p.k, p.l
    G = gauss_pascal
    A, B = G(n - 1, k - 1, q), G(n - 1, l - 1, q)
    sD = QuadraticNumber.sqrt(A * B)
    lhs = coeff_a(p, lam) * (q ** (k * k) * (q ** k - 1) * G(n - k, k, q))
    rhs = sD * Fraction(q ** l * (q ** (k - l) - 1), 2) + q ** (l * l) * (q ** l - 1) * G(n - l, l, q) * lam
    assert lhs == rhs
    # multiply the b relation through by A so sqrt(B/A) becomes sqrt(D)
    lhs = coeff_b(p, lam) * (A * q ** (k * l) * G(n - k, l, q))
    rhs = (Fraction(-(q ** l) * G(n - 1, l, q) * A, 2)
           - sD * (q ** (l * l) * G(n - l, l, q) * lam))
    assert lhs == rhs


def test_coeff_b_examples():
    assert 16 * Fraction(-7, 8) == Fraction(-1, 2) * 4 * gauss_pascal(3, 2, 2)
    assert coeff_b(P(2, 4, 2, 2), 0) == Fraction(-7, 8)
    p = P(3, 9, 4, 2)
    q, n, k, l = 3, 9, 4, 2
    assert coeff_b(p, 0) == Fraction(-(q ** l) * gauss_pascal(n - 1, l, q),
                                     2 * q ** (k * l) * gauss_pascal(n - k, l, q))
    assert coeff_b(p, Fraction(1, 10)) < coeff_b(p, 0)


def test_scalar_conditions_cover_l_plus_one_to_k():
    _, scalars = build_blocks(P(2, 8, 4, 4), 0)
    assert scalars == []
    p = P(3, 6, 3, 1)
    _, scalars = build_blocks(p, 0)
    assert [s.i for s in scalars] == [2, 3]
    q, n, k = 3, 6, 3
    G = gauss_pascal
    sD = mpmath.sqrt(G(5, 2, q) * G(5, 0, q))
    a0 = sD * q * (q ** 2 - 1) / 2 / (q ** 9 * (q ** 3 - 1) * G(3, 3, q))
    for sc in scalars:
        i = sc.i
        th = ((-1) ** i * mpmath.power(q, mpmath.mpf(i * (i - 1)) / 2 + k * k - i * k)
              * G(n - k - i, k - i, q))
        expect = sD / 2 - th * a0
        assert abs(mpmath.mpf(float(sc.value)) - expect) < 1e-9 * abs(expect)
        assert sc.nonneg == (expect >= 0)


def test_det_sign_preserved_by_scaling():
    # det_scaled = (den/num) * det_raw, checked against the mpmath raw det
    p = P(2, 6, 3, 2)
    blocks, _ = build_blocks(p, Fraction(1, 64))
    for blk in blocks:
        det, scale = raw_block_det_mp(p.q, p.n, p.k, p.l, blk.i, Fraction(1, 64))
        if qn_sign(blk.det) == 0:
            assert abs(det) < scale * mpmath.mpf(2) ** -150
        else:
            assert (det > 0) == (qn_sign(blk.det) > 0)


def test_determinant_positive_at_zero_example():
    blocks, _ = build_blocks(P(2, 6, 3, 2), 0)
    assert qn_sign(blocks[2].det) > 0


def _blk(p, r, s, d=2):
    p, r, s = (QuadraticNumber(d, x) for x in (p, r, s))
    return ReducedBlock(0, p, r, s, p * s - r * r, False)


def test_psd_check_2x2_examples():
    assert psd_check_2x2(_blk(1, 0, 1))
    assert not psd_check_2x2(_blk(1, 2, 1))
    assert not psd_check_2x2(_blk(-1, 0, 0))
    assert psd_check_2x2(_blk(0, 0, 0))


def test_s0_rank_one_at_feasible_lambda():
    p = P(2, 6, 3, 2)
    lam, _ = lambda_search(p)
    blocks, _ = build_blocks(p, lam)
    assert psd_check_2x2(blocks[0]) and blocks[0].det == 0


def test_lambda_search_examples():
    lam, bracket = lambda_search(P(2, 4, 2, 2))
    assert 0 < lam <= 1
    assert bracket[0] == lam and bracket[1] in (lam, 2 * lam)
    p = P(2, 6, 3, 2)
    lam, _ = lambda_search(p)
    blocks, scalars = build_blocks(p, lam)
    assert len(blocks) == 3 and all(qn_sign(b.det) >= 0 for b in blocks)
    assert [s.i for s in scalars] == [3] and scalars[0].nonneg


def test_lambda_search_refinement_keeps_a_valid_bracket():
    p = P(3, 8, 3, 2)
    lam, (lo, hi) = lambda_search(p, refine_bits=12)
    assert lam <= lo < hi
    assert certify(p, lam=lo).feasible
    assert not certify(p, lam=hi).feasible


def test_lambda_search_exhaustion_is_reported():
    with pytest.raises(SearchExhaustedError) as err:
        lambda_search(P(9, 14, 1, 1), floor=Fraction(1, 2 ** 10))
    assert err.value.last_lambda == Fraction(1, 2 ** 10)
    assert LAMBDA_FLOOR == Fraction(1, 2 ** 64)


def test_certify_examples():
    c = certify(P(2, 4, 2, 2))
    assert c.verdict == "feasible" and c.bound == 49 == 7 ** 2
    c = certify(P(2, 6, 3, 2))
    assert c.verdict == "feasible" and c.bound == 4805
    with pytest.raises(InvalidParameterError):
        certify((2, 3, 2, 1))


def test_certify_records_swap():
    c = certify((2, 6, 2, 3))
    assert c.params.swapped and (c.params.k, c.params.l) == (3, 2)
    assert c.to_json()["swapped"] is True


def test_explicit_lambda_zero_is_never_feasible():
    assert certify(P(2, 6, 3, 2), lam=0).verdict == "infeasible"


def test_large_lambda_is_infeasible():
    assert certify(P(2, 6, 3, 2), lam=Fraction(1000)).verdict == "infeasible"


@pytest.mark.parametrize("p", SMALL)
def test_certificate_document_is_self_contained(p):
    doc = json.loads(json.dumps(certify(p).to_json()))
    ok, reasons = verify_certificate_document(doc)
    assert ok, reasons
    # tampering with a block is detected
    doc["blocks"][0]["p"]["a"] = "-1/1"
    ok, reasons = verify_certificate_document(doc)
    assert not ok


def test_bound_integrality_and_equal_dimensions_consistency():
    for p in sweep(qs=(2, 3, 7), n_max=10):
        c = certify(p)
        assert c.bound == gauss_pascal(p.n - 1, p.k - 1, p.q) * gauss_pascal(p.n - 1, p.l - 1, p.q)
        total = c.coefficients.alpha + c.coefficients.beta
        assert total * total == c.bound
        if p.k == p.l:
            assert c.coefficients.a_lambda == c.coefficients.lam
            assert c.feasible


def test_structure_examples():
    r = structure_checks(P(2, 6, 3, 2), 0)
    assert r["ok"], r["failed"]
    r = structure_checks(P(2, 6, 3, 2), Fraction(1, 4))
    assert r["ok"], r["failed"]
    blocks, _ = build_blocks(P(2, 6, 3, 2), Fraction(1, 4))
    assert blocks[0].det == 0
    # k = l: every |theta a(0)| vanishes
    p = P(3, 8, 3, 3)
    assert structure_checks(p, 0)["ok"]
    assert coeff_a(p, 0) == 0


@pytest.mark.parametrize("lam", [Fraction(1, 3), Fraction(7), Fraction(1, 2 ** 30)])
def test_rank_one_blocks_do_not_depend_on_lambda(lam):
    for p in [P(2, 6, 3, 2), P(3, 9, 4, 1), P(5, 8, 4, 4)]:
        rep = structure_checks(p, lam)
        assert not [c for c in rep["failed"] if c["name"].startswith("rank_one")]


def test_rank_one_check_names_the_failure():
    from crosscert.certificate import _rank_one_check
    rep = _rank_one_check("rank_one_S0", _blk(2, -1, 2), Fraction(1), 1, 1, 1)
    assert not rep["ok"]
    assert "determinant is not zero" in rep["failures"]
    rep = _rank_one_check("rank_one_S0", _blk(1, -1, 1), Fraction(1), 1, 1, 1)
    assert rep["ok"]


def test_congruence_soundness_on_sweep():
    """sign(det scaled) == sign(det raw), raw det evaluated with 200-bit floats."""
    tiny = mpmath.mpf(2) ** -150
    for p in sweep():
        lam_star, _ = lambda_search(p)
        for lam in (Fraction(0), lam_star):
            blocks, _ = build_blocks(p, lam)
            for blk in blocks:
                det, scale = raw_block_det_mp(p.q, p.n, p.k, p.l, blk.i, lam)
                sgn = qn_sign(blk.det)
                if sgn == 0:
                    assert abs(det) <= scale * tiny, (p, lam, blk.i)
                else:
                    assert abs(det) > scale * tiny, (p, lam, blk.i)
                    assert (det > 0) == (sgn > 0), (p, lam, blk.i)
