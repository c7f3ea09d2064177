import random
from fractions import Fraction

import pytest

from lieiso.polyring import (
    ExactDivisionError,
    ParseError,
    PolyError,
    Polynomial,
    VarOrder,
    content_in,
    derivative,
    diff,
    divexact,
    gcd,
    parse_polynomial,
    prem,
    res_chain,
    resultant,
    squarefree_primitive_part,
)

XYZ = VarOrder(["x", "y", "z"])


def P(text, order=XYZ):
    return parse_polynomial(text, order)


# ----------------------------------------------------------------------
# Sylvester determinant oracle (independent of the PRS implementation)


def sylvester_resultant(p, q, v):
    vi = p.order.index(v)
    m, n = p.degree_in(vi), q.degree_in(vi)
    pc = p.coeffs_in(vi)
    qc = q.coeffs_in(vi)
    size = m + n
    zero = Polynomial.zero(p.order)
    rows = []
    for shift in range(n):  # rows of p's coefficients first
        row = [zero] * size
        for k in range(m + 1):
            row[shift + (m - k)] = pc[k]
        rows.append(row)
    for shift in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[shift + (n - k)] = qc[k]
        rows.append(row)
    return _det(rows, p.order)


def _det(rows, order):
    n = len(rows)
    if n == 0:
        return Polynomial.const(order, 1)
    if n == 1:
        return rows[0][0]
    total = Polynomial.zero(order)
    for j in range(n):
        a = rows[0][j]
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = a * _det(minor, order)
        total = total + term if j % 2 == 0 else total - term
    return total


def random_poly(rng, order, max_deg=3, max_terms=4, vars_sub=None):
    vs = vars_sub if vars_sub is not None else range(order.arity)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * order.arity
        for vi in vs:
            exps[vi] = rng.randint(0, max_deg)
        terms[tuple(exps)] = Fraction(rng.randint(-9, 9))
    return Polynomial(order, terms)


# ----------------------------------------------------------------------
# arithmetic


def test_add_cancellation():
    assert P("x + 1") + P("-x + 1") == P("2")


def test_difference_of_squares():
    assert P("x + y") * P("x - y") == P("x^2 - y^2")


def test_zero_absorbs():
    rng = random.Random(1)
    zero = Polynomial.zero(XYZ)
    for _ in range(20):
        p = random_poly(rng, XYZ)
        assert (zero * p).is_zero()


def test_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(60):
        a = random_poly(rng, XYZ)
        b = random_poly(rng, XYZ)
        c = random_poly(rng, XYZ)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_pow_matches_repeated_mul():
    p = P("x + 2*y - 1")
    assert p ** 3 == p * p * p
    assert p ** 0 == P("1")


# ----------------------------------------------------------------------
# ranked view


def test_ranked_view_xz_minus_1():
    v = P("x*z - 1").ranked_view()
    assert v.mvar == "z"
    assert v.mdeg == 1
    assert v.init == P("x")
    assert v.tail == P("-1")


def test_ranked_view_quadratic():
    v = P("2*y^2 - 3").ranked_view()
    assert v.mvar == "y"
    assert v.mdeg == 2
    assert v.init == P("2")
    assert v.tail == P("-3")


def test_ranked_view_single_variable():
    v = P("x").ranked_view()
    assert v.mvar == "x"
    assert v.init == P("1")
    assert v.tail.is_zero()


def test_ranked_view_reconstructs():
    rng = random.Random(3)
    for _ in range(40):
        p = random_poly(rng, XYZ)
        if p.is_constant():
            continue
        v = p.ranked_view()
        mv = Polynomial.variable(XYZ, v.mvar)
        assert v.init * mv ** v.mdeg + v.tail == p


def test_ranked_view_rejects_constants():
    with pytest.raises(PolyError):
        P("5").ranked_view()


# ----------------------------------------------------------------------
# pseudo-division


def test_prem_monic():
    r, e, q = prem(P("x^2"), P("x - 1"), "x")
    assert (r, e, q) == (P("1"), 0, P("x + 1"))


def test_prem_single_step():
    r, e, q = prem(P("y"), P("x*y - 1"), "y")
    assert r == P("1")
    assert q == P("1")
    assert e == 1


def test_prem_low_degree_passthrough():
    p = P("x + 3")
    r, e, q = prem(p, P("x^2 - 2"), "x")
    assert r == p and e == 0 and q.is_zero()


def test_prem_identity_random():
    rng = random.Random(11)
    for _ in range(80):
        p = random_poly(rng, XYZ, max_deg=4)
        t = random_poly(rng, XYZ, max_deg=3)
        vi = t.mvar_index()
        if vi < 0:
            continue
        v = XYZ.names[vi]
        r, e, q = prem(p, t, v)
        init = t.coeff_of_power(vi, t.degree_in(vi))
        assert init ** e * p == q * t + r
        assert r.degree_in(vi) < t.degree_in(vi)


# ----------------------------------------------------------------------
# resultants


def test_resultant_examples():
    assert resultant(P("x^2 - 2"), P("x - 1"), "x") == P("-1")
    assert resultant(P("x"), P("x^2 - 2"), "x") == P("-2")


def test_resultant_self_is_zero():
    for text in ["x^2 - 2", "x*y + 1", "x^3 + x - 4"]:
        p = P(text)
        assert resultant(p, p, "x").is_zero()


def test_resultant_discriminant_convention():
    order = VarOrder(["b", "c", "x"])
    p = parse_polynomial("x^2 + b*x + c", order)
    q = parse_polynomial("2*x + b", order)
    assert resultant(p, q, "x") == parse_polynomial("4*c - b^2", order)


def test_resultant_both_constant_rejected():
    with pytest.raises(PolyError):
        resultant(P("3"), P("5"), "x")


def test_resultant_matches_sylvester_random():
    rng = random.Random(23)
    for _ in range(60):
        p = random_poly(rng, XYZ, max_deg=3, max_terms=3)
        q = random_poly(rng, XYZ, max_deg=3, max_terms=3)
        if p.degree_in(0) == 0 or q.degree_in(0) == 0:
            continue
        assert resultant(p, q, "x") == sylvester_resultant(p, q, "x")


def test_resultant_vanishes_iff_common_factor():
    rng = random.Random(29)
    hits = 0
    for _ in range(60):
        common = random_poly(rng, XYZ, max_deg=2, max_terms=2)
        if common.degree_in(0) == 0:
            continue
        a = random_poly(rng, XYZ, max_deg=2, max_terms=2)
        b = random_poly(rng, XYZ, max_deg=2, max_terms=2)
        if a.degree_in(0) == 0 or b.degree_in(0) == 0:
            continue
        hits += 1
        assert resultant(common * a, common * b, "x").is_zero()
    assert hits >= 15


def test_res_chain():
    assert res_chain(P("x*y + 1"), []) == P("x*y + 1")
    assert res_chain(P("x"), [P("x^2 - 2")]) == P("-2")
    assert res_chain(P("7"), [P("x^2 - 2"), P("y - x")]) == P("7")


# ----------------------------------------------------------------------
# derivative and squarefree part


def test_derivative():
    assert derivative(P("x^2 + 3")) == P("2*x")
    assert derivative(P("x*z - 1")) == P("x")
    assert derivative(P("y^2 - 2")) == P("2*y")
    with pytest.raises(PolyError):
        derivative(P("4"))


def test_squarefree_primitive_part():
    p = P("(x - 1)^2 * (x + 2)")
    out = squarefree_primitive_part(p, "x")
    assert out == P("(x - 1)*(x + 2)")
    out2 = squarefree_primitive_part(P("y*(x^2 + 1)"), "x")
    assert out2 == P("x^2 + 1")
    mono = P("x^3 + x + 1")
    assert squarefree_primitive_part(mono, "x") == mono


def test_squarefree_output_coprime_with_derivative():
    rng = random.Random(31)
    for _ in range(40):
        p = random_poly(rng, XYZ, max_deg=3, max_terms=3)
        if p.degree_in(0) == 0:
            continue
        s = squarefree_primitive_part(p, "x")
        assert gcd(s, diff(s, "x")).is_constant()


# ----------------------------------------------------------------------
# gcd / division


def test_gcd_planted():
    g = P("x*y - 2")
    a = g * P("x + 1")
    b = g * P("y^2 + 3")
    got = gcd(a, b)
    assert got == g or got == -g


def test_divexact_roundtrip():
    rng = random.Random(37)
    for _ in range(40):
        a = random_poly(rng, XYZ, max_deg=2, max_terms=3)
        b = random_poly(rng, XYZ, max_deg=2, max_terms=3)
        if a.is_zero() or b.is_zero():
            continue
        assert divexact(a * b, b) == a


def test_divexact_rejects_nondivisor():
    with pytest.raises(ExactDivisionError):
        divexact(P("x^2 + 1"), P("x + 1"))


def test_content():
    p = P("y*x^2 + y^2*x^2")  # content w.r.t. x is y (times unit)
    c = content_in(p, "x")
    assert c == P("y + y^2") or c == P("y^2 + y")


# ----------------------------------------------------------------------
# evaluation


def test_evaluate_partial():
    assert P("x^2 + y").evaluate({"x": 2}) == P("y + 4")


def test_evaluate_full_is_constant():
    p = P("x*z - 1")
    out = p.evaluate({"x": Fraction(3, 2), "y": 0, "z": 2})
    assert out.is_constant()
    assert out.constant_value() == Fraction(2)


def test_evaluate_commutes_with_ring_ops():
    rng = random.Random(41)
    for _ in range(40):
        p = random_poly(rng, XYZ)
        q = random_poly(rng, XYZ)
        binding = {"x": Fraction(rng.randint(-4, 4), rng.randint(1, 4))}
        assert (p * q).evaluate(binding) == p.evaluate(binding) * q.evaluate(binding)
        assert (p + q).evaluate(binding) == p.evaluate(binding) + q.evaluate(binding)


def test_substitute():
    p = P("x^2 + y")
    out = p.substitute({"x": P("y - 1")})
    assert out == P("(y-1)^2 + y")


# ----------------------------------------------------------------------
# parsing and printing


def test_parse_rationals_and_powers():
    assert P("3/2*x^2 - 1/3") == Polynomial(XYZ, {(2, 0, 0): Fraction(3, 2), (0, 0, 0): Fraction(-1, 3)})


def test_parse_whitespace_insensitive():
    assert P(" x ^ 2+ y*z ") == P("x^2+y*z")


def test_parse_errors():
    with pytest.raises(ParseError):
        P("x +")
    with pytest.raises(ParseError):
        P("w + 1")  # unknown variable
    with pytest.raises(ParseError):
        P("x ? y")


def test_print_parse_roundtrip_random():
    rng = random.Random(43)
    for _ in range(150):
        p = random_poly(rng, XYZ, max_deg=4, max_terms=5)
        assert parse_polynomial(p.to_str(), XYZ) == p


def test_rename_across_orders():
    big = VarOrder(["a", "x", "y", "z"])
    p = P("x*z - y")
    moved = p.rename(big)
    assert moved.to_str() == "x*z - y"
    back = moved.rename(XYZ)
    assert back == p
