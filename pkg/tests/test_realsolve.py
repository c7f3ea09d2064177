import random
from fractions import Fraction

import pytest

from lieiso.chains import triangularize
from lieiso.config import Budget
from lieiso.polyring import Polynomial, VarOrder, parse_polynomial
from lieiso.realsolve import (
    SAS,
    RealVerdict,
    border_polynomial,
    eval_box,
    isolate_real_roots,
    rational_sequence,
    real_points_of_chain,
    sas_has_real_solution,
)

XYZ = VarOrder(["x", "y", "z"])


def P(text, order=XYZ):
    return parse_polynomial(text, order)


def chain(*texts, order=XYZ):
    return tuple(P(t, order) for t in texts)


# ----------------------------------------------------------------------
# univariate isolation


def test_isolate_sqrt2():
    boxes = isolate_real_roots(P("x^2 - 2"))
    assert len(boxes) == 2
    lows = sorted(b.interval("x") for b in boxes)
    assert lows[0][0] < -1 < lows[0][1] or lows[0][1] < 0  # negative root isolated
    for b in boxes:
        lo, hi = b.interval("x")
        assert (lo + hi != 0) and lo < hi
        # interval brackets a true root: p changes sign
        p = P("x^2 - 2")
        assert p.evaluate({"x": lo}).constant_value() * p.evaluate({"x": hi}).constant_value() < 0


def test_isolate_no_real_roots():
    assert isolate_real_roots(P("x^2 + 3")) == []


def test_isolate_origin():
    boxes = isolate_real_roots(P("x"))
    assert len(boxes) == 1
    lo, hi = boxes[0].interval("x")
    assert lo < 0 < hi


def test_isolate_many_rational_roots():
    p = P("(x - 1) * (x + 2) * (x - 3) * x")
    boxes = isolate_real_roots(p)
    assert len(boxes) == 4


def test_isolate_random_products():
    rng = random.Random(9)
    for _ in range(40):
        roots = sorted(rng.sample(range(-8, 9), rng.randint(1, 4)))
        p = Polynomial.const(XYZ, 1)
        for r in roots:
            p = p * (P("x") - Polynomial.const(XYZ, r))
        boxes = isolate_real_roots(p)
        assert len(boxes) == len(roots)
        ivs = sorted(b.interval("x") for b in boxes)
        for r, (lo, hi) in zip(roots, ivs):
            assert lo < r < hi or (lo <= r <= hi)


# ----------------------------------------------------------------------
# chain real points


def test_chain_four_real_points():
    pts = real_points_of_chain(chain("x^2 - 2", "2*y^2 - 3", "x*z - 1"))
    assert len(pts) == 4


def test_chain_two_real_points():
    pts = real_points_of_chain(chain("x + 1", "y^2 - 2", "z + 1"))
    assert len(pts) == 2


def test_chain_no_real_points():
    pts = real_points_of_chain(chain("x^2 + 3", "z^2 + y^2 - 1"))
    assert pts == []


def test_chain_points_satisfy_system_intervals():
    T = chain("x^2 - 2", "2*y^2 - 3", "x*z - 1")
    for box in real_points_of_chain(T):
        box.refine(6)
        grid = {XYZ.index(n): iv for n, iv in box.intervals.items()}
        for t in T:
            lo, hi = eval_box(t, grid)
            assert lo <= 0 <= hi  # residual interval must straddle zero


def test_box_stability_under_extra_refinement():
    T = chain("x^2 - 2", "2*y^2 - 3", "x*z - 1")
    pts = real_points_of_chain(T)
    before = [dict(b.intervals) for b in pts]
    for b in pts:
        b.refine(10)
    # nested refinement, no loss, no merge
    for b, old in zip(pts, before):
        for n, (lo, hi) in b.intervals.items():
            olo, ohi = old[n]
            assert olo <= lo <= hi <= ohi
    mids = sorted(tuple(b.midpoint(n) for n in XYZ.names) for b in pts)
    assert len(set(mids)) == len(pts)


# ----------------------------------------------------------------------
# SAS decisions


def test_sas_paper_empty_real():
    S = SAS(XYZ, equations=[P("x^2 + y^2 + z^2 + 2"), P("3*x^2 + 4*y^2 + 4*z^2 + 5")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.EMPTY
    # while over C there is one chain
    D = triangularize(S.equations, XYZ)
    assert len(D) == 1


def test_sas_sqrt2_positive():
    S = SAS(XYZ, equations=[P("x^2 - 2")], positive=[P("x")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.NONEMPTY
    lo, hi = v.witness.interval("x")
    assert Fraction(0) < lo < hi <= Fraction(2)


def test_sas_whole_space():
    S = SAS(XYZ)
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.NONEMPTY


def test_sas_sign_conditions_zero_dim():
    # x^2 = 4 with x >= 0 picks x = 2
    S = SAS(XYZ, equations=[P("x^2 - 4")], nonneg=[P("x")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.NONEMPTY
    lo, hi = v.witness.interval("x")
    assert lo <= 2 <= hi and lo > -1


def test_sas_strict_fails_on_zero():
    # x = 0 with x > 0 is empty
    S = SAS(XYZ, equations=[P("x")], positive=[P("x")])
    assert sas_has_real_solution(S).status == RealVerdict.EMPTY


def test_sas_nonzero_excludes_point():
    S = SAS(XYZ, equations=[P("x^2 - x")], nonzero=[P("x")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.NONEMPTY
    lo, hi = v.witness.interval("x")
    assert lo <= 1 <= hi and lo > 0


def test_sas_positive_dimensional_witness():
    # x*y = 1 has real points (positive-dimensional chain; sampling)
    S = SAS(XYZ, equations=[P("x*y - 1")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.NONEMPTY


def test_sas_positive_dimensional_pruned():
    # y^2 + 1 = 0 with x free: pruning certificate
    S = SAS(XYZ, equations=[P("y^2 + 1")])
    v = sas_has_real_solution(S)
    assert v.status == RealVerdict.EMPTY


def test_sas_never_wrong_against_grid_oracle():
    # random univariate-in-x systems vs exact evaluation on a rational grid
    rng = random.Random(17)
    grid = [Fraction(n, 2) for n in range(-8, 9)]
    for _ in range(30):
        coeffs = [rng.randint(-4, 4) for _ in range(3)]
        p = P("x^2") * coeffs[0] + P("x") * coeffs[1] + coeffs[2]
        if p.is_zero():
            continue
        q = P("x") * rng.randint(-2, 2) + rng.randint(-2, 2)
        S = SAS(XYZ, equations=[p], nonneg=[q])
        v = sas_has_real_solution(S)
        oracle_hit = any(
            p.evaluate({"x": g}).constant_value() == 0
            and q.evaluate({"x": g}).constant_value() >= 0
            for g in grid
        )
        if oracle_hit:
            assert v.status != RealVerdict.EMPTY
        if v.status == RealVerdict.NONEMPTY:
            witness = v.witness
            witness.refine(8)
            lo, hi = witness.interval("x")
            ivlo, ivhi = eval_box(p, {XYZ.index("x"): (lo, hi)})
            assert ivlo <= 0 <= ivhi  # p vanishes inside the certified box


# ----------------------------------------------------------------------
# border polynomial


def sylvester_resultant(p, q, v):
    from tests.test_polyring import sylvester_resultant as syl

    return syl(p, q, v)


def test_border_polynomial_one_level():
    t = P("x*y^2 + x + 1")
    bp = border_polynomial((t,))
    # oracle: squarefree primitive part of res(2xy, t, y) = 4x^2(x+1)
    assert bp == P("x^2 + x") or bp == -P("x^2 + x")


def test_border_polynomial_zero_dim_is_one():
    bp = border_polynomial(chain("x^2 - 2", "2*y^2 - 3", "x*z - 1"))
    assert bp.is_constant() and bp.constant_value() == 1


def test_border_polynomial_rejects_sat_member():
    T = chain("x^2 - 2")
    with pytest.raises(ValueError):
        border_polynomial(T, [P("x^2 - 2")])


def test_border_polynomial_with_inequation():
    t = P("y^2 - x")
    bp = border_polynomial((t,), [P("y - 1")])
    # res(2y, t, y) ~ x; res(y - 1, t, y) = 1 - x
    vals = {bp.evaluate({"x": v}).constant_value() for v in (0, 1)}
    assert 0 in vals or bp.evaluate({"x": 0}).is_zero() or bp.evaluate({"x": 1}).is_zero()
    assert bp.evaluate({"x": 0}).constant_value() == 0
    assert bp.evaluate({"x": 1}).constant_value() == 0
    assert bp.evaluate({"x": 4}).constant_value() != 0


# ----------------------------------------------------------------------
# sampling sequence


def test_rational_sequence_prefix():
    seq = rational_sequence(0)
    first = [next(seq) for _ in range(5)]
    assert first == [0, 1, -1, 2, -2]
