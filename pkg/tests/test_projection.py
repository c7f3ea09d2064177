import random
from fractions import Fraction

import pytest

from lieiso.chains import triangularize
from lieiso.config import Budget
from lieiso.polyring import Polynomial, VarOrder, parse_polynomial
from lieiso.projection import ConstructibleSet, membership, project_complex, project_real
from lieiso.realsolve import SAS


def P(text, order):
    return parse_polynomial(text, order)


def solvable_oracle(F, order, bind):
    """Instantiate the parameters and ask the decomposition for nonemptiness."""
    inst = [f.evaluate(bind) for f in F]
    if any(f.is_constant() and not f.is_zero() for f in inst):
        return False
    D = triangularize([f for f in inst if not f.is_zero()], order)
    return not D.is_empty()


# ----------------------------------------------------------------------
# circle-with-line example: parameter x, unknown y


def test_circle_forbidden_line():
    order = VarOrder(["x", "y"])  # x is the parameter (lowest)
    F = [P("x^2 + y^2 - 1", order)]
    H = [P("x + y - 1", order)]
    cs = project_complex(F, H, 1, order)
    for x in (Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)):
        got = cs.membership((x,))
        want = x != 1  # complex roots exist iff x != 1
        assert got == want, f"x={x}: got {got}, want {want}"


def test_graph_projects_onto_axis():
    order = VarOrder(["u", "x"])
    cs = project_complex([P("x - u", order)], [], 1, order)
    for u in (-3, 0, 7, Fraction(1, 3)):
        assert cs.membership((u,))


def test_inverse_requires_nonzero():
    order = VarOrder(["u", "x"])
    cs = project_complex([P("u*x - 1", order)], [], 1, order)
    for u in (-2, -1, 1, 2, Fraction(1, 2)):
        assert cs.membership((u,))
    assert not cs.membership((0,))


def test_membership_empty_set():
    order = VarOrder(["u"])
    cs = ConstructibleSet(order, ["u"], [])
    assert not cs.membership((5,))


def test_complex_projection_matches_oracle_random():
    rng = random.Random(3)
    order = VarOrder(["u", "x", "y"])
    samples = [Fraction(n, d) for n in range(-4, 5) for d in (1, 2)]
    for _ in range(8):
        # random bilinear-ish system in unknowns x,y with parameter u
        def rpoly():
            terms = {}
            for _k in range(rng.randint(1, 3)):
                e = (rng.randint(0, 1), rng.randint(0, 2), rng.randint(0, 1))
                terms[e] = rng.randint(-3, 3)
            p = Polynomial(order, terms)
            return p

        F = [rpoly() for _ in range(2)]
        if any(f.is_zero() for f in F):
            continue
        try:
            cs = project_complex(F, [], 1, order)
        except Exception:
            continue
        pts = rng.sample(samples, 10)
        for u in pts:
            want = solvable_oracle(F, order, {"u": u})
            got = cs.membership((u,))
            assert got == want, f"F={[f.to_str() for f in F]} u={u}: got {got} want {want}"


def test_monotone_under_extra_equation():
    order = VarOrder(["u", "x"])
    F = [P("x^2 - u", order)]
    cs1 = project_complex(F, [], 1, order)
    cs2 = project_complex(F + [P("x - 2", order)], [], 1, order)
    for u in (-2, -1, 0, 1, 4, 9):
        if cs2.membership((Fraction(u),)):
            assert cs1.membership((Fraction(u),))


# ----------------------------------------------------------------------
# real projection, one parameter


def test_real_projection_square():
    order = VarOrder(["u", "x"])
    S = SAS(order, equations=[P("x^2 - u", order)])
    region = project_real(S, 1, order)
    assert region.membership((Fraction(-1),)) is False
    assert region.membership((Fraction(0),)) is True
    assert region.membership((Fraction(1),)) is True
    assert region.membership((Fraction(4),)) is True
    assert region.membership((Fraction(-3),)) is False


def test_real_projection_no_unknowns():
    order = VarOrder(["u", "x"])
    S = SAS(order, positive=[P("u", order)])
    region = project_real(S, 1, order)
    assert region.membership((Fraction(2),)) is True
    assert region.membership((Fraction(-2),)) is False


def test_real_projection_in_cells_are_sound():
    order = VarOrder(["u", "x"])
    S = SAS(order, equations=[P("x^2 - u", order)])
    region = project_real(S, 1, order)
    for cell in region.cells:
        if cell["status"] == "in" and cell.get("sample_text"):
            v = region.decide_point((Fraction(cell["sample_text"]),))
            assert v.status == "nonempty"


# ----------------------------------------------------------------------
# real projection, three parameters (per-point decisions)


def test_quadratic_discriminant_grid():
    order = VarOrder(["a", "b", "c", "x"])
    S = SAS(
        order,
        equations=[P("a*x^2 + b*x + c", order)],
        nonzero=[P("a", order)],
    )
    region = project_real(S, 3, order)
    vals = [Fraction(-2), Fraction(-1), Fraction(0), Fraction(1), Fraction(2)]
    unknowns = 0
    for a in vals:
        for b in vals:
            for c in vals:
                got = region.membership((a, b, c))
                want = (b * b - 4 * a * c >= 0) and a != 0
                if got is None:
                    unknowns += 1
                    continue
                assert got == want, f"(a,b,c)=({a},{b},{c}): got {got} want {want}"
    assert unknowns == 0
