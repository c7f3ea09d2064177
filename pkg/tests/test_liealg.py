import random
from fractions import Fraction

import pytest

from lieiso.liealg import (
    GaussianRational,
    IsoVerdict,
    JacobiFailure,
    LieAlgebra,
    conjugate,
    gaussian_sqrt,
    invariant_prefilter,
    is_isomorphic_complex,
    is_isomorphic_real,
    iso_system,
    param_iso_complex,
    validate,
    verify_isomorphism,
)
from lieiso.polyring import parse_polynomial


# fixtures ------------------------------------------------------------


def example1_pair():
    L = LieAlgebra.from_table(3, {(1, 3): {1: 2, 2: 1}, (2, 3): {1: -1, 2: 2}}, name="L")
    M = LieAlgebra.from_table(3, {(1, 3): {1: 3, 2: 2}, (2, 3): {1: -1, 2: 1}}, name="Lprime")
    return L, M


def g4_8():
    return LieAlgebra.from_table(
        4, {(2, 3): {1: 1}, (2, 4): {2: 1}, (3, 4): {3: -1}}, name="g4_8"
    )


def g4_9():
    return LieAlgebra.from_table(
        4, {(2, 3): {1: 1}, (2, 4): {3: -1}, (3, 4): {2: 1}}, name="g4_9"
    )


def heisenberg():
    return LieAlgebra.from_table(3, {(1, 2): {3: 1}}, name="heis")


def abelian(n):
    return LieAlgebra.from_table(n, {}, name=f"abelian{n}")


def sl2():
    # [h,e] = 2e, [h,f] = -2f, [e,f] = h  with basis order (h, e, f)
    return LieAlgebra.from_table(
        3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}, name="sl2"
    )


# Gaussian rationals ---------------------------------------------------


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1, 0)
    assert (GaussianRational(1, 2) * GaussianRational(3, -1)) == GaussianRational(5, 5)
    assert (GaussianRational(1, 1) / GaussianRational(1, -1)) == GaussianRational(0, 1)


def test_gaussian_sqrt():
    assert gaussian_sqrt(GaussianRational(-1, 0)) == GaussianRational(0, 1)
    assert gaussian_sqrt(GaussianRational(Fraction(9, 4), 0)) == GaussianRational(Fraction(3, 2), 0)
    r = gaussian_sqrt(GaussianRational(0, 2))  # sqrt(2i) = 1 + i
    assert r is not None and r * r == GaussianRational(0, 2)
    assert gaussian_sqrt(GaussianRational(2, 0)) is None  # sqrt(2) not in Q(i)


# validation -----------------------------------------------------------


def test_validate_heisenberg():
    assert validate(heisenberg()) is True


def test_validate_g48():
    assert validate(g4_8()) is True


def test_validate_corrupt_g48():
    bad = LieAlgebra.from_table(4, {(2, 3): {1: 1}, (2, 4): {3: 1}, (3, 4): {3: -1}})
    with pytest.raises(JacobiFailure):
        validate(bad)


def test_validate_parametric():
    g59 = LieAlgebra.from_table(
        5,
        {(1, 5): {1: 1}, (2, 5): {1: 1, 2: 1}, (3, 5): {3: "beta"}, (4, 5): {4: "gamma"}},
        params=["beta", "gamma"],
    )
    assert validate(g59) is True


# system generation ----------------------------------------------------


def test_example1_system_has_nine_equations():
    L, M = example1_pair()
    sys = iso_system(L, M)
    assert len(sys.equations) == 9


def test_example1_equations_match_paper():
    L, M = example1_pair()
    sys = iso_system(L, M)
    o = sys.order
    paper = [
        "-z1_3 + 2*z2_3",
        "2*z1_3 + z2_3",
        "-3*z1_1*z2_3 + z1_2*z2_3 + 3*z1_3*z2_1 - z1_3*z2_2",
        "-2*z1_1*z2_3 - z1_2*z2_3 + 2*z1_3*z2_1 + z1_3*z2_2",
        "-3*z1_1*z3_3 + z1_2*z3_3 + 3*z1_3*z3_1 - z1_3*z3_2 + 2*z1_1 + z2_1",
        "-2*z1_1*z3_3 - z1_2*z3_3 + 2*z1_3*z3_1 + z1_3*z3_2 + 2*z1_2 + z2_2",
        "-3*z2_1*z3_3 + z2_2*z3_3 + 3*z2_3*z3_1 - z2_3*z3_2 - z1_1 + 2*z2_1",
        "-2*z2_1*z3_3 - z2_2*z3_3 + 2*z2_3*z3_1 + z2_3*z3_2 - z1_2 + 2*z2_2",
    ]
    want = {parse_polynomial(t, o).primitive().to_str() for t in paper}
    got = {e.primitive().to_str() for e in sys.bracket_equations}
    assert got == want


def test_abelian_self_system_is_det_only():
    A = abelian(3)
    sys = iso_system(A, A)
    assert sys.bracket_equations == []
    assert len(sys.equations) == 1


def test_g48_g49_system_count():
    sys = iso_system(g4_8(), g4_9())
    assert len(sys.equations) == 22  # 21 bracket equations plus the det equation


def test_g59_pair_system_count():
    def g59(params):
        b, g = params
        return LieAlgebra.from_table(
            5,
            {(1, 5): {1: 1}, (2, 5): {1: 1, 2: 1}, (3, 5): {3: b}, (4, 5): {4: g}},
            params=[b, g],
        )

    sys = iso_system(g59(("beta", "gamma")), g59(("delta", "sigma")))
    assert len(sys.equations) == 45


def test_system_size_bound():
    for L, M in [example1_pair(), (g4_8(), g4_9())]:
        sys = iso_system(L, M)
        n = L.n
        assert len(sys.equations) <= n * (n * (n - 1) // 2) + 1


# verification ---------------------------------------------------------


def test_paper_matrix_verifies_example1():
    L, M = example1_pair()
    matrix = [[-1, 1, 0], [-2, 0, 0], [0, 0, 1]]
    assert verify_isomorphism(L, M, matrix) is True


def test_identity_verifies_on_self():
    L, _ = example1_pair()
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert verify_isomorphism(L, L, eye) is True


def test_zero_matrix_fails():
    L, M = example1_pair()
    assert verify_isomorphism(L, M, [[0] * 3 for _ in range(3)]) is False


def test_paper_complex_matrix_verifies_g48_g49():
    i = GaussianRational(0, 1)
    matrix = [
        [2 * i, 0, 0, 0],
        [0, i, -i, 0],
        [0, 1, 1, 0],
        [0, 0, 0, i],
    ]
    assert verify_isomorphism(g4_8(), g4_9(), matrix) is True


# prefilter ------------------------------------------------------------


def test_prefilter_distinguishes_abelian_heisenberg():
    status, info = invariant_prefilter(abelian(3), heisenberg())
    assert status == "distinguished"
    assert info["left"]["center_dim"] == 3
    assert info["right"]["center_dim"] == 1


def test_prefilter_indistinguishable_g48_g49():
    status, _ = invariant_prefilter(g4_8(), g4_9())
    assert status == "indistinguishable"


def test_prefilter_self():
    L = sl2()
    status, _ = invariant_prefilter(L, L)
    assert status == "indistinguishable"


# decisions ------------------------------------------------------------


def test_example1_complex_isomorphic():
    L, M = example1_pair()
    v = is_isomorphic_complex(L, M)
    assert v.status == IsoVerdict.ISOMORPHIC
    assert v.matrix is not None and v.verified


def test_example1_real_isomorphic_with_witness():
    L, M = example1_pair()
    v = is_isomorphic_real(L, M)
    assert v.status == IsoVerdict.ISOMORPHIC
    assert v.verified
    assert v.matrix is not None
    if all(isinstance(x, (int, Fraction)) for row in v.matrix for x in row):
        assert verify_isomorphism(L, M, v.matrix)


def test_self_isomorphic():
    for L in (heisenberg(), sl2(), g4_8()):
        v = is_isomorphic_complex(L, L)
        assert v.status == IsoVerdict.ISOMORPHIC


def test_abelian_vs_heisenberg_not_isomorphic_real():
    v = is_isomorphic_real(abelian(3), heisenberg())
    assert v.status == IsoVerdict.NOT_ISOMORPHIC


def test_basis_change_invariance():
    rng = random.Random(5)
    L = sl2()
    P = [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
    P[0][0] += 5  # ensure invertibility with high probability
    try:
        K = conjugate(L, P)
    except ValueError:
        K = conjugate(L, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert validate(K) is True
    v = is_isomorphic_complex(L, K)
    assert v.status == IsoVerdict.ISOMORPHIC


def test_conjugate_abelian_stays_abelian():
    A = abelian(3)
    K = conjugate(A, [[1, 2, 0], [0, 1, 0], [1, 0, 1]])
    assert K.table == {}
