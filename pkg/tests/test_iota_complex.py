import pytest

from rootforge import errors
from rootforge.graded_root import MonotoneRoot, build_monotone, pure_stem
from rootforge.iota_complex import (
    FreeComplex,
    IotaComplex,
    UPoly,
    connected_sum_complex,
    dual,
    fu_homology,
    involutive_homology_via_root,
    involutive_invariants,
    mapping_cone,
    monotone_complex,
    s3_complex,
    standard_complex,
    verify_iota_complex,
)
from rootforge.lattice import graded_root_from_plumbing
from rootforge.plumbing import brieskorn_graph, self_conjugate_spinc


def sigma_2_7_15_root():
    T, _ = brieskorn_graph(2, 7, 15)
    (s,) = self_conjugate_spinc(T)
    return graded_root_from_plumbing(T, s)


def big_s3():
    return IotaComplex(["v", "w", "b"], [-2, -2, -1], {2: {0, 1}}, {0: {1}, 1: {0}, 2: {2}})


def index(C, name):
    return C.names.index(name)


def test_upoly_arithmetic():
    a = UPoly.monomial(2) + UPoly.monomial(0)
    assert a * a == UPoly.monomial(4) + UPoly.monomial(0)
    assert a + a == UPoly()
    assert not UPoly() and a.valuation() == 0 and a.degree() == 2
    assert UPoly.monomial(3).is_monomial()


def test_standard_complex_sigma_2_7_15():
    C = standard_complex(sigma_2_7_15_root())
    evens = sorted(g for x, g in zip(C.names, C.gradings) if x.startswith("v"))
    odds = sorted(g for x, g in zip(C.names, C.gradings) if x.startswith("a"))
    assert evens == [-8, -8, -4, -4, -2, -2]
    assert odds == [-9, -9, -5, -5, -5]
    assert verify_iota_complex(C).ok


def test_standard_complex_m_2_8():
    C = monotone_complex(MonotoneRoot.of(-2, -8))
    assert list(C.names) == ["v1", "v2", "a1"]
    assert list(C.gradings) == [-2, -2, -7]
    a = index(C, "a1")
    assert C.entry(0, a) == UPoly.monomial(3) and C.entry(1, a) == UPoly.monomial(3)
    assert C.iota[0] == {1} and C.iota[a] == {a}


def test_standard_complex_pure_stem():
    C = standard_complex(pure_stem(-2))
    assert C.n == 1 and list(C.gradings) == [-2] and not C.diff[0] and C.iota[0] == {0}


def test_standard_complex_doubles_invariant_leaf():
    C = monotone_complex(MonotoneRoot.of(4, -4, 0, 0))
    assert sorted(C.gradings[:4]) == [0, 0, 4, 4]
    assert C.n == 7
    # the angle between the two copies of the invariant leaf sits one above it
    mid = [j for j in range(4, 7) if C.iota[j] == {j}]
    assert len(mid) == 1 and C.gradings[mid[0]] == 1


def test_homogeneity_exponents():
    C = monotone_complex(MonotoneRoot.of(4, -8, 2, -4, 0, -2))
    C.check_homogeneous()
    for j in range(C.n):
        for i in C.diff[j]:
            assert C.diff_exponent(j, i) == (C.gradings[i] - C.gradings[j] + 1) / 2


def test_fu_homology_trivial():
    H = fu_homology(s3_complex())
    assert H.free == [-2] and H.torsion == []


def test_fu_homology_sigma_2_7_15():
    H = fu_homology(standard_complex(sigma_2_7_15_root()))
    free, torsion = H.summands()
    assert free == [-2]
    assert torsion == [(-2, 2), (-4, 1), (-4, 1), (-8, 1), (-8, 1)]
    assert [H.dim(g) for g in (-2, -4, -6, -8, -10, -12)] == [2, 4, 1, 3, 1, 1]


def test_fu_homology_hand_complex():
    C = FreeComplex(["a", "b", "c"], [3, -2, -2], {1: {0}, 2: {0}})
    assert C.entry(0, 1) == UPoly.monomial(3)
    H = fu_homology(C)
    assert H.free == [-2] and H.free_reps == [frozenset({1, 2})]
    assert H.torsion == [(3, 3)] and H.torsion_reps == [frozenset({0})]


def test_fu_homology_rejects_non_complex():
    C = FreeComplex(["x", "y", "z"], [0, 1, 2], {1: {0}, 2: {1}}, validate=False)
    with pytest.raises(errors.NotAComplex):
        fu_homology(C)


def test_verify_reports():
    assert verify_iota_complex(IotaComplex(["x"], [0], {}, {0: {0}})).ok
    bad = IotaComplex(["x", "y"], [0, 2], {}, {0: {1}, 1: {0}}, validate=False)
    rep = verify_iota_complex(bad)
    assert not rep.ok and rep.checks["iota_grading"] is False
    with pytest.raises(errors.GradingViolation):
        verify_iota_complex(bad, raise_on_failure=True)
    # iota that is not a chain map
    bad = IotaComplex(["v", "w", "b"], [-2, -2, -1], {2: {0, 1}}, {0: {0}, 1: {0}, 2: {2}}, validate=False)
    rep = verify_iota_complex(bad)
    assert rep.checks["iota_chain_map"] is False


def test_connected_sum_unit_law():
    A = monotone_complex(MonotoneRoot.of(4, -6, 0, -4))
    B = connected_sum_complex(A, s3_complex())
    assert B.gradings == A.gradings
    assert involutive_invariants(B) == involutive_invariants(A)


def test_connected_sum_generator_count():
    A = monotone_complex(MonotoneRoot.of(-2, -6))
    B = connected_sum_complex(A, A)
    assert B.n == 9 and B.gradings[index(B, "v1|v1")] == -2
    assert verify_iota_complex(B).ok
    C = connected_sum_complex(s3_complex(), s3_complex(), s3_complex())
    assert C.n == 1 and list(C.gradings) == [-2]


def test_dual_examples():
    S = dual(s3_complex())
    assert list(S.gradings) == [-2] and S.iota[0] == {0}
    D = dual(monotone_complex(MonotoneRoot.of(-2, -8)))
    assert list(D.gradings) == [-2, -2, 3]
    a = index(D, "a1*")
    for v in ("v1*", "v2*"):
        j = index(D, v)
        assert D.diff[j] == {a} and D.entry(a, j) == UPoly.monomial(3)
    assert verify_iota_complex(D).ok
    C = monotone_complex(MonotoneRoot.of(4, -8, 2, -4, 0, -2))
    DD = dual(dual(C))
    assert DD.gradings == C.gradings
    assert [DD.diff[j] for j in range(C.n)] == [set(C.diff[j]) for j in range(C.n)]
    assert [DD.iota[j] for j in range(C.n)] == [set(C.iota[j]) for j in range(C.n)]


def test_mapping_cone_s3():
    cone = mapping_cone(s3_complex())
    K = cone.complex
    assert list(K.gradings) == [-1, -2]
    assert not K.diff[0] and not K.diff[1]


def test_mapping_cone_big_s3():
    C = big_s3()
    cone = mapping_cone(C)
    K = cone.complex
    assert K.n == 6
    v_hat, w_hat, b_hat = cone.hat
    qv, qw, qb = cone.qcopy
    assert K.diff[b_hat] == {v_hat, w_hat}
    assert K.diff[v_hat] == {qv, qw} and K.diff[w_hat] == {qv, qw}
    assert K.diff[qb] == {qv, qw}
    K.check_square_zero()


def test_invariants_examples():
    assert involutive_invariants(s3_complex()).as_tuple() == (0, 0, 0)
    assert involutive_invariants(big_s3()).as_tuple() == (0, 0, 0)
    inv = involutive_invariants(standard_complex(sigma_2_7_15_root()))
    assert inv.as_tuple() == (-4, 0, 0)


def test_invariants_need_rank_one():
    C = IotaComplex(["x", "y"], [0, 0], {}, {0: {0}, 1: {1}})
    with pytest.raises(errors.LocalizedRankViolation):
        involutive_invariants(C)


def test_fast_path_sigma_2_7_15():
    R = sigma_2_7_15_root()
    fast = involutive_homology_via_root(R)
    cone = fu_homology(mapping_cone(standard_complex(R)).complex)
    assert fast.module.summands() == cone.summands()
    assert (fast.d_lower, fast.d_upper) == (-4, 0)
    assert fast.per_degree(-14) == cone.per_degree(-14, -1)


def test_fast_path_pure_stem():
    fast = involutive_homology_via_root(pure_stem(-2))
    assert fast.module.free == [-1, -2] and fast.module.torsion == []


def test_fast_path_m_4_6_0_4():
    R = build_monotone(MonotoneRoot.of(4, -6, 0, -4))
    fast = involutive_homology_via_root(R)
    inv = involutive_invariants(standard_complex(R))
    assert (fast.d_lower, fast.d_upper) == (inv.d_lower, inv.d_upper) == (-2, 6)
