"""Acceptance criteria, exact comparisons with wall-clock limits."""

from itertools import combinations_with_replacement

import pytest

import test_properties as props
from criteria_log import criterion
from rootforge.cli import Options, analyse_atom, parse_expression, run_invariants
from rootforge.connected_sum import SumSpec, independence_certificate, self_sum, sum_correction_terms
from rootforge.graded_root import MonotoneRoot, monotone_params
from rootforge.iota_complex import connected_sum_complex, involutive_invariants, monotone_complex, standard_complex
from test_graded_root import assemble

FAMILY = {}


def family_params(p):
    if p not in FAMILY:
        FAMILY[p] = analyse_atom(parse_expression(f"brieskorn({p},{2 * p - 1},{2 * p + 1})"), Options())["params"]
    return FAMILY[p]


def test_criterion_1_sigma_2_7_15():
    with criterion(1, limit=10):
        a = analyse_atom(parse_expression("brieskorn(2,7,15)"), Options(cross_check=True))
        R = a["root"]
        assert sorted(R.degrees[v] for v in R.leaves()) == [-8, -8, -4, -4, -2, -2]
        C = standard_complex(R)
        angles = sorted(g for x, g in zip(C.names, C.gradings) if x.startswith("a"))
        assert angles == [-9, -9, -5, -5, -5]
        assert R.top_degree == -2
        expected = assemble([-12, -10, -8, -6], [(-6, -2), (-6, -4), (-10, -8)])
        assert R.is_isomorphic(expected)
        assert (a["d"], a["mu_bar"], a["d_upper"], a["d_lower"]) == (0, 2, 0, -4)
        assert a["params"] == MonotoneRoot.of(-2, -6)


def test_criterion_2_e8():
    with criterion(2, limit=10):
        a = analyse_atom(parse_expression("brieskorn(2,3,5)"), Options(cross_check=True))
        R = a["root"]
        assert len(R.leaves()) == 1 and R.is_invariant(R.leaves()[0]) and R.top_degree == 0
        assert (a["d"], a["mu_bar"], a["d_lower"], a["d_upper"]) == (2, -1, 2, 2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_criterion_3_brieskorn_family(p):
    with criterion(f"3 [p={p}]", limit=300):
        doc = run_invariants(parse_expression(f"brieskorn({p},{2 * p - 1},{2 * p + 1})"))
        assert doc["d"] == str(p - 1) and doc["mu_bar"] == "0"
        assert doc["monotone"]["n"] == 1
        params = monotone_params(family_params(p))
        assert params.projective and params.d == (p - 1,) and params.mu_bar == (0,)


def test_criterion_4_mixed_sum():
    with criterion(4, limit=60):
        doc = run_invariants(parse_expression("sum(brieskorn(2,7,15), brieskorn(2,7,15), -brieskorn(2,11,23))"))
        assert doc["path"] == "engine"
        assert (doc["d_lower"], doc["d"], doc["d_upper"]) == ("-2", "0", "2")


def test_criterion_5_family_sums():
    with criterion(5):
        ps = {p: family_params(p) for p in (3, 5, 7)}
        checked = 0
        for size in (1, 2, 3):
            for combo in combinations_with_replacement((3, 5, 7), size):
                summands = [ps[p] for p in combo]
                formula = sum_correction_terms(SumSpec.of(*summands))
                C = [monotone_complex(P) for P in summands]
                engine = involutive_invariants(C[0] if size == 1 else connected_sum_complex(*C))
                assert formula == engine
                assert formula.d_upper - formula.d_lower == max(combo) - 1
                checked += 1
        assert checked == 19
        cert = independence_certificate([ps[3], ps[5], ps[7]], max_len=3)
        assert cert.holds and not cert.counterexamples


PROPERTY_TESTS = [
    props.test_standard_complex_is_iota_complex,
    props.test_sum_dual_and_cone_are_complexes,
    props.test_homology_matches_vertex_counts,
    props.test_complex_invariants_match_root,
    props.test_fast_path_matches_cone,
    props.test_monotone_round_trip,
    props.test_witness_maps_are_local,
    props.test_duality,
    props.test_d_additive,
    props.test_ordering_and_parity,
]


def test_criterion_6_property_suite():
    with criterion(6):
        for prop in PROPERTY_TESTS:
            assert prop.hypothesis.inner_test is not None
            assert props.PROPERTY.max_examples >= 200 and props.PROPERTY.derandomize
            prop()


def test_criterion_7_stabilization():
    with criterion(7):
        P = MonotoneRoot.of(-2, -6)
        for k in range(1, 7):
            r = self_sum(P, k)
            assert r.d_lower == -4 and r.threshold == 1
        C = monotone_complex(P)
        for k in range(1, 4):
            inv = involutive_invariants(C if k == 1 else connected_sum_complex(*([C] * k)))
            assert inv.d_lower == -4
